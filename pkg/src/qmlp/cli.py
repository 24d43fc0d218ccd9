"""Command-line surface: encode, compile, run, export-qasm, parse-qasm, train, eval.

Every command is deterministic given its flags and seed, and reports are
line-delimited JSON with sorted keys so outputs diff cleanly. Exit codes:
0 success, 2 usage (argparse), 3 file I/O, 4 data-format parse (IDX, QASM,
model JSON), 5 semantic validation, 1 unexpected failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

import numpy as np

from .compiler import compile_network, gate_count_report
from .mnist import IdxFormatError, filter_and_encode, load_dataset
from .model_io import ModelFormatError, read_model, write_model
from .oracle import classify, closed_form_network
from .qasm import QasmError, export_qasm, parse_qasm
from .sim import analyze, marginal_prob_one, run, sample_counts
from .trainer import local_search

EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_VALIDATION = 5


def _emit(record: dict, out) -> None:
    out.write(json.dumps(record, sort_keys=True) + "\n")


def _load_pairs(args) -> list[tuple[np.ndarray, int]]:
    dataset = load_dataset(args.images, args.labels)
    pairs = filter_and_encode(dataset, args.classes)
    if args.limit is not None:
        pairs = pairs[: args.limit]
    if not pairs:
        raise ValueError("no encodable images for the requested classes")
    return pairs


def _classes(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two digits, e.g. 3,6")
    a, b = (int(p) for p in parts)
    if not (0 <= a <= 9 and 0 <= b <= 9) or a == b:
        raise argparse.ArgumentTypeError("classes must be two distinct digits 0-9")
    return a, b


def _open_out(args):
    if args.out is None:
        return contextlib.nullcontext(sys.stdout)
    return open(args.out, "w")


def _final_counts(counts: dict[str, int], final_qubits) -> dict[str, int]:
    """Marginalize full bitstring counts onto the final qubits (high bit left)."""
    n = len(next(iter(counts)))
    out: dict[str, int] = {}
    for bits, count in counts.items():
        key = "".join(bits[n - 1 - q] for q in sorted(final_qubits, reverse=True))
        out[key] = out.get(key, 0) + count
    return out


def cmd_encode(args) -> int:
    pairs = _load_pairs(args)
    with _open_out(args) as out:
        for index, (values, label) in enumerate(pairs):
            _emit({"index": index, "label": label, "values": values.tolist()}, out)
    return 0


def cmd_compile(args) -> int:
    model = read_model(args.model)
    pairs = _load_pairs(args)
    with _open_out(args) as out:
        for index, (values, _) in enumerate(pairs):
            circuit = compile_network(values, model, prep=args.prep)
            _emit(
                {
                    "index": index,
                    "qubits": circuit.qubit_count,
                    "direct_init": circuit.init is not None,
                    "gate_counts": gate_count_report(circuit),
                    "total_gates": len(circuit.gates),
                },
                out,
            )
    return 0


def cmd_run(args) -> int:
    model = read_model(args.model)
    pairs = _load_pairs(args)
    correct = 0
    with _open_out(args) as out:
        for index, (values, label) in enumerate(pairs):
            circuit = compile_network(values, model, prep=args.prep)
            state = run(circuit)
            finals = circuit.layout.final_out
            exact = [marginal_prob_one(state, q) for q in finals]
            record = {
                "index": index,
                "true_label": label,
                "exact_probs": exact,
            }
            if args.shots > 0:
                counts = sample_counts(state, args.shots, args.seed + index)
                freqs = analyze(counts, circuit.qubit_count)
                shot_probs = [freqs[q] for q in finals]
                record["counts"] = _final_counts(counts, finals)
                record["shot_probs"] = shot_probs
                predicted = classify(shot_probs)
            else:
                predicted = classify(exact)
            record["predicted"] = predicted
            correct += predicted == label
            _emit(record, out)
        _emit(
            {
                "accuracy": correct / len(pairs),
                "correct": correct,
                "images": len(pairs),
                "mode": "shots" if args.shots > 0 else "exact",
            },
            out,
        )
    return 0


def cmd_eval(args) -> int:
    model = read_model(args.model)
    pairs = _load_pairs(args)
    correct = 0
    with _open_out(args) as out:
        for index, (values, label) in enumerate(pairs):
            probs = closed_form_network(values, model)
            predicted = classify(probs.final_output)
            correct += predicted == label
            _emit(
                {
                    "index": index,
                    "true_label": label,
                    "final_probs": list(probs.final_output),
                    "predicted": predicted,
                },
                out,
            )
        _emit(
            {
                "accuracy": correct / len(pairs),
                "correct": correct,
                "images": len(pairs),
                "mode": "closed-form",
            },
            out,
        )
    return 0


def cmd_export_qasm(args) -> int:
    model = read_model(args.model)
    pairs = _load_pairs(args)
    if not 0 <= args.index < len(pairs):
        raise ValueError(
            f"--index {args.index} out of range: {len(pairs)} encoded images"
        )
    values, _ = pairs[args.index]
    circuit = compile_network(values, model, prep="synth")
    text = export_qasm(circuit)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


def cmd_parse_qasm(args) -> int:
    circuit = parse_qasm(Path(args.path).read_text())
    _emit(
        {
            "qubits": circuit.qubit_count,
            "gates": len(circuit.gates),
            "gate_counts": gate_count_report(circuit),
        },
        sys.stdout,
    )
    return 0


def cmd_train(args) -> int:
    pairs = _load_pairs(args)
    result = local_search(
        pairs, seed=args.seed, max_iters=args.iters, restarts=args.restarts
    )
    if args.out is not None:
        write_model(result.model, args.out)
    _emit(
        {
            "train_accuracy": result.accuracy,
            "iterations": len(result.trace) - 1,
            "restart_seed": result.seed,
            "model_written": args.out,
        },
        sys.stdout,
    )
    return 0


def _add_data_flags(parser, with_labels: bool = True) -> None:
    parser.add_argument("--images", required=True, help="IDX image file (.gz ok)")
    parser.add_argument("--labels", required=with_labels, help="IDX label file")
    parser.add_argument(
        "--classes", type=_classes, default=(3, 6),
        help="digit pair mapped to outputs 0,1 (default 3,6)",
    )
    parser.add_argument("--limit", type=int, default=None, help="keep first N images")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmlp",
        description="compile binary-weight perceptrons to quantum circuits "
        "and run them on a statevector simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="pool, normalize and dump encoded inputs")
    _add_data_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("compile", help="compile circuits and report gate counts")
    _add_data_flags(p)
    p.add_argument("--model", required=True)
    p.add_argument("--prep", choices=("direct", "synth"), default="synth")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("run", help="simulate inference and classify")
    _add_data_flags(p)
    p.add_argument("--model", required=True)
    p.add_argument("--shots", type=int, default=0, help="samples per image; 0 = exact")
    p.add_argument(
        "--seed", type=int, default=0, help="sampling seed; image i uses seed + i"
    )
    p.add_argument("--prep", choices=("direct", "synth"), default="direct")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("eval", help="classify with the closed-form network only")
    _add_data_flags(p)
    p.add_argument("--model", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("export-qasm", help="emit one compiled circuit as QASM 2.0")
    _add_data_flags(p)
    p.add_argument("--model", required=True)
    p.add_argument("--index", type=int, default=0, help="which encoded image")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_export_qasm)

    p = sub.add_parser("parse-qasm", help="parse exported QASM and summarize")
    p.add_argument("path")
    p.set_defaults(fn=cmd_parse_qasm)

    p = sub.add_parser("train", help="hill-climb binary weights on a digit pair")
    _add_data_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--out", default=None, help="write the trained model here")
    p.set_defaults(fn=cmd_train)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (IdxFormatError, QasmError, ModelFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
