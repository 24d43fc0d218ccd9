"""OpenQASM 2.0 text for compiled circuits, and a parser for that subset.

The exported dialect is one quantum register plus the gates {x, h, z, ry,
cx, cz, ccx}; RY angles are printed with repr so floats round-trip exactly.
Stage annotations are carried in ``// stage:`` comments (``-`` clears the
stage), which the parser restores, so parse(export(c)) reproduces the
circuit gate for gate. Circuits with a direct amplitude init block have no
QASM form and are rejected.
"""
from __future__ import annotations

import re

from .sim import GATE_ARITY, Circuit, Gate

HEADER = "OPENQASM 2.0;"
INCLUDE = 'include "qelib1.inc";'


class QasmError(ValueError):
    """Unparseable QASM text; carries the 1-based source line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def export_qasm(circuit: Circuit) -> str:
    """Deterministic QASM 2.0 text for a gate-only circuit."""
    if circuit.init is not None:
        raise ValueError(
            "circuit carries a direct amplitude init block, which has no QASM "
            "form; compile with gate-synthesized preparation instead"
        )
    lines = [HEADER, INCLUDE, f"qreg q[{circuit.qubit_count}];"]
    stage: str | None = None
    for gate in circuit.gates:
        if gate.stage != stage:
            stage = gate.stage
            lines.append(f"// stage: {stage if stage is not None else '-'}")
        operands = ", ".join(f"q[{q}]" for q in gate.qubits)
        if gate.kind == "ry":
            lines.append(f"ry({gate.angle!r}) {operands};")
        else:
            lines.append(f"{gate.kind} {operands};")
    return "\n".join(lines) + "\n"


_QREG_RE = re.compile(r"^qreg\s+(?P<name>[a-zA-Z_]\w*)\s*\[\s*(?P<size>\d+)\s*\]$")
_GATE_RE = re.compile(
    r"^(?P<kind>[a-zA-Z_]\w*)\s*(?:\(\s*(?P<angle>[^()]*)\s*\))?\s+(?P<operands>.+)$"
)
_OPERAND_RE = re.compile(r"^(?P<name>[a-zA-Z_]\w*)\s*\[\s*(?P<index>\d+)\s*\]$")
_STAGE_RE = re.compile(r"^//\s*stage:\s*(?P<stage>\S+)\s*$")


def parse_qasm(text: str) -> Circuit:
    """Parse the exporter's dialect back into a Circuit."""
    register: tuple[str, int] | None = None
    gates: list[Gate] = []
    stage: str | None = None
    saw_header = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("//"):
            match = _STAGE_RE.match(line)
            if match:
                stage = None if match.group("stage") == "-" else match.group("stage")
            continue
        if not line.endswith(";"):
            raise QasmError(lineno, f"missing ';' at end of statement: {line!r}")
        stmt = line[:-1].strip()

        if not saw_header:
            if stmt != "OPENQASM 2.0":
                raise QasmError(lineno, "missing version header 'OPENQASM 2.0;'")
            saw_header = True
            continue
        if stmt.startswith("include"):
            if stmt != 'include "qelib1.inc"':
                raise QasmError(lineno, f"unsupported include: {stmt!r}")
            continue
        if stmt.startswith("qreg"):
            match = _QREG_RE.match(stmt)
            if not match:
                raise QasmError(lineno, f"malformed qreg declaration: {stmt!r}")
            if register is not None:
                raise QasmError(lineno, "only a single qreg is supported")
            size = int(match.group("size"))
            if size < 1:
                raise QasmError(lineno, "qreg must have at least 1 qubit")
            register = (match.group("name"), size)
            continue

        match = _GATE_RE.match(stmt)
        if not match:
            raise QasmError(lineno, f"unparseable statement: {stmt!r}")
        kind = match.group("kind")
        if kind not in GATE_ARITY:
            raise QasmError(lineno, f"unsupported gate {kind!r}")
        if register is None:
            raise QasmError(lineno, "gate before qreg declaration")

        angle = None
        if match.group("angle") is not None:
            if kind != "ry":
                raise QasmError(lineno, f"gate {kind!r} takes no parameter")
            try:
                angle = float(match.group("angle"))
            except ValueError:
                raise QasmError(
                    lineno, f"bad angle {match.group('angle')!r}"
                ) from None
        elif kind == "ry":
            raise QasmError(lineno, "ry requires an angle parameter")

        qubits = []
        for part in match.group("operands").split(","):
            op = _OPERAND_RE.match(part.strip())
            if not op:
                raise QasmError(lineno, f"malformed operand {part.strip()!r}")
            if op.group("name") != register[0]:
                raise QasmError(lineno, f"unknown register {op.group('name')!r}")
            index = int(op.group("index"))
            if index >= register[1]:
                raise QasmError(
                    lineno,
                    f"qubit index {index} out of range for qreg of size {register[1]}",
                )
            qubits.append(index)
        try:
            gates.append(Gate(kind, tuple(qubits), angle=angle, stage=stage))
        except ValueError as exc:
            raise QasmError(lineno, str(exc)) from None

    if not saw_header:
        raise QasmError(1, "missing version header 'OPENQASM 2.0;'")
    if register is None:
        raise QasmError(1, "missing qreg declaration")
    return Circuit(qubit_count=register[1], gates=gates)
