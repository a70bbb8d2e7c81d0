"""Line-oriented text format for circuits.

::

    QC 1 d=3 w=4
    reg b 0..1
    reg a 2..3
    #@ block qft
    H @ 2
    RK a=1/9 K=2 @ 3,2
    GCX m=2 j=0 k=1 @ 2,3

Angles are exact fractions of a full turn.  ``reg`` ranges are inclusive.
Lines starting with ``#@`` carry the circuit label and gate tags; every other
``#`` starts a comment.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .core import Circuit, CircuitError, GateSpec, Kind, QuditSystem

FORMAT_VERSION = 1
_HEADER = re.compile(r"^QC\s+(\d+)\s+d=(\d+)\s+w=(\d+)$")
_REG = re.compile(r"^reg\s+(\S+)\s+(\d+)\.\.(\d+)$")
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class CircuitFileError(CircuitError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _gate_line(g: GateSpec) -> str:
    parts = [g.kind.value]
    for name, value in zip("mn", g.controls):
        parts.append(f"{name}={value}")
    if g.levels is not None:
        parts += [f"j={g.levels[0]}", f"k={g.levels[1]}"]
    if g.angles:
        parts.append("a=" + ",".join(str(a) for a in g.angles))
    if g.k is not None:
        parts.append(f"K={g.k}")
    parts.append("@ " + ",".join(str(q) for q in g.qudits))
    return " ".join(parts)


def serialize(c: Circuit) -> str:
    c.validate()
    s = c.system
    lines = [f"QC {FORMAT_VERSION} d={s.d} w={s.w}"]
    if c.label:
        lines.append(f"#@ label {c.label}")
    lines += [f"reg {name} {start}..{end - 1}" for name, start, end in s.registers]
    tag = ""
    for g in c.gates:
        if g.tag != tag:
            lines.append(f"#@ block {g.tag}".rstrip())
            tag = g.tag
        lines.append(_gate_line(g))
    return "\n".join(lines) + "\n"


def _rational(text: str, line: int) -> Fraction:
    if not _RATIONAL.match(text):
        raise CircuitFileError(line, f"malformed rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise CircuitFileError(line, f"zero denominator in {text!r}") from None


def _int(text: str, key: str, line: int) -> int:
    if not re.fullmatch(r"\d+", text):
        raise CircuitFileError(line, f"{key} must be a non-negative integer, got {text!r}")
    return int(text)


def _parse_gate(body: str, line: int, tag: str) -> GateSpec:
    if "@" not in body:
        raise CircuitFileError(line, "missing '@ <qudits>'")
    head, _, targets = body.partition("@")
    fields = head.split()
    if not fields:
        raise CircuitFileError(line, "missing gate kind")
    try:
        kind = Kind(fields[0])
    except ValueError:
        raise CircuitFileError(line, f"unknown gate kind {fields[0]!r}") from None
    opts: dict[str, str] = {}
    for f in fields[1:]:
        key, eq, value = f.partition("=")
        if not eq or key not in ("j", "k", "m", "n", "a", "K"):
            raise CircuitFileError(line, f"unexpected field {f!r}")
        if key in opts:
            raise CircuitFileError(line, f"duplicate field {key!r}")
        opts[key] = value
    qudits = tuple(_int(t.strip(), "qudit index", line) for t in targets.split(","))
    levels = None
    if "j" in opts or "k" in opts:
        if not ("j" in opts and "k" in opts):
            raise CircuitFileError(line, "subspace needs both j= and k=")
        j, k = _int(opts["j"], "j", line), _int(opts["k"], "k", line)
        if j == k:
            raise CircuitFileError(line, f"subspace levels must differ, got j=k={j}")
        levels = (j, k)
    controls = tuple(_int(opts[key], key, line) for key in "mn" if key in opts)
    if "n" in opts and "m" not in opts:
        raise CircuitFileError(line, "n= given without m=")
    angles = tuple(_rational(a, line) for a in opts["a"].split(",")) if "a" in opts else ()
    k_param = _int(opts["K"], "K", line) if "K" in opts else None
    try:
        return GateSpec(kind, qudits, levels, controls, angles, k_param, tag)
    except (CircuitError, ValueError) as exc:
        raise CircuitFileError(line, str(exc)) from None


def parse(text: str) -> Circuit:
    system = None
    d = w = None
    regs: list[tuple[str, int, int]] = []
    gates: list[GateSpec] = []
    label, tag = "", ""
    header_line = 0
    for n, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("#@"):
            directive, _, arg = stripped[2:].strip().partition(" ")
            if directive == "label":
                label = arg.strip()
            elif directive == "block":
                tag = arg.strip()
            else:
                raise CircuitFileError(n, f"unknown directive {directive!r}")
            continue
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if d is None:
            m = _HEADER.match(body)
            if not m:
                raise CircuitFileError(n, "expected header 'QC 1 d=<d> w=<w>'")
            if int(m.group(1)) != FORMAT_VERSION:
                raise CircuitFileError(n, f"unsupported format version {m.group(1)}")
            d, w = int(m.group(2)), int(m.group(3))
            header_line = n
            continue
        m = _REG.match(body)
        if m:
            if system is not None:
                raise CircuitFileError(n, "register declarations must precede gates")
            name, start, end = m.group(1), int(m.group(2)), int(m.group(3))
            if any(r[0] == name for r in regs):
                raise CircuitFileError(n, f"duplicate register {name!r}")
            regs.append((name, start, end + 1))
            continue
        if system is None:
            system = _make_system(d, w, regs, header_line)
        g = _parse_gate(body, n, tag)
        try:
            g.validate(d, w)
        except CircuitError as exc:
            raise CircuitFileError(n, str(exc)) from None
        gates.append(g)
    if d is None:
        raise CircuitFileError(0, "empty input: missing header")
    if system is None:
        system = _make_system(d, w, regs, header_line)
    return Circuit(system, tuple(gates), label)


def _make_system(d: int, w: int, regs, line: int) -> QuditSystem:
    try:
        return QuditSystem(d, w, tuple(regs))
    except CircuitError as exc:
        raise CircuitFileError(line, str(exc)) from None


def write_circuit(c: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(c))


def read_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
