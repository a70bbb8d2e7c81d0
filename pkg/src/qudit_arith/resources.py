"""Gate counts, depth scheduling and complexity fits."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import Circuit, CircuitError, GateSpec, Kind
from .synthesis import decompose, expand_circuit

ZERO_COST = frozenset({Kind.RELABEL})
BACKTRACK_NODES = 200_000
BACKTRACK_MAX_RUN = 400


@lru_cache(maxsize=None)
def _kind_cost(kind: Kind, d: int, example: GateSpec) -> tuple[tuple[str, int], ...]:
    return tuple(sorted(decompose(example, d).counts().items()))


def gate_cost(g: GateSpec, d: int) -> Counter:
    """Elementary gates (by kind) in the expansion of ``g``.

    Decompositions have the same shape for every parameter value of a kind,
    so the first gate seen of each kind stands for all of them.
    """
    if g.kind in ZERO_COST:
        return Counter()
    example = _KIND_EXAMPLES.setdefault((g.kind, d), g.on(*range(len(g.qudits))))
    return Counter(dict(_kind_cost(g.kind, d, example)))


_KIND_EXAMPLES: dict[tuple[Kind, int], GateSpec] = {}


@dataclass
class ResourceReport:
    label: str
    d: int
    width: int
    basic: dict[str, int]
    elementary: dict[str, int]
    depth_basic: int
    depth_elementary: int | None = None
    breakdown: dict[str, dict[str, int]] = field(default_factory=dict)

    @property
    def phase(self) -> int:
        return self.elementary.get(Kind.PH.value, 0)

    @property
    def cost(self) -> int:
        """Elementary gate count, phase gates excluded."""
        return sum(self.elementary.values()) - self.phase

    @property
    def basic_total(self) -> int:
        return sum(v for k, v in self.basic.items() if k != Kind.RELABEL.value)

    def as_dict(self) -> dict:
        return {"label": self.label, "d": self.d, "width": self.width, "basic": self.basic,
                "elementary": self.elementary, "cost": self.cost, "phase": self.phase,
                "depth_basic": self.depth_basic, "depth_elementary": self.depth_elementary,
                "breakdown": self.breakdown}


def count_elementary(c: Circuit, depth: bool = True, elementary_depth: bool = False) -> ResourceReport:
    """Basic and elementary gate counts; ``depth=False`` skips scheduling."""
    d = c.system.d
    basic: Counter = Counter()
    elem: Counter = Counter()
    breakdown: dict[str, Counter] = {}
    for g in c.gates:
        basic[g.kind.value] += 1
        elem.update(gate_cost(g, d))
        breakdown.setdefault(g.tag or "-", Counter())[g.kind.value] += 1
    report = ResourceReport(c.label, d, c.system.w, dict(sorted(basic.items())), dict(sorted(elem.items())),
                            schedule_depth(c, "basic") if depth else 0,
                            breakdown={k: dict(sorted(v.items())) for k, v in sorted(breakdown.items())})
    if elementary_depth:
        report.depth_elementary = schedule_depth(c, "elementary")
    return report


class _Slots:
    """Per-qudit occupancy of layers, with the last non-diagonal layer as a barrier."""

    def __init__(self, w: int):
        self.used: list[set[int]] = [set() for _ in range(w)]
        self.top = [0] * w
        self.barrier = [0] * w

    def free(self, qudits: Sequence[int], layer: int) -> bool:
        return all(layer not in self.used[q] for q in qudits)

    def lower(self, qudits: Sequence[int]) -> int:
        return max(self.barrier[q] for q in qudits) + 1

    def relabel(self, qudits: Sequence[int]) -> int:
        """A zero-cost relabeling: no layer of its own, but nothing may move across it."""
        layer = max(self.top[q] for q in qudits)
        for q in qudits:
            self.top[q] = self.barrier[q] = layer
        return layer

    def put(self, qudits: Sequence[int], layer: int, diagonal: bool) -> None:
        for q in qudits:
            self.used[q].add(layer)
            self.top[q] = max(self.top[q], layer)
            if not diagonal:
                self.barrier[q] = layer


def _first_fit(run: list[GateSpec], slots: _Slots, order: Iterable[int]) -> dict[int, int]:
    taken: dict[int, set[int]] = {}
    out = {}
    for i in order:
        g = run[i]
        layer = slots.lower(g.qudits)
        while not slots.free(g.qudits, layer) or any(layer in taken.get(q, ()) for q in g.qudits):
            layer += 1
        out[i] = layer
        for q in g.qudits:
            taken.setdefault(q, set()).add(layer)
    return out


def _run_lower_bound(run: list[GateSpec], slots: _Slots) -> int:
    need: Counter = Counter(q for g in run for q in g.qudits)
    bound = max(slots.lower(g.qudits) for g in run)
    for q, n in need.items():
        layer, seen = slots.barrier[q], 0
        while seen < n:
            layer += 1
            if layer not in slots.used[q]:
                seen += 1
        bound = max(bound, layer)
    return bound


def _fit_within(run: list[GateSpec], slots: _Slots, limit: int, budget: list[int]) -> dict[int, int] | None:
    """Backtracking list colouring of a commuting run into layers ``<= limit``."""
    conflicts = [set() for _ in run]
    by_qudit: dict[int, list[int]] = {}
    for i, g in enumerate(run):
        for q in g.qudits:
            by_qudit.setdefault(q, []).append(i)
    for members in by_qudit.values():
        for i in members:
            conflicts[i].update(j for j in members if j != i)
    options = [[layer for layer in range(slots.lower(g.qudits), limit + 1) if slots.free(g.qudits, layer)]
               for g in run]
    if any(not o for o in options):
        return None
    assign: dict[int, int] = {}

    def pick() -> int:
        best, best_key = -1, None
        for i in range(len(run)):
            if i in assign:
                continue
            blocked = {assign[j] for j in conflicts[i] if j in assign}
            n_left = sum(1 for layer in options[i] if layer not in blocked)
            key = (n_left, -len(conflicts[i]))
            if best_key is None or key < best_key:
                best, best_key = i, key
        return best

    def search() -> bool:
        if len(assign) == len(run):
            return True
        budget[0] -= 1
        if budget[0] < 0:
            return False
        i = pick()
        blocked = {assign[j] for j in conflicts[i] if j in assign}
        for layer in options[i]:
            if layer in blocked:
                continue
            assign[i] = layer
            if search():
                return True
            del assign[i]
        return False

    return dict(assign) if search() else None


def _place_run(run: list[GateSpec], slots: _Slots) -> dict[int, int]:
    idx = range(len(run))
    degree = Counter(q for g in run for q in g.qudits)
    candidates = [
        _first_fit(run, slots, idx),
        _first_fit(run, slots, sorted(idx, key=lambda i: -sum(degree[q] for q in run[i].qudits))),
    ]
    best = min(candidates, key=lambda a: max(a.values()))
    depth = max(best.values())
    if len(run) > BACKTRACK_MAX_RUN:
        return best
    bound = _run_lower_bound(run, slots)
    budget = [BACKTRACK_NODES]
    for limit in range(bound, depth):
        found = _fit_within(run, slots, limit, budget)
        if found is not None:
            best = found
            break
        if budget[0] < 0:
            break
    return best


def schedule(c: Circuit) -> list[int]:
    """Layer (from 1) of each gate.

    Zero-cost relabelings share the latest layer on their qudits, so they add
    no depth but still order the gates around them.

    Non-diagonal gates go right after every earlier gate sharing a qudit.
    Maximal runs of consecutive diagonal gates commute among themselves, so
    each run is list-coloured into the free layers after the last
    non-diagonal gate on its qudits.
    """
    slots = _Slots(c.system.w)
    layers = [0] * len(c.gates)
    gates = list(c.gates)
    i = 0
    while i < len(gates):
        g = gates[i]
        if g.kind in ZERO_COST:
            layers[i] = slots.relabel(g.qudits)
            i += 1
            continue
        if not g.is_diagonal:
            layer = max(slots.top[q] for q in g.qudits) + 1
            slots.put(g.qudits, layer, False)
            layers[i] = layer
            i += 1
            continue
        j = i
        while j < len(gates) and gates[j].is_diagonal and gates[j].kind not in ZERO_COST:
            j += 1
        run = gates[i:j]
        placed = _place_run(run, slots)
        for r, layer in sorted(placed.items()):
            slots.put(run[r].qudits, layer, True)
            layers[i + r] = layer
        i = j
    return layers


def scheduled_circuit(c: Circuit) -> Circuit:
    """Gates reordered by layer; equal to ``c`` as a unitary."""
    layers = schedule(c)
    order = sorted(range(len(c.gates)), key=lambda i: (layers[i], i))
    return c.with_gates(c.gates[i] for i in order)


def schedule_depth(c: Circuit, level: str = "basic") -> int:
    if level == "elementary":
        c = expand_circuit(c)[0]
    elif level != "basic":
        raise CircuitError(f"level must be 'basic' or 'elementary', got {level!r}")
    layers = schedule(c)
    return max(layers, default=0)


@dataclass(frozen=True)
class Fit:
    exponent: float
    residual: float
    qs: tuple[int, ...]
    values: tuple[float, ...]


def fit_exponent(qs: Sequence[int], values: Sequence[float]) -> Fit:
    """Least-squares slope of ``log(value)`` against ``log(q)``."""
    if len(qs) < 4:
        raise CircuitError(f"need at least 4 samples for a fit, got {len(qs)}")
    x, y = np.log(np.asarray(qs, float)), np.log(np.asarray(values, float))
    coef, res, *_ = np.polyfit(x, y, 1, full=True)
    return Fit(float(coef[0]), float(np.sqrt(res[0] / len(qs))) if len(res) else 0.0, tuple(qs), tuple(values))


def _metric(block, metric: str) -> float:
    c = block.circuit
    if metric == "cost":
        return count_elementary(c, depth=False).cost
    if metric == "basic":
        return count_elementary(c, depth=False).basic_total
    if metric == "depth":
        return schedule_depth(c, "basic")
    if metric == "depth_elementary":
        return schedule_depth(c, "elementary")
    raise CircuitError(f"unknown metric {metric!r}")


def asymptotic_fit(kind: str, d: int, qs: Sequence[int], metric: str = "cost",
                   builder: Callable | None = None) -> Fit:
    """Fitted exponent of a block's ``metric`` against ``q`` at fixed ``d``."""
    from .circuits import BUILDERS
    build = builder or (lambda q: default_block(kind, d, q))
    if builder is None and kind not in BUILDERS:
        raise CircuitError(f"unknown block kind {kind!r}")
    return fit_exponent(list(qs), [_metric(build(q), metric) for q in qs])


def default_block(kind: str, d: int, q: int, sandwich: bool = True):
    """The block with generic constants (all-ones digits), as used for resource studies."""
    from .circuits import BUILDERS
    b = (d ** q - 1) // (d - 1)  # 11...1 in base d, invertible modulo d^q
    if kind == "qft":
        return BUILDERS[kind](d, q)
    if kind in ("add", "mmac"):
        return BUILDERS[kind](d, q, sandwich)
    if kind == "caddc":
        return BUILDERS[kind](d, q, 1, b, sandwich)
    if kind in ("addc", "gcaddc", "mac"):
        return BUILDERS[kind](d, q, b, sandwich)
    if kind == "mulc":
        return BUILDERS[kind](d, q, b)
    if kind in ("smac", "diag"):
        return BUILDERS[kind](d, q, 1)
    raise CircuitError(f"unknown block kind {kind!r}")


# leading-order cost, depth and width formulas per block
TABLE1 = {
    "qft": ("4d^2 q^2", "2d^2 q", "q"),
    "add": ("4d^2 q^2", "4d^2 q", "2q"),
    "mac": ("4d^3 q^2", "4d^2 q", "2q"),
    "mulc": ("8d^3 q^2", "8d^2 q", "2q"),
    "mmac": ("7d^3 q^3", "21d^3 q^2", "3q"),
    "smac": ("14d^3 q^3", "42d^3 q^2", "4q"),
    "diag": ("14d^3 q^3", "42d^3 q^2", "4q"),
}
TABLE1_WIDTH = {"qft": 1, "add": 2, "mac": 2, "mulc": 2, "mmac": 3, "smac": 4, "diag": 4}


def table1_rows(d: int, qs: Iterable[int], kinds: Sequence[str] = tuple(TABLE1), depth: bool = True) -> list[dict]:
    rows = []
    for kind in kinds:
        for q in qs:
            block = default_block(kind, d, q)
            rep = count_elementary(block.circuit, depth=depth)
            cost_f, depth_f, width_f = TABLE1[kind]
            rows.append({"block": kind, "d": d, "q": q, "cost": rep.cost, "phase": rep.phase,
                         "basic": rep.basic_total, "depth_basic": rep.depth_basic, "width": rep.width,
                         "width_expected": TABLE1_WIDTH[kind] * q,
                         "cost_leading": cost_f, "depth_leading": depth_f, "width_formula": width_f})
    return rows
