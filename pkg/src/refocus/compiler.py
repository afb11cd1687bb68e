"""Synthesis of refocussing sign matrices.

A sign matrix has one row per spin and one column per equal free-evolution
interval; an entry is the coherence sign of that spin during that interval.
A spin's chemical shift is refocused when its row sums to zero, and the
coupling between two spins is refocused when their rows are orthogonal.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import CapacityError, DimensionError, InvalidInputError, TargetError
from .graphmodel import Coloring, CouplingGraph, greedy_coloring
from .hadamard import MAX_ROUTED_ORDER, hadamard_of_order, smallest_admissible_order

MAX_CONVENTIONAL_SPINS = 16


@dataclass(frozen=True, eq=False)
class SignMatrix:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidInputError(f"sign matrix must be a non-empty 2-D array, got shape {arr.shape}")
        if not np.all((arr == 1) | (arr == -1)):
            raise InvalidInputError("sign matrix entries must be +1 or -1")
        if not np.all(arr[:, 0] == 1):
            raise InvalidInputError("every row of a sign matrix must start at +1")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def flips(self) -> np.ndarray:
        """Boolean (rows, cols-1) array; True where a row changes sign at boundary k+1."""
        return self.entries[:, 1:] != self.entries[:, :-1]

    def sign_changes(self) -> np.ndarray:
        return self.flips().sum(axis=1)

    def internal_pulses(self) -> int:
        return int(self.flips().sum())

    def max_simultaneous(self) -> int:
        if self.cols == 1:
            return 0
        return int(self.flips().sum(axis=0).max())

    def tolist(self) -> list[list[int]]:
        return self.entries.astype(int).tolist()

    def __eq__(self, other):
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))


@dataclass(frozen=True)
class RetainShift:
    spin: int


@dataclass(frozen=True)
class RetainCoupling:
    a: int
    b: int


@dataclass(frozen=True)
class RefocusAll:
    pass


TargetSpec = Union[RetainShift, RetainCoupling, RefocusAll]


def validate_target(g: CouplingGraph, target: TargetSpec) -> None:
    n = g.spin_count
    if isinstance(target, RetainShift):
        if not 0 <= target.spin < n:
            raise TargetError(f"retained spin index {target.spin} not in graph of {n} spins")
    elif isinstance(target, RetainCoupling):
        for s in (target.a, target.b):
            if not 0 <= s < n:
                raise TargetError(f"retained coupling names spin index {s} not in graph of {n} spins")
        if target.a == target.b:
            raise TargetError("retained coupling needs two distinct spins")
        if not g.has_edge(target.a, target.b):
            raise TargetError(
                f"retained coupling {g.names[target.a]}-{g.names[target.b]} is not an edge of the graph"
            )
    elif not isinstance(target, RefocusAll):
        raise TargetError(f"unknown target {target!r}")


def describe_target(g: CouplingGraph, target: TargetSpec) -> dict:
    if isinstance(target, RetainShift):
        return {"kind": "retain_shift", "spins": [g.names[target.spin]]}
    if isinstance(target, RetainCoupling):
        return {"kind": "retain_coupling", "spins": [g.names[target.a], g.names[target.b]]}
    return {"kind": "refocus_all", "spins": []}


class Objective(enum.Enum):
    TOTAL_PULSES = "total-pulses"
    MAX_SIMULTANEOUS = "max-simultaneous"


@dataclass(frozen=True)
class CompileOptions:
    objective: Objective = Objective.TOTAL_PULSES
    exhaustive_row_search_limit: int = 100_000

    def __post_init__(self):
        if self.exhaustive_row_search_limit < 1:
            raise InvalidInputError("exhaustive_row_search_limit must be >= 1")


@dataclass(frozen=True)
class Compilation:
    matrix: SignMatrix
    coloring: Coloring
    hadamard_order: int
    color_rows: tuple[int, ...]
    search: str

    def spin_rows(self) -> list[int]:
        return [self.color_rows[c] for c in self.coloring.assignment]


def conventional_nested(n_spins: int) -> SignMatrix:
    """Recursively nested echo sequence: 2**(n-1) intervals."""
    if not 1 <= n_spins <= MAX_CONVENTIONAL_SPINS:
        raise InvalidInputError(f"conventional nesting supports 1..{MAX_CONVENTIONAL_SPINS} spins, got {n_spins}")
    cols = 2 ** (n_spins - 1)
    out = np.ones((n_spins, cols), dtype=np.int8)
    c = np.arange(cols)
    for i in range(1, n_spins):
        step = cols >> i
        # boundaries at odd multiples of step; count those <= c
        passed = (c // step + 1) // 2
        out[i] = np.where(passed % 2 == 0, 1, -1)
    return SignMatrix(out)


def _required_order(target: TargetSpec, n_colors: int) -> int:
    need = n_colors if isinstance(target, RetainShift) else n_colors + 1
    order = smallest_admissible_order(need)
    if order is None:
        raise CapacityError(
            f"sequence needs a Hadamard matrix of order >= {need}; largest supported order is {MAX_ROUTED_ORDER}"
        )
    return order


def _peak(rows, sizes, flips) -> int:
    if flips.shape[1] == 0:
        return 0
    return int(np.max(sum(s * flips[r] for r, s in zip(rows, sizes))))


def assign_rows(
    sizes: Sequence[int],
    eligible: Sequence[int],
    h: np.ndarray,
    opts: CompileOptions,
) -> tuple[tuple[int, ...], str]:
    """Pick one distinct eligible Hadamard row per color group.

    Returns the chosen rows (in color order) and ``"exhaustive"`` or
    ``"greedy"``.
    """
    k = len(sizes)
    if k == 0:
        return (), "exhaustive"
    if k > len(eligible):
        raise CapacityError(f"{k} color groups but only {len(eligible)} eligible rows")
    flips = (h[:, 1:] != h[:, :-1]).astype(np.int64)
    changes = flips.sum(axis=1)
    candidates = math.perm(len(eligible), k)
    if candidates <= opts.exhaustive_row_search_limit:
        changes_l = [int(x) for x in changes]
        best = None
        for rows in itertools.permutations(sorted(eligible), k):
            total = sum(s * changes_l[r] for r, s in zip(rows, sizes))
            if opts.objective is Objective.TOTAL_PULSES:
                if best is not None and total > best[0]:
                    continue
                key = (total, _peak(rows, sizes, flips), rows)
            else:
                key = (_peak(rows, sizes, flips), total, rows)
            if best is None or key < best:
                best = key
        return best[2], "exhaustive"
    by_cost = sorted(eligible, key=lambda r: (changes[r], r))
    by_size = sorted(range(k), key=lambda c: (-sizes[c], c))
    rows = [0] * k
    for c, r in zip(by_size, by_cost):
        rows[c] = r
    return tuple(rows), "greedy"


def compile_detailed(
    g: CouplingGraph, target: TargetSpec, opts: CompileOptions | None = None
) -> Compilation:
    opts = opts or CompileOptions()
    validate_target(g, target)
    graph = g
    if isinstance(target, RetainShift):
        pinned = [[target.spin]]
    elif isinstance(target, RetainCoupling):
        graph = g.without_edge(target.a, target.b)
        pinned = [[target.a, target.b]]
    else:
        pinned = []
    coloring = greedy_coloring(graph, pinned)
    n_colors = coloring.color_count
    order = _required_order(target, n_colors)
    h = hadamard_of_order(order).entries
    groups = coloring.groups()
    sizes = [len(grp) for grp in groups]
    eligible = list(range(1, order))

    if isinstance(target, RetainShift):
        chosen, how = assign_rows(sizes[1:], eligible, h, opts)
        color_rows = (0,) + chosen
    else:
        color_rows, how = assign_rows(sizes, eligible, h, opts)

    spin_rows = [color_rows[c] for c in coloring.assignment]
    matrix = SignMatrix(h[spin_rows])
    return Compilation(matrix, coloring, order, tuple(color_rows), how)


def compile(g: CouplingGraph, target: TargetSpec, opts: CompileOptions | None = None) -> SignMatrix:
    return compile_detailed(g, target, opts).matrix


@dataclass(frozen=True)
class InteractionStatus:
    spins: tuple[int, ...]
    value: int
    status: str
    expected: str | None

    @property
    def ok(self) -> bool:
        return self.expected is None or self.status == self.expected


@dataclass(frozen=True)
class VerificationReport:
    names: tuple[str, ...]
    intervals: int
    shifts: tuple[InteractionStatus, ...]
    couplings: tuple[InteractionStatus, ...]
    non_edges: tuple[InteractionStatus, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(s.ok for s in self.shifts) and all(c.ok for c in self.couplings)

    def failures(self) -> list[str]:
        out = []
        for s in self.shifts:
            if not s.ok:
                out.append(f"shift {self.names[s.spins[0]]}: {s.status} (expected {s.expected})")
        for c in self.couplings:
            if not c.ok:
                a, b = (self.names[i] for i in c.spins)
                out.append(f"coupling {a}-{b}: {c.status} (expected {c.expected})")
        return out

    def to_dict(self) -> dict:
        def entry(s: InteractionStatus, key: str) -> dict:
            d = {"spins": [self.names[i] for i in s.spins], key: s.value, "status": s.status}
            if s.expected is not None:
                d["expected"] = s.expected
                d["ok"] = s.ok
            return d

        return {
            "passed": self.passed,
            "intervals": self.intervals,
            "shifts": [entry(s, "row_sum") for s in self.shifts],
            "couplings": [entry(c, "dot") for c in self.couplings],
            "non_edges": [entry(c, "dot") for c in self.non_edges],
            "failures": self.failures(),
        }


def _classify(value: int, cols: int) -> str:
    if value == 0:
        return "refocused"
    if value == cols:
        return "retained"
    return "partial"


def verify_combinatorial(m: SignMatrix, g: CouplingGraph, target: TargetSpec) -> VerificationReport:
    if m.rows != g.spin_count:
        raise DimensionError(f"sign matrix has {m.rows} rows but graph has {g.spin_count} spins")
    validate_target(g, target)
    a = m.entries.astype(np.int64)
    cols = m.cols
    sums = a.sum(axis=1)
    gram = a @ a.T
    keep_shift = {target.spin} if isinstance(target, RetainShift) else set()
    keep_edge = {(min(target.a, target.b), max(target.a, target.b))} if isinstance(target, RetainCoupling) else set()

    shifts = tuple(
        InteractionStatus(
            (i,), int(sums[i]), _classify(int(sums[i]), cols), "retained" if i in keep_shift else "refocused"
        )
        for i in range(m.rows)
    )
    couplings = []
    non_edges = []
    for i in range(m.rows):
        for j in range(i + 1, m.rows):
            v = int(gram[i, j])
            if g.has_edge(i, j):
                expected = "retained" if (i, j) in keep_edge else "refocused"
                couplings.append(InteractionStatus((i, j), v, _classify(v, cols), expected))
            else:
                non_edges.append(InteractionStatus((i, j), v, _classify(v, cols), None))
    return VerificationReport(g.names, cols, shifts, tuple(couplings), tuple(non_edges))


def conventional_baseline(g: CouplingGraph, target: TargetSpec) -> SignMatrix:
    """Nested-echo sequence for the same target, treating ``g`` as fully coupled."""
    validate_target(g, target)
    n = g.spin_count
    if isinstance(target, RefocusAll):
        return SignMatrix(conventional_nested(n + 1).entries[1:])
    base = conventional_nested(n).entries
    if isinstance(target, RetainShift):
        others = iter(range(1, n))
        rows = [0 if s == target.spin else next(others) for s in range(n)]
    else:
        others = iter(range(2, n))
        rows = [1 if s in (target.a, target.b) else next(others) for s in range(n)]
    return SignMatrix(base[rows])


@dataclass(frozen=True)
class ComparisonReport:
    efficient_intervals: int
    efficient_pulses: int
    conventional_intervals: int
    conventional_pulses: int

    @property
    def interval_ratio(self) -> float:
        return self.conventional_intervals / self.efficient_intervals

    @property
    def pulse_ratio(self) -> float | None:
        if self.efficient_pulses == 0:
            return None
        return self.conventional_pulses / self.efficient_pulses

    def to_dict(self) -> dict:
        return {
            "efficient": {"intervals": self.efficient_intervals, "pulses": self.efficient_pulses},
            "conventional": {"intervals": self.conventional_intervals, "pulses": self.conventional_pulses},
            "interval_ratio": self.interval_ratio,
            "pulse_ratio": self.pulse_ratio,
        }


def efficiency_report(
    g: CouplingGraph, target: TargetSpec, opts: CompileOptions | None = None
) -> ComparisonReport:
    eff = compile(g, target, opts)
    conv = conventional_baseline(g, target)
    return ComparisonReport(eff.cols, eff.internal_pulses(), conv.cols, conv.internal_pulses())
