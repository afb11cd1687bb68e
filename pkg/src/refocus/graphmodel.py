"""Coupling graphs and proper colorings with pinned vertex groups."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GraphError, InvalidPinError

MAX_SPINS = 64
EXACT_COLORING_LIMIT = 12


@dataclass(frozen=True)
class CouplingGraph:
    names: tuple[str, ...]
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if not 1 <= len(names) <= MAX_SPINS:
            raise GraphError(f"spin count must be in 1..{MAX_SPINS}, got {len(names)}")
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise GraphError(f"duplicate spin names: {dup}")
        norm = set()
        for i, j in self.edges:
            if not (0 <= i < len(names) and 0 <= j < len(names)):
                raise GraphError(f"edge ({i}, {j}) references a missing spin")
            if i == j:
                raise GraphError(f"self-loop on spin {names[i]!r}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def complete(cls, n: int, names: Sequence[str] | None = None) -> CouplingGraph:
        names = names or [str(i) for i in range(n)]
        return cls(tuple(names), frozenset((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def path(cls, n: int) -> CouplingGraph:
        return cls(tuple(str(i) for i in range(n)), frozenset((i, i + 1) for i in range(n - 1)))

    @classmethod
    def edgeless(cls, n: int) -> CouplingGraph:
        return cls(tuple(str(i) for i in range(n)))

    @property
    def spin_count(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GraphError(f"unknown spin {name!r}") from None

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.names]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degrees(self) -> list[int]:
        return [len(a) for a in self.neighbors()]

    def without_edge(self, i: int, j: int) -> CouplingGraph:
        return CouplingGraph(self.names, self.edges - {(min(i, j), max(i, j))})


def parse_graph(document: str | bytes | dict) -> CouplingGraph:
    """Build a graph from the JSON input format.

    ``{"spins": [...], "couplings": [[a, b], ...]}``; optional ``shifts`` and
    ``j`` blocks are accepted and left for the simulator front end.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed graph document: {exc}") from None
    if not isinstance(document, dict):
        raise GraphError("graph document must be a JSON object")
    extra = set(document) - {"spins", "couplings", "shifts", "j"}
    if extra:
        raise GraphError(f"unknown keys in graph document: {sorted(extra)}")
    spins = document.get("spins")
    if not isinstance(spins, list) or not all(isinstance(s, str) for s in spins):
        raise GraphError('"spins" must be a list of strings')
    couplings = document.get("couplings", [])
    if not isinstance(couplings, list):
        raise GraphError('"couplings" must be a list of name pairs')
    # index lookup before the dataclass validates duplicates
    if len(set(spins)) != len(spins):
        CouplingGraph(tuple(spins))
    lookup = {s: i for i, s in enumerate(spins)}
    edges = set()
    for pair in couplings:
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(p, str) for p in pair)):
            raise GraphError(f"coupling entry must be a pair of spin names, got {pair!r}")
        a, b = pair
        for name in pair:
            if name not in lookup:
                raise GraphError(f"coupling {pair!r} names unknown spin {name!r}")
        if a == b:
            raise GraphError(f"self-loop on spin {a!r}")
        i, j = lookup[a], lookup[b]
        edges.add((min(i, j), max(i, j)))
    return CouplingGraph(tuple(spins), frozenset(edges))


def graph_to_document(g: CouplingGraph) -> dict:
    return {
        "spins": list(g.names),
        "couplings": [[g.names[i], g.names[j]] for i, j in g.sorted_edges()],
    }


def max_degree(g: CouplingGraph) -> int:
    return max(g.degrees(), default=0)


@dataclass(frozen=True)
class Coloring:
    assignment: tuple[int, ...]

    @property
    def color_count(self) -> int:
        return max(self.assignment, default=-1) + 1

    def groups(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.color_count)]
        for spin, c in enumerate(self.assignment):
            out[c].append(spin)
        return out

    def is_proper(self, g: CouplingGraph) -> bool:
        return all(self.assignment[i] != self.assignment[j] for i, j in g.edges)


def _check_pins(g: CouplingGraph, pinned: Sequence[Iterable[int]]) -> list[list[int]]:
    groups = [sorted(set(p)) for p in pinned]
    seen: set[int] = set()
    for grp in groups:
        if not grp:
            raise InvalidPinError("pinned groups must be non-empty")
        for v in grp:
            if not 0 <= v < g.spin_count:
                raise InvalidPinError(f"pinned spin index {v} out of range")
            if v in seen:
                raise InvalidPinError(f"spin {g.names[v]!r} appears in more than one pinned group")
            seen.add(v)
        for a in grp:
            for b in grp:
                if a < b and g.has_edge(a, b):
                    raise InvalidPinError(
                        f"pinned spins {g.names[a]!r} and {g.names[b]!r} are coupled and cannot share a color"
                    )
    return groups


def _greedy_order(g: CouplingGraph, exclude: set[int]) -> list[int]:
    deg = g.degrees()
    return sorted((v for v in range(g.spin_count) if v not in exclude), key=lambda v: (-deg[v], v))


def greedy_coloring(
    g: CouplingGraph, pinned: Sequence[Iterable[int]] = (), exact: bool = False
) -> Coloring:
    """Proper coloring; pinned group ``k`` gets color ``k`` exclusively.

    Free vertices are visited by descending degree (ties by index) and take
    the smallest color that is neither reserved nor used by a neighbor.
    With ``exact=True`` (at most 12 spins) the free vertices are instead
    colored with the fewest possible extra colors.
    """
    groups = _check_pins(g, pinned)
    colors = [-1] * g.spin_count
    for c, grp in enumerate(groups):
        for v in grp:
            colors[v] = c
    n_reserved = len(groups)
    order = _greedy_order(g, {v for grp in groups for v in grp})
    adj = g.neighbors()

    if exact:
        if g.spin_count > EXACT_COLORING_LIMIT:
            raise GraphError(f"exact coloring limited to {EXACT_COLORING_LIMIT} spins")
        return Coloring(tuple(_exact_fill(colors, order, adj, n_reserved)))

    for v in order:
        taken = {colors[u] for u in adj[v]}
        c = n_reserved
        while c in taken:
            c += 1
        colors[v] = c
    return Coloring(tuple(colors))


def _exact_fill(colors: list[int], order: list[int], adj: list[set[int]], base: int) -> list[int]:
    if not order:
        return colors
    for extra in range(1, len(order) + 1):
        trial = list(colors)
        if _backtrack(trial, order, 0, adj, base, base + extra, base):
            return trial
    raise AssertionError("unreachable: n colors always suffice")


def _backtrack(colors, order, pos, adj, lo, hi, used_hi) -> bool:
    if pos == len(order):
        return True
    v = order[pos]
    taken = {colors[u] for u in adj[v]}
    # symmetry breaking: never open more than one fresh color at a time
    for c in range(lo, min(hi, used_hi + 1)):
        if c in taken:
            continue
        colors[v] = c
        if _backtrack(colors, order, pos + 1, adj, lo, hi, max(used_hi, c + 1)):
            return True
    colors[v] = -1
    return False


def chromatic_number(g: CouplingGraph) -> int:
    return greedy_coloring(g, exact=True).color_count
