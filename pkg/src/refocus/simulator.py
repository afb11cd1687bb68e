"""Weak-coupling propagator simulation under ideal, instantaneous pi pulses.

The free Hamiltonian is diagonal in the computational basis, so each interval
is a vector of phases and each pulse on a set of spins is a bit-flip
permutation times ``(-i)**count``. Spin 0 is the most significant bit and
basis state bit 0 means I_z = +1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .compiler import RefocusAll, RetainCoupling, RetainShift, SignMatrix, TargetSpec, validate_target
from .errors import DimensionError, InvalidInputError, SizeLimitError
from .graphmodel import CouplingGraph
from .schedule import PulseSchedule, schedule_from_sign_matrix

MAX_SIM_SPINS = 10
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SpinSystemParams:
    shifts: tuple[float, ...]  # rad/s
    couplings: Mapping[tuple[int, int], float] = field(default_factory=dict)  # Hz
    total_time: float = 1.0

    def __post_init__(self):
        if not self.total_time > 0:
            raise InvalidInputError("total_time must be positive")
        norm = {}
        for (i, j), val in self.couplings.items():
            norm[(min(i, j), max(i, j))] = float(val)
        object.__setattr__(self, "shifts", tuple(float(w) for w in self.shifts))
        object.__setattr__(self, "couplings", norm)

    def check(self, g: CouplingGraph, require_nonzero: bool = True) -> None:
        if len(self.shifts) != g.spin_count:
            raise DimensionError(f"{len(self.shifts)} shifts for {g.spin_count} spins")
        if set(self.couplings) != set(g.edges):
            raise InvalidInputError("coupling constants must be given for exactly the graph's edges")
        if require_nonzero and any(v == 0 for v in self.couplings.values()):
            raise InvalidInputError("coupling constants on edges must be nonzero")

    def scaled(self, factor: float) -> SpinSystemParams:
        """Parameters with every rate multiplied by ``factor`` and time divided by it."""
        return SpinSystemParams(
            tuple(w * factor for w in self.shifts),
            {e: j * factor for e, j in self.couplings.items()},
            self.total_time / factor,
        )


def random_params(
    g: CouplingGraph, rng: np.random.Generator, total_time: float = 1.0
) -> SpinSystemParams:
    """Shifts of 10..100 Hz (as rad/s) and couplings of 1..20 Hz, random signs."""
    n = g.spin_count
    shifts = 2 * math.pi * rng.uniform(10, 100, n) * rng.choice([-1, 1], n)
    couplings = {e: float(rng.uniform(1, 20) * rng.choice([-1, 1])) for e in g.sorted_edges()}
    return SpinSystemParams(tuple(shifts), couplings, total_time)


def _z_signs(n: int) -> np.ndarray:
    # (n, 2**n): +1 where spin i's bit is 0
    states = np.arange(2**n)
    bits = (states[None, :] >> (n - 1 - np.arange(n))[:, None]) & 1
    return 1 - 2 * bits


def build_hamiltonian(g: CouplingGraph, p: SpinSystemParams) -> np.ndarray:
    """Diagonal of H = sum w_i Iz_i + sum 2 pi J_ij 2 Iz_i Iz_j."""
    n = g.spin_count
    if n > MAX_SIM_SPINS:
        raise SizeLimitError(f"simulation limited to {MAX_SIM_SPINS} spins, got {n}")
    p.check(g, require_nonzero=False)
    z = _z_signs(n) * 0.5
    h = np.zeros(2**n)
    for i, w in enumerate(p.shifts):
        h += w * z[i]
    for (i, j), jc in sorted(p.couplings.items()):
        h += 2 * math.pi * jc * 2 * z[i] * z[j]
    return h


def _flip_mask(n: int, spins) -> int:
    mask = 0
    for s in spins:
        mask |= 1 << (n - 1 - s)
    return mask


def _apply_pulses(u: np.ndarray, n: int, spins) -> np.ndarray:
    spins = list(spins)
    if not spins:
        return u
    idx = np.arange(2**n) ^ _flip_mask(n, spins)
    return (-1j) ** len(spins) * u[idx]


def simulate_schedule(s: PulseSchedule, g: CouplingGraph, p: SpinSystemParams) -> np.ndarray:
    """Dense propagator of ``s`` with free evolution over ``p.total_time``."""
    n = g.spin_count
    if len(s.names) != n:
        raise DimensionError(f"schedule has {len(s.names)} spins but graph has {n}")
    h = build_hamiltonian(g, p)
    phase = np.exp(-1j * h * (p.total_time / s.intervals))
    at: dict[int, list[int]] = {}
    for spin, plist in enumerate(s.pulses):
        for pulse in plist:
            at.setdefault(pulse.boundary, []).append(spin)
    u = np.eye(2**n, dtype=complex)
    for k in range(1, s.intervals + 1):
        u = phase[:, None] * u
        u = _apply_pulses(u, n, at.get(k, ()))
    return u


def simulate(
    m: SignMatrix, g: CouplingGraph, p: SpinSystemParams, omit_final: bool = False
) -> np.ndarray:
    if m.rows != g.spin_count:
        raise DimensionError(f"sign matrix has {m.rows} rows but graph has {g.spin_count} spins")
    return simulate_schedule(schedule_from_sign_matrix(m, p.total_time, omit_final, g.names), g, p)


def is_unitary(u: np.ndarray, tol: float = 1e-12) -> bool:
    return float(np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0]))) <= tol


def normalize_phase(u: np.ndarray) -> np.ndarray:
    flat = u.ravel()
    nz = np.flatnonzero(np.abs(flat) > 1e-9)
    if not nz.size:
        return u
    x = flat[nz[0]]
    return u * (abs(x) / x)


def target_propagator(g: CouplingGraph, target: TargetSpec, p: SpinSystemParams) -> np.ndarray:
    n = g.spin_count
    z = _z_signs(n) * 0.5
    if isinstance(target, RetainShift):
        diag = np.exp(-1j * p.shifts[target.spin] * p.total_time * z[target.spin])
    elif isinstance(target, RetainCoupling):
        a, b = sorted((target.a, target.b))
        jc = p.couplings[(a, b)]
        diag = np.exp(-1j * 2 * math.pi * jc * p.total_time * 2 * z[a] * z[b])
    else:
        diag = np.ones(2**n, dtype=complex)
    return np.diag(diag)


def propagator_distance(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.linalg.norm(normalize_phase(u) - normalize_phase(v)))


@dataclass(frozen=True)
class EffectiveReport:
    passed: bool
    frobenius_distance: float
    tol: float
    interactions: dict | None = None

    def to_dict(self) -> dict:
        d = {"passed": self.passed, "frobenius_distance": self.frobenius_distance, "tol": self.tol}
        if self.interactions is not None:
            d.update(self.interactions)
        return d


def verify_schedule_effective(
    s: PulseSchedule,
    g: CouplingGraph,
    target: TargetSpec,
    p: SpinSystemParams,
    tol: float = DEFAULT_TOL,
    detail: bool = False,
) -> EffectiveReport:
    if not tol > 0:
        raise InvalidInputError("tolerance must be positive")
    validate_target(g, target)
    p.check(g)
    u = simulate_schedule(s, g, p)
    want = _apply_pulses(target_propagator(g, target, p), g.spin_count, s.final_flips())
    dist = propagator_distance(u, want)
    table = _interaction_table(s, g, target, p, tol) if detail else None
    return EffectiveReport(dist <= tol, dist, tol, table)


def verify_effective(
    m: SignMatrix,
    g: CouplingGraph,
    target: TargetSpec,
    p: SpinSystemParams,
    tol: float = DEFAULT_TOL,
    omit_final: bool = False,
    detail: bool = False,
) -> EffectiveReport:
    if m.rows != g.spin_count:
        raise DimensionError(f"sign matrix has {m.rows} rows but graph has {g.spin_count} spins")
    s = schedule_from_sign_matrix(m, p.total_time, omit_final, g.names)
    return verify_schedule_effective(s, g, target, p, tol, detail)


def _interaction_table(s, g, target, p, tol) -> dict:
    """Simulate each interaction alone and classify it as refocused or retained."""
    n = g.spin_count
    flips = s.final_flips()
    ident = _apply_pulses(np.eye(2**n, dtype=complex), n, flips)
    z = _z_signs(n) * 0.5

    def classify(single: SpinSystemParams, kept_diag: np.ndarray) -> tuple[str, float]:
        u = simulate_schedule(s, g, single)
        d_ref = propagator_distance(u, ident)
        d_ret = propagator_distance(u, _apply_pulses(np.diag(kept_diag), n, flips))
        if d_ref <= tol:
            return "refocused", d_ref
        if d_ret <= tol:
            return "retained", d_ret
        return "partial", min(d_ref, d_ret)

    keep_shift = target.spin if isinstance(target, RetainShift) else None
    keep_edge = tuple(sorted((target.a, target.b))) if isinstance(target, RetainCoupling) else None
    zero_j = {e: 0.0 for e in p.couplings}
    shifts = []
    for i in range(n):
        w = [0.0] * n
        w[i] = p.shifts[i]
        single = SpinSystemParams(tuple(w), zero_j, p.total_time)
        status, dist = classify(single, np.exp(-1j * p.shifts[i] * p.total_time * z[i]))
        expected = "retained" if i == keep_shift else "refocused"
        shifts.append({"spins": [g.names[i]], "status": status, "expected": expected,
                       "ok": status == expected, "distance": dist})
    couplings = []
    for e in g.sorted_edges():
        i, j = e
        jc = dict(zero_j)
        jc[e] = p.couplings[e]
        single = SpinSystemParams((0.0,) * n, jc, p.total_time)
        kept = np.exp(-1j * 2 * math.pi * p.couplings[e] * p.total_time * 2 * z[i] * z[j])
        status, dist = classify(single, kept)
        expected = "retained" if e == keep_edge else "refocused"
        couplings.append({"spins": [g.names[i], g.names[j]], "status": status, "expected": expected,
                          "ok": status == expected, "distance": dist})
    return {"shifts": shifts, "couplings": couplings}
