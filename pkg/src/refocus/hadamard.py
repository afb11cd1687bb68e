"""Hadamard matrices of every order the refocussing compiler can ask for.

Orders 1, 2 and every multiple of four up to 48 are reachable from three
constructions over prime fields:

    order   route
    -----   ---------------------------
    1..32   Sylvester (powers of two)
    12      Paley I,  q = 11
    20      Paley I,  q = 19
    24      Paley I,  q = 23
    28      Paley II, q = 13
    36      Paley II, q = 17
    40      Kronecker(H2, H20)
    44      Paley I,  q = 43
    48      Paley I,  q = 47

All matrices are returned in normalized form (first row and first column
all +1) and stored as int8. Validity checks use exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    InvalidInputError,
    InvalidParameterError,
    NoHadamardOrderError,
    SizeLimitError,
)

MAX_ORDER = 64
MAX_ROUTED_ORDER = 48
ADMISSIBLE_ORDERS: tuple[int, ...] = (1, 2) + tuple(range(4, MAX_ROUTED_ORDER + 1, 4))


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.int8)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]

    def __eq__(self, other):
        if not isinstance(other, HadamardMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def tolist(self) -> list[list[int]]:
        return self.entries.astype(int).tolist()

    def format(self) -> str:
        """Rows as strings of '+' and '-'."""
        return "\n".join("".join("+" if v > 0 else "-" for v in r) for r in self.entries)


def _normalize(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a = a * a[:, :1]
    a = a * a[:1, :]
    return a.astype(np.int8)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _legendre(a: int, q: int) -> int:
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def _jacobsthal(q: int) -> np.ndarray:
    # Q[i, j] = legendre(j - i) over Z_q
    chi = np.array([_legendre(k, q) for k in range(q)], dtype=np.int64)
    idx = (np.arange(q)[None, :] - np.arange(q)[:, None]) % q
    return chi[idx]


def is_hadamard(m) -> bool:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidInputError(f"Hadamard check needs a non-empty square matrix, got shape {a.shape}")
    if not np.all((a == 1) | (a == -1)):
        raise InvalidInputError("Hadamard check needs entries in {+1, -1}")
    a = a.astype(np.int64)
    n = a.shape[0]
    return bool(np.array_equal(a @ a.T, n * np.eye(n, dtype=np.int64)))


def sylvester(k: int) -> HadamardMatrix:
    if not 0 <= k <= 6:
        raise SizeLimitError(f"sylvester order 2**{k} outside supported range 2**0..2**6")
    h = HadamardMatrix([[1]])
    h2 = HadamardMatrix([[1, 1], [1, -1]])
    for _ in range(k):
        h = kronecker(h2, h)
    return h


def paley_i(q: int) -> HadamardMatrix:
    if not _is_prime(q) or q % 4 != 3:
        raise InvalidParameterError(f"Paley I needs a prime q = 3 mod 4, got {q}")
    if q + 1 > MAX_ORDER:
        raise SizeLimitError(f"Paley I order {q + 1} exceeds {MAX_ORDER}")
    n = q + 1
    s = np.zeros((n, n), dtype=np.int64)
    s[0, 1:] = 1
    s[1:, 0] = -1
    s[1:, 1:] = _jacobsthal(q)
    return HadamardMatrix(_normalize(s + np.eye(n, dtype=np.int64)))


def paley_ii(q: int) -> HadamardMatrix:
    if not _is_prime(q) or q % 4 != 1:
        raise InvalidParameterError(f"Paley II needs a prime q = 1 mod 4, got {q}")
    if 2 * (q + 1) > MAX_ORDER:
        raise SizeLimitError(f"Paley II order {2 * (q + 1)} exceeds {MAX_ORDER}")
    n = q + 1
    c = np.zeros((n, n), dtype=np.int64)
    c[0, 1:] = 1
    c[1:, 0] = 1
    c[1:, 1:] = _jacobsthal(q)
    eye = np.eye(n, dtype=np.int64)
    h = np.block([[c + eye, c - eye], [c - eye, -c - eye]])
    return HadamardMatrix(_normalize(h))


def kronecker(a: HadamardMatrix, b: HadamardMatrix) -> HadamardMatrix:
    if a.order * b.order > MAX_ORDER:
        raise SizeLimitError(f"Kronecker product order {a.order * b.order} exceeds {MAX_ORDER}")
    prod = np.kron(a.entries.astype(np.int64), b.entries.astype(np.int64))
    return HadamardMatrix(_normalize(prod))


def smallest_admissible_order(n: int) -> int | None:
    for order in ADMISSIBLE_ORDERS:
        if order >= n:
            return order
    return None


def route(n: int) -> str:
    """Name the construction used for order ``n``."""
    if n not in ADMISSIBLE_ORDERS:
        raise NoHadamardOrderError(n, smallest_admissible_order(n))
    if n & (n - 1) == 0:
        return f"sylvester({n.bit_length() - 1})"
    if _is_prime(n - 1) and (n - 1) % 4 == 3:
        return f"paley_i({n - 1})"
    q = n // 2 - 1
    if _is_prime(q) and q % 4 == 1:
        return f"paley_ii({q})"
    return f"kronecker(H2, H{n // 2})"


@lru_cache(maxsize=None)
def hadamard_of_order(n: int) -> HadamardMatrix:
    how = route(n)
    if how.startswith("sylvester"):
        return sylvester(n.bit_length() - 1)
    if how.startswith("paley_i("):
        return paley_i(n - 1)
    if how.startswith("paley_ii"):
        return paley_ii(n // 2 - 1)
    return kronecker(sylvester(1), hadamard_of_order(n // 2))
