import itertools

import numpy as np
import pytest

from conftest import H2, H4, M4
from refocus.errors import InvalidInputError, InvalidParameterError, NoHadamardOrderError, SizeLimitError
from refocus.hadamard import (
    ADMISSIBLE_ORDERS,
    HadamardMatrix,
    hadamard_of_order,
    is_hadamard,
    kronecker,
    paley_i,
    paley_ii,
    route,
    sylvester,
)


def gram_is_scaled_identity(a) -> bool:
    # independent of is_hadamard: explicit pairwise dot products
    a = [[int(v) for v in row] for row in np.asarray(a)]
    n = len(a)
    for i in range(n):
        for j in range(n):
            dot = sum(x * y for x, y in zip(a[i], a[j]))
            if dot != (n if i == j else 0):
                return False
    return True


def is_normalized(h: HadamardMatrix) -> bool:
    return bool(np.all(h.entries[0] == 1) and np.all(h.entries[:, 0] == 1))


def test_sylvester_small_orders():
    assert sylvester(0).tolist() == [[1]]
    assert sylvester(1).tolist() == H2
    assert sylvester(2).tolist() == H4


def test_sylvester_recursion():
    for k in range(1, 7):
        assert sylvester(k) == kronecker(sylvester(1), sylvester(k - 1))


@pytest.mark.parametrize("k", [-1, 7])
def test_sylvester_range(k):
    with pytest.raises(SizeLimitError):
        sylvester(k)


@pytest.mark.parametrize("q,n", [(3, 4), (11, 12), (19, 20), (23, 24), (43, 44), (47, 48)])
def test_paley_i(q, n):
    h = paley_i(q)
    assert h.order == n
    assert gram_is_scaled_identity(h.entries)
    assert is_normalized(h)


@pytest.mark.parametrize("q,n", [(5, 12), (13, 28), (17, 36)])
def test_paley_ii(q, n):
    h = paley_ii(q)
    assert h.order == n
    assert gram_is_scaled_identity(h.entries)
    assert is_normalized(h)


@pytest.mark.parametrize("q", [5, 9, 15, 2, 1])
def test_paley_i_rejects(q):
    with pytest.raises(InvalidParameterError):
        paley_i(q)


@pytest.mark.parametrize("q", [7, 3, 9, 21])
def test_paley_ii_rejects(q):
    with pytest.raises(InvalidParameterError):
        paley_ii(q)


def test_kronecker_examples():
    assert kronecker(sylvester(1), sylvester(1)).tolist() == H4
    x = paley_i(11)
    assert kronecker(HadamardMatrix([[1]]), x) == x
    h40 = kronecker(sylvester(1), paley_i(19))
    assert h40.order == 40 and gram_is_scaled_identity(h40.entries)


def test_kronecker_entry_formula():
    a, b = sylvester(1), paley_i(3)
    raw = np.kron(a.entries.astype(int), b.entries.astype(int))
    k = kronecker(a, b)
    # already normalized inputs, so no re-normalization sign flips
    assert np.array_equal(k.entries, raw)


def test_kronecker_size_limit():
    with pytest.raises(SizeLimitError):
        kronecker(sylvester(4), paley_i(11))


def test_all_admissible_orders():
    for n in ADMISSIBLE_ORDERS:
        h = hadamard_of_order(n)
        assert h.order == n
        assert is_hadamard(h.entries)
        assert gram_is_scaled_identity(h.entries)
        assert is_normalized(h)
        assert h.entries.dtype == np.int8


def test_admissible_pairs_kronecker_closed():
    for a, b in itertools.product(ADMISSIBLE_ORDERS, repeat=2):
        if a * b <= 48:
            assert is_hadamard(kronecker(hadamard_of_order(a), hadamard_of_order(b)).entries)


def test_rows_orthogonal_and_balanced():
    for n in ADMISSIBLE_ORDERS[1:]:
        h = hadamard_of_order(n).entries.astype(int)
        assert np.all(h[1:].sum(axis=1) == 0)


def test_routing_table():
    expected = {
        4: "sylvester(2)", 8: "sylvester(3)", 16: "sylvester(4)", 32: "sylvester(5)",
        12: "paley_i(11)", 20: "paley_i(19)", 24: "paley_i(23)", 44: "paley_i(43)", 48: "paley_i(47)",
        28: "paley_ii(13)", 36: "paley_ii(17)", 40: "kronecker(H2, H20)",
    }
    for n, how in expected.items():
        assert route(n) == how


def test_hadamard_of_order_errors():
    with pytest.raises(NoHadamardOrderError) as exc:
        hadamard_of_order(3)
    assert exc.value.smallest == 4
    assert "4" in str(exc.value)
    with pytest.raises(NoHadamardOrderError) as exc:
        hadamard_of_order(46)
    assert exc.value.smallest == 48
    with pytest.raises(NoHadamardOrderError) as exc:
        hadamard_of_order(52)
    assert exc.value.smallest is None


def test_is_hadamard_cases():
    assert is_hadamard(H4)
    assert not is_hadamard([[1, 1], [1, 1]])
    with pytest.raises(InvalidInputError):
        is_hadamard(M4)
    with pytest.raises(InvalidInputError):
        is_hadamard([[1, 0], [1, -1]])


def test_immutable():
    h = hadamard_of_order(8)
    with pytest.raises(ValueError):
        h.entries[0, 0] = -1


def test_format():
    assert hadamard_of_order(2).format() == "++\n+-"
