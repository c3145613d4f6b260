import pytest
from hypothesis import given, strategies as st

from workbench.cohomology import klingen_unipotent, sp4_klingen_generators
from workbench.finite_lie import (
    J, InvariantError, PrimeLevel, block_conditions, form_blocks, level,
    sl3_borel_image_bruteforce, sl3_double_coset_counts, sl3_order, sl3_order_bruteforce,
    sl3_parabolic_image_bruteforce, sl3_stabilizer_orders, sp4_borel_image_bruteforce,
    sp4_indices, sp4_order, sp4_order_bruteforce, symplectic_check,
)
from workbench.linalg import IntMatrix


@pytest.mark.parametrize("bad", [1, 2, 4, 9, 15, -3, 0])
def test_level_rejects_non_odd_primes(bad):
    with pytest.raises(ValueError):
        level(bad)


def test_level_accepts_odd_primes():
    assert [level(p) for p in (3, 5, 7, 11, 13)] == [3, 5, 7, 11, 13]
    assert int(PrimeLevel(7)) == 7


@pytest.mark.parametrize("p", [3, 5])
def test_sl3_order_matches_enumeration(p):
    assert sl3_order_bruteforce(p) == sl3_order(p)


def test_sp4_order_matches_enumeration():
    assert sp4_order_bruteforce(3) == sp4_order(3) == 51840


@pytest.mark.parametrize("p", [3, 5])
def test_stabilizer_images_match_enumeration(p):
    b, p1, p2 = sl3_stabilizer_orders(p)
    assert sl3_borel_image_bruteforce(p) == b == 4 * p ** 3
    assert sl3_parabolic_image_bruteforce(p) == p1 == p2 == 2 * p ** 3 * (p * p - 1)
    assert sp4_borel_image_bruteforce(p) == sp4_indices(p).stabilizer_orders["G0"] == 4 * p ** 4


@pytest.mark.parametrize("p, i0, i1", [(3, 52, 13), (5, 744, 62)])
def test_sl3_orbit_counts(p, i0, i1):
    rep = sl3_double_coset_counts(p)
    assert rep.indices == {"I0": i0, "I1": i1, "I2": i1}
    assert rep.indices["I0"] == (p ** 3 - 1) * (p ** 2 - 1) // 4
    assert rep.indices["I1"] == (p ** 3 - 1) // 2


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_sp4_orbit_counts(p):
    rep = sp4_indices(p)
    assert rep.indices["j1"] == rep.indices["j2"] == (p ** 4 - 1) // 2
    assert rep.indices["j0"] == (p ** 4 - 1) * (p ** 2 - 1) // 4
    rep.check()
    js = rep.to_json()
    assert all(isinstance(v, str) for v in js["indices"].values())


def test_form_blocks():
    q, minus_q = form_blocks()
    assert q == IntMatrix.from_rows([[0, 1], [1, 0]])
    assert minus_q == -q


def test_symplectic_check_examples():
    assert symplectic_check(IntMatrix.identity(4))
    assert symplectic_check(J)
    assert not symplectic_check(IntMatrix.diagonal([1, 1, 1, 2]))
    with pytest.raises(ValueError):
        symplectic_check(IntMatrix.identity(3))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_klingen_generators_are_symplectic(p):
    for g in sp4_klingen_generators(p):
        assert symplectic_check(g)
        assert g.mod(p) == IntMatrix.identity(4).mod(p)


def _symplectic_word(word):
    gens = [J, klingen_unipotent(1, 0, 0), klingen_unipotent(0, 1, 0), klingen_unipotent(0, 0, 1),
            IntMatrix.from_rows([[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]])]
    m = IntMatrix.identity(4)
    for k in word:
        m = m @ gens[k]
    return m


@given(st.lists(st.integers(0, 4), max_size=8))
def test_block_conditions_agree_on_group_elements(word):
    m = _symplectic_word(word)
    assert symplectic_check(m)
    assert block_conditions(m)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=4, max_size=4))
def test_block_conditions_agree_on_arbitrary_matrices(rows):
    m = IntMatrix.from_rows(rows)
    try:
        direct = symplectic_check(m)
    except InvariantError:  # pragma: no cover - would mean the block algebra is wrong
        pytest.fail("block conditions disagree with A^T J A = J")
    assert direct == block_conditions(m)
