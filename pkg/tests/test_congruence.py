import pytest
from hypothesis import given, strategies as st

from workbench.congruence import (
    S, U, FreeMatrixGroup, congruence_generators, format_word, invert_word, rank_formula,
    reduce_word, schreier_graph, sym2_hom, word_image_is_trivial, word_matrix,
)
from workbench.linalg import IntMatrix

words = st.text(alphabet="suU", max_size=14)


@pytest.mark.parametrize("p, r", [(3, 3), (5, 11), (7, 29), (11, 111), (13, 183)])
def test_rank_of_gamma2(p, r):
    g = congruence_generators(p)
    assert g.rank == r == rank_formula(p) == len(g.generators)
    eye = IntMatrix.identity(2).mod(p)
    for m in g.generators:
        assert m.det() == 1
        assert m.mod(p) == eye


@pytest.mark.parametrize("p", [3, 5, 7])
def test_schreier_words_lie_in_kernel(p):
    g = congruence_generators(p)
    assert all(word_image_is_trivial(p, w) for w in g.schreier_words)
    # the lift of each word is the generator up to sign
    for m, w in zip(g.generators, g.schreier_words):
        assert word_matrix(w) in (m, -m)


def test_gamma3_basis_is_frozen():
    # pinned from the first run; the BFS letter order is part of the contract
    g = congruence_generators(3)
    assert [m.tolist() for m in g.generators] == [
        [[-2, -3], [3, 4]], [[1, 0], [3, 1]], [[1, -3], [0, 1]]]


def test_generators_are_distinct_and_nontrivial():
    g = congruence_generators(5)
    assert len({m for m in g.generators}) == g.rank
    assert IntMatrix.identity(2) not in g.generators


def test_relations_of_the_modular_group():
    minus = IntMatrix.identity(2).scale(-1)
    assert S @ S == minus
    assert U @ U @ U == minus


@given(words)
def test_reduce_word_is_a_normal_form(w):
    r = reduce_word(w)
    assert reduce_word(r) == r
    assert "ss" not in r
    assert not any(a in "uU" and b in "uU" for a, b in zip(r, r[1:]))
    assert word_matrix(r) in (word_matrix(w), -word_matrix(w))


@given(words)
def test_inverse_word(w):
    assert reduce_word(w + invert_word(w)) == ""
    # inverse in PSL_2: S^-1 = -S
    eye = IntMatrix.identity(2)
    assert word_matrix(w) @ word_matrix(invert_word(w)) in (eye, -eye)


@given(words, st.sampled_from([3, 5, 7]))
def test_reduction_does_not_change_the_coset(w, p):
    assert word_image_is_trivial(p, w + invert_word(reduce_word(w)))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_schreier_graph_size(p):
    elems, act_s, act_u, root = schreier_graph(p)
    assert len(elems) == p * (p * p - 1) // 2
    assert elems[root].tolist() == [1, 0, 0, 1]


def test_json_roundtrip():
    g = congruence_generators(5)
    back = FreeMatrixGroup.from_json(g.to_json())
    assert back == g
    assert g.to_json()["rank"] == "11"
    assert format_word("sU") == "s u^-1"


@given(st.integers(0, 10_000))
def test_nielsen_variant_stays_in_gamma(seed):
    g = congruence_generators(5).nielsen_variant(seed)
    assert g.rank == 11
    for m, w in zip(g.generators, g.schreier_words):
        assert m.det() == 1 and m.mod(5) == IntMatrix.identity(2).mod(5)
        assert word_matrix(w) in (m, -m)


sl2 = st.lists(st.sampled_from("suU"), max_size=10).map(lambda ws: word_matrix("".join(ws)))


@given(sl2, sl2)
def test_sym2_is_a_homomorphism(a, b):
    assert sym2_hom(a @ b) == sym2_hom(a) @ sym2_hom(b)
    assert sym2_hom(a).det() == 1


def test_sym2_rejects_bad_input():
    with pytest.raises(ValueError):
        sym2_hom([[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        sym2_hom([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_sym2_of_translation():
    p = 3
    assert sym2_hom([[1, p], [0, 1]]).tolist() == [[1, 2 * p, p * p], [0, 1, p], [0, 0, 1]]
