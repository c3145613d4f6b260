import json
from fractions import Fraction

import pytest

from workbench.assembly import (
    LongExactSequenceReport, betti3_lower_bound, betti4_bound_with_order, betti4_lower_bound,
    betti4_printed_closed_form, build_les, forced_h1_dimension, orbit_counts,
)
from workbench.congruence import rank_formula
from workbench.finite_lie import InvariantError, is_prime

ODD_PRIMES_TO_50 = [p for p in range(3, 51) if is_prime(p)]


def test_sl3_les_at_3():
    r = build_les(3, "sl3")
    assert r.vertex_term_ranks[0] == 26 == 3 ** 3 - 1
    assert r.edge_term_ranks[0] == 52
    assert r.chi_check == 0
    # 0 -> Z -> Z^(p^3-1) -> Z^I0 -> H^1: rank H^1 >= I0 - (p^3 - 1) + 1
    assert r.derived_bounds[1] == 52 - 26 + 1
    assert r.derived_bounds[3] == betti3_lower_bound(3) == 27


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sl3_chi(p):
    r = build_les(p, "sl3")
    assert r.chi_check == 0
    assert r.vertex_term_ranks[3] == (p ** 3 - 1) * rank_formula(p)
    assert r.derived_bounds[3] == betti3_lower_bound(p)


@pytest.mark.parametrize("p", [3, 5])
def test_sp4_chi(p):
    r = build_les(p, "sp4")
    assert r.chi_check == 0
    assert r.derived_bounds[4] == betti4_lower_bound(p)


def test_sp4_top_terms_at_3():
    r = build_les(3, "sp4")
    assert r.vertex_term_ranks[4] == 2 * 40 * 3 == 240
    # j0 = 160 edge orbits, each with beta_4 = 1
    assert r.edge_term_ranks[4] == 160


def test_les_over_finite_field():
    r = build_les(3, "sl3", field_char=2)
    assert r.chi_check == 0 and r.field_char == 2
    with pytest.raises(ValueError):
        build_les(3, "sl3", field_char=3)
    with pytest.raises(ValueError):
        build_les(3, "sl3", field_char=4)
    with pytest.raises(ValueError):
        build_les(3, "so5")


def test_report_serialisation():
    r = build_les(3, "sl3")
    doc = json.loads(r.dumps())
    assert doc["chi_check"] == "0"
    assert doc["vertex_term_ranks"][0] == "26"
    assert doc["torsion"]["B"][2] == ["3"]
    assert "chi = sum" in r.table()
    with pytest.raises(InvariantError):
        LongExactSequenceReport(3, "SL3", 0, {}, (-1,), (0,), {}, 0)


@pytest.mark.parametrize("p, expected", [(3, 8), (5, 40), (7, 112)])
def test_forced_dimension(p, expected):
    assert forced_h1_dimension(p) == expected
    assert forced_h1_dimension(p, 2) == expected


def test_forced_dimension_other_fields():
    assert forced_h1_dimension(3, 5) == 8
    assert forced_h1_dimension(5, 3) == 40
    with pytest.raises(ValueError):
        forced_h1_dimension(5, 5)


@pytest.mark.parametrize("p, expected", [(3, 27), (5, 621), (7, 5815)])
def test_betti3(p, expected):
    assert betti3_lower_bound(p) == expected


@pytest.mark.parametrize("p, expected", [(3, 81), (5, 3121), (7, 40801)])
def test_betti4(p, expected):
    assert betti4_lower_bound(p) == expected


@pytest.mark.parametrize("p", ODD_PRIMES_TO_50)
def test_both_routes_agree(p):
    # each function raises if its assembly and closed forms disagree
    assert betti3_lower_bound(p) > 0
    assert betti4_lower_bound(p) > 0


def test_bounds_increase_with_p():
    b3 = [betti3_lower_bound(p) for p in ODD_PRIMES_TO_50]
    b4 = [betti4_lower_bound(p) for p in ODD_PRIMES_TO_50]
    assert b3 == sorted(set(b3)) and b4 == sorted(set(b4))


@pytest.mark.parametrize("p", ODD_PRIMES_TO_50)
def test_published_beta4_form_follows_from_8p4(p):
    # the published closed form is the top-degree count with |G0(p)| = 8p^4
    assert betti4_bound_with_order(p, 8 * p ** 4) == betti4_printed_closed_form(p)
    assert betti4_bound_with_order(p, 4 * p ** 4) == betti4_lower_bound(p)


def test_orbit_counts_are_computed():
    assert orbit_counts(3, "sl3") == {"I0": 52, "I1": 13, "I2": 13}
    assert orbit_counts(3, "sp4") == {"j0": 160, "j1": 40, "j2": 40}
    assert isinstance(betti4_printed_closed_form(3), Fraction)
