"""Rank bookkeeping for the equivariant long exact sequence of the building.

Gamma(p) acts on the rank-2 building X without inversions, so the
equivariant cohomology sits in

    ... -> H^i_G(X) -> V^i -> E^i -> H^{i+1}_G(X) -> ...

with V^i the sum over vertex orbits of the vertex-stabilizer cohomology
and E^i the same for edges.  Stabilizers are parabolic subgroups meet
Gamma(p); orbit counts are finite-group indices.  Only ranks go through
the sequence (connecting maps are out of reach), so everything here is a
dimension count over Q or F_q.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .cohomology import (
    GradedCohomology, MatrixModule, _generators, free_h1, h1_natural_plus_dual,
    module_invariants, natural_module, parabolic_cohomology, sl3_fiber,
)
from .congruence import rank_formula
from .finite_lie import InvariantError, is_prime, level, sl3_double_coset_counts, sp4_indices
from .linalg import FinAb, rank as integer_rank

# (label, orbit-count name) for the vertex and edge terms
_LAYOUT = {
    "SL3": {"vertices": (("P1", "I1"), ("P2", "I2")), "edges": (("B", "I0"),), "manifold": "Q(p)"},
    "Sp4": {"vertices": (("G1", "j1"), ("G2", "j2")), "edges": (("G0", "j0"),), "manifold": "L(p)"},
}


def _group_name(group: str) -> str:
    g = group.lower()
    if g == "sl3":
        return "SL3"
    if g == "sp4":
        return "Sp4"
    raise ValueError(f"unknown group {group!r}")


def _check_field(p: int, q: int) -> int:
    if q != 0 and (not is_prime(q) or q == p):
        raise ValueError(f"field characteristic must be 0 or a prime other than {p}, got {q}")
    return q


def orbit_counts(p, group: str) -> dict[str, int]:
    name = _group_name(group)
    report = sl3_double_coset_counts(p) if name == "SL3" else sp4_indices(p)
    return dict(report.indices)


@dataclass(frozen=True)
class LongExactSequenceReport:
    p: int
    group: str
    field_char: int
    orbit_counts: dict
    vertex_term_ranks: tuple[int, ...]
    edge_term_ranks: tuple[int, ...]
    derived_bounds: dict            # degree -> lower bound for rank H^i_G(X)
    chi_check: int
    torsion: dict = field(default_factory=dict)   # stabilizer label -> per-degree torsion orders

    def __post_init__(self):
        if any(r < 0 for r in self.vertex_term_ranks + self.edge_term_ranks):
            raise InvariantError("negative rank in the long exact sequence")

    @property
    def top_degree(self) -> int:
        return len(self.vertex_term_ranks) - 1

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "group": self.group,
            "field_char": str(self.field_char),
            "orbit_counts": {k: str(v) for k, v in self.orbit_counts.items()},
            "vertex_term_ranks": [str(r) for r in self.vertex_term_ranks],
            "edge_term_ranks": [str(r) for r in self.edge_term_ranks],
            "derived_bounds": {str(k): str(v) for k, v in self.derived_bounds.items()},
            "chi_check": str(self.chi_check),
            "torsion": {k: [[str(t) for t in deg] for deg in v] for k, v in self.torsion.items()},
        }

    def table(self) -> str:
        lay = _LAYOUT[self.group]
        vt = " + ".join(f"{self.orbit_counts[c]}*b({lab})" for lab, c in lay["vertices"])
        et = " + ".join(f"{self.orbit_counts[c]}*b({lab})" for lab, c in lay["edges"])
        coeff = "Q" if self.field_char == 0 else f"F_{self.field_char}"
        lines = [
            f"{self.group}, p = {self.p}, coefficients {coeff}",
            f"  ... -> H^i_G(X) -> V^i = {vt} -> E^i = {et} -> H^(i+1)_G(X) -> ...",
            f"  {'i':>2} {'V^i':>10} {'E^i':>10} {'rank H^i_G(X) >=':>18}",
        ]
        for i, (v, e) in enumerate(zip(self.vertex_term_ranks, self.edge_term_ranks)):
            lines.append(f"  {i:>2} {v:>10} {e:>10} {self.derived_bounds.get(i, 0):>18}")
        for i in sorted(self.derived_bounds):
            if i > self.top_degree:
                lines.append(f"  {i:>2} {0:>10} {0:>10} {self.derived_bounds[i]:>18}")
        lines.append(f"  chi = sum (-1)^i (V^i - E^i) = {self.chi_check}")
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _ranks(h: GradedCohomology, q: int) -> list[int]:
    return h.betti(q)


def _bounds(v: list[int], e: list[int]) -> dict[int, int]:
    """Lower bounds for rank H^i_G(X) forced by exactness.

    Uses H^0_G(X) = Z (X connected) and H^{N+1}_G(X) = Z for N the top
    stabilizer degree (the Borel construction is a closed orientable
    manifold of dimension N + 1).
    """
    n = len(v) - 1
    out = {0: 1}
    for i in range(1, n + 1):
        out[i] = max(0, v[i] - e[i], e[i - 1] - v[i - 1])
    out[1] = max(out[1], e[0] - v[0] + 1)
    out[n] = max(out[n], v[n] - e[n] + 1)
    out[n + 1] = 1
    return out


def build_les(p, group: str, field_char: int = 0) -> LongExactSequenceReport:
    p = level(p)
    name = _group_name(group)
    q = _check_field(p, field_char)
    counts = orbit_counts(p, name)
    lay = _LAYOUT[name]
    tables = {lab: parabolic_cohomology(name, p, lab)
              for lab, _ in lay["vertices"] + lay["edges"]}
    top = max(t.top for t in tables.values())

    def term(entries):
        out = [0] * (top + 1)
        for lab, c in entries:
            for i, b in enumerate(_ranks(tables[lab], q)):
                out[i] += counts[c] * b
        return out

    v = term(lay["vertices"])
    e = term(lay["edges"])
    chi = sum((-1) ** i * (v[i] - e[i]) for i in range(top + 1))
    report = LongExactSequenceReport(
        p=p, group=name, field_char=q, orbit_counts=counts,
        vertex_term_ranks=tuple(v), edge_term_ranks=tuple(e),
        derived_bounds=_bounds(v, e), chi_check=chi,
        torsion={lab: [list(t[i].torsion) for i in range(t.top + 1)] for lab, t in tables.items()},
    )
    if chi != 0:
        raise InvariantError(f"chi_check = {chi} for {name} at p = {p}: the Borel construction has chi = 0")
    return report


# --------------------------------------------------------------------------
# the dimension forced by chi = 0


def _dim(a: FinAb, q: int) -> int:
    return a.free_rank if q == 0 else a.dim_mod(q)


def _lhs_pieces(g, fiber: list[MatrixModule], q: int) -> tuple[list[int], list[int]]:
    """dim H^0(F, H^k(N)) and dim H^1(F, H^k(N)) for each fiber degree k."""
    mods = [m.with_modulus(q) for m in fiber]
    return ([_dim(module_invariants(m), q) for m in mods],
            [_dim(free_h1(g, m), q) for m in mods])


def forced_h1_dimension(p, field_char: int = 0) -> int:
    """dim H^1(Gamma_2(p), M (+) M*) over Q or F_q, solved from chi = 0.

    The SL_3 sequence is assembled with that one slot left unknown; every
    other entry comes from the parabolic computations.  The solution is
    checked against the Fox-calculus cokernel, the rank of the Fox matrix,
    and (p-1)p(p+1)/3.
    """
    p = level(p)
    q = _check_field(p, field_char)
    counts = orbit_counts(p, "sl3")
    if counts["I1"] != counts["I2"]:
        raise InvariantError("P1 and P2 orbit counts differ")
    g = _generators(p)

    # vertex terms with the H^1(F, H^1(N)) slot removed
    vconst = [0] * 4
    slots = {}
    for lab, c in (("P1", "I1"), ("P2", "I2")):
        h0, h1 = _lhs_pieces(g, sl3_fiber(g, lab), q)
        slots[lab] = h1[1]
        for i in range(4):
            vconst[i] += counts[c] * (h0[i] if i < len(h0) else 0)
            if i >= 1 and i - 1 != 1:
                vconst[i] += counts[c] * h1[i - 1]
        full = parabolic_cohomology("sl3", p, lab).betti(q)
        piecewise = [(h0[i] if i < len(h0) else 0) + (h1[i - 1] if i >= 1 else 0) for i in range(4)]
        if piecewise != full:
            raise InvariantError(f"{lab}: LHS pieces {piecewise} disagree with the table {full}")

    edge = parabolic_cohomology("sl3", p, "B").betti(q)
    edge = edge + [0] * (4 - len(edge))
    known = sum((-1) ** i * (vconst[i] - counts["I0"] * edge[i]) for i in range(4))
    # the slot sits in degree 2 with coefficient I1 (one M and one M* per orbit pair)
    x, r = divmod(-known, counts["I1"])
    if r:
        raise InvariantError(f"chi = 0 forces a non-integral dimension {Fraction(-known, counts['I1'])}")

    direct = _dim(h1_natural_plus_dual(p, q, g), q)
    m = natural_module(g)
    fox = m.direct_sum(m.dual()).fox_matrix()
    fox_rank = integer_rank(fox) if q == 0 else kernels.rank_mod_q(fox.to_numpy(), q)
    by_rank = fox.rows - fox_rank
    formula = (p - 1) * p * (p + 1) // 3
    values = {"chi": x, "slots": sum(slots.values()), "fox cokernel": direct,
              "fox rank": by_rank, "formula": formula}
    if len(set(values.values())) != 1:
        raise InvariantError(f"forced dimension cross-check failed: {values}")
    return x


# --------------------------------------------------------------------------
# Betti lower bounds


def betti3_lower_bound(p) -> int:
    """Lower bound for beta_3(Gamma(p)) from the top of the SL_3 sequence."""
    p = level(p)
    c = orbit_counts(p, "sl3")
    r = rank_formula(p)
    # V^3 = (I1 + I2) * rank Gamma_2(p), E^3 = I0 * beta_3(B n Gamma(p)) = I0
    assembly = (c["I1"] + c["I2"]) * r - c["I0"] + 1
    closed = Fraction((p ** 3 - 1) * (p ** 3 - 3 * p ** 2 - p + 15), 12) + 1
    if closed != assembly:
        raise InvariantError(f"betti3 bound: assembly {assembly} != closed form {closed}")
    return assembly


def betti4_lower_bound(p) -> int:
    """Lower bound for beta_4(Gamma(p)) from the top of the Sp_4 sequence.

    The orbit counts come from the computed stabilizer orders; with
    |G0(p)| = 4p^4 the closed form is (p^4-1)(p^3-3p^2-p+15)/12 + 1.
    """
    p = level(p)
    c = orbit_counts(p, "sp4")
    r = rank_formula(p)
    # beta_4 of G1, G2 meet Gamma(p) is rank Gamma_2(p); beta_4 of G0 meet Gamma(p) is 1
    assembly = (c["j1"] + c["j2"]) * r - c["j0"] + 1
    closed = Fraction((p ** 4 - 1) * (p ** 3 - 3 * p ** 2 - p + 15), 12) + 1
    if closed != assembly:
        raise InvariantError(f"betti4 bound: assembly {assembly} != closed form {closed}")
    return assembly


def betti4_bound_with_order(p, g0_order: int) -> Fraction:
    """The same top-degree count for an arbitrary stated |G0(p)|."""
    p = level(p)
    c = orbit_counts(p, "sp4")
    j0 = Fraction(p ** 4 * (p ** 4 - 1) * (p ** 2 - 1), g0_order)
    return (c["j1"] + c["j2"]) * rank_formula(p) - j0 + 1


def betti4_printed_closed_form(p) -> Fraction:
    """(p^4-1)(2p^3-3p^2-2p+27)/24 + 1, the form that goes with |G0(p)| = 8p^4."""
    p = level(p)
    return Fraction((p ** 4 - 1) * (2 * p ** 3 - 3 * p ** 2 - 2 * p + 27), 24) + 1
