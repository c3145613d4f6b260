"""Integral cohomology of the parabolic pieces of Gamma(p) in SL_3(Z) and Sp_4(Z).

Every group here is an extension with a free (or infinite cyclic) quotient,
so the Lyndon-Hochschild-Serre spectral sequence has two columns and
collapses:

    H^i(G) ~ H^0(F, H^i(N)) (+) H^1(F, H^{i-1}(N)).

H^0 is a fixed lattice and H^1 of a free group is the cokernel of the
principal-cocycle map v -> (g_k v - v)_k.  When the H^0 term has torsion
and the H^1 term is nonzero the short exact sequence need not split; such
degrees are reported as the associated graded and listed in
``GradedCohomology.associated_graded``.

Action conventions: a fiber lattice N carries a left action; H^1(N) =
Hom(N, Z) carries the contragredient (inverse transpose), and H^q of a free
abelian N is the q-th exterior power of that.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence, Union

from .congruence import FreeMatrixGroup, congruence_generators, sym2_hom
from .finite_lie import InvariantError, level, symplectic_check
from .linalg import (
    FinAb, IntMatrix, as_matrix, cokernel, exterior_power, fixed_point_matrix,
    invariant_subgroup, invariants_mod, kernel_rank,
)


@dataclass(frozen=True)
class MatrixModule:
    """A free-group module Z^dim (or (Z/q)^dim) given by one matrix per generator."""

    dim: int
    actions: tuple[IntMatrix, ...]
    torsion_modulus: int = 0
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(as_matrix(a) for a in self.actions))
        for a in self.actions:
            if a.shape != (self.dim, self.dim):
                raise ValueError(f"action of shape {a.shape} on a module of dim {self.dim}")
            if self.dim and self.torsion_modulus == 0 and a.det() not in (1, -1):
                raise ValueError("action is not invertible over Z")

    @classmethod
    def trivial(cls, rank: int, dim: int = 1, modulus: int = 0, label: str = "Z") -> MatrixModule:
        eye = IntMatrix.identity(dim)
        return cls(dim, (eye,) * rank, modulus, label)

    @property
    def rank(self) -> int:
        return len(self.actions)

    def dual(self) -> MatrixModule:
        return MatrixModule(self.dim, tuple(a.inverse().T for a in self.actions),
                            self.torsion_modulus, self.label + "*")

    def exterior_power(self, q: int) -> MatrixModule:
        return MatrixModule(comb(self.dim, q), tuple(exterior_power(a, q) for a in self.actions),
                            self.torsion_modulus, f"L^{q}({self.label})")

    def direct_sum(self, other: MatrixModule) -> MatrixModule:
        if self.torsion_modulus != other.torsion_modulus or self.rank != other.rank:
            raise ValueError("direct sum needs equal moduli and generator counts")
        return MatrixModule(self.dim + other.dim,
                            tuple(IntMatrix.block_diag([a, b]) for a, b in zip(self.actions, other.actions)),
                            self.torsion_modulus, f"{self.label}+{other.label}")

    def with_modulus(self, q: int) -> MatrixModule:
        return MatrixModule(self.dim, self.actions, q, f"{self.label}/{q}" if q else self.label)

    def fox_matrix(self) -> IntMatrix:
        """Principal-cocycle map M -> M^rank, v -> (g_k v - v)_k."""
        return fixed_point_matrix(self.actions)


Summands = Union[MatrixModule, Sequence[MatrixModule]]


def _summands(x: Summands) -> list[MatrixModule]:
    return [x] if isinstance(x, MatrixModule) else list(x)


def module_invariants(m: Summands) -> FinAb:
    """H^0 of the free group with coefficients in ``m``."""
    total = FinAb.zero()
    for mod in _summands(m):
        if mod.dim == 0:
            continue
        if mod.torsion_modulus:
            total = total + invariants_mod(mod.actions, mod.torsion_modulus)
        else:
            total = total + FinAb(invariant_subgroup(mod.actions)[0])
    return total


def free_h1(g, m: Summands) -> FinAb:
    """H^1 of a free group with matrix coefficients, via the Fox cokernel.

    ``g`` is anything with a ``rank`` (usually a :class:`FreeMatrixGroup`).
    For a modulus q the target (Z/q)^(rank*dim) is presented as Z^(rank*dim)
    modulo q, i.e. the cokernel of ``[fox | q I]``.
    """
    total = FinAb.zero()
    for mod in _summands(m):
        if mod.rank != g.rank:
            raise ValueError(f"module has {mod.rank} actions, group has rank {g.rank}")
        if mod.dim == 0:
            continue
        fox = mod.fox_matrix()
        if mod.torsion_modulus:
            n = fox.rows
            fox = IntMatrix.hstack([fox, IntMatrix.identity(n).scale(mod.torsion_modulus)])
        total = total + cokernel(fox)
    return total


@dataclass(frozen=True)
class GradedCohomology:
    label: str
    p: int | None
    groups: tuple[FinAb, ...]
    associated_graded: tuple[int, ...] = field(default=())

    def __getitem__(self, k: int) -> FinAb:
        if 0 <= k < len(self.groups):
            return self.groups[k]
        return FinAb.zero()

    @property
    def top(self) -> int:
        return len(self.groups) - 1

    def betti(self, q: int = 0) -> list[int]:
        """Betti numbers over Q (q = 0) or F_q, the latter by universal coefficients."""
        if q == 0:
            return [g.free_rank for g in self.groups]
        return [g.dim_mod(q) + sum(1 for t in self[k + 1].torsion if t % q == 0)
                for k, g in enumerate(self.groups)]

    def euler_characteristic(self, q: int = 0) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti(q)))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "p": None if self.p is None else str(self.p),
            "degrees": [g.to_json() for g in self.groups],
            "associated_graded": [str(k) for k in self.associated_graded],
        }

    @classmethod
    def from_json(cls, data: dict) -> GradedCohomology:
        return cls(data["label"], None if data["p"] is None else int(data["p"]),
                   tuple(FinAb.from_json(d) for d in data["degrees"]),
                   tuple(int(k) for k in data.get("associated_graded", [])))

    def table(self) -> str:
        lines = [f"H^*({self.label}, Z)" + (f"  p = {self.p}" if self.p else "")]
        for k, g in enumerate(self.groups):
            note = "   (associated graded)" if k in self.associated_graded else ""
            lines.append(f"  H^{k} = {g}{note}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# circle bundles over the torus


def _cup_euler(e: int, j: int) -> IntMatrix:
    """Cup with e.(x ^ y) as a map Lambda^j(Z^2) -> Lambda^(j+2)(Z^2)."""
    src = comb(2, j) if 0 <= j <= 2 else 0
    dst = comb(2, j + 2) if 0 <= j + 2 <= 2 else 0
    if src and dst:
        return IntMatrix.from_rows([[e]])
    return IntMatrix.zeros(dst, src)


def nilmanifold_cohomology(e: int, label: str = "nilmanifold", p: int | None = None) -> GradedCohomology:
    """Cohomology of a central extension Z -> G -> Z^2 with Euler number ``e``.

    Read off the Gysin sequence: H^k(G) = coker(cup_e on Lambda^(k-2)) (+)
    ker(cup_e on Lambda^(k-1)); the kernel is free, so the sum is split.
    """
    if e <= 0:
        raise ValueError("Euler number must be positive")
    groups = []
    for k in range(4):
        into = _cup_euler(e, k - 2)
        out_of = _cup_euler(e, k - 1)
        coker = cokernel(into) if into.rows else FinAb.zero()
        ker = kernel_rank(out_of) if out_of.cols else 0
        groups.append(coker + FinAb(ker))
    return GradedCohomology(label, p, tuple(groups))


def nilmanifold_fiber_modules(e: int, quotient_actions: Sequence[IntMatrix]) -> list[list[MatrixModule]]:
    """H^k of the circle bundle as modules over a free group acting on it.

    ``quotient_actions`` give the left action on the Z^2 quotient; the action
    on the centre is trivial because the matrices have determinant 1.
    """
    if e <= 0:
        raise ValueError("Euler number must be positive")
    base = MatrixModule(2, tuple(quotient_actions), 0, "Z^2")
    if any(a.det() != 1 for a in base.actions):
        raise ValueError("quotient action must lie in SL_2 so the centre is fixed")
    h1_torus = base.dual()
    powers = {j: h1_torus.exterior_power(j) for j in range(3)}
    degrees: list[list[MatrixModule]] = []
    for k in range(4):
        summands: list[MatrixModule] = []
        into = _cup_euler(e, k - 2)
        if k <= 2:
            if into.is_zero():
                summands.append(powers[k])
            elif e > 1:
                # the cokernel of multiplication by e on the line Lambda^2
                summands.append(powers[k].with_modulus(e))
        out_of = _cup_euler(e, k - 1)
        if 0 <= k - 1 <= 2 and out_of.is_zero():
            summands.append(powers[k - 1])
        degrees.append(summands)
    return degrees


def central_power(commutator: IntMatrix, c: IntMatrix) -> int:
    """The k with ``commutator == c^k`` for a unipotent central ``c``."""
    eye = IntMatrix.identity(c.rows)
    n = c - eye
    if not (n @ n).is_zero():
        raise ValueError("central generator is not of the form I + N with N^2 = 0")
    d = commutator - eye
    k = None
    for x, y in zip(d.entries, n.entries):
        if y:
            if x % y:
                raise InvariantError("commutator is not a power of the central generator")
            k = x // y
            break
    if k is None or d != n.scale(k):
        raise InvariantError("commutator is not a power of the central generator")
    return k


def commutator(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return a @ b @ a.inverse() @ b.inverse()


def sl3_borel_generators(p) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    p = level(p)
    a = IntMatrix.from_rows([[1, p, 0], [0, 1, 0], [0, 0, 1]])
    b = IntMatrix.from_rows([[1, 0, 0], [0, 1, p], [0, 0, 1]])
    c = IntMatrix.from_rows([[1, 0, p], [0, 1, 0], [0, 0, 1]])
    return a, b, c


def klingen_unipotent(u1: int, u2: int, w: int) -> IntMatrix:
    """Element of the G2 unipotent radical with C = I: corner w, column (u1, u2)."""
    return IntMatrix.from_rows([
        [1, -u2, u1, w],
        [0, 1, 0, u1],
        [0, 0, 1, u2],
        [0, 0, 0, 1],
    ])


def sp4_klingen_generators(p) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    p = level(p)
    gens = (klingen_unipotent(p, 0, 0), klingen_unipotent(0, p, 0), klingen_unipotent(0, 0, p))
    for g in gens:
        if not symplectic_check(g):
            raise InvariantError("Klingen unipotent generator is not symplectic")
    return gens


def euler_number(a: IntMatrix, b: IntMatrix, c: IntMatrix) -> int:
    """Euler number of <a, b, c> with c central: [a, b] = c^e."""
    for x in (a, b):
        if x @ c != c @ x:
            raise InvariantError("c is not central")
    return abs(central_power(commutator(a, b), c))


# --------------------------------------------------------------------------
# mapping tori and free-base semidirect products


def mapping_torus_cohomology(phi, label: str = "mapping torus", p: int | None = None) -> GradedCohomology:
    """Cohomology of Z^n x| Z with the generator acting by ``phi``.

    H^k = ker(L^k(phi*) - I) (+) coker(L^(k-1)(phi*) - I), phi* = phi^T
    acting on Hom(Z^n, Z).  The kernel is free, so the sum splits.
    """
    phi = as_matrix(phi)
    if phi.rows != phi.cols or phi.det() not in (1, -1):
        raise ValueError("phi must be invertible over Z")
    n = phi.rows
    pull = phi.T
    diffs = [exterior_power(pull, k) - IntMatrix.identity(comb(n, k)) for k in range(n + 1)]
    groups = []
    for k in range(n + 2):
        ker = kernel_rank(diffs[k]) if k <= n else 0
        coker = cokernel(diffs[k - 1]) if k >= 1 else FinAb.zero()
        groups.append(FinAb(ker) + coker)
    return GradedCohomology(label, p, tuple(groups))


def semidirect_free_assembly(base, fiber_cohomology: Sequence[Summands],
                             label: str = "", p: int | None = None) -> GradedCohomology:
    """Cohomology of N x| F for F free, from the modules H^i(N) over F."""
    degrees = [_summands(x) for x in fiber_cohomology]
    if not degrees:
        raise ValueError("fiber cohomology is empty")
    head = degrees[0]
    if len(head) != 1 or head[0].dim != 1 or head[0].torsion_modulus or any(
            a != IntMatrix.identity(1) for a in head[0].actions):
        raise ValueError("degree 0 of the fiber must be the trivial module Z")
    groups = []
    flagged = []
    for i in range(len(degrees) + 1):
        h0 = module_invariants(degrees[i]) if i < len(degrees) else FinAb.zero()
        h1 = free_h1(base, degrees[i - 1]) if i >= 1 else FinAb.zero()
        if h0.torsion and not h1.is_zero:
            flagged.append(i)
        groups.append(h0 + h1)
    return GradedCohomology(label, p, tuple(groups), tuple(flagged))


def free_abelian_fiber(actions: Sequence[IntMatrix], label: str) -> list[MatrixModule]:
    """H^q(Z^n) = Lambda^q of the contragredient, for q = 0..n."""
    actions = tuple(as_matrix(a) for a in actions)
    n = actions[0].rows
    h1 = MatrixModule(n, actions, 0, label).dual()
    return [h1.exterior_power(q) for q in range(n + 1)]


# --------------------------------------------------------------------------
# the parabolic tables


@lru_cache(maxsize=None)
def _generators(p: int) -> FreeMatrixGroup:
    return congruence_generators(p)


def natural_module(g: FreeMatrixGroup) -> MatrixModule:
    return MatrixModule(2, g.generators, 0, "M")


def sl3_fiber(g: FreeMatrixGroup, which: str) -> list[MatrixModule]:
    if which == "P1":
        # unipotent radical (x, y) in the first row; A acts by T_A = A^T, a
        # right action, so the left action is A -> (A^-1)^T
        return free_abelian_fiber([a.inverse().T for a in g.generators], "E1")
    if which == "P2":
        # unipotent radical in the last column, A acts by v -> A v
        return free_abelian_fiber(g.generators, "E2")
    raise ValueError(f"no abelian fiber for {which}")


def sl3_parabolic_cohomology(p, which: str, generators: FreeMatrixGroup | None = None) -> GradedCohomology:
    """Cohomology of B, P1 or P2 intersected with Gamma(p) in SL_3(Z)."""
    p = level(p)
    label = f"{which} n Gamma({p})"
    if which == "B":
        e = euler_number(*sl3_borel_generators(p))
        return nilmanifold_cohomology(e, label, p)
    if which not in ("P1", "P2"):
        raise ValueError(f"unknown SL3 parabolic {which!r}")
    g = generators or _generators(p)
    return semidirect_free_assembly(g, sl3_fiber(g, which), label, p)


def sp4_g2_fiber(g: FreeMatrixGroup) -> list[list[MatrixModule]]:
    """Modules H^k(U) for the Klingen unipotent radical U in G2 n Gamma(p)."""
    e = euler_number(*sp4_klingen_generators(g.p))
    # C acts on the column (u1, u2), i.e. naturally on U / centre
    return nilmanifold_fiber_modules(e, g.generators)


def sp4_parabolic_cohomology(p, which: str, generators: FreeMatrixGroup | None = None) -> GradedCohomology:
    """Cohomology of G0, G1 or G2 intersected with Gamma(p) in Sp_4(Z)."""
    p = level(p)
    label = f"{which} n Gamma({p})"
    if which == "G0":
        t = IntMatrix.from_rows([[1, p], [0, 1]])
        return mapping_torus_cohomology(sym2_hom(t), label, p)
    g = generators or _generators(p)
    if which == "G1":
        # Siegel radical: symmetric B with X acting by X B X^T
        return semidirect_free_assembly(g, free_abelian_fiber([sym2_hom(x) for x in g.generators], "V"),
                                        label, p)
    if which == "G2":
        return semidirect_free_assembly(g, sp4_g2_fiber(g), label, p)
    raise ValueError(f"unknown Sp4 parabolic {which!r}")


def parabolic_cohomology(group: str, p, which: str) -> GradedCohomology:
    group = group.lower()
    if group == "sl3":
        return sl3_parabolic_cohomology(p, which)
    if group == "sp4":
        return sp4_parabolic_cohomology(p, which)
    raise ValueError(f"unknown group {group!r}")


def h1_natural_plus_dual(p, q: int = 0, generators: FreeMatrixGroup | None = None) -> FinAb:
    """H^1(Gamma_2(p), M (+) M*), over Z or with Z/q coefficients."""
    g = generators or _generators(level(p))
    m = natural_module(g)
    return free_h1(g, m.direct_sum(m.dual()).with_modulus(q))
