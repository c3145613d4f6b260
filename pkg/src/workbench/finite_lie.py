"""Orders and coset counts for SL_3(F_p), Sp_4(F_p) and integral parabolics.

Stabilizer orders here are those of the images mod p of the *integral*
Borel and parabolic subgroups.  Their Levi parts only contain the
diagonal signs available over Z, so they are smaller than the algebraic
subgroups of the finite group by factors of (p-1)/2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import kernels
from .linalg import IntMatrix, as_matrix

# the alternating form preserved by Sp_4
J = IntMatrix.from_rows([
    [0, 0, 0, -1],
    [0, 0, -1, 0],
    [0, 1, 0, 0],
    [1, 0, 0, 0],
])


class InvariantError(RuntimeError):
    """An internal consistency check failed."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PrimeLevel:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 3 or not is_prime(self.p):
            raise ValueError(f"level must be an odd prime, got {self.p!r}")

    def __int__(self):
        return self.p


def level(p) -> int:
    return PrimeLevel(int(p) if not isinstance(p, PrimeLevel) else p.p).p


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise InvariantError(f"{what}: {num} is not divisible by {den}")
    return q


@dataclass(frozen=True)
class CosetCountReport:
    group: str
    p: int
    group_order: int
    stabilizer_orders: dict = field(default_factory=dict)
    indices: dict = field(default_factory=dict)
    pairing: dict = field(default_factory=dict)   # index name -> stabilizer name

    def check(self) -> None:
        for name, stab in self.pairing.items():
            if self.indices[name] * self.stabilizer_orders[stab] != self.group_order:
                raise InvariantError(f"{name} * |{stab}| != |{self.group}|")

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "p": str(self.p),
            "group_order": str(self.group_order),
            "stabilizer_orders": {k: str(v) for k, v in self.stabilizer_orders.items()},
            "indices": {k: str(v) for k, v in self.indices.items()},
        }


# --------------------------------------------------------------------------
# SL_3


def sl3_order(p) -> int:
    p = level(p)
    return p ** 3 * (p ** 3 - 1) * (p ** 2 - 1)


def sl3_stabilizer_orders(p) -> tuple[int, int, int]:
    """Orders of the images mod p of the integral B, P1, P2 in SL_3."""
    p = level(p)
    # Levi signs: diag(+-1, +-1, +-1) with product 1 for B; one sign times
    # a det +-1 block for the maximal parabolics
    borel = 4 * p ** 3
    parabolic = 2 * p ** 3 * (p ** 2 - 1)
    return borel, parabolic, parabolic


def sl3_double_coset_counts(p) -> CosetCountReport:
    p = level(p)
    order = sl3_order(p)
    b, p1, p2 = sl3_stabilizer_orders(p)
    report = CosetCountReport(
        group="SL3", p=p, group_order=order,
        stabilizer_orders={"B": b, "P1": p1, "P2": p2},
        indices={
            "I0": _exact_div(order, b, "#I0"),
            "I1": _exact_div(order, p1, "#I1"),
            "I2": _exact_div(order, p2, "#I2"),
        },
        pairing={"I0": "B", "I1": "P1", "I2": "P2"},
    )
    report.check()
    return report


# --------------------------------------------------------------------------
# Sp_4


def sp4_order(p) -> int:
    p = level(p)
    return p ** 4 * (p ** 4 - 1) * (p ** 2 - 1)


def sp4_stabilizer_orders(p) -> tuple[int, int, int]:
    """Orders of the images mod p of the integral G0 (Borel), G1, G2."""
    p = level(p)
    # symplectic diagonals are diag(a, b, 1/b, 1/a): four sign choices
    g0 = 4 * p ** 4
    g1 = 2 * p ** 4 * (p ** 2 - 1)   # Levi GL_2(Z) -> det +-1 in GL_2(F_p)
    g2 = 2 * p ** 4 * (p ** 2 - 1)   # Levi {+-1} x SL_2(Z)
    return g0, g1, g2


def sp4_indices(p) -> CosetCountReport:
    p = level(p)
    order = sp4_order(p)
    g0, g1, g2 = sp4_stabilizer_orders(p)
    report = CosetCountReport(
        group="Sp4", p=p, group_order=order,
        stabilizer_orders={"G0": g0, "G1": g1, "G2": g2},
        indices={
            "j0": _exact_div(order, g0, "j0"),
            "j1": _exact_div(order, g1, "j1"),
            "j2": _exact_div(order, g2, "j2"),
        },
        pairing={"j0": "G0", "j1": "G1", "j2": "G2"},
    )
    report.check()
    return report


def form_blocks() -> tuple[IntMatrix, IntMatrix]:
    """``(Q, minus_Q)`` read off from ``J = [[0, -Q], [Q, 0]]``."""
    rows = J.tolist()
    q = IntMatrix.from_rows([r[:2] for r in rows[2:]])
    minus_q = IntMatrix.from_rows([r[2:] for r in rows[:2]])
    if minus_q != -q or any(x for r in rows[:2] for x in r[:2]) or any(x for r in rows[2:] for x in r[2:]):
        raise InvariantError("J is not of the form [[0, -Q], [Q, 0]]")
    return q, minus_q


def _block(a: IntMatrix, i: int, j: int) -> IntMatrix:
    rows = a.tolist()
    return IntMatrix.from_rows([r[2 * j:2 * j + 2] for r in rows[2 * i:2 * i + 2]])


def block_conditions(a) -> bool:
    """The four 2x2 block equations equivalent to ``A^T J A = J``."""
    a = as_matrix(a)
    q, _ = form_blocks()
    a1, a2, a3, a4 = _block(a, 0, 0), _block(a, 0, 1), _block(a, 1, 0), _block(a, 1, 1)
    z = IntMatrix.zeros(2, 2)
    # expand A^T J A blockwise with J = [[0, -Q], [Q, 0]]
    top_left = a3.T @ q @ a1 - a1.T @ q @ a3
    top_right = a3.T @ q @ a2 - a1.T @ q @ a4
    bottom_left = a4.T @ q @ a1 - a2.T @ q @ a3
    bottom_right = a4.T @ q @ a2 - a2.T @ q @ a4
    return (top_left == z and top_right == -q and bottom_left == q and bottom_right == z)


def symplectic_check(a) -> bool:
    """True iff ``A^T J A = J``; the block formulation must agree."""
    a = as_matrix(a)
    if a.shape != (4, 4):
        raise ValueError("symplectic_check expects a 4x4 matrix")
    direct = a.T @ J @ a == J
    blocks = block_conditions(a)
    if direct != blocks:
        raise InvariantError(f"block conditions disagree with A^T J A = J for\n{a}")
    return direct


# --------------------------------------------------------------------------
# enumeration oracles


def sl3_order_bruteforce(p) -> int:
    return kernels.count_sl3(level(p))


def sp4_order_bruteforce(p) -> int:
    """Count A over F_p with A^T J A = J, column by column."""
    p = level(p)
    vecs = kernels.all_vectors(p, 4)
    form = J.to_numpy()
    return kernels.count_isometries(kernels.gram_table(vecs, form, p), form % p)


def _upper_triangular_with_sign_diagonal(n, p):
    """All upper-triangular matrices over F_p with diagonal entries +-1."""
    above = [(i, j) for i in range(n) for j in range(i + 1, n)]
    free = np.indices((p,) * len(above)).reshape(len(above), -1).T
    out = []
    for signs in product((1, p - 1), repeat=n):
        m = np.zeros((free.shape[0], n, n), dtype=np.int64)
        for k, s in enumerate(signs):
            m[:, k, k] = s
        for col, (i, j) in enumerate(above):
            m[:, i, j] = free[:, col]
        out.append(m)
    return np.concatenate(out)


def sl3_borel_image_bruteforce(p) -> int:
    """Upper-triangular det-1 matrices over F_p with diagonal entries +-1."""
    p = level(p)
    m = _upper_triangular_with_sign_diagonal(3, p)
    det = m[:, 0, 0] * m[:, 1, 1] * m[:, 2, 2] % p
    return int(np.count_nonzero(det == 1))


def sl3_parabolic_image_bruteforce(p) -> int:
    """Det-1 matrices over F_p whose first column is (+-1, 0, 0)."""
    p = level(p)
    total = 0
    for sign in (1, p - 1):
        for rest in product(range(p), repeat=6):
            x, y, a, b, c, d = rest
            if sign * (a * d - b * c) % p == 1:
                total += 1
    return total


def sp4_borel_image_bruteforce(p) -> int:
    """Upper-triangular symplectic matrices over F_p with diagonal +-1."""
    p = level(p)
    m = _upper_triangular_with_sign_diagonal(4, p)
    form = J.to_numpy()
    lhs = np.einsum("nji,jk,nkl->nil", m, form, m) % p
    return int(np.count_nonzero(np.all(lhs == form % p, axis=(1, 2))))
