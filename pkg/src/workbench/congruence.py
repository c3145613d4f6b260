"""Free generators for the principal congruence subgroup of level p in SL_2(Z).

The subgroup is the kernel of PSL_2(Z) = <s, u | s^2, u^3> -> PSL_2(F_p).
We walk the Schreier graph of PSL_2(F_p) under s and u, take a BFS tree,
and read off Schreier generators.  Generators whose words collapse in the
free product (tree edges, conjugates of s^2 and u^3) are dropped, and the
relators s^2 and u^3 let one generator per s-orbit and one per u-orbit be
eliminated.  What survives is a free basis; its size is certified against
1 + (p-1)p(p+1)/12.
"""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass

from . import kernels
from .finite_lie import InvariantError, level
from .linalg import IntMatrix, as_matrix

S = IntMatrix.from_rows([[0, -1], [1, 0]])
U = IntMatrix.from_rows([[0, -1], [1, 1]])    # S @ [[1, 1], [0, 1]]
U_INV = U.inverse()

_LETTER_MATRIX = {"s": S, "u": U, "U": U_INV}   # "U" stands for u^-1
_LETTER_NAME = {"s": "s", "u": "u", "U": "u^-1"}


def rank_formula(p) -> int:
    p = level(p)
    return 1 + (p - 1) * p * (p + 1) // 12


def reduce_word(word: str) -> str:
    """Normal form in Z/2 * Z/3 for a word over s, u, U (U = u^-1)."""
    # u-exponents live in Z/3; s is an involution
    out: list[str] = []
    for ch in word:
        out.append(ch)
        while len(out) >= 2:
            a, b = out[-2], out[-1]
            if a == "s" and b == "s":
                del out[-2:]
            elif a in "uU" and b in "uU":
                e = ((1 if a == "u" else 2) + (1 if b == "u" else 2)) % 3
                del out[-2:]
                if e:
                    out.append("u" if e == 1 else "U")
            else:
                break
    return "".join(out)


def invert_word(word: str) -> str:
    inv = {"s": "s", "u": "U", "U": "u"}
    return "".join(inv[c] for c in reversed(word))


def word_matrix(word: str) -> IntMatrix:
    m = IntMatrix.identity(2)
    for ch in word:
        m = m @ _LETTER_MATRIX[ch]
    return m


def format_word(word: str) -> str:
    return " ".join(_LETTER_NAME[c] for c in word) if word else "1"


@dataclass(frozen=True)
class FreeMatrixGroup:
    p: int
    generators: tuple[IntMatrix, ...]
    rank: int
    schreier_words: tuple[str, ...]

    def __post_init__(self):
        if len(self.generators) != self.rank:
            raise InvariantError(f"{len(self.generators)} generators for rank {self.rank}")

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "rank": str(self.rank),
            "generators": [
                {"matrix": g.to_json(), "word": format_word(w)}
                for g, w in zip(self.generators, self.schreier_words)
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> FreeMatrixGroup:
        if isinstance(data, str):
            data = json.loads(data)
        gens = tuple(IntMatrix.from_json(g["matrix"]) for g in data["generators"])
        inv = {v: k for k, v in _LETTER_NAME.items()}
        words = tuple("" if g["word"] == "1" else "".join(inv[t] for t in g["word"].split())
                      for g in data["generators"])
        return cls(int(data["p"]), gens, int(data["rank"]), words)

    def nielsen_variant(self, seed: int = 0) -> FreeMatrixGroup:
        """Another free basis of the same group: shuffle, invert, multiply."""
        rng = random.Random(seed)
        items = list(zip(self.generators, self.schreier_words))
        rng.shuffle(items)
        gens = [g for g, _ in items]
        words = [w for _, w in items]
        for i in range(len(gens)):
            if rng.random() < 0.5:
                gens[i] = gens[i].inverse()
                words[i] = invert_word(words[i])
        if len(gens) > 1:
            gens[0] = gens[0] @ gens[1]
            words[0] = reduce_word(words[0] + words[1])
        return FreeMatrixGroup(self.p, tuple(gens), self.rank, tuple(words))


def schreier_graph(p):
    """Elements of PSL_2(F_p) with the right actions of s and u.

    Returns ``(elements, act_s, act_u, identity_index)``.
    """
    p = level(p)
    elems, act_s, act_u = kernels.psl2_tables(p, list(S.entries), list(U.entries))
    ident = [i for i, e in enumerate(elems.tolist()) if e == [1, 0, 0, 1]]
    if len(ident) != 1:
        raise InvariantError("identity missing from PSL_2 enumeration")
    return elems, act_s.tolist(), act_u.tolist(), ident[0]


def _bfs_transversal(act_s, act_u, root):
    n = len(act_s)
    inv_u = [0] * n
    for i, j in enumerate(act_u):
        inv_u[j] = i
    moves = (("s", act_s), ("s", act_s), ("u", act_u), ("U", inv_u))   # s, s^-1, u, u^-1
    word = {root: ""}
    queue = deque([root])
    while queue:
        c = queue.popleft()
        for letter, table in moves:
            nxt = table[c]
            if nxt not in word:
                word[nxt] = word[c] + letter
                queue.append(nxt)
    return word


def congruence_generators(p) -> FreeMatrixGroup:
    """Free generating set of Gamma_2(p), each matrix = I mod p with det 1."""
    p = level(p)
    elems, act_s, act_u, root = schreier_graph(p)
    n = len(act_s)
    if n != p * (p * p - 1) // 2:
        raise InvariantError(f"|PSL_2(F_{p})| enumerated as {n}")
    tau = _bfs_transversal(act_s, act_u, root)
    if len(tau) != n:
        raise InvariantError("Schreier graph is not connected")

    def schreier_word(c, letter, table):
        return reduce_word(tau[c] + letter + invert_word(tau[table[c]]))

    kept: list[str] = []
    seen_s: set[int] = set()
    for c in range(n):
        if c in seen_s:
            continue
        orbit = [c, act_s[c]]
        seen_s.update(orbit)
        if orbit[0] == orbit[1]:
            raise InvariantError("s fixes a coset: the kernel would contain torsion")
        words = [schreier_word(x, "s", act_s) for x in orbit]
        if reduce_word(words[0] + words[1]):
            raise InvariantError("s-orbit relation does not reduce to a relator conjugate")
        if words[0]:
            kept.append(words[0])
    seen_u: set[int] = set()
    for c in range(n):
        if c in seen_u:
            continue
        orbit = [c, act_u[c], act_u[act_u[c]]]
        if len(set(orbit)) != 3:
            raise InvariantError("u fixes a coset: the kernel would contain torsion")
        seen_u.update(orbit)
        words = [schreier_word(x, "u", act_u) for x in orbit]
        if reduce_word("".join(words)):
            raise InvariantError("u-orbit relation does not reduce to a relator conjugate")
        nontrivial = [w for w in words if w]
        # the product relation eliminates one nontrivial generator per orbit
        kept.extend(nontrivial[:-1])

    expected = rank_formula(p)
    if len(kept) != expected:
        raise InvariantError(f"found {len(kept)} free generators at p={p}, expected {expected}")

    gens = []
    for w in kept:
        m = word_matrix(w)
        if (m[0, 0] - 1) % p:
            m = -m
        if m.mod(p) != IntMatrix.identity(2).mod(p) or m.det() != 1:
            raise InvariantError(f"Schreier generator {format_word(w)} is not in Gamma({p})")
        gens.append(m)
    return FreeMatrixGroup(p, tuple(gens), expected, tuple(kept))


def word_image_is_trivial(p, word: str) -> bool:
    """Follow ``word`` through the Schreier graph from the identity coset."""
    _, act_s, act_u, root = schreier_graph(p)
    inv_u = [0] * len(act_u)
    for i, j in enumerate(act_u):
        inv_u[j] = i
    table = {"s": act_s, "u": act_u, "U": inv_u}
    c = root
    for ch in word:
        c = table[ch][c]
    return c == root


def sym2_hom(a) -> IntMatrix:
    """Action of SL_2(Z) on binary quadratic forms: B -> X B X^T on (b11, b12, b22)."""
    a = as_matrix(a)
    if a.shape != (2, 2):
        raise ValueError("sym2_hom expects a 2x2 matrix")
    if a.det() != 1:
        raise ValueError(f"sym2_hom needs determinant 1, got {a.det()}")
    (x, y), (z, w) = a.tolist()
    return IntMatrix.from_rows([
        [x * x, 2 * x * y, y * y],
        [x * z, x * w + y * z, y * w],
        [z * z, 2 * z * w, w * w],
    ])
