"""Mod-p Tits buildings of SL_3 and Sp_4 as bipartite incidence graphs.

Left vertices are lines of F_p^n, right vertices are planes (all planes for
SL_3, Lagrangian planes for Sp_4), edges are incidences.  Subspaces are
stored in reduced row-echelon form, so equal subspaces have equal keys.

The quotient of the rational building by Gamma(p) is not the mod-p
building once p > 3: a line of Z^n reduces to a nonzero vector up to
sign, not to a projective point.  ``congruence_quotient_graph`` builds that
graph (vectors up to sign, planes carrying a volume form up to sign); it
covers the mod-p building with fibres of size (p-1)/2 on vertices.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import kernels
from .finite_lie import (
    J, InvariantError, level, sl3_double_coset_counts, sp4_indices,
)
from .linalg import IntMatrix, invariant_factors

Vector = tuple[int, ...]
Subspace = tuple[Vector, ...]


def rref_mod(rows, p) -> Subspace:
    """Reduced row-echelon form over F_p, zero rows dropped."""
    m = [[x % p for x in r] for r in rows]
    ncols = len(m[0]) if m else 0
    out_rows = 0
    for c in range(ncols):
        piv = next((i for i in range(out_rows, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[out_rows], m[piv] = m[piv], m[out_rows]
        inv = pow(m[out_rows][c], -1, p)
        m[out_rows] = [x * inv % p for x in m[out_rows]]
        for i in range(len(m)):
            if i != out_rows and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[out_rows])]
        out_rows += 1
    return tuple(tuple(r) for r in m[:out_rows])


def projective_points(p, n) -> list[Vector]:
    """Lines of F_p^n, each as the vector whose first nonzero entry is 1."""
    pts = []
    for v in product(range(p), repeat=n):
        lead = next((x for x in v if x), 0)
        if lead == 1:
            pts.append(v)
    return pts


def signed_vectors(p, n) -> list[Vector]:
    """Nonzero vectors of F_p^n up to sign (first nonzero entry <= (p-1)/2)."""
    half = (p - 1) // 2
    out = []
    for v in product(range(p), repeat=n):
        lead = next((x for x in v if x), 0)
        if 1 <= lead <= half:
            out.append(v)
    return out


def normalise_point(v, p) -> Vector:
    lead = next((x for x in v if x % p), None)
    if lead is None:
        raise ValueError("zero vector has no line")
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in v)


def normalise_signed(v, p) -> Vector:
    v = tuple(x % p for x in v)
    lead = next((x for x in v if x), None)
    if lead is None:
        raise ValueError("zero vector")
    if lead > (p - 1) // 2:
        v = tuple((-x) % p for x in v)
    return v


def subspace_points(w: Subspace, p) -> list[Vector]:
    """Projective points of the span of the rows of ``w``."""
    dim = len(w)
    n = len(w[0])
    pts = set()
    for coeffs in product(range(p), repeat=dim):
        if any(coeffs):
            v = tuple(sum(c * r[j] for c, r in zip(coeffs, w)) % p for j in range(n))
            pts.add(normalise_point(v, p))
    return sorted(pts)


def form_value(x, y, p, form=J) -> int:
    f = form.tolist()
    n = len(x)
    return sum(x[i] * f[i][j] * y[j] for i in range(n) for j in range(n)) % p


@dataclass(frozen=True)
class BuildingGraph:
    kind: str                      # "SL3" or "Sp4"
    p: int
    left_vertices: tuple            # line representatives
    right_vertices: tuple           # plane representatives (RREF rows, maybe with a volume tag)
    edges: tuple[tuple[int, int], ...]
    quotient: bool = False          # True for the Gamma(p)-quotient graph

    @property
    def num_vertices(self) -> int:
        return len(self.left_vertices) + len(self.right_vertices)

    def degrees(self) -> tuple[list[int], list[int]]:
        left = [0] * len(self.left_vertices)
        right = [0] * len(self.right_vertices)
        for i, j in self.edges:
            left[i] += 1
            right[j] += 1
        return left, right

    def expected_degree(self) -> int:
        if self.quotient:
            return (self.p ** 2 - 1) // 2
        return self.p + 1

    def is_connected(self) -> bool:
        nl = len(self.left_vertices)
        adj = [[] for _ in range(self.num_vertices)]
        for i, j in self.edges:
            adj[i].append(nl + j)
            adj[nl + j].append(i)
        if not adj:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == self.num_vertices

    def validate(self) -> None:
        left, right = self.degrees()
        d = self.expected_degree()
        if any(x != d for x in left + right):
            raise InvariantError(f"{self.kind} graph at p={self.p} is not {d}-regular")
        if len(set(self.edges)) != len(self.edges):
            raise InvariantError("repeated edge")
        if not self.is_connected():
            raise InvariantError(f"{self.kind} graph at p={self.p} is disconnected")

    def boundary_matrix(self) -> IntMatrix:
        """Vertices x edges; each edge is oriented line -> plane."""
        nl = len(self.left_vertices)
        rows = [[0] * len(self.edges) for _ in range(self.num_vertices)]
        for k, (i, j) in enumerate(self.edges):
            rows[i][k] -= 1
            rows[nl + j][k] += 1
        return IntMatrix.from_rows(rows, len(self.edges))

    def edge_list(self) -> str:
        nl = len(self.left_vertices)
        return "".join(f"{i} {nl + j}\n" for i, j in self.edges)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": str(self.p),
            "quotient": self.quotient,
            "left_vertices": [[str(x) for x in v] for v in self.left_vertices],
            "right_vertices": [_right_to_json(w) for w in self.right_vertices],
            "edges": [[str(i), str(j)] for i, j in self.edges],
        }


def _right_to_json(w):
    if w and isinstance(w[0], tuple) and w and isinstance(w[-1], int):
        *rows, vol = w
        return {"basis": [[str(x) for x in r] for r in rows], "volume": str(vol)}
    return {"basis": [[str(x) for x in r] for r in w]}


def _incidence(left, right, p) -> tuple[tuple[int, int], ...]:
    index = {v: i for i, v in enumerate(left)}
    edges = []
    for j, w in enumerate(right):
        for v in subspace_points(w, p):
            edges.append((index[v], j))
    edges.sort()
    return tuple(edges)


def build_sl3_building(p) -> BuildingGraph:
    p = level(p)
    points = projective_points(p, 3)
    planes = sorted({rref_mod([u, v], p) for u in points for v in points if u < v})
    g = BuildingGraph("SL3", p, tuple(points), tuple(planes), _incidence(points, planes, p))
    if len(points) != p * p + p + 1 or len(planes) != p * p + p + 1:
        raise InvariantError("wrong number of points or planes in P^2(F_p)")
    g.validate()
    return g


def lagrangian_planes(p) -> list[Subspace]:
    points = projective_points(p, 4)
    planes = set()
    for a, u in enumerate(points):
        for v in points[a + 1:]:
            if form_value(u, v, p) == 0:
                planes.add(rref_mod([u, v], p))
    return sorted(planes)


def build_sp4_building(p) -> BuildingGraph:
    p = level(p)
    points = projective_points(p, 4)
    # every line is isotropic for an alternating form; check it anyway
    if any(form_value(v, v, p) for v in points):
        raise InvariantError("J is not alternating")
    planes = lagrangian_planes(p)
    for w in planes:
        if any(form_value(x, y, p) for x in w for y in w):
            raise InvariantError("plane is not totally isotropic")
    expected = (p + 1) * (p * p + 1)
    if len(points) != expected or len(planes) != expected:
        raise InvariantError(f"expected {expected} points and Lagrangians, got {len(points)}, {len(planes)}")
    g = BuildingGraph("Sp4", p, tuple(points), tuple(planes), _incidence(points, planes, p))
    g.validate()
    return g


def build_building(group: str, p) -> BuildingGraph:
    group = group.lower()
    if group == "sl3":
        return build_sl3_building(p)
    if group == "sp4":
        return build_sp4_building(p)
    raise ValueError(f"unknown group {group!r}")


def graph_homology(g: BuildingGraph) -> tuple[int, int]:
    """``(rank H_0, rank H_1)`` from the Smith form of the boundary matrix."""
    if not g.is_connected():
        raise InvariantError("graph is disconnected")
    d = invariant_factors(g.boundary_matrix())
    if any(x > 1 for x in d):
        raise InvariantError("torsion in the homology of a graph")
    r = sum(1 for x in d if x)
    h0 = g.num_vertices - r
    h1 = len(g.edges) - r
    if h0 != 1:
        raise InvariantError(f"H_0 has rank {h0} for a connected graph")
    return h0, h1


def graph_homology_mod_q(g: BuildingGraph, q: int) -> tuple[int, int]:
    """Same ranks over F_q, from the fast elimination kernel."""
    b = g.boundary_matrix().to_numpy()
    r = kernels.rank_mod_q(b, q)
    return g.num_vertices - r, len(g.edges) - r


def steinberg_dimension(group: str, p) -> int:
    p = level(p)
    return p ** 3 if group.lower() == "sl3" else p ** 4


# --------------------------------------------------------------------------
# the Gamma(p) quotient


def congruence_quotient_graph(p, group: str = "sl3") -> BuildingGraph:
    """Gamma(p) \\ building: vectors up to sign against (plane, volume up to sign)."""
    p = level(p)
    group = group.lower()
    n = 3 if group == "sl3" else 4
    if group == "sl3":
        planes = sorted({rref_mod([u, v], p) for u in projective_points(p, 3)
                         for v in projective_points(p, 3) if u < v})
    elif group == "sp4":
        planes = lagrangian_planes(p)
    else:
        raise ValueError(f"unknown group {group!r}")
    left = signed_vectors(p, n)
    index = {v: i for i, v in enumerate(left)}
    half = (p - 1) // 2
    right = []
    edges = []
    for w in planes:
        members = sorted({normalise_signed(tuple(sum(c * r[j] for c, r in zip(coeffs, w)) for j in range(n)), p)
                          for coeffs in product(range(p), repeat=2) if any(coeffs)})
        for vol in range(1, half + 1):
            k = len(right)
            right.append(tuple(w) + (vol,))
            edges.extend((index[v], k) for v in members)
    edges.sort()
    g = BuildingGraph(group.upper() if group == "sl3" else "Sp4", p, tuple(left), tuple(right),
                      tuple(edges), quotient=True)
    g.validate()
    return g


def covering_map(quotient: BuildingGraph, building: BuildingGraph) -> tuple[list[int], list[int]]:
    """Vertex maps quotient -> building, checked to send edges to edges."""
    p = building.p
    lidx = {v: i for i, v in enumerate(building.left_vertices)}
    ridx = {w: j for j, w in enumerate(building.right_vertices)}
    lmap = [lidx[normalise_point(v, p)] for v in quotient.left_vertices]
    rmap = [ridx[tuple(w[:-1])] for w in quotient.right_vertices]
    bedges = set(building.edges)
    if any((lmap[i], rmap[j]) not in bedges for i, j in quotient.edges):
        raise InvariantError("quotient edge does not map to a building edge")
    return lmap, rmap


@dataclass(frozen=True)
class ChainDecomposition:
    group: str
    p: int
    c0_summands: dict      # stabilizer label -> number of orbit summands
    c1_summands: dict

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "p": str(self.p),
            "c0_summands": {k: str(v) for k, v in self.c0_summands.items()},
            "c1_summands": {k: str(v) for k, v in self.c1_summands.items()},
        }


def chain_decomposition(p, group: str = "sl3") -> ChainDecomposition:
    """Orbit summands of the cellular chains as Gamma(p)-modules.

    Counts come from the quotient graph and must match the finite-group
    indices.
    """
    p = level(p)
    group = group.lower()
    q = congruence_quotient_graph(p, group)
    if group == "sl3":
        rep = sl3_double_coset_counts(p).indices
        labels = (("P1", "I1"), ("P2", "I2"), ("B", "I0"))
    else:
        rep = sp4_indices(p).indices
        # lines are stabilised by the Klingen parabolic G2, Lagrangians by G1
        labels = (("G2", "j2"), ("G1", "j1"), ("G0", "j0"))
    counts = (len(q.left_vertices), len(q.right_vertices), len(q.edges))
    for (stab, name), c in zip(labels, counts):
        if rep[name] != c:
            raise InvariantError(f"{name} = {rep[name]} but the quotient graph has {c} {stab}-cells")
    return ChainDecomposition(
        group="SL3" if group == "sl3" else "Sp4", p=p,
        c0_summands={labels[0][0]: counts[0], labels[1][0]: counts[1]},
        c1_summands={labels[2][0]: counts[2]},
    )


def left_orbit(g: BuildingGraph, generators, start: int = 0) -> set[int]:
    """Orbit of a left vertex under matrices acting on column vectors mod p."""
    p = g.p
    index = {v: i for i, v in enumerate(g.left_vertices)}
    mats = [np.asarray(m, dtype=np.int64) for m in generators]
    seen = {start}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        v = np.asarray(g.left_vertices[i], dtype=np.int64)
        for m in mats:
            j = index[normalise_point(tuple(int(x) for x in m @ v), p)]
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return seen


def sl3_generating_pair(p):
    """A transvection and a 3-cycle permutation matrix; they generate SL_3(F_p)."""
    t = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    c = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    return t, c


def dumps(g: BuildingGraph) -> str:
    return json.dumps(g.to_json(), sort_keys=True)
