"""Hot finite-field kernels, each with a numba loop version and a numpy version.

Everything here works on small machine integers (entries < p or < q), so
int64 is exact.  Exact big-integer work lives in :mod:`workbench.linalg`.

The public names (``rank_mod_q``, ``count_sl3``, ``count_isometries``,
``psl2_tables``) dispatch on :data:`workbench._accel.USE_NUMBA`; the
``*_numba`` / ``*_numpy`` variants are always importable so tests and the
benchmark can compare them directly.
"""
import numpy as np

from ._accel import USE_NUMBA, jit


# --------------------------------------------------------------------------
# rank over F_q


def _inv_mod_impl(a, q):
    # extended Euclid; a is nonzero mod q, q prime
    t, new_t = 0, 1
    r, new_r = q, a % q
    while new_r != 0:
        quo = r // new_r
        t, new_t = new_t, t - quo * new_t
        r, new_r = new_r, r - quo * new_r
    return t % q


_inv_mod = jit(_inv_mod_impl)


def _rank_mod_q_body(a, q):
    m = a % q
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = tmp
        inv = _inv_mod(m[r, c], q)
        for j in range(cols):
            m[r, j] = (m[r, j] * inv) % q
        for i in range(r + 1, rows):
            f = m[i, c]
            if f != 0:
                for j in range(c, cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % q
        r += 1
    return r


_rank_mod_q_jit = jit(_rank_mod_q_body)


def rank_mod_q_numba(a, q):
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return int(_rank_mod_q_jit(a, np.int64(q)))


def rank_mod_q_numpy(a, q):
    m = np.array(a, dtype=np.int64) % q
    if m.size == 0:
        return 0
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * _inv_mod(int(m[r, c]), q)) % q
        below = m[r + 1:, c].copy()
        hit = np.nonzero(below)[0] + r + 1
        if hit.size:
            m[hit] = (m[hit] - np.outer(m[hit, c], m[r])) % q
        r += 1
    return r


def rank_mod_q(a, q):
    """Rank of an integer matrix reduced mod the prime ``q``."""
    if USE_NUMBA:
        return rank_mod_q_numba(a, q)
    return rank_mod_q_numpy(a, q)


# --------------------------------------------------------------------------
# brute-force |SL_3(F_p)|


def _count_sl3_body(p):
    # cofactors of the first row, one triple per choice of the last two rows
    m = p ** 6
    minors = np.empty((m, 3), dtype=np.int64)
    k = 0
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    for e in range(p):
                        for f in range(p):
                            minors[k, 0] = (b * f - c * e) % p
                            minors[k, 1] = (c * d - a * f) % p
                            minors[k, 2] = (a * e - b * d) % p
                            k += 1
    total = 0
    for x in range(p):
        for y in range(p):
            for z in range(p):
                for i in range(m):
                    if (x * minors[i, 0] + y * minors[i, 1] + z * minors[i, 2]) % p == 1:
                        total += 1
    return total


_count_sl3_jit = jit(_count_sl3_body)


def count_sl3_numba(p):
    return int(_count_sl3_jit(np.int64(p)))


def count_sl3_numpy(p):
    # vectorise over the last two rows, loop over the first
    tail = np.indices((p,) * 6).reshape(6, -1)
    a, b, c, d, e, f = tail
    minors = np.stack([b * f - c * e, a * f - c * d, a * e - b * d])
    total = 0
    for x in range(p):
        for y in range(p):
            for z in range(p):
                det = x * minors[0] - y * minors[1] + z * minors[2]
                total += int(np.count_nonzero(det % p == 1))
    return total


def count_sl3(p):
    """Count 3x3 matrices over F_p with determinant 1 by exhaustion."""
    if USE_NUMBA:
        return count_sl3_numba(p)
    return count_sl3_numpy(p)


# --------------------------------------------------------------------------
# count matrices preserving a bilinear form, column by column


def all_vectors(p, n):
    """All vectors of F_p^n as rows, in lexicographic order."""
    return np.indices((p,) * n).reshape(n, -1).T.astype(np.int64)


def gram_table(vectors, form, p):
    """``G[i, j] = v_i^T form v_j mod p`` for every pair of vectors."""
    return (vectors @ np.asarray(form, dtype=np.int64) @ vectors.T) % p


def _count_isometries_body(gram, target):
    n = target.shape[0]
    nv = gram.shape[0]
    idx = np.zeros(n, dtype=np.int64)
    level = 0
    total = 0
    idx[0] = -1
    while level >= 0:
        idx[level] += 1
        if idx[level] >= nv:
            level -= 1
            continue
        v = idx[level]
        ok = gram[v, v] == target[level, level]
        k = 0
        while ok and k < level:
            w = idx[k]
            if gram[w, v] != target[k, level] or gram[v, w] != target[level, k]:
                ok = False
            k += 1
        if not ok:
            continue
        if level == n - 1:
            total += 1
        else:
            level += 1
            idx[level] = -1
    return total


_count_isometries_jit = jit(_count_isometries_body)


def count_isometries_numba(gram, target):
    gram = np.ascontiguousarray(gram, dtype=np.int64)
    target = np.ascontiguousarray(target, dtype=np.int64)
    return int(_count_isometries_jit(gram, target))


def count_isometries_numpy(gram, target):
    gram = np.asarray(gram, dtype=np.int64)
    target = np.asarray(target, dtype=np.int64)
    n = target.shape[0]
    diag_ok = [np.nonzero(np.diagonal(gram) == target[k, k])[0] for k in range(n)]
    total = 0
    for first in diag_ok[0]:
        partial = np.array([[first]], dtype=np.int64)
        for level in range(1, n):
            cand = diag_ok[level]
            mask = np.ones((partial.shape[0], cand.size), dtype=bool)
            for k in range(level):
                prev = partial[:, k]
                mask &= gram[np.ix_(prev, cand)] == target[k, level]
                mask &= gram[np.ix_(cand, prev)].T == target[level, k]
            rows, cols = np.nonzero(mask)
            partial = np.column_stack([partial[rows], cand[cols]])
            if partial.shape[0] == 0:
                break
        total += partial.shape[0]
    return total


def count_isometries(gram, target):
    """Number of tuples ``(v_1..v_n)`` with ``gram[v_i, v_j] == target[i, j]``.

    With ``gram`` built from a form ``J`` this counts matrices ``A`` over F_p
    (columns ``v_i``) with ``A^T J A = target``.
    """
    if USE_NUMBA:
        return count_isometries_numba(gram, target)
    return count_isometries_numpy(gram, target)


# --------------------------------------------------------------------------
# PSL_2(F_p) elements and right-multiplication tables


def _psl2_body(p, s, u):
    half = (p - 1) // 2
    size = p ** 4
    lookup = np.full(size, -1, dtype=np.int64)
    count = 0
    elems = np.empty((size, 4), dtype=np.int64)
    for code in range(size):
        a = code // (p * p * p)
        b = (code // (p * p)) % p
        c = (code // p) % p
        d = code % p
        if (a * d - b * c) % p != 1:
            continue
        lead = a
        if lead == 0:
            lead = b
        if lead > half:
            continue
        lookup[code] = count
        elems[count, 0] = a
        elems[count, 1] = b
        elems[count, 2] = c
        elems[count, 3] = d
        count += 1
    elems = elems[:count].copy()
    gens = np.empty((2, 4), dtype=np.int64)
    gens[0] = s
    gens[1] = u
    tables = np.empty((2, count), dtype=np.int64)
    for g in range(2):
        x0, x1, x2, x3 = gens[g, 0], gens[g, 1], gens[g, 2], gens[g, 3]
        for i in range(count):
            a, b, c, d = elems[i, 0], elems[i, 1], elems[i, 2], elems[i, 3]
            na = (a * x0 + b * x2) % p
            nb = (a * x1 + b * x3) % p
            nc = (c * x0 + d * x2) % p
            nd = (c * x1 + d * x3) % p
            lead = na
            if lead == 0:
                lead = nb
            if lead > half:
                na = (p - na) % p
                nb = (p - nb) % p
                nc = (p - nc) % p
                nd = (p - nd) % p
            tables[g, i] = lookup[((na * p + nb) * p + nc) * p + nd]
    return elems, tables


_psl2_jit = jit(_psl2_body)


def psl2_tables_numba(p, s, u):
    elems, tables = _psl2_jit(np.int64(p), np.asarray(s, dtype=np.int64),
                              np.asarray(u, dtype=np.int64))
    return elems, tables[0], tables[1]


def _normalise_sign(m, p):
    half = (p - 1) // 2
    lead = np.where(m[:, 0] != 0, m[:, 0], m[:, 1])
    flip = lead > half
    m = m.copy()
    m[flip] = (p - m[flip]) % p
    return m


def psl2_tables_numpy(p, s, u):
    allm = np.indices((p,) * 4).reshape(4, -1).T.astype(np.int64)
    det = (allm[:, 0] * allm[:, 3] - allm[:, 1] * allm[:, 2]) % p
    sl2 = allm[det == 1]
    elems = _normalise_sign(sl2, p)
    keys = np.unique(((elems[:, 0] * p + elems[:, 1]) * p + elems[:, 2]) * p + elems[:, 3])
    elems = np.stack([keys // p ** 3, (keys // p ** 2) % p, (keys // p) % p, keys % p], axis=1)
    lookup = np.full(p ** 4, -1, dtype=np.int64)
    lookup[keys] = np.arange(keys.size)
    out = []
    for g in (s, u):
        g = np.asarray(g, dtype=np.int64).reshape(2, 2)
        mats = elems.reshape(-1, 2, 2) @ g % p
        prod = _normalise_sign(mats.reshape(-1, 4), p)
        out.append(lookup[((prod[:, 0] * p + prod[:, 1]) * p + prod[:, 2]) * p + prod[:, 3]])
    return elems, out[0], out[1]


def psl2_tables(p, s, u):
    """Elements of PSL_2(F_p) and their images under right multiplication.

    ``s`` and ``u`` are flattened 2x2 matrices.  Elements are sign-normalised
    (first nonzero of ``(a, b)`` at most ``(p-1)/2``) and sorted by their
    base-p code; element 0 is never guaranteed to be the identity.
    """
    if USE_NUMBA:
        return psl2_tables_numba(p, s, u)
    return psl2_tables_numpy(p, s, u)
