#!/usr/bin/env python3
"""Dense-rank oracle for Hochschild (co)homology dimensions.

Builds the unnormalized Hochschild chain and cochain complexes straight from
hand-entered structure constants and reduces them with plain Gaussian
elimination. Small problems use exact Fractions; larger ones use numpy over two
large primes (the results must agree). Output is the frozen table used by
tests/test_hochschild.cpp and the acceptance suite.
"""
import itertools
import sys
from fractions import Fraction

import numpy as np

PRIMES = (1_000_003, 998_244_353)


def algebra(dim, products, unit):
    table = {}
    for (i, j), out in products.items():
        table[(i, j)] = out  # dict l -> coeff
    return {"d": dim, "mult": table, "unit": unit}


def path_algebra(nverts, arrows, paths):
    # paths: list of (name, source, target, arrow-sequence in composition order
    # first-to-last). Product p*q = "q then p" when target(q) == source(p).
    basis = [("e%d" % v, v, v, ()) for v in range(nverts)] + paths
    index = {b[3] if b[3] else ("e", b[1]): k for k, b in enumerate(basis)}
    products = {}
    for i, (_, si, ti, wi) in enumerate(basis):
        for j, (_, sj, tj, wj) in enumerate(basis):
            if tj != si:
                continue
            if not wi and not wj:
                products[(i, j)] = {index[("e", si)]: 1}
            elif not wi:
                products[(i, j)] = {j: 1}
            elif not wj:
                products[(i, j)] = {i: 1}
            else:
                w = wj + wi
                if w in index:
                    products[(i, j)] = {index[w]: 1}
    unit = {k: 1 for k in range(nverts)}
    return algebra(len(basis), products, unit)


def mul(alg, i, j):
    return alg["mult"].get((i, j), {})


def ground():
    return algebra(1, {(0, 0): {0: 1}}, {0: 1})


def dual():
    return algebra(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, {0: 1})


def truncated_cubic():
    # 1, x, x^2
    prods = {}
    for i in range(3):
        for j in range(3):
            if i + j < 3:
                prods[(i, j)] = {i + j: 1}
    return algebra(3, prods, {0: 1})


def kxk():
    return algebra(2, {(0, 0): {0: 1}, (1, 1): {1: 1}}, {0: 1, 1: 1})


def t2():
    # basis e11, e12, e22
    return algebra(3, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1},
                       (2, 2): {2: 1}}, {0: 1, 2: 1})


def m2():
    # e11, e12, e21, e22: e_ij e_kl = delta_jk e_il
    units = [(0, 0), (0, 1), (1, 0), (1, 1)]
    prods = {}
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if j == k:
                prods[(a, b)] = {units.index((i, l)): 1}
    return algebra(4, prods, {0: 1, 3: 1})


def a3_linear():
    # 1 -a-> 2 -b-> 3
    return path_algebra(3, None, [("a", 0, 1, ("a",)), ("b", 1, 2, ("b",)),
                                  ("ba", 0, 2, ("a", "b"))])


def a3_sink():
    # 1 -u-> 2 <-v- 3
    return path_algebra(3, None, [("u", 0, 1, ("u",)), ("v", 2, 1, ("v",))])


def chain_boundary(alg, n):
    d = alg["d"]
    rows = d ** n
    cols = d ** (n + 1)
    mat = {}

    def idx(t):
        k = 0
        for x in t:
            k = k * d + x
        return k

    for c, t in enumerate(itertools.product(range(d), repeat=n + 1)):
        for i in range(n):
            for l, v in mul(alg, t[i], t[i + 1]).items():
                r = idx(t[:i] + (l,) + t[i + 2:])
                mat[(r, c)] = mat.get((r, c), 0) + (-1) ** i * v
        for l, v in mul(alg, t[n], t[0]).items():
            r = idx((l,) + t[1:n])
            mat[(r, c)] = mat.get((r, c), 0) + (-1) ** n * v
    return rows, cols, mat


def cochain_delta(alg, n):
    # C^n has basis (tuple of n inputs, output l); index tuple*d + l
    d = alg["d"]
    rows = d ** (n + 2)
    cols = d ** (n + 1)
    mat = {}

    def idx(t, l):
        k = 0
        for x in t:
            k = k * d + x
        return k * d + l

    for c, (t, l) in enumerate(itertools.product(
            itertools.product(range(d), repeat=n), range(d))):
        # column = f with f(t) = e_l; evaluate delta f on every (n+1)-tuple s
        for s in itertools.product(range(d), repeat=n + 1):
            out = {}
            if s[1:] == t:
                for o, v in mul(alg, s[0], l).items():
                    out[o] = out.get(o, 0) + v
            for i in range(n):
                prod = mul(alg, s[i], s[i + 1])
                for m, v in prod.items():
                    if s[:i] + (m,) + s[i + 2:] == t:
                        out[l] = out.get(l, 0) + (-1) ** (i + 1) * v
            if s[:n] == t:
                for o, v in mul(alg, l, s[n]).items():
                    out[o] = out.get(o, 0) + (-1) ** (n + 1) * v
            for o, v in out.items():
                if v:
                    r = idx(s, o)
                    mat[(r, c)] = mat.get((r, c), 0) + v
    return rows, cols, mat


def rank_exact(rows, cols, mat):
    m = [[Fraction(0)] * cols for _ in range(rows)]
    for (r, c), v in mat.items():
        m[r][c] += v
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rows):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def rank_mod(rows, cols, mat, p):
    if rows == 0 or cols == 0:
        return 0
    m = np.zeros((rows, cols), dtype=np.int64)
    for (r, c), v in mat.items():
        m[r, c] = (m[r, c] + v) % p
    # drop empty rows/cols first; rank is unchanged
    m = m[np.any(m != 0, axis=1)]
    if m.size == 0:
        return 0
    m = m[:, np.any(m != 0, axis=0)]
    if m.shape[0] > m.shape[1]:
        m = m.T.copy()
    rank = 0
    nrows, ncols = m.shape
    for c in range(ncols):
        nz = np.nonzero(m[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, c]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        others = np.nonzero(m[:, c])[0]
        others = others[others != rank]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[rank])) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(rows, cols, mat):
    if rows * cols <= 40_000:
        return rank_exact(rows, cols, mat)
    ranks = {rank_mod(rows, cols, mat, p) for p in PRIMES}
    assert len(ranks) == 1, ranks
    return ranks.pop()


def hh_dims(alg, top):
    d = alg["d"]
    ranks = [0] + [rank(*chain_boundary(alg, n)) for n in range(1, top + 2)]
    return [d ** (n + 1) - ranks[n] - ranks[n + 1] for n in range(top + 1)]


def hh_co_dims(alg, top):
    d = alg["d"]
    ranks = [rank(*cochain_delta(alg, n)) for n in range(top + 1)]
    out = []
    for n in range(top + 1):
        before = ranks[n - 1] if n > 0 else 0
        out.append(d ** (n + 1) - ranks[n] - before)
    return out


if __name__ == "__main__":
    cases = {
        "ground_field": (ground(), 3, 3),
        "dual_numbers": (dual(), 4, 2),
        "truncated_cubic": (truncated_cubic(), 4, 3),
        "k_times_k": (kxk(), 3, 2),
        "upper_triangular_2": (t2(), 3, 2),
        "matrix_2": (m2(), 3, 2),
        "a3_linear": (a3_linear(), 3, 2),
        "a3_sink": (a3_sink(), 3, 2),
    }
    only = set(sys.argv[1:])
    for name, (alg, top, cotop) in cases.items():
        if only and name not in only:
            continue
        print(name, "HH_*", hh_dims(alg, top), "HH^*", hh_co_dims(alg, cotop),
              flush=True)
