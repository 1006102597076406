"""Slow, independent reference computations used by selftest and the tests."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import fano_lattice as fl
from . import numtheory as nt


def carefree_local_count_brute(p: int) -> int:
    """Triples mod p^2 with some entry 0 mod p^2 or two entries 0 mod p."""
    q = p * p
    bad = 0
    for g in itertools.product(range(q), repeat=3):
        if any(x % q == 0 for x in g) or sum(x % p == 0 for x in g) >= 2:
            bad += 1
    return bad


def carefree_local_count_fast(p: int) -> int:
    """Same count as carefree_local_count_brute via residue classes mod p^2."""
    q = p * p
    r = np.arange(q)
    zero_q = (r % q == 0).astype(np.int64)
    zero_p = (r % p == 0).astype(np.int64)
    # count triples with no entry 0 mod p^2 and at most one entry 0 mod p
    unit = int(((1 - zero_p)).sum())
    p_not_q = int((zero_p * (1 - zero_q)).sum())
    good = unit**3 + 3 * p_not_q * unit**2
    return q**3 - good


def automorphism_count_brute() -> int:
    """Collineations of the Fano plane via its 7x7 incidence matrix."""
    inc = np.zeros((7, 7), dtype=int)
    for j, line in enumerate(fl.LINES):
        for p in line:
            inc[p, j] = 1
    cols = {tuple(inc[:, j]) for j in range(7)}
    count = 0
    for perm in itertools.permutations(range(7)):
        moved = inc[list(perm), :]
        if {tuple(moved[:, j]) for j in range(7)} == cols:
            count += 1
    return count


def _integer_gram(g) -> np.ndarray:
    g = fl.as_matrix(g)
    den = 1
    for row in g:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return np.array([[int(x * den) for x in row] for row in g], dtype=np.int64)


def exhaustive_obtuse_superbase(g, bound: int = 6):
    """Search superbases with coordinates in [-bound, bound] for an obtuse one.

    v1, v2, v3 range over short vectors of the lattice with Gram g (written
    in the original basis) and v0 = -(v1 + v2 + v3).  Returns the 4x4 Gram of
    the first obtuse superbase found, or None.
    """
    gi = _integer_gram(g)
    scale = Fraction(fl.as_matrix(g)[0][0]) / int(gi[0][0]) if gi[0][0] else None
    if scale is None:
        raise ValueError("degenerate Gram")
    start = fl.superbase_from_basis(g)
    limit = sum(start[i][i] for i in range(4)) / scale / 2  # each obtuse vector is at most half the sum
    rng = range(-bound, bound + 1)
    cand = np.array([c for c in itertools.product(rng, repeat=3) if any(c)], dtype=np.int64)
    norms = np.einsum("ij,jk,ik->i", cand, gi, cand)
    keep = norms <= limit
    cand, norms = cand[keep], norms[keep]
    order = np.argsort(norms, kind="stable")
    cand, norms = cand[order], norms[order]
    m = cand @ gi @ cand.T
    n = len(cand)
    for i in range(n):
        js = np.nonzero(m[i, i + 1 :] <= 0)[0] + i + 1
        for j in js:
            ks = np.arange(j + 1, n)
            ks = ks[(m[i, ks] <= 0) & (m[j, ks] <= 0)]
            if not len(ks):
                continue
            # v0 . v_t <= 0 for t in {i, j, k}
            ok = (
                (norms[i] + m[i, j] + m[i, ks] >= 0)
                & (norms[j] + m[i, j] + m[j, ks] >= 0)
                & (norms[ks] + m[i, ks] + m[j, ks] >= 0)
            )
            for k in ks[ok]:
                basis = np.array([cand[i], cand[j], cand[k]])
                if abs(round(np.linalg.det(basis))) != 1:
                    continue
                v0 = -basis.sum(axis=0)
                vecs = np.vstack([v0, basis])
                gram = vecs @ gi @ vecs.T
                return fl.as_matrix([[Fraction(int(x)) * scale for x in row] for row in gram])
    return None


def carefree_triples_brute(n_sq, r1, r2, case: str, bound: int) -> list:
    """All *-strongly carefree triples of the case in the region, |g_i| <= bound."""
    from .census import RESIDUE_CLASSES

    out = []
    vals = [x for x in range(-bound, bound + 1) if x and nt.is_squarefree(x)]
    for g in itertools.product(vals, repeat=3):
        if len(set(g)) != 3:
            continue
        if any(nt.gcd_star(g[a], g[b]) != 1 for a, b in ((0, 1), (0, 2), (1, 2))):
            continue
        if (g[0] % 4, g[1] % 4, g[2] % 4) not in RESIDUE_CLASSES[case]:
            continue
        if Fraction((g[0] * g[1] * g[2]) ** 2) >= n_sq:
            continue
        x, y = Fraction(abs(g[2]), abs(g[0])), Fraction(abs(g[2]), abs(g[1]))
        if not (r1 <= x <= y < r2):
            continue
        if abs(g[0]) == abs(g[1]) == 1 and g[1] * g[2] < 0:
            continue
        out.append(g)
    return sorted(out)


def dirichlet_local(p: int, k: int, *factors) -> int:
    """Coefficient of x^k in the product of local series given as callables."""
    total = 0
    for split in itertools.product(range(k + 1), repeat=len(factors)):
        if sum(split) == k:
            term = 1
            for f, e in zip(factors, split):
                term *= f(p, e)
            total += term
    return total
