"""Biquadratic (V4) quartic fields Q(sqrt D1, sqrt D2).

A field is stored as the canonically ordered triple of radicands of its three
quadratic subfields together with the g-triple (g1, g2, g3) for which
D1 = g2 g3, D2 = g1 g3 and D3 = g1 g2.  The case tag records how 2 behaves:
cases I and II are wildly ramified at 2, case III is unramified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import fano_lattice as fl
from .numtheory import gcd_star, is_squarefree


class FieldError(ValueError):
    """Raised for parameters that do not describe a field of the family."""


def _order_key(d: int) -> tuple:
    # by absolute value, positive first on ties
    return (abs(d), d < 0)


def _third(d1: int, d2: int) -> int:
    return d1 * d2 // math.gcd(d1, d2) ** 2


def _canonical_triple(ds) -> tuple:
    """Sort three radicands into the canonical order; return (triple, case)."""
    res = sorted(d % 4 for d in ds)
    if res == [2, 2, 3]:
        d3 = next(d for d in ds if d % 4 == 3)
        d1, d2 = sorted((d for d in ds if d % 4 == 2), key=_order_key)
        return (d1, d2, d3), "I"
    if res in ([1, 2, 2], [1, 3, 3]):
        d3 = next(d for d in ds if d % 4 == 1)
        d1, d2 = sorted((d for d in ds if d % 4 != 1), key=_order_key)
        return (d1, d2, d3), "II"
    if res == [1, 1, 1]:
        return tuple(sorted(ds, key=_order_key)), "III"
    raise FieldError(f"radicands {ds} do not form a V4 triple")


@dataclass(frozen=True)
class V4Field:
    d: tuple  # (D1, D2, D3)
    g: tuple  # (g1, g2, g3)
    case: str
    epsilon: int | None = None

    @property
    def totally_real(self) -> bool:
        return all(x > 0 for x in self.d)

    @property
    def wild(self) -> bool:
        return self.case in ("I", "II")

    def to_json(self) -> dict:
        return {"D": list(self.d), "g": list(self.g), "case": self.case, "disc": discriminant(self)}


@dataclass(frozen=True)
class V4Shape:
    family: str  # "oC" or "oI"
    x2: Fraction
    y2: Fraction

    def to_json(self) -> dict:
        return {"family": self.family, "x2": str(self.x2), "y2": str(self.y2)}

    def named_diagram(self) -> fl.ConormDiagram:
        return fl.named_lattice(self.family, self.x2, self.y2, 1)


def _g_triple(d) -> tuple:
    d1, d2, d3 = d
    return (gcd_star(d2, d3), gcd_star(d1, d3), gcd_star(d1, d2))


def _build(d, case) -> V4Field:
    g = _g_triple(d)
    eps = None
    if case == "III":
        eps = 1 if g[0] % 4 == 1 else -1
    return V4Field(tuple(d), g, case, eps)


def from_radicands(d: int, dp: int) -> V4Field:
    for x in (d, dp):
        if x in (0, 1) or not is_squarefree(x):
            raise FieldError(f"{x} is not a squarefree radicand other than 0, 1")
    if d == dp:
        raise FieldError("the two radicands give the same quadratic field")
    triple, case = _canonical_triple((d, dp, _third(d, dp)))
    return _build(triple, case)


def from_triple(d1: int, d2: int, d3: int) -> V4Field:
    """Field with the three given subfield radicands (in any order)."""
    f = from_radicands(d1, d2)
    if sorted(f.d) != sorted((d1, d2, d3)):
        raise FieldError(f"{d3} is not the third radicand of Q(sqrt {d1}, sqrt {d2})")
    return f


def is_star_carefree(g) -> bool:
    if any(x == 0 or not is_squarefree(x) for x in g):
        return False
    if len(set(g)) != 3:
        return False
    return all(gcd_star(g[i], g[j]) == 1 for i in range(3) for j in range(i + 1, 3))


def from_g_triple(g1: int, g2: int, g3: int) -> V4Field:
    """Inverse of to_g_triple; the triple must already be in canonical order."""
    g = (g1, g2, g3)
    if not is_star_carefree(g):
        raise FieldError(f"{g} is not a *-strongly carefree triple")
    d = (g2 * g3, g1 * g3, g1 * g2)
    triple, case = _canonical_triple(d)
    if triple != d:
        raise FieldError(f"{g} is not in canonical order (expected D = {triple})")
    return _build(triple, case)


def to_g_triple(f: V4Field) -> tuple:
    return f.g


def discriminant(f: V4Field) -> int:
    e = {"I": 6, "II": 4, "III": 0}[f.case]
    return 2**e * (f.g[0] * f.g[1] * f.g[2]) ** 2


# -- trace-zero lattice -----------------------------------------------------


def pairing(f: V4Field) -> tuple:
    """Diagonal trace pairing on coordinates in the basis (1, sqrt D1, sqrt D2, sqrt D3)."""
    return (4, 4 * abs(f.d[0]), 4 * abs(f.d[1]), 4 * abs(f.d[2]))


def perp_superbase_vectors(f: V4Field) -> tuple:
    """Coordinates of the obtuse superbase of O_K-perp and the printed scale.

    The printed Gram is the exact Gram multiplied by ``scale``.
    """
    d1, d2, d3 = map(abs, f.d)
    if f.case == "I":
        vecs = [(0, -4, 0, -4), (0, 2, -2, 0), (0, 0, 0, 4), (0, 2, 2, 0)]
        return vecs, Fraction(1, 16)
    if f.case == "II":
        vecs = [(0, -4, 0, -2), (0, 2, -2, 0), (0, 0, 0, 2), (0, 2, 2, 0)]
        return vecs, Fraction(1, 16)
    e = f.epsilon
    if d1 + d2 > d3:
        vecs = [(0, e, 1, 1), (0, -e, -1, 1), (0, e, -1, -1), (0, -e, 1, -1)]
    else:
        vecs = [(0, e, 1, 1), (0, -2 * e, 0, 0), (0, e, 1, -1), (0, 0, -2, 0)]
    return vecs, Fraction(1, 4)


def exact_perp_gram(f: V4Field) -> fl.Matrix:
    vecs, _ = perp_superbase_vectors(f)
    return fl.superbase_from_vectors(vecs, pairing(f))


def perp_superbase_gram(f: V4Field) -> fl.Matrix:
    """Obtuse superbase Gram of O_K-perp, in the printed (rescaled) normalisation."""
    d1, d2, d3 = map(abs, f.d)
    if f.case in ("I", "II"):
        c = 4 * d3 if f.case == "I" else d3
        rows = [
            [4 * d1 + c, -2 * d1, -c, -2 * d1],
            [-2 * d1, d1 + d2, 0, d1 - d2],
            [-c, 0, c, 0],
            [-2 * d1, d1 - d2, 0, d1 + d2],
        ]
    elif d1 + d2 > d3:
        s, p, q, r = d1 + d2 + d3, -d1 - d2 + d3, d1 - d2 - d3, -d1 + d2 - d3
        rows = [[s, p, q, r], [p, s, r, q], [q, r, s, p], [r, q, p, s]]
    else:
        s, t = d1 + d2 + d3, d1 + d2 - d3
        rows = [
            [s, -2 * d1, t, -2 * d2],
            [-2 * d1, 4 * d1, -2 * d1, 0],
            [t, -2 * d1, s, -2 * d2],
            [-2 * d2, 0, -2 * d2, 4 * d2],
        ]
    return fl.as_matrix(rows)


def side_lengths_sq(f: V4Field) -> tuple:
    """(a^2, b^2, c^2) of the orthorhombic lattice printed by perp_superbase_gram."""
    d1, d2, d3 = map(abs, f.d)
    if f.case == "II":
        return (4 * d1, 4 * d2, d3)
    return (4 * d1, 4 * d2, 4 * d3)


def shape(f: V4Field) -> V4Shape:
    d1, d2, d3 = map(abs, f.d)
    if f.case == "I":
        return V4Shape("oC", Fraction(d1, d3), Fraction(d2, d3))
    if f.case == "II":
        return V4Shape("oC", Fraction(4 * d1, d3), Fraction(4 * d2, d3))
    if d1 + d2 == d3:
        raise AssertionError("|D1| + |D2| = |D3| cannot happen for a tame field")
    return V4Shape("oI", Fraction(d1, d3), Fraction(d2, d3))


def shape_via_reduction(f: V4Field) -> fl.ShapeClass:
    return fl.canonical_shape(fl.reduced_diagram(perp_superbase_gram(f)))


def shape_class(f: V4Field) -> fl.ShapeClass:
    """Canonical shape of the named lattice predicted by the shape theorem."""
    return fl.canonical_shape(shape(f).named_diagram())


def is_special(f: V4Field) -> str | None:
    d1, d2 = abs(f.d[0]), abs(f.d[1])
    if f.case == "III":
        return None
    if d1 == d2:
        return "tetragonal"
    if d2 == 3 * d1:
        return "hexagonal"
    return None


# -- reconstruction ---------------------------------------------------------


def _lowest_terms(ratios) -> tuple:
    den = 1
    for r in ratios:
        den = den * r.denominator // math.gcd(den, r.denominator)
    ints = [int(r * den) for r in ratios]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints)


def _check_round_trip(f: V4Field, s: V4Shape) -> V4Field:
    if shape(f) != s:
        raise FieldError(f"shape {s} is not realised by any field of the family")
    return f


def _safe_field(d1: int, d2: int, d3: int) -> V4Field:
    try:
        return from_triple(d1, d2, d3)
    except FieldError as exc:
        raise FieldError(f"shape does not come from a field of the family ({exc})") from None


def reconstruct_totally_real(s: V4Shape) -> V4Field:
    """The unique totally real field with shape s."""
    t1, t2, t3 = _lowest_terms((Fraction(1), s.y2 / s.x2, 1 / s.x2))
    if s.family == "oI":
        if not (t1 % 4 == t2 % 4 == t3 % 4 == 1):
            raise FieldError("an oI shape of a totally real field has all radicands 1 mod 4")
        f = _safe_field(t1, t2, t3)
    elif t1 % 4 == 0 and t2 % 4 == 0:
        f = _safe_field(t1 // 4, t2 // 4, t3)
    else:
        f = _safe_field(t1, t2, t3)
    return _check_round_trip(f, s)


def reconstruct_tame(s: V4Shape) -> V4Field:
    """The unique tamely ramified field with shape s."""
    if s.family != "oI":
        raise FieldError("tame fields have oI shapes")
    t = _lowest_terms((Fraction(1), s.y2 / s.x2, 1 / s.x2))
    threes = [k for k in range(3) if t[k] % 4 == 3]
    if len(threes) not in (0, 2) or any(x % 4 not in (1, 3) for x in t):
        raise FieldError("shape is not that of a tame field")
    d = tuple(-x if k in threes else x for k, x in enumerate(t))
    return _check_round_trip(_safe_field(*d), s)


# -- enumeration ------------------------------------------------------------


def fundamental_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def conductor_discriminant(f: V4Field) -> int:
    """|disc| as the product of the three quadratic subfield discriminants."""
    out = 1
    for d in f.d:
        out *= fundamental_discriminant(d)
    return abs(out)


def iter_fields(x: int, strict: bool = False):
    """Yield every V4 field with |disc| <= x (or < x when strict), once each."""
    from .numtheory import squarefree_mask

    lim1 = 1
    while (lim1 + 1) ** 3 <= x:
        lim1 += 1
    lim2 = math.isqrt(x)
    sf = squarefree_mask(lim2 + 1)

    def fund(d):
        return abs(d) if d % 4 == 1 else 4 * abs(d)

    for a_abs in range(1, lim1 + 1):
        if not sf[a_abs]:
            continue
        blim = math.isqrt(x // a_abs)
        for a in (a_abs, -a_abs):
            if a == 1:
                continue
            ka = _order_key(a)
            fa = fund(a)
            for b_abs in range(a_abs, blim + 1):
                if not sf[b_abs]:
                    continue
                for b in (b_abs, -b_abs):
                    if b == 1 or _order_key(b) <= ka:
                        continue
                    c = _third(a, b)
                    if _order_key(c) <= _order_key(b):
                        continue
                    disc = fa * fund(b) * fund(c)
                    if disc < x or (disc == x and not strict):
                        triple, case = _canonical_triple((a, b, c))
                        yield _build(triple, case)
