"""Cyclic quartic fields K = Q(alpha), alpha = sqrt(A (D + B sqrt D)).

Parameters: A odd and squarefree (its sign fixes the signature), D = B^2 + C^2
squarefree with B, C > 0, and gcd(A, D) = 1.  Cases I-III are ramified at 2,
cases IV and V are not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import fano_lattice as fl
from .numtheory import is_squarefree, two_square_reps


class FieldError(ValueError):
    """Raised when (A, B, C, D) violates the parametrisation."""


RAMIFIED = ("I", "II", "III")


def classify(a: int, b: int, c: int, d: int) -> str:
    if d % 2 == 0:
        return "I"
    if b % 2 == 1:
        return "II"
    if (a + b) % 4 == 3:
        return "III"
    return "IV" if (a - c) % 4 == 0 else "V"


@dataclass(frozen=True)
class C4Field:
    a: int
    b: int
    c: int
    d: int
    case: str
    epsilon: int

    @property
    def totally_real(self) -> bool:
        return self.a > 0

    def to_json(self) -> dict:
        return {
            "A": self.a,
            "B": self.b,
            "C": self.c,
            "D": self.d,
            "case": self.case,
            "disc": discriminant(self),
            "rrat": ramification_ratio(self),
        }


@dataclass(frozen=True)
class C4Shape:
    family: str  # "tP" or "tI"
    ratio2: Fraction  # (c/a)^2

    def to_json(self) -> dict:
        return {"family": self.family, "ratio2": str(self.ratio2)}

    def named_diagram(self) -> fl.ConormDiagram:
        return fl.named_lattice(self.family, 1, self.ratio2)


def validate(a: int, b: int, c: int, d: int) -> C4Field:
    if a % 2 == 0 or not is_squarefree(a):
        raise FieldError(f"A = {a} must be odd and squarefree")
    if b <= 0 or c <= 0:
        raise FieldError("B and C must be positive")
    if d != b * b + c * c:
        raise FieldError(f"D = {d} is not B^2 + C^2")
    if not is_squarefree(d):
        raise FieldError(f"D = {d} must be squarefree")
    if math.gcd(a, d) != 1:
        raise FieldError("A and D must be coprime")
    case = classify(a, b, c, d)
    return C4Field(a, b, c, d, case, -1 if case == "V" else 1)


def discriminant(f: C4Field) -> int:
    """|disc K|."""
    e = {"I": 8, "II": 6, "III": 4}.get(f.case, 0)
    return 2**e * f.a**2 * f.d**3


def quadratic_discriminant(f: C4Field) -> int:
    return f.d if f.d % 2 else 4 * f.d


def relative_norm(f: C4Field) -> int:
    """Norm of the relative discriminant of K over Q(sqrt D)."""
    e = {"I": 4, "II": 6, "III": 4}.get(f.case, 0)
    return 2**e * f.a**2 * f.d


def min_poly(f: C4Field) -> tuple:
    """Coefficients (1, 0, -2AD, 0, A^2 C^2 D) of the minimal polynomial of alpha."""
    return (1, 0, -2 * f.a * f.d, 0, f.a**2 * f.c**2 * f.d)


def ramification_ratio(f: C4Field) -> int:
    e = {"I": 1, "II": 3, "III": 2}.get(f.case, 0)
    return (2**e * f.a) ** 2


def shape(f: C4Field) -> C4Shape:
    a = abs(f.a)
    if f.case == "II":
        return C4Shape("tP", Fraction(1, 4 * a))
    if f.case == "III":
        return C4Shape("tP", Fraction(1, 2 * a))
    return C4Shape("tP" if f.case == "I" else "tI", Fraction(1, a))


# -- trace-zero lattice -----------------------------------------------------


def pairing(f: C4Field) -> tuple:
    """Diagonal trace pairing on coordinates in the basis (1, sqrt D, alpha, beta)."""
    return (4, 4 * f.d, 4 * abs(f.a) * f.d, 4 * abs(f.a) * f.d)


def gamma_perp(f: C4Field) -> list:
    e = f.epsilon
    return [(0, 1, 1, e), (0, -1, -1, e), (0, 1, -1, -e), (0, -1, 1, -e)]


def _combine(coeffs, vecs) -> tuple:
    return tuple(sum(k * v[i] for k, v in zip(coeffs, vecs)) for i in range(4))


# superbases of O_K-perp as integer combinations of gamma_0..gamma_3 (perp)
_COMBOS = {
    "I": ([-4, 0, 0, 0], [2, 2, 0, 0], [2, 0, 2, 0], [2, 0, 0, 2]),
    "II": ([-3, 0, 1, 0], [2, 2, 0, 0], [1, 0, 1, 0], [2, 0, 0, 2]),
    "III": ([-2, 1, 0, -1], [0, -1, 0, 1], [1, 0, 1, 0], [1, 0, -1, 0]),
}
_SCALE = {"I": Fraction(1, 64), "II": Fraction(1, 16), "III": Fraction(1, 16)}


def perp_superbase_vectors(f: C4Field) -> tuple:
    """Coordinates of the obtuse superbase and the printed scale factor."""
    gam = gamma_perp(f)
    if f.case in _COMBOS:
        return [_combine(c, gam) for c in _COMBOS[f.case]], _SCALE[f.case]
    return gam, Fraction(1)


def exact_perp_gram(f: C4Field) -> fl.Matrix:
    vecs, _ = perp_superbase_vectors(f)
    return fl.superbase_from_vectors(vecs, pairing(f))


def perp_superbase_gram(f: C4Field) -> fl.Matrix:
    """Obtuse superbase Gram of O_K-perp in the printed normalisation."""
    a, d = abs(f.a), f.d
    if f.case in RAMIFIED:
        m = {"I": 1, "II": 4, "III": 2}[f.case] * a
        rows = [
            [d * (2 * m + 1), -m * d, -d, -m * d],
            [-m * d, m * d, 0, 0],
            [-d, 0, d, 0],
            [-m * d, 0, 0, m * d],
        ]
    else:
        p, q, r = 4 * d * (1 + 2 * a), -4 * d, 4 * d * (1 - 2 * a)
        rows = [[p, q, r, q], [q, p, q, r], [r, q, p, q], [q, r, q, p]]
    return fl.as_matrix(rows)


def shape_via_reduction(f: C4Field) -> fl.ShapeClass:
    return fl.canonical_shape(fl.reduced_diagram(perp_superbase_gram(f)))


def shape_class(f: C4Field) -> fl.ShapeClass:
    return fl.canonical_shape(shape(f).named_diagram())


# -- enumeration ------------------------------------------------------------


def iter_fields(x: int):
    """Yield every valid (A, B, C, D) with |disc| <= x."""
    dmax = 1
    while (dmax + 1) ** 3 <= x:
        dmax += 1
    for d in range(2, dmax + 1):
        if not is_squarefree(d):
            continue
        reps = two_square_reps(d)
        if not reps:
            continue
        amax = math.isqrt(x // d**3)
        for a_abs in range(1, amax + 1, 2):
            if not is_squarefree(a_abs) or math.gcd(a_abs, d) != 1:
                continue
            for a in (a_abs, -a_abs):
                for b, c in reps:
                    f = validate(a, b, c, d)
                    if discriminant(f) <= x:
                        yield f
