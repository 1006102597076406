"""Rank-3 lattice calculus on conorm diagrams.

A superbase (v0, v1, v2, v3) of a rank-3 lattice is stored through its 4x4
Gram matrix.  The six conorms p_ij = -v_i.v_j sit on the non-central points
of the Fano plane and the central point Z always carries 0.  Selling
reduction turns any superbase into an obtuse one, after which the seven
labels determine the lattice up to isometry and relabelling by one of the
168 collineations of the Fano plane.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Matrix = tuple  # tuple of row tuples of Fraction

POINTS = ("P01", "P02", "P03", "P12", "P13", "P23", "Z")
POINT_INDEX = {name: k for k, name in enumerate(POINTS)}
PAIR_POINT = {(0, 1): 0, (0, 2): 1, (0, 3): 2, (1, 2): 3, (1, 3): 4, (2, 3): 5}
Z_INDEX = 6

LINES = tuple(
    frozenset(POINT_INDEX[p] for p in line)
    for line in (
        ("P03", "P13", "P01"),
        ("P01", "P12", "P02"),
        ("P02", "P23", "P03"),
        ("P01", "Z", "P23"),
        ("P02", "Z", "P13"),
        ("P03", "Z", "P12"),
        ("P12", "P13", "P23"),
    )
)

TYPE_NAMES = {
    "I": "truncated octahedron",
    "II": "rhombo-hexagonal dodecahedron",
    "III": "rhombic dodecahedron",
    "IV": "hexagonal prism",
    "V": "cuboid",
}


class LatticeError(ValueError):
    """Raised for invalid Gram matrices, diagrams or family parameters."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def as_matrix(rows) -> Matrix:
    return tuple(tuple(_frac(x) for x in row) for row in rows)


def mat_mul(a, b) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def transpose(a) -> Matrix:
    return tuple(zip(*a))


def congruence(m, g) -> Matrix:
    """Return m g m^T."""
    return mat_mul(mat_mul(m, g), transpose(m))


def leading_minors(g) -> list:
    n = len(g)
    out = []
    for k in range(1, n + 1):
        out.append(_det([row[:k] for row in g[:k]]))
    return out


def _det(m) -> Fraction:
    m = [list(map(_frac, row)) for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def is_positive_definite(g) -> bool:
    if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(i)):
        return False
    return all(m > 0 for m in leading_minors(g))


# -- Gram matrices of the shape-space families --------------------------------

MATRIX_P = ((1, 0, 1), (-1, 0, 0), (1, 1, 0))


def gram_oC(x2, y2) -> Matrix:
    """G_oC(x, y) written in terms of x^2 and y^2."""
    x2, y2 = _frac(x2), _frac(y2)
    return as_matrix([[(x2 + y2) / 4, 0, (x2 - y2) / 4], [0, 1, 0], [(x2 - y2) / 4, 0, (x2 + y2) / 4]])


def gram_oI(x2, y2) -> Matrix:
    x2, y2 = _frac(x2), _frac(y2)
    d = x2 + y2 + 1
    return as_matrix(
        [
            [d / 4, (-x2 + y2 - 1) / 4, (x2 - y2 - 1) / 4],
            [(-x2 + y2 - 1) / 4, d / 4, (-x2 - y2 + 1) / 4],
            [(x2 - y2 - 1) / 4, (-x2 - y2 + 1) / 4, d / 4],
        ]
    )


def gram_oI_prime(x2, y2) -> Matrix:
    """P G_oI(x, y) P^T."""
    return congruence(as_matrix(MATRIX_P), gram_oI(x2, y2))


# -- superbases -------------------------------------------------------------


def superbase_from_basis(g) -> Matrix:
    """Extend a 3x3 basis Gram to the superbase with v0 = -(v1 + v2 + v3)."""
    g = as_matrix(g)
    if len(g) != 3 or any(len(r) != 3 for r in g):
        raise LatticeError("expected a 3x3 Gram matrix")
    if not is_positive_definite(g):
        raise LatticeError("Gram matrix is not positive definite")
    row0 = [-sum(g[i]) for i in range(3)]
    s = [[-sum(row0)] + row0]
    for i in range(3):
        s.append([row0[i]] + list(g[i]))
    return as_matrix(s)


def check_superbase(s) -> None:
    if len(s) != 4 or any(len(r) != 4 for r in s):
        raise LatticeError("expected a 4x4 superbase Gram matrix")
    for i in range(4):
        if sum(s[i]) != 0:
            raise LatticeError("superbase Gram rows must sum to zero")
        for j in range(i):
            if s[i][j] != s[j][i]:
                raise LatticeError("superbase Gram matrix is not symmetric")
    if not is_positive_definite([row[1:] for row in s[1:]]):
        raise LatticeError("superbase does not span a rank-3 lattice")


def superbase_from_vectors(vectors, metric) -> Matrix:
    """Gram of four vectors given by coordinates in an orthogonal frame.

    ``metric`` holds the squared lengths of the frame vectors, so a vector
    written as ``(1/2, 0, -1)`` against metric ``(a2, b2, c2)`` stands for
    (a/2, 0, -c).
    """
    metric = [_frac(m) for m in metric]
    vs = [[_frac(x) for x in v] for v in vectors]
    return as_matrix([[sum(x * y * m for x, y, m in zip(u, v, metric)) for v in vs] for u in vs])


def putative_conorms(s) -> tuple:
    """Labels -s[i][j] on the six points P_ij and 0 on Z, in POINTS order."""
    labels = [Fraction(0)] * 7
    for (i, j), k in PAIR_POINT.items():
        labels[k] = -_frac(s[i][j])
    return tuple(labels)


def _selling_move(i: int, j: int) -> tuple:
    # v_i -> -v_i, v_k -> v_k + v_i for k not in {i, j}
    m = [[int(r == c) for c in range(4)] for r in range(4)]
    m[i][i] = -1
    for k in range(4):
        if k not in (i, j):
            m[k][i] = 1
    return tuple(map(tuple, m))


def selling_reduce_with_transform(s) -> tuple:
    """Reduce to an obtuse superbase; also return the integer 4x4 transform.

    The returned matrix M expresses the new superbase vectors in terms of the
    old ones, so the reduced Gram is M s M^T.
    """
    s = as_matrix(s)
    check_superbase(s)
    total = tuple(tuple(int(r == c) for c in range(4)) for r in range(4))
    while True:
        pair = next(((i, j) for i in range(4) for j in range(i + 1, 4) if s[i][j] > 0), None)
        if pair is None:
            return s, total
        m = _selling_move(*pair)
        s = congruence(m, s)
        total = mat_mul(m, total)


def selling_reduce(s) -> Matrix:
    return selling_reduce_with_transform(s)[0]


# -- diagrams ---------------------------------------------------------------


def _support_on_line(nonzero: set) -> bool:
    return any(nonzero <= line for line in LINES)


@dataclass(frozen=True)
class ConormDiagram:
    labels: tuple

    def __post_init__(self):
        labels = tuple(_frac(x) for x in self.labels)
        if len(labels) != 7:
            raise LatticeError("a conorm diagram has 7 labels")
        if any(x < 0 for x in labels):
            raise LatticeError("conorm labels must be nonnegative")
        if min(labels) != 0:
            raise LatticeError("a conorm diagram has at least one zero label")
        nonzero = {k for k, x in enumerate(labels) if x != 0}
        if _support_on_line(nonzero):
            raise LatticeError("support of the diagram lies on a line")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ConormDiagram":
        return cls(tuple(_frac(mapping.get(p, 0)) for p in POINTS))

    @classmethod
    def from_superbase(cls, s) -> "ConormDiagram":
        return cls(putative_conorms(s))

    def as_dict(self) -> dict:
        return dict(zip(POINTS, self.labels))

    def to_json(self) -> dict:
        return {"labels": {p: str(x) for p, x in zip(POINTS, self.labels)}}

    def zeros(self) -> frozenset:
        return frozenset(k for k, x in enumerate(self.labels) if x == 0)


@dataclass(frozen=True)
class ShapeClass:
    canonical: tuple

    def to_json(self) -> dict:
        return {"canonical": list(self.canonical)}


_AUT_LOCK = threading.Lock()
_AUTOMORPHISMS: list = []
_AUT_INVERSES: list = []


def fano_automorphisms() -> list:
    """All 168 point permutations (as index tuples) preserving the line set."""
    if not _AUTOMORPHISMS:
        with _AUT_LOCK:
            if not _AUTOMORPHISMS:
                lines = set(LINES)
                found = []
                for perm in itertools.permutations(range(7)):
                    if all(frozenset(perm[p] for p in line) in lines for line in LINES):
                        found.append(perm)
                inverses = []
                for perm in found:
                    inv = [0] * 7
                    for i, j in enumerate(perm):
                        inv[j] = i
                    inverses.append(tuple(inv))
                _AUT_INVERSES.extend(inverses)
                _AUTOMORPHISMS.extend(found)
    return list(_AUTOMORPHISMS)


def apply_automorphism(perm, labels) -> tuple:
    """Move the label at point i to point perm[i]."""
    out = [None] * 7
    for i, x in enumerate(labels):
        out[perm[i]] = x
    return tuple(out)


def primitive_labels(labels) -> tuple:
    labels = [_frac(x) for x in labels]
    den = 1
    for x in labels:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in labels]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise LatticeError("all labels are zero")
    return tuple(x // g for x in ints)


def canonical_shape(d: ConormDiagram) -> ShapeClass:
    ints = primitive_labels(d.labels)
    fano_automorphisms()
    best = min(tuple(ints[k] for k in inv) for inv in _AUT_INVERSES)
    return ShapeClass(best)


def shapes_equal(d1: ConormDiagram, d2: ConormDiagram) -> bool:
    return canonical_shape(d1) == canonical_shape(d2)


def combinatorial_type(d: ConormDiagram) -> str:
    zeros = d.zeros()
    z = len(zeros)
    if z == 1:
        return "I"
    if z == 2:
        return "II"
    if z == 3:
        return "III" if zeros in LINES else "IV"
    if z == 4:
        return "V"
    raise LatticeError(f"{z} zero labels do not occur in a conorm diagram")


def reduced_diagram(s) -> ConormDiagram:
    return ConormDiagram.from_superbase(selling_reduce(s))


def shape_of_gram(g) -> ShapeClass:
    """Canonical shape of the lattice with 3x3 basis Gram matrix g."""
    return canonical_shape(reduced_diagram(superbase_from_basis(g)))


# -- named families ---------------------------------------------------------


def named_lattice(family: str, a2, b2=None, c2=None) -> ConormDiagram:
    """Conorm diagram of a tetragonal or orthorhombic family member.

    tP and tI take (a2, c2); pass them as ``named_lattice("tP", a2, c2=c2)``
    or positionally as ``named_lattice("tP", a2, c2)``.
    """
    if family in ("tP", "tI") and c2 is None:
        b2, c2 = None, b2
    a2 = _frac(a2)
    c2 = _frac(c2) if c2 is not None else None
    b2 = _frac(b2) if b2 is not None else None
    if c2 is None or a2 <= 0 or c2 <= 0 or (b2 is not None and b2 <= 0):
        raise LatticeError("squared side lengths must be positive")
    lab = dict.fromkeys(POINTS, Fraction(0))
    if family == "tP":
        lab.update(P01=a2, P03=a2, P02=c2)
    elif family == "tI":
        if c2 <= 2 * a2:
            p1, p2 = c2 / 4, (2 * a2 - c2) / 4
            lab.update(P12=p1, P23=p1, P01=p1, P03=p1, P13=p2, P02=p2)
        else:
            p1 = a2 / 2
            lab.update(P12=p1, P23=p1, P01=p1, P03=p1, P02=(c2 - 2 * a2) / 4)
    elif family == "oC":
        if b2 is None or a2 > b2:
            raise LatticeError("oC requires a2 <= b2")
        lab.update(P01=a2 / 2, P03=a2 / 2, P13=(b2 - a2) / 4, P02=c2)
    elif family == "oI":
        if b2 is None or not a2 <= b2 <= c2:
            raise LatticeError("oI requires a2 <= b2 <= c2")
        if a2 + b2 <= c2:
            lab.update(P12=a2 / 2, P01=a2 / 2, P23=b2 / 2, P03=b2 / 2, P02=(c2 - a2 - b2) / 4)
        else:
            p1 = (-a2 + b2 + c2) / 4
            p2 = (a2 - b2 + c2) / 4
            p3 = (a2 + b2 - c2) / 4
            lab.update(P13=p1, P02=p1, P12=p2, P03=p2, P23=p3, P01=p3)
    else:
        raise LatticeError(f"unknown family {family!r}")
    return ConormDiagram.from_mapping(lab)


_H = Fraction(1, 2)
# explicit superbases, coordinates against orthogonal frames (see metric order)
_EXPLICIT = {
    # frame (c, a, a)
    "tI": [(_H, _H, _H), (-_H, -_H, _H), (_H, -_H, -_H), (-_H, _H, -_H)],
    "tP": [(-1, -1, -1), (0, 1, 0), (1, 0, 0), (0, 0, 1)],
    # frame (a, b, c)
    "oC": [(-1, 0, -1), (_H, -_H, 0), (0, 0, 1), (_H, _H, 0)],
    "oI_a": [(_H, _H, _H), (-1, 0, 0), (_H, _H, -_H), (0, -1, 0)],
    "oI_b": [(_H, _H, _H), (-_H, -_H, _H), (_H, -_H, -_H), (-_H, _H, -_H)],
}


def explicit_superbase(family: str, a2, b2=None, c2=None) -> Matrix:
    """Superbase Gram built from coordinates of a standard generating set.

    Obtuse except for tI with c2 > 2 a2, where one reduction step is needed.
    """
    if family in ("tP", "tI"):
        if c2 is None:
            b2, c2 = None, b2
        return superbase_from_vectors(_EXPLICIT[family], (c2, a2, a2))
    if family == "oC":
        return superbase_from_vectors(_EXPLICIT["oC"], (a2, b2, c2))
    if family == "oI":
        key = "oI_a" if _frac(a2) + _frac(b2) <= _frac(c2) else "oI_b"
        return superbase_from_vectors(_EXPLICIT[key], (a2, b2, c2))
    raise LatticeError(f"unknown family {family!r}")


def window_measure(family: str, r1, r2) -> float:
    """Measure of the window r1 <= x <= y < r2 under dx dy / (x y)."""
    if family not in ("oC", "oI"):
        raise LatticeError(f"unknown family {family!r}")
    if not 0 < r1 < r2:
        raise LatticeError("window needs 0 < R1 < R2")
    if family == "oI" and not r2 < 1:
        raise LatticeError("oI windows need R2 < 1")
    return 0.5 * (math.log(r2) - math.log(r1)) ** 2


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or an integer string; floats are rejected."""
    text = text.strip()
    if any(c in text for c in ".eE"):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def gram_from_entries(entries: Sequence) -> Matrix:
    """Build a symmetric 3x3 Gram from (g11, g12, g13, g22, g23, g33)."""
    if len(entries) != 6:
        raise LatticeError("expected six Gram entries")
    g11, g12, g13, g22, g23, g33 = map(_frac, entries)
    return as_matrix([[g11, g12, g13], [g12, g22, g23], [g13, g23, g33]])
