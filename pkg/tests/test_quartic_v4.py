from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_shapes import fano_lattice as fl
from quartic_shapes import numtheory as nt
from quartic_shapes import quartic_v4 as v4


def test_from_radicands_examples():
    f = v4.from_radicands(10, 13)
    assert f.d == (10, 130, 13) and f.case == "II" and v4.to_g_triple(f) == (13, 1, 10)
    assert v4.from_radicands(2, 6).d == (2, 6, 3) and v4.from_radicands(2, 6).case == "I"
    f = v4.from_radicands(5, 13)
    assert f.d == (5, 13, 65) and f.case == "III" and f.epsilon == 1 and f.g == (13, 5, 1)


def test_from_radicands_rejects():
    for bad in ((4, 3), (1, 5), (0, 2), (3, 3)):
        with pytest.raises(v4.FieldError):
            v4.from_radicands(*bad)


def test_g_triples():
    assert v4.from_g_triple(13, 1, 10).d == (10, 130, 13)
    f = v4.from_g_triple(-3, 1, 2)
    assert f.d == (2, -6, -3)
    assert sum(x < 0 for x in f.d) == 2
    with pytest.raises(v4.FieldError):
        v4.from_g_triple(3, 5, 15)


def test_discriminants():
    assert v4.discriminant(v4.from_radicands(10, 13)) == 270400 == 2**6 * 5**2 * 13**2
    assert v4.discriminant(v4.from_radicands(10, 26)) == 270400
    assert v4.discriminant(v4.from_radicands(5, 13)) == 4225


def test_printed_gram_case_I():
    g = v4.perp_superbase_gram(v4.from_triple(2, 6, 3))
    assert g == fl.as_matrix([[20, -4, -12, -4], [-4, 8, 0, -4], [-12, 0, 12, 0], [-4, -4, 0, 8]])


def test_printed_gram_is_scaled_exact_gram():
    for t in ((2, 6, 3), (10, 130, 13), (5, 13, 65), (-3, 5, -15), (3, -7, -21)):
        f = v4.from_triple(*t)
        _, scale = v4.perp_superbase_vectors(f)
        exact = v4.exact_perp_gram(f)
        assert v4.perp_superbase_gram(f) == fl.as_matrix([[scale * x for x in row] for row in exact])


def test_case_I_labels_match_named_lattice():
    for f in v4.iter_fields(10**5):
        if f.case == "I":
            a2, b2, c2 = (4 * abs(d) for d in f.d)
            d = fl.reduced_diagram(v4.perp_superbase_gram(f))
            assert fl.shapes_equal(d, fl.named_lattice("oC", a2, b2, c2))


def test_shapes():
    assert v4.shape(v4.from_triple(10, 130, 13)) == v4.V4Shape("oC", Fraction(40, 13), Fraction(40))
    assert v4.shape(v4.from_triple(10, 26, 65)) == v4.V4Shape("oC", Fraction(8, 13), Fraction(8, 5))
    assert v4.shape(v4.from_triple(2, 6, 3)) == v4.shape(v4.from_triple(-2, -6, 3))


def test_is_special():
    assert v4.is_special(v4.from_triple(2, 6, 3)) == "hexagonal"
    assert v4.is_special(v4.from_triple(10, 30, 3)) == "hexagonal"
    assert v4.is_special(v4.from_triple(2, 30, 15)) is None
    assert v4.is_special(v4.from_triple(2, -2, -1)) == "tetragonal"
    assert v4.is_special(v4.from_triple(5, 13, 65)) is None


def test_special_matches_reduced_diagram():
    # hexagonal: three equal labels on the hexagon; tetragonal: a zero-count change
    for f in v4.iter_fields(10**6):
        if not f.wild:
            continue
        a2, b2, c2 = v4.side_lengths_sq(f)
        red = v4.shape_via_reduction(f)
        hexa = fl.canonical_shape(fl.named_lattice("oC", a2, 3 * a2, c2))
        assert (red == hexa) == (v4.is_special(f) == "hexagonal")


def test_reconstruction_examples():
    f = v4.from_radicands(5, 13)
    assert v4.reconstruct_tame(v4.shape(f)) == f
    f = v4.from_triple(2, 30, 15)
    assert v4.reconstruct_totally_real(v4.shape(f)) == f
    f = v4.from_triple(-3, 5, -15)  # tame, not totally real
    assert v4.reconstruct_tame(v4.shape(f)) == f


def test_iter_fields_unique_and_complete():
    fields = list(v4.iter_fields(10**6))
    assert len(fields) == 1014
    assert len({f.d for f in fields}) == len(fields)
    assert all(v4.discriminant(f) == v4.conductor_discriminant(f) <= 10**6 for f in fields)
    assert all(v4.discriminant(f) < 10**6 for f in v4.iter_fields(10**6, strict=True))


radicand = st.integers(-60, 60).filter(lambda d: d not in (0, 1) and nt.is_squarefree(d))


@settings(max_examples=120, deadline=None)
@given(radicand, radicand)
def test_shape_theorem_random(d1, d2):
    if d1 == d2:
        return
    f = v4.from_radicands(d1, d2)
    assert v4.shape_via_reduction(f) == v4.shape_class(f)
    assert v4.from_radicands(d2, d1) == f


def _sympy_disc(d):
    sympy = pytest.importorskip("sympy")
    from sympy.polys.numberfields.basis import round_two

    x = sympy.symbols("x")
    # round_two raises on some inputs; any primitive element will do
    for a, b in ((d[0], d[1]), (d[0], d[2]), (d[1], d[2])):
        for k in (1, 2):
            m = sympy.minimal_polynomial(sympy.sqrt(a) + k * sympy.sqrt(b), x)
            try:
                return int(round_two(sympy.Poly(m, x, domain="ZZ"))[1])
            except Exception:
                continue
    return None


def test_discriminant_against_cas():
    fields = list(v4.iter_fields(10**4))
    got = [(f, _sympy_disc(f.d)) for f in fields]
    covered = [(f, dk) for f, dk in got if dk is not None]
    assert len(covered) >= 0.8 * len(fields)
    assert all(dk == v4.discriminant(f) for f, dk in covered)
