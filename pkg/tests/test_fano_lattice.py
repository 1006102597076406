import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_shapes import fano_lattice as fl
from quartic_shapes import oracles


def diagram(*labels):
    return fl.ConormDiagram.from_mapping(dict(zip(fl.POINTS, labels)))


def test_fano_plane_incidence():
    for p in range(7):
        assert sum(p in line for line in fl.LINES) == 3
    for p, q in itertools.combinations(range(7), 2):
        assert sum(p in line and q in line for line in fl.LINES) == 1


def test_automorphism_group():
    auts = fl.fano_automorphisms()
    assert len(auts) == 168 == oracles.automorphism_count_brute()
    assert tuple(range(7)) in [tuple(a) for a in auts]


def test_three_cycle_is_collineation():
    ix = fl.POINT_INDEX
    perm = list(range(7))
    for cycle in (("P01", "P02", "P03"), ("P12", "P23", "P13")):
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            perm[ix[a]] = ix[b]
    lines = {frozenset(line) for line in fl.LINES}
    assert {frozenset(perm[p] for p in line) for line in fl.LINES} == lines


def test_superbase_from_identity():
    s = fl.superbase_from_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert [s[i][i] for i in range(4)] == [3, 1, 1, 1]
    assert all(s[0][i] == -1 for i in range(1, 4))
    assert all(s[i][j] == 0 for i in range(1, 4) for j in range(1, 4) if i != j)


def test_superbase_rows_sum_to_zero_and_recover_basis():
    g = fl.gram_oC(1, 3)
    s = fl.superbase_from_basis(g)
    assert all(sum(row) == 0 for row in s)
    assert [list(row[1:]) for row in s[1:]] == [list(row) for row in g]


def test_superbase_rejects_non_pd():
    with pytest.raises(fl.LatticeError):
        fl.superbase_from_basis([[1, 2, 0], [2, 1, 0], [0, 0, 1]])


def test_explicit_superbases_known_labels():
    # cubic: three equal labels
    s = fl.explicit_superbase("tP", 1, c2=1)
    assert fl.ConormDiagram.from_superbase(s).as_dict() == {
        "P01": 1, "P02": 1, "P03": 1, "P12": 0, "P13": 0, "P23": 0, "Z": 0
    }
    # body-centred cubic: six labels 1/4
    labels = fl.putative_conorms(fl.explicit_superbase("tI", 1, c2=1))
    assert sorted(labels[:6]) == [Fraction(1, 4)] * 6


def test_tI_outside_range_needs_reduction():
    labels = fl.putative_conorms(fl.explicit_superbase("tI", 1, c2=9))
    assert Fraction(-7, 4) in labels
    d = fl.reduced_diagram(fl.explicit_superbase("tI", 1, c2=9))
    assert sorted(d.labels) == [0, 0, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(7, 4)]


def test_selling_fixed_point():
    s = fl.explicit_superbase("tP", 1, c2=2)
    reduced, m = fl.selling_reduce_with_transform(s)
    assert reduced == fl.as_matrix(s)
    assert m == fl.as_matrix([[int(i == j) for j in range(4)] for i in range(4)])


def test_combinatorial_types():
    assert fl.combinatorial_type(fl.named_lattice("tI", 1, c2=1)) == "I"
    assert fl.combinatorial_type(fl.named_lattice("oC", 1, 2, 1)) == "IV"
    fcc = fl.named_lattice("tI", 1, c2=2)
    assert fl.combinatorial_type(fcc) == "III"
    assert fl.TYPE_NAMES["III"] == "rhombic dodecahedron"
    assert fl.combinatorial_type(fl.named_lattice("tP", 1, c2=3)) == "V"


def test_canonical_shape_example():
    assert fl.canonical_shape(diagram(4, 12, 4, 0, 4, 0, 0)).canonical == (0, 0, 0, 1, 1, 1, 3)


def test_scaling_and_automorphism_invariance():
    d = diagram(1, 3, 2, 0, 5, 0, 0)
    scaled = fl.ConormDiagram(tuple(Fraction(7, 3) * x for x in d.labels))
    assert fl.canonical_shape(scaled) == fl.canonical_shape(d)
    for perm in fl.fano_automorphisms()[::17]:
        moved = fl.ConormDiagram(fl.apply_automorphism(perm, d.labels))
        assert fl.shapes_equal(moved, d)


def test_cubic_vs_bcc_distinct():
    assert not fl.shapes_equal(fl.named_lattice("tP", 1, c2=1), fl.named_lattice("tI", 1, c2=1))


def test_oI_change_of_basis():
    g = fl.gram_oI(Fraction(1, 4), Fraction(1, 2))
    moved = fl.congruence(fl.MATRIX_P, g)
    assert fl.shape_of_gram(moved) == fl.shape_of_gram(g)


def test_named_lattice_values():
    assert fl.named_lattice("oC", 1, 3, 1).as_dict() == {
        "P01": Fraction(1, 2), "P02": 1, "P03": Fraction(1, 2), "P12": 0, "P13": Fraction(1, 2), "P23": 0, "Z": 0
    }
    assert fl.combinatorial_type(fl.named_lattice("oI", 1, 1, 2)) in ("III", "IV")
    assert len(fl.named_lattice("oI", 1, 1, 2).zeros()) == 3
    assert set(fl.named_lattice("tI", 1, c2=1).labels[:6]) == {Fraction(1, 4)}


@pytest.mark.parametrize(
    "family,args",
    [("oC", (1, 2, 3)), ("oI", (1, 2, 4)), ("oI", (1, 2, 2)), ("tI", (1, 5)), ("tP", (2, 1))],
)
def test_named_lattice_agrees_with_reduction(family, args):
    a2, *rest = args
    if family in ("tP", "tI"):
        d = fl.named_lattice(family, a2, c2=rest[0])
        s = fl.explicit_superbase(family, a2, c2=rest[0])
    else:
        d = fl.named_lattice(family, a2, *rest)
        s = fl.explicit_superbase(family, a2, *rest)
    assert fl.shapes_equal(d, fl.reduced_diagram(s))


def test_diagram_validation():
    with pytest.raises(fl.LatticeError):
        diagram(1, 1, 1, 1, 1, 1, 1)  # no zero
    with pytest.raises(fl.LatticeError):
        diagram(1, -1, 1, 0, 0, 0, 0)
    with pytest.raises(fl.LatticeError):
        fl.ConormDiagram((1, 1, 0, 0, 0, 0, 0))  # support on a line


def test_window_measure():
    import math

    assert fl.window_measure("oC", 1, Fraction(math.e)) == pytest.approx(0.5)
    assert fl.window_measure("oC", Fraction(1, 2), 2) == pytest.approx(0.9609060278)
    assert fl.window_measure("oC", 3, 3 * 5) == pytest.approx(fl.window_measure("oC", 1, 5))


def test_parse_rational():
    assert fl.parse_rational("3/4") == Fraction(3, 4)
    assert fl.parse_rational("-7") == -7
    with pytest.raises(ValueError):
        fl.parse_rational("0.5")


pd_entries = st.lists(st.integers(-6, 6), min_size=6, max_size=6)


@settings(max_examples=150, deadline=None)
@given(pd_entries, st.lists(st.tuples(st.integers(0, 2), st.integers(1, 2), st.sampled_from([-1, 1])), max_size=8))
def test_shape_is_basis_independent(entries, moves):
    g = fl.gram_from_entries(entries)
    if not fl.is_positive_definite(g):
        return
    m = [[int(i == j) for j in range(3)] for i in range(3)]
    for i, shift, k in moves:
        j = (i + shift) % 3
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    assert fl.shape_of_gram(fl.congruence(m, g)) == fl.shape_of_gram(g)


@settings(max_examples=150, deadline=None)
@given(pd_entries)
def test_reduction_output_is_obtuse(entries):
    g = fl.gram_from_entries(entries)
    if not fl.is_positive_definite(g):
        return
    s = fl.selling_reduce(fl.superbase_from_basis(g))
    assert all(s[i][j] <= 0 for i in range(4) for j in range(i + 1, 4))
    fl.check_superbase(s)
