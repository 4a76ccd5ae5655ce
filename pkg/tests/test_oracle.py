from fractions import Fraction

import pytest

from toruspotts.errors import EnumerationGuard
from toruspotts.exact import PolyQ
from toruspotts.lattice import CouplingSpec, build_torus
from toruspotts.oracle import (
    characters_from_table,
    class_counts_kernel,
    class_counts_python,
    partition_function,
    partition_function_plain,
    reconstruction_residuals,
    restricted_z_table,
)
from toruspotts.numtheory import annulus_state_count


def test_zero_coupling_gives_pure_power():
    g = build_torus("square", 2, 2, 0)
    assert partition_function(g, None) == PolyQ.monomial(1, 4)
    t = build_torus("triangular", 2, 3, 0)
    assert partition_function(t, None) == PolyQ.monomial(1, 6)


def test_q_one_binomial_identity():
    for spec in (CouplingSpec.homogeneous(Fraction(3, 7)), CouplingSpec.seeded(5)):
        g = build_torus("square", 2, 2, spec)
        expect = Fraction(1)
        for e in g.edges:
            expect *= 1 + e.coupling
        assert partition_function(g, 1) == expect
        assert partition_function_plain(g, 1) == expect


def test_square_2x2_reference_values():
    # frozen from this enumeration (the oracle is the definition)
    g = build_torus("square", 2, 2, 1)
    t = restricted_z_table(g, 2)
    assert t.z == 706
    assert t.classes == {(0, 0): 400, (1, 1): 302, (2, 1): 4}
    c = characters_from_table(t)
    assert [str(v) for v in c.levels] == ["553", "154", "2"]


def test_table_sums_to_partition_function():
    cases = [
        ("square", 2, 2, 1, 2),
        ("square", 2, 3, Fraction(-1, 2), 3),
        ("triangular", 2, 2, Fraction(3, 7), Fraction(5, 2)),
    ]
    for kind, L, N, v, q in cases:
        g = build_torus(kind, L, N, v)
        t = restricted_z_table(g, q)
        assert t.z == partition_function_plain(g, q)


def test_square_width2_has_no_multi_winding():
    for N in (2, 3):
        g = build_torus("square", 2, N, 1)
        t = restricted_z_table(g, 2)
        assert all(n1 <= 1 for (_j, n1) in t.classes)


def test_class_keys_obey_bound():
    for kind in ("square", "triangular"):
        g = build_torus(kind, 3, 2, 1)
        t = restricted_z_table(g, 2)
        for j, n1 in t.classes:
            assert j * n1 <= g.L


def test_kernel_equals_python():
    for kind, L, N in (("square", 2, 2), ("triangular", 2, 2), ("square", 2, 3)):
        g = build_torus(kind, L, N, 1)
        assert class_counts_kernel(g) == class_counts_python(g)


def test_poly_and_fixed_modes_agree():
    for kind, L, N, v in (
        ("square", 2, 2, 1),
        ("triangular", 2, 2, Fraction(-1, 2)),
        ("square", 3, 2, Fraction(3, 7)),
    ):
        g = build_torus(kind, L, N, v)
        tp = restricted_z_table(g, None)
        for q in (1, 2, 3, Fraction(5, 2), Fraction(-1, 3)):
            tf = restricted_z_table(g, q)
            assert set(tp.classes) == set(tf.classes)
            for key, poly in tp.classes.items():
                assert poly.eval(q) == tf.classes[key]


def test_characters_level1_pure_form_when_no_multi_winding():
    # square width 2 has no multi-winding classes, so the level-1
    # character is exactly the half-binomial-free sum
    g = build_torus("square", 2, 3, 1)
    t = restricted_z_table(g, 2)
    c = characters_from_table(t)
    manual = sum(
        t.z_j1(j) * Fraction(annulus_state_count(j, 1)) / Fraction(2) ** j
        for j in range(1, 3)
    )
    assert c.levels[1] == manual
    assert all(v == 0 for v in c.per_class.values())


def test_q_zero_rejected_in_fixed_mode():
    g = build_torus("square", 2, 2, 1)
    t = restricted_z_table(g, 0)
    with pytest.raises(ValueError):
        characters_from_table(t)


def test_reconstructions_zero_on_example_graphs():
    cases = [
        ("square", 2, 2, CouplingSpec.homogeneous(1), 2),
        ("triangular", 2, 2, CouplingSpec.homogeneous(Fraction(-1, 2)), Fraction(5, 2)),
        ("square", 3, 2, CouplingSpec.seeded(11), 2),
    ]
    for kind, L, N, spec, q in cases:
        g = build_torus(kind, L, N, spec)
        t = restricted_z_table(g, q)
        rec = reconstruction_residuals(t, characters_from_table(t))
        assert rec.all_zero, rec.failures()


def test_reconstruction_poly_mode():
    g = build_torus("triangular", 2, 2, Fraction(3, 7))
    t = restricted_z_table(g, None)
    rec = reconstruction_residuals(t, characters_from_table(t))
    assert rec.all_zero, rec.failures()


def test_inversion_roundtrip_present():
    g = build_torus("triangular", 2, 2, 1)
    t = restricted_z_table(g, 2)
    rec = reconstruction_residuals(t, characters_from_table(t))
    ids = {check for check, _, _ in rec.items}
    assert "class-inversion-roundtrip" in ids
    assert "multi-winding-reconstruction" in ids
    assert "full-reconstruction" in ids


def test_enumeration_guard():
    g = build_torus("square", 4, 4, 1)  # 32 edges
    with pytest.raises(EnumerationGuard):
        restricted_z_table(g, 2)
