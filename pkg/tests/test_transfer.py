from fractions import Fraction

import pytest

from toruspotts.exact import PolyQ
from toruspotts.lattice import build_torus
from toruspotts.numtheory import annulus_state_count, class_members, divisors
from toruspotts.oracle import characters_from_table, restricted_z_table
from toruspotts.states import canonical_labels, enumerate_states
from toruspotts.transfer import (
    RowCouplings,
    build_row_operator,
    class_trace,
    full_labeled_trace,
    irrep_trace,
    level_trace,
    sector_spectrum,
    shift_key,
    state_key,
    twisted_trace,
)

Q2 = Fraction(2)


def square_row(L, v_long, v_trans, q):
    return RowCouplings(
        L=L,
        longitudinal=tuple(Fraction(v) for v in v_long),
        diagonal=None,
        transverse=tuple((y, (y + 1) % L, Fraction(v)) for y, v in enumerate(v_trans)),
    )


def test_all_zero_couplings_force_fresh_state():
    row = square_row(3, [0, 0, 0], [0, 0, 0], Q2)
    op = build_row_operator(row, 0, Q2)
    # every unmarked block dies with one factor of Q; only fresh singletons remain
    for s in enumerate_states(3, 0):
        out = op.apply_key(state_key(s))
        assert len(out) == 1
        (key, w), = out.items()
        assert key == (((0,), 0), ((1,), 0), ((2,), 0))
        assert w == Q2 ** len(s.blocks)


def test_marked_singleton_annihilates_without_keep():
    row = square_row(3, [0, 0, 0], [0, 0, 0], Q2)
    op = build_row_operator(row, 1, Q2)
    s = canonical_labels(enumerate_states(3, 1)[0])
    assert op.apply_key(state_key(s)) == {}


def test_full_level_square_row_is_scaled_identity():
    for L in (2, 3):
        v_long = [Fraction(k + 2, 3) for k in range(L)]
        row = square_row(L, v_long, [1] * L, Q2)
        op = build_row_operator(row, L, Q2)
        s = canonical_labels(enumerate_states(L, L)[0])
        out = op.apply_key(state_key(s))
        expect = Fraction(1)
        for v in v_long:
            expect *= v
        assert out == {state_key(s): expect}


def test_row_commutes_with_mark_shift():
    # exhaustively at L = 3 for every level, sampled at L = 4
    for L, levels, graph in ((3, (1, 2, 3), None), (4, (2,), None)):
        g = build_torus("triangular", L, 2, Fraction(1, 2))
        from toruspotts.transfer import column_rows

        rows = column_rows(g, Q2)
        for l in levels:
            op = build_row_operator(rows[0], l, Q2)
            basis = [canonical_labels(s) for s in enumerate_states(L, l)]
            if L == 4:
                basis = basis[::5]
            for s in basis:
                key = state_key(s)
                for a in range(1, l + 1):
                    lhs = op.apply_key(shift_key(key, a))
                    rhs = {}
                    for k2, w in op.apply_key(key).items():
                        rhs[shift_key(k2, a)] = rhs.get(shift_key(k2, a), 0) + w
                    assert lhs == rhs


def test_level_conservation():
    g = build_torus("triangular", 3, 2, 1)
    from toruspotts.transfer import column_rows

    rows = column_rows(g, Q2)
    for l in range(0, 4):
        op = build_row_operator(rows[0], l, Q2)
        for s in enumerate_states(3, l):
            st = canonical_labels(s) if l else s
            for key, _w in op.apply_key(state_key(st)).items():
                assert sum(1 for _pts, lab in key if lab) == l


def test_twisted_trace_constant_on_classes():
    g = build_torus("triangular", 3, 2, 1)
    for q in (Q2, Fraction(5, 2)):
        for a, b in ((1, 2),):  # the two generators of the 3-cycle class
            assert twisted_trace(g, 3, a, q) == twisted_trace(g, 3, b, q)


def test_level_trace_matches_oracle():
    for kind, L, N, v, q in (
        ("square", 2, 2, 1, 2),
        ("square", 2, 3, 1, 2),
        ("triangular", 2, 2, 1, Fraction(5, 2)),
        ("triangular", 3, 2, Fraction(-1, 2), 3),
    ):
        g = build_torus(kind, L, N, v)
        chars = characters_from_table(restricted_z_table(g, q))
        for l in range(L + 1):
            assert level_trace(g, l, q) == chars.levels[l], (kind, L, N, l)


def test_class_traces_match_oracle():
    for kind, L, N in (("triangular", 2, 2), ("triangular", 2, 3), ("square", 3, 2)):
        g = build_torus(kind, L, N, 1)
        chars = characters_from_table(restricted_z_table(g, 2))
        for (d, n1), value in chars.per_class.items():
            assert class_trace(g, d * n1, d, 2) == value, (kind, L, N, d, n1)


def test_poly_mode_matches_oracle():
    g = build_torus("square", 2, 2, 1)
    chars = characters_from_table(restricted_z_table(g, None))
    for l in range(3):
        got = level_trace(g, l, None)
        assert isinstance(got, PolyQ)
        assert got == chars.levels[l]


def test_irrep_traces_sum_to_level_trace():
    g = build_torus("triangular", 2, 2, 1)
    for q in (Q2, Fraction(5, 2)):
        for l in range(1, 3):
            total = None
            for k in range(1, l + 1):
                t = irrep_trace(g, l, k, q)
                total = t if total is None else total + t
            assert total == level_trace(g, l, q)


def test_irrep_trace_inversion_numeric():
    import cmath

    g = build_torus("triangular", 2, 2, 1)
    l = 2
    by_k = {k: float(irrep_trace(g, l, k, 2)) for k in (1, 2)}
    for a in (1, 2):
        inv = sum(
            cmath.exp(2j * cmath.pi * k * a / l) * by_k[k] for k in (1, 2)
        ) / l
        assert abs(inv - float(twisted_trace(g, l, a, 2))) < 1e-9


def test_labeled_trace_collapse():
    for kind in ("square", "triangular"):
        g = build_torus(kind, 2, 2, 1)
        for l in range(0, 3):
            assert full_labeled_trace(g, l, 2) == level_trace(g, l, 2)


def test_identity_shift_is_default():
    g = build_torus("square", 2, 3, 1)
    assert twisted_trace(g, 2, 2, 2) == twisted_trace(g, 2, None, 2)
    assert level_trace(g, 2, 2) == 2 * twisted_trace(g, 2, None, 2)


def test_square_width2_swap_class_vanishes():
    g = build_torus("square", 2, 3, 1)
    assert twisted_trace(g, 2, 1, 2) == 0


def test_triangular_width2_swap_class_nonzero():
    g = build_torus("triangular", 2, 2, 1)
    assert twisted_trace(g, 2, 1, 2) != 0


def test_validation():
    g = build_torus("square", 2, 2, 1)
    with pytest.raises(ValueError):
        twisted_trace(g, 3, 1, 2)
    with pytest.raises(ValueError):
        twisted_trace(g, 2, 5, 2)
    with pytest.raises(ValueError):
        irrep_trace(g, 2, 0, 2)


def test_sector_dimensions_and_power_sums():
    g = build_torus("square", 2, 3, 1)
    for l in range(0, 3):
        for k in range(1, l + 1) if l else [None]:
            spec = sector_spectrum(g, l, k, 2)
            assert spec.dimension == annulus_state_count(2, l)
            ps = sum(ev**g.N for ev in spec.eigenvalues)
            exact = float(irrep_trace(g, l, k, 2))
            assert abs(ps - exact) <= 1e-8 * max(1.0, abs(exact))


def test_sector_spectrum_validation():
    from toruspotts.lattice import CouplingSpec

    g = build_torus("square", 2, 2, Fraction(1, 2))
    with pytest.raises(ValueError):
        sector_spectrum(g, 1, 2, 2)
    inhom = build_torus("square", 2, 2, CouplingSpec.seeded(3))
    with pytest.raises(ValueError):
        sector_spectrum(inhom, 1, 1, 2)


def test_eigenvalue_ordering():
    from toruspotts.transfer import order_eigenvalues

    vals = order_eigenvalues([1 + 0j, -2 + 0j, 2 + 0j, 1j])
    assert vals[0] == -2 + 0j or vals[0] == 2 + 0j
    assert abs(vals[0]) == 2 and abs(vals[1]) == 2
    assert vals[0].real > vals[1].real  # tie broken by real part
