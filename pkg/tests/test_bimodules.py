"""Doubled-member cohomology, descriptor tables, stability and numerology."""

import json
import pathlib

import pytest

from bimodulus.errors import ValidationError
from bimodulus.exactmath import QQ
from bimodulus.curves import make_kind
from bimodulus.linebundles import Curve, random_line_bundle
from bimodulus.bimodules import (
    Descriptor,
    NRSheaf,
    descriptor_of_line_bundle,
    descriptor_of_nr_sheaf,
    endo_ext_dims_nr,
    endo_ext_dims_reduced,
    gieseker_p,
    hilbert_polynomial,
    hochschild_dims,
    moduli_dim_check,
    nr_invertible_cohomology,
    nr_split_u,
    nr_split_v,
    reduced_hilbert,
    split_ab,
    split_ab_prime,
    split_of_concrete,
    split_prime_of_concrete,
    stability_classify,
)
from bimodulus.quivers import descriptor_grid

from oracles import nr_closed_form, split_h0_profile

DATA = pathlib.Path(__file__).parent / "data"


# ---------------------------------------------------------------------------
# Cech cohomology on the doubled member


def test_invertible_cohomology_grid_against_closed_form(F101):
    for k in range(-3, 5):
        for c in (0, 1, 7):
            got = nr_invertible_cohomology(F101, k, c)
            assert got == nr_closed_form(k, c != 0), (k, c, got)


def test_invertible_cohomology_over_the_rationals():
    for k in (-1, 0, 1, 2):
        for c in (0, 1):
            got = nr_invertible_cohomology(QQ, k, c)
            assert got == nr_closed_form(k, c != 0)


def test_window_enlargement_is_stable(F101):
    base = nr_invertible_cohomology(F101, 3, 2)
    assert nr_invertible_cohomology(F101, 3, 2, window=30) == base


def test_nr_sheaf_euler_characteristic(F101):
    s = NRSheaf(F101, 2, 1, apic=5)
    assert s.chi() == 2 * s.k
    assert s.h0() - s.h1() == s.chi()
    t = NRSheaf(F101, 1, 0, apic=0, dfin=(1, 0, 2), dinf=1)
    assert t.degd() == 3
    assert t.chi() == 2 * t.k - 3
    assert t.h0() - t.h1() == t.chi()


def test_nr_twists_shift_classes(F101):
    s = NRSheaf(F101, 1, 1, apic=4)
    up = s.twist_u(2)
    assert (up.ku, up.kv) == (3, 1)
    vp = s.twist_v(-1)
    assert (vp.ku, vp.kv) == (1, 0)
    # pic coordinate of a u-twist moves opposite to the v-twist
    assert s.twist_v(1).pic_coordinate() == s.pic_coordinate()


def test_nr_swap_is_an_involution(F101):
    s = NRSheaf(F101, 2, -1, apic=3, dfin=(1,), dinf=1)
    d = s.swap().swap()
    assert (d.ku, d.kv, d.apic) == (s.ku, s.kv, s.apic)
    assert s.swap().chi() == s.chi()


def test_nr_split_profile_matches_direct_sum(F101):
    for (ku, kv, apic) in ((0, 0, 0), (0, 0, 3), (1, 1, 0), (2, -1, 1)):
        s = NRSheaf(F101, ku, kv, apic=apic)
        a, b = nr_split_v(s)
        assert a + b + 2 == s.chi()
        window = 4
        profile = split_h0_profile(a, b, window)
        got = [s.twist_v(j).h0() for j in range(-window, window + 1)]
        assert got == profile


def test_nr_split_u_is_split_v_after_swap(F101):
    s = NRSheaf(F101, 1, 2, apic=2)
    assert nr_split_u(s) == nr_split_v(s.swap())


def test_nr_trivial_class_splits_with_gap(F101):
    assert nr_split_v(NRSheaf(F101, 0, 0, apic=0)) == (-2, 0)
    assert nr_split_v(NRSheaf(F101, 0, 0, apic=5)) == (-1, -1)


# ---------------------------------------------------------------------------
# descriptors and tables


def test_descriptor_validates_parameter_sets():
    Descriptor("split-pair", a=0, b=1)
    with pytest.raises(ValidationError):
        Descriptor("split-pair", a=1, b=0)  # must be sorted
    with pytest.raises(ValidationError):
        Descriptor("split-pair", a=0)
    with pytest.raises(ValidationError):
        Descriptor("non-reduced", chi=1, degd=2)  # parity mismatch
    with pytest.raises(ValidationError):
        Descriptor("non-reduced", chi=2, degd=0)  # needs pullback flags
    with pytest.raises(ValidationError):
        Descriptor("unheard-of", a=1)
    d = Descriptor("non-reduced", chi=2, degd=0, v_pullback=True,
                   shifted_v_pullback=False)
    assert d.chi() == 2


def test_descriptor_flag_exclusivity():
    with pytest.raises(ValidationError):
        Descriptor("non-reduced", chi=2, degd=0, v_pullback=True,
                    shifted_v_pullback=True)


def test_split_tables_satisfy_global_invariants():
    for desc, shifted in descriptor_grid():
        chi = desc.chi()
        a, b = split_ab(desc)
        ap, bp = split_ab_prime(desc, shifted_v_pullback=shifted)
        assert a <= b and ap <= bp
        assert a + b + 2 == chi
        assert ap + bp + 4 == chi
        assert a >= ap
        # a wide gap forces non-irreducible support among the (2,2) kinds
        if desc.kind != "split-pair" and b - a >= 3:
            assert desc.kind != "integral"


def test_split_prime_rejects_flag_on_internal_kinds():
    d = Descriptor("non-reduced", chi=2, degd=0, v_pullback=False,
                   shifted_v_pullback=True)
    with pytest.raises(ValidationError):
        split_ab_prime(d, shifted_v_pullback=True)


@pytest.mark.parametrize(
    "kind,params,expect",
    [
        ("non-reduced", dict(chi=2, degd=0, v_pullback=True, shifted_v_pullback=False), (-1, 1)),
        ("non-reduced", dict(chi=2, degd=0, v_pullback=False, shifted_v_pullback=False), (0, 0)),
        ("non-reduced", dict(chi=2, degd=2), (0, 0)),
        ("non-reduced", dict(chi=1, degd=3), (-1, 0)),
        ("reducible", dict(p=1, q=1, invertible=True, v_pullback=True), (-1, 1)),
        ("reducible", dict(p=1, q=3, invertible=True), (1, 1)),
        ("two-lines", dict(p=0, q=1), (0, 1)),
        ("split-pair", dict(a=-1, b=2), (-1, 2)),
    ],
)
def test_split_table_fixtures(kind, params, expect):
    assert split_ab(Descriptor(kind, **params)) == expect


def test_stability_matches_golden_table():
    rows = json.loads((DATA / "stability_table.json").read_text())
    assert len(rows) >= 20
    for row in rows:
        d = Descriptor(row["kind"], **row["params"])
        assert stability_classify(d) == row["stability"], row


def test_hilbert_and_reduced_polynomials():
    from fractions import Fraction

    d = Descriptor("non-reduced", chi=2, degd=2)
    assert hilbert_polynomial(d) == (8, 2)
    assert gieseker_p(d) == (1, Fraction(1, 4))
    assert reduced_hilbert(4, -1) == (1, Fraction(-1, 4))
    with pytest.raises(ValidationError):
        reduced_hilbert(0, 1)


# ---------------------------------------------------------------------------
# table vs engine on concrete sheaves


def test_concrete_line_bundle_tables_agree(F101, rng):
    for kind in ("I0", "I1", "I2", "III"):
        curve = Curve(make_kind(F101, kind, rng))
        L = random_line_bundle(curve, rng)
        desc, tw = descriptor_of_line_bundle(L)
        assert split_ab(desc) == split_of_concrete(L)
        assert split_ab_prime(desc, shifted_v_pullback=tw) == split_prime_of_concrete(L)


def test_concrete_nr_sheaf_tables_agree(F101):
    for s in (
        NRSheaf(F101, 1, 0, apic=0),
        NRSheaf(F101, 1, 0, apic=2),
        NRSheaf(F101, 1, 1, apic=0, dfin=(3, 1), dinf=0),
        NRSheaf(F101, 0, 1, apic=1, dfin=(), dinf=1),
    ):
        desc = descriptor_of_nr_sheaf(s)
        assert split_ab(desc) == split_of_concrete(s)
        assert split_ab_prime(desc) == split_prime_of_concrete(s)


# ---------------------------------------------------------------------------
# endomorphism numerology


def test_endo_ext_dims_on_a_smooth_member(F101, rng):
    curve = Curve(make_kind(F101, "I0", rng))
    dims = endo_ext_dims_reduced(curve)
    assert dims == (1, 9, 0)
    e0, e1, e2 = dims
    assert e0 - e1 + e2 == -8


def test_endo_ext_dims_on_the_doubled_member(F101):
    assert endo_ext_dims_nr(F101) == (1, 9, 0)


@pytest.mark.parametrize("d,expect", [(0, (6, 9, 0, 3)), (2, (7, 10, 0, 3)), (4, (9, 13, 1, 3))])
def test_hochschild_fixtures(d, expect):
    assert hochschild_dims(d) == expect


def test_hochschild_alternating_sum_constant():
    for d in range(0, 9):
        assert hochschild_dims(d)[3] == 3
    with pytest.raises(ValidationError):
        hochschild_dims(-1)


def test_moduli_dim_check_consistency():
    out = moduli_dim_check((1, 9, 0))
    assert out["smooth_locus_dim"] == 9
    assert out["quotient_dim"] == 3
    assert out["hochschild_euler"] == 3
    assert out["consistent"]
