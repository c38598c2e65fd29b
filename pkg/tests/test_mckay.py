"""Quotient-model checks: graded dimensions, relation closures, the matrix
model over the line, and confluence of the rewriting system."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bimodulus.errors import ValidationError
from bimodulus.exactmath import QQ
from bimodulus.mckay import (
    closure_dim,
    closure_equals_model_kernel,
    collection_degrees_quotient,
    collection_hom_dims,
    matrix_model_kernel,
    overlap_confluence,
    path_evaluations,
    qweyl_normal_form,
    qweyl_relations,
    s_graded_dim,
    s_hilbert_coeffs,
)


def test_graded_dims_small_values():
    assert [s_graded_dim(2, n) for n in range(6)] == [1, 2, 4, 6, 9, 12]
    assert s_graded_dim(2, 3) == 6
    assert s_graded_dim(2, -1) == 0
    # weight 1 makes the algebra a plain three-variable polynomial ring
    assert [s_graded_dim(1, n) for n in range(5)] == [1, 3, 6, 10, 15]
    with pytest.raises(ValidationError):
        s_graded_dim(0, 3)


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=25))
def test_hilbert_coeffs_invert_the_denominator(d, upto):
    coeffs = s_hilbert_coeffs(d, upto=upto)
    assert coeffs == [s_graded_dim(d, n) for n in range(upto + 1)]
    # multiply back by (1 - t)^2 (1 - t^d); the product must be 1
    denom = [0] * (d + 3)
    for i, a in ((0, 1), (1, -2), (2, 1)):
        denom[i] += a
        denom[i + d] -= a
    for n in range(upto + 1):
        prod = sum(denom[i] * coeffs[n - i] for i in range(min(n, d + 2) + 1))
        assert prod == (1 if n == 0 else 0)


def test_collection_degrees_quotient():
    assert collection_degrees_quotient(2) == (0, 1, 2, 3)
    assert collection_degrees_quotient(5) == (0, 1, 5, 6)
    with pytest.raises(ValidationError):
        collection_degrees_quotient(1)


def test_relations_need_invertible_parameter(F101):
    with pytest.raises(ValidationError):
        qweyl_relations(F101, 0)
    with pytest.raises(ValidationError):
        qweyl_normal_form(QQ, 0, "xy")


def test_closure_dims(F101):
    lam = F101.coerce(7)
    assert closure_dim(F101, lam, 1, 3) == 1
    assert closure_dim(F101, lam, 2, 4) == 1
    assert closure_dim(F101, lam, 1, 4) == 6


def test_collection_hom_dims_match_graded_dims(any_field):
    lam = any_field.coerce(Fraction(3, 7)) if any_field is QQ else any_field.coerce(5)
    dims = collection_hom_dims(any_field, lam)
    assert dims == [[1, 2, 4, 6], [0, 1, 2, 4], [0, 0, 1, 2], [0, 0, 0, 1]]
    degs = collection_degrees_quotient(2)
    for i in range(4):
        for j in range(i, 4):
            assert dims[i][j] == s_graded_dim(2, degs[j] - degs[i])


def test_model_kernel_size(F101):
    vecs = path_evaluations(F101, 3)
    assert len(vecs) == 12 and all(len(v) == 6 for v in vecs)
    assert len(matrix_model_kernel(F101, 3)) == 6


def test_closure_equals_model_kernel_random_parameters(F101, rng):
    for _ in range(10):
        out = closure_equals_model_kernel(F101, F101.random_nonzero(rng))
        assert out["equal"]
        assert out["closure_dim"] == out["kernel_dim"] == 6
        assert out["quotient_dim"] == out["graded_dim_3"] == 6


def test_closure_equals_model_kernel_rational():
    for lam in (Fraction(1), Fraction(-2), Fraction(3, 7)):
        out = closure_equals_model_kernel(QQ, lam)
        assert out["equal"] and out["quotient_dim"] == 6


def test_normal_form_rewriting(F101):
    lam = F101.coerce(7)
    assert qweyl_normal_form(F101, lam, "yx") == {"xy": F101.one()}
    assert qweyl_normal_form(F101, lam, "zx") == {"xz": lam}
    assert qweyl_normal_form(F101, lam, "zzxx") == {"xxzz": lam * lam * lam * lam}
    assert qweyl_normal_form(F101, lam, "yzx") == {"xyz": lam}
    assert qweyl_normal_form(F101, lam, "zxy") == {"xyz": lam}
    with pytest.raises(ValidationError):
        qweyl_normal_form(F101, lam, "xw")


def test_parameter_one_is_commutative():
    out = qweyl_normal_form(QQ, 1, "zzyyxx")
    assert out == {"xxyyzz": Fraction(1)}


def test_overlap_confluence(any_field, rng):
    for _ in range(5):
        lam = (
            any_field.coerce(Fraction(rng.randint(1, 9), rng.randint(1, 9)))
            if any_field is QQ
            else any_field.random_nonzero(rng)
        )
        assert overlap_confluence(any_field, lam)
