"""Field plumbing and the exact linear algebra kernel.

Everything downstream trusts rref/rank/kernel blindly, so the properties
here are checked over both Q and a prime field with randomized matrices.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bimodulus.errors import ValidationError
from bimodulus.exactmath import (
    QQ,
    PrimeField,
    coords_in_basis,
    field_from_json,
    kernel_basis,
    mat_mul,
    rank,
    rref,
    scalar_from_json,
    scalar_to_json,
    span_contains,
    sparse_rank,
    subspace_equal,
    sum_prod,
)


def test_prime_field_rejects_characteristic_2_and_3():
    for p in (2, 3):
        with pytest.raises(ValidationError):
            PrimeField(p)
    assert PrimeField(5).characteristic == 5


def test_prime_field_rejects_composites():
    with pytest.raises(ValidationError):
        PrimeField(91)


def test_fp_format_parse_roundtrip(F101):
    rng = random.Random(1)
    for _ in range(20):
        x = F101.random(rng)
        assert F101.parse(F101.format(x)) == x


def test_scalar_json_roundtrip(any_field):
    rng = random.Random(2)
    for _ in range(10):
        x = any_field.random(rng)
        s = scalar_to_json(any_field, x)
        assert isinstance(s, str)
        assert scalar_from_json(any_field, s) == x


@pytest.mark.parametrize(
    "obj,char",
    [({"kind": "Q"}, 0), ({"kind": "Fp", "p": 101}, 101)],
)
def test_field_from_json(obj, char):
    f = field_from_json(obj)
    assert f.characteristic == char
    assert field_from_json(f.to_json()) == f


def test_quadratic_extension_generator_squares_to_nonresidue(F101):
    ext = F101.quadratic_extension()
    g = ext.gen()
    assert g * g == ext.coerce(F101.smallest_nonresidue())
    # every base element acquires a square root upstairs
    rng = random.Random(3)
    for _ in range(10):
        x = ext.coerce(F101.random(rng))
        assert ext.is_square(x)
        r = ext.sqrt(x)
        assert r * r == x


def _random_rows(field, rng, nrows, ncols):
    return [[field.random(rng) for _ in range(ncols)] for _ in range(nrows)]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), nrows=st.integers(1, 5), ncols=st.integers(1, 5))
def test_rref_is_idempotent_and_rank_shuffle_invariant(seed, nrows, ncols):
    rng = random.Random(seed)
    field = QQ if seed % 2 else PrimeField(101)
    rows = _random_rows(field, rng, nrows, ncols)
    red, piv = rref(field, rows)
    red2, piv2 = rref(field, red)
    assert red2 == red and piv2 == piv
    assert len(piv) == rank(field, rows)
    shuffled = list(rows)
    rng.shuffle(shuffled)
    assert rank(field, shuffled) == len(piv)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), nrows=st.integers(1, 4), ncols=st.integers(1, 5))
def test_kernel_vectors_annihilate_and_count(seed, nrows, ncols):
    rng = random.Random(seed)
    field = QQ if seed % 2 else PrimeField(101)
    rows = _random_rows(field, rng, nrows, ncols)
    ker = kernel_basis(field, rows, ncols)
    assert len(ker) == ncols - rank(field, rows)
    for v in ker:
        for row in rows:
            assert not sum_prod(row, v)
    # kernel vectors are independent
    assert rank(field, ker) == len(ker) if ker else True


def test_span_contains_and_coords(F101):
    rng = random.Random(4)
    basis = _random_rows(F101, rng, 3, 5)
    coeffs = [F101.random(rng) for _ in range(3)]
    combo = [sum_prod(coeffs, [basis[i][j] for i in range(3)]) for j in range(5)]
    assert span_contains(F101, basis, combo)
    got = coords_in_basis(F101, basis, combo)
    recon = [sum_prod(got, [basis[i][j] for i in range(3)]) for j in range(5)]
    assert recon == combo


def test_subspace_equal_ignores_presentation():
    field = QQ
    a = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    b = [[Fraction(2), Fraction(3)], [Fraction(5), Fraction(1)]]
    assert subspace_equal(field, a, b)
    assert not subspace_equal(field, [a[0]], b)


def test_sparse_rank_matches_dense(F101):
    rng = random.Random(5)
    for _ in range(15):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        dense = _random_rows(F101, rng, nrows, ncols)
        # knock out a random sprinkling of entries
        for row in dense:
            for j in range(ncols):
                if rng.random() < 0.5:
                    row[j] = F101.zero()
        sparse = [
            {j: v for j, v in enumerate(row) if v} for row in dense
        ]
        assert sparse_rank(F101, sparse) == rank(F101, dense)


def test_mat_mul_shapes():
    A = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]]
    B = [[Fraction(3)], [Fraction(4)]]
    assert mat_mul(A, B) == [[Fraction(11)], [Fraction(4)]]
