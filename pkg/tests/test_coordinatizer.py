import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altkron.algebra import MatrixUnits, check_alternative
from altkron.constructions import cay_bimodule, cd, ncd, octonion, split_null_extension, three_generator_module
from altkron.coordinatized import build_algebra
from altkron.coordinatizer import (
    CoordinatizationError,
    coordinatize,
    decompose,
    grading_checks,
    lemma_checks,
)
from altkron.generators import random_kron_spec
from altkron.linalg import LinearMap
from altkron.samples import dual_numbers, grassmann2, ground, m2, m2_units, truncated_poly
from altkron.scalars import GF, QQ, SplitMix64

from fixtures import corrupted


def scrambled(A, E, seed):
    """``A`` in a random basis, with the matrix units carried along."""
    rng = SplitMix64(seed)
    n, f = A.dim, A.field
    while True:
        vecs = [{i: c for i in range(n) if (c := rng.scalar(f))} for _ in range(n)]
        L = LinearMap(f, n, n, vecs)
        if L.is_invertible():
            break
    back = L.inverse()
    return A.rebase(vecs), MatrixUnits(*(back(e) for e in E.elements()))


def assert_round_trip(A, E, b_dim, v_dim):
    res = coordinatize(A, E)
    assert res.passed, res.report.failures
    assert res.dims["Z_a"] == b_dim and res.dims["V"] == v_dim
    assert res.dims["A_a"] == 4 * b_dim and res.dims["A_c"] == 2 * v_dim
    assert res.report["iso"].passed
    return res


def test_matrix_algebra_has_no_cayley_part():
    res = assert_round_trip(m2(), m2_units(), 1, 0)
    assert res.form.dim == 0


def test_split_octonions():
    con = octonion(ground())
    res = assert_round_trip(con.algebra, con.units, 1, 2)
    assert not res.form.is_zero()


@pytest.mark.parametrize(
    "make,b,v",
    [
        (lambda: cd(dual_numbers(), {1: 1}), 2, 4),
        (lambda: ncd(grassmann2(), {3: 1}), 4, 6),
    ],
)
def test_doublings(make, b, v):
    con = make()
    assert_round_trip(con.algebra, con.units, b, v)


def test_three_generated_module():
    spec = three_generator_module(truncated_poly(3), {1: 1}, {2: 1}, {})
    A, E = build_algebra(spec)
    assert_round_trip(A, E, 3, spec.V.dim)


def test_scrambled_basis():
    con = octonion(ground(GF(7)))
    A, E = scrambled(con.algebra, con.units, 3)
    assert_round_trip(A, E, 1, 2)


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.sampled_from([QQ, GF(3), GF(5)]))
def test_random_round_trip(seed, field):
    spec = random_kron_spec(seed, field)
    A, E = build_algebra(spec)
    res = assert_round_trip(A, E, spec.B.dim, spec.V.dim)
    # the recovered form vanishes exactly when the original one does
    assert res.form.is_zero() == spec.form.is_zero()


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_random_round_trip_scrambled(seed):
    spec = random_kron_spec(seed, GF(7), max_b=2, max_v=2)
    A, E = scrambled(*build_algebra(spec), seed)
    assert_round_trip(A, E, spec.B.dim, spec.V.dim)


def test_bad_units_rejected():
    con = octonion(ground())
    E = con.units
    swapped = MatrixUnits(E.e11, E.e21, E.e12, E.e22)
    with pytest.raises(CoordinatizationError) as err:
        coordinatize(con.algebra, swapped)
    assert err.value.stage == "input"
    assert err.value.partial.report["matrix_units"].passed is False


def test_non_alternative_input_rejected():
    A = split_null_extension(m2(), *cay_bimodule())
    bad = corrupted(A, 4, 5, {0: 1})
    with pytest.raises(CoordinatizationError, match="not alternative"):
        coordinatize(bad, m2_units())


def test_grading_and_lemmas_on_genuine_algebra():
    con = cd(dual_numbers(), {0: 1})
    gr = decompose(con.algebra, con.units)
    assert grading_checks(con.algebra, gr).passed
    assert lemma_checks(con.algebra, gr, con.units).passed


def test_lemma_laws_can_fail():
    # the same grading on a non-alternative table breaks some law
    con = octonion(ground())
    A, E = con.algebra, con.units
    gr = decompose(A, E)
    bad = corrupted(A, 4, 5, {4: 1})
    assert not check_alternative(bad)
    rep = lemma_checks(bad, gr, E)
    assert not rep.passed
    assert all(c.witness is not None for c in rep.failures)


def test_skipping_lemmas():
    con = octonion(ground())
    res = coordinatize(con.algebra, con.units, lemmas=False)
    assert res.passed
    assert "cayley_bimodule_law" not in [c.name for c in res.report.checks]
