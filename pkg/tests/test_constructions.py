import pytest
from hypothesis import given
from hypothesis import strategies as st

from altkron.algebra import Subspace, check_alternative, center, nucleus, quotient_algebra, verify_matrix_units
from altkron.constructions import (
    alpha_central,
    cay_bimodule,
    cd,
    m2_ideal,
    ncd,
    octonion,
    octonion_criterion,
    reg_bimodule,
    split_null_extension,
    three_generator_module,
)
from altkron.coordinatized import BimoduleV, CoeffRing, KronSpec, SkewForm, build_algebra, validate_form
from altkron.linalg import LinearMap
from altkron.errors import PreconditionError
from altkron.samples import dual_numbers, grassmann2, ground, m2, truncated_poly, upper_triangular
from altkron.scalars import GF, QQ

from fixtures import oracle_octonions
from oracles import brute_alternative, dense_table

OCT = octonion(ground())
coords = st.lists(st.integers(-4, 4), min_size=8, max_size=8)


@pytest.mark.parametrize("field", [QQ, GF(3), GF(5)])
def test_split_octonions_basic_shape(field):
    con = octonion(ground(field))
    A = con.algebra
    assert A.dim == 8
    assert check_alternative(A)
    assert not A.is_associative()
    assert verify_matrix_units(A, con.units)
    assert nucleus(A).rank == 1 and center(A).rank == 1
    if field is QQ:
        assert brute_alternative(dense_table(A)) is None


@given(coords)
def test_every_octonion_is_quadratic(xs):
    # x^2 lies in span(1, x) for split and classical octonions alike
    for A in (OCT.algebra, oracle_octonions()):
        x = {i: c for i, c in enumerate(xs) if c}
        S = Subspace(QQ, 8, [A.unit, x])
        assert S.contains(A.mul(x, x))


def test_octonion_needs_nonzero_v2_and_commutative_base():
    with pytest.raises(PreconditionError):
        octonion(ground(), v2=0)
    with pytest.raises(PreconditionError):
        octonion(upper_triangular())


@pytest.mark.parametrize("base,alpha", [(dual_numbers(), {1: 1}), (truncated_poly(3), {0: 2, 2: 1}), (dual_numbers(GF(3)), {0: 1})])
def test_cd_is_alternative(base, alpha):
    con = cd(base, alpha)
    assert con.algebra.dim == 8 * base.dim
    assert check_alternative(con.algebra)
    assert verify_matrix_units(con.algebra, con.units)
    assert validate_form(con.spec).passed


def test_cd_rejects_noncommutative_base():
    with pytest.raises(PreconditionError):
        cd(grassmann2(), {0: 1})


def test_ncd_on_a_commutative_ring_is_cd():
    A = truncated_poly(3)
    assert ncd(A, {1: 1}).algebra == cd(A, {1: 1}).algebra


def test_ncd_over_grassmann_and_lift_independence():
    A = grassmann2()
    alpha = {3: 1}  # e1e2 spans the commutator ideal and is central
    assert alpha_central(CoeffRing(A), alpha)
    con = ncd(A, alpha, section_seed=11)
    assert con.algebra.dim == 4 * A.dim + 4 * 3
    assert check_alternative(con.algebra)
    assert con.provenance["section_seed"] == 11


def test_ncd_modulo_matrix_ideal_is_cd_over_quotient():
    A = grassmann2()
    R = CoeffRing(A)
    q = quotient_algebra(A, R.commutator_ideal)
    alpha = {3: 1}
    big = ncd(A, alpha).algebra
    I = m2_ideal(A, R.commutator_ideal, extra=4 * q.bar.dim)
    small = quotient_algebra(big, I).bar
    ref = cd(q.bar, q.proj(alpha)).algebra
    assert small.dim == ref.dim
    assert [[dict(c) for c in row] for row in small.table] == ref.table


def test_ncd_rejects_noncentral_alpha():
    with pytest.raises(PreconditionError, match="central"):
        ncd(upper_triangular(), {1: 1})


def test_null_extensions():
    cay = split_null_extension(m2(), *cay_bimodule())
    assert check_alternative(cay) and not cay.is_associative()
    reg = split_null_extension(m2(), *reg_bimodule(m2()))
    assert reg.is_associative()
    with pytest.raises(ValueError):
        split_null_extension(m2(), [], [])


def test_three_generator_module():
    B = truncated_poly(3)
    spec = three_generator_module(B, {1: 1}, {2: 1}, {})
    assert validate_form(spec).passed
    A, E = build_algebra(spec)
    assert check_alternative(A)
    assert verify_matrix_units(A, E)
    assert not three_generator_module(B, {1: 1}, {2: 1}, {}).form.is_zero()


def test_three_generator_module_with_unit_entry_is_octonion_like():
    spec = three_generator_module(truncated_poly(2), {0: 1}, {}, {})
    v = octonion_criterion(spec)
    assert v.is_octonion is True
    x, y = v.witness
    assert spec.form(x, y) == spec.B.one


def test_octonion_criterion():
    assert octonion_criterion(OCT.spec).is_octonion is True
    none = octonion_criterion(build_spec_m2())
    assert none.is_octonion is False
    nilpotent = three_generator_module(truncated_poly(3), {1: 1}, {2: 1}, {})
    assert octonion_criterion(nilpotent).is_octonion is False
    assert octonion_criterion(OCT.spec, ({0: 1}, {0: 1})).is_octonion is False


def test_octonion_criterion_exhaustive_over_finite_field():
    spec = three_generator_module(truncated_poly(2, GF(3)), {1: 1}, {}, {})
    v = octonion_criterion(spec)
    assert v.is_octonion is False


def build_spec_m2():
    B = CoeffRing(ground())
    return KronSpec(B, BimoduleV(B, 0, [LinearMap(QQ, 0, 0, [])]), SkewForm.zero(B, 0))
