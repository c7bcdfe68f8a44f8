import pytest
from hypothesis import given
from hypothesis import strategies as st

from altkron.constructions import cay_bimodule, split_null_extension
from altkron.errors import PreconditionError
from altkron.identities import IDENTITIES, V, comm, resolve, IDENTITY_NAMES, check_identity, evaluate, expand, linearize
from altkron.samples import m2, upper_triangular
from altkron.scalars import GF

from fixtures import corrupted, oracle_octonions
from oracles import classical_octonion_table, dense_mul

# M_2 plus the two-dimensional Cayley bimodule: alternative, not associative, dim 6
CAY6 = split_null_extension(m2(), *cay_bimodule())
BAD6 = corrupted(CAY6, 4, 5, {0: 1})


def _is_multilinear(name):
    letters, exprs = IDENTITIES[name]
    _, variables = linearize(expand(exprs[0]))
    return sorted(variables) == sorted(letters)


@pytest.mark.parametrize("name", IDENTITY_NAMES)
def test_identity_holds_on_cayley_null_extension(name):
    assert check_identity(CAY6, name)


@pytest.mark.parametrize("name", IDENTITY_NAMES)
def test_identity_holds_on_associative_algebras(name):
    assert check_identity(upper_triangular(), name)


@pytest.mark.parametrize("name", IDENTITY_NAMES)
def test_corrupted_table_fails_with_witness(name):
    chk = check_identity(BAD6, name)
    assert not chk
    assert set(chk.witness) == {"equation", "assignment"}
    assert chk.witness["assignment"]


@pytest.mark.parametrize("name", [n for n in IDENTITY_NAMES if _is_multilinear(n)])
def test_multilinear_witness_is_a_genuine_counterexample(name):
    chk = check_identity(BAD6, name)
    env = {v: {BAD6.names.index(b): 1} for v, b in chk.witness["assignment"].items()}
    assert evaluate(BAD6, IDENTITIES[name][1][chk.witness["equation"]], env)


O = oracle_octonions()
OT = classical_octonion_table()
coords8 = st.lists(st.integers(-3, 3), min_size=8, max_size=8)


@given(coords8, coords8, coords8)
def test_central_moufang_on_dense_oracle(x, y, z):
    lhs = dense_mul(OT, dense_mul(OT, x, y), dense_mul(OT, z, x))
    rhs = dense_mul(OT, dense_mul(OT, x, dense_mul(OT, y, z)), x)
    assert lhs == rhs


@given(st.integers(0, 2**32), st.sampled_from(IDENTITY_NAMES))
def test_random_mode_passes_on_octonions(seed, name):
    assert check_identity(O, name, mode="random", n=2, seed=seed)


def test_random_mode_catches_corruption():
    assert not check_identity(BAD6, "acirc_left", mode="random", n=30, seed=11)


def test_random_mode_requires_seed():
    with pytest.raises(ValueError):
        check_identity(O, "e15", mode="random", n=3)


def test_unknown_identity_and_mode():
    with pytest.raises(ValueError):
        check_identity(O, "nope")
    with pytest.raises(ValueError):
        check_identity(O, "e15", mode="sometimes")


@pytest.mark.parametrize("name,p", [("e15", 3), ("e17", 2), ("e18", 2), ("e18", 3)])
def test_small_characteristic_refused(name, p):
    with pytest.raises(PreconditionError):
        check_identity(m2(GF(p)), name)


def test_low_characteristic_marks_report_incomplete():
    chk = check_identity(m2(GF(2)), "moufang_central")
    assert chk and "incomplete" in chk.detail
    assert check_identity(m2(GF(5)), "moufang_central").detail == ""


def test_process_pool_gives_same_answer(monkeypatch):
    serial = check_identity(BAD6, "e19")
    monkeypatch.setenv("ALTKRON_THREADS", "2")
    assert check_identity(BAD6, "e19") == serial
    assert check_identity(CAY6, "e16")


def test_linearization_of_a_square():
    letters, exprs = IDENTITIES["moufang_central"]
    poly, variables = linearize(expand(exprs[0]))
    assert variables == ["x1", "x2", "y", "z"]
    assert poly


def test_evaluate_agrees_with_direct_products():
    x, y = {1: 1}, {2: 1}
    assert evaluate(O, comm(V("x"), V("y")), {"x": x, "y": y}) == O.comm(x, y)


def test_short_labels_resolve_to_canonical_names():
    assert resolve("e15") == "commutator_derivation"
    assert resolve("e21") == "commutator_in_associator"
    assert check_identity(CAY6, "e17").name == "identity:commutator_associator"
