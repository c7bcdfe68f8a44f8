"""The eight acceptance criteria.  Each test prints one PASS/FAIL line."""

import time

import pytest

from altkron.algebra import check_alternative, quotient_algebra
from altkron.constructions import (
    cay_bimodule,
    cd,
    m2_ideal,
    ncd,
    octonion,
    octonion_criterion,
    split_null_extension,
    three_generator_module,
)
from altkron.coordinatized import CoeffRing, build_algebra
from altkron.coordinatizer import coordinatize
from altkron.generators import perturb_form, random_kron_spec, spec_corpus
from altkron.identities import IDENTITY_NAMES, check_identity
from altkron.plucker import check_plucker, grassmann_alphas, independence_check
from altkron.samples import dual_numbers, grassmann2, ground, m2, m2_units, truncated_poly
from altkron.scalars import GF, QQ, SplitMix64

from fixtures import corrupted

CORPUS_SIZE = 200


def announce(capsys, number, title, ok, detail=""):
    with capsys.disabled():
        print(f"\ncriterion {number} {title}: {'PASS' if ok else 'FAIL'}{' (' + detail + ')' if detail else ''}")
    assert ok, detail


@pytest.fixture(scope="module")
def corpus():
    specs = spec_corpus(CORPUS_SIZE, seed=7, fields=(QQ, GF(5)), max_b=3, max_v=3)
    return [(s, *build_algebra(s)) for s in specs]


def fixtures():
    out = []
    for con in (octonion(ground()), cd(dual_numbers(), {1: 1}), ncd(grassmann2(), {3: 1})):
        out.append((con.provenance["kind"], con.algebra, con.units))
    out.append(("m2", m2(), m2_units()))
    out.append(("null extension", split_null_extension(m2(), *cay_bimodule()), m2_units()))
    spec = three_generator_module(truncated_poly(3), {1: 1}, {2: 1}, {})
    out.append(("three generated", *build_algebra(spec)))
    return out


def test_forward_construction_is_alternative(corpus, capsys):
    t = time.perf_counter()
    bad = [(i, chk.witness) for i, (_, A, _) in enumerate(corpus) if not (chk := check_alternative(A))]
    elapsed = time.perf_counter() - t
    fields = {s.field for s, _, _ in corpus}
    nonzero = sum(not s.form.is_zero() for s, _, _ in corpus)
    ok = not bad and len(corpus) >= 200 and fields == {QQ, GF(5)} and elapsed < 60
    detail = f"{len(corpus)} specs, {nonzero} nonzero forms, {len(bad)} failures, {elapsed:.1f}s"
    announce(capsys, 1, "forward construction", ok, detail)


def test_round_trip(corpus, capsys):
    bad = []
    for i, (spec, A, E) in enumerate(corpus):
        res = coordinatize(A, E)
        dims = res.dims
        if not (res.passed and res.report["iso"] and dims["Z_a"] == spec.B.dim and dims["V"] == spec.V.dim):
            bad.append((i, res.report.witness, dims))
    announce(capsys, 2, "round trip", not bad, f"{len(corpus)} specs, {len(bad)} failures" + (f", first {bad[0]}" if bad else ""))


def test_three_vector_relation_is_necessary(capsys):
    rng = SplitMix64(2024)
    trials, survivors = 0, []
    while trials < 50:
        spec = random_kron_spec(rng, (QQ, GF(5))[trials % 2], v_dim=3)
        out = perturb_form(spec, rng)
        if out is None:
            continue
        trials += 1
        A, _ = build_algebra(out[0], force=True)
        chk = check_alternative(A)
        if chk or chk.witness is None:
            survivors.append(out[1])
    announce(capsys, 3, "perturbed forms break alternativity", not survivors, f"{trials} perturbed specs, {len(survivors)} still alternative")


def test_octonion_fixture(capsys):
    con = octonion(ground())
    res = coordinatize(con.algebra, con.units)
    verdict = octonion_criterion(res.spec)
    ok = (
        res.passed
        and res.dims["Z_a"] == 1
        and res.dims["V"] == 2
        and res.spec.form({0: 1}, {1: 1}) == {0: -1}
        and verdict.is_octonion is True
        and verdict.witness == ({0: 1}, {1: -1})
    )
    announce(capsys, 4, "split octonions", ok, f"gram {res.form.gram}, witness {verdict.witness}")


def test_doublings(capsys):
    a = cd(dual_numbers(), {1: 1}).algebra
    A = grassmann2()
    alpha = {3: 1}
    b = ncd(A, alpha).algebra
    R = CoeffRing(A)
    q = quotient_algebra(A, R.commutator_ideal)
    small = quotient_algebra(b, m2_ideal(A, R.commutator_ideal, extra=4 * q.bar.dim)).bar
    ref = cd(q.bar, q.proj(alpha)).algebra
    same = small.dim == ref.dim and small.table == ref.table
    ok = bool(check_alternative(a)) and bool(check_alternative(b)) and same
    announce(capsys, 5, "doublings", ok, f"cd dim {a.dim}, ncd dim {b.dim}, quotient dim {small.dim} table equal {same}")


STRUCTURAL = {
    "grading:even_even",
    "grading:even_odd",
    "grading:odd_odd",
    "coefficients_in_nucleus",
    "even_part_tensor_basis",
    "cayley_bimodule_law",
    "units_act_associatively_on_odd",
    "associator_with_units_left",
}


def test_structural_laws(corpus, capsys):
    cases = fixtures() + [(f"corpus {i}", A, E) for i, (_, A, E) in enumerate(corpus[:30])]
    bad = []
    for name, A, E in cases:
        rep = coordinatize(A, E).report
        missing = STRUCTURAL - {c.name for c in rep.checks}
        if missing or not rep.passed:
            bad.append((name, sorted(missing), rep.witness))
    announce(capsys, 6, "structural laws", not bad, f"{len(cases)} algebras" + (f", first failure {bad[0]}" if bad else ""))


def test_plucker(capsys):
    sym = all(check_plucker(grassmann_alphas(n)) for n in range(2, 8))
    ranks = {n: independence_check(n, trials=5, seed=1) for n in range(3, 7)}
    ind = all(c and c.witness["rank"] == 2 * n - 3 for n, c in ranks.items())
    printed = check_plucker(grassmann_alphas(4), convention="printed")
    ok = sym and ind and not printed and printed.witness == [1, 2, 3, 4]
    detail = f"ranks {[c.witness['rank'] for c in ranks.values()]}, printed sign fails at {printed.witness}"
    announce(capsys, 7, "Plücker relations", ok, detail)


def test_identity_engine(capsys):
    algebras = [("octonions", octonion(ground()).algebra)]
    rng = SplitMix64(31)
    while len(algebras) < 4:
        spec = random_kron_spec(rng, QQ, max_b=2, max_v=2)
        A, _ = build_algebra(spec)
        if spec.V.dim >= 1 and A.dim <= 12:
            algebras.append((f"random dim {A.dim}", A))
    bad = [(name, n) for name, A in algebras for n in IDENTITY_NAMES if not check_identity(A, n)]
    broken = corrupted(split_null_extension(m2(), *cay_bimodule()), 4, 5, {0: 1})
    caught = []
    for n in IDENTITY_NAMES:
        chk = check_identity(broken, n)
        caught.append(not chk and chk.witness is not None)
    ok = not bad and all(caught)
    detail = f"{[n for n, _ in algebras]} x {len(IDENTITY_NAMES)} identities, {len(bad)} failures; corrupted table caught by {sum(caught)}/{len(caught)}"
    announce(capsys, 8, "identity engine", ok, detail)
