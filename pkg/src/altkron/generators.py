"""Seeded random coordinate triples ``(B, V, <,>)`` for property tests and the
acceptance corpus.

``B`` comes from :func:`random_coefficient_ring`.  ``V`` is a quotient of a
free module over ``B/[B,B]B`` (so commutators act as zero), and the form is
drawn from the linear space cut out by bilinearity and the three-vector
relation, then filtered by the quadratic four-vector relation.
"""

from __future__ import annotations

from .algebra import quotient_algebra
from .coordinatized import BimoduleV, CoeffRing, KronSpec, SkewForm, validate_form
from .errors import PreconditionError
from .linalg import LinearMap, Subspace, kernel
from .samples import random_coefficient_ring
from .scalars import GF, QQ, FieldSpec, SplitMix64, axpy

MAX_TRIES = 200


def _free_quotient(rng: SplitMix64, B: CoeffRing, target: int):
    """A random quotient of ``Abar^r`` of dimension ``target``; returns the action maps or ``None``."""
    f = B.field
    if target == 0:
        return [LinearMap(f, 0, 0, []) for _ in range(B.dim)]
    Q = quotient_algebra(B.alg, B.commutator_ideal)
    bar, m = Q.bar, Q.bar.dim
    # rank at least 2 where possible: a cyclic module only carries the zero form
    lo = max(-(-target // m), min(2, target))
    r = rng.randint(lo, lo + 1)
    n = r * m

    def act_bar(a: dict, v: dict) -> dict:
        out: dict = {}
        for s in range(r):
            part = {i - s * m: c for i, c in v.items() if s * m <= i < (s + 1) * m}
            for t, c in bar.mul(a, part).items():
                out[s * m + t] = c
        return out

    rel = Subspace(f, n)
    for _ in range(3 * n):
        if n - rel.rank <= target:
            break
        w: dict = {}
        for _ in range(rng.randint(1, 2)):
            axpy(w, rng.nonzero_scalar(f), {rng.below(n): 1}, f.mod)
        rel = rel + Subspace(f, n, (act_bar({i: 1}, w) for i in range(m)))
    comp = rel.complement_indices()
    if len(comp) != target:
        return None
    pos = {c: k for k, c in enumerate(comp)}

    def project(v: dict) -> dict:
        return {pos[c]: x for c, x in rel.reduce(v).items()}

    return [
        LinearMap(f, target, target, [project(act_bar(Q.proj({i: 1}), {c: 1})) for c in comp])
        for i in range(B.dim)
    ]


def _linear_residual(B: CoeffRing, V: BimoduleV, gram: list) -> dict:
    """Bilinearity and three-vector residuals, concatenated; linear in the gram entries."""
    A, k, p = B.alg, V.dim, B.field.mod
    out: dict = {}
    off = 0

    def put(v: dict) -> None:
        nonlocal off
        for i, c in v.items():
            out[off + i] = c
        off += max(A.dim, k)

    form = SkewForm(B, gram)
    for b in range(A.dim):
        for i in range(k):
            bi = V.act({b: 1}, {i: 1})
            for j in range(k):
                put(axpy(form(bi, {j: 1}), -1, A.mul({b: 1}, gram[i][j]), p))
    for u in range(k):
        for v in range(u + 1, k):
            for w in range(v + 1, k):
                acc = V.act(gram[u][v], {w: 1})
                axpy(acc, 1, V.act(gram[v][w], {u: 1}), p)
                axpy(acc, 1, V.act(gram[w][u], {v: 1}), p)
                put(acc)
    return out


def _gram_from(coeffs: dict, pairs: list, zb: list, k: int, p: int) -> list:
    g = [[{} for _ in range(k)] for _ in range(k)]
    nz = len(zb)
    for idx, c in coeffs.items():
        (i, j), s = pairs[idx // nz], idx % nz
        axpy(g[i][j], c, zb[s], p)
        axpy(g[j][i], -c, zb[s], p)
    return g


def admissible_forms(B: CoeffRing, V: BimoduleV) -> tuple:
    """Basis of the central skew forms satisfying bilinearity and the three-vector relation.

    Returns ``(basis, pairs, center basis)``; each basis element is a sparse
    coefficient vector over ``(pair, center basis element)``.
    """
    k, p = V.dim, B.field.mod
    zb = B.center.basis
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    images = []
    for idx in range(len(pairs) * len(zb)):
        images.append(_linear_residual(B, V, _gram_from({idx: 1}, pairs, zb, k, p)))
    return kernel(B.field, images), pairs, zb


def random_form(rng: SplitMix64, B: CoeffRing, V: BimoduleV, tries: int = 8) -> SkewForm:
    """A random admissible form; falls back to single basis forms and then to zero."""
    k, f = V.dim, B.field
    basis, pairs, zb = admissible_forms(B, V)
    candidates = []
    for _ in range(tries if basis else 0):
        coeffs: dict = {}
        for vec in basis:
            axpy(coeffs, rng.scalar(f), vec, f.mod)
        candidates.append(coeffs)
    candidates += [basis[i] for i in sorted(range(len(basis)), key=lambda _: rng.next64())]
    for coeffs in candidates:
        form = SkewForm(B, _gram_from(coeffs, pairs, zb, k, f.mod))
        if validate_form(KronSpec(B, V, form)).passed:
            return form
    return SkewForm.zero(B, k)


def random_kron_spec(
    seed: int | SplitMix64,
    field: FieldSpec = QQ,
    max_b: int = 3,
    max_v: int = 3,
    v_dim: int | None = None,
    allow_noncommutative: bool = True,
) -> KronSpec:
    """A valid coordinate triple with ``dim B <= max_b`` and ``dim V <= max_v`` (or exactly ``v_dim``)."""
    rng = seed if isinstance(seed, SplitMix64) else SplitMix64(seed)
    k = v_dim if v_dim is not None else rng.below(max_v + 1)
    for tries in range(MAX_TRIES):
        B = CoeffRing(random_coefficient_ring(rng, field, max_b, allow_noncommutative))
        action = _free_quotient(rng, B, k)
        if action is None:
            continue
        V = BimoduleV(B, k, action)
        form = random_form(rng, B, V)
        # modules that only carry the zero form are common; resample most of them
        if form.is_zero() and k >= 2 and tries < MAX_TRIES // 2 and rng.below(4):
            continue
        return KronSpec(B, V, form)
    raise PreconditionError(f"no module of dimension {k} found after {MAX_TRIES} tries")


def spec_corpus(count: int, seed: int = 0, fields: tuple = (QQ, GF(5)), **kw) -> list:
    """``count`` specs cycling through ``fields``; deterministic in ``seed``."""
    rng = SplitMix64(seed)
    return [random_kron_spec(rng, fields[i % len(fields)], **kw) for i in range(count)]


def perturb_form(spec: KronSpec, seed: int | SplitMix64, tries: int = 50) -> tuple:
    """Add a random central ``delta`` to one skew pair so that the three-vector relation fails.

    Returns ``(spec', (i, j, delta))`` or ``None`` if no tried perturbation breaks it.
    """
    rng = seed if isinstance(seed, SplitMix64) else SplitMix64(seed)
    B, V, p = spec.B, spec.V, spec.field.mod
    k = V.dim
    zb = B.center.basis
    if k < 2:
        return None
    for _ in range(tries):
        i = rng.below(k - 1)
        j = rng.randint(i + 1, k - 1)
        delta: dict = {}
        for z in zb:
            axpy(delta, rng.scalar(spec.field), z, p)
        if not delta:
            continue
        g = [[dict(x) for x in row] for row in spec.form.gram]
        axpy(g[i][j], 1, delta, p)
        axpy(g[j][i], -1, delta, p)
        out = KronSpec(B, V, SkewForm(B, g))
        if not validate_form(out)["three_vector_relation"]:
            return out, (i, j, delta)
    return None


__all__ = ["admissible_forms", "perturb_form", "random_form", "random_kron_spec", "spec_corpus"]
