"""Concrete families: split octonions over a commutative ring, the Cayley-Dickson
doubling of ``M_2(A)`` (commutative and noncommutative variants), split null
extensions, and the three-generated module example.

Doubled algebras use the basis ``E_pq a_i`` at ``(2p+q)m + i`` followed by
``v E_pq abar_i`` at ``4m + (2p+q)mbar + i``, so that the matrix part lines up
with the coordinate algebras of :mod:`altkron.coordinatized`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    AlgebraTable,
    MatrixUnits,
    QuotientRing,
    iso_check,
    quotient_algebra,
)
from .checks import Check
from .coordinatized import (
    BimoduleV,
    CoeffRing,
    KronSpec,
    SkewForm,
    build_algebra,
    mat_mul,
    star,
)
from .errors import PreconditionError
from .linalg import LinearMap, Subspace, kernel
from .scalars import FieldSpec, SplitMix64, axpy, vscale


@dataclass
class Construction:
    """A constructed algebra, its matrix units and (when available) coordinates.

    ``iso`` maps the algebra built from ``spec`` onto ``algebra`` and has
    been certified multiplicative.
    """

    algebra: AlgebraTable
    units: MatrixUnits
    spec: KronSpec | None = None
    iso: LinearMap | None = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = self.algebra.to_json()
        out["embedding"] = self.units.to_json(self.algebra.field)
        out["provenance"] = self.provenance
        return out


def _ring(B) -> CoeffRing:
    return B if isinstance(B, CoeffRing) else CoeffRing(B)


def _m2_units(m: int, one: dict) -> MatrixUnits:
    return MatrixUnits(*({slot * m + i: c for i, c in one.items()} for slot in range(4)))


def _split(v: dict, m: int) -> tuple:
    X: tuple = ({}, {}, {}, {})
    for idx, c in v.items():
        X[idx // m][idx % m] = c
    return X


def _join(X, m: int, offset: int = 0) -> dict:
    out: dict = {}
    for slot, entry in enumerate(X):
        for i, c in entry.items():
            out[offset + slot * m + i] = c
    return out


def _map_entries(f, X) -> tuple:
    return tuple(f(x) for x in X)


def _doubled_table(A: CoeffRing, q: QuotientRing, alpha: dict, section: LinearMap) -> list:
    """Products of ``M_2(A) + v M_2(Abar)``:

        a . b = ab,  a . v b = v(abar* b),  v b . a = v(abar b),  v a . v b = alpha (b1 a1*)

    with ``b1``, ``a1*`` lifted through ``section``.
    """
    m, mb = A.dim, q.bar.dim
    Abar = CoeffRing(q.bar)
    p = A.field.mod
    n = 4 * m + 4 * mb
    alpha_I = (alpha, {}, {}, alpha)

    def proj(X):
        return _map_entries(q.proj, X)

    def lift(X):
        return _map_entries(section, X)

    def product(u: dict, w: dict) -> dict:
        X1 = _split({k: c for k, c in u.items() if k < 4 * m}, m)
        Y1 = _split({k - 4 * m: c for k, c in u.items() if k >= 4 * m}, mb)
        X2 = _split({k: c for k, c in w.items() if k < 4 * m}, m)
        Y2 = _split({k - 4 * m: c for k, c in w.items() if k >= 4 * m}, mb)
        mat = mat_mul(A, X1, X2)
        vv = mat_mul(A, lift(Y2), lift(star(Y1, p)))
        mat = tuple(axpy(a, 1, b, p) for a, b in zip(mat, mat_mul(A, alpha_I, vv)))
        left = mat_mul(Abar, star(proj(X1), p), Y2)
        right = mat_mul(Abar, proj(X2), Y1)
        vpart = tuple(axpy(a, 1, b, p) for a, b in zip(left, right))
        out = _join(mat, m)
        out.update(_join(vpart, mb, 4 * m))
        return out

    return [[product({i: 1}, {j: 1}) for j in range(n)] for i in range(n)]


def _doubled_names(A: AlgebraTable, bar: AlgebraTable) -> list:
    names = [f"E{p + 1}{q + 1}.{b}" for p in range(2) for q in range(2) for b in A.names]
    names += [f"vE{p + 1}{q + 1}.{b}" for p in range(2) for q in range(2) for b in bar.names]
    return names


def _doubling_spec(A: CoeffRing, q: QuotientRing, alpha: dict) -> KronSpec:
    """Coordinates with ``V = Abar^2`` (basis ``(abar_i, 0)`` then ``(0, abar_i)``) and
    ``<(a,b),(c,d)> = -alpha (ad - bc)``."""
    f = A.field
    p = f.mod
    mb = q.bar.dim
    k = 2 * mb
    Bbar = q.bar
    action = []
    for i in range(A.dim):
        bi = q.proj({i: 1})
        cols = []
        for j in range(k):
            blk, r = divmod(j, mb)
            prod = Bbar.mul(bi, {r: 1})
            cols.append({blk * mb + s: c for s, c in prod.items()})
        action.append(LinearMap(f, k, k, cols))
    gram = [[{} for _ in range(k)] for _ in range(k)]
    lifts = [q.section({r: 1}) for r in range(mb)]
    for i in range(mb):
        for j in range(mb):
            prod = A.mul(alpha, A.mul(lifts[i], lifts[j]))
            # <(a,0),(0,d)> = -alpha a d and <(0,b),(c,0)> = alpha b c
            gram[i][mb + j] = vscale(-1, prod, p)
            gram[mb + i][j] = dict(prod)
    return KronSpec(A, BimoduleV(A, k, action), SkewForm(A, gram))


def _phi(A: CoeffRing, q: QuotientRing) -> LinearMap:
    """``id + phi`` with ``(a,b)(1) -> v[[0,0],[-b,a]]`` and ``(a,b)(2) -> v[[b,-a],[0,0]]``."""
    m, mb = A.dim, q.bar.dim
    k = 2 * mb
    n = 4 * m + 4 * mb
    cols = [{i: 1} for i in range(4 * m)]
    base = 4 * m
    for j in range(k):  # v_j(1)
        blk, r = divmod(j, mb)
        cols.append({base + 3 * mb + r: 1} if blk == 0 else {base + 2 * mb + r: -1})
    for j in range(k):  # v_j(2)
        blk, r = divmod(j, mb)
        cols.append({base + 1 * mb + r: -1} if blk == 0 else {base + 0 * mb + r: 1})
    f = A.field
    cols = [{i: f(c) for i, c in col.items()} for col in cols]
    return LinearMap(f, n, n, cols)


def _double(A: CoeffRing, q: QuotientRing, alpha: dict, kind: str, provenance: dict, certify: bool = True) -> Construction:
    table = _doubled_table(A, q, alpha, q.section)
    f = A.field
    m = A.dim
    one4 = _m2_units(m, A.one)
    unit = axpy(dict(one4.e11), 1, one4.e22, f.mod)
    alg = AlgebraTable(f, table, _doubled_names(A.alg, q.bar), unit)
    spec = _doubling_spec(A, q, alpha)
    iso = _phi(A, q)
    if certify:
        built, _ = build_algebra(spec, force=True)
        chk = iso_check(built, alg, iso)
        if not chk.passed:
            raise AssertionError(f"{kind}: coordinate isomorphism failed at {chk.witness}")
    return Construction(alg, one4, spec, iso, provenance)


def cd(A, alpha: dict, certify: bool = True) -> Construction:
    """The doubling ``M_2(A) + v M_2(A)`` of a commutative ring with ``va . vb = alpha (b a*)``."""
    A = _ring(A)
    if not A.is_commutative():
        raise PreconditionError("cd needs a commutative base ring")
    q = quotient_algebra(A.alg, Subspace.zero(A.field, A.dim))
    prov = {"kind": "cd", "alpha": _fmt(A, alpha)}
    return _double(A, q, A.alg.scale(1, alpha), "cd", prov, certify)


def octonion(B, v2=1, certify: bool = True) -> Construction:
    """Split octonions over a commutative ring (``v^2`` defaults to 1)."""
    B = _ring(B)
    if not B.is_commutative():
        raise PreconditionError("octonion needs a commutative base ring")
    f = B.field
    v2 = f(v2)
    if not v2:
        raise PreconditionError("v^2 must be a nonzero scalar")
    con = cd(B, B.alg.scale(v2, B.one), certify)
    con.provenance = {"kind": "octonion", "v2": f.format(v2)}
    return con


def alpha_central(A: CoeffRing, alpha: dict) -> Check:
    """``alpha . A`` lies in the center of ``A``."""
    Z = A.center
    for i in range(A.dim):
        if not Z.contains(A.mul(alpha, {i: 1})):
            return Check("alpha_central", False, A.alg.names[i], "alpha*A not central")
    return Check("alpha_central", True)


def ncd(A, alpha: dict, certify: bool = True, section_seed: int | None = None) -> Construction:
    """``M_2(A) + v M_2(Abar)`` with ``Abar = A/[A,A]A`` and ``alpha A`` central.

    When ``section_seed`` is given the table is recomputed with a second,
    randomly perturbed lift ``Abar -> A`` and compared; the product must not
    depend on that choice.
    """
    A = _ring(A)
    chk = alpha_central(A, alpha)
    if not chk.passed:
        raise PreconditionError("alpha*A not central")
    I = A.commutator_ideal
    q = quotient_algebra(A.alg, I)
    alpha = A.alg.scale(1, alpha)
    prov = {"kind": "ncd", "alpha": _fmt(A, alpha)}
    con = _double(A, q, alpha, "ncd", prov, certify)
    if section_seed is not None:
        other = _perturbed_section(q, SplitMix64(section_seed))
        if _doubled_table(A, q, alpha, other) != con.algebra.table:
            raise AssertionError("ncd product depends on the chosen lift")
        prov["section_seed"] = section_seed
    return con


def _perturbed_section(q: QuotientRing, rng: SplitMix64) -> LinearMap:
    f = q.bar.field
    ib = q.ideal.basis
    cols = []
    for col in q.section.cols:
        v = dict(col)
        for b in ib:
            axpy(v, rng.scalar(f), b, f.mod)
        cols.append(v)
    return LinearMap(f, q.section.src, q.section.dst, cols)


def m2_ideal(A: AlgebraTable, I: Subspace, extra: int = 0) -> Subspace:
    """``M_2(I)`` inside an algebra whose first ``4 dim A`` coordinates are ``M_2(A)``."""
    m = A.dim
    vecs = [{slot * m + k: c for k, c in b.items()} for slot in range(4) for b in I.basis]
    return Subspace(A.field, 4 * m + extra, vecs)


def _fmt(A: CoeffRing, x: dict) -> list:
    f = A.field
    return [[i, f.format(c)] for i, c in sorted(x.items())]


# split null extensions -------------------------------------------------------------


def split_null_extension(A: AlgebraTable, left: Sequence[LinearMap], right: Sequence[LinearMap]) -> AlgebraTable:
    """``A + V`` with ``(a + v)(b + w) = ab + a.w + v.b`` and ``V^2 = 0``.

    ``left[i]`` is ``v -> b_i . v`` and ``right[i]`` is ``v -> v . b_i``.
    """
    n = A.dim
    if len(left) != n or len(right) != n:
        raise ValueError(f"need {n} left and {n} right action maps")
    k = left[0].src if n else 0
    for M in list(left) + list(right):
        if M.src != k or M.dst != k:
            raise ValueError("action maps must all be square of the same size")
    table = []
    for i in range(n + k):
        row = []
        for j in range(n + k):
            if i < n and j < n:
                row.append(dict(A.table[i][j]))
            elif i < n:
                row.append({n + r: c for r, c in left[i].cols[j - n].items()})
            elif j < n:
                row.append({n + r: c for r, c in right[j].cols[i - n].items()})
            else:
                row.append({})
        table.append(row)
    names = list(A.names) + [f"m{r + 1}" for r in range(k)]
    return AlgebraTable(A.field, table, names, dict(A.unit) if A.unit is not None else None)


def cay_bimodule(field: FieldSpec | None = None) -> tuple:
    """The two-dimensional Cayley bimodule over ``M_2`` (basis ``e11, e12, e21, e22``):
    ``e_ij . m_k = delta_ik m_j`` and ``m . a = a* . m``."""
    from .scalars import QQ

    f = field or QQ
    left = []
    for idx in range(4):
        i, j = divmod(idx, 2)
        cols = [{j: 1} if k == i else {} for k in range(2)]
        left.append(LinearMap(f, 2, 2, cols))
    adj = {0: (1, 3), 1: (-1, 1), 2: (-1, 2), 3: (1, 0)}  # e_pq* = c e_rs
    right = []
    for idx in range(4):
        c, t = adj[idx]
        right.append(LinearMap(f, 2, 2, [vscale(f(c), col, f.mod) for col in left[t].cols]))
    return left, right


def reg_bimodule(A: AlgebraTable) -> tuple:
    """``A`` acting on itself by left and right multiplication."""
    n = A.dim
    left = [LinearMap(A.field, n, n, [A.table[i][j] for j in range(n)]) for i in range(n)]
    right = [LinearMap(A.field, n, n, [A.table[j][i] for j in range(n)]) for i in range(n)]
    return left, right


# the three-generated module ----------------------------------------------------------


def three_generator_module(B, a: dict, b: dict, c: dict) -> KronSpec:
    """``V = B^3 / B(a,b,c)`` with ``<e1,e2> = c``, ``<e2,e3> = a``, ``<e3,e1> = b``."""
    B = _ring(B)
    if not B.is_commutative():
        raise PreconditionError("three_generator_module needs a commutative ring")
    R = B.alg
    f = R.field
    p = f.mod
    m = R.dim
    gen = (a, b, c)
    rel = Subspace(f, 3 * m, (_triple([R.mul({i: 1}, g) for g in gen], m) for i in range(m)))
    comp = rel.complement_indices()
    pos = {col: r for r, col in enumerate(comp)}
    k = len(comp)

    def project(v: dict) -> dict:
        return {pos[col]: x for col, x in rel.reduce(v).items()}

    def act(i: int, col: int) -> dict:
        s, r = divmod(col, m)
        return {s * m + t: x for t, x in R.mul({i: 1}, {r: 1}).items()}

    action = [LinearMap(f, k, k, [project(act(i, col)) for col in comp]) for i in range(m)]
    base = {(0, 1): c, (1, 2): a, (2, 0): b}

    def pair(s: int, t: int) -> dict:
        if (s, t) in base:
            return base[(s, t)]
        if (t, s) in base:
            return vscale(-1, base[(t, s)], p)
        return {}

    def form3(u: dict, w: dict) -> dict:
        acc: dict = {}
        for iu, cu in u.items():
            s, r = divmod(iu, m)
            for iw, cw in w.items():
                t, r2 = divmod(iw, m)
                e = pair(s, t)
                if e:
                    axpy(acc, cu * cw, R.mul(R.mul({r: 1}, {r2: 1}), e), p)
        return acc

    for rv in rel.basis:
        for j in range(3 * m):
            if form3(rv, {j: 1}):
                raise AssertionError("form does not vanish on the relation submodule")
    gram = [[form3({ci: 1}, {cj: 1}) for cj in comp] for ci in comp]
    return KronSpec(B, BimoduleV(B, k, action), SkewForm(B, gram))


def _triple(parts, m: int) -> dict:
    out: dict = {}
    for s, v in enumerate(parts):
        for t, x in v.items():
            out[s * m + t] = x
    return out


# recognising octonions -------------------------------------------------------------------


@dataclass
class Verdict:
    is_octonion: bool | None
    witness: tuple | None = None
    reason: str = ""

    def to_json(self, field: FieldSpec | None = None) -> dict:
        out: dict = {"is_octonion": "unknown" if self.is_octonion is None else self.is_octonion, "reason": self.reason}
        if self.witness is not None:
            fmt = field.format if field else str
            out["witness"] = [[[i, fmt(c)] for i, c in sorted(w.items())] for w in self.witness]
        return out


EXHAUSTIVE_LIMIT = 200_000


def _solve_unit(spec: KronSpec, x: dict) -> dict | None:
    """Some ``y`` with ``<x, y> = 1``, or ``None``; the map ``y -> <x,y>`` is linear."""
    k = spec.V.dim
    one = spec.B.one
    images = [spec.form(x, {j: 1}) for j in range(k)]
    # solve sum y_j images[j] = one via a kernel of [images | -one]
    f = spec.field
    ker = kernel(f, images + [vscale(-1, one, f.mod)])
    for lam in ker:
        t = lam.get(k)
        if t:
            inv = f.inv(t)
            return {j: f.norm(c * inv) for j, c in lam.items() if j < k and f.norm(c * inv)}
    return None


def octonion_criterion(spec: KronSpec, witness: tuple | None = None) -> Verdict:
    """Decide (or semi-decide) whether some pair has ``<x, y> = 1``.

    Witness verification is exact.  Refutation uses that every value of the
    form is a field combination of the gram entries, and that a unit value
    forces ``B`` to be commutative.  Over a finite field the search runs over
    ``x`` only, solving linearly for ``y``.  Over the rationals only basis
    vectors ``x`` are tried; failure there yields ``unknown``.
    """
    B, V = spec.B, spec.V
    f = spec.field
    if witness is not None:
        x, y = witness
        ok = spec.form(x, y) == B.one
        return Verdict(ok, (x, y) if ok else None, "witness checked" if ok else "witness does not give 1")
    if V.dim == 0 or spec.form.is_zero():
        return Verdict(False, None, "form has no unit value")
    if not B.is_commutative():
        return Verdict(False, None, "a unit value forces a commutative coefficient ring")
    entries = Subspace(f, B.dim, (g for row in spec.form.gram for g in row))
    if not entries.contains(B.one):
        return Verdict(False, None, "1 is not in the span of the gram entries")
    k = V.dim
    for i in range(k):
        y = _solve_unit(spec, {i: 1})
        if y is not None:
            return Verdict(True, ({i: 1}, y), "basis vector pairs with a solvable partner")
    if f.is_finite and f.p**k <= EXHAUSTIVE_LIMIT:
        for coeffs in itertools.product(range(f.p), repeat=k):
            x = {i: c for i, c in enumerate(coeffs) if c}
            if not x:
                continue
            y = _solve_unit(spec, x)
            if y is not None:
                return Verdict(True, (x, y), "exhaustive search")
        return Verdict(False, None, "exhaustive search found no pair")
    return Verdict(None, None, "no witness among basis vectors")


__all__ = [
    "Construction",
    "Verdict",
    "alpha_central",
    "cay_bimodule",
    "cd",
    "m2_ideal",
    "ncd",
    "octonion",
    "octonion_criterion",
    "reg_bimodule",
    "split_null_extension",
    "three_generator_module",
]
