"""Recover coordinates ``(B, V, <,>)`` from a unital alternative algebra that
contains 2x2 matrix units, check the structural facts that make this
possible, rebuild the coordinate algebra and certify an isomorphism.

Pipeline: :func:`decompose` -> :func:`extract_za` -> :func:`verify_tensor`
-> :func:`split_cayley_part` -> :func:`extract_form` -> rebuild ->
:func:`iso_check`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import (
    AlgebraTable,
    MatrixUnits,
    center,
    centralizer,
    check_alternative,
    full_space,
    iso_check,
    verify_matrix_units,
)
from .checks import Check, Report
from .coordinatized import BimoduleV, CoeffRing, KronSpec, SkewForm, build_algebra, validate_form
from .errors import PreconditionError
from .linalg import LinearMap, Subspace, kernel_subspace
from .scalars import axpy


class CoordinatizationError(PreconditionError):
    """A pipeline stage failed; ``partial`` holds whatever was computed before."""

    def __init__(self, stage: str, message: str, partial: "CoordinatizationResult | None" = None):
        self.stage = stage
        self.partial = partial
        super().__init__(f"{stage}: {message}")


@dataclass
class Grading:
    A_a: Subspace
    A_c: Subspace


@dataclass
class CoordinatizationResult:
    grading: Grading | None = None
    Z_a: Subspace | None = None
    ring: CoeffRing | None = None
    reg_basis: list = field(default_factory=list)
    V1: Subspace | None = None
    V2: Subspace | None = None
    pi12: LinearMap | None = None
    pi21: LinearMap | None = None
    v_basis: list = field(default_factory=list)
    form: SkewForm | None = None
    spec: KronSpec | None = None
    built: AlgebraTable | None = None
    iso: LinearMap | None = None
    report: Report = field(default_factory=Report)

    @property
    def passed(self) -> bool:
        return self.report.passed

    @property
    def dims(self) -> dict:
        return {
            "A": self.grading.A_a.dim if self.grading else None,
            "A_a": self.grading.A_a.rank if self.grading else None,
            "A_c": self.grading.A_c.rank if self.grading else None,
            "Z_a": self.Z_a.rank if self.Z_a is not None else None,
            "V": len(self.v_basis) if self.V1 is not None else None,
        }


def _first(it):
    return next(it, None)


# stage 1 -------------------------------------------------------------------------


def decompose(A: AlgebraTable, E: MatrixUnits, report: Report | None = None) -> Grading:
    """``A_c`` is the span of ``(A, H, H)``; ``A_a`` solves ``(x, H, H) = 0``."""
    H = E.span(A)
    full = full_space(A)
    A_c = Subspace(A.field, A.dim, (A.assoc({i: 1}, h, g) for i in range(A.dim) for h in H.basis for g in H.basis))
    n = A.dim
    hb = H.basis
    images = []
    for i in range(n):
        img: dict = {}
        for r, h in enumerate(hb):
            for s, g in enumerate(hb):
                off = (r * len(hb) + s) * n
                for k, c in A.assoc({i: 1}, h, g).items():
                    img[off + k] = c
        images.append(img)
    A_a = kernel_subspace(A.field, images, full.basis, n)
    if not A_a.is_direct_sum(A_c):
        raise CoordinatizationError(
            "decompose",
            f"A_a (dim {A_a.rank}) and A_c (dim {A_c.rank}) do not form a direct sum of A (dim {n})",
        )
    gr = Grading(A_a, A_c)
    if report is not None:
        report.extend(grading_checks(A, gr))
    return gr


def grading_checks(A: AlgebraTable, gr: Grading) -> Report:
    rep = Report()
    a, c = gr.A_a.basis, gr.A_c.basis
    bad = _first(((i, j) for i, x in enumerate(a) for j, y in enumerate(a) if not gr.A_a.contains(A.mul(x, y))))
    rep.add(Check("grading:even_even", bad is None, bad))
    bad = _first(
        ((i, j) for i, x in enumerate(a) for j, y in enumerate(c) if not (gr.A_c.contains(A.mul(x, y)) and gr.A_c.contains(A.mul(y, x))))
    )
    rep.add(Check("grading:even_odd", bad is None, bad))
    bad = _first(((i, j) for i, x in enumerate(c) for j, y in enumerate(c) if not gr.A_a.contains(A.mul(x, y))))
    rep.add(Check("grading:odd_odd", bad is None, bad))
    bad = None
    for i, x in enumerate(a):
        for j, y in enumerate(a):
            for k, z in enumerate(a):
                if A.assoc(x, y, z):
                    bad = (i, j, k)
                    break
            if bad:
                break
        if bad:
            break
    rep.add(Check("even_part_associative", bad is None, bad))
    return rep


# stage 2 -------------------------------------------------------------------------


def extract_za(A: AlgebraTable, gr: Grading, E: MatrixUnits, report: Report | None = None) -> Subspace:
    """Centralizer of the matrix units inside ``A_a``, with its structural checks."""
    Z = centralizer(A, E.span(A), gr.A_a)
    rep = report if report is not None else Report()
    zb, cb = Z.basis, gr.A_c.basis
    bad = _first(((i, j) for i, z in enumerate(zb) for j, m in enumerate(cb) if A.comm(z, m)))
    rep.add(Check("coefficients_commute_with_odd", bad is None, bad))
    T = A.associator_tensor()
    n = A.dim
    bad = None
    for i, z in enumerate(zb):
        for j in range(n):
            for k in range(n):
                acc: dict = {}
                for r, c in z.items():
                    axpy(acc, c, T[r][j][k], A.field.mod)
                if acc:
                    bad = (i, A.names[j], A.names[k])
                    break
            if bad:
                break
        if bad:
            break
    rep.add(Check("coefficients_in_nucleus", bad is None, bad))
    bad = _first(((i, j) for i, x in enumerate(zb) for j, y in enumerate(zb) if not Z.contains(A.mul(x, y))))
    rep.add(Check("coefficients_closed", bad is None, bad))
    comms = [A.comm(x, y) for x in zb for y in zb]
    bad = _first(((i, j) for i, w in enumerate(comms) for j, m in enumerate(cb) if A.mul(w, m) or A.mul(m, w)))
    rep.add(Check("coefficient_commutators_kill_odd", bad is None, bad))
    if report is None and not rep.passed:
        raise CoordinatizationError("extract_za", f"{rep.failures[0].name} fails at {rep.failures[0].witness}")
    return Z


# stage 3 -------------------------------------------------------------------------


def verify_tensor(A: AlgebraTable, gr: Grading, Z: Subspace, E: MatrixUnits, report: Report | None = None) -> tuple:
    """``{z_i E_pq}`` must be a basis of ``A_a``; returns ``(CoeffRing on Z_a, that basis)``.

    The basis is ordered ``E_pq`` major, ``z_i`` minor, matching the coordinate algebras.
    """
    zb = Z.basis
    reg = [A.mul(z, E.get(p, q)) for p in range(2) for q in range(2) for z in zb]
    S = Subspace(A.field, A.dim, reg)
    ok = S.rank == len(reg) == gr.A_a.rank and gr.A_a.contains_subspace(S)
    chk = Check("even_part_tensor_basis", ok, None if ok else {"rank": S.rank, "expected": gr.A_a.rank})
    if report is not None:
        report.add(chk)
    if not ok:
        raise CoordinatizationError("verify_tensor", f"z_i E_pq span rank {S.rank}, A_a has dim {gr.A_a.rank}")
    names = [f"z{i}" for i in range(len(zb))]
    try:
        ring = CoeffRing(A.subalgebra(Z, names))
    except PreconditionError as exc:
        raise CoordinatizationError("verify_tensor", f"Z_a is not a unital associative algebra ({exc})") from exc
    return ring, reg


# stage 4 -------------------------------------------------------------------------


def _left_mult(A: AlgebraTable, a: dict, S: Subspace) -> list:
    return [A.mul(a, v) for v in S.basis]


def split_cayley_part(A: AlgebraTable, gr: Grading, E: MatrixUnits, report: Report | None = None) -> tuple:
    """``V1 = {v in A_c : E11 v = v}``, ``V2 = {v in A_c : E22 v = v}`` and the maps ``E12.``, ``E21.``."""
    f, p = A.field, A.field.mod
    cb = gr.A_c.basis

    def fixed(e):
        images = [axpy(A.mul(e, v), -1, v, p) for v in cb]
        return kernel_subspace(f, images, cb, A.dim)

    V1, V2 = fixed(E.e11), fixed(E.e22)
    ok_sum = V1.rank + V2.rank == gr.A_c.rank and (V1 + V2) == gr.A_c
    chk_sum = Check("split:Ac=V1+V2", ok_sum, None if ok_sum else (V1.rank, V2.rank, gr.A_c.rank))
    v1, v2 = V1.basis, V2.basis
    bad = _first((i for i, v in enumerate(v1) if A.mul(E.e21, A.mul(E.e12, v)) != v or not V2.contains(A.mul(E.e12, v))))
    chk12 = Check("split:pi21.pi12=id", bad is None, bad)
    bad = _first((i for i, v in enumerate(v2) if A.mul(E.e12, A.mul(E.e21, v)) != v or not V1.contains(A.mul(E.e21, v))))
    chk21 = Check("split:pi12.pi21=id", bad is None, bad)
    if report is not None:
        report.add(chk_sum)
        report.add(chk12)
        report.add(chk21)
    if not (chk_sum and chk12 and chk21):
        bad = next(c for c in (chk_sum, chk12, chk21) if not c)
        raise CoordinatizationError("split_cayley_part", f"{bad.name} fails ({bad.witness})")
    pi12 = LinearMap(f, len(v1), len(v2), [V2.coords(A.mul(E.e12, v)) for v in v1])
    pi21 = LinearMap(f, len(v2), len(v1), [V1.coords(A.mul(E.e21, v)) for v in v2])
    return V1, V2, pi12, pi21


# stage 5 -------------------------------------------------------------------------


def extract_form(
    A: AlgebraTable, V1: Subspace, E: MatrixUnits, Z: Subspace, ring: CoeffRing, report: Report | None = None
) -> tuple:
    """``<u, v> = (E12 u) v - u (E12 v)`` on the basis of ``V1``, in ``Z_a`` coordinates.

    Returns ``(SkewForm, BimoduleV)``; the module structure is ``z . v`` in ``A``.
    """
    rep = report if report is not None else Report()
    f, p = A.field, A.field.mod
    vb = V1.basis
    k = len(vb)
    two = [A.mul(E.e12, v) for v in vb]
    raw = [[axpy(A.mul(two[i], vb[j]), -1, A.mul(vb[i], two[j]), p) for j in range(k)] for i in range(k)]
    bad = _first(((i, j) for i in range(k) for j in range(k) if not Z.contains(raw[i][j])))
    if bad is not None:
        rep.add(Check("form_values_in_coefficients", False, bad))
        raise CoordinatizationError("extract_form", f"<v{bad[0]}, v{bad[1]}> does not lie in Z_a")
    rep.add(Check("form_values_in_coefficients", True))
    gram = [[Z.coords(raw[i][j]) for j in range(k)] for i in range(k)]

    def neg(v):
        return {i: (-c % p if p else -c) for i, c in v.items()}

    bad = None
    for i in range(k):
        for j in range(k):
            z = raw[i][j]
            cases = (
                (A.mul(vb[i], vb[j]), A.mul(z, E.e21)),
                (A.mul(vb[i], two[j]), neg(A.mul(z, E.e11))),
                (A.mul(two[i], vb[j]), A.mul(z, E.e22)),
                (A.mul(two[i], two[j]), neg(A.mul(z, E.e12))),
            )
            for label, (lhs, rhs) in zip(("uv_11", "uv_12", "uv_21", "uv_22"), cases):
                if lhs != rhs:
                    bad = (label, i, j)
                    break
            if bad:
                break
        if bad:
            break
    rep.add(Check("odd_products", bad is None, bad))
    bad = _first(((i, j) for i in range(k) for j in range(k) if axpy(dict(raw[i][j]), 1, raw[j][i], p)))
    rep.add(Check("form_skew", bad is None, bad))
    ZA = center(A) if k else None
    bad = _first(((i, j) for i in range(k) for j in range(k) if not ZA.contains(raw[i][j])))
    rep.add(Check("form_central", bad is None, bad))

    zb = Z.basis
    action = []
    for z in zb:
        cols = []
        for v in vb:
            w = A.mul(z, v)
            if not V1.contains(w):
                raise CoordinatizationError("extract_form", "Z_a does not preserve V(1)")
            cols.append(V1.coords(w))
        action.append(LinearMap(f, k, k, cols))
    return SkewForm(ring, gram), BimoduleV(ring, k, action)


# lemma catalogue ------------------------------------------------------------------------


def _star(E: MatrixUnits, idx: int, p: int) -> dict:
    c, (r, s) = E.star(*divmod(idx, 2))
    return {i: (c * x % p if p else c * x) for i, x in E.get(r, s).items()}


def lemma_checks(A: AlgebraTable, gr: Grading, E: MatrixUnits) -> Report:
    """Basis-tuple checks of the laws tying the matrix units to the two graded parts.

    Letters: ``a, b`` matrix units (``s`` is the involution), ``u, v`` odd,
    ``w`` even, ``r`` any basis element.  The witness is the first failing
    tuple of indices.
    """
    m, assoc, comm = A.mul, A.assoc, A.comm
    H = E.elements()
    S = [_star(E, i, A.field.mod) for i in range(4)]
    odd, even = gr.A_c.basis, gr.A_a.basis
    every = [{i: 1} for i in range(A.dim)]
    # products reused across many unit pairs
    HH = [[m(a, b) for b in H] for a in H]
    HC = [[comm(a, b) for b in H] for a in H]
    WU = [[m(w, u) for u in odd] for w in even]
    UW = [[m(u, w) for w in even] for u in odd]
    UV = [[m(u, v) for v in odd] for u in odd]
    U, O, W, R = range(4), range(len(odd)), range(len(even)), range(A.dim)

    laws = [
        ("units_act_associatively_on_odd", (U, U, O),
         lambda a, b, u: m(HH[a][b], odd[u]) == m(H[b], m(H[a], odd[u]))
         and m(odd[u], HH[a][b]) == m(m(odd[u], H[b]), H[a])),
        ("unit_passes_through_odd", (U, O, R),
         lambda a, u, r: m(H[a], m(odd[u], every[r])) == m(odd[u], m(S[a], every[r]))),
        ("unit_moves_across_odd_product", (U, O, O),
         lambda a, u, v: m(H[a], UV[u][v]) == m(odd[u], m(odd[v], H[a]))
         and m(UV[u][v], H[a]) == m(m(H[a], odd[u]), odd[v])),
        ("odd_associator_is_commutator", (O, O, U),
         lambda u, v, a: assoc(odd[u], odd[v], H[a]) == comm(UV[u][v], H[a])),
        ("odd_product_twisted_by_units", (O, O, U),
         lambda u, v, a: m(UV[u][v], H[a]) == m(m(H[a], odd[u]), odd[v])
         and m(H[a], UV[u][v]) == m(odd[u], m(odd[v], H[a]))),
        ("unit_through_even_odd_right", (W, O, U),
         lambda w, u, a: m(WU[w][u], H[a]) == m(m(even[w], S[a]), odd[u])),
        ("unit_through_odd_even_left", (W, O, U),
         lambda w, u, a: m(H[a], UW[u][w]) == m(odd[u], m(S[a], even[w]))),
        ("right_units_reverse", (W, O, U, U),
         lambda w, u, a, b: m(m(WU[w][u], H[a]), H[b]) == m(WU[w][u], HH[b][a])),
        ("left_units_compose", (W, O, U, U),
         lambda w, u, a, b: m(H[b], m(H[a], UW[u][w])) == m(HH[a][b], UW[u][w])),
        ("associator_with_units_right", (W, O, U, U),
         lambda w, u, a, b: assoc(WU[w][u], H[a], H[b]) == m(WU[w][u], HC[b][a])),
        ("associator_with_units_left", (W, O, U, U),
         lambda w, u, a, b: assoc(H[b], H[a], UW[u][w]) == m(HC[b][a], UW[u][w])),
        ("cayley_bimodule_law", (U, O),
         lambda a, u: m(H[a], odd[u]) == m(odd[u], S[a])),
    ]
    rep = Report()
    for name, domains, holds in laws:
        bad = next((t for t in itertools.product(*domains) if not holds(*t)), None)
        rep.add(Check(name, bad is None, bad))
    return rep


# full pipeline -------------------------------------------------------------------------------


def coordinatize(A: AlgebraTable, E: MatrixUnits, lemmas: bool = True) -> CoordinatizationResult:
    """Run every stage; structural failures raise :class:`CoordinatizationError` with the partial result."""
    res = CoordinatizationResult()
    rep = res.report
    if A.unit is None:
        raise CoordinatizationError("input", "algebra has no unit", res)
    mu = verify_matrix_units(A, E)
    rep.add(mu)
    if not mu:
        raise CoordinatizationError(
            "input", f"matrix units fail their relations at {mu.witness} (a split 2x2 matrix subalgebra is required)", res
        )
    alt = check_alternative(A)
    rep.add(alt)
    if not alt:
        raise CoordinatizationError("input", f"algebra is not alternative (witness {alt.witness})", res)
    try:
        res.grading = decompose(A, E, rep)
        res.Z_a = extract_za(A, res.grading, E, rep)
        res.ring, res.reg_basis = verify_tensor(A, res.grading, res.Z_a, E, rep)
        res.V1, res.V2, res.pi12, res.pi21 = split_cayley_part(A, res.grading, E, rep)
        res.v_basis = res.V1.basis
        res.form, module = extract_form(A, res.V1, E, res.Z_a, res.ring, rep)
    except CoordinatizationError as exc:
        exc.partial = res
        raise
    if lemmas:
        rep.extend(lemma_checks(A, res.grading, E))
    res.spec = KronSpec(res.ring, module, res.form)
    vrep = validate_form(res.spec)
    for c in vrep.checks:
        rep.add(Check(f"form:{c.name}", c.passed, c.witness, c.detail))
    from .plucker import family_from_gram, check_plucker

    rep.add(_renamed(check_plucker(family_from_gram(res.ring, res.form.gram)), "plucker"))
    if not vrep.passed:
        raise CoordinatizationError("rebuild", f"recovered form fails {vrep.failures[0].name}", res)
    res.built, _ = build_algebra(res.spec)
    rep.add(Check("rebuild", res.built.dim == A.dim, None if res.built.dim == A.dim else res.built.dim))
    cols = list(res.reg_basis)
    cols += list(res.v_basis)
    cols += [A.mul(E.e12, v) for v in res.v_basis]
    to_A = LinearMap(A.field, A.dim, A.dim, cols)
    if not to_A.is_invertible():
        rep.add(Check("iso", False, "singular"))
        raise CoordinatizationError("iso_check", "generator images are linearly dependent", res)
    res.iso = to_A.inverse()
    rep.add(iso_check(A, res.built, res.iso))
    return res


def _renamed(c: Check, name: str) -> Check:
    return Check(name, c.passed, c.witness, c.detail)


__all__ = [
    "CoordinatizationError",
    "CoordinatizationResult",
    "Grading",
    "coordinatize",
    "decompose",
    "extract_form",
    "extract_za",
    "grading_checks",
    "iso_check",
    "lemma_checks",
    "split_cayley_part",
    "verify_tensor",
]
