"""Algebras ``M_2(B) + V^2`` assembled from a coefficient ring, a module and a skew form.

An element is ``X + (x, y)`` with ``X`` a 2x2 matrix over ``B`` and ``x, y``
in ``V``; ``(x, y)`` stands for ``x`` in the first copy of ``V`` plus ``y`` in
the second.  The product is

    XY = X_a Y_a + [[-<x,t>, -<y,t>], [<x,z>, <y,z>]] + (z,t) X_a + (x,y) Y_a*

where pairs multiply matrices as row vectors through the left ``B``-action
and ``*`` is the symplectic adjoint ``[[a,b],[c,d]]* = [[d,-b],[-c,a]]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    FORMAT_VERSION,
    AlgebraTable,
    MatrixUnits,
    center,
    ideal_closure,
    span,
)
from .checks import Check, Report
from .errors import FormatError, PreconditionError
from .linalg import LinearMap, Subspace
from .scalars import FieldSpec, axpy, sparse_from_json, sparse_to_json


class InvalidForm(PreconditionError):
    """Raised by :func:`build_algebra` when the coordinate data fail validation."""

    def __init__(self, report: Report):
        self.report = report
        bad = report.failures[0]
        super().__init__(f"form validation failed at {bad.name} (witness {bad.witness})")


class CoeffRing:
    """A unital associative algebra used as coefficients, with its center and commutator ideal."""

    def __init__(self, alg: AlgebraTable) -> None:
        if alg.unit is None:
            raise PreconditionError("coefficient ring must have a unit")
        if not alg.is_associative():
            raise PreconditionError("coefficient ring must be associative")
        self.alg = alg
        self._center: Subspace | None = None
        self._comm_ideal: Subspace | None = None

    @property
    def field(self) -> FieldSpec:
        return self.alg.field

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def one(self) -> dict:
        return self.alg.one

    def mul(self, a: dict, b: dict) -> dict:
        return self.alg.mul(a, b)

    @property
    def center(self) -> Subspace:
        if self._center is None:
            self._center = center(self.alg)
        return self._center

    @property
    def commutator_ideal(self) -> Subspace:
        """``[B,B]B``: the ideal generated by all commutators."""
        if self._comm_ideal is None:
            A = self.alg
            comms = [A.comm({i: 1}, {j: 1}) for i in range(A.dim) for j in range(i + 1, A.dim)]
            self._comm_ideal = ideal_closure(A, span(A, comms))
        return self._comm_ideal

    def is_commutative(self) -> bool:
        return self.alg.is_commutative()


class BimoduleV:
    """A left ``B``-module given by one matrix per basis element of ``B``.

    ``action[i]`` is the linear map ``v -> b_i . v``.  The right action is
    taken equal to the left one, which requires commutators of ``B`` to act
    as zero.
    """

    def __init__(self, ring: CoeffRing, dim: int, action: Sequence[LinearMap]) -> None:
        if len(action) != ring.dim:
            raise FormatError(f"expected {ring.dim} action matrices, got {len(action)}")
        for m in action:
            if m.src != dim or m.dst != dim:
                raise FormatError(f"action matrices must be {dim}x{dim}")
        self.ring = ring
        self.dim = dim
        self.action = list(action)

    @classmethod
    def zero(cls, ring: CoeffRing) -> "BimoduleV":
        return cls(ring, 0, [LinearMap(ring.field, 0, 0, []) for _ in range(ring.dim)])

    def act(self, b: dict, v: dict) -> dict:
        p = self.ring.field.mod
        acc: dict = {}
        for i, c in b.items():
            axpy(acc, c, self.action[i](v), p)
        return acc

    def op(self, b: dict) -> LinearMap:
        return LinearMap(self.ring.field, self.dim, self.dim, [self.act(b, {j: 1}) for j in range(self.dim)])

    def validate(self) -> Report:
        rep = Report()
        B = self.ring.alg
        n, k = B.dim, self.dim
        basis = [{j: 1} for j in range(k)]
        unital = all(self.act(B.unit, v) == v for v in basis)
        rep.add(Check("module_unital", unital, None if unital else "unit does not act as identity"))
        hom = None
        for i in range(n):
            for j in range(n):
                for v in basis:
                    if self.act(B.mul({i: 1}, {j: 1}), v) != self.act({i: 1}, self.act({j: 1}, v)):
                        hom = (B.names[i], B.names[j], v)
                        break
                if hom:
                    break
            if hom:
                break
        rep.add(Check("module_action", hom is None, hom))
        ann = None
        for i in range(n):
            for j in range(i + 1, n):
                c = B.comm({i: 1}, {j: 1})
                if any(self.act(c, v) for v in basis):
                    ann = (B.names[i], B.names[j])
                    break
            if ann:
                break
        rep.add(Check("commutators_annihilate", ann is None, ann))
        return rep


class SkewForm:
    """``gram[i][j] = <v_i, v_j>`` as elements of ``B``, extended bilinearly over the field."""

    def __init__(self, ring: CoeffRing, gram: Sequence[Sequence[dict]]) -> None:
        k = len(gram)
        if any(len(row) != k for row in gram):
            raise FormatError("gram matrix must be square")
        self.ring = ring
        self.gram = [[dict(x) for x in row] for row in gram]

    @classmethod
    def zero(cls, ring: CoeffRing, k: int) -> "SkewForm":
        return cls(ring, [[{} for _ in range(k)] for _ in range(k)])

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __call__(self, u: dict, v: dict) -> dict:
        p = self.ring.field.mod
        acc: dict = {}
        g = self.gram
        for i, a in u.items():
            row = g[i]
            for j, b in v.items():
                axpy(acc, a * b, row[j], p)
        return acc

    def is_zero(self) -> bool:
        return not any(x for row in self.gram for x in row)


Mat2 = tuple  # (a, b, c, d) laid out [[a, b], [c, d]], entries are B-elements


def star(M: Mat2, p: int = 0) -> Mat2:
    """Symplectic adjoint ``[[a,b],[c,d]] -> [[d,-b],[-c,a]]``."""
    a, b, c, d = M
    neg = lambda x: {k: (-v % p if p else -v) for k, v in x.items()}  # noqa: E731
    return (dict(d), neg(b), neg(c), dict(a))


def mat_mul(B: CoeffRing, X: Mat2, Y: Mat2) -> Mat2:
    a, b, c, d = X
    e, f, g, h = Y
    m = B.mul
    p = B.field.mod

    def s(u, v):
        return axpy(dict(u), 1, v, p)

    return (s(m(a, e), m(b, g)), s(m(a, f), m(b, h)), s(m(c, e), m(d, g)), s(m(c, f), m(d, h)))


def mat_add(B: CoeffRing, X: Mat2, Y: Mat2) -> Mat2:
    p = B.field.mod
    return tuple(axpy(dict(u), 1, v, p) for u, v in zip(X, Y))


@dataclass
class KronElement:
    X: Mat2
    x: dict
    y: dict


@dataclass
class KronSpec:
    B: CoeffRing
    V: BimoduleV
    form: SkewForm

    def __post_init__(self) -> None:
        if self.V.ring is not self.B and self.V.ring.alg != self.B.alg:
            raise FormatError("module and ring do not match")
        if self.form.dim != self.V.dim:
            raise FormatError(f"form has size {self.form.dim} but the module has dimension {self.V.dim}")

    @property
    def field(self) -> FieldSpec:
        return self.B.field

    @property
    def dim(self) -> int:
        return 4 * self.B.dim + 2 * self.V.dim

    # flat coordinates: E_pq z_i at (2p+q)m + i, v_j(1) at 4m + j, v_j(2) at 4m + k + j

    def flatten(self, E: KronElement) -> dict:
        m, k = self.B.dim, self.V.dim
        out: dict = {}
        for slot, entry in enumerate(E.X):
            for i, c in entry.items():
                out[slot * m + i] = c
        for j, c in E.x.items():
            out[4 * m + j] = c
        for j, c in E.y.items():
            out[4 * m + k + j] = c
        return out

    def unflatten(self, v: dict) -> KronElement:
        m, k = self.B.dim, self.V.dim
        X: tuple = ({}, {}, {}, {})
        x: dict = {}
        y: dict = {}
        for idx, c in v.items():
            if idx < 4 * m:
                X[idx // m][idx % m] = c
            elif idx < 4 * m + k:
                x[idx - 4 * m] = c
            else:
                y[idx - 4 * m - k] = c
        return KronElement(X, x, y)

    def to_json(self) -> dict:
        f = self.field
        return {
            "format": FORMAT_VERSION,
            "B": self.B.alg.to_json(),
            "V": {
                "dim": self.V.dim,
                "action": [[[f.format(x) for x in row] for row in a.matrix()] for a in self.V.action],
            },
            "form": [[sparse_to_json(x, f) for x in row] for row in self.form.gram],
        }

    @classmethod
    def from_json(cls, obj) -> "KronSpec":
        try:
            alg = AlgebraTable.from_json(obj["B"])
            f = alg.field
            k = obj["V"]["dim"]
            if not isinstance(k, int) or k < 0:
                raise FormatError("V.dim must be a non-negative integer")
            mats = obj["V"]["action"]
            if len(mats) != alg.dim:
                raise FormatError(f"expected {alg.dim} action matrices, got {len(mats)}")
            action = []
            for mat in mats:
                if len(mat) != k or any(len(r) != k for r in mat):
                    raise FormatError(f"action matrices must be {k}x{k}")
                rows = [[f.parse(x) if isinstance(x, str) else f(x) for x in r] for r in mat]
                action.append(LinearMap.from_matrix(f, rows) if k else LinearMap(f, 0, 0, []))
            gram_obj = obj["form"]
            if len(gram_obj) != k or any(len(r) != k for r in gram_obj):
                raise FormatError(f"form must be a {k}x{k} matrix")
            gram = [[sparse_from_json(x, f, alg.dim) for x in row] for row in gram_obj]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed coordinate spec: {exc}") from exc
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc)) from exc
        try:
            B = CoeffRing(alg)
        except PreconditionError as exc:
            raise FormatError(str(exc)) from exc
        return cls(B, BimoduleV(B, k, action), SkewForm(B, gram))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def validate_form(spec: KronSpec) -> Report:
    """Module axioms, skewness, centrality, ``B``-bilinearity and the two
    quadratic relations

        <u,v>w + <v,w>u + <w,u>v = 0
        <u,v><w,t> + <v,w><u,t> + <w,u><v,t> = 0

    on all basis tuples of ``V``.
    """
    rep = spec.V.validate()
    B, V, g = spec.B, spec.V, spec.form.gram
    A = B.alg
    p = B.field.mod
    k = V.dim
    idx = range(k)

    bad = next(((i, j) for i in idx for j in idx if axpy(dict(g[i][j]), 1, g[j][i], p) or (i == j and g[i][i])), None)
    rep.add(Check("skew", bad is None, bad))

    Z = B.center
    bad = next(((i, j) for i in idx for j in idx if not Z.contains(g[i][j])), None)
    rep.add(Check("central", bad is None, bad))

    bad = None
    for b in range(A.dim):
        for i in idx:
            bi = V.act({b: 1}, {i: 1})
            for j in idx:
                bj = V.act({b: 1}, {j: 1})
                target = A.mul({b: 1}, g[i][j])
                if spec.form(bi, {j: 1}) != target or spec.form({i: 1}, bj) != target:
                    bad = (A.names[b], i, j)
                    break
            if bad:
                break
        if bad:
            break
    rep.add(Check("bilinear", bad is None, bad))

    bad = None
    for u in idx:
        for v in idx:
            for w in idx:
                acc = V.act(g[u][v], {w: 1})
                axpy(acc, 1, V.act(g[v][w], {u: 1}), p)
                axpy(acc, 1, V.act(g[w][u], {v: 1}), p)
                if acc:
                    bad = (u, v, w)
                    break
            if bad:
                break
        if bad:
            break
    rep.add(Check("three_vector_relation", bad is None, bad))

    bad = None
    for u in idx:
        for v in idx:
            for w in idx:
                for t in idx:
                    acc = A.mul(g[u][v], g[w][t])
                    axpy(acc, 1, A.mul(g[v][w], g[u][t]), p)
                    axpy(acc, 1, A.mul(g[w][u], g[v][t]), p)
                    if acc:
                        bad = (u, v, w, t)
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    rep.add(Check("four_vector_relation", bad is None, bad))
    return rep


def _pair_times(spec: KronSpec, x: dict, y: dict, M: Mat2) -> tuple:
    """Row-vector action ``(x, y) [[a,b],[c,d]] = (a.x + c.y, b.x + d.y)``."""
    a, b, c, d = M
    act = spec.V.act
    p = spec.field.mod
    return axpy(act(a, x), 1, act(c, y), p), axpy(act(b, x), 1, act(d, y), p)


def kron_product(spec: KronSpec, X: KronElement, Y: KronElement) -> KronElement:
    B, form = spec.B, spec.form
    p = spec.field.mod
    x, y, z, t = X.x, X.y, Y.x, Y.y
    XY = mat_mul(B, X.X, Y.X)

    def neg(v):
        return {i: (-c % p if p else -c) for i, c in v.items()}

    corr = (neg(form(x, t)), neg(form(y, t)), form(x, z), form(y, z))
    mat = mat_add(B, XY, corr)
    u1, u2 = _pair_times(spec, z, t, X.X)
    w1, w2 = _pair_times(spec, x, y, star(Y.X, p))
    return KronElement(mat, axpy(u1, 1, w1, p), axpy(u2, 1, w2, p))


def basis_names(spec: KronSpec) -> list:
    bn = spec.B.alg.names
    names = [f"E{p + 1}{q + 1}.{b}" for p in range(2) for q in range(2) for b in bn]
    names += [f"v{j}(1)" for j in range(spec.V.dim)]
    names += [f"v{j}(2)" for j in range(spec.V.dim)]
    return names


def canonical_units(spec: KronSpec) -> MatrixUnits:
    one = spec.B.one
    m = spec.B.dim
    return MatrixUnits(*({slot * m + i: c for i, c in one.items()} for slot in range(4)))


def build_algebra(spec: KronSpec, force: bool = False) -> tuple:
    """Structure constants of ``M_2(B) + V^2`` with the canonical matrix units.

    Refuses (``InvalidForm``) when :func:`validate_form` fails unless
    ``force`` is set, which exists for falsification experiments.
    """
    if not force:
        rep = validate_form(spec)
        if not rep.passed:
            raise InvalidForm(rep)
    n = spec.dim
    elems = [spec.unflatten({i: 1}) for i in range(n)]
    table = [[spec.flatten(kron_product(spec, a, b)) for b in elems] for a in elems]
    E = canonical_units(spec)
    unit = axpy(dict(E.e11), 1, E.e22, spec.field.mod)
    return AlgebraTable(spec.field, table, basis_names(spec), unit), E


def load_spec(path: str) -> KronSpec:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return KronSpec.from_json(obj)
