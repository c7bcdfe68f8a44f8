"""Finite-dimensional algebras given by structure constants, and the subspace
machinery (centralizers, nuclei, associator spans, ideals, quotients) built on
exact linear algebra.

Elements are sparse dicts ``{basis index: scalar}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .checks import Check
from .errors import FormatError, PreconditionError
from .linalg import LinearMap, Subspace, kernel_subspace
from .scalars import (
    QQ,
    FieldSpec,
    SplitMix64,
    axpy,
    clean,
    sparse_from_json,
    sparse_to_json,
    vscale,
)

FORMAT_VERSION = 1


class AlgebraTable:
    """An algebra over an exact field: ``table[i][j]`` holds the coordinates of ``b_i b_j``."""

    def __init__(
        self,
        field: FieldSpec,
        table: Sequence[Sequence[dict]],
        basis: Sequence[str] | None = None,
        unit: dict | None = None,
        *,
        validate: bool = True,
    ) -> None:
        dim = len(table)
        if dim < 1:
            raise FormatError("an algebra needs a positive dimension")
        p = field.mod
        rows = []
        for i, row in enumerate(table):
            if len(row) != dim:
                raise FormatError(f"table row {i} has length {len(row)}, expected {dim}")
            out_row = []
            for j, v in enumerate(row):
                for k in v:
                    if not (isinstance(k, int) and 0 <= k < dim):
                        raise FormatError(f"table[{i}][{j}] has index {k!r} out of range")
                out_row.append(clean(v, p))
            rows.append(out_row)
        self.field = field
        self.dim = dim
        self.table = rows
        self.names = list(basis) if basis is not None else [f"b{i}" for i in range(dim)]
        if len(self.names) != dim:
            raise FormatError(f"{len(self.names)} basis names for dimension {dim}")
        self.unit = clean(unit, p) if unit is not None else None
        self._assoc = None
        if validate and self.unit is not None:
            for i in range(dim):
                e = {i: 1}
                if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                    raise FormatError(f"unit axiom fails on basis element {self.names[i]}")

    # arithmetic

    def e(self, i: int) -> dict:
        return {i: 1}

    def mul(self, x: dict, y: dict) -> dict:
        p = self.field.mod
        t = self.table
        acc: dict = {}
        for i, a in x.items():
            ti = t[i]
            for j, b in y.items():
                ab = a * b
                for k, c in ti[j].items():
                    acc[k] = acc.get(k, 0) + ab * c
        return clean(acc, p)

    def add(self, *vs: dict) -> dict:
        acc: dict = {}
        for v in vs:
            axpy(acc, 1, v, self.field.mod)
        return acc

    def sub(self, x: dict, y: dict) -> dict:
        return axpy(dict(x), -1, y, self.field.mod)

    def scale(self, c, x: dict) -> dict:
        return vscale(self.field(c), x, self.field.mod)

    def neg(self, x: dict) -> dict:
        return vscale(-1, x, self.field.mod)

    def assoc(self, x: dict, y: dict, z: dict) -> dict:
        return self.sub(self.mul(self.mul(x, y), z), self.mul(x, self.mul(y, z)))

    def comm(self, x: dict, y: dict) -> dict:
        return self.sub(self.mul(x, y), self.mul(y, x))

    def circ(self, x: dict, y: dict) -> dict:
        return self.add(self.mul(x, y), self.mul(y, x))

    @property
    def one(self) -> dict:
        if self.unit is None:
            raise PreconditionError("algebra has no unit")
        return dict(self.unit)

    def associator_tensor(self) -> list:
        """``T[i][j][k] = (b_i, b_j, b_k)``, computed once and cached."""
        if self._assoc is None:
            n, t, p = self.dim, self.table, self.field.mod
            out = []
            for i in range(n):
                ti = t[i]
                plane = []
                for j in range(n):
                    pij = ti[j]
                    tj = t[j]
                    line = []
                    for k in range(n):
                        acc: dict = {}
                        for m, c in pij.items():
                            for r, d in t[m][k].items():
                                acc[r] = acc.get(r, 0) + c * d
                        for m, c in tj[k].items():
                            for r, d in ti[m].items():
                                acc[r] = acc.get(r, 0) - c * d
                        line.append(clean(acc, p))
                    plane.append(line)
                out.append(plane)
            self._assoc = out
        return self._assoc

    def is_associative(self) -> bool:
        return not any(v for plane in self.associator_tensor() for line in plane for v in line)

    def is_commutative(self) -> bool:
        t = self.table
        return all(t[i][j] == t[j][i] for i in range(self.dim) for j in range(i))

    def random_element(self, rng: SplitMix64) -> dict:
        return clean({i: rng.scalar(self.field) for i in range(self.dim)}, self.field.mod)

    # change of basis / substructures

    def rebase(self, vectors: Sequence[dict], names: Sequence[str] | None = None) -> "AlgebraTable":
        """The same algebra written in the basis ``vectors`` (which must be a basis)."""
        f = self.field
        to_old = LinearMap(f, self.dim, self.dim, vectors)
        to_new = to_old.inverse()
        table = [[to_new(self.mul(u, v)) for v in vectors] for u in vectors]
        unit = to_new(self.unit) if self.unit is not None else None
        return AlgebraTable(f, table, names, unit)

    def subalgebra(self, S: Subspace, names: Sequence[str] | None = None) -> "AlgebraTable":
        """Structure constants of a subalgebra on the RREF basis of ``S``."""
        basis = S.basis
        table = []
        for u in basis:
            row = []
            for v in basis:
                w = self.mul(u, v)
                if not S.contains(w):
                    raise PreconditionError("subspace is not closed under multiplication")
                row.append(S.coords(w))
            table.append(row)
        unit = None
        if self.unit is not None and S.contains(self.unit):
            unit = S.coords(self.unit)
        return AlgebraTable(self.field, table, names, unit)

    # serialization

    def to_json(self) -> dict:
        f = self.field
        out = {
            "format": FORMAT_VERSION,
            "field": f.to_json(),
            "dim": self.dim,
            "basis": list(self.names),
        }
        if self.unit is not None:
            out["unit"] = sparse_to_json(self.unit, f)
        out["table"] = [[sparse_to_json(v, f) for v in row] for row in self.table]
        return out

    @classmethod
    def from_json(cls, obj) -> "AlgebraTable":
        if not isinstance(obj, dict):
            raise FormatError("algebra description must be a JSON object")
        if obj.get("format", FORMAT_VERSION) != FORMAT_VERSION:
            raise FormatError(f"unsupported format version {obj.get('format')!r}")
        try:
            field = FieldSpec.from_json(obj["field"])
            dim = obj["dim"]
            if not isinstance(dim, int) or dim < 1:
                raise FormatError(f"dim must be a positive integer, got {dim!r}")
            raw = obj["table"]
            if not isinstance(raw, list) or len(raw) != dim:
                raise FormatError("table must be a dim x dim array")
            table = []
            for i, row in enumerate(raw):
                if not isinstance(row, list) or len(row) != dim:
                    raise FormatError(f"table row {i} must have {dim} entries")
                table.append([sparse_from_json(v, field, dim) for v in row])
            unit = sparse_from_json(obj["unit"], field, dim) if obj.get("unit") is not None else None
            names = obj.get("basis")
        except KeyError as exc:
            raise FormatError(f"missing key {exc}") from exc
        except (ValueError, TypeError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc)) from exc
        return cls(field, table, names, unit)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraTable):
            return NotImplemented
        return (self.field, self.table, self.unit) == (other.field, other.table, other.unit)

    def __repr__(self) -> str:
        return f"AlgebraTable(dim={self.dim}, field={self.field})"


def algebra_from_products(field: FieldSpec, names: Sequence[str], product, unit: dict | None = None) -> AlgebraTable:
    """Tabulate ``product(i, j) -> sparse dict`` over all basis pairs."""
    n = len(names)
    table = [[product(i, j) for j in range(n)] for i in range(n)]
    return AlgebraTable(field, table, names, unit)


# module-level operations

def mul(A: AlgebraTable, x: dict, y: dict) -> dict:
    _check_elements(A, x, y)
    return A.mul(x, y)


def associator(A: AlgebraTable, x: dict, y: dict, z: dict) -> dict:
    _check_elements(A, x, y, z)
    return A.assoc(x, y, z)


def commutator(A: AlgebraTable, x: dict, y: dict) -> dict:
    _check_elements(A, x, y)
    return A.comm(x, y)


def _check_elements(A: AlgebraTable, *xs: dict) -> None:
    for x in xs:
        if any(not (isinstance(k, int) and 0 <= k < A.dim) for k in x):
            raise ValueError(f"element {x} does not belong to an algebra of dimension {A.dim}")


def check_alternative(A: AlgebraTable) -> Check:
    """Exact alternativity test on basis triples.

    Expanding ``(x, x, y)`` over a basis gives diagonal terms ``(b_i, b_i, y)``
    and symmetrized cross terms ``(b_i, b_j, y) + (b_j, b_i, y)``; the right
    identity is analogous.  Checking those four families on all basis triples
    is therefore sound and complete in every characteristic, including 2.
    The witness is the first failing triple in lexicographic order.
    """
    T = A.associator_tensor()
    p = A.field.mod
    n = A.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i == j and T[i][i][k]:
                    return Check("alternative", False, (i, i, k), "left: (b_i,b_i,b_k) != 0")
                if j == k and T[i][j][j]:
                    return Check("alternative", False, (i, j, j), "right: (b_i,b_j,b_j) != 0")
                if i < j and axpy(dict(T[i][j][k]), 1, T[j][i][k], p):
                    return Check("alternative", False, (i, j, k), "left linearized: (b_i,b_j,b_k)+(b_j,b_i,b_k) != 0")
                if j < k and axpy(dict(T[i][j][k]), 1, T[i][k][j], p):
                    return Check("alternative", False, (i, j, k), "right linearized: (b_i,b_j,b_k)+(b_i,b_k,b_j) != 0")
    return Check("alternative", True)


def check_alternative_random(A: AlgebraTable, trials: int, seed: int) -> Check:
    """The six alternativity expressions (left/right, their linearizations and
    the circle forms) evaluated on seeded random elements."""
    rng = SplitMix64(seed)
    for t in range(trials):
        x, y, z = (A.random_element(rng) for _ in range(3))
        exprs = {
            "(x,x,y)": A.assoc(x, x, y),
            "(x,y,y)": A.assoc(x, y, y),
            "(x,z,y)+(z,x,y)": A.add(A.assoc(x, z, y), A.assoc(z, x, y)),
            "(x,y,z)+(x,z,y)": A.add(A.assoc(x, y, z), A.assoc(x, z, y)),
            "(x o z)y-x(zy)-z(xy)": A.sub(A.mul(A.circ(x, z), y), A.add(A.mul(x, A.mul(z, y)), A.mul(z, A.mul(x, y)))),
            "(xy)z+(xz)y-x(y o z)": A.sub(A.add(A.mul(A.mul(x, y), z), A.mul(A.mul(x, z), y)), A.mul(x, A.circ(y, z))),
        }
        for name, v in exprs.items():
            if v:
                return Check("alternative_random", False, {"trial": t, "expr": name, "seed": seed})
    return Check("alternative_random", True, detail=f"seed={seed}, trials={trials}")


def span(A: AlgebraTable, vectors: Iterable[dict]) -> Subspace:
    return Subspace(A.field, A.dim, vectors)


def full_space(A: AlgebraTable) -> Subspace:
    return Subspace.full(A.field, A.dim)


def centralizer(A: AlgebraTable, S: Subspace, within: Subspace | None = None) -> Subspace:
    """``{x in within : [x, s] = 0 for every basis vector s of S}``."""
    within = within if within is not None else full_space(A)
    n = A.dim
    sb = S.basis
    images = []
    for w in within.basis:
        img: dict = {}
        for si, s in enumerate(sb):
            for k, c in A.comm(w, s).items():
                img[si * n + k] = c
        images.append(img)
    return kernel_subspace(A.field, images, within.basis, n)


def _nucleus_images(A: AlgebraTable) -> list:
    T = A.associator_tensor()
    n = A.dim
    images = []
    for x in range(n):
        img: dict = {}
        for i in range(n):
            for j in range(n):
                base = (i * n + j) * 3 * n
                for k, c in T[x][i][j].items():
                    img[base + k] = c
                for k, c in T[i][x][j].items():
                    img[base + n + k] = c
                for k, c in T[i][j][x].items():
                    img[base + 2 * n + k] = c
        images.append(img)
    return images


def _commutator_images(A: AlgebraTable, offset: int = 0) -> list:
    n = A.dim
    images = []
    for x in range(n):
        img: dict = {}
        for i in range(n):
            for k, c in A.comm({x: 1}, {i: 1}).items():
                img[offset + i * n + k] = c
        images.append(img)
    return images


def nucleus(A: AlgebraTable) -> Subspace:
    n = A.dim
    return kernel_subspace(A.field, _nucleus_images(A), [{i: 1} for i in range(n)], n)


def comm_center(A: AlgebraTable) -> Subspace:
    n = A.dim
    return kernel_subspace(A.field, _commutator_images(A), [{i: 1} for i in range(n)], n)


def center(A: AlgebraTable) -> Subspace:
    """Solves the nucleus and commutation constraints jointly (not via intersection)."""
    n = A.dim
    offset = 3 * n**3
    joint = _nucleus_images(A)
    for img, extra in zip(joint, _commutator_images(A, offset)):
        img.update(extra)
    return kernel_subspace(A.field, joint, [{i: 1} for i in range(n)], n)


def associator_subspace(A: AlgebraTable, S1: Subspace, S2: Subspace, S3: Subspace) -> Subspace:
    vecs = (A.assoc(x, y, z) for x in S1.basis for y in S2.basis for z in S3.basis)
    return Subspace(A.field, A.dim, vecs)


def product_subspace(A: AlgebraTable, S1: Subspace, S2: Subspace) -> Subspace:
    return Subspace(A.field, A.dim, (A.mul(x, y) for x in S1.basis for y in S2.basis))


def ideal_closure(A: AlgebraTable, S: Subspace) -> Subspace:
    """Smallest two-sided ideal containing ``S``: iterate ``S + AS + SA``."""
    current = S
    for _ in range(A.dim + 1):
        vecs = list(current.basis)
        for s in current.basis:
            for i in range(A.dim):
                vecs.append(A.mul({i: 1}, s))
                vecs.append(A.mul(s, {i: 1}))
        nxt = Subspace(A.field, A.dim, vecs)
        if nxt.rank == current.rank:
            return nxt
        current = nxt
    raise RuntimeError("ideal closure failed to stabilize within dim(A) rounds")


def is_ideal(A: AlgebraTable, I: Subspace) -> bool:
    for s in I.basis:
        for i in range(A.dim):
            if not I.contains(A.mul({i: 1}, s)) or not I.contains(A.mul(s, {i: 1})):
                return False
    return True


@dataclass
class QuotientRing:
    """``bar = A / I`` on the complement basis of the pivot columns of ``I``.

    ``proj`` is the canonical projection ``A -> bar``; ``section`` lifts each
    quotient basis vector to the matching standard basis vector of ``A``.
    """

    bar: AlgebraTable
    proj: LinearMap
    section: LinearMap
    ideal: Subspace


def quotient_algebra(A: AlgebraTable, I: Subspace) -> QuotientRing:
    if not is_ideal(A, I):
        raise PreconditionError("quotient requested by a subspace that is not a two-sided ideal")
    comp = I.complement_indices()
    pos = {c: k for k, c in enumerate(comp)}
    f = A.field

    def project(v: dict) -> dict:
        r = I.reduce(v)
        return {pos[c]: x for c, x in r.items()}

    proj = LinearMap(f, A.dim, len(comp), [project({i: 1}) for i in range(A.dim)])
    section = LinearMap(f, len(comp), A.dim, [{c: 1} for c in comp])
    table = [[project(A.mul({a: 1}, {b: 1})) for b in comp] for a in comp]
    unit = project(A.unit) if A.unit is not None else None
    names = [A.names[c] for c in comp]
    return QuotientRing(AlgebraTable(f, table, names, unit), proj, section, I)


@dataclass
class MatrixUnits:
    """Four elements ``E_pq`` of an algebra, expected to satisfy the 2x2 matrix-unit relations."""

    e11: dict
    e12: dict
    e21: dict
    e22: dict

    def grid(self) -> list:
        return [[self.e11, self.e12], [self.e21, self.e22]]

    def get(self, p: int, q: int) -> dict:
        return self.grid()[p][q]

    def elements(self) -> list:
        return [self.e11, self.e12, self.e21, self.e22]

    def star(self, p: int, q: int) -> tuple:
        """Symplectic involution on matrix units: ``(coefficient, (r, s))`` with ``E_pq* = c E_rs``."""
        if p == q:
            return 1, (1 - p, 1 - q)
        return -1, (p, q)

    def span(self, A: AlgebraTable) -> Subspace:
        return span(A, self.elements())

    def to_json(self, field: FieldSpec) -> dict:
        return {
            "format": FORMAT_VERSION,
            "E11": sparse_to_json(self.e11, field),
            "E12": sparse_to_json(self.e12, field),
            "E21": sparse_to_json(self.e21, field),
            "E22": sparse_to_json(self.e22, field),
        }

    @classmethod
    def from_json(cls, obj, field: FieldSpec, dim: int) -> "MatrixUnits":
        if isinstance(obj, dict) and "embedding" in obj and "E11" not in obj:
            obj = obj["embedding"]
        try:
            return cls(*(sparse_from_json(obj[k], field, dim) for k in ("E11", "E12", "E21", "E22")))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed matrix-unit embedding: missing {exc}") from exc
        except ValueError as exc:
            raise FormatError(str(exc)) from exc


def verify_matrix_units(A: AlgebraTable, E: MatrixUnits) -> Check:
    """All 16 relations ``E_pq E_rs = delta_qr E_ps`` and ``E_11 + E_22 = 1``."""
    if A.unit is None:
        raise PreconditionError("algebra has no unit")
    g = E.grid()
    for p in range(2):
        for q in range(2):
            for r in range(2):
                for s in range(2):
                    want = g[p][s] if q == r else {}
                    if A.mul(g[p][q], g[r][s]) != want:
                        return Check("matrix_units", False, ((p + 1, q + 1), (r + 1, s + 1)))
    if A.add(E.e11, E.e22) != A.unit:
        return Check("matrix_units", False, "E11+E22", "E11 + E22 is not the unit")
    return Check("matrix_units", True)


def load_algebra(path: str) -> AlgebraTable:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return AlgebraTable.from_json(obj)


def iso_check(A: AlgebraTable, Bt: AlgebraTable, L: LinearMap) -> Check:
    """Is ``L: A -> Bt`` an algebra isomorphism?  Checks invertibility, unit and all basis products."""
    if L.src != A.dim or L.dst != Bt.dim or A.dim != Bt.dim:
        raise ValueError(f"dimension mismatch: map {L.src}->{L.dst} between algebras of dims {A.dim}, {Bt.dim}")
    if not L.is_invertible():
        return Check("iso", False, "singular", "map is not invertible")
    if A.unit is not None and Bt.unit is not None and L(A.unit) != Bt.unit:
        return Check("iso", False, "unit", "map does not send unit to unit")
    imgs = L.cols
    for i in range(A.dim):
        for j in range(A.dim):
            if L(A.table[i][j]) != Bt.mul(imgs[i], imgs[j]):
                return Check("iso", False, (A.names[i], A.names[j]), "product not preserved")
    return Check("iso", True)


__all__ = [
    "QQ",
    "AlgebraTable",
    "MatrixUnits",
    "QuotientRing",
    "algebra_from_products",
    "associator",
    "associator_subspace",
    "center",
    "centralizer",
    "check_alternative",
    "check_alternative_random",
    "comm_center",
    "commutator",
    "ideal_closure",
    "is_ideal",
    "iso_check",
    "load_algebra",
    "mul",
    "nucleus",
    "product_subspace",
    "quotient_algebra",
    "span",
    "verify_matrix_units",
]
