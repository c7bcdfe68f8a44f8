"""Exact linear algebra on sparse vectors: echelon spans, kernels, linear maps.

Every subspace is stored in reduced row-echelon form (leftmost pivot, leading
entry 1, eliminated above and below).  RREF is canonical for a row space, so
two subspaces are equal iff their stored bases are equal.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import FieldSpec, axpy, dense, vscale


class Subspace:
    """A subspace of ``field^dim`` held as an RREF basis of sparse rows."""

    def __init__(self, field: FieldSpec, dim: int, vectors: Iterable[dict] = ()) -> None:
        self.field = field
        self.dim = dim
        self._rows: dict = {}
        for v in vectors:
            self._insert(v)
            if len(self._rows) == dim:
                break

    @classmethod
    def full(cls, field: FieldSpec, dim: int) -> "Subspace":
        return cls(field, dim, ({i: 1} for i in range(dim)))

    @classmethod
    def zero(cls, field: FieldSpec, dim: int) -> "Subspace":
        return cls(field, dim)

    def _insert(self, v: dict) -> bool:
        p = self.field.mod
        v = self.reduce(v)
        if not v:
            return False
        piv = min(v)
        v = vscale(self.field.inv(v[piv]), v, p)
        for row in self._rows.values():
            a = row.get(piv)
            if a:
                axpy(row, -a, v, p)
        self._rows[piv] = v
        return True

    def reduce(self, v: dict) -> dict:
        """Remainder of ``v`` modulo this subspace (zero at every pivot)."""
        p = self.field.mod
        v = dict(v)
        for piv, row in self._rows.items():
            a = v.get(piv)
            if a:
                axpy(v, -a, row, p)
        return v

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list:
        return sorted(self._rows)

    @property
    def basis(self) -> list:
        return [self._rows[k] for k in sorted(self._rows)]

    def complement_indices(self) -> list:
        return [i for i in range(self.dim) if i not in self._rows]

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    __contains__ = contains

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coords(self, v: dict) -> dict:
        """Coordinates of ``v`` in :attr:`basis`; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ValueError("vector does not lie in the subspace")
        return {k: v[piv] for k, piv in enumerate(self.pivots) if v.get(piv)}

    def combine(self, coeffs: dict) -> dict:
        acc: dict = {}
        basis = self.basis
        for k, c in coeffs.items():
            axpy(acc, c, basis[k], self.field.mod)
        return acc

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.dim, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        mine, theirs = self.basis, other.basis
        r = len(mine)
        ker = kernel(self.field, mine + theirs)
        p = self.field.mod
        vecs = []
        for lam in ker:
            acc: dict = {}
            for k, c in lam.items():
                if k < r:
                    axpy(acc, c, mine[k], p)
            vecs.append(acc)
        return Subspace(self.field, self.dim, vecs)

    __and__ = intersect

    def is_direct_sum(self, other: "Subspace") -> bool:
        """True iff ``self + other`` is the whole space with trivial intersection."""
        return self.rank + other.rank == self.dim and (self + other).rank == self.dim

    def _check(self, other: "Subspace") -> None:
        if other.dim != self.dim or other.field != self.field:
            raise ValueError("subspaces live in different ambient spaces")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.field == other.field and self._rows == other._rows

    def __hash__(self):
        return hash((self.dim, tuple(self.pivots)))

    def echelonize(self) -> "Subspace":
        return Subspace(self.field, self.dim, self.basis)

    def dense_basis(self) -> list:
        return [dense(v, self.dim) for v in self.basis]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.rank} in {self.field}^{self.dim})"


def _reduce_tracked(field: FieldSpec, vectors: Sequence[dict]):
    """Gauss-Jordan on ``vectors`` remembering combinations.

    Returns ``(rows, kernel)`` where ``rows`` maps pivot -> (reduced row,
    combination of input indices) and ``kernel`` lists the combinations that
    reduced to zero.
    """
    p = field.mod
    rows: dict = {}
    ker = []
    for k, v in enumerate(vectors):
        img = dict(v)
        comb = {k: 1}
        for piv, (r_img, r_comb) in rows.items():
            a = img.get(piv)
            if a:
                axpy(img, -a, r_img, p)
                axpy(comb, -a, r_comb, p)
        if not img:
            ker.append(comb)
            continue
        piv = min(img)
        s = field.inv(img[piv])
        img, comb = vscale(s, img, p), vscale(s, comb, p)
        for r_img, r_comb in rows.values():
            a = r_img.get(piv)
            if a:
                axpy(r_img, -a, img, p)
                axpy(r_comb, -a, comb, p)
        rows[piv] = (img, comb)
    return rows, ker


def kernel(field: FieldSpec, images: Sequence[dict]) -> list:
    """Basis of ``{lam : sum_k lam[k] * images[k] = 0}`` as sparse dicts over k."""
    return _reduce_tracked(field, images)[1]


def kernel_subspace(field: FieldSpec, images: Sequence[dict], basis: Sequence[dict], dim: int) -> Subspace:
    """The subspace ``{sum lam_k basis[k] : sum lam_k images[k] = 0}``."""
    p = field.mod
    vecs = []
    for lam in kernel(field, images):
        acc: dict = {}
        for k, c in lam.items():
            axpy(acc, c, basis[k], p)
        vecs.append(acc)
    return Subspace(field, dim, vecs)


class LinearMap:
    """A linear map ``field^src -> field^dst`` given by the images of basis vectors."""

    def __init__(self, field: FieldSpec, src: int, dst: int, cols: Sequence[dict]) -> None:
        if len(cols) != src:
            raise ValueError(f"expected {src} images, got {len(cols)}")
        for c in cols:
            if any(not 0 <= k < dst for k in c):
                raise ValueError("image index out of range")
        self.field, self.src, self.dst = field, src, dst
        self.cols = [dict(c) for c in cols]

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "LinearMap":
        return cls(field, n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_matrix(cls, field: FieldSpec, rows: Sequence[Sequence]) -> "LinearMap":
        """Build from a dense matrix acting on column vectors (``rows[r][c]``)."""
        dst = len(rows)
        src = len(rows[0]) if rows else 0
        cols = [{r: field(rows[r][c]) for r in range(dst) if field(rows[r][c])} for c in range(src)]
        return cls(field, src, dst, cols)

    def __call__(self, v: dict) -> dict:
        p = self.field.mod
        acc: dict = {}
        for i, c in v.items():
            axpy(acc, c, self.cols[i], p)
        return acc

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self o other``."""
        if other.dst != self.src:
            raise ValueError("dimension mismatch in composition")
        return LinearMap(self.field, other.src, self.dst, [self(c) for c in other.cols])

    def rank(self) -> int:
        return Subspace(self.field, self.dst, self.cols).rank

    def is_invertible(self) -> bool:
        return self.src == self.dst and self.rank() == self.src

    def inverse(self) -> "LinearMap":
        if self.src != self.dst:
            raise ValueError("only square maps can be inverted")
        rows, ker = _reduce_tracked(self.field, self.cols)
        if ker:
            raise ValueError("linear map is singular")
        cols = [rows[i][1] for i in range(self.dst)]
        return LinearMap(self.field, self.dst, self.src, cols)

    def matrix(self) -> list:
        return [[self.cols[c].get(r, 0) for c in range(self.src)] for r in range(self.dst)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.src, self.dst, self.cols) == (other.src, other.dst, other.cols)
