"""Plücker coordinates of the Grassmannian G(2, n) and a checker for the
quadratic relations among them.

Convention: a family ``u_ij`` (``i < j``, 1-based, ``u_ji = -u_ij``) satisfies
the relations when, for all ``i < j < k < l``,

    u_ij u_kl - u_ik u_jl + u_il u_jk = 0.

This is the identity satisfied by the 2x2 minors of a 2 x n matrix, and it is
the four-vector skew-form relation ``<u,v><w,t> + <v,w><u,t> + <w,u><v,t> = 0``
rewritten with antisymmetry.  The variant with middle term ``+u_ik u_lk`` is
kept as ``convention="printed"`` only to reproduce the fact that it fails on
the minors.
"""

from __future__ import annotations

from itertools import combinations

from .checks import Check
from .errors import FormatError, PreconditionError
from .linalg import Subspace
from .poly import MultiPoly
from .scalars import QQ, FieldSpec, SplitMix64, axpy

CONVENTIONS = ("standard", "printed")


class ScalarRing:
    """Field elements as a commutative ring."""

    def __init__(self, field: FieldSpec = QQ) -> None:
        self.field = field

    zero = 0

    def add(self, a, b):
        return self.field.norm(a + b)

    def sub(self, a, b):
        return self.field.norm(a - b)

    def mul(self, a, b):
        return self.field.norm(a * b)

    def is_zero(self, a) -> bool:
        return not a

    def to_json(self, a):
        return self.field.format(a)


class PolyRing:
    """Polynomials in a fixed variable list."""

    def __init__(self, variables, field: FieldSpec = QQ) -> None:
        self.variables = tuple(variables)
        self.field = field
        self.zero = MultiPoly(self.variables, {}, field)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def to_json(self, a):
        return a.to_json()


class AlgebraRing:
    """Sparse elements of an associative algebra (for instance a coefficient ring)."""

    def __init__(self, alg) -> None:
        self.alg = alg
        self.zero: dict = {}

    def add(self, a, b):
        return axpy(dict(a), 1, b, self.alg.field.mod)

    def sub(self, a, b):
        return axpy(dict(a), -1, b, self.alg.field.mod)

    def mul(self, a, b):
        return self.alg.mul(a, b)

    def is_zero(self, a) -> bool:
        return not a

    def to_json(self, a):
        return [[i, self.alg.field.format(c)] for i, c in sorted(a.items())]


class PluckerFamily:
    """Entries ``u_ij`` for ``1 <= i < j <= n`` in a commutative ring; the rest follow by antisymmetry."""

    def __init__(self, n: int, entries: dict, ring) -> None:
        if n < 2:
            raise PreconditionError(f"a Plücker family needs n >= 2, got {n}")
        for (i, j) in entries:
            if not 1 <= i < j <= n:
                raise FormatError(f"entry index ({i},{j}) must satisfy 1 <= i < j <= {n}")
        self.n = n
        self.ring = ring
        self.entries = {(i, j): entries.get((i, j), ring.zero) for i in range(1, n + 1) for j in range(i + 1, n + 1)}

    def u(self, i: int, j: int):
        if i == j:
            return self.ring.zero
        if i < j:
            return self.entries[(i, j)]
        return self.ring.sub(self.ring.zero, self.entries[(j, i)])

    def with_entry(self, i: int, j: int, value) -> "PluckerFamily":
        e = dict(self.entries)
        e[(i, j)] = value
        return PluckerFamily(self.n, e, self.ring)

    def to_json(self) -> dict:
        out: dict = {"format": 1, "n": self.n}
        if isinstance(self.ring, PolyRing):
            out["variables"] = list(self.ring.variables)
        out["field"] = self.ring.field.to_json() if hasattr(self.ring, "field") else self.ring.alg.field.to_json()
        out["entries"] = {f"{i},{j}": self.ring.to_json(v) for (i, j), v in self.entries.items()}
        return out

    @classmethod
    def from_json(cls, obj) -> "PluckerFamily":
        if not isinstance(obj, dict) or not isinstance(obj.get("n"), int):
            raise FormatError("family JSON needs an integer 'n'")
        field = FieldSpec.from_json(obj["field"]) if "field" in obj else QQ
        variables = obj.get("variables")
        ring = PolyRing(variables, field) if variables is not None else ScalarRing(field)
        raw = obj.get("entries", {})
        if not isinstance(raw, dict):
            raise FormatError("'entries' must be an object keyed by \"i,j\"")
        entries = {}
        for key, val in raw.items():
            try:
                i, j = (int(s) for s in key.split(","))
            except ValueError as exc:
                raise FormatError(f"bad entry key {key!r}") from exc
            try:
                if variables is not None:
                    v = MultiPoly.from_json(variables, val, field) if isinstance(val, list) else MultiPoly.constant(variables, field.parse(str(val)), field)
                else:
                    v = field.parse(str(val))
            except ValueError as exc:
                raise FormatError(f"bad value for entry {key}: {exc}") from exc
            entries[(i, j)] = v
        return cls(obj["n"], entries, ring)


def grassmann_alphas(n: int, field: FieldSpec = QQ) -> PluckerFamily:
    """``alpha_ij = x_i y_j - x_j y_i`` over polynomials in ``x1..xn, y1..yn``."""
    if n < 2:
        raise PreconditionError(f"n must be at least 2, got {n}")
    names = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    x = [MultiPoly.var(names, f"x{i}", field) for i in range(1, n + 1)]
    y = [MultiPoly.var(names, f"y{i}", field) for i in range(1, n + 1)]
    entries = {(i + 1, j + 1): x[i] * y[j] - x[j] * y[i] for i in range(n) for j in range(i + 1, n)}
    return PluckerFamily(n, entries, PolyRing(names, field))


def difference_family(a: list, ring=None) -> PluckerFamily:
    """``u_ij = a_i - a_j``."""
    ring = ring or ScalarRing()
    n = len(a)
    entries = {(i + 1, j + 1): ring.sub(a[i], a[j]) for i in range(n) for j in range(i + 1, n)}
    return PluckerFamily(n, entries, ring)


def family_from_gram(ring, gram) -> PluckerFamily | None:
    """The family ``u_ij = <v_i, v_j>`` of a skew form over a coefficient ring, or ``None`` when ``n < 2``."""
    k = len(gram)
    R = AlgebraRing(ring.alg)
    entries = {(i + 1, j + 1): dict(gram[i][j]) for i in range(k) for j in range(i + 1, k)}
    return PluckerFamily(max(k, 2), entries, R) if k >= 2 else PluckerFamily(2, {}, R)


def plucker_relation(fam: PluckerFamily, i: int, j: int, k: int, l: int, convention: str = "standard"):
    R, u = fam.ring, fam.u
    if convention == "standard":
        t = R.sub(R.mul(u(i, j), u(k, l)), R.mul(u(i, k), u(j, l)))
    elif convention == "printed":
        t = R.add(R.mul(u(i, j), u(k, l)), R.mul(u(i, k), u(l, k)))
    else:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    return R.add(t, R.mul(u(i, l), u(j, k)))


def check_plucker(fam: PluckerFamily | None, convention: str = "standard") -> Check:
    """Every quadruple ``i < j < k < l``; the witness is the first failing one."""
    if fam is None:
        return Check("plucker", True)
    for q in combinations(range(1, fam.n + 1), 4):
        if not fam.ring.is_zero(plucker_relation(fam, *q, convention=convention)):
            return Check("plucker", False, list(q), f"{convention} relation fails")
    return Check("plucker", True)


def check_first_row_relation(fam: PluckerFamily) -> Check:
    """``u_12 u_ij + u_1i u_j2 + u_1j u_2i = 0`` for ``2 < i < j``."""
    R, u = fam.ring, fam.u
    for i in range(3, fam.n + 1):
        for j in range(i + 1, fam.n + 1):
            t = R.add(R.add(R.mul(u(1, 2), u(i, j)), R.mul(u(1, i), u(j, 2))), R.mul(u(1, j), u(2, i)))
            if not R.is_zero(t):
                return Check("first_row_relation", False, [i, j])
    return Check("first_row_relation", True)


def _rank(field: FieldSpec, rows: list) -> int:
    return Subspace(field, len(rows[0]) if rows else 0, ({c: v for c, v in enumerate(r) if v} for r in rows)).rank


def independence_check(n: int, trials: int = 5, seed: int = 0) -> Check:
    """Jacobian rank of ``alpha_12..alpha_1n, alpha_23..alpha_2n`` at random rational points.

    Rank ``2n - 3`` at one point certifies algebraic independence; the point
    is recorded.  Never refutes: a deficient rank everywhere is inconclusive.
    """
    if n < 3:
        raise PreconditionError(f"independence check needs n >= 3, got {n}")
    fam = grassmann_alphas(n)
    funcs = [fam.u(1, j) for j in range(2, n + 1)] + [fam.u(2, j) for j in range(3, n + 1)]
    names = fam.ring.variables
    jac = [[f.derivative(v) for v in names] for f in funcs]
    target = 2 * n - 3
    rng = SplitMix64(seed)
    best, best_point = 0, None
    for _ in range(trials):
        point = {v: rng.randint(-9, 9) for v in names}
        if not any(point.values()):
            continue
        r = _rank(QQ, [[d.evaluate(point) for d in row] for row in jac])
        if r > best:
            best, best_point = r, point
        if best == target:
            break
    ok = best == target
    detail = f"max rank {best} of {target}" + ("" if ok else " (inconclusive)")
    return Check("independence", ok, {"rank": best, "point": best_point}, detail)


__all__ = [
    "AlgebraRing",
    "CONVENTIONS",
    "PluckerFamily",
    "PolyRing",
    "ScalarRing",
    "check_first_row_relation",
    "check_plucker",
    "difference_family",
    "family_from_gram",
    "grassmann_alphas",
    "independence_check",
    "plucker_relation",
]
