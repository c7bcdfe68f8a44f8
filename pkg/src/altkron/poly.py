"""Sparse multivariate polynomials with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .scalars import QQ, FieldSpec, Scalar


class MultiPoly:
    """A polynomial over ``field`` in an ordered list of variables.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("variables", "field", "terms")

    def __init__(self, variables, terms: Mapping | None = None, field: FieldSpec = QQ):
        self.variables = tuple(variables)
        self.field = field
        n = len(self.variables)
        clean: dict = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"exponent vector {exps} does not match variables {self.variables}")
            c = field(c)
            if c:
                c = field.norm(clean.get(exps, 0) + c)
                if c:
                    clean[exps] = c
                else:
                    clean.pop(exps, None)
        self.terms = clean

    @classmethod
    def constant(cls, variables, c, field: FieldSpec = QQ) -> "MultiPoly":
        return cls(variables, {(0,) * len(tuple(variables)): c}, field)

    @classmethod
    def var(cls, variables, name: str, field: FieldSpec = QQ) -> "MultiPoly":
        variables = tuple(variables)
        exps = tuple(int(v == name) for v in variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {exps: 1}, field)

    def _compatible(self, other: "MultiPoly") -> None:
        if not isinstance(other, MultiPoly):
            raise TypeError(f"expected MultiPoly, got {type(other).__name__}")
        if other.variables != self.variables:
            raise ValueError(f"variable lists differ: {self.variables} vs {other.variables}")
        if other.field != self.field:
            raise ValueError(f"fields differ: {self.field} vs {other.field}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, (int, str, Fraction)):
            return MultiPoly.constant(self.variables, other, self.field)
        self._compatible(other)
        return other

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.variables, out, self.field)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, out, self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.constant(self.variables, 1, self.field)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return (self.variables, self.field, self.terms) == (other.variables, other.field, other.terms)
        if isinstance(other, int):
            return self == MultiPoly.constant(self.variables, other, self.field)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list:
        """Terms in graded-lex order (highest first) by declared variable order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def evaluate(self, point: Mapping[str, Scalar]) -> Scalar:
        missing = [v for v in self.variables if v not in point]
        if missing:
            raise ValueError(f"unassigned variables: {missing}")
        f = self.field
        vals = [f(point[v]) for v in self.variables]
        total = 0
        for exps, c in self.terms.items():
            t = c
            for x, e in zip(vals, exps):
                if e:
                    t = t * x**e
            total += t
        return f.norm(total)

    def derivative(self, name: str) -> "MultiPoly":
        k = self.variables.index(name)
        out = {}
        for exps, c in self.terms.items():
            if exps[k]:
                e = list(exps)
                e[k] -= 1
                out[tuple(e)] = c * exps[k]
        return MultiPoly(self.variables, out, self.field)

    def to_json(self) -> list:
        return [{"exponents": list(e), "coeff": self.field.format(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, variables, obj, field: FieldSpec = QQ) -> "MultiPoly":
        if not isinstance(obj, list):
            raise ValueError("polynomial must be a list of {exponents, coeff} terms")
        terms: dict = {}
        for t in obj:
            try:
                e, c = tuple(t["exponents"]), field.parse(str(t["coeff"]))
            except (KeyError, TypeError) as exc:
                raise ValueError(f"malformed polynomial term {t!r}") from exc
            terms[e] = field.norm(terms.get(e, 0) + c)
        return cls(variables, terms, field)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_arith(op: str, f: MultiPoly, g: MultiPoly | None = None) -> MultiPoly:
    if op == "neg":
        return -f
    if g is None:
        raise ValueError(f"operation {op!r} needs two operands")
    f._compatible(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_eval(f: MultiPoly, point: Mapping[str, Scalar]) -> Scalar:
    return f.evaluate(point)
