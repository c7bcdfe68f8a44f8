"""Exact scalar fields: the rationals (arbitrary precision) and prime fields GF(p).

Scalars are plain Python numbers.  Rationals are ``int`` or
:class:`fractions.Fraction` (always in lowest terms, never with denominator 1
when it can be avoided); residues are ``int`` in ``[0, p)``.  Keeping them as
builtin numbers lets the hot loops use native operators and reduce mod ``p``
only where needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Scalar = Union[int, Fraction]

MASK64 = (1 << 64) - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _q(x: Scalar) -> Scalar:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``FieldSpec("rational")`` or ``FieldSpec("prime", p)``."""

    kind: str = "rational"
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == "prime":
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise ValueError(f"modulus must be a prime, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def mod(self) -> int:
        """The modulus, or 0 for the rationals (used as a falsy flag in loops)."""
        return self.p or 0

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    def __call__(self, x) -> Scalar:
        """Coerce an int, Fraction or string into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise TypeError(f"cannot coerce {x!r} into {self}")
        if self.p is None:
            return _q(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def parse(self, s: str) -> Scalar:
        s = s.strip()
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed scalar {s!r}") from exc
        if self.p is not None and value.denominator % self.p == 0:
            raise ValueError(f"scalar {s!r} has a denominator divisible by {self.p}")
        return self(value)

    def format(self, x: Scalar) -> str:
        return str(self(x))

    def norm(self, x: Scalar) -> Scalar:
        return x % self.p if self.p else _q(x)

    def neg(self, x: Scalar) -> Scalar:
        return -x % self.p if self.p else -x

    def inv(self, x: Scalar) -> Scalar:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(x, -1, self.p)
        return _q(Fraction(1) / x)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.norm(a * self.inv(b))

    def elements(self) -> Iterator[int]:
        if self.p is None:
            raise ValueError("the rationals are infinite")
        return iter(range(self.p))

    def to_json(self) -> dict:
        if self.p is None:
            return {"kind": "rational"}
        return {"kind": "prime", "p": self.p}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ValueError(f"malformed field description {obj!r}")
        if obj["kind"] == "rational":
            return cls("rational")
        return cls("prime", obj.get("p"))

    def __str__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = FieldSpec("rational")


def GF(p: int) -> FieldSpec:
    return FieldSpec("prime", p)


class SplitMix64:
    """Seeded 64-bit generator (SplitMix64); reproducible across platforms."""

    def __init__(self, seed: int) -> None:
        self.seed = seed
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` (rejection sampling, no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            r = self.next64()
            if r < limit:
                return r % n

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def scalar(self, field: FieldSpec) -> Scalar:
        """A coefficient from {-3..3} over QQ, or uniform over GF(p)."""
        if field.p is None:
            return self.randint(-3, 3)
        return self.below(field.p)

    def nonzero_scalar(self, field: FieldSpec) -> Scalar:
        while True:
            c = self.scalar(field)
            if c:
                return c


# sparse vectors: dict index -> nonzero scalar

def clean(v: dict, p: int) -> dict:
    if p:
        return {k: c % p for k, c in v.items() if c % p}
    return {k: (c if c.__class__ is int else _q(c)) for k, c in v.items() if c}


def axpy(acc: dict, c: Scalar, v: dict, p: int) -> dict:
    """In place ``acc += c * v``; returns ``acc``."""
    if not c:
        return acc
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if p:
            y %= p
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


def vadd(u: dict, v: dict, p: int) -> dict:
    return axpy(dict(u), 1, v, p)


def vsub(u: dict, v: dict, p: int) -> dict:
    return axpy(dict(u), -1, v, p)


def vscale(c: Scalar, v: dict, p: int) -> dict:
    if not c:
        return {}
    if p:
        return {k: c * x % p for k, x in v.items() if c * x % p}
    return {k: _q(c * x) for k, x in v.items()}


def vneg(v: dict, p: int) -> dict:
    return vscale(-1, v, p)


def vsum(vectors, p: int) -> dict:
    acc: dict = {}
    for v in vectors:
        axpy(acc, 1, v, p)
    return acc


def dense(v: dict, n: int) -> list:
    return [v.get(i, 0) for i in range(n)]


def sparse(values, field: FieldSpec) -> dict:
    return {i: field(c) for i, c in enumerate(values) if field(c)}


def sparse_to_json(v: dict, field: FieldSpec) -> list:
    return [[i, field.format(c)] for i, c in sorted(v.items())]


def sparse_from_json(obj, field: FieldSpec, dim: int | None = None) -> dict:
    if not isinstance(obj, list):
        raise ValueError(f"sparse vector must be a list of [index, scalar] pairs, got {obj!r}")
    out: dict = {}
    p = field.mod
    for pair in obj:
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], int)):
            raise ValueError(f"malformed sparse entry {pair!r}")
        i, c = pair
        if i < 0 or (dim is not None and i >= dim):
            raise ValueError(f"index {i} out of range for dimension {dim}")
        value = field.parse(c) if isinstance(c, str) else field(c)
        axpy(out, value, {i: 1}, p)
    return out
