"""Verification of polynomial identities on structure-constant algebras.

An identity is a list of nonassociative polynomials that must vanish.  In
``basis_multilinear`` mode each polynomial is expanded into monomials (binary
trees over variable names), every repeated variable is fully linearized
(occurrences of a degree-d variable are distributed over d fresh copies in
all d! ways), and the result is evaluated on every tuple of basis elements.
Subtree values are memoized on the basis indices of the variables they
contain, so shared inner products are computed once per partial tuple.

Full linearization loses no information when the characteristic exceeds the
largest variable degree; otherwise the report is marked incomplete.
"""

from __future__ import annotations

import itertools
import os
from operator import itemgetter
from concurrent.futures import ProcessPoolExecutor

from .algebra import AlgebraTable
from .checks import Check
from .errors import PreconditionError
from .scalars import SplitMix64, axpy, clean

# expression constructors ------------------------------------------------------


def V(name: str) -> tuple:
    return ("v", name)


def mul(a, b) -> tuple:
    return ("*", a, b)


def add(*xs) -> tuple:
    return ("+",) + xs


def sub(a, b) -> tuple:
    return ("-", a, b)


def smul(c: int, a) -> tuple:
    return ("s", c, a)


def assoc(a, b, c) -> tuple:
    return sub(mul(mul(a, b), c), mul(a, mul(b, c)))


def comm(a, b) -> tuple:
    return sub(mul(a, b), mul(b, a))


def circ(a, b) -> tuple:
    return add(mul(a, b), mul(b, a))


def _identities() -> dict:
    x, y, z, t, w = V("x"), V("y"), V("z"), V("t"), V("w")
    return {
        "moufang_central": ["xyz", [sub(mul(mul(x, y), mul(z, x)), mul(mul(x, mul(y, z)), x))]],
        "commutator_derivation": ["xyz", [sub(comm(x, mul(y, z)), add(mul(comm(x, y), z), mul(y, comm(x, z)), smul(-3, assoc(x, y, z))))]],
        "product_associator": [
            "xyzt",
            [sub(assoc(mul(x, y), z, t), add(mul(x, assoc(y, z, t)), mul(assoc(x, z, t), y), smul(-1, assoc(x, y, comm(z, t)))))],
        ],
        "commutator_associator": [
            "xyzt",
            [
                sub(
                    smul(2, comm(assoc(x, y, z), t)),
                    add(assoc(comm(x, y), z, t), assoc(comm(y, z), x, t), assoc(comm(z, x), y, t)),
                )
            ],
        ],
        "commutator_times_associator": [
            "xyz",
            [
                sub(mul(comm(x, y), assoc(x, y, z)), assoc(x, y, assoc(x, y, z))),
                add(assoc(x, y, assoc(x, y, z)), mul(assoc(x, y, z), comm(x, y))),
            ],
        ],
        "associator_expansion": [
            "zwtxy",
            [
                sub(
                    assoc(assoc(z, w, t), x, y),
                    add(
                        assoc(assoc(z, x, y), w, t),
                        assoc(z, assoc(w, x, y), t),
                        assoc(z, w, assoc(t, x, y)),
                        smul(-1, comm(w, assoc(z, t, comm(x, y)))),
                        assoc(comm(z, t), w, comm(x, y)),
                    ),
                )
            ],
        ],
        "commutator_in_associator": ["xyz", [sub(assoc(comm(x, y), y, z), comm(y, assoc(x, y, z)))]],
        "acirc_left": ["xyz", [sub(mul(circ(x, z), y), add(mul(x, mul(z, y)), mul(z, mul(x, y))))]],
        "acirc_right": ["xyz", [sub(add(mul(mul(x, y), z), mul(mul(x, z), y)), mul(x, circ(y, z)))]],
    }


IDENTITIES = _identities()
IDENTITY_NAMES = tuple(IDENTITIES)

# short labels accepted on input (the numbering used by the reference catalogue)
ALIASES = {
    "e15": "commutator_derivation",
    "e16": "product_associator",
    "e17": "commutator_associator",
    "e18": "commutator_times_associator",
    "e19": "associator_expansion",
    "e21": "commutator_in_associator",
}


def resolve(name: str) -> str:
    """Canonical identity name for ``name`` or one of its short labels."""
    name = ALIASES.get(name, name)
    if name not in IDENTITIES:
        known = ", ".join(IDENTITY_NAMES + tuple(ALIASES))
        raise ValueError(f"unknown identity {name!r}; expected one of {known}")
    return name

# identities whose statement carries a factor 2 or 3 that degenerates in small characteristic
_SMALL_CHAR_REFUSED = {"commutator_derivation": (3,), "commutator_associator": (2,), "commutator_times_associator": (2, 3)}


# symbolic expansion -------------------------------------------------------------


def expand(node) -> dict:
    """Expand an expression into ``{monomial tree: integer coefficient}``."""
    kind = node[0]
    if kind == "v":
        return {node: 1}
    if kind == "*":
        left, right = expand(node[1]), expand(node[2])
        out: dict = {}
        for a, ca in left.items():
            for b, cb in right.items():
                m = ("*", a, b)
                out[m] = out.get(m, 0) + ca * cb
        return {m: c for m, c in out.items() if c}
    if kind == "+":
        out = {}
        for child in node[1:]:
            for m, c in expand(child).items():
                out[m] = out.get(m, 0) + c
        return {m: c for m, c in out.items() if c}
    if kind == "-":
        out = dict(expand(node[1]))
        for m, c in expand(node[2]).items():
            out[m] = out.get(m, 0) - c
        return {m: c for m, c in out.items() if c}
    if kind == "s":
        return {m: node[1] * c for m, c in expand(node[2]).items()}
    raise ValueError(f"unknown expression node {kind!r}")


def _leaves(m) -> list:
    if m[0] == "v":
        return [m[1]]
    return _leaves(m[1]) + _leaves(m[2])


def degrees(poly: dict) -> dict:
    """Degree of each variable; raises if the polynomial is not multihomogeneous."""
    degs = None
    for m in poly:
        d: dict = {}
        for name in _leaves(m):
            d[name] = d.get(name, 0) + 1
        if degs is None:
            degs = d
        elif d != degs:
            raise ValueError("identity is not multihomogeneous")
    return degs or {}


def _relabel(m, names):
    """Replace leaves left to right by the successive entries of ``names``."""
    it = iter(names)

    def go(node):
        if node[0] == "v":
            return ("v", next(it))
        return ("*", go(node[1]), go(node[2]))

    return go(m)


def linearize(poly: dict) -> tuple:
    """Full linearization; returns ``(multilinear poly, ordered variable list)``."""
    degs = degrees(poly)
    copies = {v: [v if d == 1 else f"{v}{i + 1}" for i in range(d)] for v, d in degs.items()}
    variables = [c for v in sorted(degs) for c in copies[v]]
    out: dict = {}
    for m, coef in poly.items():
        leaves = _leaves(m)
        multi = [v for v in degs if degs[v] > 1]
        perms = [list(itertools.permutations(copies[v])) for v in multi]
        for choice in itertools.product(*perms):
            assigned = {v: iter(p) for v, p in zip(multi, choice)}
            names = [next(assigned[v]) if v in assigned else v for v in leaves]
            lm = _relabel(m, names)
            out[lm] = out.get(lm, 0) + coef
    return {m: c for m, c in out.items() if c}, variables


# numeric evaluation -------------------------------------------------------------


class _Plan:
    """Multilinear polynomials compiled into a shared DAG of product nodes.

    Node ``k`` is either a leaf (variable position) or the product of two
    earlier nodes; each node records the sorted positions of its variables so
    its value can be cached on the matching sub-tuple of basis indices.
    """

    def __init__(self, polys: list, variables: list):
        self.pos = {v: i for i, v in enumerate(variables)}
        self.nvars = len(variables)
        self.nodes: list = []
        self.ids: dict = {}
        self.polys = [self._group([(self._node(m), c) for m, c in poly.items()]) for poly in polys]

    def _node(self, m) -> int:
        k = self.ids.get(m)
        if k is not None:
            return k
        if m[0] == "v":
            entry = ("v", self.pos[m[1]], (self.pos[m[1]],))
        else:
            l, r = self._node(m[1]), self._node(m[2])
            key = tuple(sorted(self.nodes[l][-1] + self.nodes[r][-1]))
            entry = ("*", l, r, itemgetter(*key), key)
        k = len(self.nodes)
        self.nodes.append(entry)
        self.ids[m] = k
        return k

    def _group(self, terms: list) -> tuple:
        """Factor top-level products by a shared operand (the product is bilinear).

        Returns ``(side, groups)``: ``side`` 0 means ``shared * sum(c * other)``,
        1 means ``sum(c * other) * shared``.
        """
        best = None
        for side in (0, 1):
            groups: dict = {}
            for k, c in terms:
                node = self.nodes[k]
                shared, other = (node[1], node[2]) if side == 0 else (node[2], node[1])
                groups.setdefault(shared, []).append((other, c))
            if best is None or len(groups) < len(best[1]):
                best = (side, groups)
        return best[0], list(best[1].items())


class _Evaluator:
    def __init__(self, A: AlgebraTable, plan: _Plan):
        self.A = A
        self.plan = plan
        self.memo = [dict() for _ in plan.nodes]

    def value(self, k: int, tup) -> dict:
        node = self.plan.nodes[k]
        if node[0] == "v":
            return {tup[node[1]]: 1}
        full = len(node[4]) == self.plan.nvars
        if not full:
            sub = node[3](tup)
            hit = self.memo[k].get(sub)
            if hit is not None:
                return hit
        val = self.A.mul(self.value(node[1], tup), self.value(node[2], tup))
        if not full:
            self.memo[k][sub] = val
        return val


def _eval_poly(A: AlgebraTable, ev: _Evaluator, poly: tuple, tup) -> dict:
    p = A.field.mod
    side, groups = poly
    acc: dict = {}
    for shared, others in groups:
        s = {}
        for k, c in others:
            axpy(s, c, ev.value(k, tup), p)
        if s:
            v = ev.value(shared, tup)
            axpy(acc, 1, A.mul(v, s) if side == 0 else A.mul(s, v), p)
    return acc


def _group_tuples(n: int, sizes) -> list:
    """Index tuples for copy groups, nondecreasing inside each group.

    The full linearization is symmetric in the copies of one variable, so
    one representative per multiset of indices suffices.
    """
    return [list(itertools.combinations_with_replacement(range(n), d)) for d in sizes]


def _scan(args):
    A, plan, sizes, heads = args
    ev = _Evaluator(A, plan)
    polys = plan.polys
    rest = _group_tuples(A.dim, sizes[1:])
    for head in heads:
        for tail in itertools.product(*rest):
            tup = head + sum(tail, ())
            for k, poly in enumerate(polys):
                if _eval_poly(A, ev, poly, tup):
                    return k, tup
    return None


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ALTKRON_THREADS", "1")))
    except ValueError:
        return 1


def _refuse_small_char(A: AlgebraTable, name: str) -> None:
    ch = A.field.characteristic
    if ch in _SMALL_CHAR_REFUSED.get(name, ()):
        raise PreconditionError(
            f"identity {name} carries a factor that vanishes in characteristic {ch}; refusing to check it over {A.field}"
        )


def check_identity(A: AlgebraTable, name: str, mode: str = "basis_multilinear", n: int = 20, seed: int | None = None) -> Check:
    """Check a named identity on ``A``.

    ``mode`` is ``"basis_multilinear"`` or ``"random"``; random mode needs an
    explicit ``seed`` and substitutes ``n`` pseudorandom elements.  Passing
    is not claimed to prove anything for non-alternative inputs; the identity
    is simply evaluated.
    """
    name = resolve(name)
    _refuse_small_char(A, name)
    letters, exprs = IDENTITIES[name]
    polys = [expand(e) for e in exprs]
    cname = f"identity:{name}"
    if mode == "random":
        if seed is None:
            raise ValueError("random mode requires an explicit seed")
        return _check_random(A, cname, letters, polys, n, seed)
    if mode != "basis_multilinear":
        raise ValueError(f"unknown mode {mode!r}")
    lin = [linearize(p) for p in polys]
    variables = lin[0][1]
    plan = _Plan([lp for lp, _ in lin], variables)
    maxdeg = max(max(degrees(p).values()) for p in polys)
    ch = A.field.characteristic
    complete = ch == 0 or ch > maxdeg
    detail = "" if complete else f"linearization incomplete: characteristic {ch} <= degree {maxdeg}"
    sizes = [d for _, d in sorted(degrees(polys[0]).items())]
    heads = _group_tuples(A.dim, sizes[:1])[0]
    workers = min(_threads(), len(heads))
    chunks = [heads[i::workers] for i in range(workers)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            hits = [h for h in pool.map(_scan, [(A, plan, sizes, c) for c in chunks]) if h]
        hit = min(hits, key=lambda h: h[1]) if hits else None
    else:
        hit = _scan((A, plan, sizes, heads))
    if hit is None:
        return Check(cname, True, detail=detail)
    k, tup = hit
    witness = {"equation": k, "assignment": {v: A.names[i] for v, i in zip(variables, tup)}}
    return Check(cname, False, witness, detail or "multilinear basis check failed")


def _eval_tree(A: AlgebraTable, m, env: dict) -> dict:
    if m[0] == "v":
        return env[m[1]]
    return A.mul(_eval_tree(A, m[1], env), _eval_tree(A, m[2], env))


def evaluate(A: AlgebraTable, expr, env: dict) -> dict:
    """Value of an expression tree under ``env: variable -> element``."""
    p = A.field.mod
    acc: dict = {}
    for m, c in expand(expr).items():
        axpy(acc, c, _eval_tree(A, m, env), p)
    return clean(acc, p)


def _check_random(A, cname, letters, polys, n, seed) -> Check:
    rng = SplitMix64(seed)
    p = A.field.mod
    for trial in range(n):
        env = {v: A.random_element(rng) for v in letters}
        for k, poly in enumerate(polys):
            acc: dict = {}
            for m, c in poly.items():
                axpy(acc, c, _eval_tree(A, m, env), p)
            if acc:
                return Check(cname, False, {"equation": k, "trial": trial, "seed": seed})
    return Check(cname, True, detail=f"random: seed={seed}, trials={n}")


def multilinear_size(name: str) -> int:
    """Number of monomials after full linearization (diagnostic)."""
    _, exprs = IDENTITIES[resolve(name)]
    return sum(len(linearize(expand(e))[0]) for e in exprs)
