"""Command-line front end.

    altkron check ALGEBRA [--identity NAME ...] [--mode basis|random:N:SEED]
    altkron construct KIND [--base NAME|FILE] [--alpha X] ... [--out DIR]
    altkron coordinatize ALGEBRA [--units FILE] [--out DIR]
    altkron plucker grassmann --n N | plucker check FAMILY

Every command prints one JSON report (``"format": 1``) on stdout.  Exit codes:
0 when every check passes, 1 when a check or precondition fails, 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from fractions import Fraction

from . import __version__
from .algebra import AlgebraTable, MatrixUnits, check_alternative
from .checks import Check, Report
from .constructions import (
    cay_bimodule,
    cd,
    ncd,
    octonion,
    octonion_criterion,
    reg_bimodule,
    split_null_extension,
    three_generator_module,
)
from .coordinatized import KronSpec, build_algebra, canonical_units
from .coordinatizer import CoordinatizationError, coordinatize
from .errors import FormatError, PreconditionError
from .identities import ALIASES, IDENTITY_NAMES, check_identity, resolve
from .plucker import PluckerFamily, check_first_row_relation, check_plucker, grassmann_alphas, independence_check
from .samples import grassmann2, ground, m2, product_algebra, truncated_poly, upper_triangular
from .scalars import GF, QQ, FieldSpec, sparse_to_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# input helpers ---------------------------------------------------------------------


def _read_json(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def parse_field(s: str) -> FieldSpec:
    s = s.strip()
    if s.upper() in ("Q", "QQ", "RATIONAL", "RATIONALS"):
        return QQ
    m = re.fullmatch(r"(?:GF\(?)?(\d+)\)?", s, re.IGNORECASE)
    if not m:
        raise InputError(f"unknown field {s!r} (use Q or GF(p))")
    try:
        return GF(int(m.group(1)))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


BUILTIN = {
    "rationals": ground,
    "ground": ground,
    "dual": lambda f: truncated_poly(2, f),
    "grassmann2": grassmann2,
    "m2": m2,
    "upper_triangular": upper_triangular,
}


def load_base(name: str, field: FieldSpec, inputs: dict) -> AlgebraTable:
    """A builtin name (``rationals``, ``dual``, ``truncated:K``, ``product:K``...) or an algebra file."""
    if os.path.exists(name):
        obj, digest = _read_json(name)
        inputs[name] = digest
        return AlgebraTable.from_json(obj)
    if name in BUILTIN:
        return BUILTIN[name](field)
    m = re.fullmatch(r"(truncated|product):(\d+)", name)
    if m:
        k = int(m.group(2))
        return truncated_poly(k, field) if m.group(1) == "truncated" else product_algebra(k, field)
    raise InputError(f"unknown base {name!r}: not a file and not one of {sorted(BUILTIN)} or truncated:K, product:K")


_NUM = re.compile(r"[0-9]+(?:/[0-9]+)?")


def parse_element(s: str, A: AlgebraTable) -> dict:
    """Comma-separated coordinates (``"0,1"``) or a combination of basis names (``"1 - 2*t"``)."""
    f = A.field
    s = s.strip()
    if "," in s:
        parts = [x.strip() for x in s.split(",")]
        if len(parts) != A.dim:
            raise InputError(f"expected {A.dim} coordinates, got {len(parts)}")
        try:
            return {i: f.parse(x) for i, x in enumerate(parts) if f.parse(x)}
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    out: dict = {}
    for term in re.split(r"(?=[+-])", s.replace(" ", "")):
        if not term:
            continue
        if term in ("+", "-"):
            raise InputError(f"dangling sign in {s!r}")
        sign = -1 if term[0] == "-" else 1
        term = term.lstrip("+-")
        coef, _, name = term.rpartition("*")
        if not coef and _NUM.fullmatch(name) and name not in A.names:
            coef, name = name, None
        try:
            c = sign * (Fraction(coef) if coef else 1)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad coefficient {coef!r}") from exc
        if name is None:
            vec = A.one
        elif name in A.names:
            vec = {A.names.index(name): 1}
        else:
            raise InputError(f"unknown basis element {name!r}; basis is {A.names}")
        for i, x in vec.items():
            out[i] = out.get(i, 0) + c * x
    try:
        return {i: f(c) for i, c in out.items() if f(c)}
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _units_for(obj: dict, A: AlgebraTable, units_path: str | None, inputs: dict) -> MatrixUnits:
    if units_path:
        uobj, digest = _read_json(units_path)
        inputs[units_path] = digest
    elif isinstance(obj, dict) and "embedding" in obj:
        uobj = obj["embedding"]
    else:
        raise InputError("no matrix units: pass --units or use a file with an 'embedding' block")
    return MatrixUnits.from_json(uobj, A.field, A.dim)


def _write(out_dir: str | None, name: str, obj) -> str | None:
    if not out_dir:
        return None
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def _report(command: list, inputs: dict, checks: Report, seed=None, **extra) -> dict:
    out = {
        "format": 1,
        "command": command,
        "inputs": dict(sorted(inputs.items())),
        "checks": checks.to_json(),
        "pass": checks.passed,
    }
    if seed is not None:
        out["seed"] = seed
    out.update(extra)
    return out


# commands ------------------------------------------------------------------------------


def cmd_check(args, command: list) -> tuple:
    inputs: dict = {}
    obj, digest = _read_json(args.algebra)
    inputs[args.algebra] = digest
    A = AlgebraTable.from_json(obj)
    mode, n, seed = "basis_multilinear", 0, None
    if args.mode != "basis":
        m = re.fullmatch(r"random:(\d+)(?::(-?\d+))?", args.mode)
        if not m:
            raise InputError(f"bad --mode {args.mode!r}; use basis or random:N:SEED")
        n = int(m.group(1))
        seed = int(m.group(2)) if m.group(2) is not None else args.seed
        if seed is None:
            raise InputError("random mode needs a seed (random:N:SEED or --seed)")
        mode = "random"
    rep = Report()
    rep.add(check_alternative(A))
    for name in args.identity or []:
        try:
            name = resolve(name)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        try:
            rep.add(check_identity(A, name, mode, n=n, seed=seed))
        except PreconditionError as exc:
            rep.add(Check(f"identity:{name}", False, None, str(exc)))
    return _report(command, inputs, rep, seed, dim=A.dim), rep.passed


def _construct(args, inputs: dict):
    f = parse_field(args.field)
    kind = args.kind
    if kind == "kron":
        if not args.spec:
            raise InputError("kron needs --spec FILE")
        obj, digest = _read_json(args.spec)
        inputs[args.spec] = digest
        spec = KronSpec.from_json(obj)
        A, E = build_algebra(spec, force=args.force)
        return A, E, spec, {"kind": "kron", "force": args.force}
    base = load_base(args.base or "rationals", f, inputs)
    if kind == "octonion":
        con = octonion(base, args.v2 if args.v2 is not None else 1)
    elif kind in ("cd", "ncd"):
        if args.alpha is None:
            raise InputError(f"{kind} needs --alpha")
        alpha = parse_element(args.alpha, base)
        con = cd(base, alpha) if kind == "cd" else ncd(base, alpha, section_seed=args.seed)
    elif kind == "threegen":
        a, b, c = (parse_element(x, base) if x else {} for x in (args.a, args.b, args.c))
        spec = three_generator_module(base, a, b, c)
        A, E = build_algebra(spec, force=args.force)
        prov = {"kind": "threegen", "a": sparse_to_json(a, base.field), "b": sparse_to_json(b, base.field), "c": sparse_to_json(c, base.field)}
        return A, E, spec, prov
    elif kind == "nullext":
        if args.bimodule == "cay":
            if base.dim != 4:
                raise PreconditionError("the Cayley bimodule needs the 2x2 matrices as base (--base m2)")
            left, right = cay_bimodule(base.field)
        else:
            left, right = reg_bimodule(base)
        A = split_null_extension(base, left, right)
        return A, None, None, {"kind": "nullext", "bimodule": args.bimodule}
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown kind {kind!r}")
    return con.algebra, con.units, con.spec, con.provenance


def cmd_construct(args, command: list) -> tuple:
    inputs: dict = {}
    A, E, spec, prov = _construct(args, inputs)
    doc = A.to_json()
    if E is not None:
        doc["embedding"] = E.to_json(A.field)
    if spec is not None and E is None:
        doc["embedding"] = canonical_units(spec).to_json(A.field)
    doc["provenance"] = prov
    rep = Report()
    rep.add(check_alternative(A))
    files = {}
    path = _write(args.out, f"{args.kind}.algebra.json", doc)
    if path:
        files["algebra"] = path
    if spec is not None:
        p2 = _write(args.out, f"{args.kind}.spec.json", spec.to_json())
        if p2:
            files["spec"] = p2
    extra = {"dim": A.dim, "provenance": prov, "files": files}
    if not args.out:
        extra["algebra"] = doc
    if spec is not None and args.kind in ("octonion", "cd", "threegen"):
        extra["octonion_criterion"] = octonion_criterion(spec).to_json(spec.field)
    return _report(command, inputs, rep, args.seed, **extra), rep.passed


def cmd_coordinatize(args, command: list) -> tuple:
    inputs: dict = {}
    obj, digest = _read_json(args.algebra)
    inputs[args.algebra] = digest
    A = AlgebraTable.from_json(obj)
    E = _units_for(obj, A, args.units, inputs)
    try:
        res = coordinatize(A, E)
    except CoordinatizationError as exc:
        rep = exc.partial.report if exc.partial is not None else Report()
        rep.add(Check(f"stage:{exc.stage}", False, None, str(exc)))
        dims = exc.partial.dims if exc.partial is not None and exc.partial.grading else None
        return _report(command, inputs, rep, stage=exc.stage, error=str(exc), dims=dims), False
    f = A.field
    gram = [[sparse_to_json(x, f) for x in row] for row in res.form.gram]
    iso = [[f.format(x) for x in row] for row in res.iso.matrix()]
    files = {}
    p1 = _write(args.out, "recovered.spec.json", res.spec.to_json())
    p2 = _write(args.out, "iso.json", {"format": 1, "matrix": iso})
    if p1:
        files.update(spec=p1, iso=p2)
    extra = {
        "dims": res.dims,
        "coefficient_basis": res.ring.alg.names,
        "gram": gram,
        "iso": iso,
        "files": files,
    }
    return _report(command, inputs, res.report, **extra), res.passed


def cmd_plucker(args, command: list) -> tuple:
    inputs: dict = {}
    rep = Report()
    extra: dict = {}
    if args.action == "grassmann":
        try:
            fam = grassmann_alphas(args.n)
        except PreconditionError as exc:
            raise InputError(str(exc)) from exc
        rep.add(check_plucker(fam, args.convention))
        rep.add(check_first_row_relation(fam))
        if args.n >= 3 and args.independence:
            if args.seed is None:
                raise InputError("--independence samples random points and needs --seed")
            rep.add(independence_check(args.n, args.trials, args.seed))
        extra["family"] = fam.to_json()
        path = _write(args.out, f"grassmann{args.n}.json", fam.to_json())
        if path:
            extra["files"] = {"family": path}
    else:
        if not args.family:
            raise InputError("plucker check needs a family file")
        obj, digest = _read_json(args.family)
        inputs[args.family] = digest
        fam = PluckerFamily.from_json(obj)
        rep.add(check_plucker(fam, args.convention))
    extra["convention"] = args.convention
    return _report(command, inputs, rep, args.seed, **extra), rep.passed


# argument parsing -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="altkron", description="Exact computations with alternative algebras containing 2x2 matrices.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="alternativity and polynomial identities of an algebra file")
    c.add_argument("algebra")
    c.add_argument("--identity", action="append", metavar="NAME", help=f"one of: {', '.join(IDENTITY_NAMES + tuple(ALIASES))}")
    c.add_argument("--mode", default="basis", help="basis (exhaustive multilinear) or random:N:SEED")
    c.add_argument("--seed", type=int)

    k = sub.add_parser("construct", help="build an algebra from a construction")
    k.add_argument("kind", choices=["octonion", "cd", "ncd", "nullext", "threegen", "kron"])
    k.add_argument("--base", help="builtin name (rationals, dual, grassmann2, m2, truncated:K, product:K) or algebra file")
    k.add_argument("--field", default="Q", help="Q or GF(p) for builtin bases")
    k.add_argument("--alpha", help='element as coordinates "0,1" or basis names "e1e2"')
    k.add_argument("--v2", help="v^2 for octonion (default 1)")
    k.add_argument("--a")
    k.add_argument("--b")
    k.add_argument("--c")
    k.add_argument("--bimodule", choices=["cay", "reg"], default="reg")
    k.add_argument("--spec", help="coordinate triple file for kind kron")
    k.add_argument("--force", action="store_true", help="build even when the form is invalid")
    k.add_argument("--seed", type=int, help="section seed for ncd independence test")
    k.add_argument("--out")

    z = sub.add_parser("coordinatize", help="recover coordinates from an algebra with matrix units")
    z.add_argument("algebra")
    z.add_argument("--units")
    z.add_argument("--out")

    p = sub.add_parser("plucker", help="Grassmannian coordinates and quadratic relations")
    p.add_argument("action", choices=["grassmann", "check"])
    p.add_argument("family", nargs="?")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--convention", choices=["standard", "printed"], default="standard")
    p.add_argument("--independence", action="store_true")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    return ap


COMMANDS = {"check": cmd_check, "construct": cmd_construct, "coordinatize": cmd_coordinatize, "plucker": cmd_plucker}


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report, ok = COMMANDS[args.command](args, argv)
    except (InputError, FormatError) as exc:
        print(json.dumps({"format": 1, "command": argv, "error": str(exc), "pass": False}, sort_keys=True))
        print(f"altkron: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(json.dumps({"format": 1, "command": argv, "error": str(exc), "pass": False}, sort_keys=True))
        print(f"altkron: precondition failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(json.dumps(report, indent=1, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
