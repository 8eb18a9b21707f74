"""Command-line front end: ``newton-mult <subcommand> --in FILE ...``.

Exit codes: 0 success, 2 parse/schema error, 3 mathematical precondition
failed, 4 inconclusive result under ``--strict on``.  Reports go to stdout
(or ``--out``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import __version__
from . import graded_systems as gs
from . import lattice_geometry as lg
from . import monomial_ideals as mi
from . import multiplier_ideals as mj
from . import valuations as val

EXIT_OK, EXIT_SCHEMA, EXIT_MATH, EXIT_INCONCLUSIVE = 0, 2, 3, 4


class SchemaError(ValueError):
    pass


class Inconclusive(Exception):
    def __init__(self, report, reason):
        super().__init__(reason)
        self.report = report


def rational(x) -> dict:
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 12
        dec = Decimal(x.numerator) / Decimal(x.denominator)
    return {"num": x.numerator, "den": x.denominator, "decimal": str(dec)}


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- parsing


def _int_vector(v, dim, what):
    if not isinstance(v, list) or len(v) != dim:
        raise SchemaError(f"{what}: expected a list of {dim} integers, got {v!r}")
    for x in v:
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise SchemaError(f"{what}: entry {x!r} is not a nonnegative integer")
    return tuple(v)


def _rational(x, what):
    try:
        if isinstance(x, bool):
            raise ValueError
        if isinstance(x, (int, str)):
            return Fraction(x)
    except (ValueError, ZeroDivisionError):
        pass
    raise SchemaError(f"{what}: {x!r} is not an integer or a 'num/den' string")


def _dim(doc):
    d = doc.get("dim")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise SchemaError(f"'dim' must be a positive integer, got {d!r}")
    return d


def parse_ideal(doc, dim=None) -> mi.MonomialIdeal:
    dim = _dim(doc) if dim is None else dim
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise SchemaError("ideal needs a nonempty 'generators' list")
    return mi.minimalize([_int_vector(g, dim, f"generator {i}") for i, g in enumerate(gens)])


def parse_vertices(verts, dim):
    if not isinstance(verts, list) or not verts:
        raise SchemaError("region needs a nonempty vertex list")
    out = []
    for i, v in enumerate(verts):
        if not isinstance(v, list) or len(v) != dim:
            raise SchemaError(f"vertex {i}: expected {dim} coordinates")
        p = tuple(_rational(x, f"vertex {i}") for x in v)
        if any(x < 0 for x in p):
            raise SchemaError(f"vertex {i} has a negative coordinate")
        out.append(p)
    return lg.region_from_generators(out)


def parse_region(doc) -> lg.NewtonRegion:
    return parse_vertices(doc.get("vertices"), _dim(doc))


def parse_system(doc) -> gs.GradedSystem:
    dim = _dim(doc)
    kind = doc.get("kind")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise SchemaError("system needs a 'payload' object")
    limit = doc.get("known_limit")
    known = parse_vertices(limit, dim) if limit is not None else None
    if kind == "power":
        return gs.PowerSystem(parse_ideal(payload, dim), known)
    if kind == "affine":
        factors = payload.get("factors")
        if not isinstance(factors, list) or not factors:
            raise SchemaError("affine payload needs a nonempty 'factors' list")
        parsed = []
        for i, f in enumerate(factors):
            if not isinstance(f, dict):
                raise SchemaError(f"factor {i} must be an object")
            slope = _rational(f.get("slope"), f"factor {i} slope")
            intercept = _rational(f.get("intercept", 0), f"factor {i} intercept")
            if slope < 0:
                raise SchemaError(f"factor {i}: slope must be nonnegative")
            parsed.append((parse_ideal(f, dim), slope, intercept))
        return gs.AffineSystem(tuple(parsed), known)
    if kind == "table":
        ideals = payload.get("ideals")
        if not isinstance(ideals, dict) or not ideals:
            raise SchemaError("table payload needs an 'ideals' object keyed by index")
        try:
            keys = sorted(int(k) for k in ideals)
        except ValueError:
            raise SchemaError("table keys must be integers") from None
        if keys != list(range(1, len(keys) + 1)):
            raise SchemaError("table must define a_1, ..., a_K without gaps")
        table = tuple(parse_ideal({"generators": ideals[str(k)]}, dim) for k in keys)
        try:
            return gs.TableSystem(table, known)
        except gs.SuperadditivityError as exc:
            raise SchemaError(f"table is not a graded system: {exc}") from None
    if kind == "builtin":
        name = payload.get("name")
        if name == "kw1":
            if dim != 2:
                raise SchemaError("builtin kw1 lives in dimension 2")
            return gs.KW1System(known if known is not None else lg.simplex(2))
        if name == "m-powers":
            return gs.PowerSystem(mi.maximal_ideal(dim), known, "m-powers")
        raise SchemaError(f"unknown builtin {name!r}")
    raise SchemaError(f"unknown system kind {kind!r}")


def load_object(path):
    """Read a JSON file holding an ideal, a region or a system."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    if "kind" in doc:
        return parse_system(doc)
    if "vertices" in doc:
        return parse_region(doc)
    if "generators" in doc:
        return parse_ideal(doc)
    raise SchemaError(f"{path}: cannot tell ideal, region or system apart")


def parse_chain(spec: str):
    try:
        base, ratio, length = (int(x) for x in spec.split(":"))
        return gs.divisibility_chain(base, ratio, length)
    except (ValueError, gs.GradedSystemError):
        raise SchemaError(f"bad chain spec {spec!r}; expected base:ratio:length") from None


def parse_range(spec: str):
    try:
        lo, hi = (int(x) for x in spec.split(":"))
    except ValueError:
        raise SchemaError(f"bad range {spec!r}; expected lo:hi") from None
    if lo < 1 or hi < lo:
        raise SchemaError(f"bad range {spec!r}")
    return lo, hi


# ---------------------------------------------------------------- commands


def _inputs(args, kinds, count=None):
    objs = []
    for path in args.inputs or []:
        objs.append(load_object(path))
    for name in args.builtin or []:
        objs.append(parse_system({"dim": 2, "kind": "builtin", "payload": {"name": name}}))
    if not objs:
        raise SchemaError("no input: use --in FILE or --builtin NAME")
    if count is not None and len(objs) != count:
        raise SchemaError(f"expected {count} input(s), got {len(objs)}")
    for o in objs:
        if not isinstance(o, kinds):
            names = "/".join(k.__name__ for k in kinds)
            raise SchemaError(f"input of type {type(o).__name__} not accepted here (want {names})")
    return objs


def _as_system(obj):
    if isinstance(obj, mi.MonomialIdeal):
        return gs.PowerSystem(obj)
    return obj


def cmd_mult(args):
    (obj,) = _inputs(args, (mi.MonomialIdeal, gs.GradedSystem), 1)
    if isinstance(obj, mi.MonomialIdeal):
        return {"e": rational(mi.samuel_multiplicity(obj)), "ideal": obj.to_json()}, None, None
    res = gs.asymptotic_multiplicity(obj, args.chain)
    table = [{"k": k, "ea": rational(v)} for k, v in res.table]
    report = {"e": rational(res.estimate), "exact": res.exact, "table": table}
    rows = [("k", "ea")] + [(k, _frac_str(v)) for k, v in res.table]
    return report, rows, None if res.exact else "estimate is an upper bound, not exact"


def cmd_mj(args):
    (obj,) = _inputs(args, (mi.MonomialIdeal, gs.GradedSystem), 1)
    c = args.c
    if c is None:
        raise SchemaError("--c is required")
    if c <= 0:
        raise SchemaError("--c must be positive")
    if isinstance(obj, mi.MonomialIdeal):
        J = mj.howald_multiplier(obj, c)
        return {"c": rational(c), "ideal": J.to_json()}, None, None
    res = mj.asymptotic_multiplier(obj, c)
    report = {
        "c": rational(c),
        "ideal": res.ideal.to_json(),
        "stabilized": res.stabilized,
        "provenance": res.provenance,
        "chain": [q for q, _ in res.chain],
    }
    return report, None, None if res.stabilized else "asymptotic multiplier ideal not stabilized"


def cmd_els(args):
    (S,) = _inputs(args, (mi.MonomialIdeal, gs.GradedSystem), 1)
    S = _as_system(S)
    if not gs.is_stable(S, args.chain):
        raise mi.NotPrimaryError("system is not stable (asymptotic order is zero)")
    rep = mj.els_check(S, args.chain)
    report = {
        "rows": [{"k": r.k, "ea": rational(r.ea), "eb": rational(r.eb), "gap": rational(r.gap)} for r in rep.rows],
        "exact_limit": rational(rep.exact_limit) if rep.exact_limit is not None else None,
        "last_gap": rational(rep.last_gap),
        "sandwich": rep.sandwich,
        "b_stabilized": rep.b_stabilized,
        "verdict": rep.verdict,
    }
    rows = [("k", "ea", "eb", "gap")] + [(r.k, _frac_str(r.ea), _frac_str(r.eb), _frac_str(r.gap)) for r in rep.rows]
    problem = None
    if rep.exact_limit is None or not rep.b_stabilized:
        problem = "limit region or some b_k not certified"
    return report, rows, problem


def cmd_kw(args):
    (S,) = _inputs(args, (mi.MonomialIdeal, gs.GradedSystem), 1)
    S = _as_system(S)
    try:
        grid = [Fraction(x) for x in args.C_grid.split(",")]
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"bad --C-grid {args.C_grid!r}") from None
    if not grid or any(C <= 0 for C in grid):
        raise SchemaError("--C-grid entries must be positive")
    rep = mj.kw_constant(S, grid, args.D_max, args.m_range, ceil_index=args.ceil_index)
    report = {
        "C": rational(rep.C),
        "D": rational(rep.D) if rep.D is not None else None,
        "verified": rep.verified,
        "m_range": list(rep.m_range),
        "convention": rep.convention,
        "witnesses": [{"m": m, "monomial": list(g)} for m, g in rep.witnesses],
        "failures": [
            {"C": rational(C), "D": rational(D) if D is not None else None,
             "witnesses": [{"m": m, "monomial": list(g)} for m, g in w]}
            for C, (D, w) in sorted(rep.failures.items())
        ],
        "b_certain": rep.b_certain,
    }
    problem = None if rep.b_certain else "b lower bound only; containment verdict is necessary-condition only"
    return report, None, problem


def cmd_tame(args):
    (obj,) = _inputs(args, (mi.MonomialIdeal, gs.GradedSystem, lg.NewtonRegion), 1)
    if isinstance(obj, mi.MonomialIdeal):
        P = mi.newton_region(obj)
    elif isinstance(obj, gs.GradedSystem):
        lim = gs.limit_region(obj, args.chain)
        if not lim.exact:
            raise Inconclusive({"reason": "limit region not certified"}, "limit region not certified")
        P = lim.region
    else:
        P = obj
    rep = mj.tameness_check(P, args.m_range)
    report = {
        "region": P.to_json(),
        "per_m": [{"m": m, "C": rational(C) if C is not None else None} for m, C in rep.per_m],
        "verdict": rep.verdict,
        "C": rational(rep.C) if rep.C is not None else None,
    }
    rows = [("m", "C")] + [(m, _frac_str(C) if C is not None else "") for m, C in rep.per_m]
    return report, rows, None if rep.verdict == "tame-with-C" else "tameness inconclusive"


def _weights(args, dim):
    return val.default_weights(dim, args.weights_sum)


def cmd_veq(args):
    objs = _inputs(args, (mi.MonomialIdeal, gs.GradedSystem))
    systems = [_as_system(o) for o in objs]
    if len(systems) == 1:
        (S,) = systems
        res = val.v_equiv_ab(S, _weights(args, S.dim), args.chain)
        report = {
            "mode": "a-vs-b",
            "ok": res.ok,
            "rows": [
                {"weight": list(w.w), "a": rational(x), "b": rational(y), "b_stabilized": st}
                for w, x, y, st in res.rows
            ],
        }
        return report, None, None
    if len(systems) != 2:
        raise SchemaError("veq takes one system (a vs b) or two systems")
    S1, S2 = systems
    res = val.v_equivalent(S1, S2, _weights(args, S1.dim), args.chain)
    report = {
        "mode": "system-vs-system",
        "verdict": res.verdict,
        "exact": res.exact,
        "mismatches": [{"weight": list(w.w), "first": rational(x), "second": rational(y)} for w, x, y in res.mismatches],
    }
    return report, None, None if res.exact else "sampled comparison only"


def cmd_mixed(args):
    ideals = _inputs(args, (mi.MonomialIdeal,))
    e = mi.mixed_multiplicity(*ideals)
    regions = [mi.newton_region(a) for a in ideals]
    n = ideals[0].dim
    # the same polarization with grid-oracle covolumes
    oracle = Fraction(0)
    for size, S in lg._subset_sums(regions):
        oracle += (-1) ** (n - size) * lg.covolume_grid_oracle(S, args.grid_N)
    report = {"mixed": rational(e), "grid_oracle": rational(oracle), "grid_N": args.grid_N}
    return report, None, None


def cmd_inter(args):
    objs = _inputs(args, (mi.MonomialIdeal, gs.GradedSystem))
    systems = [_as_system(o) for o in objs]
    value = val.intersection_number(systems, args.chain)
    return {"intersection": rational(value)}, None, None


COMMANDS = {
    "mult": cmd_mult,
    "mj": cmd_mj,
    "els": cmd_els,
    "kw": cmd_kw,
    "tame": cmd_tame,
    "veq": cmd_veq,
    "mixed": cmd_mixed,
    "inter": cmd_inter,
}


def _onoff(s):
    if s not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return s == "on"


def build_parser():
    p = argparse.ArgumentParser(prog="newton-mult", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"newton-mult {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--in", dest="inputs", action="append", metavar="FILE")
        sp.add_argument("--builtin", action="append", choices=["kw1", "m-powers"])
        sp.add_argument("--chain", default="1:2:6")
        sp.add_argument("--weights-sum", type=int, default=5)
        sp.add_argument("--grid-N", type=int, default=400)
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--out")
        sp.add_argument("--ceil-index", type=_onoff, default=False)
        sp.add_argument("--strict", type=_onoff, default=False)
        if name == "mj":
            sp.add_argument("--c", type=Fraction)
        if name == "kw":
            sp.add_argument("--C-grid", default="1,2,3")
            sp.add_argument("--D-max", type=Fraction, default=Fraction(3))
            sp.add_argument("--m-range", default="1:40")
        if name == "tame":
            sp.add_argument("--m-range", default="1:30")
    return p


def _config(args):
    cfg = {
        "chain": args.chain,
        "weights_sum": args.weights_sum,
        "grid_N": args.grid_N,
        "format": args.format,
        "ceil_index": args.ceil_index,
        "strict": args.strict,
        "inputs": list(args.inputs or []),
        "builtin": list(args.builtin or []),
    }
    for extra in ("c", "C_grid", "D_max", "m_range"):
        if hasattr(args, extra):
            v = getattr(args, extra)
            cfg[extra] = str(v) if isinstance(v, Fraction) else v
    return cfg


def _render(args, report, rows):
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(rows)
        return buf.getvalue()
    doc = {
        "meta": {"tool": "newton-mult", "version": __version__, "command": args.command, "config": _config(args)},
        "result": report,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    try:
        cfg_chain = args.chain
        args.chain = parse_chain(cfg_chain)
        if args.grid_N < 10:
            raise SchemaError("--grid-N must be at least 10")
        if hasattr(args, "m_range"):
            args.m_range_spec = args.m_range
            args.m_range = parse_range(args.m_range)
        report, rows, problem = COMMANDS[args.command](args)
        if args.format == "csv" and rows is None:
            raise SchemaError(f"{args.command} has no tabular output; use --format json")
    except SchemaError as exc:
        print(f"newton-mult: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except Inconclusive as exc:
        print(f"newton-mult: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (mi.IdealError, lg.GeometryError, gs.GradedSystemError, val.ValuationError) as exc:
        print(f"newton-mult: {exc}", file=sys.stderr)
        return EXIT_MATH
    args.chain = cfg_chain
    if hasattr(args, "m_range_spec"):
        args.m_range = args.m_range_spec
        del args.m_range_spec
    text = _render(args, report, rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if problem is not None:
        print(f"newton-mult: note: {problem}", file=sys.stderr)
        if args.strict:
            return EXIT_INCONCLUSIVE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
