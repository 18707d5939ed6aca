"""Command-line front end: JSON in, JSON (and optional CSV) reports out.

Exit codes: 0 when every check passes, 1 on an identity failure, 2 on a
usage or schema error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from .coeffs import frac, fstr
from .forms import (
    SymbolForm,
    cosphere_integral,
    exterior_derivative,
    residue_form,
    stokes_boundary,
    wedge_star,
)
from .generate import random_form, random_symbol
from .holo import (
    complex_residue_identity_defect,
    laurent_cutoff_integral,
    pole_set,
    regularized_integral,
    riesz_family,
)
from .quadrature import QuadratureError
from .regint import (
    finite_part_integral,
    ibp_defect,
    residue_density_exact,
    translated_cutoff_integral,
    wodzicki_residue,
)
from .star import star
from .suites import SUITES, Report, RunConfig, run_suite, suite_cochain
from .symbols import ClassicalSymbol, SymbolDomainError, translate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class SchemaError(ValueError):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _build(path, data, builder):
    try:
        return builder(data)
    except KeyError as exc:
        raise SchemaError(f"{path}: missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def parse_symbol(path):
    """Read a symbol JSON file; schema problems raise SchemaError with the field at fault."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return _build(path, data, ClassicalSymbol.from_dict)


def parse_form(path):
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return _build(path, data, SymbolForm.from_dict)


def parse_item(path):
    """A form if the file has a ``degree`` field, otherwise a symbol."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    builder = SymbolForm.from_dict if "degree" in data else ClassicalSymbol.from_dict
    return _build(path, data, builder)


def _z(v):
    v = complex(v)
    return [v.real, v.imag]


def _config(args):
    return RunConfig(
        dim=args.dim, K=args.k, tol=args.tol, seed=args.seed, lam=args.lam,
        trials=getattr(args, "trials", None), quad_tol=args.quad_tol,
        max_subdiv=args.max_subdiv, nodes=args.nodes)


# ---------------------------------------------------------------------------
# subcommands; each returns a Report


def cmd_residue(args, cfg):
    item = parse_item(args.file)
    rep = Report("residue", cfg.to_dict())
    if isinstance(item, SymbolForm):
        value = residue_form(item, cfg.spec)
        rep.extra = {"residue": _z(value), "kind": "form"}
    else:
        value, scale = wodzicki_residue(item, cfg.spec, with_scale=True)
        dens = residue_density_exact(item)
        rep.extra = {"residue": _z(value), "scale": scale, "kind": "symbol",
                     "density_pi_power": dens.pi_power,
                     "density": [{"x": list(a), "window": list(wp), "coeff": str(c)}
                                 for (a, wp), c in sorted(dens.coeffs.items())]}
    return rep


def cmd_fp(args, cfg):
    sigma = parse_symbol(args.file)
    res = finite_part_integral(sigma, cfg.lam, cfg.spec)
    rep = Report("fp", cfg.to_dict())
    rep.extra = res.to_dict()
    return rep


def cmd_star(args, cfg):
    a, b = parse_symbol(args.a), parse_symbol(args.b)
    K = cfg.K if cfg.K is not None else 2
    rep = Report("star", cfg.to_dict())
    rep.extra = {"K": K, "product": star(a, b, K).to_dict()}
    return rep


def cmd_d(args, cfg):
    item = parse_item(args.file)
    if isinstance(item, ClassicalSymbol):
        item = SymbolForm.from_symbol(item)
    rep = Report("d", cfg.to_dict())
    rep.extra = {"form": exterior_derivative(item).to_dict()}
    return rep


def cmd_wedge(args, cfg):
    a, b = parse_item(args.a), parse_item(args.b)
    a = SymbolForm.from_symbol(a) if isinstance(a, ClassicalSymbol) else a
    b = SymbolForm.from_symbol(b) if isinstance(b, ClassicalSymbol) else b
    K = cfg.K if cfg.K is not None else 2
    rep = Report("wedge", cfg.to_dict())
    rep.extra = {"K": K, "form": wedge_star(a, b, K).to_dict()}
    return rep


def cmd_stokes(args, cfg):
    beta = parse_form(args.file)
    defect, boundary = stokes_boundary(beta, cfg.lam, cfg.spec)
    rep = Report("stokes", cfg.to_dict())
    rep.add("cutoff(d beta) - cosphere(beta)", defect - boundary, cfg.tol,
            defect=complex(defect), boundary=complex(boundary))
    if beta.order.denominator != 1:
        rep.add("non-integer order: cutoff(d beta)", defect, cfg.tol)
    return rep


def cmd_ibp(args, cfg):
    sigma = parse_symbol(args.file)
    rep = Report("ibp", cfg.to_dict())
    for i in ([args.axis] if args.axis is not None else range(sigma.dim)):
        value, flux = ibp_defect(sigma, i, cfg.spec)
        rep.add(f"axis={i} cutoff(d sigma) - flux", value - flux, cfg.tol,
                value=complex(value), flux=complex(flux))
        if sigma.order.denominator != 1:
            rep.add(f"axis={i} non-integer order", value, cfg.tol)
    return rep


def cmd_translate(args, cfg):
    sigma = parse_symbol(args.file)
    eta = tuple(frac(e) for e in args.eta.split(","))
    if len(eta) != sigma.dim:
        raise SchemaError(f"--eta needs {sigma.dim} components")
    ts = translate(sigma, eta, args.depth, args.radius)
    shifted, err = translated_cutoff_integral(ts)
    base = finite_part_integral(sigma, 1.0, cfg.spec).finite_part
    rep = Report("translate", cfg.to_dict())
    rep.extra = {"eta": [fstr(e) for e in eta], "depth": args.depth, "radius": ts.radius,
                 "tail_estimate": err}
    if sigma.order.denominator != 1:
        rep.add("translation defect", shifted - base, max(cfg.tol, 1e-7),
                shifted=complex(shifted), base=complex(base))
    else:
        rep.extra.update(shifted=_z(shifted), base=_z(base), defect=_z(shifted - base))
    return rep


def cmd_holo_residue(args, cfg):
    item = parse_item(args.file)
    H = tuple(frac(h) for h in args.H.split(","))
    fam = riesz_family(item, H)
    germ = laurent_cutoff_integral(fam, frac(args.z0), args.jet, cfg.spec)
    rep = Report("holo-residue", cfg.to_dict())
    rep.extra = {"germ": germ.to_dict(), "poles": [fstr(p) for p in pole_set(fam)]}
    if frac(args.z0) == 0:
        lhs, rhs, defect = complex_residue_identity_defect(item, H, cfg.spec)
        rep.add("Res_{z=0} + res / alpha'(0)", defect, 1e-9, germ_residue=lhs, expected=rhs)
    return rep


def cmd_reg_int(args, cfg):
    item = parse_item(args.file)
    H = tuple(frac(h) for h in args.H.split(","))
    rep = Report("reg-int", cfg.to_dict())
    rep.extra = {"regularized": _z(regularized_integral(item, H, cfg.spec))}
    return rep


_COCHAIN_IDENTITIES = {
    "stokes-res": ("stokes-res", None),
    "trace": ("trace", None),
    "theta-ratio": ("theta-ratio", None),
    "b-star": ("cochain", "b-star"),
    "b0-cutoff": ("cochain", "b0-cutoff"),
    "bB-phi": ("cochain", "bB-phi"),
    "B2": ("cochain", "B2"),
    "cyclic": ("cochain", "cyclic"),
    "unit": ("cochain", "unit"),
}


def cmd_cochain(args, cfg):
    cfg.dim = args.n
    suite, sub = _COCHAIN_IDENTITIES[args.identity]
    if sub is None:
        return run_suite(suite, cfg)
    t0 = time.perf_counter()
    rep = suite_cochain(cfg, [sub])
    rep.suite = f"cochain:{sub}"
    rep.timing = {"seconds": time.perf_counter() - t0}
    return rep


def cmd_gen(args, cfg):
    order = frac(args.order)
    if args.degree is None:
        obj = random_symbol(cfg.dim, order, args.depth, args.max_poly_degree, seed=cfg.seed)
    else:
        obj = random_form(cfg.dim, args.degree, order, args.depth, seed=cfg.seed,
                          max_poly_degree=args.max_poly_degree)
    rep = Report("gen", cfg.to_dict())
    rep.extra = {"object": obj.to_dict()}
    return rep


def cmd_suite(args, cfg):
    if args.name not in SUITES:
        raise SchemaError(f"unknown suite {args.name!r}; known: {', '.join(SUITES)}")
    return run_suite(args.name, cfg)


# ---------------------------------------------------------------------------


_GLOBAL_FLAGS = [
    (("--dim",), dict(type=int, default=1)),
    (("--k",), dict(type=int, default=None, help="star-product truncation depth")),
    (("--tol",), dict(type=float, default=1e-8, help="identity tolerance")),
    (("--seed",), dict(type=int, default=42)),
    (("--lambda",), dict(dest="lam", type=float, default=1.0, help="reference radius")),
    (("--quad-tol",), dict(type=float, default=1e-13, help="quadrature tolerance")),
    (("--max-subdiv",), dict(type=int, default=4000)),
    (("--nodes",), dict(type=int, default=20)),
    (("--json-out",), dict(default=None, help="write the report here ('-' for stdout)")),
    (("--csv-out",), dict(default=None, help="write the check table as CSV")),
    (("--quiet",), dict(action="store_true")),
]


def _add_global_flags(parser, suppress):
    for names, kw in _GLOBAL_FLAGS:
        kw = dict(kw)
        if suppress:
            # after the subcommand: only override when given
            kw["default"] = argparse.SUPPRESS
        parser.add_argument(*names, **kw)


def build_parser():
    p = argparse.ArgumentParser(prog="symcalc", description=__doc__.splitlines()[0])
    _add_global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        s = sub.add_parser(name, help=help_)
        _add_global_flags(s, suppress=True)
        return s

    def one(name, fn, help_):
        s = add(name, help_)
        s.add_argument("file")
        s.set_defaults(fn=fn)
        return s

    one("residue", cmd_residue, "Wodzicki residue of a symbol or top-degree form")
    one("fp", cmd_fp, "cut-off integral with all channels")
    s = add("star", "truncated star product of two symbols")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=cmd_star)
    one("d", cmd_d, "exterior derivative")
    s = add("wedge", "star-wedge product of two forms")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=cmd_wedge)
    one("stokes", cmd_stokes, "cut-off Stokes defect against the cosphere boundary term")
    s = one("ibp", cmd_ibp, "integration by parts in xi")
    s.add_argument("--axis", type=int, default=None)
    s = one("translate", cmd_translate, "translation defect xi -> xi + eta")
    s.add_argument("--eta", default="1/2")
    s.add_argument("--depth", type=int, default=6)
    s.add_argument("--radius", type=float, default=None)
    s = one("holo-residue", cmd_holo_residue, "Laurent germ of the Riesz-regularised integral")
    s.add_argument("--jet", type=int, default=3)
    s.add_argument("--z0", default="0")
    s.add_argument("--H", default="1", help="jet of H at 0, comma separated")
    s = one("reg-int", cmd_reg_int, "regularised integral (finite part at z = 0)")
    s.add_argument("--H", default="1")
    s = add("cochain", "cochain identity checks")
    s.add_argument("--identity", required=True, choices=sorted(_COCHAIN_IDENTITIES))
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--trials", type=int, default=None)
    s.set_defaults(fn=cmd_cochain)
    s = add("gen", "seeded random symbol or form")
    s.add_argument("--order", default="0")
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--max-poly-degree", type=int, default=2)
    s.add_argument("--degree", type=int, default=None, help="emit a form of this degree")
    s.set_defaults(fn=cmd_gen)
    s = add("suite", "run a named identity suite")
    s.add_argument("name")
    s.add_argument("--trials", type=int, default=None)
    s.set_defaults(fn=cmd_suite)
    return p


def _write_csv(path, rep):
    keys = ["name", "residual", "budget", "pass"]
    fh = sys.stdout if path == "-" else open(path, "w", newline="")
    try:
        w = csv.writer(fh)
        w.writerow(keys)
        for c in rep.checks:
            w.writerow([c[k] for k in keys])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _summary(rep, show_extra=True):
    lines = []
    for c in rep.checks:
        lines.append(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}  "
                     f"residual={c['residual']:.3e}  budget={c['budget']:.3e}")
    if not rep.checks:
        if show_extra:
            lines.append(json.dumps(rep.extra, indent=1, default=str))
        lines.append(f"{rep.suite}: done")
        return "\n".join(lines)
    status = "all checks passed" if rep.passed else "identity failure"
    lines.append(f"{rep.suite}: {status} ({len(rep.checks)} checks)")
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.dim < 1:
            parser.error("--dim must be positive")
    except SystemExit as exc:
        return exc.code
    cfg = _config(args)
    try:
        rep = args.fn(args, cfg)
    except (SchemaError, SymbolDomainError, QuadratureError, ValueError, IndexError) as exc:
        print(f"symcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json_out:
        # gen emits the bare object so that it can be fed to other subcommands
        out = rep.extra["object"] if args.command == "gen" else rep.to_dict()
        text = json.dumps(out, indent=1, default=str)
        if args.json_out == "-":
            print(text)
        else:
            with open(args.json_out, "w") as fh:
                fh.write(text + "\n")
    if args.csv_out:
        _write_csv(args.csv_out, rep)
    if not args.quiet and args.json_out != "-":
        print(_summary(rep, show_extra=not args.json_out))
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
