"""Seeded identity suites: each returns a report with one entry per check.

A check records the residual of an identity, the budget it is compared
against and the verdict.  Reports are deterministic given the configuration;
wall-clock timing is kept in a separate field.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import log

import numpy as np

from .coeffs import fstr
from .cochains import (
    CANDIDATE_CONSTANTS,
    Cochain,
    cosphere_cochain,
    hochschild_b,
    make_cochain,
    operator_B,
    operator_B0,
    residue_cochain,
    theta_ratio_experiment,
)
from .forms import SymbolForm, exterior_derivative, residue_form, stokes_boundary
from .generate import random_form, random_order, random_symbol
from .holo import (
    complex_residue_identity_defect,
    laurent_cutoff_integral,
    meromorphic_stokes_defect,
    riesz_family,
)
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .regint import (
    cutoff_integral,
    finite_part_density,
    finite_part_integral,
    residue_density,
    residue_density_exact,
    sphere_flux,
    translation_defect,
    wodzicki_residue,
)
from .star import commutator_star, residue_truncation_depth, star
from .symbols import ClassicalSymbol


@dataclass
class RunConfig:
    dim: int = 1
    K: int | None = None
    tol: float = 1e-8
    seed: int = 42
    lam: float = 2.0
    trials: int | None = None
    quad_tol: float = 1e-13
    max_subdiv: int = 4000
    nodes: int = 20

    @property
    def spec(self):
        return QuadratureSpec(self.quad_tol, self.max_subdiv, self.nodes)

    def to_dict(self):
        return asdict(self)


@dataclass
class Report:
    suite: str
    config: dict
    checks: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)

    def add(self, name, residual, budget, **detail):
        residual = float(abs(residual))
        budget = float(budget)
        entry = {"name": name, "residual": residual, "budget": budget,
                 "pass": bool(residual <= budget)}
        for k, v in detail.items():
            entry[k] = _jsonable(v)
        self.checks.append(entry)
        return entry["pass"]

    def payload(self):
        """Deterministic part of the report (everything except timing)."""
        return {"suite": self.suite, "config": self.config, "passed": self.passed,
                "checks": self.checks, "extra": _jsonable(self.extra)}

    def to_dict(self):
        out = self.payload()
        out["timing"] = self.timing
        return out


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.complexfloating):
        return [float(v.real), float(v.imag)]
    if isinstance(v, Fraction):
        return fstr(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _n(cfg, default):
    return cfg.trials if cfg.trials is not None else default


# ---------------------------------------------------------------------------
# 1. res(d beta) = 0


def suite_stokes_res(cfg):
    rep = Report("stokes-res", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    for n, count in ((1, _n(cfg, 50)), (2, max(1, _n(cfg, 50) // 5))):
        for t in range(count):
            order = random_order(rng, integer=rng.random() < 0.7, low=0, high=1)
            beta = random_form(n, 2 * n - 1, order, depth=2, seed=rng)
            dbeta = exterior_derivative(beta)
            val, scale = wodzicki_residue(dbeta.top_coefficient(), cfg.spec, with_scale=True)
            rep.add(f"n={n} trial={t} order={fstr(order)}", val, cfg.tol * (1 + scale),
                    value=complex(val))
    return rep


# ---------------------------------------------------------------------------
# 2. trace property


def suite_trace(cfg):
    rep = Report("trace", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    total = _n(cfg, 30)
    for t in range(total):
        n = 1 if t < (2 * total) // 3 else 2
        m = random_order(rng, integer=rng.random() < 0.5, low=-1, high=1)
        m2 = Fraction(int(rng.integers(-n, 2))) - m
        a = random_symbol(n, m, 2, seed=rng)
        b = random_symbol(n, m2, 2, seed=rng)
        K = cfg.K if cfg.K is not None else residue_truncation_depth(m, m2, n)
        comm = commutator_star(a, b, K, min_degree=-n, drop_compact=True)
        val, scale = wodzicki_residue(comm, cfg.spec, with_scale=True)
        # computed budget, itself capped by the tolerance
        budget = min(1e-12 * (1 + scale), cfg.tol)
        one_sided = wodzicki_residue(star(a, b, K, min_degree=-n, drop_compact=True), cfg.spec)
        rep.add(f"n={n} trial={t} orders=({fstr(m)},{fstr(m2)}) K={K}", val, budget,
                value=complex(val), res_product=complex(one_sided))
    return rep


# ---------------------------------------------------------------------------
# 3. log coefficient = residue density


def _symbol_with_residue(rng, n):
    order = Fraction(int(rng.integers(-n, 2)))
    depth = int(order + n) + 1
    return random_symbol(n, order, depth, seed=rng)


def suite_fp_log(cfg):
    rep = Report("fp-log", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    for t in range(_n(cfg, 20)):
        n = 1 if t % 4 else 2
        sigma = _symbol_with_residue(rng, n)
        exact = residue_density_exact(sigma)
        xs = rng.uniform(-0.95, 0.95, size=(20, n))
        mismatches = 0
        worst = 0.0
        for x in xs:
            fp = finite_part_density(sigma, x, spec=cfg.spec)
            if fp.exact_log != exact:
                mismatches += 1
            ref = residue_density(sigma, x)
            worst = max(worst, abs(fp.log_coefficient - ref) / (1 + abs(ref)))
        rep.add(f"n={n} symbol={t} exact", mismatches, 0, samples=len(xs))
        rep.add(f"n={n} symbol={t} numeric", worst, 1e-13, samples=len(xs))
    return rep


# ---------------------------------------------------------------------------
# 4. rescaling


def suite_rescale(cfg):
    rep = Report("rescale", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    count = _n(cfg, 10)
    for integer in (False, True):
        for t in range(count):
            n = 1 if t % 3 else 2
            if integer:
                sigma = _symbol_with_residue(rng, n)
            else:
                sigma = random_symbol(n, random_order(rng, False, -2, 1), 2, seed=rng)
            base = finite_part_integral(sigma, 1.0, cfg.spec)
            for lam in (0.5, 2.0):
                shifted = finite_part_integral(sigma, lam, cfg.spec)
                diff = shifted.finite_part - base.finite_part
                if integer:
                    res = wodzicki_residue(sigma, cfg.spec)
                    rep.add(f"integer n={n} trial={t} lambda={lam}", diff - res * log(lam),
                            cfg.tol, shift=complex(diff), residue=complex(res))
                else:
                    rep.add(f"non-integer n={n} trial={t} lambda={lam}", diff, 1e-10,
                            shift=complex(diff))
    return rep


# ---------------------------------------------------------------------------
# 5. cut-off Stokes dichotomy


def suite_stokes_cutoff(cfg):
    rep = Report("stokes-cutoff", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    count = _n(cfg, 20)
    for integer in (False, True):
        for t in range(count):
            n = 1 if t % 4 else 2
            if integer:
                order = Fraction(int(rng.integers(0, 2)))
                depth = int(order) + 1
            else:
                order = random_order(rng, False, -1, 1)
                depth = 2
            beta = random_form(n, 2 * n - 1, order, depth, seed=rng)
            defect, boundary = stokes_boundary(beta, spec=cfg.spec)
            label = "integer" if integer else "non-integer"
            if integer:
                rep.add(f"{label} n={n} trial={t}", defect - boundary, cfg.tol,
                        defect=complex(defect), boundary=complex(boundary))
            else:
                rep.add(f"{label} n={n} trial={t}", abs(defect) + abs(boundary), cfg.tol,
                        defect=complex(defect), boundary=complex(boundary))
    return rep


# ---------------------------------------------------------------------------
# 6. IBP and translation for non-integer orders


def suite_ibp_translate(cfg):
    rep = Report("ibp-translate", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    count = _n(cfg, 10)
    for t in range(count):
        n = 1 if t % 5 else 2
        sigma = random_symbol(n, random_order(rng, False, -2, 1), 2, seed=rng)
        i = int(rng.integers(n))
        val = cutoff_integral(sigma.partial_xi(i), spec=cfg.spec)
        rep.add(f"ibp n={n} trial={t} axis={i} order={fstr(sigma.order)}", val, cfg.tol,
                value=complex(val), boundary=complex(sphere_flux(sigma, i, cfg.spec)))
    for t in range(count):
        sigma = random_symbol(1, random_order(rng, False, -2, 0), 2, seed=rng)
        defect = translation_defect(sigma, (Fraction(1, 2),), 6)
        rep.add(f"translate n=1 trial={t} order={fstr(sigma.order)}", defect, 1e-7,
                value=complex(defect))
    return rep


# ---------------------------------------------------------------------------
# 7. complex residue


def suite_complex_residue(cfg):
    rep = Report("complex-residue", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    count = _n(cfg, 20)
    for t in range(count):
        n = 1 if t % 2 else 2
        sigma = _symbol_with_residue(rng, n)
        H = (1, Fraction(int(rng.integers(-3, 4)), 2), Fraction(int(rng.integers(-3, 4)), 3))
        lhs, rhs, defect = complex_residue_identity_defect(sigma, H, cfg.spec)
        rep.add(f"symbol n={n} trial={t}", defect, 1e-9, germ_residue=lhs, wodzicki=rhs)
    for t in range(max(1, count // 2)):
        n = 1 if t % 2 else 2
        order = Fraction(int(rng.integers(0, 2)))
        omega = random_form(n, 2 * n, order, int(order) + 1, seed=rng)
        lhs, rhs, defect = complex_residue_identity_defect(omega, (1, 1), cfg.spec)
        rep.add(f"form n={n} trial={t}", defect, 1e-9, germ_residue=lhs, wodzicki=rhs)
    return rep


# ---------------------------------------------------------------------------
# 8. meromorphic Stokes


def plain_defect_example():
    """n = 1, beta = w chi xi/|xi| dx: integer order with a non-zero cut-off Stokes defect."""
    sigma = ClassicalSymbol.from_monomials(1, [(1, (0,), (1,), -1)], windowed=True)
    return SymbolForm.monomial(sigma, dx=[0])


def suite_mero_stokes(cfg, jet_len=3):
    rep = Report("mero-stokes", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    cases = [("example", plain_defect_example())]
    for t in range(_n(cfg, 10)):
        n = 1 if t % 3 else 2
        integer = t % 2 == 0
        order = Fraction(int(rng.integers(0, 2))) if integer else random_order(rng, False, -1, 1)
        depth = int(order) + 1 if integer else 2
        cases.append((f"n={n} trial={t}", random_form(n, 2 * n - 1, order, depth, seed=rng)))
    for label, beta in cases:
        germ = meromorphic_stokes_defect(beta, jet_len, spec=cfg.spec)
        defect, boundary = stokes_boundary(beta, spec=cfg.spec)
        worst = germ.max_abs()
        rep.add(f"{label} order={fstr(beta.order)}", worst, cfg.tol,
                plain_defect=complex(defect), boundary=complex(boundary))
        # the plain cut-off of d(beta) differs from the regularised value by the boundary term
        rep.add(f"{label} regularised-vs-plain", (defect - germ[0]) - boundary, cfg.tol)
    return rep


# ---------------------------------------------------------------------------
# 9. cochain identities (n = 1)


def symbol_tuple(rng, n, length, total):
    """Symbols whose orders in {-1/2, 0, 1/2, 1} add up to ``total``."""
    while True:
        orders = [Fraction(int(rng.integers(-1, 3)), 2) for _ in range(length - 1)]
        last = Fraction(total) - sum(orders)
        if -1 <= last <= 1:
            break
    orders.append(last)
    return tuple(random_symbol(n, m, 2, seed=rng) for m in orders)


def _generic_cochain(arity, seed):
    """A non-normalised multilinear functional: product of point evaluations."""
    rng = np.random.default_rng(seed)
    pts = [(rng.uniform(-0.9, 0.9, 1), rng.uniform(0.6, 3.0, 1) * rng.choice([-1, 1])) for _ in range(arity)]

    from .cochains import CochainEval

    def fn(args):
        val = 1 + 0j
        for (x, xi), a in zip(pts, args):
            val *= complex(a.evaluate(x, xi))
        return CochainEval(arity, args, "eval", 0, val, 1e-13 * (1 + abs(val)))

    return Cochain(fn, arity, f"eval{arity - 1}")


def suite_cochain(cfg, identities=None):
    rep = Report("cochain", cfg.to_dict())
    rng = np.random.default_rng(cfg.seed)
    n = cfg.dim if cfg.dim in (1, 2) else 1
    trials = _n(cfg, 10)
    wanted = set(identities or ["b0-cutoff", "b-star", "B2", "cyclic", "unit", "bB-phi"])
    one = ClassicalSymbol.constant(n, 1)
    K = cfg.K
    for t in range(trials):
        if "b0-cutoff" in wanted:
            integer = t % 2 == 0
            total = 0 if integer else Fraction(1, 2)
            args = symbol_tuple(rng, n, 2 * n, total)
            Kc = 2 if K is None else K
            chi = make_cochain("cutoff", 2 * n + 1, Kc, cfg.spec)
            lhs = operator_B0(chi)(*args)
            rhs = cosphere_cochain(args, Kc, cfg.spec)
            rep.add(f"B0 cutoff = cosphere trial={t} total={fstr(total)}", lhs.value - rhs.value,
                    cfg.tol, B0=lhs.value, cosphere=rhs.value)
        if "b-star" in wanted:
            args = symbol_tuple(rng, n, 2 * n + 2, 0)
            Kb = residue_truncation_depth(0, 0, n) + 2 if K is None else K
            ev = hochschild_b(make_cochain("res", 2 * n + 1, Kb, cfg.spec), Kb)(*args)
            rep.add(f"b_star chi_res trial={t}", ev.value, ev.error_budget)
        if "B2" in wanted:
            chi = make_cochain("cutoff", 2 * n + 1, 2 if K is None else K, cfg.spec)
            args = symbol_tuple(rng, n, 2 * n - 1, 0)
            ev = operator_B(operator_B(chi))(*args)
            rep.add(f"B^2 cutoff trial={t}", ev.value, ev.error_budget + 1e-12)
            gen = _generic_cochain(4, cfg.seed + t)
            args = symbol_tuple(rng, n, 2, 0)
            ev = operator_B(operator_B(gen))(*args)
            rep.add(f"B^2 generic trial={t}", ev.value, ev.error_budget + 1e-12)
        if "cyclic" in wanted:
            args = symbol_tuple(rng, n, 2 * n + 1, int(rng.integers(0, 2)))
            a = residue_cochain(args, K, cfg.spec)
            b = residue_cochain(args[-1:] + args[:-1], K, cfg.spec)
            rep.add(f"cyclicity chi_res trial={t}", a.value - b.value,
                    a.error_budget + b.error_budget, value=a.value)
        if "unit" in wanted:
            args = (one,) + symbol_tuple(rng, n, 2 * n, int(rng.integers(0, 2)))
            ev = residue_cochain(args, K, cfg.spec)
            rep.add(f"chi_res(1, ...) trial={t}", ev.value, ev.error_budget)
        if "bB-phi" in wanted:
            args = symbol_tuple(rng, n, 4, 2)
            Kp = 4 if K is None else K
            phi2 = make_cochain("phi", 3, Kp, cfg.spec)
            phi4 = make_cochain("phi", 5, Kp, cfg.spec)
            b = hochschild_b(phi2, Kp)(*args)
            B = operator_B(phi4)(*args)
            bbar = hochschild_b(phi2, Kp, product="mixed")(*args)
            rep.add(f"b_bar phi2 trial={t}", bbar.value, bbar.error_budget)
            rep.add(f"b phi2 + B phi4 / 2 trial={t}", b.value + 0.5 * B.value,
                    b.error_budget + 0.5 * B.error_budget, b_phi2=b.value, B_phi4=B.value)
    return rep


# ---------------------------------------------------------------------------
# 10. theta ratio


def suite_theta_ratio(cfg):
    rep = Report("theta-ratio", cfg.to_dict())
    n = cfg.dim if cfg.dim in (1, 2) else 1
    out = theta_ratio_experiment(n, _n(cfg, 12), cfg.seed, spec=cfg.spec)
    admissible = [r for r in out["rows"] if r["admissible"]]
    rep.add("admissible trials >= 10", max(0, 10 - len(admissible)), 0)
    spread = out["relative_spread"]
    rep.add("relative spread", spread if spread is not None else float("inf"), 1e-6)
    rep.extra = {"constant": out["constant"], "candidates": out["candidates"],
                 "ratios": [r["ratio"] for r in admissible]}
    return rep


SUITES = {
    "stokes-res": suite_stokes_res,
    "trace": suite_trace,
    "fp-log": suite_fp_log,
    "rescale": suite_rescale,
    "stokes-cutoff": suite_stokes_cutoff,
    "ibp-translate": suite_ibp_translate,
    "complex-residue": suite_complex_residue,
    "mero-stokes": suite_mero_stokes,
    "cochain": suite_cochain,
    "theta-ratio": suite_theta_ratio,
}


def run_suite(name, config=None):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    cfg = config or RunConfig()
    t0 = time.perf_counter()
    rep = SUITES[name](cfg)
    rep.timing = {"seconds": time.perf_counter() - t0}
    return rep
