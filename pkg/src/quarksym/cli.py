"""Command-line entry point: ``quarksym verify | sweep | orbits | charnum | magoo``.

Every command writes a JSON report (config, version tag, tolerances, verdicts)
and, where tabular data exist, a CSV file into ``--out``.  Figures are written
next to the CSV files unless ``--no-figures`` is given.

Exit codes: 0 when every verdict is PASS, 1 when any verdict is FAIL, 2 for a
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations_with_replacement
from pathlib import Path

import numpy as np

from . import __version__
from .irreps import (
    CACHE_ENV,
    build_irrep,
    haar_bank,
    gt_patterns,
    irrep_dim,
    ladder_trace_identity,
    mu_n,
    rho_word,
    vplus_power_norm_sq,
)
from .magoo import (
    band_orbits,
    chain_from_orbits,
    enumerate_integral_orbits,
    primitive_orbits,
    radial_chain,
    uniformity_sweep,
)
from .polyalg import PolyElement, chi, kaks_bracket, tau, tau_on_arc
from .sl3core import DIM, RationalOrbit, is_primitive, structure_constants
from .symbols import (
    BEREZIN,
    KINDS,
    OrbitBank,
    RaySpec,
    char_number_limit_check,
    fit_slope_band,
    poisson_diagnostics,
    rate_verdict,
    universal_berezin,
)
from .uea import (
    UeaElement,
    beta_at_weight,
    beta_d,
    commutator,
    cubic_casimir,
    generator,
    multiply,
    normal_order,
    normal_order_random,
    parse_uea,
    random_element,
    symmetrize,
    two_t3,
    two_u3,
)

log = logging.getLogger("quarksym")

TOLERANCES = {
    "dual_route_rel": 1e-8,
    "slope_lo": -1.3,
    "slope_hi": -0.7,
    "exact_floor": 1e-10,
    "bracket_abs": 1e-8,
    "charnum_gap": 0.05,
    "trace_rel": 1e-9,
    "mu_rel": 1e-8,
    "delta": 1e-8,
    "irrep_fidelity": 1e-10,
    "casimir_offdiag": 1e-10,
    "cubic_casimir_rel": 1e-8,
}

# default inputs for `sweep --deg d1,d2`, as 0-based generator words by degree
U_WORDS = {1: (0,), 2: (0, 3), 3: (0, 3, 1)}
V_WORDS = {1: (3,), 2: (1, 4), 3: (1, 4, 5)}

# the Eisenstein example: a reference listing to compare the enumeration against
EXAMPLE_RHO_SQ = 7267
EXAMPLE_LISTING = ((13, 78), (41, 57), (57, 41), (78, 13))

ORBIT_COLUMNS = ["level", "X", "Y", "ray_p1", "ray_q1", "norm", "r_sq", "arc_x", "arc_y", "chi"]
SWEEP_COLUMNS = ["orbit_p1", "orbit_q1", "s", "s_times_r", "prod_defect", "bracket_defect"]
CHARNUM_COLUMNS = ["n", "p", "b", "scaled", "gap"]
TRACE_COLUMNS = ["p", "n", "lhs", "rhs", "rel_residual", "mu_sq", "vplus_norm_sq", "mu_rel_residual"]


class ConfigError(ValueError):
    """Invalid command-line configuration (exit status 2)."""


# -- configuration ---------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    seed: int = 0
    sample_count: int = 512
    s_values: tuple = ()
    orbits: tuple = ()
    band: tuple | None = None
    max_norm: int | None = None
    degrees: tuple | None = None
    out_dir: str = "quarksym-report"
    figures: bool = True
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))
    options: dict = field(default_factory=dict)

    @property
    def s_min(self):
        return min(self.s_values) if self.s_values else None

    @property
    def s_max(self):
        return max(self.s_values) if self.s_values else None

    def validate(self) -> RunConfig:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.sample_count < 1:
            raise ConfigError("sample count must be positive")
        if any(int(s) != s or s < 1 for s in self.s_values):
            raise ConfigError("s values must be positive integers")
        for p, q in self.orbits:
            if not is_primitive(p, q):
                raise ConfigError(f"orbit ({p},{q}) is not a primitive non-negative pair")
        if self.band is not None:
            lo, hi = self.band
            if not 0 <= lo <= hi <= 1:
                raise ConfigError("band must satisfy 0 <= lo <= hi <= 1")
        if self.max_norm is not None and self.max_norm < 1:
            raise ConfigError("radius cutoff must be positive")
        if self.degrees is not None and any(d < 1 or d > 3 for d in self.degrees):
            raise ConfigError("degrees must lie in 1..3")
        unknown = set(self.tolerances) - set(TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["s_min"], d["s_max"] = self.s_min, self.s_max
        return d


def parse_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"expected 'p,q', got {text!r}") from exc
    return a, b


def parse_float_pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"expected 'lo,hi', got {text!r}") from exc
    return a, b


def parse_s_values(text: str) -> tuple:
    """``"2..16"`` (inclusive), ``"2..16:2"`` (with step) or ``"2,4,8"``."""
    try:
        if ".." in text:
            body, _, step = text.partition(":")
            lo, hi = (int(t) for t in body.split(".."))
            values = tuple(range(lo, hi + 1, int(step) if step else 1))
        else:
            values = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse s values {text!r}") from exc
    if not values:
        raise ConfigError(f"s range {text!r} is empty")
    return values


def parse_element(text: str) -> UeaElement:
    """``"e1*e4"`` (a word, normal ordered) or the canonical ``"(c)*e1*e4 + ..."``."""
    text = text.strip()
    try:
        if "(" in text:
            return parse_uea(text)
        word = [int(g.strip()[1:]) - 1 for g in text.split("*")]
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"cannot parse element {text!r}") from exc
    if any(not 0 <= j < DIM for j in word):
        raise ConfigError(f"generator index out of range in {text!r}")
    return normal_order(word)


def parse_tolerances(items) -> dict:
    tol = dict(TOLERANCES)
    for item in items or ():
        key, _, val = item.partition("=")
        if key not in TOLERANCES:
            raise ConfigError(f"unknown tolerance {key!r}")
        try:
            tol[key] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value {item!r}") from exc
    return tol


# -- report plumbing ---------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12e}"
    return "" if v is None else str(v)


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


class Report:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = Path(cfg.out_dir)
        self.verdicts: list[dict] = []
        self.payload: dict = {}
        self.files: list[str] = []

    def verdict(self, name: str, ok: bool, residual=None, **detail) -> bool:
        entry = {"name": name, "verdict": "PASS" if ok else "FAIL"}
        if residual is not None:
            entry["residual"] = residual
        entry.update(detail)
        self.verdicts.append(entry)
        log.info("%-40s %s", name, entry["verdict"])
        return ok

    @property
    def passed(self) -> bool:
        return all(v["verdict"] == "PASS" for v in self.verdicts)

    def write_text(self, name: str, text: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / name
        path.write_text(text)
        self.files.append(name)
        return path

    def figure(self, fn, name: str, *args, **kwargs):
        if not self.cfg.figures:
            return
        fn(self.out / name, *args, **kwargs)
        self.files.append(name)

    def finish(self) -> int:
        doc = {
            "tool": "quarksym",
            "version": __version__,
            "config": self.cfg.to_dict(),
            "tolerances": self.cfg.tolerances,
            "verdicts": self.verdicts,
            "overall": "PASS" if self.passed else "FAIL",
            **self.payload,
        }
        self.files.append(f"{self.cfg.command}.json")
        doc["files"] = sorted(set(self.files))
        self.out.mkdir(parents=True, exist_ok=True)
        (self.out / f"{self.cfg.command}.json").write_text(
            json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")
        for v in self.verdicts:
            extra = f"  residual={v['residual']:.3e}" if isinstance(v.get("residual"), float) else ""
            if isinstance(v.get("slope"), float):
                extra += f"  slope={v['slope']:.3f}" if math.isfinite(v["slope"]) else f"  ({v['status']})"
            print(f"{v['verdict']}  {v['name']}{extra}")
        print(f"overall: {doc['overall']}  (report in {self.out})")
        return 0 if self.passed else 1


# -- verify ------------------------------------------------------------------------

def _monomials(d: int):
    for combo in combinations_with_replacement(range(DIM), d):
        e = [0] * DIM
        for k in combo:
            e[k] += 1
        yield PolyElement({tuple(e): 1})


def verify_suites(rep: Report, opts: dict) -> None:
    cfg = rep.cfg
    tol = cfg.tolerances
    rng = random.Random(cfg.seed)

    # structure constants, optionally with one entry corrupted
    for tag in ("GT", "GellMann"):
        sc = structure_constants(tag)
        corrupt = opts.get("corrupt")
        if corrupt and tag == "GT":
            j, k, l = (c - 1 for c in corrupt)
            sc = sc.corrupted(j, k, l)
        bad = sc.jacobi_residual()
        rep.verdict(f"jacobi[{sc.tag}]", not bad, residual=sc.jacobi_max_residual(),
                    failing_triples=len(bad), checked=DIM ** 3)

    words = opts["words"]
    bad = 0
    for _ in range(words):
        w = [rng.randrange(DIM) for _ in range(rng.randint(0, 6))]
        if normal_order(w) != normal_order_random(w, rng):
            bad += 1
    rep.verdict("pbw_confluence", bad == 0, residual=float(bad), checked=words)

    bad = checked = 0
    for d in range(1, 5):
        for f in _monomials(d):
            checked += 1
            if beta_d(symmetrize(f), d) != f:
                bad += 1
    rep.verdict("symmetrization_right_inverse", bad == 0, residual=float(bad), checked=checked)

    pairs = opts["pairs"]
    bad_p = bad_b = 0
    for _ in range(pairs):
        u = random_element(rng, rng.randint(1, 3))
        v = random_element(rng, rng.randint(1, 3))
        du, dv = u.degree(), v.degree()
        if beta_d(multiply(u, v), du + dv) != beta_d(u, du) * beta_d(v, dv):
            bad_p += 1
        if beta_d(commutator(u, v), du + dv - 1) != kaks_bracket(beta_d(u, du), beta_d(v, dv)):
            bad_b += 1
    rep.verdict("beta_product_identity", bad_p == 0, residual=float(bad_p), checked=pairs)
    rep.verdict("beta_bracket_identity", bad_b == 0, residual=float(bad_b), checked=pairs)

    t = tau()
    bad = sum(1 for j in range(DIM) if not kaks_bracket(PolyElement({_unit(j): 1}), t).is_zero())
    rep.verdict("tau_invariance", bad == 0, residual=float(bad), checked=DIM)
    casimir = cubic_casimir()
    bad = sum(1 for j in range(DIM) if not commutator(generator(j), casimir).is_zero())
    rep.verdict("cubic_casimir_central", bad == 0, residual=float(bad), checked=DIM)

    bad = 0
    for p in range(4):
        for q in range(4):
            if (p, q) == (0, 0):
                continue
            if beta_at_weight(two_t3(), p, q) != p or beta_at_weight(two_u3(), p, q) != q:
                bad += 1
    rep.verdict("cartan_anchor_values", bad == 0, residual=float(bad), checked=15)
    chis = [chi(RationalOrbit(1, 0)), chi(RationalOrbit(0, 1)), chi(RationalOrbit(1, 1))]
    arc = [tau_on_arc(1.0, 0.0), tau_on_arc(0.0, 1.0), tau_on_arc(1 / math.sqrt(3), 1 / math.sqrt(3))]
    ok = chis == [2, -2, 0] and max(abs(a - b) for a, b in zip(arc, (2, -2, 0))) < 1e-12
    rep.verdict("tau_anchor_values", ok, residual=max(abs(a - b) for a, b in zip(arc, (2, -2, 0))),
                chi=[str(c) for c in chis])

    cap = opts["irrep_dim_cap"]
    worst_f = worst_c = 0.0
    count = 0
    for p in range(cap):
        for q in range(cap):
            if (p, q) == (0, 0) or irrep_dim(p, q) > cap:
                continue
            cert = build_irrep(p, q).certificate
            worst_f = max(worst_f, cert["bracket_fidelity"])
            worst_c = max(worst_c, cert["casimir_offdiag"])
            count += 1
    rep.verdict("irrep_bracket_fidelity", worst_f <= tol["irrep_fidelity"], residual=worst_f, checked=count)
    rep.verdict("irrep_casimir_scalar", worst_c <= tol["casimir_offdiag"], residual=worst_c, checked=count)
    bad = [p for p in range(1, 13)
           if not len(gt_patterns(p, 0)) == len(gt_patterns(0, p)) == (p + 1) * (p + 2) // 2]
    rep.verdict("pattern_counts", not bad, residual=float(len(bad)), checked=12)
    worst = 0.0
    for p, q in ((1, 0), (2, 1), (3, 1)):
        a = complex(np.trace(rho_word(build_irrep(p, q), casimir))) / irrep_dim(p, q)
        b = complex(np.trace(rho_word(build_irrep(q, p), casimir))) / irrep_dim(q, p)
        worst = max(worst, abs(a + b) / abs(a))
    rep.verdict("cubic_casimir_antisymmetry", worst <= tol["cubic_casimir_rel"], residual=worst)

    n_dual = opts["dual_samples"]
    worst = 0.0
    for ray in ((1, 0), (1, 1), (2, 1)):
        spec = RaySpec(RationalOrbit(*ray), BEREZIN, (1, 2, 3, 4))
        bank = haar_bank(cfg.seed + 1, n_dual)
        for i in range(n_dual):
            u = random_element(rng, 3)
            for s in spec.s_range:
                a, b = universal_berezin(u, spec, s, bank[i])
                worst = max(worst, abs(a - b) / max(1.0, abs(a), abs(b)))
    rep.verdict("dual_route_berezin", worst <= tol["dual_route_rel"], residual=worst,
                checked=3 * n_dual * 4)


def _unit(j: int) -> tuple:
    e = [0] * DIM
    e[j] = 1
    return tuple(e)


def cmd_verify(cfg: RunConfig) -> int:
    rep = Report(cfg)
    verify_suites(rep, cfg.options)
    return rep.finish()


# -- sweep -------------------------------------------------------------------------

def cmd_sweep(cfg: RunConfig) -> int:
    from .plotting import defect_figure

    tol = cfg.tolerances
    opts = cfg.options
    if opts.get("u"):
        u = parse_element(opts["u"])
    else:
        u = normal_order(U_WORDS[cfg.degrees[0]])
    if opts.get("v"):
        v = parse_element(opts["v"])
    else:
        v = normal_order(V_WORDS[cfg.degrees[1]])
    if max(u.degree(), v.degree()) > 3:
        raise ConfigError("sweep inputs are limited to degree 3")
    rep = Report(cfg)
    rows, tables = [], {}
    for p, q in cfg.orbits:
        orbit = RationalOrbit(p, q)
        bank = OrbitBank.build(orbit, cfg.seed, cfg.sample_count)
        table = poisson_diagnostics(u, v, RaySpec(orbit, opts["kind"], cfg.s_values), bank)
        tables[orbit.label] = table
        rows.extend(table.rows())
        for which, data in (("prod", table.prod_defect), ("bracket", table.bracket_defect)):
            status, slope = rate_verdict(cfg.s_values, data, tol["slope_lo"], tol["slope_hi"],
                                         tol["exact_floor"])
            _, err = fit_slope_band(cfg.s_values, data)
            band = None if math.isnan(err) else [slope - 1.96 * err, slope + 1.96 * err]
            rep.verdict(f"{which}_rate{orbit.label}", status != "FAIL", slope=slope,
                        band95=band, status=status, max_defect=float(np.max(data)))
        if u.degree() == 1 and v.degree() == 1:
            worst = float(np.max(table.bracket_defect))
            rep.verdict(f"degree1_bracket{orbit.label}", worst <= tol["bracket_abs"], residual=worst)
        rep.figure(defect_figure, f"sweep_{p}_{q}.png", cfg.s_values,
                   {"product": table.prod_defect, "bracket": table.bracket_defect},
                   title=f"orbit {orbit.label}, {opts['kind']}")
    rep.write_text("sweep.csv", csv_text(SWEEP_COLUMNS, rows))
    rep.payload["inputs"] = {"u": str(u), "v": str(v)}
    return rep.finish()


# -- orbits ------------------------------------------------------------------------

def _orbit_row(level, x, y):
    g = math.gcd(x, y)
    ray = RationalOrbit(x // g, y // g)
    c = chi(ray)
    return (level, x, y, ray.p1, ray.q1, x * x + x * y + y * y, _fraction_text(ray.r_sq),
            float(ray.xi.x), float(ray.xi.y), float(c))


def _fraction_text(f) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def cmd_orbits(cfg: RunConfig) -> int:
    from .plotting import arc_figure

    opts = cfg.options
    rep = Report(cfg)
    rows = []
    if opts.get("example"):
        sols = enumerate_integral_orbits(EXAMPLE_RHO_SQ).solutions
        rows = [_orbit_row(None, x, y) for x, y in sols]
        found, ref = set(sols), set(EXAMPLE_LISTING)
        rep.payload["example"] = {
            "rho_sq": EXAMPLE_RHO_SQ,
            "reference_listing": sorted(ref),
            "found": sorted(found),
            "missing_from_enumeration": sorted(ref - found),
            "not_in_reference": sorted(found - ref),
            "norm_check": {f"{x},{y}": x * x + x * y + y * y for x, y in sorted(found)},
        }
        rep.verdict("reference_listing_contained", ref <= found)
        rep.verdict("enumeration_equals_reference", found == ref,
                    extra=sorted(found - ref))
    elif opts.get("rho2") is not None:
        rows = [_orbit_row(None, x, y) for x, y in enumerate_integral_orbits(opts["rho2"]).solutions]
    elif opts.get("chain") is not None:
        chain = radial_chain(opts["chain"])
        seen = []
        for n, lev in enumerate(chain.levels, start=1):
            for o in lev:
                if o not in seen:
                    seen.append(o)
                    rows.append(_orbit_row(n, o.p1, o.q1))
        rep.payload["levels"] = [[o.label for o in lev] for lev in chain.levels]
    else:
        lo, hi = cfg.band if cfg.band is not None else (0.0, 1.0)
        orbits = band_orbits(lo, hi, cfg.max_norm or 40)
        chain = chain_from_orbits(orbits)
        for o in sorted(orbits, key=lambda o: (o.norm_int, o.p1, o.q1)):
            rows.append(_orbit_row(chain.insertion_level(o), o.p1, o.q1))
    rep.write_text("orbits.csv", csv_text(ORBIT_COLUMNS, rows))
    rep.payload["count"] = len(rows)
    rep.figure(arc_figure, "orbits.png", sorted({(r[7], r[8]) for r in rows}),
               title=f"{len(rows)} orbit rows")
    return rep.finish()


# -- charnum -----------------------------------------------------------------------

def cmd_charnum(cfg: RunConfig) -> int:
    from .plotting import charnum_figure

    opts = cfg.options
    tol = cfg.tolerances
    rep = Report(cfg)
    p_max, n_max = opts["p_max"], opts["n_max"]
    check = char_number_limit_check(p_max, n_max, tol["charnum_gap"])
    rows = []
    for row in check["rows"]:
        for c in row["columns"]:
            rows.append((row["n"], c["p"], c["b"], c["scaled"], c["gap"]))
        rep.verdict(f"limit_n{row['n']}_p{p_max}", row["verdict"] == "PASS",
                    residual=abs(row["gap_at_pmax"]))
    if opts.get("check_p"):
        strict = char_number_limit_check(opts["check_p"], n_max, tol["charnum_gap"])
        for row in strict["rows"]:
            rep.verdict(f"limit_n{row['n']}_p{opts['check_p']}", row["verdict"] == "PASS",
                        residual=abs(row["gap_at_pmax"]))
    rep.write_text("charnum.csv", csv_text(CHARNUM_COLUMNS, rows))

    trace_rows = []
    worst_t = worst_m = 0.0
    for p in range(1, opts["trace_p_max"] + 1):
        for n in range(1, min(p, n_max) + 1):
            lhs, rhs = ladder_trace_identity(p, n)
            rel = abs(lhs - rhs) / abs(rhs)
            mu_sq = mu_n(p, n) ** 2
            nsq = vplus_power_norm_sq(p, n)
            mrel = abs(nsq - mu_sq) / mu_sq
            worst_t, worst_m = max(worst_t, rel), max(worst_m, mrel)
            trace_rows.append((p, n, lhs, rhs, rel, mu_sq, nsq, mrel))
    rep.write_text("trace_identity.csv", csv_text(TRACE_COLUMNS, trace_rows))
    rep.verdict("trace_identity", worst_t <= tol["trace_rel"], residual=worst_t)
    rep.verdict("mu_normalization", worst_m <= tol["mu_rel"], residual=worst_m)
    rep.figure(charnum_figure, "charnum.png", check["rows"])
    return rep.finish()


# -- magoo -------------------------------------------------------------------------

def cmd_magoo(cfg: RunConfig) -> int:
    from .plotting import cutoff_figure, defect_figure

    opts = cfg.options
    tol = cfg.tolerances
    max_norm = cfg.max_norm or 40
    if cfg.band is not None:
        orbits = band_orbits(cfg.band[0], cfg.band[1], max_norm)
    else:
        orbits = primitive_orbits(max_norm)
    if len(orbits) < 2:
        raise ConfigError(f"the cutoff selects {len(orbits)} orbit(s); at least two are needed")
    u = parse_element(opts["u"])
    v = parse_element(opts["v"])
    profile_s = opts["profile_s"]
    if profile_s is None:
        profile_s = 8 if 8 in cfg.s_values else max(cfg.s_values)
    if profile_s not in cfg.s_values:
        raise ConfigError(f"profile level s={profile_s} is not among the s values")
    run = uniformity_sweep(opts["kind"], orbits, cfg.s_values, u, v, cfg.seed,
                           cfg.sample_count, glue=not opts.get("no_glue"))
    rep = Report(cfg)
    lo, hi = tol["slope_lo"], tol["slope_hi"]
    slopes = run.per_orbit_slopes()
    out_of_range = {k: s for k, s in slopes.items() if not lo <= s <= hi}
    rep.verdict("per_orbit_rates", not out_of_range, out_of_range=out_of_range)
    cross = run.cross_orbit_slope()
    growth = run.longest_increasing_run(profile_s)
    rep.verdict("uniform_trend", lo <= cross <= hi and growth < 3,
                cross_orbit_slope=cross, increasing_cutoffs=growth)
    if not opts.get("no_glue"):
        rep.verdict("delta_gluing", run.delta_error <= tol["delta"], residual=run.delta_error,
                    ill_conditioned=[o.label for o in run.ill_conditioned])
        worst = 0.0
        for n, lev in enumerate(run.chain.levels, start=1):
            idx = [run.orbits.index(o) for o in lev]
            per = run.per_orbit_prod[:, idx].max(axis=1)
            worst = max(worst, float(np.max(np.abs(run.level_defect(n) - per) / np.maximum(per, 1e-300))))
        rep.verdict("level_defect_is_max", worst <= max(tol["delta"], 10 * run.delta_error),
                    residual=worst)
    rep.write_text("magoo.csv", run.csv_text())
    rep.payload["run"] = run.to_json()
    rep.payload["cutoff_profile"] = [[str(c), val] for c, val in run.cutoff_profile(profile_s)]
    summary = _magoo_summary(run, profile_s, slopes, cross, growth)
    rep.write_text("magoo_summary.txt", summary)
    print(summary, end="")
    curves = {o.label: run.per_orbit_prod[:, i] for i, o in enumerate(run.orbits)}
    curves["cross-orbit max"] = run.cross_orbit_max()
    rep.figure(defect_figure, "magoo_defects.png", cfg.s_values, curves,
               title=f"{opts['kind']}, {len(run.orbits)} orbits")
    rep.figure(cutoff_figure, "magoo_cutoff.png", run.cutoff_profile(profile_s), profile_s,
               title=opts["kind"])
    return rep.finish()


def _magoo_summary(run, profile_s, slopes, cross, growth) -> str:
    lines = [f"{run.kind}: {len(run.orbits)} orbits, {len(run.chain)} radial levels, "
             f"s = {run.s_values[0]}..{run.s_values[-1]}"]
    vals = list(slopes.values())
    lines.append(f"per-orbit product slopes: min {min(vals):.3f}, max {max(vals):.3f}")
    lines.append(f"cross-orbit max-defect slope: {cross:.3f}")
    prof = ", ".join(f"{float(c):.3g}:{val:.3g}" for c, val in run.cutoff_profile(profile_s))
    lines.append(f"max defect at s = {profile_s} by squared-radius cutoff: {prof}")
    lines.append(f"longest strictly increasing run across cutoffs: {growth}")
    return "\n".join(lines) + "\n"


# -- argument parsing --------------------------------------------------------------

COMMANDS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "orbits": cmd_orbits,
    "charnum": cmd_charnum,
    "magoo": cmd_magoo,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=512, help="Haar samples per orbit")
    common.add_argument("--out", default="quarksym-report", help="output directory")
    common.add_argument("--no-figures", action="store_true", help="skip PNG figures")
    common.add_argument("--tol", action="append", metavar="KEY=VALUE",
                        help="override a tolerance (repeatable)")
    common.add_argument("--irrep-cache", help=f"directory for irrep matrices (sets {CACHE_ENV})")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="quarksym", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"quarksym {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="exact identity suites")
    p.add_argument("--words", type=int, default=1000, help="random words for confluence")
    p.add_argument("--pairs", type=int, default=100, help="random pairs for the beta identities")
    p.add_argument("--dual-samples", type=int, default=100, help="random (u, g) per ray")
    p.add_argument("--irrep-dim-cap", type=int, default=400)
    p.add_argument("--corrupt-structure", metavar="J,K,L",
                   help="shift the ladder-basis constant c^L_JK (1-based) before the Jacobi check")

    p = sub.add_parser("sweep", parents=[common], help="product and bracket defect rates")
    p.add_argument("--orbit", action="append", metavar="P,Q", help="primitive ray (repeatable)")
    p.add_argument("--s", default="2..16", help="levels, e.g. 2..16 or 2,4,8")
    p.add_argument("--deg", default="1,1", metavar="D1,D2", help="degrees of the default inputs")
    p.add_argument("--u", help="first input, e.g. 'e1*e4'")
    p.add_argument("--v", help="second input")
    p.add_argument("--kind", choices=KINDS, default=BEREZIN)

    p = sub.add_parser("orbits", parents=[common], help="integral orbits and radial chains")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rho2", type=int, help="squared radius X^2 + XY + Y^2")
    g.add_argument("--chain", type=int, help="levels of the radial chain")
    g.add_argument("--band", help="arc band lo,hi for primitive rays")
    g.add_argument("--example-7267", action="store_true", dest="example",
                   help="enumerate squared radius 7267 and compare with the reference listing")
    p.add_argument("--max-norm", type=int, default=40, help="norm cutoff for --band")

    p = sub.add_parser("charnum", parents=[common], help="characteristic numbers and trace identity")
    p.add_argument("--p-max", type=int, default=2000)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--trace-p-max", type=int, default=12)
    p.add_argument("--check-p", type=int, help="extra limit verdicts at this p")

    p = sub.add_parser("magoo", parents=[common], help="uniformity sweep across orbits")
    p.add_argument("--kind", choices=KINDS, default=BEREZIN)
    p.add_argument("--band", help="arc band lo,hi; omit for all primitive rays")
    p.add_argument("--cutoff", type=int, default=40, help="norm cutoff p1^2 + p1 q1 + q1^2")
    p.add_argument("--s", default="2..16")
    p.add_argument("--u", default="e7")
    p.add_argument("--v", default="e8")
    p.add_argument("--profile-s", type=int,
                   help="level for the cutoff profile (default 8, or the largest s)")
    p.add_argument("--no-glue", action="store_true", help="per-orbit defects only")
    return ap


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command, seed=args.seed, sample_count=args.samples,
                    out_dir=args.out, figures=not args.no_figures,
                    tolerances=parse_tolerances(args.tol))
    c = args.command
    if c == "verify":
        corrupt = None
        if args.corrupt_structure:
            corrupt = tuple(int(t) for t in args.corrupt_structure.split(","))
            if len(corrupt) != 3 or not all(1 <= t <= DIM for t in corrupt):
                raise ConfigError("--corrupt-structure expects three indices in 1..8")
            if corrupt[0] == corrupt[1]:
                raise ConfigError("--corrupt-structure needs J != K")
        for name in ("words", "pairs", "dual_samples", "irrep_dim_cap"):
            if getattr(args, name) < 1:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        cfg.options = {"words": args.words, "pairs": args.pairs, "dual_samples": args.dual_samples,
                       "irrep_dim_cap": args.irrep_dim_cap, "corrupt": corrupt}
    elif c == "sweep":
        cfg.orbits = tuple(parse_pair(t) for t in (args.orbit or ["1,0"]))
        cfg.s_values = parse_s_values(args.s)
        cfg.degrees = parse_pair(args.deg)
        cfg.options = {"u": args.u, "v": args.v, "kind": args.kind}
    elif c == "orbits":
        cfg.max_norm = args.max_norm
        if args.band:
            cfg.band = parse_float_pair(args.band)
        if args.rho2 is not None and args.rho2 < 1:
            raise ConfigError("--rho2 must be positive")
        if args.chain is not None and args.chain < 1:
            raise ConfigError("--chain must be positive")
        cfg.options = {"rho2": args.rho2, "chain": args.chain, "example": args.example}
    elif c == "charnum":
        if args.n_max < 0 or args.p_max < max(1, args.n_max):
            raise ConfigError("need 0 <= n-max <= p-max")
        if args.trace_p_max < 1 or irrep_dim(args.trace_p_max, 0) > 1000:
            raise ConfigError("--trace-p-max outside the irrep budget")
        cfg.options = {"p_max": args.p_max, "n_max": args.n_max,
                       "trace_p_max": args.trace_p_max, "check_p": args.check_p}
    elif c == "magoo":
        cfg.max_norm = args.cutoff
        if args.band:
            cfg.band = parse_float_pair(args.band)
        cfg.s_values = parse_s_values(args.s)
        if len(cfg.s_values) < 2:
            raise ConfigError("a rate fit needs at least two s values")
        cfg.options = {"kind": args.kind, "u": args.u, "v": args.v,
                       "profile_s": args.profile_s, "no_glue": args.no_glue}
    return cfg.validate()


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.irrep_cache:
        os.environ[CACHE_ENV] = args.irrep_cache
    try:
        cfg = config_from_args(args)
        start = time.perf_counter()
        status = COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    log.info("finished in %.1f s", time.perf_counter() - start)
    return status


if __name__ == "__main__":
    sys.exit(main())
