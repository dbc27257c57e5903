"""Command-line front end: ``diracgap <subcommand> [--key value ...]``.

Every subcommand writes CSV files (a ``# params`` comment line, a header row,
then data) into ``--out``.  Parameters come from an optional JSON config file
(``--config``) overridden by flags; all of them are validated before any
computation starts, so a usage error never leaves files behind.

Exit status: 0 ok, 2 usage, 3 numerical failure, 4 hypothesis unmet.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gapsolver, hardy, magnetic, soliton
from .core import AngularChannel, DiracGapError, HypothesisUnmet, PhysicalParams, PotentialSpec

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_HYPOTHESIS = 0, 2, 3, 4
SUBCOMMANDS = ("eig", "lambda-t", "hardy", "soliton", "magnetic", "limit", "regress")
REQUIRED = object()


class UsageError(Exception):
    """Invalid or incomplete configuration."""


# Parameter schema
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Param:
    kind: type | str  # float, int, str, bool or "floats" (comma separated list)
    default: object = REQUIRED
    check: object = None  # callable returning an error message or None
    help: str = ""


def _positive(x):
    return None if x > 0 else "must be positive"


def _nonzero(x):
    return None if x != 0 else "must be nonzero"


def _at_least(m):
    return lambda x: None if x >= m else f"must be >= {m}"


def _in_open_unit(x):
    return None if 0 < x < 1 else "must lie in (0, 1)"


def _all_positive(xs):
    return None if xs and all(x > 0 for x in xs) else "must be a nonempty list of positive numbers"


def _nonlinearity(name):
    try:
        _parse_nonlinearity(name)
    except ValueError as exc:
        return str(exc)
    return None


def _inequality(name):
    return None if name == "all" or name in hardy.INEQUALITIES else f"must be 'all' or one of {hardy.INEQUALITIES}"


COMMON = {
    "out": Param(str, ".", help="output directory"),
    "seed": Param(int, 0, _at_least(0), "base seed"),
    "plot": Param(bool, False, help="also write an SVG plot"),
}

SCHEMA = {
    "eig": {
        "nu": Param(float, REQUIRED, _at_least(0.0), "Coulomb strength, V = -nu/r"),
        "c": Param(float, 1.0, _positive, "speed of light"),
        "kappa": Param(int, -1, _nonzero, "angular channel"),
        "levels": Param(int, 1, _at_least(1), "number of gap levels"),
        "n": Param(int, 200, _at_least(8), "number of basis intervals"),
        "r_max": Param(float, None, _positive, "outer radius (default: from the decay length)"),
        "potential_file": Param(str, None, help="two-column (r, V) table replacing the Coulomb term"),
        "converge": Param(bool, False, help="also tabulate level 1 over n/8, n/4, n/2, n"),
    },
    "lambda-t": {
        "nu": Param(float, REQUIRED, _at_least(0.0), "Coulomb strength"),
        "c": Param(float, 1.0, _positive, "speed of light"),
        "kappa": Param(int, -1, _nonzero, "angular channel"),
        "n": Param(int, 200, _at_least(8), "number of basis intervals"),
    },
    "hardy": {
        "inequality": Param(str, "all", _inequality, "inequality id or 'all'"),
        "samples": Param(int, 100, _at_least(1), "seeded test functions per inequality"),
        "nu": Param(float, 0.5, lambda x: None if 0 < x <= 1 else "must lie in (0, 1]", "coupling"),
    },
    "soliton": {
        "g": Param(str, "soler", _nonlinearity, "'soler' or 'power:THETA'"),
        "omega": Param(float, 0.5, _in_open_unit, "frequency"),
        "branches": Param(int, 1, _at_least(1), "number of branches"),
    },
    "magnetic": {
        "nu": Param(float, REQUIRED, _in_open_unit, "coupling"),
        "B": Param("floats", [1.0], _all_positive, "field strengths (comma separated)"),
        "n_half": Param(int, 100, _at_least(8), "intervals per half line"),
        "critical": Param(bool, False, help="also bracket the critical field"),
    },
    "limit": {
        "nu": Param(float, 1.0, _positive, "Coulomb strength"),
        "kappa": Param(int, -1, _nonzero, "angular channel"),
        "k": Param(int, 1, _at_least(1), "level index"),
        "c_values": Param("floats", [5.0, 10.0, 20.0, 40.0], _all_positive, "speeds of light"),
        "n": Param(int, 200, _at_least(8), "number of basis intervals"),
    },
    "regress": {},
}


def _parse_nonlinearity(name: str) -> soliton.NonlinearitySpec:
    if name == "soler":
        return soliton.NonlinearitySpec.soler()
    if name.startswith("power:"):
        try:
            theta = float(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad exponent in {name!r}") from None
        if not theta > 0:
            raise ValueError("power exponent must be positive")
        return soliton.NonlinearitySpec.power(theta)
    raise ValueError(f"unknown nonlinearity {name!r}")


def _coerce(name: str, spec: Param, value):
    try:
        if spec.kind == "floats":
            if isinstance(value, str):
                return [float(x) for x in value.split(",") if x.strip()]
            if isinstance(value, (int, float)):
                return [float(value)]
            return [float(x) for x in value]
        if spec.kind is bool:
            if isinstance(value, str):
                if value.lower() not in ("true", "false", "1", "0"):
                    raise ValueError(value)
                return value.lower() in ("true", "1")
            return bool(value)
        if spec.kind is int and isinstance(value, float) and not value.is_integer():
            raise ValueError(value)
        return spec.kind(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: cannot read {value!r} as {getattr(spec.kind, '__name__', spec.kind)}") from None


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    out_dir: Path = Path(".")
    seed: int = 0
    plot: bool = False

    @classmethod
    def build(cls, subcommand: str, values: dict) -> "RunConfig":
        """Validate ``values`` against the schema; raises UsageError."""
        if subcommand not in SCHEMA:
            raise UsageError(f"unknown subcommand {subcommand!r}")
        schema = {**SCHEMA[subcommand], **COMMON}
        unknown = sorted(set(values) - set(schema))
        if unknown:
            raise UsageError(f"unknown keys for {subcommand}: {', '.join(unknown)}")
        params = {}
        for name, spec in schema.items():
            if name in values and values[name] is not None:
                value = _coerce(name, spec, values[name])
            elif spec.default is REQUIRED:
                raise UsageError(f"missing required key {name!r} for {subcommand}")
            else:
                value = spec.default
            if value is not None and spec.check is not None:
                msg = spec.check(value)
                if msg:
                    raise UsageError(f"{name}: {msg} (got {value!r})")
            params[name] = value
        if subcommand in ("eig", "lambda-t") and params["nu"] >= params["c"] * abs(params["kappa"]):
            raise UsageError("nu must be smaller than c |kappa|")
        if subcommand == "eig" and params["converge"] and (params["n"] % 8 or params["n"] < 16):
            raise UsageError("converge needs n divisible by 8 and n >= 16")
        if subcommand == "limit" and params["nu"] >= min(params["c_values"]):
            raise UsageError("nu must be smaller than every c")
        if subcommand == "eig" and params["potential_file"] and not Path(params["potential_file"]).is_file():
            raise UsageError(f"potential file {params['potential_file']!r} not found")
        out, seed, plot = params.pop("out"), params.pop("seed"), params.pop("plot")
        return cls(subcommand, params, Path(out), seed, plot)

    def describe(self) -> dict:
        return {"subcommand": self.subcommand, "seed": self.seed, **self.params}


def worker_count() -> int:
    """Worker pool size from GAPSOLVE_THREADS (default 1)."""
    raw = os.environ.get("GAPSOLVE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"GAPSOLVE_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("GAPSOLVE_THREADS must be >= 1")
    return n


def _pmap(fun, items):
    """Order-preserving map over a thread pool capped by GAPSOLVE_THREADS."""
    items = list(items)
    n = min(worker_count(), max(len(items), 1))
    if n == 1:
        return [fun(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fun, items))


# Tables, CSV and SVG
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


@dataclass(frozen=True)
class Table:
    columns: tuple
    rows: tuple
    comment: str = ""

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row length does not match the header")

    def column(self, name) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([float(row[i]) for row in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# params: {self.comment}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(x) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Table":
        lines = text.splitlines()
        comment = ""
        if lines and lines[0].startswith("#"):
            comment = lines[0].split(":", 1)[1].strip() if ":" in lines[0] else lines[0][1:].strip()
            lines = lines[1:]
        reader = list(csv.reader(lines))
        return cls(tuple(reader[0]), tuple(tuple(r) for r in reader[1:]), comment)


def _numeric(table: Table, name) -> bool:
    try:
        table.column(name)
    except ValueError:
        return False
    return True


PLOT_KINDS = ("convergence", "profile", "sweep")
_W, _H, _M = 640, 400, 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def emit_plot(table: Table, kind: str, path=None) -> str:
    """Static SVG of ``table``: first column on x, the remaining plotted columns on y.

    convergence: (n, lambda) with markers; profile: (r, u, v) curves;
    sweep: first column against every other column.  The output depends only
    on the table, so identical inputs give identical bytes.
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"kind must be one of {PLOT_KINDS}")
    if not table.rows:
        raise ValueError("cannot plot an empty table")
    if kind == "convergence":
        xname, ynames = table.columns[0], ("lambda",) if "lambda" in table.columns else table.columns[1:2]
    elif kind == "profile":
        xname, ynames = "r", ("u", "v")
    else:
        xname, ynames = table.columns[0], table.columns[1:]
    x = table.column(xname)
    ynames = tuple(name for name in ynames if _numeric(table, name))
    ys = [table.column(name) for name in ynames]
    finite = np.concatenate([y[np.isfinite(y)] for y in ys] or [np.zeros(1)])
    x0, x1 = float(np.min(x)), float(np.max(x))
    y0, y1 = (float(np.min(finite)), float(np.max(finite))) if finite.size else (0.0, 1.0)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(v):
        return _M + (v - x0) / (x1 - x0) * (_W - 2 * _M)

    def py(v):
        return _H - _M - (v - y0) / (y1 - y0) * (_H - 2 * _M)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f"<metadata>{_esc(table.comment)}</metadata>",
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_M}" y1="{_H - _M}" x2="{_W - _M}" y2="{_H - _M}" stroke="black"/>',
        f'<line x1="{_M}" y1="{_M}" x2="{_M}" y2="{_H - _M}" stroke="black"/>',
    ]
    for t in np.linspace(0, 1, 5):
        xv, yv = x0 + t * (x1 - x0), y0 + t * (y1 - y0)
        out.append(f'<text x="{px(xv):.2f}" y="{_H - _M + 18}" font-size="11" text-anchor="middle">{xv:.4g}</text>')
        out.append(f'<text x="{_M - 6}" y="{py(yv) + 4:.2f}" font-size="11" text-anchor="end">{yv:.6g}</text>')
    out.append(f'<text x="{_W / 2:.0f}" y="{_H - 15}" font-size="13" text-anchor="middle">{_esc(xname)}</text>')
    out.append(
        f'<text x="15" y="{_H / 2:.0f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 15 {_H / 2:.0f})">{_esc(", ".join(ynames))}</text>'
    )
    out.append(f'<text x="{_W / 2:.0f}" y="25" font-size="14" text-anchor="middle">{kind}</text>')
    for i, (name, y) in enumerate(zip(ynames, ys)):
        color = _COLORS[i % len(_COLORS)]
        ok = np.isfinite(y)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[ok], y[ok]))
        out.append(f'<polyline class="{_esc(name)}" fill="none" stroke="{color}" points="{pts}"/>')
        if kind == "convergence":
            for a, b in zip(x[ok], y[ok]):
                out.append(f'<circle class="marker" cx="{px(a):.2f}" cy="{py(b):.2f}" r="3" fill="{color}"/>')
        out.append(f'<text x="{_W - _M + 5}" y="{_M + 15 * i}" font-size="11" fill="{color}">{_esc(name)}</text>')
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(svg)
    return svg


# Subcommands
# ---------------------------------------------------------------------------


def _potential(p) -> PotentialSpec:
    if p.get("potential_file"):
        return PotentialSpec.from_file(p["potential_file"], nu=p["nu"])
    return PotentialSpec.coulomb(p["nu"])


def _level_radius(nu, c, kappa, k) -> float:
    """Outer radius from a hydrogenic guess of the k-th level."""
    l = AngularChannel(kappa).orbital_l
    mu = -(nu**2) / (2 * (k + l) ** 2) if nu > 0 else -1e-3
    return gapsolver.decay_radius(max(c * c + mu, 0.0), PhysicalParams(c))


def _basis(p, k):
    params = PhysicalParams(p["c"])
    gamma = gapsolver.coulomb_gamma(p["nu"], params, p["kappa"])
    r_max = p.get("r_max") or _level_radius(p["nu"], p["c"], p["kappa"], k)
    return r_max, gamma


def _cmd_eig(cfg: RunConfig, comment: str) -> dict:
    p = cfg.params
    params, channel, pot = PhysicalParams(p["c"]), AngularChannel(p["kappa"]), _potential(p)
    r_max, gamma = _basis(p, p["levels"])
    basis = gapsolver.gap_basis(r_max, p["n"], gamma)
    levels = gapsolver.solve_levels(p["levels"], basis, pot, params, channel)
    if len(levels) < p["levels"]:
        raise gapsolver.NoEigenvalueError(f"only {len(levels)} of {p['levels']} levels found in the gap")
    cols = ("k", "kappa", "n", "lambda", "residual", "bracket_lo", "bracket_hi")
    rows = tuple((r.k, r.kappa, r.n, r.lam, r.residual, r.bracket_lo, r.bracket_hi) for r in levels)
    tables = {"eig": Table(cols, rows, comment)}
    if p["converge"]:
        ns = [p["n"] // 8, p["n"] // 4, p["n"] // 2, p["n"]]
        table = gapsolver.converge_levels(1, [gapsolver.gap_basis(r_max, n, gamma) for n in ns], pot, params, channel)
        est = [float("nan")] + [a - b for a, b in zip(table.values, table.values[1:])]
        rows = tuple((n, v, e) for n, v, e in zip(ns, table.values, est))
        tables["convergence"] = Table(("n", "lambda", "error_estimate"), rows, comment)
    return tables


def _cmd_lambda_t(cfg: RunConfig, comment: str) -> dict:
    p = cfg.params
    params, channel, pot = PhysicalParams(p["c"]), AngularChannel(p["kappa"]), _potential(p)
    r_max, gamma = _basis(p, 1)
    basis = gapsolver.gap_basis(r_max, p["n"], gamma)
    level = gapsolver.solve_level(1, basis, pot, params, channel)
    mt = gapsolver.min_lambda_T(pot, params, channel, basis)
    if not mt.converged:
        raise DiracGapError(f"min_lambda_T did not converge (gradient norm {mt.grad_norm:.3g})")
    cols = ("nu", "c", "kappa", "n", "min_lambda_t", "solve_level", "difference", "grad_norm")
    row = (p["nu"], p["c"], p["kappa"], p["n"], mt.value, level.lam, mt.value - level.lam, mt.grad_norm)
    return {"lambda_t": Table(cols, (row,), comment)}


def _hardy_cell(args):
    ineq, seed, nu = args
    return hardy.sweep(ineq, [seed], nu=nu)[0]


def _cmd_hardy(cfg: RunConfig, comment: str) -> dict:
    p = cfg.params
    ids = hardy.INEQUALITIES if p["inequality"] == "all" else (p["inequality"],)
    cells = [(ineq, cfg.seed + i, p["nu"]) for ineq in ids for i in range(p["samples"])]
    reports = _pmap(_hardy_cell, cells)
    cols = ("inequality_id", "seed", "lhs", "rhs", "margin", "constant")
    rows = tuple((r.inequality, r.seed, r.lhs, r.rhs, r.margin, r.constant) for r in reports)
    unmet = [r for r in reports if not r.hypothesis_met]
    if unmet:
        raise HypothesisUnmet(f"{len(unmet)} test functions do not meet the inequality hypotheses")
    return {"hardy": Table(cols, rows, comment)}


def _cmd_soliton(cfg: RunConfig, comment: str) -> dict:
    p = cfg.params
    g = _parse_nonlinearity(p["g"])
    profiles = _pmap(lambda n: soliton.find_excited(p["omega"], g, n), range(1, p["branches"] + 1))
    cols = ("omega", "n", "x_n", "nodes_u", "nodes_v", "decay_rate")
    rows = tuple((prof.omega, n, prof.x0, prof.nodes_u, prof.nodes_v, prof.decay_rate)
                 for n, prof in enumerate(profiles, start=1))
    tables = {"branches": Table(cols, rows, comment)}
    for n, prof in enumerate(profiles, start=1):
        keep = slice(None, None, max(1, len(prof.r) // 1000))
        rows = tuple(zip(prof.r[keep], prof.u[keep], prof.v[keep]))
        tables[f"profile_{n}"] = Table(("r", "u", "v"), rows, comment)
    return tables


def _cmd_magnetic(cfg: RunConfig, comment: str) -> dict:
    p = cfg.params
    nu = p["nu"]

    def cell(B):
        res = magnetic.c0(magnetic.MagneticParams(nu, B), magnetic.ZBasis.build(B, p["n_half"]))
        if not res.converged:
            raise DiracGapError(f"c0({nu:g}, {B:g}) did not converge, best value {res.value:.12g}")
        return res

    results = _pmap(cell, p["B"])
    rows = tuple((nu, B, r.value, r.grad_norm, r.in_gap) for B, r in zip(p["B"], results))
    tables = {"c0": Table(("nu", "B", "c0", "grad_norm", "in_gap"), rows, comment)}
    if p["critical"]:
        crit = magnetic.critical_field(nu, p["n_half"])
        tables["critical"] = Table(("nu", "B_lower", "B_upper"), ((nu, crit.B_lower, crit.B_upper),), comment)
    return tables


def _cmd_limit(cfg: RunConfig, comment: str) -> dict:
    p = cfg.params
    sweep = gapsolver.nonrel_sweep(
        p["c_values"], PotentialSpec.coulomb(p["nu"]), AngularChannel(p["kappa"]), p["k"], p["n"]
    )
    rows = tuple(zip(sweep.c, sweep.mu))
    return {
        "limit": Table(("c", "mu"), rows, comment),
        "limit_fit": Table(("mu_inf", "slope"), ((sweep.mu_inf, sweep.slope),), comment),
    }


REGRESSION_SUITE = (
    ("eig", {"nu": 0.5, "levels": 3, "n": 96, "converge": True}),
    ("lambda-t", {"nu": 0.5, "n": 64}),
    ("hardy", {"samples": 4}),
    ("soliton", {"g": "soler", "omega": 0.5, "branches": 2}),
    ("magnetic", {"nu": 0.5, "B": [1.0, 10.0], "n_half": 40}),
    ("limit", {"nu": 1.0, "c_values": [5.0, 10.0, 20.0, 40.0], "n": 96}),
)


def _cmd_regress(cfg: RunConfig, comment: str) -> dict:
    tables = {}
    for sub, values in REGRESSION_SUITE:
        child = RunConfig.build(sub, {**values, "seed": cfg.seed})
        child_comment = json.dumps(child.describe(), sort_keys=True)
        for name, table in COMMANDS[sub](child, child_comment).items():
            tables[f"{sub.replace('-', '_')}_{name}"] = table
    return tables


COMMANDS = {
    "eig": _cmd_eig,
    "lambda-t": _cmd_lambda_t,
    "hardy": _cmd_hardy,
    "soliton": _cmd_soliton,
    "magnetic": _cmd_magnetic,
    "limit": _cmd_limit,
    "regress": _cmd_regress,
}

_PLOTS = {"eig": ("convergence", "convergence"), "soliton": ("profile_1", "profile"), "limit": ("limit", "sweep"),
          "magnetic": ("c0", "sweep")}


def _error_record(kind: str, message: str, status: int) -> str:
    return json.dumps({"error": kind, "message": message, "exit_status": status}, sort_keys=True)


def run(config: RunConfig) -> int:
    """Execute ``config``; write CSV (and SVG) files; return the exit status."""
    comment = json.dumps(config.describe(), sort_keys=True)
    try:
        worker_count()
        tables = COMMANDS[config.subcommand](config, comment)
    except UsageError as exc:
        print(_error_record("usage", str(exc), EXIT_USAGE), file=sys.stderr)
        return EXIT_USAGE
    except HypothesisUnmet as exc:
        return _fail(config, "hypothesis-unmet", exc, EXIT_HYPOTHESIS)
    except (DiracGapError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail(config, "numerical", exc, EXIT_NUMERICAL)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    for name, table in tables.items():
        (config.out_dir / f"{name}.csv").write_text(table.to_csv())
        print(f"wrote {config.out_dir / (name + '.csv')} ({len(table.rows)} rows)")
    if config.plot and config.subcommand in _PLOTS:
        name, kind = _PLOTS[config.subcommand]
        if name in tables:
            emit_plot(tables[name], kind, config.out_dir / f"{name}.svg")
    return EXIT_OK


def _fail(config: RunConfig, kind: str, exc: Exception, status: int) -> int:
    record = _error_record(kind, f"{type(exc).__name__}: {exc}", status)
    print(record, file=sys.stderr)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    (config.out_dir / "error.json").write_text(record + "\n")
    return status


# Argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diracgap", description="Dirac spectral-gap numerics.")
    subs = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        sp = subs.add_parser(name)
        sp.add_argument("--config", default=None, help="JSON file with default parameters")
        for key, spec in {**SCHEMA[name], **COMMON}.items():
            flag = "--" + key.replace("_", "-")
            if spec.kind is bool:
                sp.add_argument(flag, dest=key, action="store_const", const=True, default=None, help=spec.help)
            else:
                sp.add_argument(flag, dest=key, default=None, help=spec.help)
    return parser


def parse_config(argv) -> RunConfig:
    """argv -> validated RunConfig (flags override the config file)."""
    ns = build_parser().parse_args(argv)
    values = {}
    if ns.config:
        try:
            values = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
        if not isinstance(values, dict):
            raise UsageError("config file must hold a JSON object")
        values = {k.replace("-", "_"): v for k, v in values.items()}
    flags = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "config") and v is not None}
    return RunConfig.build(ns.subcommand, {**values, **flags})


def main(argv=None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(_error_record("usage", str(exc), EXIT_USAGE), file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
