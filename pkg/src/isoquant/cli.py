"""Command-line interface.

Commands: ``minimize``, ``characterize``, ``scan``, ``profit``, ``reconstruct``.
A scenario comes from flags, from an INI-style file passed with
``--grid-spec``, or both; flags win over file values.  File schema::

    [technology]
    family = ces          ; cobb-douglas | ces | leontief | perturbed
    A = 1
    a = 0.5
    rho = -1

    [prices]
    w = 4
    r = 1
    q = 1

    [grid.w]              ; likewise [grid.r], [grid.q], [grid.bundles]
    min = 0.2
    max = 5
    n = 5                 ; or: values = 0.5, 1, 2

    [sweep]               ; w values for ``profit``
    min = 0.2
    max = 2
    n = 10

    [tolerances]
    share = 1e-6
    verdict = 1e-4
    profit = 1e-8

    [options]
    seed = 0
    jitter = 0
    workers = 1

    [reconstruct]
    beta = 1
    anchor_K = 1
    anchor_L = 1
    anchor_Y = 1
    K = 4
    L = 1

Exit status is 0 on success, 2 on invalid input, 3 when a computation fails.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass, field
from typing import Any

from .characterization import (
    ScanConfig,
    bundle_grid,
    characterize,
    condition_b_residual,
    log_grid,
    reconstruct_output,
    share_scan,
)
from .costmin import FactorPrices, closed_form_cd_minimizer, minimize_cost
from .errors import ComputationError, DomainError
from .production import FAMILY_PARAMETERS, Bundle, CobbDouglas, make_family
from .profit import bowley_share_check, zero_profit_gap
from .report import render_record, render_table

EXIT_OK, EXIT_INVALID, EXIT_COMPUTATION = 0, 2, 3

_PARAM_FLAGS = {"A": "A", "alpha": "alpha", "a": "a", "rho": "rho", "c": "c", "a_k": "a-k", "a_l": "a-l"}

_SECTIONS: dict[str, tuple[str, ...] | None] = {
    "technology": None,  # family plus family-specific keys, checked by make_family
    "prices": ("w", "r", "q"),
    "grid.w": ("min", "max", "n", "values"),
    "grid.r": ("min", "max", "n", "values"),
    "grid.q": ("min", "max", "n", "values"),
    "grid.bundles": ("min", "max", "n"),
    "sweep": ("min", "max", "n", "values"),
    "tolerances": ("share", "verdict", "profit"),
    "options": ("seed", "jitter", "workers"),
    "reconstruct": ("beta", "anchor_K", "anchor_L", "anchor_Y", "K", "L"),
}


@dataclass
class Scenario:
    command: str
    family: str | None = None
    params: dict[str, float] = field(default_factory=dict)
    w: float | None = None
    r: float | None = None
    q: float | None = None
    grids: dict[str, tuple[float, ...]] = field(default_factory=dict)
    bundles: tuple[Bundle, ...] | None = None
    sweep: tuple[float, ...] | None = None
    share_tol: float = 1e-6
    verdict_tol: float = 1e-4
    profit_tol: float = 1e-8
    seed: int = 0
    jitter: float = 0.0
    workers: int = 1
    recon: dict[str, float] = field(default_factory=dict)
    out: str | None = None
    fmt: str | None = None

    def technology(self):
        if self.family is None:
            raise DomainError("no technology given: pass --family or a [technology] section")
        return make_family(self.family, self.params)

    def scan_config(self) -> ScanConfig:
        base = ScanConfig.default(jitter=self.jitter, seed=self.seed)
        return ScanConfig(
            self.grids.get("w", base.w_grid),
            self.grids.get("r", base.r_grid),
            self.grids.get("q", base.q_grid),
            share_tolerance=self.share_tol,
            verdict_tolerance=self.verdict_tol,
            bundles=self.bundles or bundle_grid(),
        )


def _number(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise DomainError(f"{key}: expected a number, got {raw!r}") from None


def _integer(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{key}: expected an integer, got {raw!r}") from None


def _axis(section: str, items: dict[str, str]) -> tuple[float, ...]:
    if "values" in items:
        if set(items) - {"values"}:
            raise DomainError(f"[{section}]: give either values or min/max/n, not both")
        return tuple(_number(f"{section}.values", v) for v in items["values"].split(",") if v.strip())
    missing = [k for k in ("min", "max", "n") if k not in items]
    if missing:
        raise DomainError(f"[{section}]: missing key {missing[0]!r}")
    return log_grid(
        _number(f"{section}.min", items["min"]),
        _number(f"{section}.max", items["max"]),
        _integer(f"{section}.n", items["n"]),
    )


def read_config(path: str, sc: Scenario) -> None:
    """Fill ``sc`` from an INI file; unknown sections or keys are errors."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    cp.optionxform = str  # keep A and a distinct
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise DomainError(f"cannot read grid spec {path!r}: {exc}") from None
    except configparser.Error as exc:
        raise DomainError(f"malformed grid spec {path!r}: {exc}") from None

    for section in cp.sections():
        if section not in _SECTIONS:
            raise DomainError(f"unknown section [{section}] in {path}")
        items = dict(cp.items(section))
        allowed = _SECTIONS[section]
        if allowed is not None:
            for key in items:
                if key not in allowed:
                    raise DomainError(f"unknown key {key!r} in section [{section}]")
        if section == "technology":
            sc.family = items.pop("family", sc.family)
            sc.params.update({k: _number(k, v) for k, v in items.items()})
        elif section == "prices":
            for k, v in items.items():
                setattr(sc, k, _number(k, v))
        elif section == "grid.bundles":
            axis = _axis(section, items)
            sc.bundles = tuple(Bundle(K, L) for K in axis for L in axis)
        elif section.startswith("grid."):
            sc.grids[section[5:]] = _axis(section, items)
        elif section == "sweep":
            sc.sweep = _axis(section, items)
        elif section == "tolerances":
            for k, v in items.items():
                setattr(sc, f"{k}_tol", _number(k, v))
        elif section == "options":
            if "seed" in items:
                sc.seed = _integer("seed", items["seed"])
            if "workers" in items:
                sc.workers = _integer("workers", items["workers"])
            if "jitter" in items:
                sc.jitter = _number("jitter", items["jitter"])
        elif section == "reconstruct":
            sc.recon.update({k: _number(k, v) for k, v in items.items()})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    tech = common.add_argument_group("technology")
    tech.add_argument("--family", choices=sorted(FAMILY_PARAMETERS), default=None)
    for dest, flag in _PARAM_FLAGS.items():
        tech.add_argument(f"--{flag}", dest=dest, type=float, default=None)
    io_ = common.add_argument_group("input/output")
    io_.add_argument("--grid-spec", default=None, help="scenario file (INI-style key = value)")
    io_.add_argument("--out", default=None, help="write the machine-readable output here ('-' for stdout)")
    io_.add_argument("--format", dest="fmt", choices=("table", "record"), default=None)
    io_.add_argument("--tol", type=float, default=None, help="tolerance driving the command's decision")
    io_.add_argument("--seed", type=int, default=None)
    io_.add_argument("--workers", type=int, default=None)

    parser = argparse.ArgumentParser(prog="isoquant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minimize", parents=[common], help="least-cost bundle on one isoquant")
    for k in ("w", "r", "q"):
        p.add_argument(f"--{k}", type=float, default=None)

    for name, text in (("characterize", "Cobb-Douglas verdict from grid scans"),
                       ("scan", "labour share of cost across a price/output grid")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--jitter", type=float, default=None, help="log-scale grid jitter, seeded by --seed")

    p = sub.add_parser("profit", parents=[common], help="zero-profit gap and Bowley share checks")
    p.add_argument("--w", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--w-sweep", default=None, metavar="MIN:MAX:N")

    p = sub.add_parser("reconstruct", parents=[common], help="rebuild output from a share ratio and one anchor")
    p.add_argument("--beta", type=float, default=None)
    for k in ("anchor_K", "anchor_L", "anchor_Y", "K", "L"):
        p.add_argument(f"--{k.replace('_', '-')}", dest=f"recon_{k}", type=float, default=None)
    return parser


def scenario_from_args(args: argparse.Namespace) -> Scenario:
    sc = Scenario(command=args.command)
    if args.grid_spec:
        read_config(args.grid_spec, sc)
    if args.family is not None:
        if sc.family is not None and make_key(sc.family) != make_key(args.family):
            sc.params = {}
        sc.family = args.family
    for dest in _PARAM_FLAGS:
        v = getattr(args, dest)
        if v is not None:
            sc.params[dest] = v
    for k in ("w", "r", "q"):
        v = getattr(args, k, None)
        if v is not None:
            setattr(sc, k, v)
    if args.seed is not None:
        sc.seed = args.seed
    if args.workers is not None:
        sc.workers = args.workers
    if getattr(args, "jitter", None) is not None:
        sc.jitter = args.jitter
    if getattr(args, "w_sweep", None):
        parts = args.w_sweep.split(":")
        if len(parts) != 3:
            raise DomainError(f"--w-sweep expects MIN:MAX:N, got {args.w_sweep!r}")
        sc.sweep = log_grid(_number("sweep min", parts[0]), _number("sweep max", parts[1]),
                            _integer("sweep n", parts[2]))
    if args.command == "reconstruct":
        if args.beta is not None:
            sc.recon["beta"] = args.beta
        for k in ("anchor_K", "anchor_L", "anchor_Y", "K", "L"):
            v = getattr(args, f"recon_{k}")
            if v is not None:
                sc.recon[k] = v
    if args.tol is not None:
        attr = {"characterize": "verdict_tol", "scan": "share_tol", "profit": "profit_tol"}.get(args.command)
        if attr:
            setattr(sc, attr, args.tol)
    sc.out, sc.fmt = args.out, args.fmt
    if sc.workers < 1:
        raise DomainError(f"workers must be at least 1, got {sc.workers!r}")
    return sc


def make_key(name: str) -> str:
    return name.strip().lower().replace("_", "-")


def _need(sc: Scenario, *names: str) -> None:
    for n in names:
        if getattr(sc, n) is None:
            raise DomainError(f"missing required value --{n}")


def _tech_record(sc: Scenario, pf) -> dict[str, Any]:
    return {"family": pf.family, "params": pf.params()}


# -- commands: each returns (human text, record dict, table header, table rows) --

def cmd_minimize(sc: Scenario):
    pf = sc.technology()
    _need(sc, "w", "r", "q")
    prices = FactorPrices(sc.w, sc.r)
    res = minimize_cost(pf, prices, sc.q)
    b = res.minimizer
    record: dict[str, Any] = {"command": "minimize", **_tech_record(sc, pf),
                              "w": prices.w, "r": prices.r, "q": sc.q,
                              "K": b.K, "L": b.L, "cost": res.cost, "labour_share": res.labour_share,
                              "lagrange_lambda": res.lagrange_lambda,
                              "stationarity_residual": res.stationarity_residual,
                              "feasibility_residual": res.feasibility_residual,
                              "evaluations": res.evaluations}
    lines = [
        f"technology      {pf.family} {pf.params()}",
        f"prices          w={prices.w:g} r={prices.r:g}  output q={sc.q:g}",
        f"minimizer       K={b.K:.10g} L={b.L:.10g}",
        f"cost            {res.cost:.10g}",
        f"labour share    {res.labour_share:.10g}",
    ]
    if res.differentiable:
        lines += [f"lambda          {res.lagrange_lambda:.10g}",
                  f"stationarity    {res.stationarity_residual:.3e}"]
    else:
        lines.append("lambda          n/a (technology not differentiable)")
    lines.append(f"feasibility     {res.feasibility_residual:.3e}")
    if isinstance(pf, CobbDouglas):
        cf = closed_form_cd_minimizer(pf, prices, sc.q)
        cf_cost = prices.w * cf.L + prices.r * cf.K
        disc = max(abs(b.K - cf.K) / cf.K, abs(b.L - cf.L) / cf.L, abs(res.cost - cf_cost) / cf_cost)
        record["closed_form"] = {"K": cf.K, "L": cf.L, "cost": cf_cost, "max_relative_discrepancy": disc}
        lines += [f"closed form     K={cf.K:.10g} L={cf.L:.10g} cost={cf_cost:.10g}",
                  f"discrepancy     {disc:.3e}"]
    header = ["w", "r", "q", "K", "L", "cost", "labour_share", "lagrange_lambda",
              "stationarity_residual", "feasibility_residual"]
    rows = [[record[h] for h in header]]
    return "\n".join(lines) + "\n", record, header, rows


_SCAN_HEADER = ["w", "r", "q", "K", "L", "share", "condition_b_residual"]


def _scan_rows(scan) -> list[list[float]]:
    return [[e.w, e.r, e.q, e.minimizer.K, e.minimizer.L, e.labour_share,
             condition_b_residual(e.prices, e.minimizer, scan.beta_hat)] for e in scan.entries]


def cmd_scan(sc: Scenario):
    pf = sc.technology()
    cfg = sc.scan_config()
    scan = share_scan(pf, cfg, workers=sc.workers)
    rows = _scan_rows(scan)
    record = {"command": "scan", **_tech_record(sc, pf), "seed": sc.seed, "grid_points": cfg.size,
              "mean_share": scan.mean_share, "max_deviation": scan.max_deviation,
              "beta_hat": scan.beta_hat, "constant_share": scan.constant_share,
              "share_tolerance": cfg.share_tolerance,
              "entries": [dict(zip(_SCAN_HEADER, row)) for row in rows]}
    text = (f"technology      {pf.family} {pf.params()}\n"
            f"grid points     {cfg.size}\n"
            f"mean share      {scan.mean_share:.10g}\n"
            f"max deviation   {scan.max_deviation:.3e}  (constant: {scan.constant_share})\n"
            f"beta_hat        {scan.beta_hat:.10g}\n")
    return text, record, _SCAN_HEADER, rows


def cmd_characterize(sc: Scenario):
    pf = sc.technology()
    cfg = sc.scan_config()
    v = characterize(pf, cfg, workers=sc.workers)
    rows = _scan_rows(v.scan)
    record = {"command": "characterize", **_tech_record(sc, pf), "seed": sc.seed,
              "grid_points": cfg.size, "is_cobb_douglas": v.is_cobb_douglas,
              "alpha_hat": v.alpha_hat, "A_hat": v.A_hat, "beta_hat": v.beta_hat,
              "share_max_deviation": v.share_max_deviation, "A_max_deviation": v.A_max_deviation,
              "euler_max_residual": v.euler_max_residual, "tolerance": v.tolerance,
              "low_confidence": v.low_confidence, "notes": list(v.notes),
              "entries": [dict(zip(_SCAN_HEADER, row)) for row in rows]}
    euler = "n/a (not differentiable)" if math.isinf(v.euler_max_residual) else f"{v.euler_max_residual:.3e}"
    lines = [
        f"technology      {pf.family} {pf.params()}",
        f"verdict         {'Cobb-Douglas' if v.is_cobb_douglas else 'not Cobb-Douglas'}"
        + ("  [low confidence]" if v.low_confidence else ""),
        f"alpha_hat       {v.alpha_hat:.10g}",
        f"A_hat           {v.A_hat:.10g}",
        f"beta_hat        {v.beta_hat:.10g}",
        f"share deviation {v.share_max_deviation:.3e}",
        f"A deviation     {v.A_max_deviation:.3e}",
        f"Euler residual  {euler}",
        f"tolerance       {v.tolerance:g}",
    ]
    lines += [f"note            {n}" for n in v.notes]
    return "\n".join(lines) + "\n", record, _SCAN_HEADER, rows


def cmd_profit(sc: Scenario):
    pf = sc.technology()
    base = _tech_record(sc, pf)
    if sc.sweep is not None:
        rows = []
        for w in sc.sweep:
            chk = bowley_share_check(pf, w)
            rows.append([w, chk.rental, chk.labour_share_of_output])
        shares = [r[2] for r in rows]
        spread = max(shares) - min(shares)
        header = ["w", "r_star", "share"]
        record = {"command": "profit", "mode": "sweep", **base,
                  "rows": [dict(zip(header, r)) for r in rows], "share_spread": spread}
        text = "w            r*           labour share of output\n" + "".join(
            f"{w:<12.6g} {r:<12.6g} {s:.10g}\n" for w, r, s in rows) + f"spread {spread:.3e}\n"
        return text, record, header, rows
    _need(sc, "w")
    if sc.r is None:
        chk = bowley_share_check(pf, sc.w)
        header = ["w", "r_star", "share"]
        rows = [[sc.w, chk.rental, chk.labour_share_of_output]]
        record = {"command": "profit", "mode": "locus", **base, "w": sc.w, "r_star": chk.rental,
                  "K": chk.bundle.K, "L": chk.bundle.L, "share": chk.labour_share_of_output}
        text = (f"zero-profit rental r*={chk.rental:.10g} at w={sc.w:g}\n"
                f"labour share of output {chk.labour_share_of_output:.10g}\n")
        return text, record, header, rows
    rep = zero_profit_gap(pf, FactorPrices(sc.w, sc.r), tol=sc.profit_tol)
    header = ["w", "r", "unit_cost", "gap"]
    rows = [[sc.w, sc.r, rep.unit_cost, rep.gap]]
    record = {"command": "profit", "mode": "gap", **base, "w": sc.w, "r": sc.r,
              "unit_cost": rep.unit_cost, "gap": rep.gap, "classification": rep.classification,
              "tol": rep.tol}
    text = f"{rep.classification}, gap {rep.gap:.10g}\nunit cost {rep.unit_cost:.10g}\n"
    return text, record, header, rows


def cmd_reconstruct(sc: Scenario):
    rec = dict(sc.recon)
    pf = sc.technology() if sc.family is not None else None
    K0, L0 = rec.get("anchor_K", 1.0), rec.get("anchor_L", 1.0)
    anchor_b = Bundle(K0, L0)
    for k in ("K", "L"):
        if k not in rec:
            raise DomainError(f"missing required value --{k}")
    target = Bundle(rec["K"], rec["L"])
    if "beta" in rec:
        beta = rec["beta"]
    elif pf is not None:
        beta = characterize(pf, sc.scan_config(), workers=sc.workers).beta_hat
    else:
        raise DomainError("reconstruct needs --beta or a technology to estimate it from")
    if "anchor_Y" in rec:
        y0 = rec["anchor_Y"]
    elif pf is not None:
        y0 = pf.evaluate(anchor_b)
    else:
        raise DomainError("missing required value --anchor-Y")
    y = reconstruct_output(beta, (anchor_b, y0), target)
    record: dict[str, Any] = {"command": "reconstruct", "beta": beta, "anchor_K": K0, "anchor_L": L0,
                              "anchor_Y": y0, "K": target.K, "L": target.L, "Y": y}
    text = f"beta={beta:.10g}  alpha={beta / (beta + 1):.10g}\nY({target.K:g}, {target.L:g}) = {y:.12g}\n"
    header = ["beta", "anchor_K", "anchor_L", "anchor_Y", "K", "L", "Y"]
    if pf is not None:
        actual = pf.evaluate(target)
        record.update(family=pf.family, params=pf.params(), Y_actual=actual,
                      relative_error=abs(y - actual) / actual)
        text += f"actual {actual:.12g}  relative error {record['relative_error']:.3e}\n"
        header += ["Y_actual", "relative_error"]
    rows = [[record[h] for h in header]]
    return text, record, header, rows


COMMANDS = {
    "minimize": (cmd_minimize, "record"),
    "characterize": (cmd_characterize, "table"),
    "scan": (cmd_scan, "table"),
    "profit": (cmd_profit, "record"),
    "reconstruct": (cmd_reconstruct, "record"),
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    func, default_fmt = COMMANDS[args.command]
    try:
        sc = scenario_from_args(args)
        text, record, header, rows = func(sc)
    except DomainError as exc:
        print(f"isoquant {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ComputationError as exc:
        print(f"isoquant {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION

    fmt = sc.fmt or default_fmt
    machine = render_table(header, rows) if fmt == "table" else render_record(record)
    if sc.out == "-":
        sys.stderr.write(text)
        sys.stdout.write(machine)
    else:
        sys.stdout.write(text)
        if sc.out:
            with open(sc.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(machine)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
