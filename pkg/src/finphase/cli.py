"""Command-line entry point.

One binary, subcommand style: exchange | firms | analyze | macro |
interest | reserves | sectors. Every run is deterministic given its
config and seed (seeds default to 0, never to the clock), and all data
outputs are written with full-precision repr formatting so identical runs
are byte-identical. Exit codes: 0 success, 1 domain error (message on
stderr, never a stack trace), 2 usage error.

Config files are plain ``key = value`` lines with ``#`` comments; CLI
flags override file values, and unknown keys are hard errors. The default
output directory is taken from $FINPHASE_OUTDIR, falling back to the
current directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import typing
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, exchange, firms, interest, macro, phase, sectors
from .errors import FinphaseError, InvalidConfig

ENV_OUTDIR = "FINPHASE_OUTDIR"


# --- helpers ----------------------------------------------------------------


def _outdir(args) -> Path:
    out = args.outdir or os.environ.get(ENV_OUTDIR) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _grid_from_args(args) -> phase.GridSpec:
    if args.grid is None:
        return phase.GridSpec.default()
    x0, x1, y0, y1, nx, ny = args.grid
    return phase.GridSpec(float(x0), float(x1), float(y0), float(y1), int(nx), int(ny))


def parse_config_file(path, config_cls):
    """Read ``key = value`` lines into a dict typed per the dataclass."""
    hints = typing.get_type_hints(config_cls)
    valid = {f.name: hints[f.name] for f in dataclasses.fields(config_cls)}
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidConfig(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in valid:
                raise InvalidConfig(f"{path}:{lineno}: unknown key {key!r}")
            caster = valid[key]
            try:
                values[key] = caster(value) if caster is not str else value
            except ValueError:
                raise InvalidConfig(
                    f"{path}:{lineno}: cannot parse {value!r} as {caster.__name__}"
                )
    return values


class _Manifest:
    """Reproducibility record: resolved config, seed, outputs, timing."""

    def __init__(self, subcommand: str, config: dict, seed):
        self.payload = {
            "tool": "finphase",
            "version": __version__,
            "subcommand": subcommand,
            "config": config,
            "seed": seed,
            "started": datetime.now(timezone.utc).isoformat(),
            "finished": None,
            "conservation_residuals": None,
            "outputs": [],
        }

    def add_output(self, path: Path) -> None:
        self.payload["outputs"].append(path.name)

    def write(self, outdir: Path) -> None:
        self.payload["finished"] = datetime.now(timezone.utc).isoformat()
        _write_json(outdir / "manifest.json", self.payload)


# --- subcommands --------------------------------------------------------------


_RULE_NAMES = {
    "pairsplit": exchange.RULE_UNIFORM_PAIR_SPLIT,
    "fraction": exchange.RULE_UNIFORM_FRACTION,
    "fixed": exchange.RULE_FIXED_AMOUNT,
}


def _cmd_exchange(args) -> int:
    rule = _RULE_NAMES[args.rule]
    config = exchange.ExchangeConfig(
        n_agents=args.agents,
        initial_money=args.initial_money,
        n_events=args.events,
        rule=rule,
        fixed_amount=args.amount,
        seed=args.seed,
    )
    wealth = exchange.run_exchange(config)
    fit = exchange.fit_exponential(wealth)
    outdir = _outdir(args)
    manifest = _Manifest("exchange", dataclasses.asdict(config), args.seed)

    wealth_path = outdir / "wealth.csv"
    with open(wealth_path, "w") as fh:
        fh.write("agent_id,money\n")
        for i, m in enumerate(wealth.money):
            fh.write(f"{i},{m}\n")
    fit_path = outdir / "fit.json"
    _write_json(
        fit_path,
        {
            "temperature": fit.temperature,
            "ks_statistic": fit.ks_statistic,
            "total_money": wealth.total(),
        },
    )
    manifest.add_output(wealth_path)
    manifest.add_output(fit_path)
    if args.manifest:
        manifest.write(outdir)
    print(
        f"exchange: {args.agents} agents, {args.events} events, "
        f"temperature {fit.temperature:.6g}, KS {fit.ks_statistic:.6g}"
    )
    return 0


def _economy_config_from_args(args) -> firms.EconomyConfig:
    values = {}
    if args.config:
        values.update(parse_config_file(args.config, firms.EconomyConfig))
    overrides = {
        "n_firms": args.firms,
        "n_workers": args.workers,
        "base_money": args.base_money,
        "wage": args.wage,
        "interest_rate": args.interest_rate,
        "investment_margin": args.margin,
        "depreciation": args.depreciation,
        "capitalist_consumption_fraction": args.consumption,
        "n_steps": args.steps,
        "seed": args.seed,
        "initial_capital": args.initial_capital,
        "customer_churn": args.churn,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return firms.EconomyConfig(**values)


def _cmd_firms(args) -> int:
    config = _economy_config_from_args(args)
    grid = _grid_from_args(args)
    records = firms.run(config)
    outdir = _outdir(args)
    manifest = _Manifest("firms", dataclasses.asdict(config), config.seed)

    series_path = outdir / "series.csv"
    with open(series_path, "w") as fh:
        fh.write(
            "t,entropy,rentier_fraction,std_x,bankruptcies,"
            "class_A,class_B,class_C\n"
        )
        for rec in records:
            hist = phase.bin_phase(rec.points, grid)
            h = phase.entropy(hist)
            metrics = phase.tail_metrics(rec.points)
            a, b, c = rec.class_counts
            fh.write(
                f"{rec.t},{h!r},{metrics.rentier_fraction!r},"
                f"{metrics.std_x!r},{rec.bankruptcies},{a},{b},{c}\n"
            )
    manifest.add_output(series_path)
    for rec in records:
        p = outdir / f"phase_t{rec.t}.csv"
        with open(p, "w") as fh:
            fh.write("firm_id,x,y\n")
            for i, pt in enumerate(rec.points):
                fh.write(f"{i},{pt.x!r},{pt.y!r}\n")
        manifest.add_output(p)
    manifest.payload["conservation_residuals"] = [
        rec.conservation_residual for rec in records
    ]
    run_path = outdir / "run.json"
    _write_json(
        run_path,
        {
            "config": dataclasses.asdict(config),
            "seed": config.seed,
            "final_conservation_residual": records[-1].conservation_residual,
        },
    )
    manifest.add_output(run_path)
    if args.manifest:
        manifest.write(outdir)
    print(
        f"firms: {config.n_firms} firms x {config.n_steps} steps, "
        f"final residual {records[-1].conservation_residual}"
    )
    return 0


def _read_phase_csv(path) -> list[phase.PhasePoint]:
    points = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("firm_id"):
                continue
            _, x, y = line.split(",")
            points.append(phase.PhasePoint(float(x), float(y)))
    return points


def _cmd_analyze(args) -> int:
    grid = _grid_from_args(args)
    report = {}
    all_points = []
    for name in args.files:
        points = _read_phase_csv(name)
        all_points.extend(points)
        hist = phase.bin_phase(points, grid)
        metrics = phase.tail_metrics(points)
        report[Path(name).name] = {
            "entropy": phase.entropy(hist),
            "rentier_fraction": metrics.rentier_fraction,
            "mean_x": metrics.mean_x,
            "std_x": metrics.std_x,
            "skew_x": metrics.skew_x,
            "points": hist.total,
            "out_of_range": hist.out_of_range,
        }
    if args.hist_out:
        phase.write_histogram_csv(phase.bin_phase(all_points, grid), args.hist_out)
    if args.out:
        _write_json(Path(args.out), report)
    else:
        json.dump(report, sys.stdout, indent=2)
        print()
    return 0


def _cmd_macro(args) -> int:
    scale = 100.0 if args.percent else 1.0
    unit = "%" if args.percent else ""
    if args.cagr:
        ts, levels = [], []
        with open(args.cagr) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                a, b = line.split(",")
                try:
                    ts.append(float(a))
                except ValueError:
                    continue  # header row
                levels.append(float(b))
        growth = macro.cagr(ts, levels)
        print(f"cagr = {growth * scale:.12g}{unit}")
        return 0
    if args.table:
        if args.out is None:
            raise InvalidConfig("--table needs --out for the result CSV")
        rows = []
        with open(args.table) as fh:
            header = None
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = [p.strip() for p in line.split(",")]
                if header is None:
                    header = parts
                    expected = ["year", "g_L", "g_P", "d", "lambda"]
                    if header != expected:
                        raise InvalidConfig(
                            f"table header must be {','.join(expected)}"
                        )
                    continue
                year = parts[0]
                g_L, g_P, d, lam = (float(p) for p in parts[1:])
                rows.append((year, g_L, g_P, d, lam))
        if not rows:
            raise InvalidConfig("table has no data rows")
        reference = (
            args.reference
            if args.reference is not None
            else macro.equilibrium_rate(rows[0][1], rows[0][2], rows[0][3], rows[0][4])
        )
        with open(args.out, "w") as fh:
            fh.write("year,R_star,g_P_required_vs_reference\n")
            for year, g_L, g_P, d, lam in rows:
                r_star = macro.equilibrium_rate(g_L, g_P, d, lam)
                g_req = macro.required_productivity(reference, lam, g_L, d)
                fh.write(f"{year},{r_star!r},{g_req!r}\n")
        print(f"macro: wrote {len(rows)} rows to {args.out}")
        return 0
    if None in (args.gL, args.gP, args.d, args.lam):
        raise InvalidConfig("macro needs --gL --gP --d --lambda (or --table/--cagr)")
    r_star = macro.equilibrium_rate(args.gL, args.gP, args.d, args.lam)
    print(f"R* = {r_star * scale:.12g}{unit}")
    if args.r0 is not None:
        series = macro.profit_rate_trajectory(
            args.r0, args.gL, args.gP, args.d, args.lam, args.dt, args.steps
        )
        if args.out:
            with open(args.out, "w") as fh:
                fh.write("t,R\n")
                for t, v in zip(series.t, series.value):
                    fh.write(f"{t!r},{v!r}\n")
        print(f"R({series.t[-1]:.12g}) = {series.value[-1] * scale:.12g}{unit}")
    return 0


def _cmd_interest(args) -> int:
    model = interest.ReserveRiskModel(
        banker_capital=args.capital,
        reserves=args.reserves,
        sigma=args.sigma,
        mean_excursion=args.mean,
    )
    p_e = interest.excursion_exceedance(model, args.loan)
    cost = interest.expected_loan_cost(model, args.loan)
    rate = interest.min_interest_rate(model, args.loan)
    payload = {"p_e": p_e, "expected_cost": cost, "min_rate": rate}
    if args.out:
        _write_json(Path(args.out), payload)
    else:
        json.dump(payload, sys.stdout, indent=2)
        print()
    return 0


def _cmd_reserves(args) -> int:
    params = interest.ReserveFlowParams(B0=args.b0, G=args.g, Tx=args.tax, S=args.sales)
    path_points = interest.reserve_path(params, args.dt, args.steps)
    out = Path(args.out) if args.out else _outdir(args) / "reserves.csv"
    with open(out, "w") as fh:
        fh.write("t,B\n")
        for t, b in path_points:
            fh.write(f"{t!r},{b!r}\n")
    print(f"reserves: wrote {len(path_points)} samples to {out}")
    return 0


def _cmd_sectors(args) -> int:
    if args.file:
        table = sectors.load_sectors(args.file)
    else:
        table = sectors.bundled_eurozone_2012q1()
    if args.action == "check":
        report = sectors.check_zero_sum(table, args.tolerance)
        payload = {
            "period": table.period,
            "scale": table.scale,
            "residual": report.residual,
            "is_balanced": report.is_balanced,
            "largest_surplus": report.largest_surplus,
            "largest_deficit": report.largest_deficit,
        }
    else:  # what-if
        if args.sector is None or args.value is None:
            raise InvalidConfig("what-if needs --sector and --value")
        result = sectors.counterfactual(table, args.sector, args.value)
        payload = {
            "period": table.period,
            "scale": table.scale,
            "sector": args.sector,
            "new_value": args.value,
            "required_offset": result.required_offset,
            "balances": dict(result.table.entries),
        }
    if args.out:
        _write_json(Path(args.out), payload)
    else:
        json.dump(payload, sys.stdout, indent=2)
        print()
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finphase",
        description="Deterministic econophysics simulations and analytics.",
    )
    parser.add_argument("--version", action="version", version=f"finphase {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed_default=0):
        p.add_argument("--outdir", default=None, help="output directory")
        p.add_argument(
            "--seed", type=int, default=seed_default, help="PRNG seed (default 0)"
        )
        p.add_argument(
            "--manifest", action="store_true", help="also write manifest.json"
        )

    p = sub.add_parser("exchange", help="conservative random pairwise exchange")
    add_common(p)
    p.add_argument("--agents", type=int, default=10000)
    p.add_argument("--initial-money", type=int, default=1000)
    p.add_argument("--events", type=int, default=10**7)
    p.add_argument(
        "--rule", choices=["pairsplit", "fraction", "fixed"], default="pairsplit"
    )
    p.add_argument("--amount", type=int, default=1, help="amount for the fixed rule")
    p.set_defaults(func=_cmd_exchange)

    p = sub.add_parser("firms", help="firm/worker/bank phase-plane economy")
    add_common(p, seed_default=None)  # None: a config-file seed is not clobbered
    p.add_argument("--config", default=None, help="key = value config file")
    p.add_argument("--firms", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--base-money", type=int, default=None)
    p.add_argument("--wage", type=int, default=None)
    p.add_argument("--interest-rate", type=float, default=None)
    p.add_argument("--margin", type=float, default=None)
    p.add_argument("--depreciation", type=float, default=None)
    p.add_argument("--consumption", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--initial-capital", type=int, default=None)
    p.add_argument("--churn", type=float, default=None)
    p.add_argument(
        "--grid",
        nargs=6,
        metavar=("XMIN", "XMAX", "YMIN", "YMAX", "NX", "NY"),
        default=None,
    )
    p.set_defaults(func=_cmd_firms)

    p = sub.add_parser("analyze", help="entropy and tail metrics of phase CSVs")
    p.add_argument("files", nargs="+")
    p.add_argument(
        "--grid",
        nargs=6,
        metavar=("XMIN", "XMAX", "YMIN", "YMAX", "NX", "NY"),
        default=None,
    )
    p.add_argument("--out", default=None, help="write metrics JSON here")
    p.add_argument("--hist-out", default=None, help="write combined histogram CSV")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("macro", help="profit-rate equilibrium and growth rates")
    p.add_argument("--gL", type=float, default=None)
    p.add_argument("--gP", type=float, default=None)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--r0", type=float, default=None, help="also integrate from R0")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument("--table", default=None, help="CSV of year,g_L,g_P,d,lambda")
    p.add_argument("--reference", type=float, default=None)
    p.add_argument("--cagr", default=None, help="CSV of t,level")
    p.add_argument("--percent", action="store_true", help="display rates as percent")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_macro)

    p = sub.add_parser("interest", help="interest floor from reserve-excursion risk")
    p.add_argument("--capital", type=int, required=True)
    p.add_argument("--reserves", type=int, required=True)
    p.add_argument("--loan", type=int, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--mean", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_interest)

    p = sub.add_parser("reserves", help="linear reserve path dB/dt = G - T - S")
    p.add_argument("--b0", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--tax", type=int, required=True)
    p.add_argument("--sales", type=int, required=True)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--out", default=None)
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=_cmd_reserves)

    p = sub.add_parser("sectors", help="sectoral balance zero-sum checks")
    p.add_argument("action", choices=["check", "what-if"])
    p.add_argument("file", nargs="?", default=None, help="CSV (default: bundled Eurozone 2012 Q1)")
    p.add_argument("--tolerance", type=int, default=0)
    p.add_argument("--sector", default=None)
    p.add_argument("--value", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sectors)

    return parser


def dispatch(argv) -> int:
    """Route argv to a subcommand; never lets an exception escape."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help/usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FinphaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
