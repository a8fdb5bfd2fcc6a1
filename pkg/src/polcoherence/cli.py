"""Command-line front end: ``polcoh {sweep,singles,chsh,sample}``.

Output is CSV (``#`` comment lines, a header row, data rows) or a single
JSON object ``{"config": ..., "rows": [...]}``.  Numbers carry 12
significant digits.  Exit codes: 0 success, 2 usage error, 1 internal error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .coincidence import CANONICAL_CHSH, DetectorPair, chsh_s, symmetric_rates
from .ensemble import EnsembleConfig, PairState, derive_seed, draw_ensemble, state_from_i0
from .montecarlo import estimate_chsh, estimate_rates, sample_outcomes, singles_marginals
from .singles import AnalyzerSettings, coherent_singles_prediction, singles_ensemble

COMMANDS = ("sweep", "singles", "chsh", "sample")
DEFAULT_XI = (0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8)
SWEEP_SEED_KEY = 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated run parameters.  All angles in radians."""

    command: str
    theta_start: float = 0.0
    theta_stop: float = 2 * math.pi
    steps: int = 361
    xi_values: list[float] = field(default_factory=lambda: list(DEFAULT_XI))
    theta: float = 0.0
    chsh_angles: tuple[float, float, float, float] = CANONICAL_CHSH
    psi: float = math.pi
    zeta: float = 0.0
    i0: float = 1.0
    n: int | None = None
    seed: int = 0
    mc: bool = False
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.command in ("sweep", "singles") and self.steps < 2:
            raise UsageError("--steps must be >= 2")
        if not self.xi_values:
            raise UsageError("at least one --xi value is required")
        if self.n is not None and self.n < 1:
            raise UsageError("--n must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.i0 <= 0:
            raise UsageError("--i0 must be positive")
        angles = [self.theta_start, self.theta_stop, self.theta, self.psi, self.zeta]
        if not all(math.isfinite(x) for x in [*angles, *self.xi_values, *self.chsh_angles]):
            raise UsageError("angles must be finite")

    @property
    def stochastic(self) -> bool:
        return self.mc or self.n is not None

    def events(self, default: int) -> int:
        return default if self.n is None else self.n

    def state(self) -> PairState:
        return state_from_i0(self.i0, self.psi, self.zeta)

    def theta_grid(self) -> np.ndarray:
        return np.linspace(self.theta_start, self.theta_stop, self.steps)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("output_path")
        d["chsh_angles"] = list(self.chsh_angles)
        return d


# ---------------------------------------------------------------- commands


def cmd_sweep(config: RunConfig) -> list[dict]:
    """Analytic coincidence rates over the theta grid for every xi (Fig.-2 curves)."""
    state = config.state()
    rows = []
    for xi in config.xi_values:
        for theta in config.theta_grid():
            r = symmetric_rates(AnalyzerSettings(float(theta), xi), state)
            rows.append(
                {"theta": float(theta), "xi": xi, "r_ab": r.r_ab, "r_ad": r.r_ad,
                 "r_cb": r.r_cb, "r_cd": r.r_cd, "total": r.total}
            )
    if config.stochastic:
        n = config.events(100_000)

        def mc(item):
            k, row = item
            cfg = EnsembleConfig(n, derive_seed(config.seed, SWEEP_SEED_KEY, k))
            counts = sample_outcomes(AnalyzerSettings(row["theta"], row["xi"]), state, cfg)
            return estimate_rates(counts, state)

        with ThreadPoolExecutor(max_workers=os.cpu_count()) as pool:
            estimates = list(pool.map(mc, enumerate(rows)))
        for row, est in zip(rows, estimates):
            for pair in DetectorPair:
                key = pair.value.lower()
                row[f"mc_r_{key}"] = est[pair].value
                row[f"mc_se_{key}"] = est[pair].stderr
            row["mc_n"] = n
    return rows


def cmd_singles(config: RunConfig) -> list[dict]:
    """Incoherent-ensemble port means next to the coherent-phase prediction."""
    state = config.state()
    n = config.events(100_000)
    ensemble = draw_ensemble(EnsembleConfig(n, config.seed))
    rows = []
    for xi in config.xi_values:
        for theta in config.theta_grid():
            settings = AnalyzerSettings(float(theta), xi)
            rep = singles_ensemble(settings, ensemble, state)
            coh = coherent_singles_prediction(settings, config.zeta, state)
            row = {"theta": float(theta), "xi": xi, "n": n}
            for p, m, se in zip("ABCD", rep.mean, rep.stderr):
                row[f"mean_I{p}"] = m
                row[f"se_I{p}"] = se
            row["total"] = rep.total
            for p, c in zip("ABCD", coh):
                row[f"coherent_I{p}"] = float(c)
            rows.append(row)
    return rows


def cmd_chsh(config: RunConfig) -> list[dict]:
    state = config.state()
    a, a2, b, b2 = config.chsh_angles
    row = {"a": a, "a2": a2, "b": b, "b2": b2, "S": float(chsh_s(a, a2, b, b2, state))}
    if config.stochastic:
        n = config.events(1_000_000)
        est = estimate_chsh(a, a2, b, b2, state, EnsembleConfig(n, config.seed))
        row.update({"S_mc": est.value, "S_mc_stderr": est.stderr, "n_per_setting": n})
    return [row]


def cmd_sample(config: RunConfig) -> list[dict]:
    state = config.state()
    n = config.events(100_000)
    xi = config.xi_values[0]
    settings = AnalyzerSettings(config.theta, xi)
    counts = sample_outcomes(settings, state, EnsembleConfig(n, config.seed))
    est = estimate_rates(counts, state)
    exact = symmetric_rates(settings, state)
    row = {"theta": config.theta, "xi": xi}
    for pair in DetectorPair:
        row[f"n_{pair.value.lower()}"] = counts.get(pair)
    row["n_total"] = counts.n_total
    for pair in DetectorPair:
        key = pair.value.lower()
        row[f"r_{key}"] = est[pair].value
        row[f"se_{key}"] = est[pair].stderr
        row[f"exact_r_{key}"] = float(exact.get(pair))
    for name, p in zip(("p_d1", "p_d2", "p_d3", "p_d4"), singles_marginals(counts)):
        row[name] = p
    return [row]


_DISPATCH = {"sweep": cmd_sweep, "singles": cmd_singles, "chsh": cmd_chsh, "sample": cmd_sample}


# ---------------------------------------------------------------- output


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def _jsonable(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(format(float(x), ".12g"))
        return v if math.isfinite(v) else None
    return x


def render(config: RunConfig, rows: list[dict]) -> str:
    if config.output_format == "json":
        payload = {
            "config": config.echo(),
            "rows": [{k: _jsonable(v) for k, v in row.items()} for row in rows],
        }
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# polcoh {config.command} (polcoherence {__version__})\n")
    buf.write(f"# config: {json.dumps(config.echo(), sort_keys=True)}\n")
    buf.write(
        f"# units: angles in radians; intensities in I0; rates in I0^2; I0 = {_fmt(config.i0)}\n"
    )
    if rows:
        cols = list(rows[0])
        buf.write(",".join(cols) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(row[c]) for c in cols) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--psi", type=float, default=None, help="pair phase psi (default pi)")
    common.add_argument("--zeta", type=float, default=0.0, help="shared pair phase zeta")
    common.add_argument("--i0", type=float, default=1.0, help="single-photon intensity unit")
    common.add_argument("--n", type=int, default=None, help="events (per setting)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--mc", action="store_true", help="add Monte Carlo estimates")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--degrees", action="store_true", help="angle arguments are in degrees")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--theta-start", type=float, default=None)
    grid.add_argument("--theta-stop", type=float, default=None)
    grid.add_argument("--steps", type=int, default=None)
    grid.add_argument("--xi", type=float, nargs="+", default=None)

    parser = argparse.ArgumentParser(
        prog="polcoh", description="Polarization-entangled pair coherence simulator."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common, grid], help="coincidence rates vs theta")
    sub.add_parser("singles", parents=[common, grid], help="singles washout vs theta")
    p = sub.add_parser("chsh", parents=[common], help="CHSH statistic")
    for name, default in zip(("--a", "--a2", "--b", "--b2"), CANONICAL_CHSH):
        p.add_argument(name, type=float, default=None, help=f"default {default:.6g} rad")
    p = sub.add_parser("sample", parents=[common], help="joint click counts at one setting")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--xi", type=float, default=0.0)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    conv = math.radians if args.degrees else float

    def angle(value, default):
        return default if value is None else conv(value)

    kw = dict(
        command=args.command,
        psi=angle(args.psi, math.pi),
        zeta=conv(args.zeta),
        i0=args.i0,
        n=args.n,
        seed=args.seed,
        mc=args.mc,
        output_format=args.format,
        output_path=args.out,
    )
    if args.command in ("sweep", "singles"):
        kw["theta_start"] = angle(args.theta_start, 0.0)
        kw["theta_stop"] = angle(args.theta_stop, 2 * math.pi)
        kw["steps"] = args.steps if args.steps is not None else (361 if args.command == "sweep" else 33)
        kw["xi_values"] = list(DEFAULT_XI) if args.xi is None else [conv(x) for x in args.xi]
    elif args.command == "chsh":
        kw["chsh_angles"] = tuple(
            angle(getattr(args, name), d) for name, d in zip(("a", "a2", "b", "b2"), CANONICAL_CHSH)
        )
    else:
        kw["theta"] = conv(args.theta)
        kw["xi_values"] = [conv(args.xi)]
    return RunConfig(**kw)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))
    try:
        text = render(config, _DISPATCH[config.command](config))
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"polcoh: internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
