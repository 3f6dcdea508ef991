"""Command-line front end.

    twoparticle hom --overlap 0
    twoparticle hbt --eps 1 --x0 10 --delta 200 --eta +1 --overlap 1 --out fringes.csv
    twoparticle duality --points 101 --experiment hom --out d.csv

Exit status: 0 success, 1 runtime error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import duality, hbt, hom, plotting, reports, sampling
from .internal import distinguishability, equal_overlap_basis, make_state, overlap, pair_with_overlap

log = logging.getLogger("twoparticle")

EXPERIMENTS = ("hom", "hbt", "eraser", "duality", "sample")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    overlap: float | None = None
    theta: float | None = None
    phi: float = 0.0
    eps: float = 1.0
    x0: float = 10.0
    delta: float | None = None
    time: float | None = None
    mass: float = 1.0
    eta: int = 1
    n_events: int = 1_000_000
    seed: int = 12345
    out: str | None = None
    format: str = "csv"
    plot: bool = False

    def states(self):
        if self.overlap is not None and self.theta is not None:
            raise ConfigError("give either --overlap or --theta/--phi, not both")
        if self.overlap is not None:
            if not 0.0 <= self.overlap <= 1.0:
                raise ConfigError(f"--overlap must lie in [0, 1], got {self.overlap}")
            return pair_with_overlap(self.overlap)
        if self.theta is not None:
            return make_state(0.0, 0.0), make_state(self.theta, self.phi)
        raise ConfigError("one of --overlap or --theta/--phi is required")

    def wavepacket(self) -> hbt.WavepacketConfig:
        if self.delta is not None and self.time is not None:
            raise ConfigError("give either --delta or --time/--mass, not both")
        try:
            if self.time is not None:
                return hbt.WavepacketConfig(x0=self.x0, epsilon=self.eps, mass=self.mass, time=self.time)
            delta = 200.0 if self.delta is None else self.delta
            return hbt.WavepacketConfig.from_delta(self.x0, self.eps, delta, mass=self.mass)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _eta(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value not in (1, -1):
        raise argparse.ArgumentTypeError(f"eta must be +1 or -1, got {text!r}")
    return value


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("internal states")
    g.add_argument("--overlap", type=float, help="overlap modulus |<dA|dB>| in [0, 1]")
    g.add_argument("--theta", type=float, help="Bloch polar angle of dB (dA on the north pole)")
    g.add_argument("--phi", type=float, default=0.0, help="Bloch azimuth of dB")
    g.add_argument("--eta", type=_eta, default=1, help="exchange sign, +1 bosons or -1 fermions")
    w = common.add_argument_group("wavepackets")
    w.add_argument("--eps", type=float, default=1.0, help="initial packet width")
    w.add_argument("--x0", type=float, default=10.0, help="half source separation")
    w.add_argument("--delta", type=float, help="2 t / m (default 200)")
    w.add_argument("--time", type=float, help="flight time (with --mass)")
    w.add_argument("--mass", type=float, default=1.0)
    o = common.add_argument_group("run")
    o.add_argument("--events", type=_positive_int, default=1_000_000)
    o.add_argument("--seed", type=_u64, default=12345)
    o.add_argument("--out", help="report path")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--plot", action="store_true", help="also render a .png next to --out")
    o.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="twoparticle", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="experiment", required=True)

    p = sub.add_parser("hom", parents=[common], help="HOM coincidence probability and delay scan")
    p.add_argument("--sigma-t", type=float, default=1.0, help="temporal mode width")
    p.add_argument("--tau-max", type=float, default=5.0)
    p.add_argument("--tau-points", type=_positive_int, default=101)

    p = sub.add_parser("hbt", parents=[common], help="analytic HBT fringe pattern and visibility")
    p.add_argument("--periods", type=float, default=3.0)
    p.add_argument("--samples-per-period", type=_positive_int, default=50)
    p.add_argument("--check-oracle", action="store_true",
                   help="compare with the spectral propagation oracle")

    p = sub.add_parser("eraser", parents=[common], help="post-selected HOM and HBT eraser")
    p.add_argument("--channel", choices=("same", "orthogonal"), default="same",
                   help="tag outcomes (e, e) or (e, e_perp)")
    p.add_argument("--periods", type=float, default=3.0)
    p.add_argument("--samples-per-period", type=_positive_int, default=50)

    p = sub.add_parser("duality", parents=[common], help="D + V sweep over the overlap")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--experiment", dest="pipeline", default="hom",
                   choices=("hom", "hbt", "hbt-analytic", "hbt-sampled"))

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo event batches")
    p.add_argument("--experiment", dest="pipeline", choices=("hom", "hbt"), default="hbt")
    p.add_argument("--workers", type=_positive_int, default=1)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        experiment=args.experiment, overlap=args.overlap, theta=args.theta, phi=args.phi,
        eps=args.eps, x0=args.x0, delta=args.delta, time=args.time, mass=args.mass,
        eta=args.eta, n_events=args.events, seed=args.seed, out=args.out,
        format=args.format, plot=args.plot,
    )


def _summary(**values) -> str:
    return " ".join(f"{k}={reports.fmt(v)}" for k, v in values.items())


def _run_hom(cfg: RunConfig, args) -> str:
    dA, dB = cfg.states()
    pc = hom.coincidence_probability(dA, dB, cfg.eta)
    d = distinguishability(dA, dB)
    v = hom.hom_visibility(dA, dB, cfg.eta)
    if cfg.out:
        taus = np.linspace(-args.tau_max, args.tau_max, args.tau_points)
        rows = hom.delay_scan(dA, dB, args.sigma_t, taus, cfg.eta)
        reports.write_table(cfg.out, {"tau": [r[0] for r in rows], "P_C": [r[1] for r in rows]}, cfg.format)
        if cfg.plot:
            plotting.plot_delay_scan(rows, plotting.figure_path(cfg.out))
    return _summary(P_C=pc, D=d, V=v, **{"D+V": d + v})


def _run_hbt(cfg: RunConfig, args) -> str:
    dA, dB = cfg.states()
    wp = cfg.wavepacket()
    s = overlap(dA, dB).modulus
    pattern = hbt.analytic_pattern(wp, cfg.eta, s, args.periods, args.samples_per_period)
    v = hbt.extract_visibility(pattern)
    d = distinguishability(dA, dB)
    extra = {}
    if args.check_oracle:
        grid = hbt.propagate_numeric(wp, cfg.eta, dA, dB)
        x1, x2 = np.meshgrid(grid.x, grid.x, indexing="ij")
        ana = hbt.joint_density_analytic(x1, x2, wp, cfg.eta, s)
        mid = np.abs(grid.x) <= grid.x.max() / 2
        sel = np.ix_(mid, mid)
        extra["oracle_rel_err"] = float(np.max(np.abs(grid.density[sel] - ana[sel]) / ana[sel]))
    if cfg.out:
        reports.emit_pattern(pattern, cfg.out, cfg.format)
        if cfg.plot:
            plotting.plot_pattern(pattern, plotting.figure_path(cfg.out), title=f"s = {s:.4g}")
    return _summary(D=d, V=v, **{"D+V": d + v}, **extra)


def _run_eraser(cfg: RunConfig, args) -> str:
    dA, dB = cfg.states()
    wp = cfg.wavepacket()
    e, e_perp = equal_overlap_basis(dA, dB)
    e2 = e if args.channel == "same" else e_perp
    p_joint = hom.eraser_joint_probability(dA, dB, e, e2, cfg.eta)
    raw = hbt.extract_visibility(hbt.analytic_pattern(wp, cfg.eta, overlap(dA, dB).modulus,
                                                      args.periods, args.samples_per_period))
    pattern = hbt.eraser_pattern(wp, cfg.eta, dA, dB, e, e2, args.periods, args.samples_per_period)
    v = hbt.extract_visibility(pattern)
    if cfg.out:
        reports.emit_pattern(pattern, cfg.out, cfg.format)
        if cfg.plot:
            plotting.plot_pattern(pattern, plotting.figure_path(cfg.out), title=f"eraser ({args.channel})")
    return _summary(P_joint=p_joint, V_raw=raw, V_erased=v)


def _run_duality(cfg: RunConfig, args) -> str:
    wp = cfg.wavepacket()
    records = duality.duality_sweep(args.points, args.pipeline, cfg=wp, eta=cfg.eta,
                                    n_events=cfg.n_events, seed=cfg.seed)
    if cfg.out:
        reports.write_duality(records, cfg.out, cfg.format)
        if cfg.plot:
            plotting.plot_duality(records, plotting.figure_path(cfg.out))
    worst = max(records, key=lambda r: r.residual)
    return _summary(points=len(records), max_residual=worst.residual,
                    all_within_tolerance=int(all(r.within_tolerance() for r in records)))


def _run_sample(cfg: RunConfig, args) -> str:
    dA, dB = cfg.states()
    if args.pipeline == "hom":
        batch = sampling.sample_hom(dA, dB, cfg.n_events, cfg.seed, workers=args.workers)
        counts = np.bincount(batch.events, minlength=3)
        if cfg.out:
            reports.write_batch(batch, cfg.out, cfg.format)
            if cfg.plot:
                plotting.plot_hom_counts(list(sampling.HOM_OUTCOMES), counts, plotting.figure_path(cfg.out))
        return _summary(events=batch.count, coincidence_fraction=counts[0] / batch.count,
                        P_C=hom.coincidence_probability(dA, dB))
    wp = cfg.wavepacket()
    s = overlap(dA, dB).modulus
    batch = sampling.sample_hbt(wp, cfg.eta, s, cfg.n_events, cfg.seed, workers=args.workers)
    est = sampling.estimate_visibility(batch, wp)
    if cfg.out:
        reports.write_batch(batch, cfg.out, cfg.format)
        if cfg.plot:
            plotting.plot_histogram(est, plotting.figure_path(cfg.out))
    d = distinguishability(dA, dB)
    return _summary(events=batch.count, acceptance=batch.acceptance_rate, D=d, V=est.visibility,
                    V_err=est.std_error, **{"D+V": d + est.visibility})


_RUNNERS = {"hom": _run_hom, "hbt": _run_hbt, "eraser": _run_eraser,
            "duality": _run_duality, "sample": _run_sample}


def run(config: RunConfig, args) -> str:
    return _RUNNERS[config.experiment](config, args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on parse errors
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config(args)
        if args.plot and not args.out:
            raise ConfigError("--plot needs --out")
        if args.experiment == "duality" and args.points < 2:
            raise ConfigError(f"--points must be >= 2, got {args.points}")
        for name in ("eps", "x0", "mass"):
            if not math.isfinite(getattr(args, name)):
                raise ConfigError(f"--{name} must be finite")
        line = run(config, args)
    except ConfigError as exc:
        print(f"twoparticle {args.experiment}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        log.debug("run failed", exc_info=True)
        print(f"twoparticle {args.experiment}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
