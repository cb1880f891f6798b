"""Command-line verification driver.

Subcommands::

    minkabs verify-geometry    geometry and group invariant suites
    minkabs verify-covariance  localization covariance suites + convergence
    minkabs demo-causality     leakage sweeps and the commutator witness

Configuration is a flat JSON object (all keys optional); command-line
flags override file values.  Reports are deterministic JSON on stdout
(or ``--out``); ``demo-causality --csv`` emits the sweep table instead.
Exit codes: 0 all checks passed, 1 any check failed, 2 usage or
configuration error.  The environment variable ``MINKABS_THREADS`` caps
internal trial fan-out.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .geometry import GeometryError, MeasureScalar, seconds
from .groups import PoincareMap, make_boost, make_rotation
from .quantum import ModelConfig, apply_boost, make_gaussian
from .quantum import verify as V
from .report import RunReport, sweep_csv
from .suites import run_geometry_suite

DEFAULTS = {
    "N": 32,
    "spacing_sec": 0.25,
    "mass_inv_sec": 1.0,
    "pad": 2,
    "seed": 42,
    "rapidity": 0.25,
    "states": 50,
    "translations": 4,
    "convergence_seeds": [42, 43, 44],
    "delta_t_sweep": [0.5, 1.0, 2.0],
    "rapidity_sweep": [0.0, 0.1, 0.2],
    "witness_rapidity": 0.5,
}


class ConfigError(ValueError):
    pass


def load_config(path: str | None, overrides: dict) -> dict:
    config = dict(DEFAULTS)
    if path is not None:
        try:
            with open(path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config must be a flat JSON object")
        unknown = sorted(set(loaded) - set(DEFAULTS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        config.update(loaded)
    config.update({k: v for k, v in overrides.items() if v is not None})
    return config


def build_model(config: dict) -> ModelConfig:
    try:
        return ModelConfig(
            N=int(config["N"]),
            spacing=seconds(float(config["spacing_sec"])),
            mass=MeasureScalar(float(config["mass_inv_sec"]), -1),
            pad=int(config["pad"]),
        )
    except GeometryError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def cmd_verify_geometry(config: dict) -> RunReport:
    build_model(config)  # config validation shares the power-of-two rule
    report = RunReport("verify-geometry", config)
    for check in run_geometry_suite(seed=int(config["seed"])):
        report.add(check)
    return report


def cmd_verify_covariance(config: dict) -> RunReport:
    cfg = build_model(config)
    seed = int(config["seed"])
    report = RunReport("verify-covariance", dict(config, **cfg.echo()))

    for check in V.run_stabilizer_suite(
        cfg,
        n_states=int(config["states"]),
        seed=seed,
        translations=int(config["translations"]),
    ):
        report.add(check)

    rng = np.random.default_rng(seed)
    white = V.random_states(cfg, rng, min(8, int(config["states"])))
    region = V.cell_region(cfg, (-3, -2, -4), (2, 3, 1))

    t0 = time.perf_counter()
    step = PoincareMap.from_translation(cfg.observer * seconds(0.7))
    res = V.label_change_residual(cfg, step, region, white[:3])
    report.add(
        V.CheckResult.make("observer-step-label-change", res, 1e-10, cfg, t0)
    )

    a = cfg.spacing.value
    rot = PoincareMap.from_homogeneous(
        make_rotation(cfg.observer, cfg.basis[2], np.pi / 2), cfg.origin
    )
    shift = PoincareMap.from_translation(
        2 * a * cfg.basis[0] - 3 * a * cfg.basis[1] + a * cfg.basis[2]
    )
    for name, S in (
        ("rotation", rot),
        ("shift", shift),
        ("composite", shift.compose(rot)),
    ):
        t0 = time.perf_counter()
        res = V.position_family_stabilizer_residual(cfg, S, white[:4])
        report.add(
            V.CheckResult.make(f"position-family/{name}", res, 1e-10, cfg, t0)
        )

    chi = float(config["rapidity"])
    t0 = time.perf_counter()
    witness = V.fixed_label_boost_witness(cfg, chi=chi)
    report.add(
        V.CheckResult.make(
            "fixed-label-not-a-vector", witness, 0.1, cfg, t0, below=False
        )
    )

    t0 = time.perf_counter()
    own = V.space_component_residual(cfg, cfg.observer, rot, white[:4])
    report.add(V.CheckResult.make("space-component/own-observer", own, 1e-10, cfg, t0))
    t0 = time.perf_counter()
    tilted = V.space_component_residual(
        cfg, V.boosted_velocity(float(config["witness_rapidity"])), rot, white[:4]
    )
    report.add(
        V.CheckResult.make(
            "space-component/tilted-witness", tilted, 0.05, cfg, t0, below=False
        )
    )

    t0 = time.perf_counter()
    worst_var, witness_var = V.time_variance_dichotomy(
        cfg, n_states=100, seed=seed, witness_chi=float(config["witness_rapidity"])
    )
    report.add(V.CheckResult.make("time-variance/own-observer", worst_var, 0.0, cfg, t0))
    report.add(
        V.CheckResult.make(
            "time-variance/tilted-witness", witness_var, 0.01, cfg, t0, below=False
        )
    )

    t0 = time.perf_counter()
    b = make_boost(cfg.observer, V.boosted_velocity(chi))
    packet = make_gaussian(cfg, width=cfg.spacing * 3.0)
    _, boost_report = apply_boost(packet, b, return_report=True)
    # measured drift of the default packet at quarter rapidity, frozen
    # with headroom; small boxes are wrap-tail dominated
    drift_bounds = {8: 5e-1, 16: 5e-2, 32: 5e-4}
    report.add(
        V.CheckResult.make(
            "velocity-roundtrip-drift",
            boost_report.norm_drift,
            drift_bounds.get(cfg.N, 1e-6),
            cfg,
            t0,
            rapidity=chi,
            rapidity_cap=boost_report.rapidity_cap,
        )
    )

    t0 = time.perf_counter()
    eq = V.equivariance_residual(cfg, seed=seed)
    report.add(V.CheckResult.make("global-equivariance", eq, 1e-10, cfg, t0))

    t0 = time.perf_counter()
    rows = V.boost_convergence_rows(
        cfg,
        chi=chi,
        seeds=tuple(int(s) for s in config["convergence_seeds"]),
        n_states=2,
        refinements=1,
    )
    report.tables["boost_convergence"] = rows
    ratios = [r["ratio_to_previous"] for r in rows if r["ratio_to_previous"]]
    report.add(
        V.CheckResult.make(
            "factorization-convergence-ratio", max(ratios), 0.6, cfg, t0, seeds=len(ratios)
        )
    )
    return report


def cmd_demo_causality(config: dict) -> RunReport:
    cfg = build_model(config)
    seed = int(config["seed"])
    report = RunReport("demo-causality", dict(config, **cfg.echo()))
    rows = []

    t0 = time.perf_counter()
    zero = V.causality_experiment(cfg, delta_t=0.0)
    rows.append(
        {
            "delta_t_sec": 0.0,
            "rapidity": 0.0,
            "leakage": zero.leakage,
            "N": cfg.N,
        }
    )
    report.add(
        V.CheckResult.make("leakage/zero-interval", zero.leakage, 1e-10, cfg, t0)
    )

    min_rest = None
    min_boosted = None
    for dt in config["delta_t_sweep"]:
        for chi in config["rapidity_sweep"]:
            u2 = None if chi == 0.0 else V.boosted_velocity(float(chi))
            res = V.causality_experiment(cfg, delta_t=float(dt), u2=u2)
            rows.append(
                {
                    "delta_t_sec": float(dt),
                    "rapidity": float(chi),
                    "leakage": res.leakage,
                    "N": cfg.N,
                }
            )
            if chi == 0.0:
                min_rest = res.leakage if min_rest is None else min(min_rest, res.leakage)
            else:
                min_boosted = (
                    res.leakage if min_boosted is None else min(min_boosted, res.leakage)
                )
    report.tables["leakage_sweep"] = rows

    t0 = time.perf_counter()
    report.add(
        V.CheckResult.make(
            "leakage/strictly-positive", min_rest, 1e-6, cfg, t0, below=False
        )
    )
    if min_boosted is not None:
        report.add(
            V.CheckResult.make(
                "leakage/strictly-positive-boosted",
                min_boosted,
                1e-6,
                cfg,
                t0,
                below=False,
            )
        )

    a = cfg.spacing.value
    t0 = time.perf_counter()
    dt_margin = float(max(config["delta_t_sweep"]))
    m1 = V.causality_experiment(cfg, delta_t=dt_margin, margin=0.2 * a)
    m2 = V.causality_experiment(cfg, delta_t=dt_margin, margin=0.4 * a)
    report.add(
        V.CheckResult.make(
            "leakage/margin-doubling-stable",
            abs(m1.leakage - m2.leakage),
            1e-10,
            cfg,
            t0,
        )
    )

    t0 = time.perf_counter()
    witness = V.commutator_witness(cfg, seed=seed, starts=3, iterations=10)
    report.add(
        V.CheckResult.make(
            "commutator/cross-instant-witness", witness, 1e-4, cfg, t0, below=False
        )
    )
    t0 = time.perf_counter()
    reg_a = V.cell_region(cfg, (-5, -2, -2), (-2, 1, 1))
    reg_b = V.cell_region(cfg, (2, -2, -2), (5, 1, 1))
    same = V.commutator_witness(
        cfg, region_a=reg_a, region_b=reg_b, seed=seed, starts=1, iterations=4
    )
    report.add(
        V.CheckResult.make("commutator/same-instant-disjoint", same, 1e-12, cfg, t0)
    )
    return report


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minkabs",
        description="verification suites for the localization lab",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify-geometry", "verify-covariance", "demo-causality"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat JSON config file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, help="override the seed")
        p.add_argument("--lattice", type=int, help="override lattice points per axis")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="JSON report (default)")
        fmt.add_argument(
            "--csv",
            action="store_true",
            help="sweep table as CSV (demo-causality only)",
        )
        p.add_argument(
            "--timings", action="store_true", help="include wall-clock timings"
        )
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    overrides = {"seed": args.seed, "N": args.lattice}
    try:
        config = load_config(args.config, overrides)
        if args.csv and args.command != "demo-causality":
            raise ConfigError("--csv applies to demo-causality only")
        if args.command == "verify-geometry":
            report = cmd_verify_geometry(config)
        elif args.command == "verify-covariance":
            report = cmd_verify_covariance(config)
        else:
            report = cmd_demo_causality(config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    if args.csv:
        payload = sweep_csv(report.tables["leakage_sweep"])
    else:
        payload = report.to_json(include_timings=args.timings) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    for line in report.summary_lines():
        print(line, file=sys.stderr)
    return 0 if report.all_passed() else 1


if __name__ == "__main__":
    sys.exit(main())
