"""Command-line front end: ``pomquant {quantize,wigner,husimi,sample,verify}``.

Exit codes: 0 success, 2 invalid configuration, 3 numerical tolerance
failure (tail mass, failed checks), 4 the question has no POM.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .exceptions import ConfigError, PomQuantError, SpectrumOutsideUnitInterval, TailMassError
from .config import RunConfig
from .functions import Indicator
from .measurement import moment_transfer_check, sample_outcomes
from .phase_space import husimi, wigner_transform
from .quantizer import QuantizerA, assemble_binned_observable, effect_report, quantize, quantize_question
from .verify import CHECKS, run_checks

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_NO_SOLUTION = 0, 2, 3, 4


def _envelope(cfg: RunConfig, kind: str, grid, **extra) -> dict:
    return {
        "schema_version": fileio.SCHEMA_VERSION,
        "kind": kind,
        "config": cfg.to_dict(),
        "grid": grid.to_dict() if grid is not None else None,
        "conventions": fileio.CONVENTIONS,
        "tolerances": {"tail_tol": cfg.tail_tol, "eig_tol": cfg.eig_tol, "effect_tol": cfg.effect_tol},
        **extra,
    }


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_quantize(cfg: RunConfig, question: bool = False) -> int:
    f = cfg.build_function()
    quantizer = cfg.quantizer()
    a = quantize(quantizer, f)
    rep = effect_report(a)
    out = _outdir(cfg)
    fileio.write_operator_csv(out / "operator.csv", a)
    note = None
    if isinstance(f, Indicator) and not rep.is_effect(cfg.effect_tol):
        note = "spectrum leaves [0, 1]: question quantization has no solution for this operator"
    env = _envelope(
        cfg,
        "operator",
        quantizer.grid,
        matrix_ref="operator.csv",
        effect_report=rep.to_dict(),
        tail_mass=quantizer.tail_mass,
        note=note,
    )
    fileio.write_json(out / "operator.json", env)
    print(f"min_eig {rep.min_eig:.6g}  max_eig {rep.max_eig:.6g}  proj_defect {rep.proj_defect:.6g}")
    if note:
        print(f"note: {note}")
    if question:
        pom = quantize_question(a, cfg.effect_tol)
        fileio.write_pom(out, "question_pom", pom)
        print("question POM written to question_pom.json")
    return EXIT_OK


def _field(cfg: RunConfig, kind: str) -> int:
    state = cfg.build_state()
    grid = cfg.phase_grid("field")
    vals = (wigner_transform if kind == "wigner" else husimi)(state, grid, cfg.tail_tol)
    _, _, w = grid.nodes()
    total = float(w @ vals.ravel())
    norm = total / np.pi if kind == "wigner" else total / (2 * np.pi)
    out = _outdir(cfg)
    fileio.write_field_csv(out / f"{kind}.csv", grid, vals)
    lo, hi = fileio.write_pgm(out / f"{kind}.pgm", vals)
    env = _envelope(
        cfg,
        kind,
        grid,
        field_ref=f"{kind}.csv",
        image_ref=f"{kind}.pgm",
        image_range=[lo, hi],
        min=float(vals.min()),
        max=float(vals.max()),
        normalization=norm,
    )
    fileio.write_json(out / f"{kind}.json", env)
    measure = "int f dq dp / pi" if kind == "wigner" else "int P dq dp / 2pi"
    print(f"{kind}: min {vals.min():.6g}  max {vals.max():.6g}  normalization ({measure}) {norm:.10f}")
    return EXIT_OK


def cmd_wigner(cfg: RunConfig) -> int:
    return _field(cfg, "wigner")


def cmd_husimi(cfg: RunConfig) -> int:
    return _field(cfg, "husimi")


def cmd_sample(cfg: RunConfig, shards: int = 1) -> int:
    state = cfg.build_state()
    out = _outdir(cfg)
    if cfg.bins is not None:
        if cfg.map != "a":
            raise ConfigError("binned observables are built with the type-(a) map (--map a)")
        quantizer = QuantizerA(cfg.generating_operator(), cfg.phase_grid("quantize"), cfg.tail_tol)
        pom = assemble_binned_observable(quantizer, cfg.axis, cfg.bins)
        rep = sample_outcomes(pom, state, cfg.n, cfg.seed, cfg.k_max, shards)
        extra = {"report": rep.to_dict(), "deviations_in_std_errors": rep.deviations().tolist(), "pom": pom.metadata}
        worst = float(rep.deviations().max())
    else:
        f = cfg.build_function()
        if not isinstance(f, Indicator):
            raise ConfigError("sampling needs an indicator function or --bins")
        check = moment_transfer_check(cfg.quantizer(), f, state, cfg.k_max, cfg.n, cfg.seed, cfg.effect_tol)
        rep = check.sample
        extra = {"report": rep.to_dict(), "moment_transfer": check.to_dict()}
        worst = check.max_deviation
    fileio.write_json(out / "sample.json", _envelope(cfg, "sample", None, **extra))
    fileio.write_counts_csv(out / "counts.csv", rep.counts)
    for k, (e, p, s) in enumerate(zip(rep.empirical_moments, rep.predicted_moments, rep.std_errors), 1):
        print(f"k={k}: empirical {e:.6f}  predicted {p:.6f}  std_error {s:.2g}")
    print(f"largest deviation {worst:.3f} std errors")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = run_checks(cfg.dim, cfg.tail_tol, cfg.checks)
    passed = all(r.passed for r in results)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")
    out = _outdir(cfg)
    verdict = {
        "schema_version": fileio.SCHEMA_VERSION,
        "kind": "verify",
        "config": cfg.to_dict(),
        "passed": passed,
        "checks": [r.to_dict() for r in results],
    }
    fileio.write_json(out / "verify.json", verdict)
    return EXIT_OK if passed else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pomquant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON RunConfig; flags override its fields")
        p.add_argument("--dim", type=int)
        p.add_argument("--grid", type=json.loads, help="PhaseGrid as a JSON object")
        p.add_argument("--tail-tol", type=float, dest="tail_tol")
        p.add_argument("--output", "-o")
        return p

    q = common(sub.add_parser("quantize", help="quantize a phase-space function"))
    q.add_argument("--map", choices=("a", "weyl"))
    q.add_argument("--T", dest="generator", help="fock:<n> | weights:<t0>,<t1>,... | matrix:<csv>")
    q.add_argument("--function", help="e.g. monomial:1:0, indicator:rect:[-1,2]xR, indicator:sector:90:180")
    q.add_argument("--max-degree", type=int, dest="max_degree")
    q.add_argument("--effect-tol", type=float, dest="effect_tol")
    q.add_argument("--question", action="store_true", help="also solve the question moment problem")

    for name in ("wigner", "husimi"):
        f = common(sub.add_parser(name, help=f"{name} distribution of a state on a grid"))
        f.add_argument("--state", help="fock:<n> | amps:<a0>,<a1>,... | random:<seed>[:<levels>]")

    s = common(sub.add_parser("sample", help="sample a quantized question or a binned observable"))
    s.add_argument("--map", choices=("a", "weyl"))
    s.add_argument("--T", dest="generator")
    s.add_argument("--function")
    s.add_argument("--state")
    s.add_argument("--bins", type=lambda t: [float(x) for x in t.split(",")], help="comma-separated bin edges")
    s.add_argument("--axis", choices=("position", "momentum"))
    s.add_argument("--n", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--k-max", type=int, dest="k_max")
    s.add_argument("--effect-tol", type=float, dest="effect_tol")
    s.add_argument("--shards", type=int, default=1)

    v = common(sub.add_parser("verify", help="run the invariant checks"))
    v.add_argument("--only", type=lambda t: t.split(","), dest="checks", help=f"subset of: {','.join(CHECKS)}")
    return parser


def _config_from_args(args) -> RunConfig:
    base = RunConfig.load(args.config) if args.config else RunConfig()
    fields = set(RunConfig.fields())
    cfg = base.with_overrides(**{k: v for k, v in vars(args).items() if k in fields})
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = _config_from_args(args)
        if args.command == "verify" and cfg.checks:
            unknown = [c for c in cfg.checks if c not in CHECKS]
            if unknown:
                raise ConfigError(f"unknown checks {unknown}")
        if args.command == "quantize":
            return cmd_quantize(cfg, args.question)
        if args.command == "sample":
            return cmd_sample(cfg, args.shards)
        return {"wigner": cmd_wigner, "husimi": cmd_husimi, "verify": cmd_verify}[args.command](cfg)
    except SpectrumOutsideUnitInterval as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except TailMassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PomQuantError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
