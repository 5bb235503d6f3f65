"""Command-line entry point: test-jumps, estimate, simulate, diagnose, pvalue-study.

Exit status is 0 on success, 1 for user errors (bad input, bad config,
missing upstream artifacts) and 2 for anything unexpected.  Failures also
print a JSON error record to stderr and write it to ``error.json``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import diagnostics as dg
from .config import ConfigError, RunConfig, load_config
from .data import DataError, ingest_csv
from .io import read_csv, read_json, write_csv, write_json
from .jumptests import cojump_stats, rolling_stats
from .mcmc import ChainDivergenceError, ChainOutput, run_chain
from .model import ModelError, ModelVariant
from .simulate import simulate_dataset

log = logging.getLogger("vvixsv")

COMMANDS = ("test-jumps", "estimate", "simulate", "diagnose", "pvalue-study")


class DependencyError(RuntimeError):
    """A command needs artifacts that an earlier command should have written."""


USER_ERRORS = (ConfigError, DataError, ModelError, DependencyError, FileNotFoundError)


def _meta(cfg: RunConfig, command: str, seed: int) -> dict:
    return {"command": command, "config_hash": cfg.hash(), "seed": seed}


def _require_input(cfg: RunConfig):
    if not cfg.input:
        raise ConfigError("no input file given (use --input or [run] input)")
    return ingest_csv(cfg.input)


def cmd_test_jumps(cfg: RunConfig, out: Path) -> dict:
    series = _require_input(cfg)
    jt = cfg.jumptest
    s1 = rolling_stats(series.vix, jt.window, jt.alpha, jt.log_returns)
    s2 = rolling_stats(series.vvix, jt.window, jt.alpha, jt.log_returns)
    cj = cojump_stats(series.vix, series.vvix, jt.window, jt.alpha, jt.log_returns)
    both = s1.flagged & s2.flagged
    cols = {"t": s1.t}
    if series.dates is not None:
        cols["date"] = [str(d) for d in series.dates[1:]]
    cols.update(
        {
            "vix_z": s1.z,
            "vix_jump": s1.flagged,
            "vvix_z": s2.z,
            "vvix_jump": s2.flagged,
            "cojump_z": cj.z_cp,
            "cojump": cj.flagged,
        }
    )
    meta = _meta(cfg, "test-jumps", 0)
    write_csv(out / "jump_flags.csv", cols, meta)
    counts = {
        "window": jt.window,
        "alpha": jt.alpha,
        "vix_jump_days": s1.n_flagged,
        "vvix_jump_days": s2.n_flagged,
        "both_jump_days": int(both.sum()),
        "cojump_days": cj.n_flagged,
        "tested_days": s1.n_defined,
    }
    write_json(out / "jump_counts.json", counts, meta)
    return counts


def _chain_files(chain: ChainOutput, cfg: RunConfig, out: Path, meta: dict) -> None:
    write_csv(out / "draws.csv", {"draw": np.arange(chain.n_draws), **chain.draws}, meta)
    T = chain.T
    cols = {
        "day": np.arange(T + 2),
        "omega_mean": chain.omega_mean,
        "omega_std": chain.omega_std,
        "jump_prob": chain.jump_prob,
        "jump_y_mean": chain.jump_y_mean,
        "jump_omega_mean": chain.jump_omega_mean,
    }
    for key, (m1, m2) in chain.residual_moments.items():
        first = np.full(T + 2, np.nan)
        second = np.full(T + 2, np.nan)
        first[2 : 2 + len(m1)] = m1
        second[2 : 2 + len(m2)] = m2
        cols[f"{key}_mean"] = first
        cols[f"{key}_sq_mean"] = second
    write_csv(out / "latent.csv", cols, meta)
    names = list(chain.draws)
    mean, sd = chain.posterior_mean(), chain.posterior_std()
    summary = {
        "variant": chain.variant.value,
        "n_draws": chain.n_draws,
        "posterior": {
            k: {"mean": mean[k], "std": sd[k], "ci95": list(chain.interval(k))} for k in names
        },
        "acceptance": chain.acceptance,
        "rejected_nonfinite": chain.rejected_nonfinite,
        "chain_config": chain.config,
        "priors": chain.priors,
        "run_config": cfg.as_dict(),
    }
    write_json(out / "summary.json", summary, meta)


def load_chain(out: Path) -> ChainOutput:
    """Rebuild the parts of a ChainOutput that downstream commands use."""
    files = [out / "summary.json", out / "draws.csv", out / "latent.csv"]
    missing = [str(f) for f in files if not f.exists()]
    if missing:
        raise DependencyError(f"run 'estimate' first; missing {', '.join(missing)}")
    summary = read_json(files[0])
    draws, _ = read_csv(files[1])
    draws.pop("draw", None)
    latent, _ = read_csv(files[2])
    T = len(latent["day"]) - 2
    moments = {}
    for key, length in (("eps_y", T), ("eps_omega", T - 1)):
        if f"{key}_mean" in latent:
            moments[key] = (
                latent[f"{key}_mean"][2 : 2 + length],
                latent[f"{key}_sq_mean"][2 : 2 + length],
            )
    return ChainOutput(
        variant=ModelVariant(summary["variant"]),
        draws=draws,
        omega_mean=latent["omega_mean"],
        omega_std=latent["omega_std"],
        jump_prob=latent["jump_prob"],
        jump_y_mean=latent["jump_y_mean"],
        jump_omega_mean=latent["jump_omega_mean"],
        acceptance=summary["acceptance"],
        seed=summary["seed"],
        config=summary["chain_config"],
        priors=summary.get("priors", {}),
        residual_moments=moments,
    )


def cmd_estimate(cfg: RunConfig, out: Path) -> dict:
    series = _require_input(cfg)
    priors = cfg.prior_hyper(series.y, cfg.chain.delta)
    chain = run_chain(cfg.chain, cfg.variant, series.y, series.vvix_sq, priors)
    meta = _meta(cfg, "estimate", cfg.chain.seed)
    _chain_files(chain, cfg, out, meta)
    return {"n_draws": chain.n_draws, "acceptance": chain.acceptance}


def cmd_simulate(cfg: RunConfig, out: Path) -> dict:
    sim = cfg.simulation
    par = cfg.params.with_variant(cfg.variant)
    path = simulate_dataset(
        cfg.variant, par.p, par.q, par.sigma_P, T=sim.T, seed=sim.seed,
        delta=cfg.chain.delta, tau=cfg.chain.tau,
    )
    T = path.T
    omega = np.full(T + 2, np.nan)
    omega[: T + 1] = path.omega
    meta = _meta(cfg, "simulate", sim.seed)
    write_csv(
        out / "simulated.csv",
        {
            "day": np.arange(T + 2),
            "y": path.y,
            "vvix_sq": path.vvix_sq,
            "omega": omega,
            "n": path.n,
            "j_y": path.j_y,
            "j_omega": path.j_omega,
        },
        meta,
    )
    return {"T": T, "jumps": int(path.n.sum()), "clamped_steps": path.clamped_steps}


def cmd_diagnose(cfg: RunConfig, out: Path) -> dict:
    chain = load_chain(out)
    series = _require_input(cfg)
    if len(series) != chain.T + 2:
        raise DataError("input length does not match the stored estimate")
    res = dg.chain_residuals(chain, series.y, chain.config.get("delta"))
    meta = _meta(cfg, "diagnose", chain.seed)
    T = chain.T
    write_csv(
        out / "residuals_y.csv", {"day": np.arange(2, T + 2), "eps_y": res.eps_y}, meta
    )
    write_csv(
        out / "residuals_omega.csv", {"day": np.arange(2, T + 1), "eps_omega": res.eps_omega}, meta
    )
    for name, r in (("y", res.eps_y), ("omega", res.eps_omega)):
        theo, samp = dg.qq_points(r)
        write_csv(out / f"qq_{name}.csv", {"theoretical": theo, "sample": samp}, meta)
    prof = dg.posterior_jump_profile(chain)
    write_csv(
        out / "jump_profile.csv",
        {
            "day": prof.day,
            "probability": prof.probability,
            "mean_jump_y": prof.mean_jump_y,
            "mean_jump_omega": prof.mean_jump_omega,
        },
        meta,
    )
    report = {
        "residual_y": dg.summary_stats(res.eps_y),
        "residual_omega": dg.summary_stats(res.eps_omega),
        "vix": dg.summary_stats(series.vix),
        "vvix": dg.summary_stats(series.vvix[np.isfinite(series.vvix)]),
        "proxy_correlation": dg.proxy_correlation(
            chain.omega_mean[1 : T + 1], series.vvix_sq[1 : T + 1]
        ),
        "expected_jump_days": float(prof.probability.sum()),
        "posterior_residuals": {
            k: {"mean": m, "std": sd} for k, (m, sd) in chain.pooled_residuals().items()
        },
    }
    write_json(out / "diagnostics.json", report, meta)
    return report


def cmd_pvalue_study(cfg: RunConfig, out: Path) -> dict:
    chain = load_chain(out)
    series = _require_input(cfg)
    sim = cfg.simulation
    if sim.pvalue_mode == "draws":
        params = [chain.draw_params(k).with_variant(chain.variant) for k in range(chain.n_draws)]
    else:
        params = chain.mean_params()
    pv = dg.pvalue_study(
        chain.variant, params, series.y, N=sim.N, seed=sim.seed,
        omega0=float(chain.omega_mean[1]), delta=chain.config.get("delta"),
    )
    obs = dg.predictive_statistics(series.y)
    names = dg.PredictiveStatistics.names()
    meta = _meta(cfg, "pvalue-study", sim.seed)
    write_csv(
        out / "pvalues.csv",
        {
            "statistic": [dg.PredictiveStatistics.label(k) for k in names],
            "data": [float(getattr(obs, k)) for k in names],
            chain.variant.value: [pv[k] for k in names],
        },
        meta,
    )
    doc = {"N": sim.N, "mode": sim.pvalue_mode, "pvalues": {dg.PredictiveStatistics.label(k): pv[k] for k in names}}
    write_json(out / "pvalues.json", doc, meta)
    return doc


HANDLERS = {
    "test-jumps": cmd_test_jumps,
    "estimate": cmd_estimate,
    "simulate": cmd_simulate,
    "diagnose": cmd_diagnose,
    "pvalue-study": cmd_pvalue_study,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vvixsv", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="INI configuration file")
    ap.add_argument("--input", help="input CSV (date,vix,vvix or simulator output)")
    ap.add_argument("--output-dir", help="directory for artifacts")
    ap.add_argument("--seed", type=int, help="override chain and simulation seeds")
    ap.add_argument("--variant", help="override model variant (SV, SVJ_C, SVJJ_C, SVJJ_S)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else load_config(text="")
    if args.input:
        cfg.input = args.input
    if args.output_dir:
        cfg.output_dir = args.output_dir
    if args.variant:
        try:
            cfg.variant = ModelVariant.parse(args.variant)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if args.seed is not None:
        cfg.chain = replace(cfg.chain, seed=args.seed)
        cfg.simulation = replace(cfg.simulation, seed=args.seed)
    return cfg


def run_command(command: str, cfg: RunConfig) -> dict:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return HANDLERS[command](cfg, out)


def _fail(status: int, kind: str, exc: BaseException, out: str | None) -> int:
    record = {"status": status, "error": kind, "message": str(exc)}
    if isinstance(exc, ChainDivergenceError):
        record["sweep"] = exc.sweep
    if getattr(exc, "row", None) is not None:
        record["row"] = exc.row
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    if out:
        try:
            Path(out).mkdir(parents=True, exist_ok=True)
            (Path(out) / "error.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
        except OSError:
            pass
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    out = args.output_dir
    try:
        cfg = resolve_config(args)
        out = cfg.output_dir
        result = run_command(args.command, cfg)
    except USER_ERRORS as exc:
        return _fail(1, type(exc).__name__, exc, out)
    except ChainDivergenceError as exc:
        return _fail(2, type(exc).__name__, exc, out)
    except Exception as exc:  # noqa: BLE001 - report anything else as internal
        log.debug("internal error", exc_info=True)
        return _fail(2, type(exc).__name__, exc, out)
    print(json.dumps({"status": 0, "command": args.command, "result": result}, sort_keys=True, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
