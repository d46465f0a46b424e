"""Command-line interface.

Subcommands: generate, elect, experiment, analyze, fit, quantize.
Stochastic subcommands require an explicit --seed; there is no
wall-clock seeding anywhere, so every artifact can be regenerated
byte-for-byte from its recorded invocation.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .analysis import empirical_correlation, fit_beta_moments, fit_gaussian_copula, histogram, pairwise_scatter
from .dataio import (
    BallotFileSpec,
    MissingPolicy,
    canonical_json,
    read_ballots_csv,
    read_profile_csv,
    write_histogram_csv,
    write_profile_csv,
    write_report_json,
    write_scatter_csv,
    write_scene_csv,
)
from .errors import DataError, DimensionError, FitError, MatrixError, ParameterError
from .experiments import ExperimentConfig, RuleSpec, run_experiment, run_rule
from .generators import (
    BetaModel,
    CopulaModel,
    DirichletModel,
    LinearMapping,
    NormalModel,
    SigmoidMapping,
    SpatialModel,
    UniformModel,
    generate_profile,
)
from .profiles import EvaluationProfile, quantize
from .rng import SeededRandomSource
from .svg import histogram_svg, scatter_svg

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class UsageError(Exception):
    """Bad flag combination detected after argparse."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evalvote",
        description="Generate evaluation-voting profiles, elect winners, run experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic profile CSV")
    gen.add_argument("--model", required=True,
                     choices=["uniform", "dirichlet", "copula", "normal", "beta", "spatial"])
    gen.add_argument("--voters", type=int, required=True)
    gen.add_argument("--candidates", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True,
                     help="master seed (required: no wall-clock randomness)")
    gen.add_argument("--out", required=True, help="profile CSV path")
    gen.add_argument("--scene-out", help="scene CSV path for spatial (default: <out>.scene.csv)")
    gen.add_argument("--rho", type=float, help="copula: constant off-diagonal correlation")
    gen.add_argument("--corr-file", help="copula: CSV file holding a full correlation matrix")
    gen.add_argument("--random-corr", action="store_true",
                     help="copula: sample a random correlation matrix")
    gen.add_argument("--sigma", type=float, default=0.25, help="normal: standard deviation")
    gen.add_argument("--alpha", type=float, help="beta: shared alpha for all candidates")
    gen.add_argument("--beta", type=float, help="beta: shared beta for all candidates")
    gen.add_argument("--sample-params", action="store_true",
                     help="beta: sample (alpha, beta) per candidate (default when no --alpha/--beta)")
    gen.add_argument("--dim", type=int, help="spatial: policy-space dimension")
    gen.add_argument("--mapping", choices=["linear", "sigmoid"], default="linear")
    gen.add_argument("--lambda", dest="sig_lambda", type=float, default=5.0,
                     help="spatial sigmoid: steepness")
    gen.add_argument("--map-beta", type=float, default=2.0,
                     help="spatial sigmoid: distance scale")
    gen.set_defaults(func=cmd_generate)

    elect = sub.add_parser("elect", help="elect a winner from a profile CSV")
    elect.add_argument("--input", required=True)
    elect.add_argument("--rule", required=True, choices=["approval", "range", "mj", "deepest"])
    elect.add_argument("--threshold", type=float, default=0.5, help="approval threshold")
    elect.add_argument("--p", type=float, default=2.0, help="deepest-voting exponent")
    elect.add_argument("--out", help="result JSON path (default: stdout)")
    _add_ingest_flags(elect)
    elect.set_defaults(func=cmd_elect)

    exp = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    exp.add_argument("--config", help="key=value config file; inline flags override it")
    exp.add_argument("--model",
                     choices=["uniform", "dirichlet", "copula", "normal", "beta", "spatial"])
    exp.add_argument("--voters", type=int)
    exp.add_argument("--candidates", type=int)
    exp.add_argument("--replicates", type=int)
    exp.add_argument("--rules",
                     help="comma list, e.g. 'range,mj,approval:0.5,deepest:2'")
    exp.add_argument("--seed", type=int, help="master seed (required here or in --config)")
    exp.add_argument("--workers", type=int, help="parallel workers (default 1)")
    exp.add_argument("--out", help="report JSON path (default: stdout)")
    exp.add_argument("--rho", type=float)
    exp.add_argument("--sigma", type=float)
    exp.add_argument("--alpha", type=float)
    exp.add_argument("--beta", type=float)
    exp.add_argument("--dim", type=int)
    exp.add_argument("--mapping", choices=["linear", "sigmoid"])
    exp.add_argument("--lambda", dest="sig_lambda", type=float)
    exp.add_argument("--map-beta", type=float)
    exp.set_defaults(func=cmd_experiment)

    ana = sub.add_parser("analyze", help="histograms, scatter pairs, correlations")
    ana.add_argument("--input", required=True)
    ana.add_argument("--out-dir", required=True)
    ana.add_argument("--bins", type=int, default=20)
    ana.add_argument("--pair", action="append", default=[],
                     help="candidate pair 'i,j' (1-based); repeatable")
    ana.add_argument("--svg", action="store_true", help="also render static SVGs")
    _add_ingest_flags(ana)
    ana.set_defaults(func=cmd_analyze)

    fit = sub.add_parser("fit", help="fit Beta margins and/or a Gaussian copula")
    fit.add_argument("--input", required=True)
    fit.add_argument("--out", help="fitted-parameter JSON path (default: stdout)")
    fit.add_argument("--beta", action="store_true", help="fit per-candidate Beta parameters")
    fit.add_argument("--copula", action="store_true", help="fit the copula correlation matrix")
    _add_ingest_flags(fit)
    fit.set_defaults(func=cmd_fit)

    quant = sub.add_parser("quantize", help="snap a continuous profile onto a k-level lattice")
    quant.add_argument("--input", required=True)
    quant.add_argument("--k", type=int, required=True)
    quant.add_argument("--out", required=True)
    _add_ingest_flags(quant)
    quant.set_defaults(func=cmd_quantize)

    return parser


def _add_ingest_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--scale-max", type=int,
                     help="read the input as integer ballots on a 0..scale_max scale")
    sub.add_argument("--missing", choices=["reject", "drop-voter"], default="reject",
                     help="missing-cell policy for ballot files")
    sub.add_argument("--columns",
                     help="keep only these candidate columns (1-based comma list)")


def _load_input(args) -> EvaluationProfile:
    """Read the input as a continuous profile or, with --scale-max, as ballots."""
    if args.scale_max is not None:
        spec = BallotFileSpec(args.input, args.scale_max, MissingPolicy(args.missing))
        loaded = read_ballots_csv(spec)
        if loaded.dropped_voters:
            print(f"warning: dropped {loaded.dropped_voters} voter(s) with missing cells",
                  file=sys.stderr)
        profile = loaded.profile
    else:
        profile = read_profile_csv(args.input)
    if args.columns:
        keep = _parse_index_list(args.columns, profile.d)
        profile = EvaluationProfile(profile.values[:, keep], profile.scale)
    return profile


def _parse_index_list(text: str, d: int) -> list[int]:
    try:
        indices = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad column list: {text!r}") from None
    if not indices:
        raise UsageError("empty column list")
    for i in indices:
        if not 1 <= i <= d:
            raise DataError(f"column {i} out of range 1..{d}")
    return [i - 1 for i in indices]


# ---------------------------------------------------------------------------
# generate


def _resolve_model(args):
    model = args.model
    if model == "uniform":
        return UniformModel()
    if model == "dirichlet":
        return DirichletModel()
    if model == "copula":
        given = [args.rho is not None, bool(args.corr_file), bool(getattr(args, "random_corr", False))]
        if sum(given) > 1:
            raise UsageError("give at most one of --rho, --corr-file, --random-corr")
        if args.corr_file:
            return CopulaModel(_read_matrix_csv(args.corr_file))
        if args.rho is not None:
            d = args.candidates
            corr = np.full((d, d), float(args.rho))
            np.fill_diagonal(corr, 1.0)
            return CopulaModel(corr)
        return CopulaModel(None)  # random matrix, sampled from the seed
    if model == "normal":
        return NormalModel(means=None, sigma=args.sigma if args.sigma is not None else 0.25)
    if model == "beta":
        fixed = args.alpha is not None or args.beta is not None
        if fixed and getattr(args, "sample_params", False):
            raise UsageError("--alpha/--beta conflict with --sample-params")
        if fixed:
            if args.alpha is None or args.beta is None:
                raise UsageError("--alpha and --beta must be given together")
            pair = (float(args.alpha), float(args.beta))
            return BetaModel(tuple(pair for _ in range(args.candidates)))
        return BetaModel(None)
    if model == "spatial":
        if args.mapping == "sigmoid":
            mapping = SigmoidMapping(
                steepness=args.sig_lambda if args.sig_lambda is not None else 5.0,
                distance_scale=args.map_beta if args.map_beta is not None else 2.0,
            )
        else:
            mapping = LinearMapping()
        return SpatialModel(dim=args.dim, mapping=mapping)
    raise UsageError(f"unknown model {model!r}")


def _read_matrix_csv(path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise DataError(f"{path}: not a numeric CSV matrix: {exc}") from exc


def cmd_generate(args) -> int:
    config = _resolve_model(args)
    source = SeededRandomSource(args.seed)
    result = generate_profile(config, args.voters, args.candidates, source)
    write_profile_csv(result.profile, args.out)
    sidecar = {
        "command": "generate",
        "voters": args.voters,
        "candidates": args.candidates,
        "seed": args.seed,
        "resolved": result.resolved,
        "profile_csv": str(args.out),
    }
    if result.scene is not None:
        scene_path = args.scene_out or f"{args.out}.scene.csv"
        write_scene_csv(result.scene, scene_path)
        sidecar["scene_csv"] = str(scene_path)
    write_report_json(sidecar, f"{args.out}.meta.json")
    return EXIT_OK


# ---------------------------------------------------------------------------
# elect


def cmd_elect(args) -> int:
    profile = _load_input(args)
    spec = RuleSpec(args.rule, threshold=args.threshold, p=args.p)
    result = run_rule(profile, spec)
    payload = result.to_json_dict()
    payload["parameters"] = (
        {"threshold": args.threshold} if args.rule == "approval"
        else {"p": args.p} if args.rule == "deepest"
        else {}
    )
    _emit_json(payload, args.out)
    return EXIT_OK


def _emit_json(payload: dict, out: str | None) -> None:
    if out:
        write_report_json(payload, out)
    else:
        print(canonical_json(payload))


# ---------------------------------------------------------------------------
# experiment


def _parse_rules(text: str) -> tuple[RuleSpec, ...]:
    specs = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        name, _, param = token.partition(":")
        if name == "approval":
            specs.append(RuleSpec("approval", threshold=float(param) if param else 0.5))
        elif name == "deepest":
            specs.append(RuleSpec("deepest", p=float(param) if param else 2.0))
        elif param:
            raise UsageError(f"rule {name!r} takes no parameter")
        else:
            specs.append(RuleSpec(name))
    if not specs:
        raise UsageError("empty rule list")
    return tuple(specs)


def _read_kv_config(path) -> dict[str, str]:
    entries: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DataError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        entries[key.strip().lower().replace("-", "_")] = value.strip()
    return entries


_EXPERIMENT_KEYS = {
    "model": str, "voters": int, "candidates": int, "replicates": int,
    "rules": str, "seed": int, "workers": int,
    "rho": float, "sigma": float, "alpha": float, "beta": float,
    "dim": int, "mapping": str, "lambda": float, "map_beta": float,
}


def cmd_experiment(args) -> int:
    merged: dict = {}
    if args.config:
        for key, raw in _read_kv_config(args.config).items():
            if key not in _EXPERIMENT_KEYS:
                raise DataError(f"{args.config}: unknown config key {key!r}")
            try:
                merged[key] = _EXPERIMENT_KEYS[key](raw)
            except ValueError:
                raise DataError(f"{args.config}: bad value for {key}: {raw!r}") from None
    for key in _EXPERIMENT_KEYS:
        flag = "sig_lambda" if key == "lambda" else key
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = value

    for required in ("model", "voters", "candidates", "replicates", "rules", "seed"):
        if required not in merged:
            raise UsageError(f"experiment needs --{required.replace('_', '-')} "
                             "(inline or in --config)")

    shim = argparse.Namespace(
        model=merged["model"],
        candidates=merged["candidates"],
        rho=merged.get("rho"),
        corr_file=None,
        random_corr=False,
        sigma=merged.get("sigma"),
        alpha=merged.get("alpha"),
        beta=merged.get("beta"),
        sample_params=False,
        dim=merged.get("dim"),
        mapping=merged.get("mapping", "linear"),
        sig_lambda=merged.get("lambda"),
        map_beta=merged.get("map_beta"),
    )
    config = ExperimentConfig(
        model=_resolve_model(shim),
        n=merged["voters"],
        d=merged["candidates"],
        replicates=merged["replicates"],
        rules=_parse_rules(merged["rules"]),
        master_seed=merged["seed"],
    )
    report = run_experiment(config, workers=merged.get("workers", 1))
    _emit_json(report.to_json_dict(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze / fit / quantize


def cmd_analyze(args) -> int:
    profile = _load_input(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for i in range(profile.d):
        hist = histogram(profile, i, bins=args.bins)
        write_histogram_csv(hist, out_dir / f"hist_c{i + 1}.csv")
        if args.svg:
            (out_dir / f"hist_c{i + 1}.svg").write_text(
                histogram_svg(hist, title=f"candidate {i + 1}")
            )

    for pair_text in args.pair:
        i, j = _parse_pair(pair_text, profile.d)
        pairs = pairwise_scatter(profile, i, j)
        write_scatter_csv(pairs, out_dir / f"scatter_c{i + 1}_c{j + 1}.csv")
        if args.svg:
            (out_dir / f"scatter_c{i + 1}_c{j + 1}.svg").write_text(
                scatter_svg(pairs, title=f"candidates {i + 1} vs {j + 1}")
            )

    write_report_json(empirical_correlation(profile), out_dir / "correlation.json")
    return EXIT_OK


def _parse_pair(text: str, d: int) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--pair expects 'i,j', got {text!r}")
    i, j = (_parse_index_list(p, d)[0] for p in parts)
    if i == j:
        raise UsageError("--pair needs two distinct candidates")
    return i, j


def cmd_fit(args) -> int:
    profile = _load_input(args)
    do_beta = args.beta or not (args.beta or args.copula)
    do_copula = args.copula or not (args.beta or args.copula)
    payload: dict = {"voters": profile.n, "candidates": profile.d}
    if do_beta:
        payload["beta_params"] = [
            list(fit_beta_moments(profile.values[:, i])) for i in range(profile.d)
        ]
    if do_copula:
        payload["copula_correlation"] = fit_gaussian_copula(profile).tolist()
    _emit_json(payload, args.out)
    return EXIT_OK


def cmd_quantize(args) -> int:
    profile = _load_input(args)
    write_profile_csv(quantize(profile, args.k), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, IndexError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (MatrixError, FitError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
