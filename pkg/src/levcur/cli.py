"""Benchmark CLI: the four experiment families plus a matrix generator.

Subcommands
-----------
llsp-bench
    Sketched least-squares residual ratios per (input class, multiplier, h).
cur-bench
    Sampled CUR error ratios for svd vs uniform score sources, plus the
    indicator-matrix adversarial demonstration.
refine-bench
    Per-iteration distance / error-ratio / time curves for the three
    refinement solvers.
lscore-perturb
    Leverage-score stability of low-rank approximations of the ill-posed
    test matrices and perturbed factor-Gaussian inputs.
gen
    Write a generated matrix in the plain text format.

Every CSV has a header row and a trailing ``# seed=... version=...`` comment.
Given the same configuration and seed the output is byte-identical;
wall-clock columns are written as 0.000 under ``--no-timing`` (the mode the
byte-identity guarantee and tests use).  Exit codes: 0 success, 2
configuration error, 3 data error.
"""

import argparse
import csv
import sys
import time

import numpy as np

from . import __version__
from .cur import cur_error, cur_leverage
from .datasets import DatasetFormatError, DatasetIOError, DatasetSpec, load_dataset
from .generators import (
    REGUTOOLS_NAMES,
    gen_cauchy,
    gen_delta,
    gen_gaussian_llsp,
    gen_ill_conditioned,
    gen_regutools,
    gen_single_layer,
    numerical_rank,
)
from .linalg import svd, truncate
from .lstsq import LlspInstance, sketch_solve, solve_exact
from .matio import save_matrix
from .random_matrices import FactorGaussianSpec, factor_gaussian, gaussian, make_rng, perturb
from .refine import MetricContext, init_factor, refine
from .sampling import DegenerateSampleError, scores_of_lra, scores_of_matrix
from .sketch import build_sketch

MULTIPLIERS = {"perm": "perm_rows", "blockperm": "block_perm", "asph": "asph",
               "gaussian": "gaussian"}

DATASET_FILES = {"wine": "wine.csv", "housing": "housing.csv"}

# Table rows of the score-perturbation study: problem -> target ranks.
LSCORE_RANKS = {
    "baart": (4, 6, 8),
    "foxgood": (8, 10, 12),
    "gravity": (23, 25, 27),
    "laplace": (23, 25, 27),
    "shaw": (10, 12, 14),
    "wing": (2, 4, 6),
}
LSCORE_FG_RANKS = (25, 50, 75)


class ConfigError(ValueError):
    pass


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        if np.isinf(x):
            return "inf"
        return f"{x:.10g}"
    return str(x)


def _write_csv(path, header, rows, seed):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
        fh.write(f"# seed={seed} version={__version__}\n")


def _parse_sizes(spec):
    out = []
    for tok in spec.split(","):
        try:
            m, d = tok.split(":")
            out.append((int(m), int(d)))
        except ValueError:
            raise ConfigError(f"bad size {tok!r}; expected m:d") from None
    return out


def _llsp_instance(input_class, m, d, seed, dataset_path):
    if input_class == "gaussian":
        return gen_gaussian_llsp(m, d, make_rng(seed, 1))
    if input_class == "ill":
        rng = make_rng(seed, 2)
        A = gen_ill_conditioned(m, d, rng)
        w = rng.standard_normal(d)
        v = rng.standard_normal(m)
        Aw = A @ w
        b = Aw / np.linalg.norm(Aw) + 0.001 * v / np.linalg.norm(v)
        return LlspInstance(A=A, b=b)
    if input_class in DATASET_FILES:
        if dataset_path is None:
            raise DatasetIOError(f"--dataset-path required for {input_class}")
        path = f"{dataset_path}/{DATASET_FILES[input_class]}"
        return load_dataset(DatasetSpec(name=input_class, path=path),
                            make_rng(seed, 3))
    raise ConfigError(f"unknown input class {input_class!r}")


def run_llsp_bench(cfg):
    """Rows: input_class, multiplier, m, d, h, trials, mean_ratio,
    std_ratio, mean_ms."""
    rows = []
    for input_class in cfg.input_classes:
        # dataset classes have fixed shapes; run them once
        sizes = cfg.sizes[:1] if input_class in DATASET_FILES else cfg.sizes
        for m, d in sizes:
            try:
                inst = _llsp_instance(input_class, m, d, cfg.seed,
                                      cfg.dataset_path)
            except (DatasetIOError, DatasetFormatError) as exc:
                print(f"warning: skipping {input_class}: {exc}",
                      file=sys.stderr)
                rows.append([input_class, "SKIPPED", m, d, "", 0, "", "", ""])
                continue
            optimal = solve_exact(inst).residual
            for mult in cfg.multipliers:
                kind = MULTIPLIERS[mult]
                for h in cfg.h_values:
                    s = min(h * inst.d, inst.m)
                    ratios = np.empty(cfg.trials)
                    ms = np.empty(cfg.trials)
                    for t in range(cfg.trials):
                        rng = make_rng(cfg.seed, 1000 + t)
                        t0 = time.perf_counter()
                        op = build_sketch(kind, s, inst.m, rng,
                                          depth=cfg.asph_depth)
                        res = sketch_solve(inst, op, optimal=optimal)
                        ms[t] = (time.perf_counter() - t0) * 1e3
                        ratios[t] = res.ratio
                    rows.append([
                        input_class, mult, inst.m, inst.d, h, cfg.trials,
                        float(np.mean(ratios)), float(np.std(ratios)),
                        float(np.mean(ms)) if cfg.timing else 0.0,
                    ])
    _write_csv(cfg.out, ["input_class", "multiplier", "m", "d", "h",
                         "trials", "mean_ratio", "std_ratio", "mean_ms"],
               rows, cfg.seed)


def _cur_input(name, n, r, seed):
    if name == "factor_gaussian":
        spec = FactorGaussianSpec(kind="two_sided", m=n, n=n, rho=r,
                                  sigma=np.ones(r))
        M, _ = factor_gaussian(spec, make_rng(seed, 10))
        return perturb(M, 1e-5, make_rng(seed, 11))
    if name == "cauchy":
        return gen_cauchy(n, make_rng(seed, 12))
    if name == "single_layer":
        return gen_single_layer(n)
    if name in REGUTOOLS_NAMES:
        return gen_regutools(name, n)
    raise ConfigError(f"unknown cur input {name!r}")


def run_cur_bench(cfg):
    """Rows: input_class, r, k, l, score_source, trials, mean_absF,
    mean_ratio, p90_ratio."""
    rows = []
    k = l = cfg.samples
    for name in cfg.inputs:
        M = _cur_input(name, cfg.size, cfg.rank, cfg.seed)
        tailF = truncate(svd(M), cfg.rank).tailF
        for source in ("svd", "uniform"):
            absfs, ratios = [], []
            for t in range(cfg.trials):
                try:
                    f = cur_leverage(M, cfg.rank, k=k, l=l,
                                     score_source=source,
                                     rng=make_rng(cfg.seed, 2000 + t))
                except DegenerateSampleError:
                    continue
                absF, ratio = cur_error(M, f, tailF=tailF)
                absfs.append(absF)
                ratios.append(ratio if ratio is not None else np.inf)
            rows.append([
                name, cfg.rank, k, l, source, len(ratios),
                float(np.mean(absfs)) if absfs else "",
                float(np.mean(ratios)) if ratios else "",
                float(np.quantile(ratios, 0.9)) if ratios else "",
            ])
    rows.append(_delta_adversarial_row(cfg))
    _write_csv(cfg.out, ["input_class", "r", "k", "l", "score_source",
                         "trials", "mean_absF", "mean_ratio", "p90_ratio"],
               rows, cfg.seed)


def _delta_adversarial_row(cfg):
    """Exhibit the sublinear-path failure on an indicator-family input."""
    m = n = 64
    r, k, l = 1, 8, 8
    base = 1e-6 * gaussian(m, n, make_rng(cfg.seed, 3000))
    probe = cur_leverage(base, r, k=k, l=l, score_source="uniform",
                         rng=make_rng(cfg.seed, 3001))
    missed_i = next(i for i in range(m) if i not in set(probe.row_idx))
    missed_j = next(j for j in range(n) if j not in set(probe.col_idx))
    M_hard = base + gen_delta(m, n, missed_i, missed_j)
    f = cur_leverage(M_hard, r, k=k, l=l, score_source="uniform",
                     rng=make_rng(cfg.seed, 3001))
    max_err = float(np.max(np.abs(M_hard - f.reconstruct())))
    return ["delta_adversarial", r, k, l, "uniform", 1, max_err, max_err, max_err]


REFINE_INPUTS = {
    "single_layer": lambda n, seed: gen_single_layer(n),
    "cauchy": lambda n, seed: gen_cauchy(n, make_rng(seed, 20)),
    "shaw": lambda n, seed: gen_regutools("shaw", n),
}


def _parse_refine_inputs(spec):
    out = []
    for tok in spec.split(","):
        try:
            name, n, r = tok.split(":")
            out.append((name, int(n), int(r)))
        except ValueError:
            raise ConfigError(f"bad input {tok!r}; expected name:n:r") from None
        if out[-1][0] not in REFINE_INPUTS:
            raise ConfigError(f"unknown refine input {out[-1][0]!r}")
    return out


def run_refine_bench(cfg):
    """Rows: input_class, solver, r, l, iter, distA, distB, err_ratio, ms
    (averaged over repetitions)."""
    rows = []
    for name, n, r in cfg.inputs:
        M = REFINE_INPUTS[name](n, cfg.seed)
        metrics = MetricContext(M, r)
        l = 15 * r
        for solver in cfg.solvers:
            per_iter = [[] for _ in range(cfg.iters + 1)]
            for rep in range(cfg.reps):
                rng = make_rng(cfg.seed, 4000 + rep)
                A0 = init_factor(M, r, rng)
                state = refine(M, A0, r, cfg.iters, l=l, solver=solver,
                               rng=rng, metrics=metrics)
                for rec in state.history:
                    per_iter[rec.iter].append(rec)
            for it, recs in enumerate(per_iter):
                rows.append([
                    name, solver, r, l, it,
                    float(np.mean([x.distA for x in recs])),
                    float(np.mean([x.distB for x in recs])),
                    float(np.mean([x.err_ratio for x in recs])),
                    float(np.mean([x.millis for x in recs])) if cfg.timing else 0.0,
                ])
    _write_csv(cfg.out, ["input_class", "solver", "r", "l", "iter", "distA",
                         "distB", "err_ratio", "ms"], rows, cfg.seed)


def _lscore_input(name, n, r, seed):
    if name == "factor_gaussian":
        spec = FactorGaussianSpec(kind="two_sided", m=n, n=n, rho=r,
                                  sigma=np.ones(r))
        M, _ = factor_gaussian(spec, make_rng(seed, 30 + r))
        return perturb(M, 1e-6, make_rng(seed, 60 + r))
    return gen_regutools(name, n)


def run_lscore_perturb(cfg):
    """Rows: input_class, r, nrank, trials, lra_err_mean, lra_err_std,
    score_err_mean, score_err_std."""
    rows = []
    cases = [(name, r) for name in cfg.inputs
             for r in (LSCORE_RANKS.get(name) or LSCORE_FG_RANKS)]
    for name, r in cases:
        M = _lscore_input(name, cfg.size, r, cfg.seed)
        nrank = numerical_rank(M)
        normF = float(np.linalg.norm(M))
        # exact rank-r column scores, computed once and reused as the
        # sampling distribution (identical to per-trial svd-mode scores)
        _, col_true = scores_of_matrix(M, r)
        lra_errs, score_errs = [], []
        for t in range(cfg.trials):
            try:
                f = cur_leverage(M, r, score_source="supplied",
                                 scores=col_true,
                                 rng=make_rng(cfg.seed, 5000 + t))
                _, col_lra = scores_of_lra(f.C @ f.U, f.R, r=r)
            except DegenerateSampleError:
                continue
            lra_errs.append(
                float(np.linalg.norm(M - f.reconstruct())) / normF
            )
            score_errs.append(
                float(np.max(np.abs(col_lra.gamma - col_true.gamma)))
            )
        rows.append([
            name, r, nrank, len(lra_errs),
            float(np.mean(lra_errs)), float(np.std(lra_errs)),
            float(np.mean(score_errs)), float(np.std(score_errs)),
        ])
    _write_csv(cfg.out, ["input_class", "r", "nrank", "trials",
                         "lra_err_mean", "lra_err_std", "score_err_mean",
                         "score_err_std"], rows, cfg.seed)


GEN_NAMES = ("gaussian", "ill", "cauchy", "single_layer", "delta") + REGUTOOLS_NAMES


def run_gen(cfg):
    name = cfg.name
    if name == "gaussian":
        M = gaussian(cfg.m or cfg.n, cfg.d or cfg.n, make_rng(cfg.seed))
    elif name == "ill":
        M = gen_ill_conditioned(cfg.m or cfg.n, cfg.d or 20, make_rng(cfg.seed))
    elif name == "cauchy":
        M = gen_cauchy(cfg.n, make_rng(cfg.seed))
    elif name == "single_layer":
        M = gen_single_layer(cfg.n)
    elif name == "delta":
        M = gen_delta(cfg.m or cfg.n, cfg.d or cfg.n, cfg.i, cfg.j)
    elif name in REGUTOOLS_NAMES:
        M = gen_regutools(name, cfg.n)
    else:
        raise ConfigError(f"unknown generator {name!r}")
    save_matrix(cfg.out, M)


def _add_common(p, trials_default=100):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=trials_default)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--no-timing", dest="timing", action="store_false",
                   help="write 0.000 in wall-clock columns (byte-reproducible)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="levcur",
        description="benchmarks for sketched least squares, sampled CUR, "
                    "and alternating refinement",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("llsp-bench", help="sketched least-squares ratios")
    _add_common(p)
    p.add_argument("--sizes", default="4096:50",
                   help="comma-separated m:d pairs")
    p.add_argument("--multiplier", default="perm,blockperm,asph,gaussian",
                   help="comma-separated subset of perm,blockperm,asph,gaussian")
    p.add_argument("--h-values", default="2,3,4,5,6")
    p.add_argument("--input-class", default="gaussian,ill",
                   help="comma-separated subset of gaussian,ill,wine,housing")
    p.add_argument("--dataset-path", default=None,
                   help="directory holding wine.csv / housing.csv")
    p.add_argument("--asph-depth", type=int, default=3)

    p = sub.add_parser("cur-bench", help="sampled CUR error ratios")
    _add_common(p, trials_default=20)
    p.add_argument("--inputs", default="factor_gaussian,shaw,cauchy")
    p.add_argument("--size", type=int, default=400)
    p.add_argument("--rank", type=int, default=10)
    p.add_argument("--samples", type=int, default=None,
                   help="row/column sample count k = l (default 15 r)")

    p = sub.add_parser("refine-bench", help="alternating refinement curves")
    _add_common(p)
    p.add_argument("--inputs",
                   default="single_layer:3000:11,cauchy:2000:10,shaw:1000:10",
                   help="comma-separated name:n:r triples")
    p.add_argument("--solvers", default="leverage,gaussian_embed,exact")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--iters", type=int, default=5)

    p = sub.add_parser("lscore-perturb", help="leverage-score stability study")
    _add_common(p)
    p.add_argument("--inputs",
                   default="baart,foxgood,gravity,laplace,shaw,wing,"
                           "factor_gaussian")
    p.add_argument("--size", type=int, default=1000)

    p = sub.add_parser("gen", help="write a generated matrix (text format)")
    p.add_argument("--name", required=True, choices=GEN_NAMES)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    return ap


def main(argv=None):
    ap = build_parser()
    cfg = ap.parse_args(argv)
    try:
        if cfg.command == "llsp-bench":
            cfg.sizes = _parse_sizes(cfg.sizes)
            cfg.multipliers = sorted(cfg.multiplier.split(","))
            for mname in cfg.multipliers:
                if mname not in MULTIPLIERS:
                    raise ConfigError(f"unknown multiplier {mname!r}")
            cfg.h_values = [int(h) for h in cfg.h_values.split(",")]
            cfg.input_classes = sorted(cfg.input_class.split(","))
            if cfg.trials < 1:
                raise ConfigError("--trials must be >= 1")
            run_llsp_bench(cfg)
        elif cfg.command == "cur-bench":
            cfg.inputs = sorted(cfg.inputs.split(","))
            if cfg.samples is None:
                cfg.samples = 15 * cfg.rank
            run_cur_bench(cfg)
        elif cfg.command == "refine-bench":
            cfg.inputs = _parse_refine_inputs(cfg.inputs)
            cfg.solvers = sorted(cfg.solvers.split(","))
            from .refine import SOLVERS
            for s in cfg.solvers:
                if s not in SOLVERS:
                    raise ConfigError(f"unknown solver {s!r}")
            run_refine_bench(cfg)
        elif cfg.command == "lscore-perturb":
            cfg.inputs = sorted(cfg.inputs.split(","))
            for name in cfg.inputs:
                if name != "factor_gaussian" and name not in LSCORE_RANKS:
                    raise ConfigError(f"unknown lscore input {name!r}")
            run_lscore_perturb(cfg)
        elif cfg.command == "gen":
            run_gen(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DatasetIOError, DatasetFormatError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
