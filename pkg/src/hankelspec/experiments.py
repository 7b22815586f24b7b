"""Command workflows behind the CLI, each producing a CSV report."""
from __future__ import annotations

import io
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import bound_baseline, bound_dim_free, bound_factor, bound_opt, bound_prefix, bound_standard
from .formats import parse_model, read_sample, write_model, write_sample
from .hankel import empirical_hankel, exact_hankel, spectral_norm_diff, write_hankel
from .lang import basis
from .sampling import sample
from .spectral import (largest_principal_sine, l1_distance_upto, learn_from_hankel, stewart_bound,
                       subspace_distance, truncated_svd)
from .wfa import PfaForm, moment

FORMAT_TAG = "hankelspec-csv v1"


class UsageError(ValueError):
    """Missing or inconsistent command-line configuration."""


@dataclass
class ExperimentConfig:
    model: str | None = None
    mode: str = "standard"
    eta: float = 0.0
    l_u: int = 4
    l_v: int = 4
    n: int = 20000
    trials: int = 1
    delta: float = 0.05
    seed: int = 0
    rank: int | None = None
    out: str | None = None
    exact: bool = False
    s1: float | None = None
    s2: float | None = None
    baseline_m: float | None = None
    baseline_d: int | None = None
    sample: str | None = None
    metrics: str | None = None
    eval_len: int = 6
    moments_k: list = field(default_factory=lambda: [1, 2, 3])

    @property
    def l(self) -> int:
        return max(self.l_u, self.l_v)


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial seed: first 64-bit word of ``SeedSequence([seed, trial])``."""
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, np.uint64)[0])


def _num(x, digits=6) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), f".{digits}g")
    return str(x)


def render_csv(command: str, config: ExperimentConfig, columns: list, rows: list, precise=("t",)) -> str:
    buf = io.StringIO()
    echo = " ".join(f"{k}={v}" for k, v in asdict(config).items() if v is not None)
    buf.write(f"# {FORMAT_TAG} hankelspec={__version__} command={command} {echo}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_num(row.get(c), 10 if c in precise else 6) for c in columns) + "\n")
    return buf.getvalue()


def _emit(text: str, out: str | None) -> str:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    return text


BOUND_COLUMNS = ["bound", "mode", "eta", "l", "N", "delta", "t", "sigma2", "b", "value"]


def _bound_row(kind, cfg, report=None, value=None):
    row = {"bound": kind, "mode": cfg.mode, "eta": cfg.eta, "l": cfg.l, "N": cfg.n, "delta": cfg.delta}
    if report is not None:
        row.update(t=report.t, sigma2=report.sigma2_used, b=report.b_used, value=report.value)
    else:
        row["value"] = value
    return row


def bound_rows(cfg: ExperimentConfig) -> list:
    rows = []
    rep = parse_model(cfg.model) if cfg.model else None
    U, V = basis_pair(cfg, rep) if rep is not None else (None, None)
    l_cap = cfg.l if cfg.mode == "prefix" else None
    if rep is not None:
        rows.append(_bound_row("dim_free", cfg, bound_dim_free(rep, cfg.mode, cfg.eta, cfg.n, cfg.delta, l_cap)))
        rows.append(_bound_row("opt_uv", cfg, bound_opt(rep, U, V, cfg.mode, cfg.eta, cfg.n, cfg.delta, l_cap)))
    elif cfg.s2 is not None:
        if cfg.mode == "standard":
            report = bound_standard(cfg.s2, cfg.n, cfg.delta)
        elif cfg.s1 is None:
            raise UsageError(f"--s1 is required for mode {cfg.mode}")
        elif cfg.mode == "prefix":
            report = bound_prefix(cfg.s1, cfg.s2, cfg.eta, cfg.n, cfg.delta, l_cap)
        else:
            report = bound_factor(cfg.s1, cfg.s2, cfg.eta, cfg.n, cfg.delta)
        rows.append(_bound_row("dim_free", cfg, report))
    if cfg.baseline_m is not None or cfg.baseline_d is not None:
        if cfg.baseline_m is None or cfg.baseline_d is None:
            raise UsageError("--baseline-m and --baseline-d must be given together")
        value = bound_baseline(cfg.baseline_m, cfg.baseline_d, cfg.n, cfg.delta)
        rows.append(_bound_row("baseline", cfg, value=value))
    if not rows:
        raise UsageError("bounds needs --model, or --s2 (and --s1 for prefix/factor), or --baseline-m/--baseline-d")
    return rows


def cmd_bounds(cfg: ExperimentConfig) -> str:
    return _emit(render_csv("bounds", cfg, BOUND_COLUMNS, bound_rows(cfg)), cfg.out)


def basis_pair(cfg: ExperimentConfig, rep):
    return basis(rep.alphabet, cfg.l_u), basis(rep.alphabet, cfg.l_v)


EXPERIMENT_COLUMNS = ["kind", "trial", "seed", "mode", "eta", "l_u", "l_v", "N", "delta", "observed",
                      "median_observed", "bound_dim_free", "bound_opt", "bound_baseline", "covered", "coverage",
                      "median_ratio"]


def experiment_rows(cfg: ExperimentConfig) -> list:
    if not cfg.model:
        raise UsageError("experiment needs --model")
    if cfg.trials < 1:
        raise UsageError("--trials must be >= 1")
    rep = parse_model(cfg.model)
    pfa = PfaForm(rep)
    U, V = basis_pair(cfg, rep)
    target = exact_hankel(rep, U, V, cfg.mode, cfg.eta)
    l_cap = cfg.l if cfg.mode == "prefix" else None
    dim_free = bound_dim_free(rep, cfg.mode, cfg.eta, cfg.n, cfg.delta, l_cap).value
    opt = bound_opt(rep, U, V, cfg.mode, cfg.eta, cfg.n, cfg.delta, l_cap).value
    baseline = None
    if cfg.baseline_m is not None and cfg.baseline_d is not None:
        baseline = bound_baseline(cfg.baseline_m, cfg.baseline_d, cfg.n, cfg.delta)
    elif cfg.mode == "standard" and min(len(U), len(V)) >= 2:
        baseline = bound_baseline(1.0, min(len(U), len(V)), cfg.n, cfg.delta)
    common = {"mode": cfg.mode, "eta": cfg.eta, "l_u": cfg.l_u, "l_v": cfg.l_v, "N": cfg.n, "delta": cfg.delta}
    rows = []
    observed = []
    for i in range(cfg.trials):
        s = trial_seed(cfg.seed, i)
        h = empirical_hankel(sample(pfa, cfg.n, s), U, V, cfg.mode, cfg.eta)
        norm = spectral_norm_diff(h, target)
        observed.append(norm)
        rows.append({"kind": "trial", "trial": i, "seed": s, **common, "observed": norm,
                     "bound_dim_free": dim_free, "bound_opt": opt, "bound_baseline": baseline,
                     "covered": norm <= dim_free})
    ratios = [dim_free / o for o in observed if o > 0]
    rows.append({"kind": "summary", "trial": cfg.trials, "seed": cfg.seed, **common, "observed": max(observed),
                 "median_observed": statistics.median(observed), "bound_dim_free": dim_free, "bound_opt": opt,
                 "bound_baseline": baseline, "coverage": sum(o <= dim_free for o in observed) / len(observed),
                 "median_ratio": statistics.median(ratios) if ratios else None})
    return rows


def cmd_experiment(cfg: ExperimentConfig) -> str:
    return _emit(render_csv("experiment", cfg, EXPERIMENT_COLUMNS, experiment_rows(cfg)), cfg.out)


LEARN_COLUMNS = ["mode", "eta", "rank", "l_u", "l_v", "N", "source", "l1_distance", "eval_len",
                 "subspace_distance", "sin_largest_angle", "norm_diff", "sigma_min_target", "stewart_bound",
                 "stewart_vacuous"]


def cmd_learn(cfg: ExperimentConfig):
    """Learn a model; returns (learned model, metrics CSV text)."""
    if cfg.rank is None:
        raise UsageError("learn needs --rank")
    target = parse_model(cfg.model) if cfg.model else None
    if cfg.exact:
        if target is None:
            raise UsageError("--exact needs --model")
        source = "exact"
    elif cfg.sample:
        strings = read_sample(cfg.sample)
        source = "file"
    elif target is not None:
        strings = sample(PfaForm(target), cfg.n, cfg.seed).strings
        source = "sampled"
    else:
        raise UsageError("learn needs --sample or --model")
    if target is not None:
        alphabet = target.alphabet
    else:
        alphabet = tuple(sorted({x for w in strings for x in w}))
        if not alphabet:
            raise UsageError("cannot infer an alphabet from a sample of empty strings")
    U, V = basis(alphabet, cfg.l_u), basis(alphabet, cfg.l_v)
    exact = exact_hankel(target, U, V, cfg.mode, cfg.eta) if target is not None else None
    h = exact if cfg.exact else empirical_hankel(strings, U, V, cfg.mode, cfg.eta)
    model = learn_from_hankel(h, cfg.rank, cfg.mode, cfg.eta)
    row = {"mode": cfg.mode, "eta": cfg.eta, "rank": cfg.rank, "l_u": cfg.l_u, "l_v": cfg.l_v,
           "N": getattr(h, "sample_size", None), "source": source, "eval_len": cfg.eval_len}
    if target is not None:
        row["l1_distance"] = l1_distance_upto(model.rep, target, cfg.eval_len)
        ref = truncated_svd(exact, cfg.rank)
        row["subspace_distance"] = subspace_distance(ref.right, model.svd.right)
        row["sin_largest_angle"] = largest_principal_sine(ref.right, model.svd.right)
        row["norm_diff"] = 0.0 if cfg.exact else spectral_norm_diff(h, exact)
        row["sigma_min_target"] = ref.singular_values[-1]
        if ref.singular_values[-1] > 0:
            sb = stewart_bound(row["norm_diff"], ref.singular_values[-1])
            row["stewart_bound"] = sb
            row["stewart_vacuous"] = sb > 1.0
    if cfg.out:
        write_model(cfg.out, model.rep)
    metrics_path = cfg.metrics or (str(cfg.out) + ".metrics.csv" if cfg.out else None)
    text = _emit(render_csv("learn", cfg, LEARN_COLUMNS, [row]), metrics_path)
    return model, text


def cmd_sample(cfg: ExperimentConfig) -> list:
    if not cfg.model:
        raise UsageError("sample needs --model")
    s = sample(PfaForm(parse_model(cfg.model)), cfg.n, cfg.seed, source=Path(cfg.model).stem)
    if cfg.out:
        write_sample(cfg.out, s.strings, s.source, cfg.seed)
    return list(s.strings)


def cmd_hankel(cfg: ExperimentConfig):
    if cfg.sample:
        strings = read_sample(cfg.sample)
    elif cfg.model:
        strings = sample(PfaForm(parse_model(cfg.model)), cfg.n, cfg.seed).strings
    else:
        raise UsageError("hankel needs --sample or --model")
    if cfg.model:
        alphabet = parse_model(cfg.model).alphabet
    else:
        alphabet = tuple(sorted({x for w in strings for x in w})) or ("a",)
    h = empirical_hankel(strings, basis(alphabet, cfg.l_u), basis(alphabet, cfg.l_v), cfg.mode, cfg.eta)
    if cfg.out:
        write_hankel(cfg.out, h)
    return h


MOMENT_COLUMNS = ["k", "mode", "eta", "value"]


def cmd_moments(cfg: ExperimentConfig) -> str:
    if not cfg.model:
        raise UsageError("moments needs --model")
    rep = parse_model(cfg.model)
    rows = [{"k": k, "mode": cfg.mode, "eta": cfg.eta, "value": moment(rep, k, cfg.mode, cfg.eta)}
            for k in cfg.moments_k]
    return _emit(render_csv("moments", cfg, MOMENT_COLUMNS, rows), cfg.out)
