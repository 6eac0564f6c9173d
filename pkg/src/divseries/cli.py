"""Command-line front end.

    divseries <subcommand> --config cfg.json [--seed N] [--out DIR]
              [--format json|csv|both] [--budget quick|default|thorough]

Exit codes: 0 ok, 2 config/schema error, 3 violated hypothesis,
4 budget exhausted (a partial report is still written).
The worker count for multi-start searches comes from DIVSERIES_WORKERS.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .core import PreconditionError, as_exponent, pnorm
from .cotype import cotype_ratio, estimate_cotype_constant, rademacher_average, sign_max
from .divergence import (
    OperatorFamily,
    WeightSpec,
    build_divergence_witness_T1,
    build_divergence_witness_T2,
    hypothesis_probe,
    partial_sums,
)
from .lemma import LemmaInstance, verify_lemma_bound
from .operators import BUDGETS, MatrixOperator, default_budget, operator_norm
from .report import to_plain, write_report, write_table
from .sharpness import example1_check, example2_check, example3_check

SUBCOMMANDS = ("cotype", "opnorm", "lemma", "theorem1", "theorem2", "sharpness", "probe")


class ConfigError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, message, body, tables):
        super().__init__(message)
        self.body, self.tables = body, tables


def _need(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"missing required key {key!r}")
    return cfg[key]


def _exp(value, key):
    try:
        return as_exponent(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{key}: invalid exponent {value!r}") from exc


def _matrix_operator(spec: dict) -> MatrixOperator:
    try:
        M = np.asarray(_need(spec, "matrix"), dtype=float)
    except ValueError as exc:
        raise ConfigError(f"matrix is not a rectangular numeric array: {exc}") from exc
    if M.ndim != 2:
        raise ConfigError("matrix must be a 2-D array (row-major)")
    return MatrixOperator(M, _exp(spec.get("domain_exponent", 2), "domain_exponent"),
                          _exp(spec.get("codomain_exponent", 2), "codomain_exponent"))


def _weight(spec) -> WeightSpec:
    if not isinstance(spec, dict):
        raise ConfigError("weight must be an object with a 'kind'")
    spec = dict(spec)
    kind = spec.pop("kind", None)
    try:
        return WeightSpec(kind, spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _family(spec: dict, seed: int) -> OperatorFamily:
    if not isinstance(spec, dict):
        raise ConfigError("family must be an object")
    kind = _need(spec, "kind")
    kwargs = {"kind": kind, "seed": int(spec.get("seed", seed))}
    if "weight" in spec:
        kwargs["weight"] = _weight(spec["weight"])
    for key in ("k_max", "depth", "dim", "rows"):
        if key in spec:
            kwargs[key] = int(spec[key])
    for key in ("s", "codomain_exponent"):
        if key in spec:
            kwargs[key] = _exp(spec[key], key)
    if kind == "explicit":
        mats = spec.get("matrices", [])
        if not mats:
            raise PreconditionError("at least one A_k != 0 is required (empty family)")
        kwargs["matrices"] = mats
    try:
        fam = OperatorFamily(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if kind == "explicit" and not any(np.any(m) for m in fam.matrices):
        raise PreconditionError("at least one A_k != 0 is required (all operators are zero)")
    return fam


def _estimate(est) -> dict:
    return {"certified_lower": est.certified_lower, "estimate": est.estimate,
            "exact": est.exact, "provenance": est.method,
            "witness": to_plain(est.witness.coords), "evaluations": est.evaluations}


def run_cotype(cfg, seed, budget):
    rho = _exp(cfg.get("rho", 2), "rho")
    s = _exp(cfg.get("norm_exponent", 2), "norm_exponent")
    body = {"rho": rho, "norm_exponent": s}
    if "vectors" in cfg:
        V = np.asarray(cfg["vectors"], dtype=float)
        value, eps = sign_max(V, s)
        body.update(sign_max=value, signs=list(eps.signs), provenance="exact:sign-enumeration",
                    rademacher_average=rademacher_average(V, s),
                    cotype_ratio=cotype_ratio(V, rho, s))
    if "estimate" in cfg:
        e = cfg["estimate"]
        est = estimate_cotype_constant(int(_need(e, "dim")), s, rho,
                                       n_max=int(e.get("n_max", 6)),
                                       trials=int(e.get("trials", 64)), seed=seed)
        body["estimate"] = {"constant_upper": est.constant_upper,
                            "analytic_lower": est.analytic_lower,
                            "minimizing_tuple": [v.coords for v in est.minimizing_tuple],
                            "budget_used": est.budget_used, "provenance": "search:witnessed-upper"}
    if len(body) == 2:
        raise ConfigError("cotype config needs 'vectors' or 'estimate'")
    return body, {}


def run_opnorm(cfg, seed, budget):
    A = _matrix_operator(cfg)
    est = operator_norm(A, budget, seed, method=cfg.get("method", "auto"))
    adj = operator_norm(A.adjoint(), budget, seed)
    return {"domain_exponent": A.domain_exponent, "codomain_exponent": A.codomain_exponent,
            "norm": _estimate(est), "adjoint_norm": _estimate(adj)}, {}


def run_lemma(cfg, seed, budget):
    summands = [_matrix_operator(s) for s in _need(cfg, "summands")]
    if not summands:
        raise PreconditionError("at least one A_k != 0 is required (empty family)")
    inst = LemmaInstance(summands, _exp(cfg.get("rho", 2), "rho"), float(cfg.get("C", 1.0)),
                         _exp(cfg.get("q", "inf"), "q"))
    ok, rep = verify_lemma_bound(inst, budget, seed)
    if rep.zero:
        raise PreconditionError("at least one A_k != 0 is required (all summands are zero)")
    body = {"achieved_ratio": rep.achieved_ratio, "bound": rep.bound, "r": rep.r,
            "delta": rep.delta, "weights": rep.weights, "signs": list(rep.signs.signs),
            "norms": rep.norms, "norm_provenance": rep.norm_methods,
            "chain_value": rep.chain_value, "conditional_on_C": rep.conditional_on_C,
            "witness": [b.coords for b in rep.witness.blocks],
            "verdict": "pass" if ok else "fail",
            "provenance": "constructive witness; bound from certified norms"}
    return body, {}


def _probe_body(rep):
    return {"p": rep.p, "checkpoints": rep.checkpoints, "sums": rep.sums, "slope": rep.slope,
            "verdict": rep.verdict, "target": rep.target, "notes": rep.notes}


def run_theorem1(cfg, seed, budget):
    fam = _family(_need(cfg, "family"), seed)
    x0, rep = build_divergence_witness_T1(
        fam, _exp(_need(cfg, "p"), "p"), _exp(_need(cfg, "rho"), "rho"),
        float(cfg.get("C", 1.0)), float(cfg.get("target", 100.0)), budget, seed,
        cfg.get("checkpoints"))
    body = {"report": _probe_body(rep), "witness_norm": pnorm(x0, fam.s),
            "witness_support": int(np.count_nonzero(x0)), "family": fam.to_dict(),
            "provenance": "direct evaluation of partial sums"}
    tables = {"sums": (["N", "S_N"], rep.table())}
    if rep.verdict != "growing":
        raise BudgetExhausted("target not reached within k_max", body, tables)
    return body, tables


def run_theorem2(cfg, seed, budget):
    fam = _family(_need(cfg, "family"), seed)
    x0, plan, br = build_divergence_witness_T2(
        fam, _exp(_need(cfg, "p0"), "p0"), _exp(_need(cfg, "rho"), "rho"),
        float(cfg.get("C", 1.0)), tuple(cfg.get("targets", (1.0, 2.0, 3.0))), budget, seed,
        cfg.get("schedule"), int(cfg.get("first_block", 16)), int(cfg.get("growth", 8)))
    body = {"plan": plan, "blocks": br, "all_met": br.all_met, "family": fam.to_dict(),
            "provenance": "direct evaluation of block norms"}
    rows = [(n + 1, plan.ends[n] + 1, plan.ends[n + 1], float(plan.p_schedule[n]),
             br.achieved[n], br.targets[n]) for n in range(len(br.achieved))]
    tables = {"blocks": (["block", "start", "end", "p_n", "achieved", "target"], rows)}
    if not (plan.complete and br.all_met):
        raise BudgetExhausted("block plan incomplete or targets unmet", body, tables)
    return body, tables


def run_sharpness(cfg, seed, budget):
    example = int(_need(cfg, "example"))
    weight = _weight(_need(cfg, "weight"))
    p = _exp(_need(cfg, "p"), "p")
    n = int(cfg.get("n_samples", 100))
    cps = cfg.get("checkpoints")
    if example == 1:
        rep = example1_check(weight, p, checkpoints=cps, n_samples=n, seed=seed)
    elif example == 2:
        rep = example2_check(_exp(_need(cfg, "s"), "s"), p, weight, checkpoints=cps,
                             n_samples=n, seed=seed)
    elif example == 3:
        rep = example3_check(_exp(_need(cfg, "s"), "s"), p, weight, int(cfg.get("K", 12)),
                             checkpoints=cps, n_samples=n, seed=seed)
    else:
        raise ConfigError("example must be 1, 2 or 3")
    body = {"example": example, "p": rep.p, "r": rep.r, "weight_lr_norm": rep.weight_lr_norm,
            "norms_match": rep.norms_match, "max_norm_error": rep.max_norm_error,
            "within_ceiling": rep.within_ceiling, "max_ratio": rep.max_ratio,
            "passed": rep.passed, "extra": rep.extra, "provenance": "analytic Hölder ceiling"}
    rows = [(r["sample"], r["N"], r["S_N"], r["ceiling"]) for r in rep.rows]
    return body, {"ceiling": (["sample", "N", "S_N", "ceiling"], rows)}


def run_probe(cfg, seed, budget):
    fam = _family(_need(cfg, "family"), seed)
    cps = cfg.get("checkpoints")
    target = cfg.get("target")
    if "x" in cfg:
        rep = partial_sums(fam, cfg["x"], _exp(_need(cfg, "p"), "p"), cps, target)
    else:
        rep = hypothesis_probe(fam, _exp(_need(cfg, "r"), "r"), cps, target)
    return {"report": _probe_body(rep), "family": fam.to_dict()}, {"sums": (["N", "S_N"], rep.table())}


RUNNERS = {
    "cotype": run_cotype, "opnorm": run_opnorm, "lemma": run_lemma,
    "theorem1": run_theorem1, "theorem2": run_theorem2,
    "sharpness": run_sharpness, "probe": run_probe,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="divseries", description=__doc__.splitlines()[0])
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("--config", required=True, type=Path)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", type=Path, default=Path("."))
    ap.add_argument("--format", choices=("json", "csv", "both"), default="json")
    ap.add_argument("--budget", choices=sorted(BUDGETS), default="default")
    ap.add_argument("--version", action="version", version=__version__)
    return ap


def _emit(args, body, tables):
    args.out.mkdir(parents=True, exist_ok=True)
    full = {"subcommand": args.subcommand, "seed": args.seed_used, **body}
    if args.format in ("json", "both"):
        write_report(args.out / f"{args.subcommand}.json", full)
    if args.format in ("csv", "both"):
        for name, (header, rows) in tables.items():
            write_table(args.out / f"{args.subcommand}_{name}.csv", header, rows)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = json.loads(args.config.read_text())
        if not isinstance(cfg, dict):
            raise ConfigError("config root must be an object")
        args.seed_used = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        budget = replace(BUDGETS[args.budget], workers=default_budget().workers)
        body, tables = RUNNERS[args.subcommand](cfg, args.seed_used, budget)
    except (ConfigError, json.JSONDecodeError, OSError, KeyError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 3
    except BudgetExhausted as exc:
        _emit(args, exc.body, exc.tables)
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 4
    _emit(args, body, tables)
    return 0


if __name__ == "__main__":
    sys.exit(main())
