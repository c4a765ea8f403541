"""Scenario orchestration: config in, report out."""

from __future__ import annotations

import hashlib
from typing import Any, Dict

from .adversary import (AdversaryStrategy, CoalitionSpec, OutOfModelError, binding_attack_exhaustive,
                        blind_measure_resend, commit_hiding_bound, expungement_attack_run,
                        hiding_advantage, snoop_with_theta)
from .config import ScenarioConfig
from .params import Flag, validate_params
from .protocol import AdversaryHooks, run_protocol
from .reporting import ScenarioReport

ADVANTAGE_MIN_TRIALS = 1000


def _hooks(cfg: ScenarioConfig) -> AdversaryHooks:
    sp = cfg.strategy_params
    if cfg.strategy == "honest":
        return AdversaryHooks()
    if cfg.strategy == "depolarizing":
        hops = tuple(h.strip() for h in sp.get("hops", "distribute").split(",") if h.strip())
        return AdversaryHooks(depolarizing_eps=float(sp.get("eps", 0.0)), noise_hops=hops)
    if cfg.strategy == "snoop":
        return AdversaryHooks(corrupt_nodes=frozenset(cfg.corrupt), node_tamper=snoop_with_theta)
    if cfg.strategy == "blind_measure_resend":
        corrupt = cfg.corrupt or tuple(range(1, cfg.params.m + 1))
        return AdversaryHooks(corrupt_nodes=frozenset(corrupt),
                              node_tamper=blind_measure_resend(float(sp.get("fraction", 1.0))))
    raise ValueError(f"strategy {cfg.strategy!r} has no per-run hooks")


def check_in_model(cfg: ScenarioConfig, out_of_model: bool) -> None:
    """Raise OutOfModelError for parameters or corruptions outside the model."""
    if out_of_model:
        return
    report = validate_params(cfg.params)
    if not report.ok:
        raise OutOfModelError("; ".join(report.violations))
    corrupt = cfg.corrupt
    if cfg.strategy == "blind_measure_resend" and not corrupt:
        corrupt = tuple(range(1, cfg.params.m + 1))
    if cfg.strategy != "expungement":
        AdversaryStrategy(corrupt_nodes=frozenset(corrupt)).validate(cfg.params)


def _run_record(i: int, state, res, phase: str, full: bool) -> Dict[str, Any]:
    tr = res.transcript if res is not None else state.transcript
    text = tr.to_jsonl(full)
    rec: Dict[str, Any] = {"run": i, "phase": phase,
                           "commit_flag": (state.commit_flag or Flag.SUCCESS).value,
                           "transcript_digest": hashlib.sha256(text.encode()).hexdigest()[:16]}
    if res is not None:
        rec.update(flag_a=res.flag_a.value, flag_b=res.flag_b.value, c=state.c.to_str(),
                   distance=res.distance)
        if phase == "open":
            rec.update(c_hat=res.c_hat.to_str(), c_match=bool(res.c_hat == state.c))
    return rec, text


def _coalition_spec(cfg: ScenarioConfig) -> CoalitionSpec:
    nodes = tuple(sorted(int(m[1:]) for m in cfg.coalition if m.startswith("T")))
    has_bob = "bob" in cfg.coalition
    return CoalitionSpec(nodes=nodes, has_z=has_bob, has_seed=has_bob)


def _apply_checks(cfg: ScenarioConfig, agg: Dict[str, Any]) -> Dict[str, bool]:
    out: Dict[str, bool] = {}
    for name, limit in sorted(cfg.checks.items()):
        if name == "max_advantage_sigmas":
            adv, sig, bound = agg.get("advantage"), agg.get("advantage_sigma"), agg.get("advantage_bound")
            out[name] = bool(adv is not None and adv <= (bound or 0.0) + limit * sig)
            continue
        key = name.split("_", 1)[1]
        value = agg.get(key)
        if value is None:
            out[name] = False
        elif name.startswith("min_"):
            out[name] = bool(value >= limit)
        else:
            out[name] = bool(value <= limit)
    return out


def run_scenario(cfg: ScenarioConfig, out_of_model: bool = False,
                 full_transcript: bool = False) -> ScenarioReport:
    """Run commit plus the configured phase ``cfg.trials`` times and aggregate.

    ``binding`` and ``expungement`` strategies run their dedicated
    experiments instead of plain protocol runs.
    """
    check_in_model(cfg, out_of_model)
    params, code = cfg.params, cfg.resolve_code()
    report = ScenarioReport()
    agg: Dict[str, Any] = {}
    sp = cfg.strategy_params

    if cfg.strategy == "binding":
        budget = int(sp.get("budget", params.accept_threshold))
        threshold = int(sp["threshold"]) if "threshold" in sp else None
        res = binding_attack_exhaustive(params, code, budget, threshold)
        agg.update(trials=res.strings, equivocation=res.max_probability)
    elif cfg.strategy == "expungement":
        res = expungement_attack_run(params, code, cfg.trials, cfg.seed,
                                     float(sp.get("fraction", 1.0)))
        agg.update(trials=res.trials, erase_rate=res.accept_rate, exact_accept=res.exact_accept)
        if res.advantage_accepted is not None:
            adv = res.advantage_accepted
            agg.update(advantage=adv.estimate, advantage_sigma=max(adv.sigma, adv.null_sigma),
                       advantage_bound=0.0)
    else:
        hooks = _hooks(cfg)
        for i in range(cfg.trials):
            state, res = run_protocol(params, code, cfg.seed, cfg.phase, hooks, i,
                                      check_params=not out_of_model)
            rec, text = _run_record(i, state, res, cfg.phase, full_transcript)
            report.records.append(rec)
            report.transcripts.append(text)
        if cfg.trials:
            recs = report.records
            n = len(recs)
            if cfg.phase == "open":
                agg["success_rate"] = sum(r.get("flag_b") == "success" and r.get("c_match") is True
                                          for r in recs) / n
                agg["c_agreement"] = sum(r.get("c_match") is True for r in recs) / n
            else:
                agg["erase_rate"] = sum(r.get("flag_a") == "erase" for r in recs) / n
                agg["success_rate"] = agg["erase_rate"]
            agg["trials"] = n
        if cfg.coalition:
            spec = _coalition_spec(cfg)
            est = hiding_advantage(params, code, spec, max(cfg.trials, ADVANTAGE_MIN_TRIALS),
                                   cfg.seed, cfg.phase, "batch", f"scenario_{cfg.phase}",
                                   commit_hiding_bound(params, spec))
            agg.update(advantage=est.estimate, advantage_sigma=max(est.sigma, est.null_sigma),
                       advantage_bound=est.bound)

    if agg:
        report.checks = _apply_checks(cfg, agg)
        agg["checks_passed"] = report.passed
        agg["config_digest"] = cfg.digest()
        report.aggregate = agg
    elif cfg.checks:
        report.checks = {name: False for name in cfg.checks}
    return report
