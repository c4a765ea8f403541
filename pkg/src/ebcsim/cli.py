"""Command-line entry point ``ebcsim``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error
(including out-of-model refusals), 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from .adversary import (OutOfModelError, commit_hiding_bound, CoalitionSpec, erase_hiding_advantage,
                        hiding_advantage, local_hiding_check, open_hiding_advantage)
from .baselines import classical_equivocation_attack, quantum_equivocation_attack, simple_protocol_run
from .bits import derive_rng
from .bounds import (correctness_epsilon, expungement_bound, f_epsilon, gv_boundary_root,
                     hiding_min_entropy_bound, weak_binding_delta)
from .codes import CodeError, load_code, save_code, search_random_code
from .config import ConfigError, ScenarioConfig, load_config
from .params import ProtocolParams
from .reporting import emit_results, format_table
from .runner import run_scenario

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--seed", type=int, help="override the scenario seed", **d)
    parser.add_argument("--trials", type=int, help="override the number of runs", **d)
    parser.add_argument("--out-of-model", action="store_true",
                        help="allow parameters or corruptions outside the security model", **d)
    parser.add_argument("--full-transcript", action="store_true",
                        help="include message payloads in transcripts", **d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ebcsim", description="Erasable bit commitment simulator")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run a scenario config")
    p.add_argument("config")
    p.add_argument("--out", help="records file (overrides [output] records)")
    p.add_argument("--format", choices=["json-lines", "csv"])
    p.add_argument("--transcript", help="write all transcripts here as json-lines")

    p = sub.add_parser("attack", parents=[common], help="run an attack experiment on a config")
    p.add_argument("kind", choices=["binding", "expungement", "hiding", "local-hiding"])
    p.add_argument("config")
    p.add_argument("--budget", type=int)
    p.add_argument("--threshold", type=int)
    p.add_argument("--fraction", type=float, default=1.0)
    p.add_argument("--corrupt", default=None, help="comma-separated node indices")
    p.add_argument("--phase", choices=["commit", "open", "erase"], default="commit")
    p.add_argument("--node", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("bounds", parents=[common], help="evaluate closed-form bounds")
    for name, typ, default in [("--n", int, 16), ("--m", int, 8), ("--t", int, 1),
                               ("--k", int, 2), ("--ell", int, 1), ("--gamma", float, 0.0),
                               ("--eps", float, 1e-3), ("--mu-eps", float, 0.0),
                               ("--delta-eps", float, 0.0), ("--delta-prime", float, 0.1),
                               ("--delta-hbc", float, 0.0), ("--epsilon-bind", float, 0.0)]:
        p.add_argument(name, type=typ, default=default)

    p = sub.add_parser("baseline", parents=[common], help="one-trusted-node baselines")
    p.add_argument("mode", choices=["simple-open", "simple-erase", "classical-attack"])
    p.add_argument("--bit", type=int, choices=[0, 1], default=0)

    p = sub.add_parser("codes", help="code search and verification")
    csub = p.add_subparsers(dest="codes_command", required=True)
    s = csub.add_parser("search", parents=[common], help="random search for an [n,k,>=d] code")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--attempts", type=int, default=2000)
    s.add_argument("--out")
    v = csub.add_parser("verify", parents=[common], help="check a code file's claimed distance")
    v.add_argument("path")
    return parser


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.trials is not None:
        cfg.trials = args.trials
    return cfg


def _print(rec) -> None:
    print(json.dumps(rec, sort_keys=True, default=str))


def cmd_run(args) -> int:
    cfg = _load(args)
    report = run_scenario(cfg, args.out_of_model, args.full_transcript)
    out = args.out or cfg.records_path
    if out:
        path = Path(out)
        emit_results(report, path if path.is_absolute() or args.out else cfg.base_dir / path,
                     args.format or cfg.output_format)
    tpath = args.transcript or cfg.transcript_path
    if tpath:
        lines = []
        for i, text in enumerate(report.transcripts):
            lines.append(json.dumps({"run": i}) + "\n" + text)
        Path(tpath).write_text("".join(lines))
    if report.aggregate is not None:
        _print({"aggregate": report.aggregate, "checks": report.checks})
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_attack(args) -> int:
    cfg = _load(args)
    if args.kind == "binding":
        sp = dict(cfg.strategy_params)
        if args.budget is not None:
            sp["budget"] = str(args.budget)
        if args.threshold is not None:
            sp["threshold"] = str(args.threshold)
        cfg = replace(cfg, strategy="binding", strategy_params=sp)
        cfg.checks.setdefault("max_equivocation", 0.0)
        report = run_scenario(cfg, args.out_of_model)
    elif args.kind == "expungement":
        cfg = replace(cfg, strategy="expungement", strategy_params={"fraction": str(args.fraction)})
        report = run_scenario(cfg, args.out_of_model)
    else:
        corrupt = ([int(v) for v in args.corrupt.split(",") if v] if args.corrupt is not None
                   else list(cfg.corrupt))
        if len(corrupt) > cfg.params.t and not args.out_of_model:
            raise OutOfModelError(f"{len(corrupt)} corrupt nodes exceed t={cfg.params.t}")
        code = cfg.resolve_code()
        trials = max(cfg.trials, 1000)
        if args.kind == "local-hiding":
            est = local_hiding_check(cfg.params, code, args.node, trials, cfg.seed)
            ok = est.near_zero()
        elif args.phase == "erase":
            est = erase_hiding_advantage(cfg.params, code, corrupt, trials, cfg.seed)
            ok = est.within_bound()
        elif args.phase == "open":
            est = open_hiding_advantage(cfg.params, code, corrupt, trials, cfg.seed)
            ok = est.within_bound()
        else:
            spec = CoalitionSpec(nodes=tuple(corrupt))
            est = hiding_advantage(cfg.params, code, spec, trials, cfg.seed,
                                   bound=commit_hiding_bound(cfg.params, spec))
            ok = est.within_bound()
        _print(est.as_record() | {"pass": ok})
        return EXIT_OK if ok else EXIT_CHECK
    if args.out:
        emit_results(report, args.out, cfg.output_format)
    _print({"aggregate": report.aggregate, "checks": report.checks})
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_bounds(args) -> int:
    params = ProtocolParams(args.n, args.m, args.t, args.gamma, args.k, 1, args.ell)
    reports = [
        ("gv_boundary_root", {}, gv_boundary_root()),
        ("hiding_min_entropy", {"n": args.n, "k": args.k, "rate": params.corruption_rate},
         hiding_min_entropy_bound(params)),
        ("correctness_epsilon", {"delta_prime": args.delta_prime, "n": args.n, "m": args.m,
                                 "delta_hbc": args.delta_hbc},
         correctness_epsilon(args.delta_prime, args.n, args.m, args.delta_hbc)),
        ("f_epsilon", {"eps": args.eps}, f_epsilon(args.eps)),
    ]
    rows = [{"bound": name, "value": value, "inputs": " ".join(f"{k}={v}" for k, v in inputs.items())}
            for name, inputs, value in reports]
    exp = expungement_bound(args.n, args.k, args.gamma, args.eps, args.mu_eps, args.delta_eps)
    wb = weak_binding_delta(args.ell, args.epsilon_bind)
    for rep in (exp, wb):
        rows.append({"bound": rep.name, "value": rep.value,
                     "inputs": " ".join(f"{k}={v}" for k, v in rep.inputs.items())})
    print(format_table(rows, ["bound", "value", "inputs"]))
    print()
    print(format_table([{"term": t, "bits": v} for t, v in exp.trace], ["term", "bits"]))
    print()
    for name, inputs, value in reports:
        _print({"bound": name, **inputs, "value": value})
    _print(exp.as_record() | {"vacuous": exp.vacuous})
    _print(wb.as_record())
    return EXIT_OK


def cmd_baseline(args) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.mode == "classical-attack":
        trials = args.trials or 1000
        classical = classical_equivocation_attack(seed, trials)
        quantum = quantum_equivocation_attack(seed, max(trials, 10_000))
        _print({"classical_success": classical.rate, "classical_trials": classical.trials,
                "quantum_success": quantum.rate, "quantum_trials": quantum.trials})
        return EXIT_OK if classical.rate == 1.0 and abs(quantum.rate - 0.5) <= 0.02 else EXIT_CHECK
    action = "open" if args.mode == "simple-open" else "erase"
    outcome, acc = simple_protocol_run(args.bit, action, action == "erase", seed,
                                       args.trials or 10_000)
    rec = {"mode": args.mode, "bit": args.bit, "outcome": getattr(outcome, "value", outcome)}
    if acc is not None:
        rec.update(coalition_accuracy=acc.rate, trials=acc.trials)
    _print(rec)
    if action == "open":
        return EXIT_OK if outcome == args.bit else EXIT_CHECK
    return EXIT_OK if abs(acc.rate - 0.5) <= 0.01 + 3 * 0.5 / acc.trials ** 0.5 else EXIT_CHECK


def cmd_codes(args) -> int:
    if args.codes_command == "search":
        rng = derive_rng(args.seed if args.seed is not None else 0)
        code = search_random_code(args.n, args.k, args.d, rng, args.attempts)
        if code is None:
            print(f"no [{args.n},{args.k},>={args.d}] code found", file=sys.stderr)
            return EXIT_CHECK
        if args.out:
            save_code(code, args.out)
        _print({"n": code.n, "k": code.k, "d": code.d,
                "generator": ["".join(map(str, r)) for r in code.generator]})
        return EXIT_OK
    try:
        code = load_code(args.path)
    except CodeError as exc:
        print(f"verify failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    _print({"path": args.path, "n": code.n, "k": code.k, "d": code.d, "verified": True})
    return EXIT_OK


COMMANDS = {"run": cmd_run, "attack": cmd_attack, "bounds": cmd_bounds,
            "baseline": cmd_baseline, "codes": cmd_codes}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, OutOfModelError, UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
