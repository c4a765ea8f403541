"""Scenario configs: INI-style ``key = value`` text with sections.

Example::

    [params]
    n = 16
    m = 8
    t = 1
    gamma = 0
    k = 2
    d = 10
    ell = 1

    [code]
    builtin = split_support:16:10    # or: file = path, or: generator = 0101...;1010...

    [run]
    seed = 7
    phase = open
    trials = 100

    [adversary]
    strategy = honest                # see STRATEGIES
    corrupt = 1

    [checks]
    min_success_rate = 1.0

    [output]
    records = out/records.jsonl
    format = json-lines
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from .bits import as_bits
from .codes import LinearCode, load_code, repetition_code, hamming_7_4, split_support_code
from .params import ProtocolParams

STRATEGIES = ("honest", "depolarizing", "snoop", "blind_measure_resend", "binding", "expungement")
PHASES = ("open", "erase")
FORMATS = ("json-lines", "csv")
CHECK_KEYS = ("min_success_rate", "min_erase_rate", "min_c_agreement", "max_equivocation",
              "max_advantage_sigmas")


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    params: ProtocolParams
    code_spec: Dict[str, str]
    seed: int = 0
    phase: str = "open"
    trials: int = 100
    strategy: str = "honest"
    corrupt: Tuple[int, ...] = ()
    strategy_params: Dict[str, str] = field(default_factory=dict)
    coalition: Tuple[str, ...] = ()
    checks: Dict[str, float] = field(default_factory=dict)
    records_path: Optional[str] = None
    output_format: str = "json-lines"
    transcript_path: Optional[str] = None
    base_dir: Path = Path(".")

    def resolve_code(self) -> LinearCode:
        spec = self.code_spec
        if "file" in spec:
            path = Path(spec["file"])
            return load_code(path if path.is_absolute() else self.base_dir / path)
        if "generator" in spec:
            rows = [as_bits(r.strip()) for r in spec["generator"].split(";") if r.strip()]
            d = int(spec.get("d", -1))
            return LinearCode(np.array(rows, dtype=np.uint8), d=d)
        if "builtin" in spec:
            name, *args = spec["builtin"].split(":")
            if name == "split_support":
                return split_support_code(int(args[0]), int(args[1]))
            if name == "repetition":
                return repetition_code(int(args[0]))
            if name == "hamming":
                return hamming_7_4()
            raise ConfigError(f"unknown builtin code {name!r}")
        raise ConfigError("[code] needs one of: file, generator, builtin")

    def to_text(self) -> str:
        """Canonical serialisation; also the input to :meth:`digest`."""
        p = self.params
        cp = configparser.ConfigParser()
        cp["params"] = {"n": str(p.n), "m": str(p.m), "t": str(p.t), "gamma": repr(p.gamma),
                        "k": str(p.k), "d": str(p.d), "ell": str(p.ell)}
        cp["code"] = dict(sorted(self.code_spec.items()))
        cp["run"] = {"seed": str(self.seed), "phase": self.phase, "trials": str(self.trials)}
        adv = {"strategy": self.strategy, "corrupt": ",".join(map(str, self.corrupt))}
        if self.coalition:
            adv["coalition"] = ",".join(self.coalition)
        adv.update(sorted(self.strategy_params.items()))
        cp["adversary"] = adv
        cp["checks"] = {k: repr(float(v)) for k, v in sorted(self.checks.items())}
        out = {"format": self.output_format}
        if self.records_path:
            out["records"] = self.records_path
        if self.transcript_path:
            out["transcript"] = self.transcript_path
        cp["output"] = out
        lines = []
        for sec in cp.sections():
            lines.append(f"[{sec}]")
            lines += [f"{k} = {v}" for k, v in cp[sec].items()]
            lines.append("")
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


def _ints(text: str) -> Tuple[int, ...]:
    return tuple(int(v) for v in text.replace(" ", "").split(",") if v)


def parse_config(text: str, base_dir: Path = Path(".")) -> ScenarioConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";;"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    if "params" not in cp or "code" not in cp:
        raise ConfigError("config needs [params] and [code] sections")
    try:
        ps = cp["params"]
        params = ProtocolParams(n=ps.getint("n"), m=ps.getint("m"), t=ps.getint("t", 0),
                                gamma=ps.getfloat("gamma", 0.0), k=ps.getint("k"),
                                d=ps.getint("d"), ell=ps.getint("ell", 1))
        run = cp["run"] if "run" in cp else {}
        adv = dict(cp["adversary"]) if "adversary" in cp else {}
        checks = {k: float(v) for k, v in cp["checks"].items()} if "checks" in cp else {}
        out = cp["output"] if "output" in cp else {}
        cfg = ScenarioConfig(
            params=params,
            code_spec=dict(cp["code"]),
            seed=int(run.get("seed", 0)),
            phase=run.get("phase", "open"),
            trials=int(run.get("trials", 100)),
            strategy=adv.pop("strategy", "honest"),
            corrupt=_ints(adv.pop("corrupt", "")),
            coalition=tuple(v.strip() for v in adv.pop("coalition", "").split(",") if v.strip()),
            strategy_params=adv,
            checks=checks,
            records_path=out.get("records"),
            output_format=out.get("format", "json-lines"),
            transcript_path=out.get("transcript"),
            base_dir=base_dir,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    if cfg.phase not in PHASES:
        raise ConfigError(f"phase must be one of {PHASES}, got {cfg.phase!r}")
    if cfg.strategy not in STRATEGIES:
        raise ConfigError(f"strategy must be one of {STRATEGIES}, got {cfg.strategy!r}")
    if cfg.output_format not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {cfg.output_format!r}")
    unknown = set(cfg.checks) - set(CHECK_KEYS)
    if unknown:
        raise ConfigError(f"unknown checks {sorted(unknown)}")
    if cfg.trials < 0:
        raise ConfigError("trials must be non-negative")
    return cfg


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(text, path.parent)
