import csv
import json
from pathlib import Path

import pytest

from ebcsim.adversary import OutOfModelError
from ebcsim.cli import main
from ebcsim.config import ConfigError, load_config, parse_config
from ebcsim.reporting import CSV_FIELDS, ScenarioReport, emit_results, render_csv
from ebcsim.runner import run_scenario

DEMO = Path(__file__).resolve().parents[1] / "demos" / "configs"

BASE = """
[params]
n = 16
m = 8
t = 1
gamma = 0
k = 2
d = 10
ell = 1

[code]
builtin = split_support:16:10

[run]
seed = 7
phase = {phase}
trials = {trials}

[adversary]
strategy = {strategy}
{extra}

[checks]
{checks}
"""


def cfg(phase="open", trials=3, strategy="honest", extra="", checks=""):
    return parse_config(BASE.format(phase=phase, trials=trials, strategy=strategy,
                                    extra=extra, checks=checks))


def test_honest_open_scenario():
    rep = run_scenario(cfg(trials=100, checks="min_success_rate = 1.0"))
    assert rep.aggregate["success_rate"] == 1.0 and rep.passed


def test_noisy_erase_scenario():
    rep = run_scenario(load_config(DEMO / "noisy_erase.ini"))
    assert rep.aggregate["erase_rate"] >= 0.99 and rep.passed


def test_binding_scenario():
    rep = run_scenario(cfg(strategy="binding", extra="budget = 2"))
    assert rep.aggregate["equivocation"] == 0.0


def test_out_of_model_refused():
    bad = cfg(strategy="snoop", extra="corrupt = 1,2")
    with pytest.raises(OutOfModelError):
        run_scenario(bad)
    assert run_scenario(bad, out_of_model=True).records


def test_config_errors():
    with pytest.raises(ConfigError):
        cfg(phase="commit")
    with pytest.raises(ConfigError):
        cfg(strategy="teleport")
    with pytest.raises(ConfigError):
        parse_config("[params]\nn = 16\n")
    with pytest.raises(ConfigError):
        cfg(checks="min_happiness = 1")


def test_digest_round_trip():
    c = cfg()
    again = parse_config(c.to_text())
    assert again.digest() == c.digest()
    rep = run_scenario(c)
    assert rep.aggregate["config_digest"] == c.digest()


def test_three_runs_plus_aggregate(tmp_path):
    rep = run_scenario(cfg(trials=3))
    path = emit_results(rep, tmp_path / "r.csv", "csv")
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 4
    assert [r["aggregate"] for r in rows] == ["false", "false", "false", "true"]
    lines = emit_results(rep, tmp_path / "r.jsonl").read_text().splitlines()
    assert len(lines) == 4 and json.loads(lines[-1])["aggregate"] is True
    assert list(json.loads(lines[0])) == ["aggregate", "run", "phase", "commit_flag", "flag_a",
                                          "flag_b", "c", "c_hat", "c_match", "distance",
                                          "transcript_digest"]


def test_empty_run_set_header_only():
    text = render_csv(ScenarioReport())
    assert text == ",".join(CSV_FIELDS) + "\n"
    rep = run_scenario(cfg(trials=0))
    assert render_csv(rep) == text


def test_unwritable_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        emit_results(ScenarioReport(), blocker / "sub" / "out.csv", "csv")


def test_same_seed_byte_identical(tmp_path):
    for name in ("a", "b"):
        rep = run_scenario(cfg(phase="erase", trials=5, strategy="depolarizing", extra="eps = 0.2"))
        emit_results(rep, tmp_path / f"{name}.csv", "csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def _write(tmp_path, text):
    p = tmp_path / "s.ini"
    p.write_text(text)
    return str(p)


def test_cli_exit_codes(tmp_path, capsys):
    ok = _write(tmp_path, BASE.format(phase="open", trials=5, strategy="honest", extra="",
                                      checks="min_success_rate = 1"))
    assert main(["run", ok, "--out", str(tmp_path / "o.jsonl")]) == 0
    assert len((tmp_path / "o.jsonl").read_text().splitlines()) == 6
    failing = _write(tmp_path, BASE.format(phase="open", trials=5, strategy="honest", extra="",
                                           checks="min_success_rate = 1.1"))
    assert main(["run", failing]) == 1
    assert main(["run", str(tmp_path / "missing.ini")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    oom = _write(tmp_path, BASE.format(phase="open", trials=2, strategy="snoop",
                                       extra="corrupt = 1,2", checks=""))
    assert main(["run", oom]) == 2
    assert main(["run", oom, "--out-of-model"]) == 0
    assert main(["--out-of-model", "run", oom]) == 0


def test_cli_internal_error(tmp_path, monkeypatch):
    import ebcsim.cli as cli
    monkeypatch.setitem(cli.COMMANDS, "bounds", lambda args: 1 / 0)
    assert main(["bounds"]) == 3


def test_cli_global_flags_and_transcript(tmp_path):
    ok = _write(tmp_path, BASE.format(phase="open", trials=50, strategy="honest", extra="",
                                      checks=""))
    tp = tmp_path / "t.jsonl"
    assert main(["run", ok, "--trials", "2", "--seed", "3", "--full-transcript",
                 "--transcript", str(tp)]) == 0
    lines = tp.read_text().splitlines()
    assert json.loads(lines[0]) == {"run": 0}
    assert "payload" in json.loads(lines[1])


def test_cli_other_subcommands(tmp_path, capsys):
    conf = str(DEMO / "binding.ini")
    assert main(["attack", "binding", conf]) == 0
    assert main(["attack", "binding", conf, "--threshold", "5"]) == 1
    hid = str(DEMO / "hiding_erase.ini")
    assert main(["attack", "hiding", hid, "--phase", "erase", "--trials", "2000"]) == 0
    assert main(["attack", "local-hiding", hid, "--node", "2", "--trials", "2000"]) == 0
    assert main(["bounds", "--n", "256", "--k", "128", "--gamma", "0.05", "--eps", "0.1",
                 "--delta-eps", "10"]) == 0
    out = capsys.readouterr().out
    assert "expungement" in out and '"vacuous": true' in out
    assert main(["baseline", "simple-open", "--bit", "1"]) == 0
    assert main(["baseline", "simple-erase", "--trials", "4000"]) == 0
    assert main(["baseline", "classical-attack"]) == 0
    code = tmp_path / "code.txt"
    assert main(["codes", "search", "--n", "16", "--k", "2", "--d", "10", "--out", str(code)]) == 0
    assert main(["codes", "verify", str(code)]) == 0
    code.write_text(code.read_text().replace("16 2 10", "16 2 12", 1))
    assert main(["codes", "verify", str(code)]) == 1
    assert main(["codes", "search", "--n", "16", "--k", "3", "--d", "9"]) == 1


@pytest.mark.parametrize("name", ["honest_open", "noisy_erase", "binding", "hiding_erase"])
def test_demo_configs_pass(name, tmp_path):
    c = load_config(DEMO / f"{name}.ini")
    c.records_path = None
    assert run_scenario(c).passed
