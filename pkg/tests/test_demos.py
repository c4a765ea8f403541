import runpy
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parents[1] / "demos"
FAST = ["01_honest_protocol.py", "02_codes_and_hashing.py", "04_binding.py", "07_bounds.py",
        "08_dense_backend.py"]


@pytest.mark.parametrize("name", FAST)
def test_demo_runs(name, capsys):
    runpy.run_path(str(DEMOS / name), run_name="__main__")
    assert capsys.readouterr().out
