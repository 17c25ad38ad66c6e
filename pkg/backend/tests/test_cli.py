from __future__ import annotations

import json
import os

import pytest

from main import main
from src.config import Config
from src.errors import OrdlabError
from src.progressions.registry import default_registry, use_registry


@pytest.fixture
def run(tmp_path, capsys):
    """Run the command line with a private output directory and registry; returns (code, stdout JSON)."""
    config = tmp_path / "ordlab.env"
    config.write_text(f"OUT={tmp_path / 'out'}\nREGISTRY={tmp_path / 'registry.jsonl'}\nFUEL=10\n")
    previous = default_registry()

    def invoke(*argv):
        capsys.readouterr()
        code = main(["--config", str(config), *argv])
        out = capsys.readouterr().out
        return code, (json.loads(out) if out.strip() else None)

    yield invoke
    use_registry(previous)


def test_config_file_overrides_defaults(tmp_path):
    path = tmp_path / "ordlab.env"
    path.write_text("FUEL=12\nTRACE=yes\nSTAGES=4\n")
    config = Config.from_file(str(path))
    assert config.fuel.fuel == 12
    assert config.output.trace is True
    assert config.lab.stages == 4
    assert config.with_value("FUEL", 3).fuel.fuel == 3


def test_unknown_config_keys_are_rejected(tmp_path):
    path = tmp_path / "ordlab.env"
    path.write_text("FUEL=12\nCOLOUR=red\n")
    with pytest.raises(OrdlabError) as caught:
        Config.from_file(str(path))
    assert caught.value.detail == "COLOUR"


def test_formula_eval(run):
    code, result = run("formula", "eval", "exists x. x = 3")
    assert code == 0
    assert result["verdict"] == "true"
    assert result["sigma1"] is True
    assert result["fuel"] == 10


def test_errors_exit_with_one(run):
    code, result = run("--json-errors", "formula", "parse", "forall x. x =")
    assert code == 1
    assert result["error"] == "FormulaSyntaxError"
    code, result = run("--json-errors", "order", "explore", "--order", "nowhere")
    assert code == 1
    assert result["error"] == "OrderError"


def test_phi_is_required_for_instances(run):
    code, result = run("--json-errors", "prog", "ti", "--order", "omega")
    assert code == 1
    assert result["message"] == "prog ti needs --phi"


def test_order_explore(run):
    code, result = run("order", "explore", "--order", "omega-times-2", "--bound", "4")
    assert code == 0
    assert result["size"] == 4


def test_g_map_over_an_lprime_file(run, tmp_path):
    code, result = run("order", "lprime", "--order", "finite-1")
    assert code == 0
    assert os.path.isfile(result["presentation"])
    bundle = tmp_path / "bundle"
    code, result = run("prog", "g-map", "--order", result["presentation"], "--depth", "8", "--bundle", str(bundle))
    assert code == 0
    assert result["ordinal"] == "w·2 + 1"
    assert (bundle / "manifest.json").is_file()


def test_verify_flags_a_tampered_bundle(run, tmp_path):
    bundle = tmp_path / "out" / "bundle"
    run("order", "lprime", "--order", "finite-1")
    run("prog", "g-map", "--order", str(tmp_path / "out" / "Lprime"), "--depth", "8")
    code, result = run("verify")
    assert code == 0 and result["ok"]
    (bundle / "instances" / "rfn-case.txt").write_text("0 = 1\n")
    code, result = run("--json-errors", "verify")
    assert code == 2
    assert result["error"] == "VerificationFailure"
    assert "rfn-case.txt" in result["detail"]
