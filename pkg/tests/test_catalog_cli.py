import json

import pytest

from lgvw import cli
from lgvw.catalog import (CATALOG, SWEEP, check_cy3_census, check_rank_census, degree_criterion,
                          elliptic_checks, resolve_pair)
from lgvw.errors import ConfigError, PreconditionNotMet


def test_catalog_entries_resolve():
    for name in CATALOG:
        W, G, label = resolve_pair(name)
        assert len(G) >= 1 and label
    assert "quintic" not in SWEEP and len(SWEEP) >= 30


def test_cy3_census():
    r = check_cy3_census()
    assert r["holds"] and r["found"] == r["table"] == 13
    assert r["e8_chain_cell_empty"]


def test_rank_census():
    assert check_rank_census()["holds"]


def test_degree_criterion_preconditions():
    W, G, _ = resolve_pair("x3")
    with pytest.raises(PreconditionNotMet):
        degree_criterion(W, G)


def test_elliptic():
    r = elliptic_checks(kmax=2, M=6)
    assert r["holds"] and r["negative_control_breaks"]
    assert r["conjugation_constant"] is None


def test_pair_config_validation():
    with pytest.raises(ConfigError):
        cli.PairConfig(kmax=-2)
    with pytest.raises(ConfigError):
        cli.PairConfig(kmax=3, truncation=7)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "pair.json"
    cfg.write_text(json.dumps({"polynomial": "x1^3", "group": "J", "kmax": 1, "truncation": 4}))
    assert cli.main(["virasoro", "--config", str(cfg), "--no-timing"]) == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert cli.main(["analyze", "--config", str(bad)]) == 2
    assert cli.main(["analyze", "--config", str(tmp_path / "missing.json")]) == 2


@pytest.mark.parametrize("command", ["analyze", "state-space", "virasoro", "quantize", "mirror"])
def test_commands_pass_on_cubic(command, capsys):
    assert cli.main([command, "--pair", "cubic", "--kmax", "1", "-M", "4", "--no-timing"]) == 0
    assert "cubic" in capsys.readouterr().out


def test_exit_codes(capsys):
    assert cli.main(["analyze", "--poly", "x1^2x2^2", "--group", "J"]) == 2
    assert cli.main(["analyze", "--pair", "no-such-pair"]) == 2
    assert cli.main(["virasoro", "--pair", "x3", "--kmax", "3", "-M", "5"]) == 2
    assert cli.main(["degree-criterion", "--pair", "x3"]) == 0
    assert "SKIP" in capsys.readouterr().out
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])


def test_json_is_deterministic(capsys):
    args = ["state-space", "--pair", "cubic", "--format", "json", "--no-timing"]
    cli.main(args)
    first = capsys.readouterr().out
    cli.main(args)
    second = capsys.readouterr().out
    assert first == second
    data = json.loads(first)
    assert data["schema_version"] == cli.SCHEMA_VERSION
    assert data["command"] == "state-space"


def test_out_file(tmp_path):
    out = tmp_path / "report.txt"
    assert cli.main(["semisimple", "--d", "4", "--out", str(out)]) == 0
    assert "semisimple" in out.read_text()
