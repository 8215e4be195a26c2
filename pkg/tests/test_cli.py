import json

import numpy as np
import pytest

from halfstreet import cli, equity


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = cli.main(["-q", *map(str, argv)])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_vn_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "solve-vn", "--ante", 1, "--bet", 2, "--out", tmp_path / "s")
    doc = json.loads(out)
    assert code == 0
    assert doc["x1"] == pytest.approx(1 / 9, abs=1e-4) and doc["value"] == pytest.approx(1 / 9, abs=1e-4)
    for key in ("x2", "c", "y0"):
        assert key in doc
    for name in ("config.json", "summary.json", "player_strategy.csv", "dealer_strategy.csv"):
        assert (tmp_path / "s" / name).exists()
    code, out, _ = run(capsys, "solve-vn", "--ante", 8, "--bet", 1)
    assert code == 0 and json.loads(out)["y0"] == pytest.approx(0.0842, abs=1e-4)
    code, _, err = run(capsys, "solve-vn", "--ante", 0, "--bet", 1)
    assert code == 2 and "usage" in err


def test_usage_errors(capsys):
    assert run(capsys, "solve-vn", "--ante", "x")[0] == 2
    assert run(capsys, "train", "sgd")[0] == 2
    assert run(capsys, "equity", "--board", 4, "--out", "e.json")[0] == 2
    assert run(capsys, "equity", "--board", 5, "--mode", "exact", "--out", "e.json")[0] == 2
    assert run(capsys)[0] == 2


def test_equity_io_error(capsys, tmp_path):
    assert run(capsys, "equity", "--mode", "mc", "--samples", 10, "--out", tmp_path / "no" / "e.json")[0] == 3


def test_equity_mc_is_reproducible(capsys, tmp_path):
    for name in ("a.json", "b.json"):
        assert run(capsys, "equity", "--mode", "mc", "--samples", 50, "--seed", 42, "--out", tmp_path / name)[0] == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    t = equity.load_tables(tmp_path / "a.json")
    assert t.mode == "monte_carlo" and t.seed == 42 and t.samples == 50


def test_equity_exact_file(capsys, tmp_path):
    assert run(capsys, "equity", "--board", 3, "--mode", "exact", "--out", tmp_path / "e.json")[0] == 0
    doc = json.loads((tmp_path / "e.json").read_text())
    w, d = np.array(doc["w"]), np.array(doc["d"])
    np.testing.assert_allclose(w + w.T + d, 1.0, atol=1e-15)


def test_train_flop_needs_equity(capsys, tmp_path):
    assert run(capsys, "train", "ga", "--game", "flop", "--out", tmp_path / "g")[0] == 4
    assert run(capsys, "train", "cfr", "--game", "flop", "--equity", tmp_path / "missing.json")[0] == 4
    (tmp_path / "junk.json").write_text("{")
    assert run(capsys, "train", "cfr", "--game", "flop", "--equity", tmp_path / "junk.json")[0] == 5


def test_train_cfr_vn_example(capsys, tmp_path):
    out = tmp_path / "cfr"
    code, text, _ = run(capsys, "train", "cfr", "--game", "vn", "--ante", 1, "--bet", 2, "--iters", "1e7",
                        "--seed", 1, "--out", out)
    assert code == 0
    summary = json.loads(text)
    assert summary["exploitability"] <= 0.02
    assert json.loads((out / "summary.json").read_text()) == summary
    lines = (out / "checkpoints.csv").read_text().splitlines()
    assert lines[0] == "iteration,exploitability,value_P" and len(lines) == 21
    cfg = json.loads((out / "config.json").read_text())
    assert cfg["cfr"] == {"iterations": 10**7, "seed": 1, "checkpoint_every": 5 * 10**5}


def _outputs(d):
    return {f.name: f.read_bytes() for f in sorted(d.iterdir()) if f.name != "config.json"}


@pytest.mark.parametrize("argv", [
    ("cfr", "--iters", "2e5", "--seed", 3, "--M", 30),
    ("ga", "--N", 40, "--iters", 4, "--R", 30, "--seed", 5),
])
def test_rerun_from_config_is_identical(capsys, tmp_path, argv):
    assert run(capsys, "train", *argv, "--out", tmp_path / "a")[0] == 0
    assert run(capsys, "train", argv[0], "--config", tmp_path / "a" / "config.json", "--out", tmp_path / "b")[0] == 0
    assert _outputs(tmp_path / "a") == _outputs(tmp_path / "b")
    a = json.loads((tmp_path / "a" / "config.json").read_text())
    b = json.loads((tmp_path / "b" / "config.json").read_text())
    a["output"], b["output"] = {}, {}
    assert a == b


def test_train_flop_with_equity(capsys, tmp_path, flop_file):
    out = tmp_path / "f"
    code, text, _ = run(capsys, "train", "cfr", "--game", "flop", "--equity", flop_file, "--iters", "1e4",
                        "--out", out)
    assert code == 0
    lines = (out / "player_strategy.csv").read_text().splitlines()
    assert len(lines) == 170 and lines[1].startswith("0,AA,")
    assert "dealer_call_mass" in json.loads(text)


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"cfr": {"iterations": 10, "learning_rate": 1}}))
    assert run(capsys, "train", "cfr", "--config", bad)[0] == 2
    bad.write_text(json.dumps({"gam": {}}))
    assert run(capsys, "train", "cfr", "--config", bad)[0] == 2
    bad.write_text("{not json")
    assert run(capsys, "train", "cfr", "--config", bad)[0] == 5
    assert run(capsys, "train", "cfr", "--config", tmp_path / "absent.json")[0] == 3
    assert run(capsys, "train", "ga", "--alpha", 2, "--iters", 1)[0] == 2
    assert run(capsys, "train", "ga", "--N", 7, "--iters", 1)[0] == 2


def test_verify_examples(capsys, tmp_path):
    assert run(capsys, "solve-vn", "--out", tmp_path / "s")[0] == 0
    code, text, _ = run(capsys, "verify", "--game", "vn", "--player", tmp_path / "s" / "player_strategy.csv",
                        "--dealer", tmp_path / "s" / "dealer_strategy.csv", "--out", tmp_path / "v")
    assert code == 0 and json.loads(text)["exploitability"] <= 0.01
    assert (tmp_path / "v" / "diagnostics.csv").exists()

    uniform = tmp_path / "u.csv"
    uniform.write_text("index,label,probability\n" + "".join(f"{k},{k + 1},0.5\n" for k in range(100)))
    code, text, _ = run(capsys, "verify", "--player", uniform, "--dealer", uniform)
    doc = json.loads(text)
    assert code == 0 and doc["exploitability"] > 0.5
    assert doc["sign_violations"]["player"] > 0

    truncated = tmp_path / "t.csv"
    truncated.write_text("".join((tmp_path / "s" / "player_strategy.csv").read_text().splitlines(True)[:50]))
    assert run(capsys, "verify", "--player", truncated, "--dealer", uniform)[0] == 5
    assert run(capsys, "verify", "--player", tmp_path / "none.csv", "--dealer", uniform)[0] == 3
