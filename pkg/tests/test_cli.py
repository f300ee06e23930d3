import io
import json
import os

import pytest

from loopcoh.cli import main


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def z_single(tmp_path, **extra):
    doc = {"ring": "Z",
           "generators": [{"name": "x2", "degree": 2}],
           "bounds": {"max_degree": 6}}
    doc.update(extra)
    return write_config(tmp_path, doc)


def f2_pair(tmp_path):
    return write_config(tmp_path, {
        "ring": "F2",
        "generators": [{"name": "u2", "degree": 2},
                       {"name": "u3", "degree": 3}],
        "sq1": {"u2": "u3"},
        "bounds": {"max_degree": 6},
    })


def run(args):
    out = io.StringIO()
    code = main(args, out=out)
    return code, out.getvalue()


def test_ranks_exit_zero(tmp_path):
    cfg = z_single(tmp_path)
    json_path = str(tmp_path / "out.json")
    code, text = run(["ranks", "--config", cfg, "--json", json_path])
    assert code == 0
    assert "elapsed" in text
    report = json.loads(open(json_path).read())
    assert report["command"] == "ranks"
    assert report["ranks"][:3] == [1, 1, 0]
    assert report["convention_version"] == 1
    assert "elapsed" not in json.dumps(report)


def test_check_exterior_witness(tmp_path):
    cfg = f2_pair(tmp_path)
    json_path = str(tmp_path / "out.json")
    code, text = run(["check-exterior", "--config", cfg,
                      "--json", json_path])
    assert code == 0
    report = json.loads(open(json_path).read())
    assert report["verdict"] == "not_exterior"
    assert report["witness"]["kind"] == "square"


def test_oracle_compare_all_equal(tmp_path):
    cfg = z_single(tmp_path)
    code, text = run(["oracle-compare", "--config", cfg])
    assert code == 0
    assert "all_equal: True" in text


def test_verify_passes(tmp_path):
    cfg = f2_pair(tmp_path)
    code, text = run(["verify", "--config", cfg])
    assert code == 0
    assert "all passed: True" in text


def test_ring_table(tmp_path):
    cfg = f2_pair(tmp_path)
    json_path = str(tmp_path / "out.json")
    code, _ = run(["ring", "--config", cfg, "--json", json_path])
    assert code == 0
    report = json.loads(open(json_path).read())
    squares = [e for e in report["entries"]
               if e["left"] == [0] and e["right"] == [0]]
    assert squares and squares[0]["coords"] == {"1": "1"}


def test_invalid_config_exit_two(tmp_path):
    cfg = write_config(tmp_path, {"ring": "Z", "generators": [
        {"name": "x", "degree": 3}]})
    code, text = run(["ranks", "--config", cfg])
    assert code == 2
    assert "config error" in text


def test_missing_file_exit_two(tmp_path):
    code, _ = run(["ranks", "--config", str(tmp_path / "nope.json")])
    assert code == 2


def test_max_degree_override(tmp_path):
    cfg = z_single(tmp_path)
    json_path = str(tmp_path / "out.json")
    code, _ = run(["ranks", "--config", cfg, "--max-degree", "3",
                   "--json", json_path])
    assert code == 0
    report = json.loads(open(json_path).read())
    assert len(report["ranks"]) == 4
    assert report["truncation"]["max_degree"] == 3


def test_cold_and_warm_cache_byte_identical(tmp_path):
    cfg = z_single(tmp_path)
    cache = str(tmp_path / "cache")
    out1 = str(tmp_path / "a.json")
    out2 = str(tmp_path / "b.json")
    code1, _ = run(["ranks", "--config", cfg, "--cache-dir", cache,
                    "--json", out1])
    assert code1 == 0
    assert os.listdir(cache)  # the cache was populated
    code2, _ = run(["ranks", "--config", cfg, "--cache-dir", cache,
                    "--json", out2])
    assert code2 == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_cache_does_not_change_values(tmp_path):
    cfg = f2_pair(tmp_path)
    cache = str(tmp_path / "cache")
    out1 = str(tmp_path / "a.json")
    out2 = str(tmp_path / "b.json")
    run(["ranks", "--config", cfg, "--json", out1])
    run(["ranks", "--config", cfg, "--cache-dir", cache, "--json", out2])
    assert open(out1, "rb").read() == open(out2, "rb").read()
