"""CLI surface: exit codes, cache behavior, format contract, determinism."""

import json
import os
from pathlib import Path

import pytest

from bieberbach.cli import main

FAST = [
    "--max-n",
    "5",
    "--max-k",
    "2",
    "--sturm-max-n",
    "5",
    "--guess-k-range",
    "1",
    "--guess-window",
    "14",
    "--verify-window",
    "30",
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(argv, capsys):
    code, out = run(argv + ["--format", "json"], capsys)
    return code, json.loads(out)


# -- tables ---------------------------------------------------------------------


def test_tables_small(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    code, payload = run_json(["tables", "--max-n", "4", "--cache-dir", cache], capsys)
    assert code == 0
    assert payload["ok"] and payload["entries_per_table"] == 15
    assert (tmp_path / "cache" / "b_table_N4.json").exists()
    assert (tmp_path / "cache" / "a_table_N4.json").exists()


def test_tables_degenerate_max_n_zero(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    code, payload = run_json(["tables", "--max-n", "0", "--cache-dir", cache], capsys)
    assert code == 0 and payload["entries_per_table"] == 1


def test_tables_unusable_cache_dir(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    code, _ = run(["tables", "--max-n", "2", "--cache-dir", str(blocker)], capsys)
    assert code == 2


# -- certify ----------------------------------------------------------------------


def test_certify_json_contract(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    assert run(["tables", "--max-n", "4", "--cache-dir", cache], capsys)[0] == 0
    code, payload = run_json(
        ["certify", "--max-n", "4", "--sturm-max-n", "4", "--cache-dir", cache], capsys
    )
    assert code == 0 and payload["ok"]
    certs = payload["certificates"]
    assert len(certs) == 15
    k, n, cert = certs[0][0], certs[0][1], certs[0][2]
    assert (k, n) == (0, 0)
    assert set(cert) == {"sigma", "alpha", "beta", "s"}
    assert cert["sigma"] == ["1", "2"]
    assert (tmp_path / "cache" / "cert_fact2_N4.json").exists()


def test_certify_recomputes_tampered_cache(tmp_path, capsys):
    cache = tmp_path / "cache"
    assert run(["tables", "--max-n", "3", "--cache-dir", str(cache)], capsys)[0] == 0
    target = cache / "b_table_N3.json"
    doc = json.loads(target.read_text())
    doc["payload"]["entries"][2][2] = [["9", "1"]]  # corrupt an entry
    target.write_text(json.dumps(doc))  # checksum now stale
    code, payload = run_json(
        ["certify", "--max-n", "3", "--sturm-max-n", "3", "--cache-dir", str(cache)],
        capsys,
    )
    assert code == 0 and payload["ok"]
    # the cache entry was rebuilt with a valid checksum
    fresh = json.loads(target.read_text())
    from bieberbach.serialize import unwrap

    assert unwrap(fresh) is not None


# -- guess --------------------------------------------------------------------------


def test_guess_single_column(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    code, payload = run_json(
        [
            "guess",
            "--k",
            "0",
            "--guess-window",
            "14",
            "--verify-window",
            "30",
            "--cache-dir",
            cache,
        ],
        capsys,
    )
    assert code == 0 and payload["ok"]
    record = payload["results"][0]
    assert record["operator"]["order"] == 3
    assert record["verify"]["ok"]
    assert record["sym_square"]["reconstruction_ok"]
    assert (tmp_path / "cache" / "recop_k0.json").exists()


def test_guess_rejects_bad_windows(tmp_path, capsys):
    code, _ = run(
        [
            "guess",
            "--k",
            "0",
            "--guess-window",
            "30",
            "--verify-window",
            "10",
            "--cache-dir",
            str(tmp_path / "cache"),
        ],
        capsys,
    )
    assert code == 2


# -- fact1 ----------------------------------------------------------------------------


def test_fact1_small(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    code, payload = run_json(["fact1", "--max-k", "2", "--cache-dir", cache], capsys)
    assert code == 0
    assert payload["ok"] and payload["epsilon"] == -1
    assert payload["orders_ok"] == [True, True]
    assert (tmp_path / "cache" / "fact1_K2.json").exists()


def test_fact1_minimal_order(tmp_path, capsys):
    code, payload = run_json(
        ["fact1", "--max-k", "1", "--cache-dir", str(tmp_path / "cache")], capsys
    )
    assert code == 0 and payload["ok"]


def test_fact1_rejects_zero_order(tmp_path, capsys):
    code, _ = run(
        ["fact1", "--max-k", "0", "--cache-dir", str(tmp_path / "cache")], capsys
    )
    assert code == 2


# -- report -----------------------------------------------------------------------------


def _run_pipeline(cache: str, capsys) -> list:
    outputs = []
    for cmd in (["tables"], ["certify"], ["guess"], ["fact1"], ["report"]):
        code, out = run(cmd + FAST + ["--cache-dir", cache, "--format", "json"], capsys)
        assert code == 0, f"{cmd} failed: {out}"
        outputs.append(out)
    return outputs


def test_report_lists_missing(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    code, payload = run_json(["report"] + FAST + ["--cache-dir", cache], capsys)
    assert code == 1
    missing = set(payload["missing"])
    assert "b_table_N5.json" in missing
    assert "fact1_K2.json" in missing
    assert "recop_k1.json" in missing


def test_report_after_full_pipeline(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    outputs = _run_pipeline(cache, capsys)
    ledger = json.loads(outputs[-1])
    assert ledger["ok"]
    assert ledger["schema"] == "bieberbach-ledger/1"
    assert ledger["fact1"]["epsilon"] == -1
    assert len(ledger["recurrences"]["per_k"]) == 2


def test_pipeline_deterministic_and_cache_stable(tmp_path, capsys):
    cache1 = str(tmp_path / "run1")
    cache2 = str(tmp_path / "run2")
    out1 = _run_pipeline(cache1, capsys)
    out2 = _run_pipeline(cache2, capsys)
    assert out1 == out2
    files1 = sorted(os.listdir(cache1))
    assert files1 == sorted(os.listdir(cache2))
    for name in files1:
        b1 = Path(cache1, name).read_bytes()
        b2 = Path(cache2, name).read_bytes()
        assert b1 == b2, f"cache file {name} differs between cold runs"
    # warm cache: rerunning report must reproduce the ledger byte for byte
    code, out = run(
        ["report"] + FAST + ["--cache-dir", cache1, "--format", "json"], capsys
    )
    assert code == 0 and out == out1[-1]


# -- config file ---------------------------------------------------------------------------


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("max_n = 3\nformat = json\n# comment\ncache_dir = "
                       + str(tmp_path / "cache") + "\n")
    code, out = run(["tables", "--config", str(cfgfile)], capsys)
    assert code == 0
    assert json.loads(out)["max_n"] == 3
    assert (tmp_path / "cache" / "b_table_N3.json").exists()
    # flags win over the file
    code, out = run(["tables", "--config", str(cfgfile), "--max-n", "2"], capsys)
    assert code == 0
    assert json.loads(out)["max_n"] == 2
    assert (tmp_path / "cache" / "b_table_N2.json").exists()


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("zzz = 1\n")
    code, _ = run(["tables", "--config", str(cfgfile)], capsys)
    assert code == 2


def test_bad_flag_value_is_usage_error(tmp_path, capsys):
    code, _ = run(
        ["tables", "--format", "yaml", "--cache-dir", str(tmp_path / "c")], capsys
    )
    assert code == 2
