import json
import re
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from dfs_exchange.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, OUT_DIR_ENV, main
from dfs_exchange.combinatorics import MultiplicityTable
from dfs_exchange.dfs import DFSBasis
from dfs_exchange.operators import ExchangeModel

GOLDEN = Path(__file__).parent / "golden"


def run_json(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


class TestDims:
    def test_k6(self, capsys):
        code, doc = run_json(capsys, "dims", "--k", "6")
        assert code == EXIT_OK
        assert [(r["K"], r["dfs_dimension"]) for r in doc["result"]] == [(2, 1), (4, 2), (6, 5)]
        assert all(r["hook_check"] for r in doc["result"])

    def test_k8_with_kernel(self, capsys):
        _, doc = run_json(capsys, "dims", "--k", "8", "--kernel-max", "8")
        row = doc["result"][-1]
        assert (row["K"], row["dfs_dimension"], row["kernel_dimension"]) == (8, 14, 14)

    def test_k2(self, capsys):
        _, doc = run_json(capsys, "dims", "--k", "2")
        assert [(r["K"], r["dfs_dimension"]) for r in doc["result"]] == [(2, 1)]

    def test_golden(self, tmp_path):
        out = tmp_path / "dims.json"
        assert main(["dims", "--k", "10", "--out", str(out)]) == EXIT_OK
        assert out.read_bytes() == (GOLDEN / "dims_k10.json").read_bytes()

    def test_bad_k(self, capsys):
        assert main(["dims", "--k", "1"]) == EXIT_CONFIG


class TestVerify:
    def test_k4_passes(self, capsys):
        code, doc = run_json(capsys, "verify", "--k", "4", "--tol", "1e-10")
        assert code == EXIT_OK
        checks = {c["name"]: c for c in doc["result"]["checks"]}
        assert checks["encoded_exchange_matrices"]["status"] == "pass"
        assert all(c["status"] == "pass" for c in checks.values())
        assert doc["schema_version"] == 1 and doc["config"]["k"] == 4

    def test_k6_skips_encoded_block(self, capsys):
        code, doc = run_json(capsys, "verify", "--k", "6", "--tol", "1e-10")
        assert code == EXIT_OK
        checks = {c["name"]: c for c in doc["result"]["checks"]}
        assert checks["encoded_exchange_matrices"]["status"] == "skipped"
        assert checks["encoded_exchange_matrices"]["detail"] == "skipped: d=5"

    def test_unreachable_tolerance_fails(self, capsys):
        code, doc = run_json(capsys, "verify", "--k", "4", "--tol", "1e-30")
        assert code == EXIT_FAILED
        assert not doc["result"]["passed"]
        failed = [c for c in doc["result"]["checks"] if c["status"] == "fail"]
        assert failed and all(c["residual"] >= 1e-30 for c in failed)

    def test_table_format(self, capsys):
        assert main(["verify", "--k", "4", "--format", "table"]) == EXIT_OK
        out = capsys.readouterr().out
        assert re.search(r"encoded_exchange_matrices\s+\d\.\d\de[-+]\d\d\s+PASS", out)
        assert out.strip().endswith("overall: PASS")

    def test_model_file(self, capsys, tmp_path, rng):
        j = rng.uniform(-1, 1, size=(4, 4))
        j = j + j.T
        np.fill_diagonal(j, 0)
        path = tmp_path / "model.json"
        path.write_text(ExchangeModel(4, j).to_json())
        code, doc = run_json(capsys, "verify", "--k", "4", "--model", str(path))
        assert code == EXIT_OK
        assert "model_hamiltonian_leakage" in {c["name"] for c in doc["result"]["checks"]}

    def test_asymmetric_model_is_config_error(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps({"num_qubits": 2, "couplings": [[0, 1], [0.5, 0]]}))
        assert main(["verify", "--k", "2", "--model", str(path)]) == EXIT_CONFIG

    @pytest.mark.parametrize("k", ["3", "10"])
    def test_bad_k(self, k):
        assert main(["verify", "--k", k]) == EXIT_CONFIG

    def test_nonpositive_tolerance(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--tol", "0"])
        assert exc.value.code == EXIT_CONFIG


class TestSimulate:
    def test_same_seed_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert main(["simulate", "--seed", "42", "--trials", "20", "--rate", "0.05", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_golden(self, tmp_path):
        out = tmp_path / "sim.json"
        main(["simulate", "--seed", "42", "--trials", "6", "--rate", "0.05", "--out", str(out)])
        assert out.read_bytes() == (GOLDEN / "simulate_seed42.json").read_bytes()

    def test_schema(self, capsys):
        _, doc = run_json(capsys, "simulate", "--seed", "3", "--trials", "4")
        assert doc["schema_version"] == 1
        assert doc["config"] == {"mode": "monte-carlo", "seed": 3, "trials": 4, "rate": 0.01, "theta_max": np.pi}
        result = doc["result"]
        assert set(result) >= {"schema_version", "seed", "n_trials", "trials", "aggregate"}
        assert set(result["aggregate"]) == {"mean_fidelity", "min_fidelity", "syndrome_histogram"}
        assert set(result["trials"][0]) >= {"seed", "events", "syndromes", "fidelity_before", "fidelity_after"}

    def test_zero_rate(self, capsys):
        _, doc = run_json(capsys, "simulate", "--rate", "0", "--trials", "10")
        assert doc["result"]["aggregate"]["mean_fidelity"] == 1.0

    def test_sweep(self, capsys):
        _, doc = run_json(capsys, "simulate", "--mode", "sweep", "--seed", "1")
        assert doc["result"]["n_trials"] == 120
        assert all(t["fidelity_after"] >= 1 - 1e-8 for t in doc["result"]["trials"])

    def test_env_output_dir(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv(OUT_DIR_ENV, str(tmp_path / "runs"))
        assert main(["simulate", "--trials", "2"]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads((tmp_path / "runs" / "simulate.json").read_text())["command"] == "simulate"

    def test_negative_rate(self, capsys):
        assert main(["simulate", "--rate", "-1"]) == EXIT_CONFIG
        assert "rate" in capsys.readouterr().err

    @pytest.mark.parametrize("seed", ["-1", str(2**64), "abc"])
    def test_bad_seed(self, seed):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--seed", seed])
        assert exc.value.code == EXIT_CONFIG

    def test_zero_trials(self):
        assert main(["simulate", "--trials", "0"]) == EXIT_CONFIG

    def test_table_format(self, capsys):
        assert main(["simulate", "--trials", "3", "--format", "table"]) == EXIT_OK
        assert "mean_fidelity" in capsys.readouterr().out


class TestExports:
    def test_basis(self, tmp_path):
        out = tmp_path / "basis.json"
        assert main(["basis", "--k", "4", "--out", str(out)]) == EXIT_OK
        assert DFSBasis.from_text(out.read_text()).dimension == 2

    def test_basis_odd(self):
        assert main(["basis", "--k", "5"]) == EXIT_CONFIG

    def test_multiplicities(self, tmp_path):
        out = tmp_path / "m.json"
        assert main(["multiplicities", "--k", "9", "--out", str(out)]) == EXIT_OK
        assert MultiplicityTable.from_json(out.read_text()).is_complete()

    def test_syndrome_table_golden(self, capsys):
        assert main(["syndrome-table"]) == EXIT_OK
        assert capsys.readouterr().out == (GOLDEN / "syndrome_table.txt").read_text()

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "dfs_exchange", "dims", "--k", "4"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["result"][1]["dfs_dimension"] == 2
