import json
import subprocess
import sys

import pytest

from entropy_mirage import experiments
from entropy_mirage.cli import EXIT_ASSERTION, EXIT_INPUT, EXIT_OK, main
from entropy_mirage.graph import load_graph, parse_edge_list


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestGenerate:
    def test_zk(self, capsys):
        code, out, _ = run(capsys, "generate", "zk", "--steps", "6")
        assert code == EXIT_OK
        assert parse_edge_list(out).edge_count == 18

    def test_randomized_zk_to_file(self, capsys, tmp_path):
        out = tmp_path / "zk.txt"
        assert run(capsys, "generate", "zk", "--steps", "5", "--randomized", "--seed", "3", "--out", str(out))[0] == EXIT_OK
        assert load_graph(out).edge_count == 14

    def test_digit_graph_from_pi(self, capsys):
        code, out, _ = run(capsys, "generate", "digit-graph", "--source", "pi", "--n", "20")
        assert code == EXIT_OK and parse_edge_list(out).node_count == 20

    @pytest.mark.parametrize(
        "argv",
        [
            ["er", "--n", "10", "--p", "0.3"],
            ["er", "--n", "10", "--edges", "12"],
            ["ba", "--n", "10", "--m", "2"],
            ["ring", "--n", "10", "--k", "4"],
            ["targeted", "--n", "30", "--entropy", "2.0", "--tol", "0.2"],
        ],
    )
    def test_other_kinds(self, capsys, argv):
        code, out, _ = run(capsys, "generate", *argv)
        assert code == EXIT_OK and out.startswith("# nodes=")

    def test_bad_ring(self, capsys):
        code, _, err = run(capsys, "generate", "ring", "--n", "10", "--k", "3")
        assert code == EXIT_INPUT and "error" in err

    def test_unknown_kind(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["generate", "lattice"])
        assert exc.value.code == EXIT_INPUT


class TestMeasure:
    @pytest.fixture
    def k4(self, tmp_path):
        p = tmp_path / "k4.txt"
        p.write_text("# nodes=4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")
        return p

    def test_adjacency(self, capsys, k4):
        code, out, _ = run(capsys, "measure", "--feature", "adjacency", "--input", str(k4))
        payload = json.loads(out)
        assert code == EXIT_OK and payload["value"] == 0.0
        assert payload["feature"] == "adjacency" and payload["provenance"] == f"file:{k4}"

    def test_compress_alias(self, capsys, k4):
        code, out, _ = run(capsys, "measure", "--feature", "compress", "--input", str(k4))
        assert code == EXIT_OK and json.loads(out)["feature"] == "compression"

    def test_block_without_L(self, capsys, k4):
        assert run(capsys, "measure", "--feature", "block", "--input", str(k4))[0] == EXIT_INPUT

    def test_missing_input(self, capsys, tmp_path):
        assert run(capsys, "measure", "--feature", "adjacency", "--input", str(tmp_path / "none"))[0] == EXIT_INPUT


class TestDigits:
    def test_emit_and_inspect(self, capsys, tmp_path):
        f = tmp_path / "pi.txt"
        assert run(capsys, "digits", "emit", "--source", "pi", "--count", "100", "--out", str(f))[0] == EXIT_OK
        code, out, _ = run(capsys, "digits", "inspect", str(f))
        info = json.loads(out)
        assert code == EXIT_OK and info["count"] == 100 and info["base"] == 10

    def test_emit_binarized(self, capsys):
        code, out, _ = run(capsys, "digits", "emit", "--source", "pi", "--count", "6", "--binarize")
        assert code == EXIT_OK and out.splitlines()[-1] == "000011"

    def test_inspect_bad_file(self, capsys, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("# base=2\n0127\n")
        assert run(capsys, "digits", "inspect", str(f))[0] == EXIT_INPUT


class TestExperiment:
    def test_writes_csv_and_json(self, capsys, tmp_path):
        code, out, _ = run(capsys, "experiment", "zk-growth", "--t-max", "20", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert (tmp_path / "zk-growth.csv").is_file() and (tmp_path / "zk-growth.json").is_file()
        assert "finding:" in out

    def test_assertion_exit_code(self, capsys, tmp_path, monkeypatch):
        def failing(**_):
            raise experiments.ExperimentAssertionError("forced")

        monkeypatch.setitem(experiments.KINDS, "zk-growth", failing)
        code, _, err = run(capsys, "experiment", "zk-growth", "--out", str(tmp_path))
        assert code == EXIT_ASSERTION and "forced" in err

    def test_omega_without_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "experiment", "omega-graph", "--out", str(tmp_path))
        assert code == EXIT_INPUT and "no Omega digit file supplied" in err

    def test_reruns_are_byte_identical(self, capsys, tmp_path):
        for d in ("a", "b"):
            run(capsys, "experiment", "ba-vs-er", "--replicates", "3", "--out", str(tmp_path / d))
        assert (tmp_path / "a/ba-vs-er.csv").read_bytes() == (tmp_path / "b/ba-vs-er.csv").read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "entropy_mirage.cli", "generate", "ring", "--n", "6", "--k", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.count("\n") == 7
