import json

import pytest

from app.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, load_run_config, main
from app.schemas import OutputFormat, Subcommand

SMALL_GRID = "--grid=-1:1:3,-1:1:3"


def _records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


class TestConfiguration:
    def test_flags_override_config_file(self, tmp_path):
        config_file = tmp_path / "run.json"
        config_file.write_text(json.dumps({"subcommand": "density", "q": 0.2, "seed": 4, "tol": 1e-9}))
        args = build_parser().parse_args(["density", "--config", str(config_file), "--r", "0.1"])
        cfg = load_run_config(args)
        assert cfg.subcommand == Subcommand.DENSITY
        assert cfg.q is None
        assert cfg.r == 0.1
        assert cfg.seed == 4
        assert cfg.tol == 1e-9

    def test_grid_and_box_parsing(self):
        args = build_parser().parse_args(["sample", SMALL_GRID, "--box", "3,4,5", "--format", "svg"])
        cfg = load_run_config(args)
        assert cfg.box == (3, 4, 5)
        assert cfg.grid.tau_steps == 3
        assert cfg.format == OutputFormat.SVG

    def test_header_echoes_every_field(self):
        cfg = load_run_config(build_parser().parse_args(["verify", "--q", "0.3"]))
        header = cfg.header()
        assert header["q"] == 0.3
        assert header["subcommand"] == "verify"


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["hexagon"],
            ["kernel", "--q", "0.3", "--r", "0.1"],
            ["density", "--q", "1.5"],
            ["density", "--grid=1:0:3,0:1:3"],
            ["sample", "--box", "2,2"],
            ["verify", "--suites", "no_such_suite"],
            ["kernel", "--kind", "plancherel", "--alpha", "-1", "--points", "0,0.5"],
        ],
    )
    def test_exit_code_two(self, argv):
        assert main(argv) == EXIT_USAGE

    def test_help_exits_cleanly(self):
        assert main(["--help"]) == EXIT_OK


class TestKernelCommand:
    def test_entries_printed_as_json_lines(self, capsys):
        assert main(["kernel", "--kind", "3d", "--q", "0.3", "--points", "0,0.5;1,0"]) == EXIT_OK
        records = _records(capsys.readouterr().out)
        assert len(records) == 2
        for record in records:
            assert 0.0 <= record["value"] <= 1.0
            assert record["N_used"] > 0
            assert "est_error" in record

    def test_determinant(self, capsys):
        assert main(["kernel", "--kind", "bulk", "--bulk", "0,0", "--points", "0,0.5;0,1.5", "--determinant"]) == EXIT_OK
        (record,) = _records(capsys.readouterr().out)
        assert record["probability"] == pytest.approx(1 / 9 - 3 / (4 * 3.141592653589793 ** 2), abs=1e-8)

    def test_parity_violation_reported_per_record(self, capsys):
        assert main(["kernel", "--kind", "3d", "--q", "0.3", "--points", "0,0.5;0,1"]) == EXIT_FAILURE
        records = _records(capsys.readouterr().out)
        assert "error" not in records[0] or records[0]["error"] is None
        assert records[1]["error"]

    def test_queries_file_to_output_file(self, tmp_path):
        queries = tmp_path / "queries.jsonl"
        queries.write_text('{"first": [0, 0.5], "second": [0, 0.5]}\n{"points": [[0, 0.5], [1, 0]]}\n')
        out = tmp_path / "kernel.jsonl"
        assert main(["kernel", "--kind", "3d", "--q", "0.2", "--queries-file", str(queries), "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# config: ")
        first, second = (json.loads(line) for line in lines[1:])
        assert 0.0 < first["value"] < 1.0
        assert -1e-9 <= second["probability"] <= first["value"]


class TestOutputCommands:
    def test_density(self, tmp_path):
        out = tmp_path / "density.csv"
        assert main(["density", SMALL_GRID, "--format", "svg", "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# config: ")
        assert lines[1] == "tau,chi,theta,rho"
        assert len(lines) == 2 + 9
        assert (tmp_path / "density.svg").exists()

    def test_limit_shape(self, tmp_path):
        out = tmp_path / "shape.csv"
        assert main(["limit-shape", SMALL_GRID, "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[1] == "tau,chi,x,y,z"
        assert not (tmp_path / "shape.svg").exists()

    def test_sample(self, tmp_path):
        out = tmp_path / "sample.json"
        argv = ["sample", "--q", "0.6", "--box", "3,3,3", "--steps", "20000", "--seed", "2", SMALL_GRID, "--out", str(out)]
        assert main(argv) == EXIT_OK
        document = json.loads(out.read_text())
        assert document["config"]["seed"] == 2
        assert document["volume"] == sum(map(sum, document["plane_partition"]))
        assert (tmp_path / "sample.svg").read_text().startswith("<?xml")
        density = (tmp_path / "sample.density.csv").read_text().splitlines()
        assert density[1] == "tau_lo,tau_hi,chi_lo,chi_hi,empirical,predicted"
        assert len(density) == 2 + 4

    def test_sample_is_reproducible(self, tmp_path):
        for name in ("a", "b"):
            main(["sample", "--q", "0.6", "--box", "3,3,3", "--steps", "20000", SMALL_GRID, "--out", str(tmp_path / f"{name}.json")])
        assert json.loads((tmp_path / "a.json").read_text())["plane_partition"] == json.loads(
            (tmp_path / "b.json").read_text()
        )["plane_partition"]


class TestVerifyCommand:
    def test_single_suite_passes(self, capsys, tmp_path):
        out = tmp_path / "verify.json"
        assert main(["verify", "--suites", "mcmahon", "--cutoff", "6", "--out", str(out)]) == EXIT_OK
        table = capsys.readouterr().out
        assert "mcmahon" in table
        assert "pass" in table
        report = json.loads(out.read_text())
        assert report["results"][0]["success"] is True

    def test_failure_names_the_suite(self, capsys, monkeypatch):
        from app.services.verification_service import VerificationService

        def broken(self, cfg):
            raise RuntimeError("boom")

        monkeypatch.setattr(VerificationService, "suite_volume_law", broken)
        assert main(["verify", "--suites", "volume_law"]) == EXIT_FAILURE
        captured = capsys.readouterr()
        assert "FAIL" in captured.out
        assert "volume_law" in captured.err

    def test_truncation_warning_is_logged(self, caplog):
        with caplog.at_level("WARNING"):
            main(["verify", "--suites", "mcmahon", "--q", "0.9", "--cutoff", "10"])
        assert "Enumeration tail" in caplog.text


def test_unknown_kernel_kind_is_a_usage_error():
    assert main(["kernel", "--kind", "hexagon", "--points", "0,0.5"]) == EXIT_USAGE


def test_limit_shape_logs_symmetry_defect(tmp_path, caplog):
    with caplog.at_level("INFO"):
        assert main(["limit-shape", "--grid=-1:1:5,-1:1:5", "--out", str(tmp_path / "shape.csv")]) == EXIT_OK
    assert "symmetry defect" in caplog.text
