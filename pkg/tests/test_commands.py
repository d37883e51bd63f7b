"""
命令行解析与执行测试
"""

import json

import pytest

from cli.commands import BUG_MARKER, execute, parse_args
from core.errors import InternalInvariantError, UsageError
from core.canonical import canonical_form
from core.graph6 import graph6_decode, graph6_encode
from families.constructors import complete, subdivided_clique
from main import main
from tests.graphs import cycle_graph


class TestParseArgs:
    def test_construct_family(self):
        cmd = parse_args(["construct", "--family", "sK", "--n", "6", "--t", "4"])
        assert cmd.verb == "construct"
        assert cmd.graph == subdivided_clique(6, 4)
        assert cmd.params["family"] == "sK"

    def test_verify(self):
        cmd = parse_args(["verify-theorem", "--t", "3", "--n", "7"])
        assert cmd.params["n"] == 7 and cmd.params["t"] == 3
        assert cmd.params["prediction"] == "proof"

    def test_qindex_graph6(self):
        cmd = parse_args(["qindex", "--g6", "Bw"])
        assert cmd.graph == complete(3)

    @pytest.mark.parametrize(
        "argv,flag",
        [
            (["qindex", "--g6", "Bw", "--family", "complete", "--n", "3"], "--g6"),
            (["qindex"], "--family"),
            (["qindex", "--g6", "B"], "--g6"),
            (["construct", "--family", "odd", "--t", "4"], "--family"),
            (["minor-check", "--g6", "Bw"], "--t"),
            (["search", "--n", "4", "--t", "2"], "--t"),
            (["search", "--n", "4", "--t", "4"], "--n"),
            (["search", "--n", "6", "--t", "4", "--workers", "0"], "--workers"),
            (["verify-theorem", "--n", "6", "--t", "4", "--gap", "1e-12", "--tol", "1e-10"], "--gap"),
            (["search", "--n", "6", "--t", "4", "--gap", "0"], "--gap"),
            (["lemma-suite", "--t", "8", "--n", "9"], "--t"),
            (["qindex", "--g6", "Bw", "--tol", "-1"], "--tol"),
            (["rotate", "--g6", "Bw", "--u", "0", "--v", "1", "--moved", "x"], "--moved"),
            (["rotate", "--g6", "Bw", "--u", "0", "--v", "1", "--moved", "2"], "--moved"),
            (["selftest", "--trials", "0"], "--trials"),
        ],
    )
    def test_usage_errors_name_flag(self, argv, flag):
        with pytest.raises(UsageError) as info:
            parse_args(argv)
        assert info.value.flag == flag
        assert info.value.exit_code == 2

    def test_unknown_verb(self):
        with pytest.raises(UsageError):
            parse_args(["plot"])

    def test_unknown_flag(self):
        with pytest.raises(UsageError) as info:
            parse_args(["qindex", "--g6", "Bw", "--colour", "red"])
        assert info.value.flag == "--colour"


class TestExecute:
    def run(self, argv, app_config):
        return execute(parse_args(argv), app_config)

    def test_qindex_triangle(self, app_config):
        code, report = self.run(["qindex", "--g6", "Bw"], app_config)
        assert code == 0
        assert report.results["q1"] == pytest.approx(4.0)
        assert report.results["residual"] < 1e-10

    def test_construct(self, app_config):
        code, report = self.run(["construct", "--family", "knmm", "--n", "6"], app_config)
        assert code == 0
        assert report.results["m"] == 12
        assert report.results["degree_census"] == {"4": 6}

    def test_construct_canonical_representative(self, app_config):
        code, report = self.run(["construct", "--family", "sK", "--n", "7", "--t", "4"], app_config)
        assert code == 0
        representative = graph6_decode(report.results["canonical_graph6"])
        assert canonical_form(representative).hex() == report.results["canonical"]

    def test_minor_check_absent(self, app_config):
        code, report = self.run(["minor-check", "--g6", graph6_encode(cycle_graph(8)), "--t", "3"], app_config)
        assert code == 0
        assert report.results["minor"] == "absent"

    def test_minor_check_uses_configured_oracle_cap(self, app_config, monkeypatch):
        seen = []

        def recording(g, cert, oracle_cap):
            seen.append(oracle_cap)
            return True

        monkeypatch.setattr("cli.commands.verify_certificate", recording)
        app_config.search.oracle_cap = 6
        code, _ = self.run(["minor-check", "--g6", graph6_encode(cycle_graph(8)), "--t", "3"], app_config)
        assert code == 0
        assert seen == [6]

    def test_rotate(self, app_config):
        code, report = self.run(["rotate", "--g6", "Ch", "--u", "1", "--v", "2", "--moved", "3"], app_config)
        assert code == 0
        assert report.results["outcome"] == "increase_confirmed"
        assert report.results["q_after"] == pytest.approx(4.0, abs=1e-9)
        assert report.params["moved"] == [3]

    def test_verify_theorem(self, app_config):
        code, report = self.run(["verify-theorem", "--t", "4", "--n", "6"], app_config)
        assert code == 0
        assert report.results["predicted"] == graph6_encode(subdivided_clique(6, 4))
        assert report.passed

    def test_verify_odd_order_records_literal_discrepancy(self, app_config):
        code, report = self.run(["verify-theorem", "--t", "4", "--n", "5"], app_config)
        assert code == 0
        assert report.results["literal_statement"]["passed"] is False
        assert "literal_statement_excluded" in [a.name for a in report.assertions]

    def test_literal_prediction_fails(self, app_config):
        code, report = self.run(["verify-theorem", "--t", "4", "--n", "5", "--prediction", "literal"], app_config)
        assert code == 1
        assert report.failed == ["matches_prediction_literal"]

    def test_search_uses_cache(self, app_config):
        code, _ = self.run(["search", "--t", "4", "--n", "6"], app_config)
        assert code == 0
        assert app_config.cache.path.exists()

    def test_echo_drops_workers(self, app_config):
        _, report = self.run(["search", "--t", "3", "--n", "5", "--workers", "2"], app_config)
        assert "workers" not in report.params
        assert "workers" not in json.dumps(report.results)

    def test_lemma_suite(self, app_config):
        code, report = self.run(["lemma-suite", "--t", "3", "--n", "5"], app_config)
        assert code == 0
        assert report.results["orders"] == [4, 5]

    def test_capacity_error_exit_one(self, app_config):
        long_cycle = graph6_encode(cycle_graph(30))
        code, report = self.run(["minor-check", "--g6", long_cycle, "--t", "3"], app_config)
        assert code == 1
        assert report.results["error"] == "CapacityError"
        assert report.results["hint"]

    def test_internal_error_gets_bug_marker(self, app_config, monkeypatch):
        def broken(*args, **kwargs):
            raise InternalInvariantError("重复")

        monkeypatch.setattr("cli.commands.extremal_search", broken)
        code, report = self.run(["search", "--t", "3", "--n", "4"], app_config)
        assert code == 1
        assert report.results["bug_report"] == BUG_MARKER


class TestMain:
    def test_usage_exit_code(self, capsys):
        assert main(["search", "--n", "4"]) == 2
        assert "用法错误" in capsys.readouterr().err

    def test_report_on_stdout(self, capsys, tmp_path):
        assert main(["qindex", "--g6", "Bw", "--cache", str(tmp_path)]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["results"]["q1"] == 4.0
        assert data["assertions"][0]["pass"] is True

    def test_output_file_and_table(self, tmp_path):
        out = tmp_path / "report.txt"
        assert main(["construct", "--family", "get", "--t", "3", "--format", "table", "--output", str(out)]) == 0
        assert "degree_census" in out.read_text(encoding="utf-8")

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text("{not json", encoding="utf-8")
        assert main(["qindex", "--g6", "Bw", "--config", str(cfg)]) == 2

    def test_env_cache_overrides_flag(self, tmp_path, monkeypatch, capsys):
        env_dir = tmp_path / "env"
        flag_dir = tmp_path / "flag"
        monkeypatch.setenv("QEXTREMAL_CACHE", str(env_dir))
        assert main(["search", "--t", "3", "--n", "4", "--cache", str(flag_dir)]) == 0
        assert (env_dir / "qindex_cache.csv").exists()
        assert not flag_dir.exists()
