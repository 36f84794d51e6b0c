import json

import jsonschema
import pytest

from cwsolve import cli, fixture, serialize

REPORT_SCHEMA = {
    "type": "object",
    "required": ["problem", "optimum", "stats"],
    "properties": {
        "problem": {"type": "string"},
        "optimum": {"oneOf": [{"type": "integer"}, {"const": "infeasible"}]},
        "witness": {"type": "array", "items": {"type": "string"}},
        "stats": {
            "type": "object",
            "required": ["dp_nodes", "max_cell_entries", "reduce_calls", "elapsed_ms"],
            "properties": {
                "dp_nodes": {"type": "integer", "minimum": 0},
                "max_cell_entries": {"type": "integer", "minimum": 0},
                "reduce_calls": {"type": "integer", "minimum": 0},
                "elapsed_ms": {"type": "number", "minimum": 0},
            },
        },
    },
}


@pytest.fixture
def k3_file(tmp_path):
    path = tmp_path / "k3.cw"
    path.write_text(serialize(fixture("clique", 3)))
    return str(path)


@pytest.fixture
def p4_graph_file(tmp_path):
    path = tmp_path / "p4.graph"
    path.write_text("v a 1\nv b 1\nv c 1\nv d 1\ne a b\ne b c\ne c d\n")
    return str(path)


def run_json(capsys, argv):
    code = cli.run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestSolve:
    def test_fvs_on_triangle(self, capsys, k3_file):
        code, payload = run_json(capsys, ["solve", "--problem", "fvs",
                                          "--expr", k3_file, "--json"])
        assert code == 0
        assert payload["optimum"] == 1
        jsonschema.validate(payload, REPORT_SCHEMA)

    def test_mif_reports_forest_weight(self, capsys, k3_file):
        code, payload = run_json(capsys, ["solve", "--problem", "mif",
                                          "--expr", k3_file, "--json"])
        assert code == 0 and payload["optimum"] == 2

    def test_witness_listed(self, capsys, k3_file):
        code, payload = run_json(capsys, ["solve", "--problem", "cvc",
                                          "--expr", k3_file, "--witness", "--json"])
        assert code == 0 and len(payload["witness"]) == payload["optimum"] == 2

    def test_steiner_with_unknown_terminal(self, capsys, k3_file):
        code = cli.run(["solve", "--problem", "steiner", "--expr", k3_file,
                        "--terminals", "v1,zz", "--json"])
        assert code == 2

    def test_steiner_requires_terminals(self, k3_file):
        assert cli.run(["solve", "--problem", "steiner", "--expr", k3_file]) == 1

    def test_custom_problem(self, capsys, k3_file):
        code, payload = run_json(capsys, [
            "solve", "--problem", "custom", "--sigma", "N", "--rho", "N+",
            "--opt", "min", "--expr", k3_file, "--json"])
        assert code == 0 and payload["optimum"] == 1

    def test_custom_requires_sets(self, k3_file):
        assert cli.run(["solve", "--problem", "custom", "--expr", k3_file]) == 1

    def test_no_reduce_agrees(self, capsys, k3_file):
        _, base = run_json(capsys, ["solve", "--problem", "cds",
                                    "--expr", k3_file, "--json"])
        _, plain = run_json(capsys, ["solve", "--problem", "cds",
                                     "--expr", k3_file, "--no-reduce", "--json"])
        assert base["optimum"] == plain["optimum"]

    def test_cell_stat_respects_table_bounds(self, capsys, k3_file):
        _, cds = run_json(capsys, ["solve", "--problem", "cds",
                                   "--expr", k3_file, "--json"])
        assert cds["stats"]["max_cell_entries"] <= 1 << (2 - 1)  # k = 2
        _, fvs = run_json(capsys, ["solve", "--problem", "fvs",
                                   "--expr", k3_file, "--json"])
        assert fvs["stats"]["max_cell_entries"] <= (2 + 1) << 2

    def test_d_regular_preset(self, capsys, tmp_path):
        path = tmp_path / "c5.cw"
        path.write_text(serialize(fixture("cycle", 5)))
        code, payload = run_json(capsys, ["solve", "--problem", "d-regular:2",
                                          "--expr", str(path), "--json"])
        assert code == 0 and payload["optimum"] == 5

    def test_not_irredundant_is_exit_3(self, tmp_path):
        path = tmp_path / "bad.cw"
        path.write_text("cwexpr k=2\n(add 1 2 (add 1 2 (u (v a 1) (ren 1 2 (v b 1)))))\n")
        assert cli.run(["solve", "--problem", "fvs", "--expr", str(path)]) == 3

    def test_parse_error_is_exit_2(self, tmp_path):
        path = tmp_path / "broken.cw"
        path.write_text("cwexpr k=1\n(v a\n")
        assert cli.run(["solve", "--problem", "fvs", "--expr", str(path)]) == 2

    def test_human_readable_default(self, capsys, k3_file):
        assert cli.run(["solve", "--problem", "fvs", "--expr", k3_file]) == 0
        out = capsys.readouterr().out
        assert "optimum:  1" in out


class TestCheckExpr:
    def test_clean_expression_exit_zero(self, capsys, k3_file):
        assert cli.run(["check-expr", "--expr", k3_file]) == 0
        assert "irredundant" in capsys.readouterr().out

    def test_redundant_add_reported(self, tmp_path, capsys):
        path = tmp_path / "bad.cw"
        path.write_text("cwexpr k=2\n(add 1 2 (add 1 2 (u (v a 1) (ren 1 2 (v b 1)))))\n")
        code = cli.run(["check-expr", "--expr", str(path)])
        assert code != 0
        assert "fully-redundant" in capsys.readouterr().out


class TestGen:
    def test_fixture_roundtrip(self, capsys):
        assert cli.run(["gen", "--kind", "clique", "--n", "4"]) == 0
        text = capsys.readouterr().out
        from cwsolve import evaluate, parse_expression
        assert len(evaluate(parse_expression(text)).edges) == 6

    def test_naive_from_graph(self, capsys, p4_graph_file):
        assert cli.run(["gen", "--kind", "naive", "--graph", p4_graph_file]) == 0
        text = capsys.readouterr().out
        from cwsolve import evaluate, parse_expression
        assert len(evaluate(parse_expression(text)).edges) == 3

    def test_bad_usage(self):
        assert cli.run(["gen", "--kind", "clique"]) == 1
        assert cli.run(["gen", "--kind", "naive"]) == 1


class TestOracle:
    def test_fvs(self, capsys, p4_graph_file):
        code, payload = run_json(capsys, ["oracle", "--problem", "fvs",
                                          "--graph", p4_graph_file, "--json"])
        assert code == 0 and payload["optimum"] == 0

    def test_steiner(self, capsys, p4_graph_file):
        code, payload = run_json(capsys, [
            "oracle", "--problem", "steiner", "--graph", p4_graph_file,
            "--terminals", "a,d", "--json"])
        assert code == 0 and payload["optimum"] == 4

    def test_too_large_is_exit_4(self, tmp_path):
        path = tmp_path / "big.graph"
        path.write_text("\n".join(f"v x{i:02d}" for i in range(21)) + "\n")
        assert cli.run(["oracle", "--problem", "fvs", "--graph", str(path)]) == 4


class TestBench:
    def test_emits_csv(self, capsys, k3_file):
        assert cli.run(["bench", "--problem", "fvs", "--expr", k3_file]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "metric,value"
        metrics = dict(line.split(",", 1) for line in lines[1:])
        assert int(metrics["nodes_introduce"]) == 3
        assert "elapsed_ms" in metrics


def test_unknown_subcommand_is_usage_error():
    assert cli.run(["frobnicate"]) == 1
