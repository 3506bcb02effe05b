"""CLI behaviour: exit codes, FAIL lines, determinism, the build/cover
pipeline from the examples."""

import pytest

from deltagraph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBasics:
    def test_validate_builder(self, capsys):
        code, out, _ = run(capsys, "validate", "single_chain:q=2", "--radius", "4")
        assert code == 0
        assert "PASS fairness" in out

    def test_usage_error_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-verb"])
        assert exc.value.code == 2

    def test_bad_builder_exit_2(self, capsys):
        code, out, err = run(capsys, "validate", "single_chain:q=1")
        assert code == 2
        assert "error" in err

    def test_bad_file_exit_2(self, tmp_path, capsys):
        p = tmp_path / "bad.dg"
        p.write_text("not a graph\n")
        code, out, err = run(capsys, "validate", str(p))
        assert code == 2

    def test_deterministic_output(self, capsys):
        _, out1, _ = run(capsys, "spectrum", "double_chain:a=2,b=3", "--n", "2")
        _, out2, _ = run(capsys, "spectrum", "double_chain:a=2,b=3", "--n", "2")
        assert out1 == out2


class TestPipeline:
    def test_build_then_cover_dot(self, tmp_path, capsys):
        out_file = tmp_path / "g.dg"
        code, _, _ = run(
            capsys, "build", "double_chain", "a=2", "b=3", "--radius", "2",
            "--out", str(out_file),
        )
        assert code == 0
        code, out, _ = run(
            capsys, "cover", str(out_file), "--radius", "2", "--export-dot"
        )
        assert code == 0
        assert out.startswith("digraph")
        # the radius-2 cover of the double chain is the grid ball: 13 vertices
        assert out.count('label="[') == 13

    def test_no_input_mutation(self, tmp_path, capsys):
        out_file = tmp_path / "g.dg"
        run(capsys, "build", "single_chain", "q=2", "--radius", "3", "--out", str(out_file))
        before = out_file.read_text()
        run(capsys, "cover", str(out_file), "--radius", "2")
        run(capsys, "validate", str(out_file), "--radius", "2")
        assert out_file.read_text() == before

    def test_quotient_shift(self, capsys):
        code, out, _ = run(
            capsys, "quotient", "single_chain:q=2", "--shift", "3", "--radius", "4"
        )
        assert code == 0
        assert out.count("vertex") == 3

    def test_quotient_grid_shift(self, capsys):
        code, out, _ = run(
            capsys, "quotient", "grid:a=2,b=3", "--shift", "1,-1", "--radius", "3"
        )
        assert code == 0

    def test_quotient_from_file_action(self, tmp_path, capsys):
        from deltagraph import chain_shift_action, serialize_graph, single_chain

        ch = single_chain(2)
        p = tmp_path / "chain.dg"
        p.write_text(serialize_graph(ch, 4, actions=chain_shift_action(ch, 3)))
        code, out, _ = run(capsys, "quotient", str(p), "--action", "s", "--radius", "4")
        assert code == 0
        assert out.count("vertex") == 3

    def test_quotient_without_action_fails(self, capsys):
        code, out, _ = run(capsys, "quotient", "grid:a=2,b=3", "--radius", "3")
        assert code == 1
        assert out.startswith("FAIL action")

    def test_recover(self, capsys):
        code, out, _ = run(capsys, "recover", "cycle:n=3,q=2", "--radius", "4")
        assert code == 0
        assert out.count("vertex") == 3


class TestOutputs:
    def test_spectrum_exact_and_float(self, capsys):
        code, out, _ = run(capsys, "spectrum", "double_chain:a=2,b=3", "--n", "2")
        assert code == 0
        assert out.splitlines() == ["a^1 * b^-1:2", "1:4", "a^-1 * b^1:2"]
        code, out, _ = run(
            capsys, "spectrum", "double_chain:a=2,b=3", "--n", "2", "--float"
        )
        assert out.splitlines() == ["0.66666666666666663:2", "1:4", "1.5:2"]

    def test_loops(self, capsys):
        code, out, _ = run(capsys, "loops", "single_chain:q=2", "--n", "2")
        assert code == 0
        assert len(out.splitlines()) == 2

    def test_invariants_generators(self, capsys):
        code, out, _ = run(
            capsys, "invariants", "grid:a=2,b=3", "--radius", "2", "--shift-bound", "2"
        )
        assert code == 0
        assert "generator a^1" in out and "generator b^1" in out
        assert "certified-radius 2" in out

    def test_invariants_nontracial_gate(self, capsys):
        code, out, _ = run(
            capsys, "invariants", "double_chain:a=2,b=3", "--radius", "2",
            "--shift-bound", "2",
        )
        assert code == 1
        assert out.startswith("FAIL tracial witness=")

    def test_validate_failure_line(self, tmp_path, capsys):
        p = tmp_path / "unfair.dg"
        p.write_text(
            "delta-graph v1\n"
            "delta 3.0\n"
            "generator q 2.0\n"
            "tolerance 1e-09\n"
            "vertex 0\nvertex 1\n"
            "edge r0 0 1 weight q^1 conjugate l1\n"
            "edge l1 1 0 weight q^-1 conjugate r0\n"
            "basepoint 0\n"
        )
        code, out, _ = run(capsys, "validate", str(p), "--radius", "1")
        assert code == 1
        assert any(line.startswith("FAIL fairness") for line in out.splitlines())

    def test_tl_check(self, capsys):
        code, out, _ = run(capsys, "tl-check", "single_chain:q=2", "--max-len", "4")
        assert code == 0
        lines = out.splitlines()
        assert all(l.startswith("PASS") for l in lines)
        assert any("delooping" in l for l in lines)
        assert any("gram" in l for l in lines)

    def test_tl_check_float_mode(self, capsys):
        # float-weighted graph: relations hold within tolerance, not exactly
        code, out, _ = run(
            capsys, "tl-check", "deformed_chain:q=1.05,x=0.3", "--max-len", "4"
        )
        assert code == 0
        assert all(l.startswith("PASS") for l in out.splitlines())

    def test_export_dot(self, capsys):
        code, out, _ = run(capsys, "export-dot", "cycle:n=3,q=2", "--radius", "2")
        assert code == 0
        assert out.startswith("digraph") and out.strip().endswith("}")
