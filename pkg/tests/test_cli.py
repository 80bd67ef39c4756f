"""
tak コマンドのテスト（終了コードと出力の形式）
"""
from pathlib import Path

import pytest

from src.cli.commands import EXIT_ERROR, EXIT_FALSE, EXIT_OK, run
from src.surface.parser import parse
from src.surface.printer import pretty


FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
KLEENE = FIXTURES / "kleene"
ALGEBRA = FIXTURES / "algebra"
AMALGAM = FIXTURES / "amalgam"


def tak(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_accepts_kleene_proofs(self, capsys):
        paths = [KLEENE / "one_le_star_ind.tap", KLEENE / "star_absorb_right_kel.tap"]
        code, out, _ = tak(capsys, "check", *paths)
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0].startswith("ACCEPT one_le_star_ind (")
        assert lines[1].startswith("ACCEPT star_absorb_right_kel (")
        assert lines[-1] == "2 proofs, 2 accepted"

    def test_rejection_is_reported_with_its_location(self, capsys):
        code, out, _ = tak(capsys, "check", KLEENE / "star_absorb_right_mutated.tap", KLEENE / "one_le_star_ind.tap")
        assert code == EXIT_FALSE
        first = out.splitlines()[0]
        assert first.startswith("REJECT star_absorb_right_mutated at root.0.0.0 [ind_r_plus] side condition: "
                                "middle-term mismatch")
        assert out.splitlines()[-1] == "2 proofs, 1 accepted"

    def test_parallel_jobs_keep_the_order(self, capsys):
        paths = sorted(KLEENE.glob("*_ind.tap"))
        code, out, _ = tak(capsys, "check", "--jobs", 4, *paths)
        assert code == EXIT_OK
        names = [line.split()[1] for line in out.splitlines()[:-1]]
        assert names == [p.stem for p in paths]

    def test_rules_override(self, capsys):
        code, out, _ = tak(capsys, "check", "--rules", "kel", KLEENE / "star_absorb_left_ind.tap")
        assert code == EXIT_FALSE
        assert "rule not in ruleset" in out

    def test_theory_flag(self, capsys):
        code, _, _ = tak(capsys, "check", "--theory", KLEENE / "kernel.ta", KLEENE / "one_le_star_kel.tap")
        assert code == EXIT_OK

    def test_wrong_document_kind(self, capsys):
        code, _, err = tak(capsys, "check", KLEENE / "kernel.ta")
        assert code == EXIT_ERROR
        assert "expected a proof document" in err


class TestEval:
    @pytest.mark.parametrize("sentence, value, code", [
        ("forall {x:s} . exists {y:s} . x =[r]=> y", "true", EXIT_OK),
        ("exists {x:s} . x =[r]=> x", "false", EXIT_FALSE),
        ("forall {x:s} . x =[r;r]=> x", "true", EXIT_OK),
    ])
    def test_swap(self, capsys, sentence, value, code):
        got, out, _ = tak(capsys, "eval", ALGEBRA / "swap.tam", sentence)
        assert got == code
        assert out == f"{value}\n"

    @pytest.mark.parametrize("model, value", [("four", "true"), ("bad_star", "false")])
    def test_kleene_semantics_uses_the_star_map(self, capsys, model, value):
        _, out, _ = tak(capsys, "eval", "--semantics", "tak", ALGEBRA / f"{model}.tam", "exists {x:s} . x =[r*]=> x")
        assert out == f"{value}\n"

    def test_standard_semantics_ignores_the_algebra(self, capsys):
        _, out, _ = tak(capsys, "eval", ALGEBRA / "bad_star.tam", "exists {x:s} . x =[r*]=> x")
        assert out == "true\n"

    def test_malformed_sentence(self, capsys):
        code, _, err = tak(capsys, "eval", ALGEBRA / "swap.tam", "x =[q]=> x")
        assert code == EXIT_ERROR
        assert err.startswith("tak: ")


class TestSearch:
    def test_finds_a_model(self, capsys):
        code, out, _ = tak(capsys, "search", ALGEBRA / "two.ta", "--bound", 2)
        assert code == EXIT_OK
        assert out.startswith("model two_model use two")
        assert "carrier s = e0 e1" in out

    def test_exhausted(self, capsys):
        code, out, _ = tak(capsys, "search", ALGEBRA / "two.ta", "--bound", 1)
        assert code == EXIT_FALSE
        assert out == "exhausted(1)\n"

    def test_refute(self, capsys):
        code, out, _ = tak(capsys, "search", ALGEBRA / "two.ta", "--bound", 2,
                           "--refute", "forall {x:s} . exists {y:s} . x =[r]=> y")
        assert code == EXIT_OK
        assert "label r = {}" in out

    def test_output_directory_gets_fresh_names(self, capsys, tmp_path):
        tak(capsys, "search", ALGEBRA / "two.ta", "--bound", 2, "--out", tmp_path)
        code, out, _ = tak(capsys, "search", ALGEBRA / "two.ta", "--bound", 2, "--out", tmp_path)
        assert code == EXIT_OK
        assert out == f"wrote {tmp_path / 'two_model-1.tam'}\n"
        assert (tmp_path / "two_model.tam").read_text(encoding="utf-8").startswith("model two_model")

    def test_search_result_can_be_evaluated(self, capsys, tmp_path):
        # 書き出したモデルは元の理論と同じ場所から use を解決できる
        target = ALGEBRA / "two.ta"
        (tmp_path / "two.ta").write_text(target.read_text(encoding="utf-8"), encoding="utf-8")
        tak(capsys, "search", tmp_path / "two.ta", "--bound", 2, "--out", tmp_path / "found.tam")
        code, out, _ = tak(capsys, "eval", tmp_path / "found.tam", "exists {x:s, y:s} . ~(x == y)")
        assert code == EXIT_OK
        assert out == "true\n"


class TestPushout:
    def test_d1(self, capsys):
        code, out, _ = tak(capsys, "pushout", AMALGAM / "d1.tac")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "pushout d1"
        assert "  s <- d1_left.s, d1_right.s" in lines
        assert lines[-1] == "disjoint: no (witness s')"

    def test_disjoint(self, capsys):
        _, out, _ = tak(capsys, "pushout", AMALGAM / "disjoint.tac")
        assert out.splitlines()[-1] == "disjoint: yes"

    def test_joint_theory_is_written(self, capsys, tmp_path):
        target = tmp_path / "joint.ta"
        code, _, _ = tak(capsys, "pushout", AMALGAM / "d1.tac", "--out", target)
        assert code == EXIT_OK
        assert target.read_text(encoding="utf-8").startswith("theory d1_joint")
        code, out, _ = tak(capsys, "search", target, "--bound", 2)
        assert code == EXIT_FALSE
        assert out == "exhausted(2)\n"


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ["check", *sorted(KLEENE.glob("*.tap"))],
        ["check", "--jobs", 3, *sorted(KLEENE.glob("*.tap"))],
        ["search", ALGEBRA / "two.ta", "--bound", 2],
        ["search", ALGEBRA / "two.ta", "--bound", 2, "--refute", "forall {x:s} . exists {y:s} . x =[r]=> y"],
        ["pushout", AMALGAM / "d1.tac"],
        ["pushout", AMALGAM / "d2.tac"],
    ])
    def test_same_input_same_output(self, capsys, argv):
        first = tak(capsys, *argv)
        second = tak(capsys, *argv)
        assert first[:2] == second[:2]

    def test_jobs_do_not_change_the_output(self, capsys):
        paths = sorted(KLEENE.glob("*.tap"))
        assert tak(capsys, "check", *paths)[:2] == tak(capsys, "check", "--jobs", 4, *paths)[:2]


class TestFmt:
    def test_prints_the_canonical_form(self, capsys):
        path = KLEENE / "kernel.ta"
        code, out, _ = tak(capsys, "fmt", path)
        assert code == EXIT_OK
        assert out == pretty(parse(path.read_text(encoding="utf-8")))

    def test_fmt_is_idempotent(self, capsys, tmp_path):
        first = tmp_path / "meal.ta"
        tak(capsys, "fmt", FIXTURES / "meal" / "meal.ta", "--out", first)
        _, out, _ = tak(capsys, "fmt", first)
        assert out == first.read_text(encoding="utf-8")


class TestUsage:
    @pytest.mark.parametrize("argv", [
        [],
        ["frobnicate"],
        ["eval", "m.tam"],
        ["search", "two.ta", "--bound", "0"],
        ["search", "two.ta", "--bound", "two"],
        ["check", "--jobs", "0"],
        ["fmt", "kernel.ta", "--semantics", "tak"],
        ["eval", "m.tam", "true", "--out", "x"],
    ])
    def test_usage_errors(self, capsys, argv):
        code, _, err = tak(capsys, *argv)
        assert code == EXIT_ERROR
        assert err.startswith("tak: error: ")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = tak(capsys, "fmt", tmp_path / "missing.ta")
        assert code == EXIT_ERROR
        assert "missing.ta" in err

    def test_unsupported_extension(self, capsys, tmp_path):
        path = tmp_path / "notes.txt"
        path.write_text("theory t end\n", encoding="utf-8")
        code, _, err = tak(capsys, "fmt", path)
        assert code == EXIT_ERROR
        assert "unsupported file extension .txt" in err

    def test_parse_error_has_a_location(self, capsys, tmp_path):
        path = tmp_path / "broken.ta"
        path.write_text("theory broken\n  sorts s\n  op c : -> \nend\n", encoding="utf-8")
        code, _, err = tak(capsys, "fmt", path)
        assert code == EXIT_ERROR
        assert f"{path}:4:1: " in err
