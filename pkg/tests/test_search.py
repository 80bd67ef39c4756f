"""
有界モデル探索のテスト
"""
import pytest

from src.core.amalgam import joint_theory, pushout
from src.core.errors import SearchBudgetExceeded
from src.core.interpretation import check_kleene_axioms, satisfies, satisfies_all
from src.core.model_search import bounded_model_search, is_basic_fragment, size_vectors
from src.models.model import KleeneModel
from src.models.run_config import SearchBudget, SemanticsMode
from src.surface.parser import parse, parse_sentence


ARROWS = parse("""
theory arrows
  sorts s
  op c : -> s
  op d : -> s
  label a : s~s
  axiom forward : c =[a]=> d
  axiom not_back : ~(d =[a]=> c)
end
""")

CLASH = parse("""
theory clash
  sorts s
  op c : -> s
  op d : -> s
  axiom same : c == d
  axiom differ : ~(c == d)
end
""")


class TestSizeVectors:
    def test_order_by_sum_then_lexicographic(self):
        got = [(v["s"], v["t"]) for v in size_vectors(["s", "t"], {"s", "t"}, 2)]
        assert got == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_unused_sorts_stay_at_one(self):
        got = [v["t"] for v in size_vectors(["s", "t"], {"s"}, 3)]
        assert got == [1, 1, 1]

    def test_caps(self):
        got = [v["s"] for v in size_vectors(["s"], {"s"}, 5, {"s": 2})]
        assert got == [1, 2]


class TestGeneralSearch:
    def test_two_needs_two_elements(self, two):
        result = bounded_model_search(two.signature, two.sentences, bound=2)
        assert not result.exhausted
        assert result.model.carriers["s"] == ("e0", "e1")
        assert satisfies_all(result.model, two.sentences)

    def test_bound_one_is_exhausted(self, two):
        result = bounded_model_search(two.signature, two.sentences, bound=1)
        assert result.exhausted
        assert result.bound == 1
        assert result.candidates == 1

    def test_refute(self, two):
        reflexive = parse_sentence("forall {x:s} . x =[r]=> x", two)
        result = bounded_model_search(two.signature, two.sentences, refute=[reflexive], bound=2)
        assert not result.exhausted
        assert not satisfies(result.model, reflexive)

    def test_tak_candidates_carry_standard_algebras(self, two):
        result = bounded_model_search(two.signature, two.sentences, bound=2, semantics=SemanticsMode.TAK)
        assert isinstance(result.model, KleeneModel)
        assert check_kleene_axioms(result.model) == []

    def test_budget(self, two):
        impossible = parse_sentence("exists {x:s} . x =[r]=> x /\\ ~(x =[r]=> x)", two)
        with pytest.raises(SearchBudgetExceeded):
            bounded_model_search(two.signature, [impossible], bound=2, budget=SearchBudget(max_candidates=3))

    def test_bound_must_be_positive(self, two):
        with pytest.raises(ValueError):
            bounded_model_search(two.signature, two.sentences, bound=0)


class TestBasicFragment:
    def test_fragment_detection(self, two):
        assert is_basic_fragment(ARROWS.sentences)
        assert not is_basic_fragment(two.sentences)

    def test_finds_model(self):
        result = bounded_model_search(ARROWS.signature, ARROWS.sentences, bound=3)
        assert not result.exhausted
        assert len(result.model.carriers["s"]) == 2
        assert satisfies_all(result.model, ARROWS.sentences)

    def test_contradiction_is_exhausted(self):
        result = bounded_model_search(CLASH.signature, CLASH.sentences, bound=3)
        assert result.exhausted


class TestJointTheories:
    def test_merged_sorts_make_joint_theory_inconsistent(self, load_cospan):
        c, left, right = load_cospan("d1")
        joint = joint_theory(c, pushout(c), left, right)
        assert joint.name == "d1_joint"
        assert bounded_model_search(joint.signature, joint.sentences, bound=2).exhausted

    def test_overlapping_merge(self, load_cospan):
        c, left, right = load_cospan("d2")
        joint = joint_theory(c, pushout(c), left, right)
        result = bounded_model_search(joint.signature, joint.sentences, bound=2)
        assert not result.exhausted
        assert satisfies_all(result.model, joint.sentences)
        distinct = parse_sentence("d' == d'''", joint)
        assert bounded_model_search(joint.signature, joint.sentences, refute=[distinct], bound=2).exhausted
