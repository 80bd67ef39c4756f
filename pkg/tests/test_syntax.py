"""
シグネチャ・射・翻訳・代入・糖衣展開・複雑度のテスト
"""
import pytest
from hypothesis import given, settings, strategies as st

from src.core.complexity import Complexity, complexity, complexity0
from src.core.desugar import desugar_action, desugar_sentence, le_sentence, power
from src.core.errors import MorphismError, VariableShadowsSymbol
from src.core.interpretation import interpret_action, reduct, satisfies
from src.core.translation import (
    alpha_equal, apply_substitution, canonical, check_morphism, compose, extend_block, kleisli_extend,
    translate_sentence,
)
from src.models.model import FiniteModel
from src.models.morphism import GenMorphism, Substitution
from src.models.relation import Relation
from src.models.signature import Block, FuncDecl, LabelDecl, Signature, Variable, validate_signature
from src.models.syntax import (
    And, Comp, Complement, Converse, Dead, Eq, Equiv, Exists, Forall, Implies, Label, Le, Live, Meet,
    One, Plus, Power, PreImp, Residual, Star, Term, Trans, Union, Zero, is_core_action,
)

from .strategies import C, D, SIG, actions, endomorphisms, label_sentences, models, sentences, terms


a = Label("a", "s")
b = Label("b", "s")


def var(name: str, sort: str = "s") -> Term:
    return Term.const(name, sort)


class TestValidateSignature:
    def test_meal_signature_is_valid(self, meal):
        assert validate_signature(meal.signature) == []

    def test_empty_signature_is_valid(self):
        assert validate_signature(Signature()) == []

    def test_non_diagonal_label(self):
        sig = Signature.build(["s", "t"], [], [LabelDecl("l", "s", "t")])
        assert "non-diagonal label: l" in validate_signature(sig)

    def test_name_shared_between_components(self):
        sig = Signature.build(["s"], [FuncDecl("s", (), "s")])
        assert validate_signature(sig) == ["name used as both sort and op: s"]

    def test_undeclared_sort(self):
        sig = Signature.build(["s"], [FuncDecl("f", ("t",), "s")])
        assert "undeclared sort t in op f" in validate_signature(sig)


class TestKleisli:
    def test_identity_leaves_terms_alone(self):
        t = Term("f", (C,), "s")
        assert kleisli_extend(GenMorphism.identity(SIG), t) == t

    def test_star_case(self):
        chi = GenMorphism(SIG, SIG, {"s": "s"}, GenMorphism.identity(SIG).func_map,
                          {"a": Comp(b, b), "b": b})
        assert kleisli_extend(chi, Star(a)) == Star(Comp(b, b))

    def test_one_step_term(self):
        chi = GenMorphism(SIG, SIG, {"s": "s"}, {**GenMorphism.identity(SIG).func_map, "c": D}, {"a": a, "b": b})
        assert kleisli_extend(chi, Term("f", (C,), "s")) == Term("f", (D,), "s")

    def test_unmapped_symbol(self):
        chi = GenMorphism(SIG, SIG, {"s": "s"}, {}, {})
        with pytest.raises(MorphismError, match="unmapped symbol"):
            kleisli_extend(chi, C)

    def test_compose_rejects_mismatched_signatures(self):
        other = Signature.build(["t"])
        with pytest.raises(MorphismError, match="signature mismatch"):
            compose(GenMorphism.identity(SIG), GenMorphism.identity(other))

    @settings(max_examples=200)
    @given(endomorphisms())
    def test_unit_laws(self, chi):
        identity = GenMorphism.identity(SIG)
        assert check_morphism(chi) == []
        assert compose(identity, chi).same_maps(chi)
        assert compose(chi, identity).same_maps(chi)

    @given(endomorphisms(), endomorphisms(), endomorphisms())
    def test_composition_is_associative(self, chi1, chi2, chi3):
        left = compose(chi3, compose(chi2, chi1))
        right = compose(compose(chi3, chi2), chi1)
        assert left.same_maps(right)

    @given(endomorphisms(), endomorphisms(), st.one_of(terms(), actions()))
    def test_extension_of_composite(self, chi1, chi2, x):
        assert kleisli_extend(compose(chi2, chi1), x) == kleisli_extend(chi2, kleisli_extend(chi1, x))


class TestBlockExtension:
    def test_empty_block(self):
        sig, inclusion = extend_block(SIG, Block())
        assert sig == SIG
        assert inclusion.same_maps(GenMorphism.identity(SIG))

    def test_first_order_and_label_variables(self):
        sig, inclusion = extend_block(SIG, Block.of(Variable("x", "s"), Variable("pi", "s", label=True)))
        assert sig.func("x") == FuncDecl("x", (), "s")
        assert sig.label("pi") == LabelDecl("pi", "s", "s")
        assert inclusion.source == SIG and inclusion.target == sig

    def test_shadowing_is_rejected(self):
        with pytest.raises(VariableShadowsSymbol):
            extend_block(SIG, Block.of(Variable("c", "s")))

    def test_disjoint_extensions_commute(self):
        x = Block.of(Variable("x", "s"))
        y = Block.of(Variable("y", "s", label=True))
        xy, _ = extend_block(extend_block(SIG, x)[0], y)
        yx, _ = extend_block(extend_block(SIG, y)[0], x)
        assert xy == yx


class TestTranslateSentence:
    def test_identity(self):
        phi = Forall(Block.of(Variable("x", "s")), Trans(var("x"), a, C))
        assert translate_sentence(GenMorphism.identity(SIG), phi) == phi

    def test_quantifier_clause(self):
        source = Signature.build(["s"], [], [LabelDecl("l", "s", "s")])
        target = Signature.build(["s2"], [], [LabelDecl("m", "s2", "s2")])
        chi = GenMorphism.plain(source, target, {"s": "s2"}, {}, {"l": "m"})
        phi = Exists(Block.of(Variable("x", "s")), Trans(var("x"), Label("l", "s"), var("x")))
        expected = Exists(Block.of(Variable("x", "s2")),
                          Trans(var("x", "s2"), Label("m", "s2"), var("x", "s2")))
        assert translate_sentence(chi, phi) == expected

    def test_label_to_star(self):
        chi = GenMorphism(SIG, SIG, {"s": "s"}, GenMorphism.identity(SIG).func_map, {"a": Star(b), "b": b})
        assert translate_sentence(chi, Trans(C, a, D)) == Trans(C, Star(b), D)

    def test_bound_variable_renamed_away_from_target_symbols(self):
        source = Signature.build(["s"])
        phi = Forall(Block.of(Variable("c", "s")), Eq(var("c"), var("c")))
        translated = translate_sentence(GenMorphism.inclusion(source, SIG), phi)
        assert translated.block.names == ("c_1",)
        assert alpha_equal(translated, phi)

    @given(endomorphisms(), endomorphisms(), sentences())
    def test_functoriality(self, chi1, chi2, phi):
        direct = translate_sentence(compose(chi2, chi1), phi)
        stepwise = translate_sentence(chi2, translate_sentence(chi1, phi))
        assert canonical(direct) == canonical(stepwise)

    @settings(max_examples=500, deadline=None)
    @given(endomorphisms(), models(), sentences())
    def test_satisfaction_condition(self, chi, m, phi):
        assert satisfies(m, translate_sentence(chi, phi)) == satisfies(reduct(chi, m), phi)

    @settings(max_examples=500, deadline=None)
    @given(endomorphisms(), models(max_size=2), label_sentences())
    def test_satisfaction_condition_with_label_quantifiers(self, chi, m, phi):
        assert satisfies(m, translate_sentence(chi, phi)) == satisfies(reduct(chi, m), phi)


class TestSubstitution:
    def test_empty_domain_is_identity(self):
        theta = Substitution(SIG, Block())
        phi = Trans(C, a, D)
        assert apply_substitution(theta, phi) == phi

    def test_leaf_replacement(self):
        theta = Substitution(SIG, Block.of(Variable("x", "s"), Variable("y", "s")), terms={"x": C, "y": D})
        assert apply_substitution(theta, Trans(var("x"), a, var("y"))) == Trans(C, a, D)

    def test_label_variable(self):
        theta = Substitution(SIG, Block.of(Variable("p", "s", label=True)), actions={"p": Star(a)})
        assert apply_substitution(theta, Trans(C, Comp(Label("p", "s"), b), D)) == Trans(C, Comp(Star(a), b), D)

    def test_bound_variable_is_untouched(self):
        theta = Substitution(SIG, Block.of(Variable("x", "s")), terms={"x": Term("f", (C,), "s")})
        phi = Exists(Block.of(Variable("z", "s")), Trans(var("x"), a, var("z")))
        expected = Exists(Block.of(Variable("z", "s")), Trans(Term("f", (C,), "s"), a, var("z")))
        assert apply_substitution(theta, phi) == expected

    def test_capture_is_avoided(self):
        theta = Substitution(SIG, Block.of(Variable("x", "s")), Block.of(Variable("y", "s")),
                             terms={"x": var("y")})
        phi = Exists(Block.of(Variable("y", "s")), Trans(var("x"), a, var("y")))
        result = apply_substitution(theta, phi)
        assert result.block.names != ("y",)
        assert alpha_equal(result, Exists(Block.of(Variable("z", "s")), Trans(var("y"), a, var("z"))))

    def test_wrong_image_sort(self):
        theta = Substitution(SIG, Block.of(Variable("p", "s", label=True)), terms={"p": C})
        with pytest.raises(MorphismError):
            apply_substitution(theta, Trans(C, Label("p", "s"), D))

    @given(terms())
    def test_variable_free_terms_are_fixed(self, t):
        theta = Substitution(SIG, Block.of(Variable("x", "s")), terms={"x": D})
        assert apply_substitution(theta, t) == t


class TestDesugar:
    def test_zeroth_power(self):
        assert desugar_action(Power(a, 0)) == One("s")

    def test_second_power(self):
        assert desugar_action(Power(a, 2)) == Comp(a, a)

    def test_power_unrolls_to_the_left(self):
        assert power(a, 3) == Comp(Comp(a, a), a)

    @pytest.mark.parametrize("sugar, core", [
        (Complement(a), PreImp(a, Zero("s"))),
        (Converse(a), Residual(a, One("s"))),
        (Plus(a), Comp(a, Star(a))),
        (Meet(a, b), PreImp(Union(PreImp(a, Zero("s")), PreImp(b, Zero("s"))), Zero("s"))),
    ])
    def test_definitions(self, sugar, core):
        assert desugar_action(sugar) == core

    @pytest.mark.parametrize("sugar", [
        Dead(Star(a)), Live(Comp(a, b)), Meet(Plus(a), Converse(b)), Power(Complement(a), 3),
    ])
    def test_result_is_core_and_idempotent(self, sugar):
        core = desugar_action(sugar)
        assert is_core_action(core)
        assert desugar_action(core) == core

    def test_dead_of_empty_action_is_identity(self):
        sig = Signature.build(["s"], [], [LabelDecl("a", "s", "s")])
        m = FiniteModel.build(sig, {"s": ("e0", "e1")}, {}, {"a": Relation.empty(2)})
        assert interpret_action(m, desugar_action(Dead(a))) == Relation.identity(2)

    def test_live_of_empty_action_is_empty(self):
        sig = Signature.build(["s"], [], [LabelDecl("a", "s", "s")])
        m = FiniteModel.build(sig, {"s": ("e0", "e1")}, {}, {"a": Relation.empty(2)})
        assert interpret_action(m, desugar_action(Live(a))) == Relation.empty(2)

    def test_le_sentence(self):
        x, y = var("x"), var("y")
        expected = Forall(Block.of(Variable("x", "s"), Variable("y", "s")),
                          Implies(Trans(x, a, y), Trans(x, Star(a), y)))
        assert desugar_sentence(Le(a, Star(a))) == expected

    def test_le_avoids_taken_names(self):
        phi = le_sentence(a, b, frozenset({"x"}))
        assert "x" not in phi.block.names

    def test_equiv_is_two_inclusions(self):
        assert desugar_sentence(Equiv(a, b)) == And((le_sentence(a, b), le_sentence(b, a)))


class TestComplexity:
    def test_equation(self):
        assert complexity(Eq(C, D)) == Complexity(0, 0, 0)

    def test_union_with_zero(self):
        assert complexity0(Union(a, Zero("s"))) == (0, 1)

    def test_star_height(self):
        assert complexity0(Star(Star(Comp(a, One("s"))))) == (2, 1)

    def test_connectives_count(self):
        phi = Forall(Block.of(Variable("x", "s")), Implies(Eq(C, D), Trans(C, Star(a), D)))
        assert complexity(phi) == Complexity(2, 1, 0)

    @pytest.mark.parametrize("n", [0, 1, 5, 10])
    def test_ordering_chain(self, n):
        pi = Label("pi", "s")
        body = Comp(pi, desugar_action(Complement(a)))
        quantified = Exists(Block.of(Variable("lam", "s", label=True)),
                            Trans(C, Label("lam", "s"), D))
        chain = [
            complexity(quantified),
            complexity(Trans(C, Star(body), D)),
            complexity(Trans(C, power(body, n), D)),
            complexity(Eq(C, D)),
        ]
        assert chain[0] > chain[1] > chain[2] > chain[3]

    def test_plain_label_power_ties_with_equation(self):
        body = Comp(Label("pi", "s"), a)
        assert complexity(Trans(C, power(body, 3), D)) == complexity(Eq(C, D))

    @given(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)),
           st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)))
    def test_order_is_lexicographic(self, x, y):
        assert (Complexity(*x) < Complexity(*y)) == (x < y)
