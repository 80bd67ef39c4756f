"""
押し出し・非交差性・モデルの融合のテスト
"""
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from src.core.amalgam import Cospan, amalgamate, commutes, is_disjoint, joint_theory, merged_sorts, pushout
from src.core.errors import AmalgamationMismatch
from src.core.interpretation import reduct, satisfies_all
from src.models.model import FiniteModel, standard_kleene
from src.models.morphism import GenMorphism
from src.models.signature import FuncDecl, LabelDecl, Signature

from .strategies import relations


def _left_model(sig: Signature) -> FiniteModel:
    """d2_left のモデル（d' と d'' を分ける）"""
    return FiniteModel.build(
        sig, {"s": ("e0", "e1"), "s'''": ("e0", "e1")},
        {"d'": {(): 0}, "d''": {(): 1}, "d'''": {(): 0}}, {}, "m0",
    )


class TestDisjointness:
    @pytest.mark.parametrize("name, witness", [("d1", "s'"), ("d2", "s''")])
    def test_merged_on_both_sides(self, load_cospan, name, witness):
        c, _, _ = load_cospan(name)
        assert is_disjoint(c).disjoint is False
        assert is_disjoint(c).witness == witness

    def test_disjoint(self, load_cospan):
        c, _, _ = load_cospan("disjoint")
        assert is_disjoint(c).disjoint
        assert is_disjoint(c).witness is None

    def test_merged_sorts(self, load_cospan):
        c, _, _ = load_cospan("d2")
        assert merged_sorts(c.chi0) == ["s'", "s''"]
        assert merged_sorts(c.chi1) == ["s''", "s'''"]


class TestPushout:
    @pytest.mark.parametrize("name", ["d1", "d2", "disjoint"])
    def test_square_commutes(self, load_cospan, name):
        c, _, _ = load_cospan(name)
        assert commutes(c, pushout(c))

    def test_d1_collapses_to_one_sort(self, load_cospan):
        c, _, _ = load_cospan("d1")
        p = pushout(c)
        assert p.signature.sorts == ("s",)
        assert {f.name for f in p.signature.funcs} == {"d'", "d''"}
        assert p.classes["s"] == ((0, "s"), (1, "s"))

    def test_d2_merges_through_the_overlap(self, load_cospan):
        c, _, _ = load_cospan("d2")
        p = pushout(c)
        assert p.signature.sorts == ("s",)
        assert {f.result for f in p.signature.funcs} == {"s"}

    def test_unrelated_symbols_with_the_same_name_are_kept_apart(self):
        base = Signature.build(["s"], [], [])
        side = Signature.build(["s"], [], [LabelDecl("r", "s", "s")])
        c = Cospan("twins", base, side, side,
                   GenMorphism.plain(base, side, {"s": "s"}, {}, {}),
                   GenMorphism.plain(base, side, {"s": "s"}, {}, {}))
        p = pushout(c)
        assert sorted(l.name for l in p.signature.labels) == ["in0_r", "in1_r"]
        assert p.inj0.label_map["r"].name == "in0_r"
        assert p.inj1.label_map["r"].name == "in1_r"


class TestJointTheory:
    def test_axioms_are_prefixed_with_their_theory(self, load_cospan):
        c, left, right = load_cospan("d1")
        joint = joint_theory(c, pushout(c), left, right)
        assert joint.name == "d1_joint"
        assert [name for name, _ in joint.axioms] == [
            "d1_left_two_s", "d1_left_same", "d1_right_two_s", "d1_right_differ",
        ]


class TestAmalgamation:
    def test_reducts_are_recovered(self, load_cospan):
        c, left, _ = load_cospan("disjoint")
        p = pushout(c)
        m0 = _left_model(left.signature)
        assert satisfies_all(m0, left.sentences)
        m1 = reduct(c.chi0, m0)
        m = amalgamate(c, p, m0, m1)
        assert reduct(p.inj0, m).diff(m0) is None
        assert reduct(p.inj1, m).diff(m1) is None

    def test_mismatch(self, load_cospan):
        c, left, right = load_cospan("disjoint")
        m0 = _left_model(left.signature)
        m1 = FiniteModel.build(
            right.signature, {"s'": ("e0", "e1"), "s''": ("e0", "e1"), "s'''": ("e0", "e1")},
            {"d'": {(): 1}, "d''": {(): 1}, "d'''": {(): 0}}, {}, "m1",
        )
        with pytest.raises(AmalgamationMismatch) as e:
            amalgamate(c, pushout(c), m0, m1)
        assert e.value.component == "op d'"

    def test_semantics_must_agree(self, load_cospan):
        c, left, _ = load_cospan("disjoint")
        m0 = _left_model(left.signature)
        with pytest.raises(AmalgamationMismatch) as e:
            amalgamate(c, pushout(c), standard_kleene(m0), reduct(c.chi0, m0))
        assert e.value.component == "semantics"

    def test_kleene_models(self, load_cospan):
        c, left, _ = load_cospan("disjoint")
        p = pushout(c)
        k0 = standard_kleene(_left_model(left.signature))
        k1 = reduct(c.chi0, k0)
        k = amalgamate(c, p, k0, k1)
        assert reduct(p.inj0, k).diff(k0) is None


def _side(base: Signature, sort_map, extra: str) -> Signature:
    """基底の記号を同名で写し、ソート extra とその上の演算・ラベルを足した側のシグネチャ"""
    funcs = [FuncDecl(f.name, tuple(sort_map[s] for s in f.args), sort_map[f.result]) for f in base.funcs]
    funcs.append(FuncDecl(f"h_{extra}", (sort_map[base.sorts[0]],), extra))
    labels = [LabelDecl(l.name, sort_map[l.source], sort_map[l.target]) for l in base.labels]
    labels.append(LabelDecl(f"k_{extra}", extra, extra))
    return Signature.build(sorted(set(sort_map.values())) + [extra], funcs, labels)


def _random_model(draw, sig: Signature, carriers, name: str) -> FiniteModel:
    tables = {}
    for f in sig.funcs:
        value = st.integers(0, len(carriers[f.result]) - 1)
        ranges = [range(len(carriers[s])) for s in f.args]
        tables[f.name] = {args: draw(value) for args in itertools.product(*ranges)}
    labels = {l.name: draw(relations(len(carriers[l.source]))) for l in sig.labels}
    return FiniteModel.build(sig, carriers, tables, labels, name)


def _elements(n: int):
    return tuple(f"e{i}" for i in range(n))


@st.composite
def amalgamation_cases(draw):
    """非交差な余スパンと、m0 の縮約から組み立てた m1"""
    base_sorts = ["p", "q"][:draw(st.integers(1, 2))]
    base = Signature.build(
        base_sorts,
        [FuncDecl(f"c_{s}", (), s) for s in base_sorts] + [FuncDecl("f_p", ("p",), base_sorts[-1])],
        [LabelDecl(f"r_{s}", s, s) for s in base_sorts],
    )
    identity = {s: s for s in base_sorts}
    merging = {s: "m" for s in base_sorts}
    # 併合は高々片側だけ
    merged_side = draw(st.sampled_from([None, 0, 1])) if len(base_sorts) == 2 else None
    left_map = merging if merged_side == 0 else identity
    right_map = merging if merged_side == 1 else identity
    left = _side(base, left_map, "l")
    right = _side(base, right_map, "o")
    c = Cospan("generated", base, left, right,
               GenMorphism.plain(base, left, left_map, {}, {}),
               GenMorphism.plain(base, right, right_map, {}, {}))

    sizes = {s: draw(st.integers(1, 2)) for s in left.sorts}
    if merged_side == 1:
        # 右で併合されるソートは左でも同じ台集合を持つ
        sizes["q"] = sizes["p"]
    m0 = _random_model(draw, left, {s: _elements(n) for s, n in sizes.items()}, "m0")
    shared = reduct(c.chi0, m0)
    carriers = {right_map[s]: shared.carriers[s] for s in base_sorts}
    carriers["o"] = _elements(draw(st.integers(1, 2)))
    m1 = _random_model(draw, right, carriers, "m1")
    m1 = FiniteModel.build(
        right, carriers,
        {f.name: (dict(shared.table_entries(f.name)) if base.func(f.name) else dict(m1.table_entries(f.name)))
         for f in right.funcs},
        {l.name: shared.relation(l.name) if base.label(l.name) else m1.relation(l.name) for l in right.labels},
        "m1",
    )
    if draw(st.booleans()):
        return c, standard_kleene(m0), standard_kleene(m1)
    return c, m0, m1


class TestGeneratedAmalgamation:
    @given(amalgamation_cases())
    @settings(max_examples=50, deadline=None)
    def test_reducts_of_the_amalgam(self, case):
        c, m0, m1 = case
        assert is_disjoint(c).disjoint
        p = pushout(c)
        assert commutes(c, p)
        m = amalgamate(c, p, m0, m1)
        assert reduct(p.inj0, m).diff(m0) is None
        assert reduct(p.inj1, m).diff(m1) is None
