"""
hypothesis の生成戦略

シグネチャは一つに固定する（ソート s、定数 c, d、単項 f、ラベル a, b）。ラベル変数は p。
"""
import itertools
from functools import partial

from hypothesis import strategies as st

from src.models.documents import ModelDoc, TheoryDoc
from src.models.model import FiniteModel, FullAlgebra, KleeneModel, ListedAlgebra
from src.models.morphism import GenMorphism
from src.models.proof import ProofDoc, ProofNode
from src.models.relation import Relation
from src.models.run_config import Mode, Ruleset
from src.models.signature import Block, FuncDecl, LabelDecl, Signature, Variable
from src.models.syntax import (
    And, Comp, Eq, Exists, Forall, Implies, Label, One, Or, PreImp, Residual, Sentence, Star,
    Term, Trans, Union, Zero,
)


SIG = Signature.build(
    ["s"],
    [FuncDecl("c", (), "s"), FuncDecl("d", (), "s"), FuncDecl("f", ("s",), "s")],
    [LabelDecl("a", "s", "s"), LabelDecl("b", "s", "s")],
)
THEORY = TheoryDoc("gen", SIG)

C = Term.const("c", "s")
D = Term.const("d", "s")
# 最も内側の束縛変数に置き換えられる仮の葉
_BOUND = Term.const("%bound", "s")


def _apply_f(t: Term) -> Term:
    return Term("f", (t,), "s")


def terms(leaves=(C, D)) -> st.SearchStrategy[Term]:
    return st.recursive(st.sampled_from(leaves), lambda inner: inner.map(_apply_f), max_leaves=4)


def hole_terms() -> st.SearchStrategy[Term]:
    """f の像になれる穴 ?0 入りの項"""
    return terms((C, D, Term.hole(0, "s")))


def actions(labels=("a", "b")) -> st.SearchStrategy:
    base = st.sampled_from([Label(name, "s") for name in labels] + [Zero("s"), One("s")])

    def extend(inner):
        return st.one_of(
            st.builds(Union, inner, inner),
            st.builds(PreImp, inner, inner),
            st.builds(Comp, inner, inner),
            st.builds(Residual, inner, inner),
            inner.map(Star),
        )

    return st.recursive(base, extend, max_leaves=6)


def _close(phi: Sentence) -> Sentence:
    """仮の葉を束縛変数に置き換え、ブロックの変数名を v0, v1, ... と振り直す"""
    counter = itertools.count()

    def term(t: Term, bound):
        if t == _BOUND:
            return Term.const(bound, "s") if bound else C
        if not t.args:
            return t
        return Term(t.symbol, tuple(term(a, bound) for a in t.args), t.sort)

    def walk(phi: Sentence, bound) -> Sentence:
        match phi:
            case Eq(left=l, right=r):
                return Eq(term(l, bound), term(r, bound))
            case Trans(source=s, action=a, target=t):
                return Trans(term(s, bound), a, term(t, bound))
            case Implies(premise=p, conclusion=c):
                return Implies(walk(p, bound), walk(c, bound))
            case Or(items=items):
                return Or(tuple(walk(i, bound) for i in items))
            case And(items=items):
                return And(tuple(walk(i, bound) for i in items))
            case Exists(body=body) | Forall(body=body):
                name = f"v{next(counter)}"
                return type(phi)(Block.of(Variable(name, "s")), walk(body, name))
        raise TypeError(phi)

    return walk(phi, None)


def sentences(quantifiers: bool = True, labels=("a", "b")) -> st.SearchStrategy[Sentence]:
    leaf_terms = terms((C, D, _BOUND))
    base = st.one_of(
        st.builds(Eq, leaf_terms, leaf_terms),
        st.builds(Trans, leaf_terms, actions(labels), leaf_terms),
    )

    def extend(inner):
        options = [
            st.builds(Implies, inner, inner),
            st.lists(inner, max_size=3).map(lambda items: And(tuple(items))),
            st.lists(inner, max_size=3).map(lambda items: Or(tuple(items))),
        ]
        if quantifiers:
            options.append(inner.map(lambda body: Forall(Block(), body)))
            options.append(inner.map(lambda body: Exists(Block(), body)))
        return st.one_of(*options)

    return st.recursive(base, extend, max_leaves=5).map(_close)


LABEL_VARIABLE = Block.of(Variable("p", "s", label=True))


def label_sentences() -> st.SearchStrategy[Sentence]:
    """ラベル変数 p を一つ束縛する文（評価は台集合 2 以下で）"""
    quantifier = st.sampled_from([Forall, Exists])
    return st.builds(lambda q, body: q(LABEL_VARIABLE, body), quantifier, sentences(labels=("a", "b", "p")))


@st.composite
def endomorphisms(draw) -> GenMorphism:
    """SIG から SIG への一般化射"""
    return GenMorphism(
        SIG, SIG, {"s": "s"},
        {"c": draw(terms()), "d": draw(terms()), "f": draw(hole_terms())},
        {"a": draw(actions()), "b": draw(actions())},
    )


def relations(n: int) -> st.SearchStrategy[Relation]:
    return st.integers(0, 2 ** (n * n) - 1).map(partial(Relation.from_bits, n))


@st.composite
def models(draw, max_size: int = 3) -> FiniteModel:
    n = draw(st.integers(1, max_size))
    element = st.integers(0, n - 1)
    tables = {
        "c": {(): draw(element)},
        "d": {(): draw(element)},
        "f": {(i,): draw(element) for i in range(n)},
    }
    labels = {name: draw(relations(n)) for name in ("a", "b")}
    return FiniteModel.build(SIG, {"s": tuple(f"e{i}" for i in range(n))}, tables, labels, "gen")


# ---- 文書 ----

DOC_NAMES = st.sampled_from(["gen", "plan", "meal2", "t0", "swap"])


@st.composite
def theory_docs(draw) -> TheoryDoc:
    """SIG（ときにソート u を足したもの）上の略記と公理を持つ理論"""
    sig = SIG
    if draw(st.booleans()):
        sig = Signature.build(
            ["s", "u"],
            list(SIG.funcs) + [FuncDecl("g", ("s", "u"), "u")],
            list(SIG.labels) + [LabelDecl("r", "u", "u")],
        )
    abbreviations = draw(st.lists(actions(), max_size=2))
    axioms = draw(st.lists(sentences(), max_size=3))
    return TheoryDoc(
        draw(DOC_NAMES), sig,
        tuple((f"act{i}", a) for i, a in enumerate(abbreviations)),
        tuple((f"ax{i}", phi) for i, phi in enumerate(axioms)),
    )


@st.composite
def listed_algebras(draw, n: int) -> ListedAlgebra:
    members = draw(st.lists(relations(n), min_size=1, max_size=4, unique=True))
    return ListedAlgebra(n, frozenset(members), {r: draw(relations(n)) for r in members})


@st.composite
def model_docs(draw) -> ModelDoc:
    """理論 gen の有限モデル（ときに TA_k モデル）"""
    name = draw(DOC_NAMES)
    m = draw(models())
    kind = draw(st.sampled_from(["plain", "full", "listed"]))
    if kind == "plain":
        return ModelDoc(name, THEORY.name, m)
    algebra = FullAlgebra(m.size("s")) if kind == "full" else draw(listed_algebras(m.size("s")))
    return ModelDoc(name, THEORY.name, KleeneModel(m, {"s": algebra}))


OVER_X = Block.of(Variable("x", "s"))

_NODE_RULES = st.sampled_from(["ax", "cut", "and_r", "or_l", "trans_r", "star_ind", "weaken"])


@st.composite
def _choices(draw, over: Block):
    leaves = (C, D, Term.const("x", "s")) if over else (C, D)
    values = {
        "i": st.integers(0, 5),
        "t": terms(leaves),
        "a1": actions(),
        "psi": sentences(),
        "x": st.sampled_from(["y", "w0", "k"]),
    }
    keys = draw(st.lists(st.sampled_from(sorted(values)), max_size=3, unique=True))
    return tuple((key, draw(values[key])) for key in keys)


def _leaf_nodes() -> st.SearchStrategy[ProofNode]:
    @st.composite
    def leaf(draw):
        over = draw(st.sampled_from([Block(), OVER_X]))
        return ProofNode(
            draw(_NODE_RULES),
            tuple(draw(st.lists(sentences(), max_size=2))),
            tuple(draw(st.lists(sentences(), max_size=2))),
            over,
            draw(_choices(over)),
        )

    return leaf()


def proof_nodes() -> st.SearchStrategy[ProofNode]:
    def extend(inner):
        return st.builds(
            lambda node, premises: ProofNode(node.rule, node.left, node.right, node.over, node.choices,
                                             tuple(premises)),
            _leaf_nodes(), st.lists(inner, min_size=1, max_size=2),
        )

    return st.recursive(_leaf_nodes(), extend, max_leaves=4)


def proof_docs() -> st.SearchStrategy[ProofDoc]:
    return st.builds(ProofDoc, DOC_NAMES, st.just(THEORY.name), st.sampled_from(Mode),
                     st.sampled_from(Ruleset), proof_nodes())


def documents() -> st.SearchStrategy:
    return st.one_of(theory_docs(), model_docs(), proof_docs())
