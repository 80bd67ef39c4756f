"""
シグネチャの押し出し・非交差性の判定・モデルの融合
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from ..models.documents import CospanDoc, Renaming, TheoryDoc
from ..models.model import AnyModel, FiniteModel, KleeneModel, plain_model
from ..models.morphism import GenMorphism
from ..models.signature import FuncDecl, LabelDecl, Signature, validate_signature
from ..utils.union_find import UnionFind
from .errors import AmalgamationMismatch, MorphismError, SignatureError
from .interpretation import reduct
from .translation import check_morphism, compose, fresh_name, translate_all


logger = logging.getLogger(__name__)

# 直和の要素 (側, 成分, 名前)。側は 0 が左、1 が右
Symbol = Tuple[int, str, str]


@dataclass(frozen=True)
class Cospan:
    """共通の基底を持つ二つの通常の射 χ0: Σ → Σ0, χ1: Σ → Σ1"""
    name: str
    base: Signature
    left: Signature
    right: Signature
    chi0: GenMorphism
    chi1: GenMorphism


@dataclass(frozen=True)
class PushoutResult:
    """押し出し Σ' と二つの入射 χ'0: Σ0 → Σ', χ'1: Σ1 → Σ'

    classes は Σ' の各記号から、その同値類に属する (側, 名前) の組への対応。
    """
    signature: Signature
    inj0: GenMorphism
    inj1: GenMorphism
    classes: Mapping[str, Tuple[Tuple[int, str], ...]] = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class Disjointness:
    disjoint: bool
    witness: Optional[str] = None


def _renaming_morphism(source: Signature, target: Signature, renaming: Renaming, side: str) -> GenMorphism:
    sorts, funcs, labels = dict(renaming.sorts), dict(renaming.funcs), dict(renaming.labels)
    for names, known, component in ((sorts, source.sorts, "sort"),
                                    (funcs, [f.name for f in source.funcs], "op"),
                                    (labels, [l.name for l in source.labels], "label")):
        for name in names:
            if name not in known:
                raise MorphismError(f"{side} map: unknown {component} {name} in the base")
    chi = GenMorphism.plain(source, target, sorts, funcs, labels)
    problems = check_morphism(chi)
    if problems:
        raise MorphismError(f"{side} map: {problems[0]}")
    return chi


def cospan_from_doc(doc: CospanDoc, resolver: Callable[[str], TheoryDoc]) -> Tuple[Cospan, TheoryDoc, TheoryDoc]:
    """余スパン文書から Cospan を組み立て、左右の理論と一緒に返す"""
    base = resolver(doc.base)
    left = resolver(doc.left)
    right = resolver(doc.right)
    chi0 = _renaming_morphism(base.signature, left.signature, doc.left_map, "left")
    chi1 = _renaming_morphism(base.signature, right.signature, doc.right_map, "right")
    return Cospan(doc.name, base.signature, left.signature, right.signature, chi0, chi1), left, right


# ---- 押し出し ----

def _components(sig: Signature) -> Dict[str, Tuple[str, ...]]:
    return {"sort": sig.sorts,
            "op": tuple(f.name for f in sig.funcs),
            "label": tuple(l.name for l in sig.labels)}


def pushout(c: Cospan) -> PushoutResult:
    """記号の直和を「共通の逆像を持つ」関係の推移閉包で割って押し出しを作る"""
    uf: UnionFind[Symbol] = UnionFind()
    sides = (c.left, c.right)
    for side, sig in enumerate(sides):
        for component, names in _components(sig).items():
            for name in names:
                uf.add((side, component, name))
    for s in c.base.sorts:
        uf.union((0, "sort", c.chi0.sort_map[s]), (1, "sort", c.chi1.sort_map[s]))
    for f in c.base.funcs:
        uf.union((0, "op", c.chi0.func_symbol(f.name)), (1, "op", c.chi1.func_symbol(f.name)))
    for l in c.base.labels:
        uf.union((0, "label", c.chi0.label_symbol(l.name)), (1, "label", c.chi1.label_symbol(l.name)))

    classes = [sorted(members, key=lambda m: (m[0], m[2])) for members in uf.classes()]
    classes.sort(key=lambda members: (members[0][1], members[0][0], members[0][2]))
    plain_names = Counter(members[0][2] for members in classes)
    taken = set()
    names: Dict[Symbol, str] = {}
    table: Dict[str, Tuple[Tuple[int, str], ...]] = {}
    for members in classes:
        side, _, name = members[0]
        if plain_names[name] > 1:
            name = fresh_name(f"in{side}_{name}", taken)
        taken.add(name)
        for m in members:
            names[m] = name
        table[name] = tuple((m[0], m[2]) for m in members)

    def sort_of(side: int, sort: str) -> str:
        return names[(side, "sort", sort)]

    funcs: Dict[str, FuncDecl] = {}
    labels: Dict[str, LabelDecl] = {}
    for side, sig in enumerate(sides):
        for f in sig.funcs:
            decl = FuncDecl(names[(side, "op", f.name)], tuple(sort_of(side, s) for s in f.args),
                            sort_of(side, f.result))
            if funcs.setdefault(decl.name, decl) != decl:
                raise SignatureError(f"inconsistent profiles merged into {decl.name}")
        for l in sig.labels:
            decl = LabelDecl(names[(side, "label", l.name)], sort_of(side, l.source), sort_of(side, l.target))
            if labels.setdefault(decl.name, decl) != decl:
                raise SignatureError(f"inconsistent profiles merged into {decl.name}")
    sorts = {names[m] for members in classes for m in members if m[1] == "sort"}
    result = Signature.build(sorts, funcs.values(), labels.values())
    problems = validate_signature(result)
    if problems:
        raise SignatureError(f"pushout signature: {problems[0]}")

    def injection(side: int) -> GenMorphism:
        sig = sides[side]
        return GenMorphism.plain(
            sig, result,
            {s: sort_of(side, s) for s in sig.sorts},
            {f.name: names[(side, "op", f.name)] for f in sig.funcs},
            {l.name: names[(side, "label", l.name)] for l in sig.labels},
        )

    logger.info("押し出し %s: %d ソート, %d 演算, %d ラベル",
                c.name, len(result.sorts), len(result.funcs), len(result.labels))
    return PushoutResult(result, injection(0), injection(1), table)


def commutes(c: Cospan, p: PushoutResult) -> bool:
    """χ'0 ∘ χ0 = χ'1 ∘ χ1"""
    return compose(p.inj0, c.chi0).same_maps(compose(p.inj1, c.chi1))


# ---- 非交差性 ----

def merged_sorts(chi: GenMorphism) -> List[str]:
    """χ が他のソートと同じ像へ送るソート"""
    images = Counter(chi.sort_map.values())
    return sorted(s for s, image in chi.sort_map.items() if images[image] > 1)


def is_disjoint(c: Cospan) -> Disjointness:
    """両方の射で他のソートと併合されるソートが無ければ非交差。あれば最小のものを証拠として返す"""
    both = sorted(set(merged_sorts(c.chi0)) & set(merged_sorts(c.chi1)))
    if both:
        return Disjointness(False, both[0])
    return Disjointness(True)


# ---- モデルの融合 ----

def amalgamate(c: Cospan, p: PushoutResult, m0: AnyModel, m1: AnyModel) -> AnyModel:
    """共通部分への縮約が一致する m0 (Σ0 上) と m1 (Σ1 上) を Σ' 上のモデルに融合する

    結果 m は reduct(χ'0, m) = m0, reduct(χ'1, m) = m1 を満たす。
    縮約が一致しなければ最初に異なる成分を AmalgamationMismatch で報告する。
    """
    if isinstance(m0, KleeneModel) != isinstance(m1, KleeneModel):
        raise AmalgamationMismatch("semantics", "one model is a TA_k model and the other is not")
    r0 = reduct(c.chi0, m0)
    r1 = reduct(c.chi1, m1)
    component = r0.diff(r1)
    if component is not None:
        raise AmalgamationMismatch(component, f"{plain_model(m0).name} and {plain_model(m1).name} disagree")
    models = (plain_model(m0), plain_model(m1))

    def representative(name: str) -> Tuple[FiniteModel, str]:
        side, symbol = p.classes[name][0]
        return models[side], symbol

    sig = p.signature
    carriers = {}
    for s in sig.sorts:
        model, symbol = representative(s)
        carriers[s] = model.carriers[symbol]
    tables = {}
    for f in sig.funcs:
        model, symbol = representative(f.name)
        tables[f.name] = model.tables[symbol].copy()
    relations = {}
    for l in sig.labels:
        model, symbol = representative(l.name)
        relations[l.name] = model.relation(symbol)
    base = FiniteModel(sig, carriers, tables, relations, f"{models[0].name}_{models[1].name}")
    if not isinstance(m0, KleeneModel):
        return base
    kleene = (m0, m1)
    algebras = {}
    for s in sig.sorts:
        side, symbol = p.classes[s][0]
        algebras[s] = kleene[side].algebra(symbol)
    return KleeneModel(base, algebras)


def joint_theory(c: Cospan, p: PushoutResult, t0: TheoryDoc, t1: TheoryDoc) -> TheoryDoc:
    """両側の理論を押し出しのシグネチャへ翻訳して合わせた理論"""
    axioms = []
    for doc, inj in ((t0, p.inj0), (t1, p.inj1)):
        names = [f"{doc.name}_{name}" for name, _ in doc.axioms]
        axioms.extend(zip(names, translate_all(inj, doc.sentences)))
    return TheoryDoc(f"{c.name}_joint", p.signature, (), tuple(axioms))
