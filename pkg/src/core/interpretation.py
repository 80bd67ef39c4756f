"""
有限モデル上の解釈と充足、縮約、Kleene 公理の検査、意味論的シーケント
"""
import itertools
import logging
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union as TypingUnion

import numpy as np

from ..models.model import AnyModel, FiniteModel, FullAlgebra, KleeneModel, plain_model
from ..models.morphism import GenMorphism
from ..models.relation import Relation
from ..models.run_config import QuantifierBudget
from ..models.signature import Variable
from ..models.syntax import (
    Action, And, Comp, Eq, Exists, Forall, Implies, Label, One, Or, PreImp, Residual, Sentence,
    Star, Term, Trans, Union, Zero, action_labels,
)
from .errors import EscapesSubalgebra, QuantifierBudgetExceeded, SemanticsError
from .kleene_axioms import KleeneForm


logger = logging.getLogger(__name__)

Binding = TypingUnion[int, Relation]


class Evaluator:
    """一つのモデルでの評価器

    量化子の展開はモデルを複製せず、束縛変数の値を env に重ねて評価する。
    束縛ラベルを含まないアクションの解釈はキャッシュする。
    """

    def __init__(self, model: AnyModel, budget: Optional[QuantifierBudget] = None):
        self.model = plain_model(model)
        self.kleene = model if isinstance(model, KleeneModel) else None
        self.budget = budget or QuantifierBudget()
        self._cache: Dict[Action, Relation] = {}

    # ---- 項 ----

    def term(self, t: Term, env: Dict[str, Binding]) -> int:
        if not t.args:
            bound = env.get(t.symbol)
            if bound is not None:
                return bound  # type: ignore[return-value]
            return self.model.apply(t.symbol, ())
        return self.model.apply(t.symbol, tuple(self.term(a, env) for a in t.args))

    # ---- アクション ----

    def action(self, a: Action, env: Dict[str, Binding]) -> Relation:
        closed = not env or not any(isinstance(env.get(l), Relation) for l in action_labels(a))
        if closed:
            cached = self._cache.get(a)
            if cached is not None:
                return cached
        result = self._action(a, env)
        if closed:
            self._cache[a] = result
        return result

    def _action(self, a: Action, env: Dict[str, Binding]) -> Relation:
        n = self.model.size(a.sort)
        match a:
            case Label(name=name):
                bound = env.get(name)
                result = bound if isinstance(bound, Relation) else self.model.relation(name)
            case Zero():
                result = Relation.empty(n)
            case One():
                result = Relation.identity(n)
            case Union(left=l, right=r):
                result = self.action(l, env).union(self.action(r, env))
            case PreImp(left=l, right=r):
                result = self.action(l, env).preimp(self.action(r, env))
            case Comp(left=l, right=r):
                result = self.action(l, env).compose(self.action(r, env))
            case Residual(left=l, right=r):
                result = self.action(l, env).residual(self.action(r, env))
            case Star(body=b):
                body = self.action(b, env)
                result = body.star() if self.kleene is None else self.kleene.algebra(a.sort).star(body)
            case _:
                raise SemanticsError(f"cannot interpret {type(a).__name__}; desugar it first")
        if self.kleene is not None and result not in self.kleene.algebra(a.sort):
            raise EscapesSubalgebra(f"escapes subalgebra: {a!r} at sort {a.sort}")
        return result

    # ---- 文 ----

    def holds(self, phi: Sentence, env: Dict[str, Binding]) -> bool:
        match phi:
            case Eq(left=l, right=r):
                return self.term(l, env) == self.term(r, env)
            case Trans(source=s, action=a, target=t):
                return (self.term(s, env), self.term(t, env)) in self.action(a, env)
            case Implies(premise=p, conclusion=c):
                return not self.holds(p, env) or self.holds(c, env)
            case Or(items=items):
                return any(self.holds(i, env) for i in items)
            case And(items=items):
                return all(self.holds(i, env) for i in items)
            case Exists(block=block, body=body):
                return any(self.holds(body, inner) for inner in self.expansions(block, env))
            case Forall(block=block, body=body):
                return all(self.holds(body, inner) for inner in self.expansions(block, env))
        raise SemanticsError(f"cannot evaluate {type(phi).__name__}; desugar it first")

    def _range(self, v: Variable) -> Sequence[Binding]:
        n = self.model.size(v.sort)
        if not v.label:
            if n > self.budget.first_order_carrier:
                raise QuantifierBudgetExceeded(
                    f"quantifier budget: variable {v.name} ranges over {n} elements "
                    f"(limit {self.budget.first_order_carrier})")
            return range(n)
        if self.kleene is not None:
            algebra = self.kleene.algebra(v.sort)
            if not isinstance(algebra, FullAlgebra):
                return list(algebra.members())
        if n > self.budget.label_carrier:
            raise QuantifierBudgetExceeded(
                f"quantifier budget: label variable {v.name} ranges over relations on {n} elements "
                f"(limit {self.budget.label_carrier})")
        return [Relation.from_bits(n, bits) for bits in range(2 ** (n * n))]

    def expansions(self, block: Iterable[Variable], env: Dict[str, Binding]) -> Iterator[Dict[str, Binding]]:
        """ブロック変数への値の割り当てを辞書順に列挙"""
        variables = list(block)
        ranges = [self._range(v) for v in variables]
        for values in itertools.product(*ranges):
            inner = dict(env)
            inner.update(zip((v.name for v in variables), values))
            yield inner


def interpret_term(m: AnyModel, t: Term) -> int:
    return Evaluator(m).term(t, {})


def interpret_action(m: AnyModel, a: Action) -> Relation:
    """アクションの解釈（TA_k モデルではスター写像を使い、部分代数の外に出たらエラー）"""
    return Evaluator(m).action(a, {})


def satisfies(m: AnyModel, phi: Sentence, budget: Optional[QuantifierBudget] = None) -> bool:
    return Evaluator(m, budget).holds(phi, {})


def satisfies_all(m: AnyModel, sentences: Iterable[Sentence], budget: Optional[QuantifierBudget] = None) -> bool:
    evaluator = Evaluator(m, budget)
    return all(evaluator.holds(phi, {}) for phi in sentences)


def semantic_sequent(models: Iterable[AnyModel], left: Iterable[Sentence], right: Iterable[Sentence],
                     budget: Optional[QuantifierBudget] = None) -> bool:
    """与えられたモデルの中に Γ をすべて満たし Δ をどれも満たさないものがなければ真"""
    left, right = tuple(left), tuple(right)
    for m in models:
        evaluator = Evaluator(m, budget)
        if all(evaluator.holds(phi, {}) for phi in left) and not any(evaluator.holds(phi, {}) for phi in right):
            logger.debug("反例モデル: %s", plain_model(m).name)
            return False
    return True


# ---- 縮約 ----

def reduct(chi: GenMorphism, m: AnyModel) -> AnyModel:
    """χ による縮約 m↾χ（TA_k モデルでは部分代数とスター写像をソートの像から引き戻す）"""
    base = plain_model(m)
    evaluator = Evaluator(m)
    carriers = {s: base.carriers[chi.sort_map[s]] for s in chi.source.sorts}
    tables: Dict[str, np.ndarray] = {}
    for f in chi.source.funcs:
        template = chi.func_map[f.name]
        shape = tuple(len(carriers[s]) for s in f.args)
        table = np.zeros(shape, dtype=np.int64)
        for args in itertools.product(*(range(n) for n in shape)):
            env: Dict[str, Binding] = {f"?{i}": value for i, value in enumerate(args)}
            table[args] = evaluator.term(template, env)
        tables[f.name] = table
    relations = {l.name: evaluator.action(chi.label_map[l.name], {}) for l in chi.source.labels}
    result = FiniteModel(chi.source, carriers, tables, relations, base.name)
    if isinstance(m, KleeneModel):
        return KleeneModel(result, {s: m.algebra(chi.sort_map[s]) for s in chi.source.sorts})
    return result


# ---- Kleene 公理の検査 ----

def warshall_closure(r: Relation) -> Relation:
    """1 ∪ r の推移閉包を Warshall 法で求める（スター写像とは独立な計算）"""
    n = r.size
    closure = r.matrix | np.eye(n, dtype=bool)
    for k in range(n):
        closure = closure | np.outer(closure[:, k], closure[k, :])
    return Relation(closure)


def _show(k: KleeneModel, sort: str, r: Relation) -> str:
    names = k.base.carriers[sort]
    return "{" + ",".join(f"({names[i]},{names[j]})" for i, j in sorted(r.pairs())) + "}"


def check_kleene_axioms(k: KleeneModel) -> List[str]:
    """部分代数の閉包性・ラベルの所属・スター写像の五公理を検査し、違反の一覧を返す"""
    report: List[str] = []
    for s in k.signature.sorts:
        algebra = k.algebras.get(s)
        n = k.base.size(s)
        if algebra is None:
            report.append(f"sort {s}: no designated algebra")
            continue
        if algebra.size != n:
            report.append(f"sort {s}: algebra over {algebra.size} elements, carrier has {n}")
            continue
        for l in k.signature.labels_of_sort(s):
            if k.base.relation(l.name) not in algebra:
                report.append(f"sort {s}: label {l.name} not in algebra")
        if isinstance(algebra, FullAlgebra):
            report.extend(_check_standard_star(k, s, algebra))
        else:
            report.extend(_check_listed(k, s, algebra))
    return report


def _check_standard_star(k: KleeneModel, sort: str, algebra: FullAlgebra) -> List[str]:
    """冪集合代数のスターを Warshall 法の閉包と照合する

    FullAlgebra のスターは常に反射推移閉包なので、五公理は構成から成り立つ。
    ここで落ちるのは Relation.star（二乗による閉包）の実装が誤っているときだけ。
    """
    for r in algebra.members():
        if algebra.star(r) != warshall_closure(r):
            return [f"sort {sort}: star of {_show(k, sort, r)} is not the reflexive-transitive closure"]
    return []


def _check_listed(k: KleeneModel, sort: str, algebra) -> List[str]:
    report: List[str] = []
    n = algebra.size
    members = list(algebra.members())

    for name, r in (("0", Relation.empty(n)), ("1", Relation.identity(n))):
        if r not in algebra:
            report.append(f"sort {sort}: algebra lacks {name}")
    operations = (("U", Relation.union), ("-o", Relation.preimp), (";", Relation.compose), ("|>", Relation.residual))
    for symbol, op in operations:
        for a, b in itertools.product(members, repeat=2):
            if op(a, b) not in algebra:
                report.append(f"sort {sort}: not closed under {symbol}: "
                              f"{_show(k, sort, a)} {symbol} {_show(k, sort, b)}")
                break

    for r in sorted(algebra.star_map, key=Relation.bits):
        if r not in algebra:
            report.append(f"sort {sort}: star defined outside the algebra on {_show(k, sort, r)}")

    stars: Dict[Relation, Relation] = {}
    for a in members:
        try:
            image = algebra.star(a)
        except KeyError:
            report.append(f"sort {sort}: star undefined on {_show(k, sort, a)}")
            continue
        if image not in algebra:
            report.append(f"sort {sort}: star of {_show(k, sort, a)} leaves the algebra")
        stars[a] = image
    if len(stars) != len(members):
        return report

    identity = Relation.identity(n)
    unary = (
        (KleeneForm.ONE_LE_STAR, lambda a: identity <= stars[a]),
        (KleeneForm.STAR_ABSORB_RIGHT, lambda a: stars[a].compose(a) <= stars[a]),
        (KleeneForm.STAR_ABSORB_LEFT, lambda a: a.compose(stars[a]) <= stars[a]),
    )
    for form, holds in unary:
        for a in members:
            if not holds(a):
                report.append(f"sort {sort}: {form.value} fails for {_show(k, sort, a)}")
                break

    binary = (
        (KleeneForm.STAR_IND_RIGHT,
         lambda a1, a2: not a1.compose(a2) <= a1 or a1.compose(stars[a2]) <= a1),
        (KleeneForm.STAR_IND_LEFT,
         lambda a1, a2: not a1.compose(a2) <= a2 or stars[a1].compose(a2) <= a2),
    )
    for form, holds in binary:
        for a1, a2 in itertools.product(members, repeat=2):
            if not holds(a1, a2):
                report.append(f"sort {sort}: {form.value} fails for "
                              f"{_show(k, sort, a1)} and {_show(k, sort, a2)}")
                break
    return report
