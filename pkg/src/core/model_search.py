"""
有限モデルの有界探索

列挙順序（決定的）:
  1. ソートごとの台集合の大きさの組を (合計, 辞書順) の昇順に並べる。
  2. 大きさの組ごとに、関数表の値を記号名順・引数組の辞書順に並べた列を辞書順に、
     続けてラベルのビット表現（行優先）を記号名順に昇順で列挙する。
量化子を含まず遷移が単一ラベルだけの文からなる場合は、出現する部分項の値と
出現する遷移の真偽だけを列挙し、残りを自明に補って全域化する。
理論にも反駁する文にも現れない記号は自明に解釈する（最初の要素、空関係）。
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from ..models.model import AnyModel, FiniteModel, standard_kleene
from ..models.relation import Relation
from ..models.run_config import QuantifierBudget, SearchBudget, SemanticsMode
from ..models.signature import Signature
from ..models.syntax import (
    Action, And, Eq, Exists, Forall, Implies, Label, Or, Sentence, Term, Trans,
    has_quantifier, sentence_actions,
)
from .errors import SearchBudgetExceeded
from .interpretation import Evaluator


logger = logging.getLogger(__name__)

ELEMENT_PREFIX = "e"


@dataclass(frozen=True)
class SearchResult:
    """探索の結果。model が None なら上限まで調べ尽くした"""
    model: Optional[AnyModel]
    bound: int
    candidates: int

    @property
    def exhausted(self) -> bool:
        return self.model is None


@dataclass
class _Occurrences:
    funcs: Set[str] = field(default_factory=set)
    labels: Set[str] = field(default_factory=set)
    sorts: Set[str] = field(default_factory=set)


def _collect_term(sig: Signature, t: Term, found: _Occurrences) -> None:
    found.sorts.add(t.sort)
    if sig.func(t.symbol) is not None:
        found.funcs.add(t.symbol)
    for a in t.args:
        _collect_term(sig, a, found)


def _collect_action(sig: Signature, a: Action, found: _Occurrences) -> None:
    found.sorts.add(a.sort)
    if isinstance(a, Label) and sig.label(a.name) is not None:
        found.labels.add(a.name)
    for c in a.children():
        _collect_action(sig, c, found)


def _collect(sig: Signature, phi: Sentence, found: _Occurrences) -> None:
    match phi:
        case Eq(left=l, right=r):
            _collect_term(sig, l, found)
            _collect_term(sig, r, found)
        case Trans(source=s, action=a, target=t):
            _collect_term(sig, s, found)
            _collect_action(sig, a, found)
            _collect_term(sig, t, found)
        case Implies(premise=p, conclusion=c):
            _collect(sig, p, found)
            _collect(sig, c, found)
        case Or(items=items) | And(items=items):
            for item in items:
                _collect(sig, item, found)
        case Exists(block=block, body=body) | Forall(block=block, body=body):
            found.sorts.update(v.sort for v in block)
            _collect(sig, body, found)


def occurrences(sig: Signature, sentences: Sequence[Sentence]) -> _Occurrences:
    """文に現れる関数記号・ラベル・ソート（現れる記号のプロファイルのソートを含む）"""
    found = _Occurrences()
    for phi in sentences:
        _collect(sig, phi, found)
    for name in found.funcs:
        decl = sig.func(name)
        found.sorts.update(decl.args + (decl.result,))
    for name in found.labels:
        found.sorts.add(sig.label(name).sort)
    return found


def is_basic_fragment(sentences: Sequence[Sentence]) -> bool:
    """量化子を含まず、遷移のアクションがすべて単一ラベルか"""
    for phi in sentences:
        if has_quantifier(phi):
            return False
        if any(not isinstance(a, Label) for a in sentence_actions(phi)):
            return False
    return True


def size_vectors(sorts: Sequence[str], relevant: Set[str], bound: int,
                 caps: Optional[Dict[str, int]] = None) -> Iterator[Dict[str, int]]:
    """台集合の大きさの組を (合計, 辞書順) で列挙。関係しないソートは 1 に固定"""
    ranges = []
    for s in sorts:
        top = bound if s in relevant else 1
        if caps is not None and s in caps:
            top = min(top, caps[s])
        ranges.append(range(1, max(top, 1) + 1))
    vectors = sorted(itertools.product(*ranges), key=lambda v: (sum(v), v))
    for v in vectors:
        yield dict(zip(sorts, v))


def _carriers(sig: Signature, sizes: Dict[str, int]) -> Dict[str, Tuple[str, ...]]:
    return {s: tuple(f"{ELEMENT_PREFIX}{i}" for i in range(sizes[s])) for s in sig.sorts}


class _Search:
    def __init__(self, sig: Signature, theory: Sequence[Sentence], refute: Sequence[Sentence],
                 semantics: SemanticsMode, budget: SearchBudget, quantifier_budget: QuantifierBudget):
        self.sig = sig
        self.theory = tuple(theory)
        self.refute = tuple(refute)
        self.semantics = semantics
        self.budget = budget
        self.quantifier_budget = quantifier_budget
        self.candidates = 0

    def accept(self, model: FiniteModel) -> Optional[AnyModel]:
        self.candidates += 1
        if self.candidates > self.budget.max_candidates:
            raise SearchBudgetExceeded(f"search budget: more than {self.budget.max_candidates} candidates")
        candidate: AnyModel = standard_kleene(model) if self.semantics is SemanticsMode.TAK else model
        evaluator = Evaluator(candidate, self.quantifier_budget)
        for phi in self.theory:
            if not evaluator.holds(phi, {}):
                return None
        for phi in self.refute:
            if evaluator.holds(phi, {}):
                return None
        return candidate

    # ---- 一般の列挙 ----

    def general(self, sizes: Dict[str, int], found: _Occurrences) -> Optional[AnyModel]:
        carriers = _carriers(self.sig, sizes)
        slots: List[Tuple[str, Tuple[int, ...]]] = []
        value_ranges: List[range] = []
        for f in self.sig.funcs:
            if f.name not in found.funcs:
                continue
            for args in itertools.product(*(range(sizes[s]) for s in f.args)):
                slots.append((f.name, args))
                value_ranges.append(range(sizes[f.result]))
        labels = [l for l in self.sig.labels if l.name in found.labels]
        label_ranges = [range(2 ** (sizes[l.sort] ** 2)) for l in labels]
        for values in itertools.product(*value_ranges):
            tables: Dict[str, Dict[Tuple[int, ...], int]] = {}
            for (name, args), value in zip(slots, values):
                tables.setdefault(name, {})[args] = value
            for masks in itertools.product(*label_ranges):
                relations = self._relations(sizes)
                for l, bits in zip(labels, masks):
                    relations[l.name] = Relation.from_bits(sizes[l.sort], bits)
                model = FiniteModel.build(self.sig, carriers, tables, relations, "witness")
                result = self.accept(model)
                if result is not None:
                    return result
        return None

    def _relations(self, sizes: Dict[str, int]) -> Dict[str, Relation]:
        return {l.name: Relation.empty(sizes[l.sort]) for l in self.sig.labels}

    # ---- 基本断片の列挙 ----

    def subterms(self) -> List[Term]:
        ordered: List[Term] = []
        seen: Set[Term] = set()

        def visit(t: Term) -> None:
            for a in t.args:
                visit(a)
            if t not in seen:
                seen.add(t)
                ordered.append(t)

        def walk(phi: Sentence) -> None:
            match phi:
                case Eq(left=l, right=r):
                    visit(l)
                    visit(r)
                case Trans(source=s, target=t):
                    visit(s)
                    visit(t)
                case Implies(premise=p, conclusion=c):
                    walk(p)
                    walk(c)
                case Or(items=items) | And(items=items):
                    for item in items:
                        walk(item)

        for phi in self.theory + self.refute:
            walk(phi)
        return ordered

    def edges(self) -> List[Trans]:
        found: List[Trans] = []

        def walk(phi: Sentence) -> None:
            match phi:
                case Trans():
                    if phi not in found:
                        found.append(phi)
                case Implies(premise=p, conclusion=c):
                    walk(p)
                    walk(c)
                case Or(items=items) | And(items=items):
                    for item in items:
                        walk(item)

        for phi in self.theory + self.refute:
            walk(phi)
        return found

    def valuations(self, terms: List[Term], sizes: Dict[str, int]) -> Iterator[Dict[Term, int]]:
        """部分項への値の割り当てのうち関数として矛盾しないものを辞書順に列挙"""
        values: Dict[Term, int] = {}
        entries: Dict[Tuple[str, Tuple[int, ...]], int] = {}

        def assign(index: int) -> Iterator[Dict[Term, int]]:
            if index == len(terms):
                yield dict(values)
                return
            t = terms[index]
            key = (t.symbol, tuple(values[a] for a in t.args))
            fixed = entries.get(key)
            choices = range(sizes[t.sort]) if fixed is None else (fixed,)
            for value in choices:
                values[t] = value
                if fixed is None:
                    entries[key] = value
                yield from assign(index + 1)
                if fixed is None:
                    del entries[key]
                del values[t]

        yield from assign(0)

    def basic(self, sizes: Dict[str, int], terms: List[Term], edges: List[Trans]) -> Optional[AnyModel]:
        carriers = _carriers(self.sig, sizes)
        for values in self.valuations(terms, sizes):
            tables: Dict[str, Dict[Tuple[int, ...], int]] = {}
            for t, value in values.items():
                tables.setdefault(t.symbol, {})[tuple(values[a] for a in t.args)] = value
            pairs: List[Tuple[str, Tuple[int, int]]] = []
            for e in edges:
                pair = (e.action.name, (values[e.source], values[e.target]))
                if pair not in pairs:
                    pairs.append(pair)
            for mask in range(2 ** len(pairs)):
                chosen: Dict[str, List[Tuple[int, int]]] = {}
                for k, (label, pair) in enumerate(pairs):
                    if mask >> k & 1:
                        chosen.setdefault(label, []).append(pair)
                relations = self._relations(sizes)
                for label, label_pairs in chosen.items():
                    relations[label] = Relation.from_pairs(sizes[self.sig.label(label).sort], label_pairs)
                model = FiniteModel.build(self.sig, carriers, tables, relations, "witness")
                result = self.accept(model)
                if result is not None:
                    return result
        return None


def bounded_model_search(sig: Signature, theory: Sequence[Sentence], refute: Sequence[Sentence] = (),
                         bound: int = 3, semantics: SemanticsMode = SemanticsMode.TA,
                         budget: Optional[SearchBudget] = None,
                         quantifier_budget: Optional[QuantifierBudget] = None) -> SearchResult:
    """theory をすべて満たし refute のどれも満たさない最初のモデルを探す

    Args:
        sig: 探索するモデルのシグネチャ
        theory: 満たすべき文（糖衣展開済み）
        refute: 満たしてはならない文
        bound: ソートごとの台集合の大きさの上限
        semantics: TAK なら各候補に冪集合代数と反射推移閉包のスターを備える
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    search = _Search(sig, theory, refute, semantics, budget or SearchBudget(),
                     quantifier_budget or QuantifierBudget())
    found = occurrences(sig, search.theory + search.refute)
    if is_basic_fragment(search.theory + search.refute):
        terms = search.subterms()
        edges = search.edges()
        caps = {s: max(1, sum(1 for t in terms if t.sort == s)) for s in sig.sorts}
        logger.debug("基本断片の探索: 部分項 %d 個, 遷移 %d 個", len(terms), len(edges))
        for sizes in size_vectors(sig.sorts, found.sorts, bound, caps):
            model = search.basic(sizes, terms, edges)
            if model is not None:
                logger.info("モデルを発見: 大きさ %s, 候補 %d 個", sizes, search.candidates)
                return SearchResult(model, bound, search.candidates)
    else:
        for sizes in size_vectors(sig.sorts, found.sorts, bound):
            logger.debug("台集合の大きさ %s を探索中", sizes)
            model = search.general(sizes, found)
            if model is not None:
                logger.info("モデルを発見: 大きさ %s, 候補 %d 個", sizes, search.candidates)
                return SearchResult(model, bound, search.candidates)
    logger.info("上限 %d まで探索し尽くした（候補 %d 個）", bound, search.candidates)
    return SearchResult(None, bound, search.candidates)
