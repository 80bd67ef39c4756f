"""
項・アクション・文の構文木

すべて不変な dataclass で、構造的に比較・ハッシュできる。
ブロック変数は拡張後のシグネチャでは定数（一階）またはラベルになるので、
項では引数なしの Term、アクションでは Label として現れる。
"""
from dataclasses import dataclass, replace
from typing import Iterator, Tuple, Union as TypingUnion

from .signature import Block


HOLE_PREFIX = "?"


@dataclass(frozen=True)
class Term:
    """項。symbol が "?i" の葉は一般化射の像に現れる穴"""
    symbol: str
    args: Tuple["Term", ...]
    sort: str

    @classmethod
    def const(cls, symbol: str, sort: str) -> "Term":
        return cls(symbol, (), sort)

    @classmethod
    def hole(cls, index: int, sort: str) -> "Term":
        return cls(f"{HOLE_PREFIX}{index}", (), sort)

    @property
    def is_hole(self) -> bool:
        return self.symbol.startswith(HOLE_PREFIX)

    @property
    def hole_index(self) -> int:
        return int(self.symbol[len(HOLE_PREFIX):])

    def subterms(self) -> Iterator["Term"]:
        """部分項を後順で列挙（重複あり）"""
        for a in self.args:
            yield from a.subterms()
        yield self

    def symbols(self) -> Iterator[str]:
        yield self.symbol
        for a in self.args:
            yield from a.symbols()


# ---- アクション（核となる構成子） ----

class Action:
    """アクションの基底クラス。sort は ⟨s,s⟩ の s"""

    sort: str

    def children(self) -> Tuple["Action", ...]:
        return ()


@dataclass(frozen=True)
class Label(Action):
    name: str
    sort: str


@dataclass(frozen=True)
class Zero(Action):
    sort: str


@dataclass(frozen=True)
class One(Action):
    sort: str


@dataclass(frozen=True)
class _Binary(Action):
    left: Action
    right: Action

    @property
    def sort(self) -> str:  # type: ignore[override]
        return self.left.sort

    def children(self) -> Tuple[Action, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Union(_Binary):
    """a ∪ a"""


@dataclass(frozen=True)
class PreImp(_Binary):
    """a ⊸ a（左の補集合と右の和）"""


@dataclass(frozen=True)
class Comp(_Binary):
    """a ; a"""


@dataclass(frozen=True)
class Residual(_Binary):
    """a ▷ a（左の逆と右の合成）"""


@dataclass(frozen=True)
class Star(Action):
    body: Action

    @property
    def sort(self) -> str:  # type: ignore[override]
        return self.body.sort

    def children(self) -> Tuple[Action, ...]:
        return (self.body,)


# ---- アクションの糖衣（desugar_action で核へ展開される） ----

@dataclass(frozen=True)
class Complement(Action):
    """a^c"""
    body: Action

    @property
    def sort(self) -> str:  # type: ignore[override]
        return self.body.sort

    def children(self) -> Tuple[Action, ...]:
        return (self.body,)


@dataclass(frozen=True)
class Converse(Action):
    """a^-1"""
    body: Action

    @property
    def sort(self) -> str:  # type: ignore[override]
        return self.body.sort

    def children(self) -> Tuple[Action, ...]:
        return (self.body,)


@dataclass(frozen=True)
class Power(Action):
    """a^n"""
    body: Action
    exponent: int

    @property
    def sort(self) -> str:  # type: ignore[override]
        return self.body.sort

    def children(self) -> Tuple[Action, ...]:
        return (self.body,)


@dataclass(frozen=True)
class Plus(Action):
    """a^+"""
    body: Action

    @property
    def sort(self) -> str:  # type: ignore[override]
        return self.body.sort

    def children(self) -> Tuple[Action, ...]:
        return (self.body,)


@dataclass(frozen=True)
class Meet(_Binary):
    """a cap a"""


@dataclass(frozen=True)
class Dead(Action):
    """a^bot: 後続のない状態上の恒等関係"""
    body: Action

    @property
    def sort(self) -> str:  # type: ignore[override]
        return self.body.sort

    def children(self) -> Tuple[Action, ...]:
        return (self.body,)


@dataclass(frozen=True)
class Live(Action):
    """a^top: 後続のある状態上の恒等関係"""
    body: Action

    @property
    def sort(self) -> str:  # type: ignore[override]
        return self.body.sort

    def children(self) -> Tuple[Action, ...]:
        return (self.body,)


CORE_ACTIONS = (Label, Zero, One, Union, PreImp, Comp, Residual, Star)
BINARY_ACTIONS = (Union, PreImp, Comp, Residual)


def action_labels(a: Action) -> Iterator[str]:
    if isinstance(a, Label):
        yield a.name
    for child in a.children():
        yield from action_labels(child)


def is_core_action(a: Action) -> bool:
    return isinstance(a, CORE_ACTIONS) and all(is_core_action(c) for c in a.children())


# ---- 文 ----

class Sentence:
    """文の基底クラス"""


@dataclass(frozen=True)
class Eq(Sentence):
    left: Term
    right: Term


@dataclass(frozen=True)
class Trans(Sentence):
    """t0 =[a]=> t1"""
    source: Term
    action: Action
    target: Term


@dataclass(frozen=True)
class Implies(Sentence):
    premise: Sentence
    conclusion: Sentence


@dataclass(frozen=True)
class Or(Sentence):
    items: Tuple[Sentence, ...]


@dataclass(frozen=True)
class And(Sentence):
    items: Tuple[Sentence, ...]


@dataclass(frozen=True)
class Exists(Sentence):
    block: Block
    body: Sentence


@dataclass(frozen=True)
class Forall(Sentence):
    block: Block
    body: Sentence


TRUE = And(())
FALSE = Or(())

Quantified = TypingUnion[Exists, Forall]


# ---- 文の糖衣（パーサが生成し desugar_sentence で展開） ----

@dataclass(frozen=True)
class Not(Sentence):
    body: Sentence


@dataclass(frozen=True)
class Iff(Sentence):
    left: Sentence
    right: Sentence


@dataclass(frozen=True)
class Le(Sentence):
    """a1 ≤ a2"""
    left: Action
    right: Action


@dataclass(frozen=True)
class Equiv(Sentence):
    """a1 ≡ a2"""
    left: Action
    right: Action


def is_basic(phi: Sentence) -> bool:
    """Sen^b（等式または単一ラベルの遷移）に属するか"""
    if isinstance(phi, Eq):
        return True
    return isinstance(phi, Trans) and isinstance(phi.action, Label)


def sentence_terms(phi: Sentence) -> Iterator[Term]:
    """文に現れる項（最上位のもの）"""
    match phi:
        case Eq(left=l, right=r):
            yield l
            yield r
        case Trans(source=s, target=t):
            yield s
            yield t
        case Implies(premise=p, conclusion=c):
            yield from sentence_terms(p)
            yield from sentence_terms(c)
        case Or(items=items) | And(items=items):
            for item in items:
                yield from sentence_terms(item)
        case Exists(body=body) | Forall(body=body):
            yield from sentence_terms(body)


def sentence_actions(phi: Sentence) -> Iterator[Action]:
    match phi:
        case Trans(action=a):
            yield a
        case Implies(premise=p, conclusion=c):
            yield from sentence_actions(p)
            yield from sentence_actions(c)
        case Or(items=items) | And(items=items):
            for item in items:
                yield from sentence_actions(item)
        case Exists(body=body) | Forall(body=body):
            yield from sentence_actions(body)


def has_quantifier(phi: Sentence) -> bool:
    match phi:
        case Exists() | Forall():
            return True
        case Implies(premise=p, conclusion=c):
            return has_quantifier(p) or has_quantifier(c)
        case Or(items=items) | And(items=items):
            return any(has_quantifier(i) for i in items)
    return False


def with_children(a: Action, children: Tuple[Action, ...]) -> Action:
    """子だけを差し替えたアクションを返す"""
    if isinstance(a, _Binary):
        return replace(a, left=children[0], right=children[1])
    if children:
        return replace(a, body=children[0])
    return a
