"""
証明木・シーケント・検査結果のデータモデル
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union as TypingUnion

from .run_config import Mode, Ruleset
from .signature import Block, Signature
from .syntax import Action, Sentence, Term


@dataclass(frozen=True)
class Sequent:
    """Γ ⊢_Σ Δ"""
    signature: Signature
    left: Tuple[Sentence, ...] = ()
    right: Tuple[Sentence, ...] = ()


@dataclass(frozen=True)
class Bindings:
    """代入の選択データ {x -> t, p -> [a]}"""
    items: Tuple[Tuple[str, TypingUnion[Term, Action]], ...] = ()

    def as_dict(self):
        return dict(self.items)


@dataclass(frozen=True)
class SymbolMap:
    """Modify の射の選択データ（前提のシグネチャの記号 → 結論のシグネチャ上の像）"""
    sorts: Tuple[Tuple[str, str], ...] = ()
    funcs: Tuple[Tuple[str, Term], ...] = ()
    labels: Tuple[Tuple[str, Action], ...] = ()


Choice = TypingUnion[int, str, Term, Action, Sentence, Bindings, SymbolMap]


class ChoiceKind(Enum):
    INT = "int"
    NAME = "name"
    TERM = "term"
    ACTION = "action"
    SENTENCE = "sentence"
    BINDINGS = "bindings"
    SYMBOL_MAP = "map"


CHOICE_KINDS = {
    "i": ChoiceKind.INT,
    "n": ChoiceKind.INT,
    "t": ChoiceKind.TERM,
    "target": ChoiceKind.ACTION,
    "a1": ChoiceKind.ACTION,
    "a2": ChoiceKind.ACTION,
    "x": ChoiceKind.NAME,
    "y": ChoiceKind.NAME,
    "z": ChoiceKind.NAME,
    "form": ChoiceKind.NAME,
    "psi": ChoiceKind.SENTENCE,
    "on": ChoiceKind.SENTENCE,
    "theta": ChoiceKind.BINDINGS,
    "map": ChoiceKind.SYMBOL_MAP,
}


@dataclass(frozen=True)
class ProofNode:
    """証明木の節点

    over はこの節点のシグネチャを理論のシグネチャに追加する変数ブロック（省略なしの全体）。
    """
    rule: str
    left: Tuple[Sentence, ...] = ()
    right: Tuple[Sentence, ...] = ()
    over: Block = Block()
    choices: Tuple[Tuple[str, Choice], ...] = ()
    premises: Tuple["ProofNode", ...] = ()
    line: int = field(default=0, compare=False)

    def choice(self, key: str, default=None):
        for k, v in self.choices:
            if k == key:
                return v
        return default

    def has_choice(self, key: str) -> bool:
        return any(k == key for k, _ in self.choices)


@dataclass(frozen=True)
class ProofDoc:
    name: str
    theory: str
    mode: Mode
    ruleset: Ruleset
    root: ProofNode


class ViolationKind(Enum):
    UNKNOWN_RULE = "unknown rule"
    RULESET = "rule not in ruleset"
    ARITY = "arity mismatch"
    CHOICE = "choice data"
    FRESHNESS = "freshness violation"
    MODE = "mode violation"
    SIDE_CONDITION = "side condition"


@dataclass(frozen=True)
class Verdict:
    """証明の検査結果。path は根からの子の添字の列"""
    name: str
    accepted: bool
    path: Tuple[int, ...] = ()
    rule: str = ""
    kind: Optional[ViolationKind] = None
    message: str = ""
    nodes: int = 0

    @property
    def path_text(self) -> str:
        return "root" if not self.path else "root." + ".".join(str(i) for i in self.path)

    def render(self) -> str:
        if self.accepted:
            return f"ACCEPT {self.name} ({self.nodes} nodes)"
        return f"REJECT {self.name} at {self.path_text} [{self.rule}] {self.kind.value}: {self.message}"
