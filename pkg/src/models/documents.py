"""
解析済み文書（理論・モデル・余スパン）のデータモデル
"""
from dataclasses import dataclass
from typing import Optional, Tuple

from .model import AnyModel
from .signature import Signature
from .syntax import Action, Sentence


@dataclass(frozen=True)
class TheoryDoc:
    """理論文書 .ta"""
    name: str
    signature: Signature
    actions: Tuple[Tuple[str, Action], ...] = ()
    axioms: Tuple[Tuple[str, Sentence], ...] = ()

    def axiom(self, name: str) -> Optional[Sentence]:
        for key, phi in self.axioms:
            if key == name:
                return phi
        return None

    def abbreviation(self, name: str) -> Optional[Action]:
        for key, a in self.actions:
            if key == name:
                return a
        return None

    @property
    def sentences(self) -> Tuple[Sentence, ...]:
        return tuple(phi for _, phi in self.axioms)


@dataclass(frozen=True, eq=False)
class ModelDoc:
    """モデル文書 .tam"""
    name: str
    theory: str
    model: AnyModel

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelDoc):
            return NotImplemented
        return (self.name, self.theory) == (other.name, other.theory) and self.model == other.model

    def __hash__(self) -> int:
        return hash((self.name, self.theory))


@dataclass(frozen=True)
class Renaming:
    """通常のシグネチャ射を与える記号名の対応"""
    sorts: Tuple[Tuple[str, str], ...] = ()
    funcs: Tuple[Tuple[str, str], ...] = ()
    labels: Tuple[Tuple[str, str], ...] = ()


@dataclass(frozen=True)
class CospanDoc:
    """余スパン文書 .tac（base → left, base → right）"""
    name: str
    base: str
    left: str
    right: str
    left_map: Renaming = Renaming()
    right_map: Renaming = Renaming()
