"""
Kleene 代数の五つの公理形とその文
"""
from enum import Enum
from typing import AbstractSet, Optional

from ..models.syntax import Action, Comp, Implies, One, Sentence, Star
from .desugar import le_sentence


class KleeneForm(Enum):
    ONE_LE_STAR = "one_le_star"              # 1 ≤ a*
    STAR_ABSORB_RIGHT = "star_absorb_right"  # a*;a ≤ a*
    STAR_ABSORB_LEFT = "star_absorb_left"    # a;a* ≤ a*
    STAR_IND_RIGHT = "star_ind_right"        # a1;a2 ≤ a1 → a1;a2* ≤ a1
    STAR_IND_LEFT = "star_ind_left"          # a1;a2 ≤ a2 → a1*;a2 ≤ a2

    @classmethod
    def from_name(cls, name: str) -> "KleeneForm":
        """"one-le-star" のようなハイフン区切りの名前も受け付ける"""
        return cls(name.replace("-", "_"))

    @property
    def binary(self) -> bool:
        return self in (KleeneForm.STAR_IND_RIGHT, KleeneForm.STAR_IND_LEFT)


def axiom_sentence(form: KleeneForm, a1: Action, a2: Optional[Action] = None,
                   taken: AbstractSet[str] = frozenset()) -> Sentence:
    """公理形 form を a1（と a2）で具体化した ∀ 文"""
    if form.binary:
        if a2 is None:
            raise ValueError(f"{form.value} needs two actions")
        if a2.sort != a1.sort:
            raise ValueError(f"{form.value}: actions of sorts {a1.sort} and {a2.sort}")
    match form:
        case KleeneForm.ONE_LE_STAR:
            return le_sentence(One(a1.sort), Star(a1), taken)
        case KleeneForm.STAR_ABSORB_RIGHT:
            return le_sentence(Comp(Star(a1), a1), Star(a1), taken)
        case KleeneForm.STAR_ABSORB_LEFT:
            return le_sentence(Comp(a1, Star(a1)), Star(a1), taken)
        case KleeneForm.STAR_IND_RIGHT:
            return Implies(le_sentence(Comp(a1, a2), a1, taken),
                           le_sentence(Comp(a1, Star(a2)), a1, taken))
        case KleeneForm.STAR_IND_LEFT:
            return Implies(le_sentence(Comp(a1, a2), a2, taken),
                           le_sentence(Comp(Star(a1), a2), a2, taken))
    raise ValueError(form)
