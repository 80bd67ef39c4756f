"""
文の複雑さ C と アクションの複雑さ C^0
"""
from dataclasses import dataclass
from typing import Iterable, Tuple

from ..models.syntax import (
    Action, And, Eq, Exists, Forall, Implies, Label, One, Or, Sentence, Star, Trans, Zero,
)
from .errors import ComplexityOverflow


CAP = 2 ** 63


def _checked(value: int) -> int:
    if value >= CAP:
        raise ComplexityOverflow(f"complexity component {value} exceeds 2^63")
    return value


@dataclass(frozen=True, order=True)
class Complexity:
    """ω²α + ωβ + γ を (α, β, γ) の辞書式順序で表す"""
    alpha: int = 0
    beta: int = 0
    gamma: int = 0

    def __str__(self) -> str:
        return f"({self.alpha}, {self.beta}, {self.gamma})"


def complexity0(a: Action) -> Tuple[int, int]:
    """C^0(a) = ωβ + γ を (β, γ) で返す"""
    match a:
        case Label():
            return (0, 0)
        case Zero() | One():
            return (0, 1)
        case Star(body=body):
            beta, gamma = complexity0(body)
            return (_checked(beta + 1), gamma)
    parts = [complexity0(c) for c in a.children()]
    if not parts:
        raise TypeError(f"not a core action: {a!r}")
    return (max(b for b, _ in parts), _checked(sum(g for _, g in parts)))


def _connective(parts: Iterable[Complexity]) -> Complexity:
    parts = list(parts)
    return Complexity(
        _checked(1 + sum(p.alpha for p in parts)),
        max((p.beta for p in parts), default=0),
        _checked(sum(p.gamma for p in parts)),
    )


def complexity(phi: Sentence) -> Complexity:
    """C(φ)"""
    match phi:
        case Eq():
            return Complexity(0, 0, 0)
        case Trans(action=a):
            beta, gamma = complexity0(a)
            return Complexity(0, beta, gamma)
        case Implies(premise=p, conclusion=c):
            return _connective((complexity(p), complexity(c)))
        case Or(items=items) | And(items=items):
            return _connective(complexity(i) for i in items)
        case Exists(body=body) | Forall(body=body):
            inner = complexity(body)
            return Complexity(_checked(inner.alpha + 1), inner.beta, inner.gamma)
    raise TypeError(f"not a core sentence: {phi!r}")
