"""
糖衣構文の展開（アクションと文）
"""
from typing import AbstractSet

from ..models.signature import Block, Variable
from ..models.syntax import (
    FALSE, Action, And, Comp, Complement, Converse, Dead, Eq, Equiv, Exists, Forall, Iff,
    Implies, Label, Le, Live, Meet, Not, One, Or, Plus, Power, PreImp, Residual, Sentence,
    Star, Term, Trans, Union, Zero, action_labels, with_children,
)
from .translation import fresh_name


def complement(a: Action) -> Action:
    """a^c = a ⊸ 0"""
    return PreImp(a, Zero(a.sort))


def converse(a: Action) -> Action:
    """a^-1 = a ▷ 1"""
    return Residual(a, One(a.sort))


def meet(a: Action, b: Action) -> Action:
    """a ∩ b = (a^c ∪ b^c)^c"""
    return complement(Union(complement(a), complement(b)))


def power(a: Action, n: int) -> Action:
    """a^0 = 1, a^1 = a, a^n = a^{n-1};a"""
    if n == 0:
        return One(a.sort)
    result = a
    for _ in range(n - 1):
        result = Comp(result, a)
    return result


def desugar_action(a: Action) -> Action:
    """糖衣を核の構成子だけのアクションへ展開する（冪等）"""
    match a:
        case Label() | Zero() | One():
            return a
        case Complement(body=b):
            return complement(desugar_action(b))
        case Converse(body=b):
            return converse(desugar_action(b))
        case Power(body=b, exponent=n):
            return power(desugar_action(b), n)
        case Plus(body=b):
            core = desugar_action(b)
            return Comp(core, Star(core))
        case Meet(left=l, right=r):
            return meet(desugar_action(l), desugar_action(r))
        case Dead(body=b):
            core = desugar_action(b)
            return complement(PreImp(One(core.sort), Comp(core, converse(core))))
        case Live(body=b):
            core = desugar_action(b)
            return meet(One(core.sort), Comp(core, converse(core)))
    return with_children(a, tuple(desugar_action(c) for c in a.children()))


def le_sentence(a1: Action, a2: Action, taken: AbstractSet[str] = frozenset()) -> Sentence:
    """a1 ≤ a2 を ∀{x,y}. x =a1⇒ y → x =a2⇒ y に展開する"""
    names = set(taken) | set(action_labels(a1)) | set(action_labels(a2))
    x = fresh_name("x", names)
    names.add(x)
    y = fresh_name("y", names)
    s = a1.sort
    tx, ty = Term.const(x, s), Term.const(y, s)
    return Forall(Block.of(Variable(x, s), Variable(y, s)),
                  Implies(Trans(tx, a1, ty), Trans(tx, a2, ty)))


def desugar_sentence(phi: Sentence, taken: AbstractSet[str] = frozenset()) -> Sentence:
    """文の糖衣（¬, ↔, ≤, ≡）とアクションの糖衣を展開する

    taken は ≤ の展開で作る束縛変数が避けるべき名前。
    """
    taken = frozenset(taken)
    match phi:
        case Eq():
            return phi
        case Trans(source=s, action=a, target=t):
            return Trans(s, desugar_action(a), t)
        case Implies(premise=p, conclusion=c):
            return Implies(desugar_sentence(p, taken), desugar_sentence(c, taken))
        case Or(items=items):
            return Or(tuple(desugar_sentence(i, taken) for i in items))
        case And(items=items):
            return And(tuple(desugar_sentence(i, taken) for i in items))
        case Exists(block=block, body=body):
            return Exists(block, desugar_sentence(body, taken | frozenset(block.names)))
        case Forall(block=block, body=body):
            return Forall(block, desugar_sentence(body, taken | frozenset(block.names)))
        case Not(body=body):
            return Implies(desugar_sentence(body, taken), FALSE)
        case Iff(left=l, right=r):
            dl, dr = desugar_sentence(l, taken), desugar_sentence(r, taken)
            return And((Implies(dl, dr), Implies(dr, dl)))
        case Le(left=l, right=r):
            return le_sentence(desugar_action(l), desugar_action(r), taken)
        case Equiv(left=l, right=r):
            dl, dr = desugar_action(l), desugar_action(r)
            return And((le_sentence(dl, dr, taken), le_sentence(dr, dl, taken)))
    raise TypeError(f"not a sentence: {phi!r}")
