"""
原子文の断片の決定手続き（合同閉包）
"""
import logging
from typing import Dict, Iterable, List, Sequence, Tuple

from ..models.signature import Signature
from ..models.syntax import Eq, Label, Sentence, Term, Trans, is_basic
from ..surface.printer import pretty_sentence
from ..utils.union_find import UnionFind
from .errors import NotBasicError
from .translation import check_sentence


logger = logging.getLogger(__name__)


class CongruenceClosure:
    """基底項の合同閉包"""

    def __init__(self, terms: Iterable[Term] = ()):
        self.uf: UnionFind[Term] = UnionFind()
        self.terms: List[Term] = []
        for t in terms:
            self.add(t)

    def add(self, t: Term) -> None:
        for a in t.args:
            self.add(a)
        if t not in self.uf:
            self.uf.add(t)
            self.terms.append(t)

    def merge(self, a: Term, b: Term) -> None:
        self.add(a)
        self.add(b)
        if self.uf.union(a, b):
            self._propagate()

    def _propagate(self) -> None:
        # 引数の類が一致する同じ記号の項を、変化がなくなるまで併合する
        changed = True
        while changed:
            changed = False
            signatures: Dict[Tuple[str, Tuple[Term, ...]], Term] = {}
            for t in self.terms:
                if not t.args:
                    continue
                key = (t.symbol, tuple(self.uf.find(a) for a in t.args))
                other = signatures.setdefault(key, t)
                if other is not t and self.uf.union(other, t):
                    changed = True

    def congruent(self, a: Term, b: Term) -> bool:
        self.add(a)
        self.add(b)
        self._propagate()
        return self.uf.same(a, b)


def decide_basic(sig: Signature, left: Sequence[Sentence], right: Sequence[Sentence]) -> bool:
    """原子文の集合について Γb ⊨ Δb を判定する

    Γb の等式で合同閉包を作り、Δb のいずれかが合同な項の等式であるか、
    Γb のある遷移 u0 =λ⇒ u1 と端点が合同な同じラベルの遷移であれば真。
    """
    for phi in tuple(left) + tuple(right):
        if not is_basic(phi):
            raise NotBasicError(pretty_sentence(phi))
        check_sentence(sig, phi)
    cc = CongruenceClosure()
    for phi in tuple(left) + tuple(right):
        if isinstance(phi, Eq):
            cc.add(phi.left)
            cc.add(phi.right)
        else:
            cc.add(phi.source)
            cc.add(phi.target)
    for phi in left:
        if isinstance(phi, Eq):
            cc.merge(phi.left, phi.right)
    facts = [phi for phi in left if isinstance(phi, Trans)]
    for goal in right:
        if isinstance(goal, Eq):
            if cc.congruent(goal.left, goal.right):
                logger.debug("等式が合同閉包で成立")
                return True
            continue
        for fact in facts:
            if (isinstance(fact.action, Label) and fact.action.name == goal.action.name
                    and cc.congruent(fact.source, goal.source) and cc.congruent(fact.target, goal.target)):
                return True
    return False
