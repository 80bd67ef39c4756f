"""
証明木の局所検査器

各節点について、記された規則の正しい局所的な適用になっているかだけを確かめる。
証明の探索は一切行わない。前提の文脈は結論の文脈の部分集合であればよい（弱化を各規則に含める）。
文の比較は α 正規形の集合で行う。
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from ..models.documents import TheoryDoc
from ..models.morphism import GenMorphism, Substitution
from ..models.proof import Bindings, ProofDoc, ProofNode, SymbolMap, Verdict, ViolationKind
from ..models.run_config import Mode, Ruleset
from ..models.signature import Block, Signature, Variable
from ..models.syntax import (
    Action, And, Comp, Eq, Exists, Forall, Implies, Label, One, Or, PreImp, Residual, Sentence,
    Star, Term, Trans, Union, Zero,
)
from ..surface.printer import pretty_action, pretty_sentence, pretty_term
from .congruence import decide_basic
from .errors import (
    CaptureError, IllFormed, MorphismError, NotBasicError, SignatureError, TakError, VariableShadowsSymbol,
)
from .kleene_axioms import KleeneForm, axiom_sentence
from .translation import (
    apply_substitution, canonical, check_action, check_morphism, check_sentence, check_term,
    extend_block, translate_sentence,
)


logger = logging.getLogger(__name__)

LEFT, RIGHT = "left", "right"


class RuleViolation(Exception):
    """節点一つの検査で見つかった違反（Verdict に変換される）"""

    def __init__(self, kind: ViolationKind, message: str):
        super().__init__(message)
        self.kind = kind
        self.message = message


def _side(message: str) -> RuleViolation:
    return RuleViolation(ViolationKind.SIDE_CONDITION, message)


def _choice_error(message: str) -> RuleViolation:
    return RuleViolation(ViolationKind.CHOICE, message)


# ---- 規則表 ----

@dataclass(frozen=True)
class RuleSpec:
    """規則の形

    Args:
        side: 主論理式のある側（主論理式を持たない規則では None）
        shape: 主論理式の文の型
        action: shape が Trans のときのアクションの型
        arity: 前提の数（主論理式の項数で決まる規則は None）
        ruleset: この規則が使える規則集合（None ならどちらでも）
    """
    name: str
    side: Optional[str] = None
    shape: Optional[type] = None
    action: Optional[type] = None
    arity: Optional[int] = 0
    required: FrozenSet[str] = frozenset()
    optional: FrozenSet[str] = frozenset()
    ruleset: Optional[Ruleset] = None

    def matches(self, phi: Sentence) -> bool:
        if not isinstance(phi, self.shape):
            return False
        return self.action is None or isinstance(phi.action, self.action)

    @property
    def allowed(self) -> FrozenSet[str]:
        extra = {"on"} if self.side else set()
        return self.required | self.optional | extra


def _spec(name, side=None, shape=None, action=None, arity=0, required=(), optional=(), ruleset=None):
    return RuleSpec(name, side, shape, action, arity, frozenset(required), frozenset(optional), ruleset)


RULES: Dict[str, RuleSpec] = {spec.name: spec for spec in (
    _spec("atom"),
    _spec("init", optional=("psi",)),
    _spec("init_star", optional=("psi",)),
    _spec("cut", arity=2, required=("psi",)),
    _spec("cut_star", arity=2, required=("psi",)),
    _spec("modify", arity=1, optional=("map",)),
    _spec("zero_l", LEFT, Trans, Zero, 0),
    _spec("union_l", LEFT, Trans, Union, 2),
    _spec("union_r", RIGHT, Trans, Union, 1, required=("i",)),
    _spec("preimp_l", LEFT, Trans, PreImp, 2),
    _spec("preimp_r", RIGHT, Trans, PreImp, 1),
    _spec("one_l", LEFT, Trans, One, 1),
    _spec("one_r", RIGHT, Trans, One, 1),
    _spec("comp_l", LEFT, Trans, Comp, 1, optional=("x",)),
    _spec("comp_r", RIGHT, Trans, Comp, 2, required=("t",)),
    _spec("res_l", LEFT, Trans, Residual, 1, optional=("x",)),
    _spec("res_r", RIGHT, Trans, Residual, 2, required=("t",)),
    _spec("imp_l", LEFT, Implies, None, 2),
    _spec("imp_r", RIGHT, Implies, None, 1),
    _spec("or_l", LEFT, Or, None, None),
    _spec("or_r", RIGHT, Or, None, 1, required=("n",)),
    _spec("and_l", LEFT, And, None, 1, required=("n",)),
    _spec("and_r", RIGHT, And, None, None),
    _spec("exists_l", LEFT, Exists, None, 1),
    _spec("exists_r", RIGHT, Exists, None, 1, required=("theta",)),
    _spec("forall_l", LEFT, Forall, None, 1, required=("theta",)),
    _spec("forall_r", RIGHT, Forall, None, 1),
    _spec("ind_r0", RIGHT, Trans, Star, 1, ruleset=Ruleset.IND),
    _spec("ind_r_plus", RIGHT, Trans, Star, 2, required=("t",), ruleset=Ruleset.IND),
    _spec("ind_r_minus", RIGHT, Trans, Star, 2, required=("t",), ruleset=Ruleset.IND),
    _spec("ind_l_plus", LEFT, Trans, Star, 3, required=("t", "target"), optional=("x", "y", "z"),
          ruleset=Ruleset.IND),
    _spec("ind_l_minus", LEFT, Trans, Star, 3, required=("t", "target"), optional=("x", "y", "z"),
          ruleset=Ruleset.IND),
    _spec("kel", arity=1, required=("form", "a1"), optional=("a2",), ruleset=Ruleset.KEL),
)}


# ---- 節点の文脈 ----

@dataclass
class _Context:
    """検査中の節点（結論）の情報"""
    node: ProofNode
    signature: Signature
    left: FrozenSet[Sentence] = field(default_factory=frozenset)
    right: FrozenSet[Sentence] = field(default_factory=frozenset)

    @classmethod
    def of(cls, node: ProofNode, signature: Signature) -> "_Context":
        return cls(node, signature, frozenset(canonical(phi) for phi in node.left),
                   frozenset(canonical(phi) for phi in node.right))


def _same_prefix(outer: Block, inner: Block) -> bool:
    return outer.variables[:len(inner)] == inner.variables


class ProofChecker:
    """一つの証明文書を検査する

    Args:
        theory: 証明が use する理論
        mode: 直観主義か古典か
        ruleset: Ind 規則か KEL 規則か
    """

    def __init__(self, theory: TheoryDoc, mode: Mode, ruleset: Ruleset):
        self.theory = theory
        self.mode = mode
        self.ruleset = ruleset
        self.nodes = 0
        self._handlers: Dict[str, Callable[[_Context, Optional[Sentence]], None]] = {
            name: getattr(self, f"_rule_{name}") for name in RULES
        }

    # ---- 木の走査 ----

    def check(self, name: str, root: ProofNode) -> Verdict:
        self.nodes = 0
        try:
            self._visit(root, ())
        except _Located as located:
            v = located.violation
            logger.debug("証明 %s を却下: %s", name, v.message)
            return Verdict(name, False, located.path, located.rule, v.kind, v.message, self.nodes)
        logger.debug("証明 %s を受理 (%d 節点)", name, self.nodes)
        return Verdict(name, True, nodes=self.nodes)

    def _visit(self, node: ProofNode, path: Tuple[int, ...]) -> None:
        self.nodes += 1
        try:
            self._check_node(node)
        except RuleViolation as v:
            raise _Located(path, node.rule, v) from None
        for i, premise in enumerate(node.premises):
            self._visit(premise, path + (i,))

    def _node_signature(self, node: ProofNode) -> Signature:
        try:
            sig, _ = extend_block(self.theory.signature, node.over)
        except (SignatureError, VariableShadowsSymbol) as e:
            raise RuleViolation(ViolationKind.FRESHNESS, str(e)) from None
        return sig

    def _check_node(self, node: ProofNode) -> None:
        spec = RULES.get(node.rule)
        if spec is None:
            raise RuleViolation(ViolationKind.UNKNOWN_RULE, f"unknown rule {node.rule}")
        if spec.ruleset is not None and spec.ruleset != self.ruleset:
            raise RuleViolation(ViolationKind.RULESET,
                                f"{node.rule} is not available with rules {self.ruleset.value}")
        if self.mode == Mode.INTUITIONISTIC and len(node.right) > 1:
            raise RuleViolation(ViolationKind.MODE,
                                f"intuitionistic sequent has {len(node.right)} sentences on the right")
        if spec.arity is not None and len(node.premises) != spec.arity:
            raise RuleViolation(ViolationKind.ARITY,
                                f"{node.rule} takes {spec.arity} premises, got {len(node.premises)}")
        for key, _ in node.choices:
            if key not in spec.allowed:
                raise _choice_error(f"{node.rule} does not take choice {key}")
        for key in sorted(spec.required):
            if not node.has_choice(key):
                raise _choice_error(f"{node.rule} needs choice {key}")
        sig = self._node_signature(node)
        for phi in node.left + node.right:
            try:
                check_sentence(sig, phi)
            except TakError as e:
                raise _side(f"ill-formed sentence {pretty_sentence(phi)}: {e}") from None
        ctx = _Context.of(node, sig)
        handler = self._handlers[node.rule]
        if spec.side is None:
            handler(ctx, None)
            return
        self._with_principal(spec, ctx, handler)

    def _with_principal(self, spec: RuleSpec, ctx: _Context, handler) -> None:
        """主論理式を決めて規則を検査する。on が無ければ形の合う文を順に試す"""
        node = ctx.node
        side = node.left if spec.side == LEFT else node.right
        chosen = node.choice("on")
        if chosen is not None:
            target = canonical(chosen)
            candidates = [phi for phi in side if canonical(phi) == target]
            if not candidates:
                raise _choice_error(f"principal sentence {pretty_sentence(chosen)} is not on the {spec.side}")
            if not spec.matches(candidates[0]):
                raise _choice_error(f"principal sentence {pretty_sentence(chosen)} does not fit {node.rule}")
            handler(ctx, candidates[0])
            return
        candidates = [phi for phi in side if spec.matches(phi)]
        if not candidates:
            raise _side(f"no principal sentence for {node.rule} on the {spec.side}")
        first: Optional[RuleViolation] = None
        for phi in candidates:
            try:
                handler(ctx, phi)
                return
            except RuleViolation as v:
                first = first or v
        raise first

    # ---- 前提の検査 ----

    def _premise(self, ctx: _Context, index: int, left: Iterable[Sentence] = (),
                 right: Iterable[Sentence] = (), block: Optional[Block] = None) -> None:
        """index 番目の前提が副論理式 left/right を含み、残りが結論の文脈に収まるか

        block を与えると前提のシグネチャが結論のものを block だけ拡張していることを要求する。
        """
        premise = ctx.node.premises[index]
        expected_over = ctx.node.over if block is None else ctx.node.over.concat(block)
        if premise.over != expected_over:
            if block is None:
                raise _side(f"premise {index} is stated over a different signature")
            raise RuleViolation(ViolationKind.FRESHNESS,
                                f"premise {index} must extend the signature by exactly {_show_block(block)}")
        self._contained(index, LEFT, premise.left, left, ctx.left)
        self._contained(index, RIGHT, premise.right, right, ctx.right)

    @staticmethod
    def _contained(index: int, side: str, stated: Sequence[Sentence], required: Iterable[Sentence],
                   context: FrozenSet[Sentence]) -> None:
        present = {canonical(phi): phi for phi in stated}
        wanted = set()
        for phi in required:
            key = canonical(phi)
            if key not in present:
                raise _side(f"premise {index} lacks {pretty_sentence(phi)} on the {side}")
            wanted.add(key)
        for key, phi in present.items():
            if key not in wanted and key not in context:
                raise _side(f"premise {index} has {pretty_sentence(phi)} on the {side}, "
                            f"which is not in the conclusion")

    def _fresh_block(self, ctx: _Context, index: int, shape: Block, names: Optional[Sequence[str]] = None) -> Block:
        """前提 index が導入する新しい変数のブロックを取り出し、shape とソートが一致し新しいことを確かめる"""
        premise = ctx.node.premises[index]
        if not _same_prefix(premise.over, ctx.node.over):
            raise RuleViolation(ViolationKind.FRESHNESS,
                                f"premise {index} must extend the signature of the conclusion")
        suffix = Block(premise.over.variables[len(ctx.node.over):])
        if len(suffix) != len(shape):
            raise RuleViolation(ViolationKind.FRESHNESS,
                                f"premise {index} must add {len(shape)} variables, got {len(suffix)}")
        if names is not None:
            if sorted(suffix.names) != sorted(names):
                raise RuleViolation(ViolationKind.FRESHNESS,
                                    f"premise {index} must add the variables {', '.join(names)}")
        for new, old in zip(suffix, shape):
            if (new.sort, new.label) != (old.sort, old.label):
                raise RuleViolation(ViolationKind.FRESHNESS, f"variable {new.name} has the wrong sort")
            if new.name in ctx.signature.symbols:
                raise RuleViolation(ViolationKind.FRESHNESS, f"{new.name} is not fresh")
        if suffix.duplicates():
            raise RuleViolation(ViolationKind.FRESHNESS, f"{suffix.duplicates()[0]} is introduced twice")
        return suffix

    def _term(self, ctx: _Context, key: str, sort: str) -> Term:
        t = ctx.node.choice(key)
        try:
            got = check_term(ctx.signature, t)
        except IllFormed as e:
            raise _choice_error(f"choice {key}: {e}") from None
        if got != sort:
            raise _choice_error(f"choice {key} = {pretty_term(t)} has sort {got}, expected {sort}")
        return t

    def _action(self, ctx: _Context, key: str, sort: Optional[str] = None) -> Action:
        a = ctx.node.choice(key)
        try:
            got = check_action(ctx.signature, a)
        except IllFormed as e:
            raise _choice_error(f"choice {key}: {e}") from None
        if sort is not None and got != sort:
            raise _choice_error(f"choice {key} = {pretty_action(a)} has sort {got}, expected {sort}")
        return a

    def _index(self, ctx: _Context, key: str, bound: int) -> int:
        value = ctx.node.choice(key)
        if not 0 <= value < bound:
            raise _choice_error(f"choice {key} = {value} out of range 0..{bound - 1}")
        return value

    # ---- 構造規則 ----

    def _rule_atom(self, ctx: _Context, _: Optional[Sentence]) -> None:
        basic_left = [phi for phi in ctx.node.left if _is_atomic(phi)]
        basic_right = [phi for phi in ctx.node.right if _is_atomic(phi)]
        try:
            derivable = decide_basic(ctx.signature, basic_left, basic_right)
        except NotBasicError as e:
            raise _side(str(e)) from None
        if not derivable:
            raise _side("atomic sequent is not derivable")

    def _rule_init(self, ctx: _Context, _: Optional[Sentence], star_only: bool = False) -> None:
        psi = ctx.node.choice("psi")
        if psi is not None:
            if star_only and not _is_star_transition(psi):
                raise _choice_error(f"{pretty_sentence(psi)} is not a starred transition")
            key = canonical(psi)
            if key not in ctx.left or key not in ctx.right:
                raise _side(f"{pretty_sentence(psi)} is not on both sides")
            return
        common = [phi for phi in ctx.node.left
                  if canonical(phi) in ctx.right and (not star_only or _is_star_transition(phi))]
        if not common:
            raise _side("no sentence occurs on both sides")

    def _rule_init_star(self, ctx: _Context, phi: Optional[Sentence]) -> None:
        self._rule_init(ctx, phi, star_only=True)

    def _rule_cut(self, ctx: _Context, _: Optional[Sentence], star_only: bool = False) -> None:
        psi = ctx.node.choice("psi")
        if star_only and not _is_star_transition(psi):
            raise _choice_error(f"{pretty_sentence(psi)} is not a starred transition")
        try:
            check_sentence(ctx.signature, psi)
        except IllFormed as e:
            raise _choice_error(f"cut sentence: {e}") from None
        self._premise(ctx, 0, right=[psi])
        self._premise(ctx, 1, left=[psi])

    def _rule_cut_star(self, ctx: _Context, phi: Optional[Sentence]) -> None:
        self._rule_cut(ctx, phi, star_only=True)

    def _rule_modify(self, ctx: _Context, _: Optional[Sentence]) -> None:
        premise = ctx.node.premises[0]
        source = self._node_signature(premise)
        chi = _symbol_morphism(source, ctx.signature, ctx.node.choice("map", SymbolMap()))
        problems = check_morphism(chi)
        if problems:
            raise _side(f"map is not a signature morphism: {problems[0]}")
        for side, stated, context in ((LEFT, premise.left, ctx.left), (RIGHT, premise.right, ctx.right)):
            for phi in stated:
                try:
                    image = translate_sentence(chi, phi)
                except MorphismError as e:
                    raise _side(str(e)) from None
                if canonical(image) not in context:
                    raise _side(f"translated premise sentence {pretty_sentence(image)} "
                                f"is not on the {side} of the conclusion")

    # ---- アクションの規則 ----

    def _rule_zero_l(self, ctx: _Context, phi: Trans) -> None:
        pass

    def _rule_union_l(self, ctx: _Context, phi: Trans) -> None:
        a = phi.action
        self._premise(ctx, 0, left=[Trans(phi.source, a.left, phi.target)])
        self._premise(ctx, 1, left=[Trans(phi.source, a.right, phi.target)])

    def _rule_union_r(self, ctx: _Context, phi: Trans) -> None:
        i = self._index(ctx, "i", 2)
        part = phi.action.children()[i]
        self._premise(ctx, 0, right=[Trans(phi.source, part, phi.target)])

    def _rule_preimp_l(self, ctx: _Context, phi: Trans) -> None:
        a = phi.action
        self._premise(ctx, 0, right=[Trans(phi.source, a.left, phi.target)])
        self._premise(ctx, 1, left=[Trans(phi.source, a.right, phi.target)])

    def _rule_preimp_r(self, ctx: _Context, phi: Trans) -> None:
        a = phi.action
        self._premise(ctx, 0, left=[Trans(phi.source, a.left, phi.target)],
                      right=[Trans(phi.source, a.right, phi.target)])

    def _rule_one_l(self, ctx: _Context, phi: Trans) -> None:
        self._premise(ctx, 0, left=[Eq(phi.source, phi.target)])

    def _rule_one_r(self, ctx: _Context, phi: Trans) -> None:
        self._premise(ctx, 0, right=[Eq(phi.source, phi.target)])

    def _middle(self, ctx: _Context, phi: Trans) -> Tuple[Block, Term]:
        sort = phi.action.sort
        names = None if ctx.node.choice("x") is None else [ctx.node.choice("x")]
        block = self._fresh_block(ctx, 0, Block.of(Variable("x", sort)), names)
        var = block.variables[0]
        return block, Term.const(var.name, var.sort)

    def _rule_comp_l(self, ctx: _Context, phi: Trans) -> None:
        block, x = self._middle(ctx, phi)
        a = phi.action
        self._premise(ctx, 0, left=[Trans(phi.source, a.left, x), Trans(x, a.right, phi.target)], block=block)

    def _rule_res_l(self, ctx: _Context, phi: Trans) -> None:
        block, x = self._middle(ctx, phi)
        a = phi.action
        self._premise(ctx, 0, left=[Trans(x, a.left, phi.source), Trans(x, a.right, phi.target)], block=block)

    def _rule_comp_r(self, ctx: _Context, phi: Trans) -> None:
        t = self._term(ctx, "t", phi.action.sort)
        a = phi.action
        self._premise(ctx, 0, right=[Trans(phi.source, a.left, t)])
        self._premise(ctx, 1, right=[Trans(t, a.right, phi.target)])

    def _rule_res_r(self, ctx: _Context, phi: Trans) -> None:
        t = self._term(ctx, "t", phi.action.sort)
        a = phi.action
        self._premise(ctx, 0, right=[Trans(t, a.left, phi.source)])
        self._premise(ctx, 1, right=[Trans(t, a.right, phi.target)])

    # ---- 結合子と量化子の規則 ----

    def _rule_imp_l(self, ctx: _Context, phi: Implies) -> None:
        self._premise(ctx, 0, right=[phi.premise])
        self._premise(ctx, 1, left=[phi.conclusion])

    def _rule_imp_r(self, ctx: _Context, phi: Implies) -> None:
        self._premise(ctx, 0, left=[phi.premise], right=[phi.conclusion])

    def _rule_or_l(self, ctx: _Context, phi: Or) -> None:
        self._arity(ctx, len(phi.items))
        for i, item in enumerate(phi.items):
            self._premise(ctx, i, left=[item])

    def _rule_or_r(self, ctx: _Context, phi: Or) -> None:
        n = self._index(ctx, "n", len(phi.items))
        self._premise(ctx, 0, right=[phi.items[n]])

    def _rule_and_l(self, ctx: _Context, phi: And) -> None:
        n = self._index(ctx, "n", len(phi.items))
        self._premise(ctx, 0, left=[phi.items[n]])

    def _rule_and_r(self, ctx: _Context, phi: And) -> None:
        self._arity(ctx, len(phi.items))
        for i, item in enumerate(phi.items):
            self._premise(ctx, i, right=[item])

    @staticmethod
    def _arity(ctx: _Context, expected: int) -> None:
        if len(ctx.node.premises) != expected:
            raise RuleViolation(ViolationKind.ARITY,
                                f"{ctx.node.rule} takes {expected} premises here, got {len(ctx.node.premises)}")

    def _eigen_body(self, ctx: _Context, phi) -> Tuple[Block, Sentence]:
        """∃_L と ∀_R: 束縛ブロックを前提の新しい変数に付け替えた本体"""
        block = self._fresh_block(ctx, 0, phi.block)
        terms = {}
        actions = {}
        for old, new in zip(phi.block, block):
            if old.label:
                actions[old.name] = Label(new.name, new.sort)
            else:
                terms[old.name] = Term.const(new.name, new.sort)
        theta = Substitution(ctx.signature, phi.block, block, terms, actions)
        return block, apply_substitution(theta, phi.body)

    def _instance(self, ctx: _Context, phi) -> Sentence:
        """∃_R と ∀_L: 選択 theta による本体の具体化"""
        bindings: Bindings = ctx.node.choice("theta")
        images = bindings.as_dict()
        unknown = set(images) - set(phi.block.names)
        if unknown:
            raise _choice_error(f"theta binds {sorted(unknown)[0]}, which the quantifier does not bind")
        terms = {k: v for k, v in images.items() if isinstance(v, Term)}
        actions = {k: v for k, v in images.items() if isinstance(v, Action)}
        theta = Substitution(ctx.signature, phi.block, Block(), terms, actions)
        try:
            return apply_substitution(theta, phi.body)
        except (MorphismError, CaptureError, IllFormed) as e:
            raise _choice_error(f"theta: {e}") from None

    def _rule_exists_l(self, ctx: _Context, phi: Exists) -> None:
        block, body = self._eigen_body(ctx, phi)
        self._premise(ctx, 0, left=[body], block=block)

    def _rule_forall_r(self, ctx: _Context, phi: Forall) -> None:
        block, body = self._eigen_body(ctx, phi)
        self._premise(ctx, 0, right=[body], block=block)

    def _rule_exists_r(self, ctx: _Context, phi: Exists) -> None:
        self._premise(ctx, 0, right=[self._instance(ctx, phi)])

    def _rule_forall_l(self, ctx: _Context, phi: Forall) -> None:
        self._premise(ctx, 0, left=[self._instance(ctx, phi)])

    # ---- 帰納法の規則 ----

    def _rule_ind_r0(self, ctx: _Context, phi: Trans) -> None:
        self._premise(ctx, 0, right=[Eq(phi.source, phi.target)])

    def _middle_terms(self, ctx: _Context, t: Term, first: Tuple[Term, Action], second: Tuple[Action, Term]) -> None:
        """二つの前提が中間の項について食い違っていないか"""
        start, a0 = first
        a1, end = second
        m0 = [phi.target for phi in ctx.node.premises[0].right
              if isinstance(phi, Trans) and phi.source == start and phi.action == a0]
        m1 = [phi.source for phi in ctx.node.premises[1].right
              if isinstance(phi, Trans) and phi.target == end and phi.action == a1]
        if m0 and m1 and (t not in m0 or t not in m1):
            raise _side(f"middle-term mismatch: premises use {pretty_term(m0[0])} and {pretty_term(m1[0])}, "
                        f"choice t = {pretty_term(t)}")

    def _rule_ind_r_plus(self, ctx: _Context, phi: Trans) -> None:
        a = phi.action.body
        t = self._term(ctx, "t", a.sort)
        self._middle_terms(ctx, t, (phi.source, phi.action), (a, phi.target))
        self._premise(ctx, 0, right=[Trans(phi.source, phi.action, t)])
        self._premise(ctx, 1, right=[Trans(t, a, phi.target)])

    def _rule_ind_r_minus(self, ctx: _Context, phi: Trans) -> None:
        a = phi.action.body
        t = self._term(ctx, "t", a.sort)
        self._middle_terms(ctx, t, (phi.source, a), (phi.action, phi.target))
        self._premise(ctx, 0, right=[Trans(phi.source, a, t)])
        self._premise(ctx, 1, right=[Trans(t, phi.action, phi.target)])

    def _induction_block(self, ctx: _Context, sort: str) -> Tuple[Term, Term, Term, Block]:
        names = [ctx.node.choice(k, k) for k in ("x", "y", "z")]
        shape = Block(tuple(Variable(n, sort) for n in names))
        block = self._fresh_block(ctx, 1, shape, names)
        x, y, z = (Term.const(n, sort) for n in names)
        return x, y, z, block

    def _rule_ind_l_plus(self, ctx: _Context, phi: Trans) -> None:
        a = phi.action.body
        t = self._term(ctx, "t", a.sort)
        target = self._action(ctx, "target", a.sort)
        x, y, z, block = self._induction_block(ctx, a.sort)
        self._premise(ctx, 0, right=[Trans(t, target, phi.source)])
        self._premise(ctx, 1, left=[Trans(z, target, x), Trans(x, a, y)], right=[Trans(z, target, y)],
                      block=block)
        self._premise(ctx, 2, left=[Trans(t, target, phi.target)])

    def _rule_ind_l_minus(self, ctx: _Context, phi: Trans) -> None:
        a = phi.action.body
        t = self._term(ctx, "t", a.sort)
        target = self._action(ctx, "target", a.sort)
        x, y, z, block = self._induction_block(ctx, a.sort)
        self._premise(ctx, 0, right=[Trans(phi.target, target, t)])
        self._premise(ctx, 1, left=[Trans(x, a, y), Trans(y, target, z)], right=[Trans(x, target, z)],
                      block=block)
        self._premise(ctx, 2, left=[Trans(phi.source, target, t)])

    # ---- KEL ----

    def _rule_kel(self, ctx: _Context, _: Optional[Sentence]) -> None:
        try:
            form = KleeneForm.from_name(ctx.node.choice("form"))
        except ValueError:
            raise _choice_error(f"unknown axiom form {ctx.node.choice('form')}") from None
        a1 = self._action(ctx, "a1")
        a2 = None
        if form.binary:
            if not ctx.node.has_choice("a2"):
                raise _choice_error(f"{form.value} needs choice a2")
            a2 = self._action(ctx, "a2", a1.sort)
        elif ctx.node.has_choice("a2"):
            raise _choice_error(f"{form.value} takes one action")
        axiom = axiom_sentence(form, a1, a2, ctx.signature.symbols)
        self._premise(ctx, 0, left=[axiom])


class _Located(Exception):
    def __init__(self, path: Tuple[int, ...], rule: str, violation: RuleViolation):
        super().__init__(violation.message)
        self.path = path
        self.rule = rule
        self.violation = violation


def _is_atomic(phi: Sentence) -> bool:
    return isinstance(phi, Eq) or (isinstance(phi, Trans) and isinstance(phi.action, Label))


def _is_star_transition(phi: Sentence) -> bool:
    return isinstance(phi, Trans) and isinstance(phi.action, Star)


def _show_block(block: Block) -> str:
    return "{" + ", ".join(f"{v.name}:{v.sort}" for v in block) + "}"


def _symbol_morphism(source: Signature, target: Signature, mapping: SymbolMap) -> GenMorphism:
    """Modify の選択データから一般化射を作る（書かれていない記号は同名へ送る）"""
    sort_map = {s: s for s in source.sorts}
    sort_map.update(dict(mapping.sorts))
    funcs = dict(mapping.funcs)
    labels = dict(mapping.labels)
    func_map = {}
    for f in source.funcs:
        default = Term(f.name, tuple(Term.hole(i, sort_map.get(s, s)) for i, s in enumerate(f.args)),
                       sort_map.get(f.result, f.result))
        func_map[f.name] = funcs.get(f.name, default)
    label_map = {l.name: labels.get(l.name, Label(l.name, sort_map.get(l.sort, l.sort))) for l in source.labels}
    return GenMorphism(source, target, sort_map, func_map, label_map)


def check_proof(doc: ProofDoc, theory: TheoryDoc, mode: Optional[Mode] = None,
                ruleset: Optional[Ruleset] = None) -> Verdict:
    """証明文書を検査して Verdict を返す

    mode と ruleset を与えると文書に書かれたものより優先する。
    """
    if doc.theory != theory.name:
        return Verdict(doc.name, False, (), doc.root.rule, ViolationKind.SIDE_CONDITION,
                       f"proof uses theory {doc.theory}, checked against {theory.name}", 0)
    checker = ProofChecker(theory, mode or doc.mode, ruleset or doc.ruleset)
    return checker.check(doc.name, doc.root)
