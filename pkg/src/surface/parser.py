"""
文書の構文解析（再帰下降）

トークン列を一つ先読みで解析し、記号はその場でシグネチャに照らして解決する。
文の糖衣は解析の最後に desugar_sentence で展開する。
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union as TypingUnion

from ..core.desugar import desugar_action, desugar_sentence
from ..core.errors import (
    IllFormed, LexError, ParseError, SignatureError, TakError, VariableShadowsSymbol, WellFormednessError,
)
from ..core.translation import check_sentence, extend_block, translate_sentence
from ..models.documents import CospanDoc, ModelDoc, Renaming, TheoryDoc
from ..models.model import AnyModel, FiniteModel, FullAlgebra, KleeneModel, ListedAlgebra
from ..models.morphism import GenMorphism
from ..models.proof import CHOICE_KINDS, Bindings, ChoiceKind, ProofDoc, ProofNode, SymbolMap
from ..models.relation import Relation
from ..models.run_config import Mode, Ruleset
from ..models.signature import Block, FuncDecl, LabelDecl, Signature, Variable, validate_signature
from ..models.syntax import (
    Action, And, Comp, Complement, Converse, Dead, Eq, Equiv, Exists, FALSE, Forall, Iff, Implies,
    Label, Le, Live, Meet, Not, One, Or, Plus, Power, PreImp, Residual, Sentence, Star, TRUE, Term,
    Trans, Union, Zero,
)
from .lexer import Token, tokenize


logger = logging.getLogger(__name__)

Document = TypingUnion[TheoryDoc, ModelDoc, ProofDoc, CospanDoc]
TheoryResolver = Callable[[str], TheoryDoc]

_DISPLAY = {
    "IDENT": "identifier", "HOLE": "hole", "CARET": "'^'", "TRANS_OPEN": "'=['",
    "TRANS_CLOSE": "']=>'", "EQEQ": "'=='", "TURNSTILE": "'|-'", "RESIDUAL": "'|>'",
    "PREIMP": "'-o'", "IFF": "'<->'", "ARROW": "'->'", "AND_OP": "'/\\'", "OR_OP": "'\\/'",
    "TILDE": "'~'", "SEMI": "';'", "STAR": "'*'", "COMMA": "','", "COLON": "':'", "DOT": "'.'",
    "LPAREN": "'('", "RPAREN": "')'", "LBRACKET": "'['", "RBRACKET": "']'", "LBRACE": "'{'",
    "RBRACE": "'}'", "EQUALS": "'='", "AT": "'@'", "EOF": "end of input", "UNION": "'U'",
    "MEET": "'cap'", "STARMAP": "'star'",
}

_SENTENCE_START = {"IDENT", "HOLE", "LPAREN", "FORALL", "EXISTS", "TRUE", "FALSE", "AND", "OR",
                   "LE", "EQV", "TILDE", "AT"}


def _display(kind: str) -> str:
    return _DISPLAY.get(kind, f"'{kind.lower()}'")


@dataclass(frozen=True)
class Scope:
    """記号を解決する環境"""
    signature: Signature
    actions: Mapping[str, Action] = field(default_factory=dict)
    axioms: Mapping[str, Sentence] = field(default_factory=dict)
    theory_signature: Optional[Signature] = None

    def with_signature(self, sig: Signature) -> "Scope":
        return replace(self, signature=sig)


@dataclass
class _RawTerm:
    """解決前の項（Modify の像のように前提を読むまで穴のソートが決まらないもの）"""
    token: Token
    args: List["_RawTerm"]


class Parser:
    def __init__(self, text: str, path: Optional[str] = None, resolver: Optional[TheoryResolver] = None):
        self.path = path
        self.resolver = resolver
        try:
            self.tokens = tokenize(text)
        except LexError as e:
            raise e.with_path(path) if path else e
        self.pos = 0
        self._expected: Set[str] = set()

    # ---- トークン操作 ----

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, kind: str) -> bool:
        if self.tok.kind == kind:
            return True
        self._expected.add(_display(kind))
        return False

    def accept(self, kind: str) -> Optional[Token]:
        if self.at(kind):
            tok = self.tok
            self.pos += 1
            self._expected = set()
            return tok
        return None

    def expect(self, kind: str) -> Token:
        tok = self.accept(kind)
        if tok is None:
            self.fail()
        return tok

    def fail(self, message: Optional[str] = None):
        tok = self.tok
        if message is None:
            message = "unexpected end of input" if tok.kind == "EOF" else f"unexpected {tok.value!r}"
        raise ParseError(message, tok.line, tok.column, self._expected, self.path)

    def ill_formed(self, tok: Token, message: str):
        raise WellFormednessError(message, tok.line, tok.column, (), self.path)

    def name(self) -> str:
        return self.expect("IDENT").value

    # ---- 文書 ----

    def document(self) -> Document:
        if self.at("THEORY"):
            doc = self.theory()
        elif self.at("MODEL"):
            doc = self.model()
        elif self.at("PROOF"):
            doc = self.proof()
        elif self.at("COSPAN"):
            doc = self.cospan()
        else:
            self.fail()
        self.expect("EOF")
        return doc

    def _theory(self, tok: Token, name: str) -> TheoryDoc:
        if self.resolver is None:
            self.ill_formed(tok, f"cannot resolve theory {name}")
        try:
            return self.resolver(name)
        except TakError as e:
            self.ill_formed(tok, str(e))

    # ---- 理論 ----

    def theory(self) -> TheoryDoc:
        self.expect("THEORY")
        name = self.name()
        sorts: List[str] = []
        funcs: List[FuncDecl] = []
        labels: List[LabelDecl] = []
        actions: Dict[str, Action] = {}
        axioms: List[Tuple[str, Sentence]] = []
        sig = Signature()
        while not self.accept("END"):
            tok = self.tok
            if self.accept("SORTS"):
                while self.at("IDENT"):
                    sorts.append(self.name())
            elif self.accept("OP"):
                fname = self.name()
                self.expect("COLON")
                args: List[str] = []
                while self.at("IDENT"):
                    args.append(self.name())
                self.expect("ARROW")
                funcs.append(FuncDecl(fname, tuple(args), self.name()))
            elif self.accept("LABEL"):
                lname = self.name()
                self.expect("COLON")
                source = self.name()
                self.expect("TILDE")
                labels.append(LabelDecl(lname, source, self.name()))
            elif self.accept("ACTION"):
                aname = self.name()
                self.expect("EQUALS")
                if aname in sig.symbols or aname in actions:
                    self.ill_formed(tok, f"action abbreviation {aname} clashes with a symbol")
                actions[aname] = desugar_action(self.action(Scope(sig, actions)))
            elif self.accept("AXIOM"):
                xname = self.name()
                self.expect("COLON")
                if any(xname == key for key, _ in axioms):
                    self.ill_formed(tok, f"duplicate axiom {xname}")
                axioms.append((xname, self.sentence_top(Scope(sig, actions))))
            else:
                self.fail()
            sig = Signature.build(sorts, funcs, labels)
            problems = validate_signature(sig)
            if problems:
                self.ill_formed(tok, problems[0])
        logger.debug("理論 %s を解析: %s", name, sig)
        return TheoryDoc(name, sig, tuple(actions.items()), tuple(axioms))

    # ---- モデル ----

    def _element(self, m_carriers: Mapping[str, Tuple[str, ...]], sort: str) -> int:
        tok = self.expect("IDENT")
        try:
            return m_carriers[sort].index(tok.value)
        except ValueError:
            self.ill_formed(tok, f"unknown element {tok.value} of sort {sort}")

    def _relation(self, carriers: Mapping[str, Tuple[str, ...]], sort: str) -> Relation:
        self.expect("LBRACE")
        pairs: List[Tuple[int, int]] = []
        while not self.accept("RBRACE"):
            if pairs:
                self.expect("COMMA")
            self.expect("LPAREN")
            i = self._element(carriers, sort)
            self.expect("COMMA")
            j = self._element(carriers, sort)
            self.expect("RPAREN")
            pairs.append((i, j))
        return Relation.from_pairs(len(carriers[sort]), pairs)

    def model(self) -> ModelDoc:
        self.expect("MODEL")
        name = self.name()
        self.expect("USE")
        theory_tok = self.tok
        theory_name = self.name()
        theory = self._theory(theory_tok, theory_name)
        sig = theory.signature
        carriers: Dict[str, Tuple[str, ...]] = {}
        tables: Dict[str, Dict[Tuple[int, ...], int]] = {f.name: {} for f in sig.funcs}
        relations: Dict[str, Relation] = {}
        algebras: Dict[str, object] = {}
        listed: Dict[str, Tuple[Token, List[Relation]]] = {}
        stars: Dict[str, Dict[Relation, Relation]] = {}
        while not self.accept("END"):
            tok = self.tok
            if self.accept("CARRIER"):
                sort = self.name()
                if not sig.has_sort(sort):
                    self.ill_formed(tok, f"unknown sort {sort}")
                self.expect("EQUALS")
                elements: List[str] = []
                while self.at("IDENT"):
                    elements.append(self.name())
                if not elements or len(set(elements)) != len(elements):
                    self.ill_formed(tok, f"carrier of {sort} must list distinct elements")
                carriers[sort] = tuple(elements)
            elif self.accept("OP"):
                fname = self.name()
                decl = sig.func(fname)
                if decl is None:
                    self.ill_formed(tok, f"unknown operation {fname}")
                self._need_carriers(tok, carriers, decl.args + (decl.result,))
                args: List[int] = []
                if decl.args:
                    self.expect("LPAREN")
                    for k, s in enumerate(decl.args):
                        if k:
                            self.expect("COMMA")
                        args.append(self._element(carriers, s))
                    self.expect("RPAREN")
                self.expect("EQUALS")
                tables[fname][tuple(args)] = self._element(carriers, decl.result)
            elif self.accept("LABEL"):
                lname = self.name()
                decl = sig.label(lname)
                if decl is None:
                    self.ill_formed(tok, f"unknown label {lname}")
                self._need_carriers(tok, carriers, (decl.sort,))
                self.expect("EQUALS")
                relations[lname] = self._relation(carriers, decl.sort)
            elif self.accept("ALGEBRA"):
                sort = self.name()
                self._need_carriers(tok, carriers, (sort,))
                self.expect("EQUALS")
                if self.accept("FULL"):
                    algebras[sort] = FullAlgebra(len(carriers[sort]))
                else:
                    self.expect("LBRACE")
                    members: List[Relation] = []
                    while not self.accept("RBRACE"):
                        if members:
                            self.expect("COMMA")
                        members.append(self._relation(carriers, sort))
                    listed[sort] = (tok, members)
                    stars.setdefault(sort, {})
            elif self.accept("STARMAP"):
                sort = self.name()
                if sort not in listed:
                    self.ill_formed(tok, f"star for {sort} needs a listed algebra first")
                key_tok = self.tok
                r = self._relation(carriers, sort)
                if r not in listed[sort][1]:
                    self.ill_formed(key_tok, f"star for {sort} defined outside the listed algebra")
                self.expect("EQUALS")
                stars[sort][r] = self._relation(carriers, sort)
            else:
                self.fail()
        end = self.tokens[self.pos - 1]
        for s in sig.sorts:
            if s not in carriers:
                self.ill_formed(end, f"missing carrier for sort {s}")
        for f in sig.funcs:
            expected = 1
            for s in f.args:
                expected *= len(carriers[s])
            if len(tables[f.name]) != expected:
                self.ill_formed(end, f"incomplete table for op {f.name}")
        for l in sig.labels:
            relations.setdefault(l.name, Relation.empty(len(carriers[l.sort])))
        base = FiniteModel.build(sig, carriers, tables, relations, name)
        model: AnyModel = base
        if algebras or listed:
            for sort, (tok, members) in listed.items():
                for r in members:
                    if r not in stars[sort]:
                        self.ill_formed(tok, f"star for {sort} undefined on a listed member")
                algebras[sort] = ListedAlgebra(len(carriers[sort]), frozenset(members), stars[sort])
            for s in sig.sorts:
                algebras.setdefault(s, FullAlgebra(len(carriers[s])))
            model = KleeneModel(base, algebras)
        return ModelDoc(name, theory_name, model)

    def _need_carriers(self, tok: Token, carriers: Mapping[str, Tuple[str, ...]], sorts: Sequence[str]) -> None:
        for s in sorts:
            if s not in carriers:
                self.ill_formed(tok, f"carrier of sort {s} must be declared first")

    # ---- 余スパン ----

    def _renaming(self) -> Renaming:
        self.expect("LBRACE")
        sorts: List[Tuple[str, str]] = []
        funcs: List[Tuple[str, str]] = []
        labels: List[Tuple[str, str]] = []
        first = True
        while not self.accept("RBRACE"):
            if not first:
                self.expect("COMMA")
            first = False
            if self.accept("SORT"):
                target = sorts
            elif self.accept("OP"):
                target = funcs
            elif self.accept("LABEL"):
                target = labels
            else:
                self.fail()
            source = self.name()
            self.expect("ARROW")
            target.append((source, self.name()))
        return Renaming(tuple(sorts), tuple(funcs), tuple(labels))

    def cospan(self) -> CospanDoc:
        self.expect("COSPAN")
        name = self.name()
        self.expect("BASE")
        base = self.name()
        self.expect("LEFT")
        left = self.name()
        left_map = self._renaming()
        self.expect("RIGHT")
        right = self.name()
        right_map = self._renaming()
        self.expect("END")
        return CospanDoc(name, base, left, right, left_map, right_map)

    # ---- 証明 ----

    def proof(self) -> ProofDoc:
        self.expect("PROOF")
        name = self.name()
        self.expect("USE")
        theory_tok = self.tok
        theory_name = self.name()
        theory = self._theory(theory_tok, theory_name)
        self.expect("MODE")
        mode_tok = self.tok
        try:
            mode = Mode(self.name())
        except ValueError:
            self.ill_formed(mode_tok, f"unknown mode {mode_tok.value} (use int or classical)")
        self.expect("RULES")
        rules_tok = self.tok
        try:
            ruleset = Ruleset(self.name())
        except ValueError:
            self.ill_formed(rules_tok, f"unknown rule set {rules_tok.value} (use ind or kel)")
        scope = Scope(theory.signature, dict(theory.actions), dict(theory.axioms), theory.signature)
        root = self.node(scope)
        self.expect("END")
        return ProofDoc(name, theory_name, mode, ruleset, root)

    def node(self, theory_scope: Scope) -> ProofNode:
        rule_tok = self.expect("IDENT")
        over = Block()
        if self.accept("OVER"):
            over_tok = self.tok
            over = self.block()
            try:
                sig, _ = extend_block(theory_scope.signature, over)
            except (SignatureError, VariableShadowsSymbol) as e:
                self.ill_formed(over_tok, str(e))
        else:
            sig = theory_scope.signature
        scope = theory_scope.with_signature(sig)
        left = self.sentence_list(scope, "TURNSTILE")
        self.expect("TURNSTILE")
        right = self.sentence_list(scope, None)
        raw_choices: List[Tuple[Token, str, object]] = []
        if self.accept("WITH"):
            raw_choices.append(self.choice(scope))
            while self.accept("COMMA"):
                raw_choices.append(self.choice(scope))
        premises: List[ProofNode] = []
        if self.accept("LBRACE"):
            premises.append(self.node(theory_scope))
            while self.accept("SEMI"):
                premises.append(self.node(theory_scope))
            self.expect("RBRACE")
        choices = []
        for tok, key, value in raw_choices:
            if isinstance(value, _PendingMap):
                value = self._resolve_map(tok, value, scope, premises, theory_scope)
            choices.append((key, value))
        return ProofNode(rule_tok.value, tuple(left), tuple(right), over, tuple(choices), tuple(premises),
                         rule_tok.line)

    def sentence_list(self, scope: Scope, stop: Optional[str]) -> List[Sentence]:
        items: List[Sentence] = []
        if stop is not None and self.at(stop):
            return items
        if self.tok.kind not in _SENTENCE_START:
            for kind in _SENTENCE_START:
                self._expected.add(_display(kind))
            return items
        items.append(self.sentence_top(scope))
        while self.accept("COMMA"):
            items.append(self.sentence_top(scope))
        return items

    def choice(self, scope: Scope) -> Tuple[Token, str, object]:
        tok = self.expect("IDENT")
        kind = CHOICE_KINDS.get(tok.value)
        if kind is None:
            self.ill_formed(tok, f"unknown choice {tok.value}")
        self.expect("EQUALS")
        match kind:
            case ChoiceKind.INT:
                value_tok = self.expect("IDENT")
                if not value_tok.value.isdigit():
                    self.ill_formed(value_tok, f"choice {tok.value} needs a number")
                return tok, tok.value, int(value_tok.value)
            case ChoiceKind.NAME:
                return tok, tok.value, self.name()
            case ChoiceKind.TERM:
                return tok, tok.value, self.term(scope)
            case ChoiceKind.ACTION:
                return tok, tok.value, desugar_action(self.action(scope))
            case ChoiceKind.SENTENCE:
                return tok, tok.value, self.sentence_top(scope)
            case ChoiceKind.BINDINGS:
                return tok, tok.value, self.bindings(scope)
        return tok, tok.value, self.pending_map()

    def bindings(self, scope: Scope) -> Bindings:
        self.expect("LBRACE")
        items: List[Tuple[str, TypingUnion[Term, Action]]] = []
        while not self.accept("RBRACE"):
            if items:
                self.expect("COMMA")
            name = self.name()
            self.expect("ARROW")
            if self.accept("LBRACKET"):
                items.append((name, desugar_action(self.action(scope))))
                self.expect("RBRACKET")
            else:
                items.append((name, self.term(scope)))
        return Bindings(tuple(items))

    def pending_map(self) -> "_PendingMap":
        self.expect("LBRACE")
        pending = _PendingMap()
        first = True
        while not self.accept("RBRACE"):
            if not first:
                self.expect("COMMA")
            first = False
            if self.accept("SORT"):
                source = self.name()
                self.expect("ARROW")
                pending.sorts.append((source, self.name()))
            elif self.accept("OP"):
                source_tok = self.expect("IDENT")
                self.expect("ARROW")
                pending.funcs.append((source_tok, self.raw_term()))
            elif self.accept("LABEL"):
                source = self.name()
                self.expect("ARROW")
                self.expect("LBRACKET")
                start = self.pos
                depth = 0
                # 像のアクションは結論のシグネチャで解決するので、トークン範囲だけ覚えておく
                while not (self.at("RBRACKET") and depth == 0):
                    if self.tok.kind == "EOF":
                        self.fail()
                    if self.tok.kind in ("LBRACKET", "TRANS_OPEN"):
                        depth += 1
                    elif self.tok.kind in ("RBRACKET", "TRANS_CLOSE"):
                        depth -= 1
                    self.pos += 1
                pending.labels.append((source, start, self.pos))
                self.expect("RBRACKET")
            else:
                self.fail()
        return pending

    def _resolve_map(self, tok: Token, pending: "_PendingMap", scope: Scope, premises: List[ProofNode],
                     theory_scope: Scope) -> SymbolMap:
        if len(premises) != 1:
            self.ill_formed(tok, "map needs exactly one premise")
        try:
            source_sig, _ = extend_block(theory_scope.signature, premises[0].over)
        except TakError as e:
            self.ill_formed(tok, str(e))
        sort_map = {s: s for s in source_sig.sorts}
        sort_map.update(dict(pending.sorts))
        funcs: List[Tuple[str, Term]] = []
        for source_tok, raw in pending.funcs:
            decl = source_sig.func(source_tok.value)
            if decl is None:
                self.ill_formed(source_tok, f"unknown operation {source_tok.value} in premise signature")
            holes = [sort_map.get(s, s) for s in decl.args]
            funcs.append((decl.name, self.resolve_term(raw, scope, sort_map.get(decl.result), holes)))
        labels: List[Tuple[str, Action]] = []
        resume = self.pos
        for source, start, stop in pending.labels:
            self.pos = start
            image = desugar_action(self.action(scope))
            if self.pos != stop:
                self.fail()
            labels.append((source, image))
        self.pos = resume
        self._expected = set()
        return SymbolMap(tuple(pending.sorts), tuple(funcs), tuple(labels))

    # ---- ブロック ----

    def block(self) -> Block:
        self.expect("LBRACE")
        variables: List[Variable] = []
        while not self.accept("RBRACE"):
            if variables:
                self.expect("COMMA")
            name = self.name()
            self.expect("COLON")
            sort_tok = self.tok
            sort = self.name()
            if self.accept("TILDE"):
                target = self.name()
                if target != sort:
                    self.ill_formed(sort_tok, f"non-diagonal label variable {name}")
                variables.append(Variable(name, sort, True))
            else:
                variables.append(Variable(name, sort))
        return Block(tuple(variables))

    # ---- 文 ----

    def sentence_top(self, scope: Scope) -> Sentence:
        """文を一つ読み、糖衣を展開して整形性を確かめる"""
        start = self.tok
        phi = desugar_sentence(self.sentence(scope), scope.signature.symbols)
        try:
            check_sentence(scope.signature, phi)
        except IllFormed as e:
            self.ill_formed(start, str(e))
        return phi

    def sentence(self, scope: Scope) -> Sentence:
        if self.at("FORALL") or self.at("EXISTS"):
            return self.quantified(scope)
        left = self.disjunction(scope)
        if self.accept("ARROW"):
            return Implies(left, self.sentence(scope))
        if self.accept("IFF"):
            return Iff(left, self.sentence(scope))
        return left

    def quantified(self, scope: Scope) -> Sentence:
        tok = self.tok
        universal = self.accept("FORALL") is not None
        if not universal:
            self.expect("EXISTS")
        block_tok = self.tok
        block = self.block()
        try:
            inner_sig, _ = extend_block(scope.signature, block)
        except (SignatureError, VariableShadowsSymbol) as e:
            self.ill_formed(block_tok, str(e))
        self.expect("DOT")
        body = self.sentence(scope.with_signature(inner_sig))
        return Forall(block, body) if universal else Exists(block, body)

    def disjunction(self, scope: Scope) -> Sentence:
        items = [self.conjunction(scope)]
        while self.accept("OR_OP"):
            items.append(self.conjunction(scope))
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conjunction(self, scope: Scope) -> Sentence:
        items = [self.unary(scope)]
        while self.accept("AND_OP"):
            items.append(self.unary(scope))
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self, scope: Scope) -> Sentence:
        if self.accept("TILDE"):
            return Not(self.unary(scope))
        if self.at("FORALL") or self.at("EXISTS"):
            return self.quantified(scope)
        return self.atom(scope)

    def _sentence_args(self, scope: Scope) -> Tuple[Sentence, ...]:
        self.expect("LPAREN")
        items: List[Sentence] = []
        while not self.accept("RPAREN"):
            if items:
                self.expect("COMMA")
            items.append(self.sentence(scope))
        return tuple(items)

    def _action_pair(self, scope: Scope) -> Tuple[Action, Action]:
        self.expect("LPAREN")
        tok = self.tok
        a1 = self.action(scope)
        self.expect("COMMA")
        a2 = self.action(scope)
        self.expect("RPAREN")
        if a1.sort != a2.sort:
            self.ill_formed(tok, f"actions of sorts {a1.sort} and {a2.sort} cannot be compared")
        return a1, a2

    def atom(self, scope: Scope) -> Sentence:
        tok = self.tok
        if self.accept("LPAREN"):
            phi = self.sentence(scope)
            self.expect("RPAREN")
            return phi
        if self.accept("TRUE"):
            return TRUE
        if self.accept("FALSE"):
            return FALSE
        if self.accept("AND"):
            return And(self._sentence_args(scope))
        if self.accept("OR"):
            return Or(self._sentence_args(scope))
        if self.accept("LE"):
            return Le(*self._action_pair(scope))
        if self.accept("EQV"):
            return Equiv(*self._action_pair(scope))
        if self.accept("AT"):
            name_tok = self.expect("IDENT")
            axiom = scope.axioms.get(name_tok.value)
            if axiom is None:
                self.ill_formed(name_tok, f"unknown axiom {name_tok.value}")
            if scope.theory_signature is None or scope.theory_signature == scope.signature:
                return axiom
            inclusion = GenMorphism.inclusion(scope.theory_signature, scope.signature)
            return translate_sentence(inclusion, axiom)
        if not (self.at("IDENT") or self.at("HOLE")):
            self.fail()
        left = self.term(scope)
        op_tok = self.tok
        if self.accept("EQEQ"):
            right = self.term(scope)
            if left.sort != right.sort:
                self.ill_formed(op_tok, f"equation between sorts {left.sort} and {right.sort}")
            return Eq(left, right)
        self.expect("TRANS_OPEN")
        a = self.action(scope)
        self.expect("TRANS_CLOSE")
        right = self.term(scope)
        if not (left.sort == a.sort == right.sort):
            self.ill_formed(op_tok, f"transition endpoints of sorts {left.sort}, {right.sort} "
                                    f"do not match action sort {a.sort}")
        return Trans(left, a, right)

    # ---- 項 ----

    def raw_term(self) -> _RawTerm:
        if self.at("HOLE"):
            return _RawTerm(self.expect("HOLE"), [])
        tok = self.expect("IDENT")
        args: List[_RawTerm] = []
        if self.accept("LPAREN"):
            args.append(self.raw_term())
            while self.accept("COMMA"):
                args.append(self.raw_term())
            self.expect("RPAREN")
        return _RawTerm(tok, args)

    def resolve_term(self, raw: _RawTerm, scope: Scope, expected: Optional[str] = None,
                     holes: Optional[Sequence[str]] = None) -> Term:
        tok = raw.token
        if tok.kind == "HOLE":
            index = int(tok.value[1:])
            if holes is None:
                self.ill_formed(tok, f"hole {tok.value} outside a morphism image")
            if index >= len(holes):
                self.ill_formed(tok, f"hole {tok.value} out of range")
            return Term.hole(index, holes[index])
        decl = scope.signature.func(tok.value)
        if decl is None:
            self.ill_formed(tok, f"unknown operation {tok.value}")
        if len(raw.args) != decl.arity:
            self.ill_formed(tok, f"{tok.value} expects {decl.arity} arguments, got {len(raw.args)}")
        args = []
        for sort, arg in zip(decl.args, raw.args):
            t = self.resolve_term(arg, scope, sort, holes)
            if t.sort != sort:
                self.ill_formed(arg.token, f"argument of {tok.value} has sort {t.sort}, expected {sort}")
            args.append(t)
        return Term(decl.name, tuple(args), decl.result)

    def term(self, scope: Scope) -> Term:
        return self.resolve_term(self.raw_term(), scope)

    # ---- アクション ----

    def action(self, scope: Scope) -> Action:
        a = self.tight(scope)
        while True:
            tok = self.tok
            if self.accept("UNION"):
                a = self._binary(Union, a, self.tight(scope), tok)
            elif self.accept("PREIMP"):
                a = self._binary(PreImp, a, self.tight(scope), tok)
            elif self.accept("MEET"):
                a = self._binary(Meet, a, self.tight(scope), tok)
            else:
                return a

    def tight(self, scope: Scope) -> Action:
        a = self.postfix(scope)
        while True:
            tok = self.tok
            if self.accept("SEMI"):
                a = self._binary(Comp, a, self.postfix(scope), tok)
            elif self.accept("RESIDUAL"):
                a = self._binary(Residual, a, self.postfix(scope), tok)
            else:
                return a

    def _binary(self, cls, left: Action, right: Action, tok: Token) -> Action:
        if left.sort != right.sort:
            self.ill_formed(tok, f"operands of {tok.value} have sorts {left.sort} and {right.sort}")
        return cls(left, right)

    def postfix(self, scope: Scope) -> Action:
        a = self.primary(scope)
        while True:
            if self.accept("STAR"):
                a = Star(a)
                continue
            tok = self.accept("CARET")
            if tok is None:
                return a
            suffix = tok.value[1:]
            if suffix == "c":
                a = Complement(a)
            elif suffix == "-1":
                a = Converse(a)
            elif suffix == "+":
                a = Plus(a)
            elif suffix == "bot":
                a = Dead(a)
            elif suffix == "top":
                a = Live(a)
            elif suffix.isdigit():
                a = Power(a, int(suffix))
            else:
                self.ill_formed(tok, f"unknown suffix ^{suffix}")

    def primary(self, scope: Scope) -> Action:
        if self.accept("LPAREN"):
            a = self.action(scope)
            self.expect("RPAREN")
            return a
        tok = self.expect("IDENT")
        if tok.value in ("0", "1") and self.accept("LBRACKET"):
            sort_tok = self.tok
            sort = self.name()
            self.expect("RBRACKET")
            if not scope.signature.has_sort(sort):
                self.ill_formed(sort_tok, f"unknown sort {sort}")
            return Zero(sort) if tok.value == "0" else One(sort)
        decl = scope.signature.label(tok.value)
        if decl is not None:
            return Label(decl.name, decl.sort)
        abbreviation = scope.actions.get(tok.value)
        if abbreviation is not None:
            return abbreviation
        self.ill_formed(tok, f"unknown label {tok.value}")


@dataclass
class _PendingMap:
    sorts: List[Tuple[str, str]] = field(default_factory=list)
    funcs: List[Tuple[Token, _RawTerm]] = field(default_factory=list)
    labels: List[Tuple[str, int, int]] = field(default_factory=list)


# ---- 公開関数 ----

def parse(text: str, resolver: Optional[TheoryResolver] = None, path: Optional[str] = None) -> Document:
    """文書を解析する。モデルと証明の use ヘッダは resolver で理論に解決する"""
    return Parser(text, path, resolver).document()


def _parse_kind(text: str, keyword: str, rule: Callable[[Parser], Document],
                resolver: Optional[TheoryResolver], path: Optional[str]) -> Document:
    parser = Parser(text, path, resolver)
    if not parser.at(keyword):
        parser.fail()
    doc = rule(parser)
    parser.expect("EOF")
    return doc


def parse_theory(text: str, path: Optional[str] = None) -> TheoryDoc:
    return _parse_kind(text, "THEORY", Parser.theory, None, path)


def parse_model(text: str, resolver: Optional[TheoryResolver] = None, path: Optional[str] = None) -> ModelDoc:
    return _parse_kind(text, "MODEL", Parser.model, resolver, path)


def parse_proof(text: str, resolver: Optional[TheoryResolver] = None, path: Optional[str] = None) -> ProofDoc:
    """証明文書だけを受け付ける。先頭が proof でなければ構文エラー"""
    return _parse_kind(text, "PROOF", Parser.proof, resolver, path)


def _scope_for(theory: TheoryDoc) -> Scope:
    return Scope(theory.signature, dict(theory.actions), dict(theory.axioms), theory.signature)


def parse_sentence(text: str, theory: TheoryDoc) -> Sentence:
    parser = Parser(text)
    phi = parser.sentence_top(_scope_for(theory))
    parser.expect("EOF")
    return phi


def parse_action(text: str, theory: TheoryDoc) -> Action:
    parser = Parser(text)
    a = desugar_action(parser.action(_scope_for(theory)))
    parser.expect("EOF")
    return a


def parse_term(text: str, theory: TheoryDoc) -> Term:
    parser = Parser(text)
    t = parser.term(_scope_for(theory))
    parser.expect("EOF")
    return t
