"""
文書と構文値の整形出力（parse の逆）
"""
from typing import List

from ..models.documents import CospanDoc, ModelDoc, Renaming, TheoryDoc
from ..models.model import FiniteModel, FullAlgebra, KleeneModel
from ..models.proof import Bindings, ProofDoc, ProofNode, SymbolMap
from ..models.relation import Relation
from ..models.signature import Block, Signature
from ..models.syntax import (
    Action, And, Comp, Complement, Converse, Dead, Eq, Equiv, Exists, Forall, Iff, Implies,
    Label, Le, Live, Meet, Not, One, Or, Plus, Power, PreImp, Residual, Sentence, Star, Term,
    Trans, Union, Zero,
)


INDENT = "  "


# ---- 項・アクション ----

def pretty_term(t: Term) -> str:
    if not t.args:
        return t.symbol
    return f"{t.symbol}({', '.join(pretty_term(a) for a in t.args)})"


_LOOSE, _TIGHT, _POSTFIX = 0, 1, 2

_BINARY = {Union: ("U", _LOOSE), PreImp: ("-o", _LOOSE), Meet: ("cap", _LOOSE),
           Comp: (";", _TIGHT), Residual: ("|>", _TIGHT)}

_SUFFIX = {Star: "*", Complement: "^c", Converse: "^-1", Plus: "^+", Dead: "^bot", Live: "^top"}


def _action_level(a: Action) -> int:
    entry = _BINARY.get(type(a))
    return _POSTFIX if entry is None else entry[1]


def pretty_action(a: Action, min_level: int = _LOOSE) -> str:
    if _action_level(a) < min_level:
        return f"({pretty_action(a)})"
    match a:
        case Label(name=name):
            return name
        case Zero(sort=s):
            return f"0[{s}]"
        case One(sort=s):
            return f"1[{s}]"
        case Power(body=b, exponent=n):
            return f"{pretty_action(b, _POSTFIX)}^{n}"
    suffix = _SUFFIX.get(type(a))
    if suffix is not None:
        return pretty_action(a.body, _POSTFIX) + suffix
    symbol, level = _BINARY[type(a)]
    return f"{pretty_action(a.left, level)} {symbol} {pretty_action(a.right, level + 1)}"


# ---- 文 ----

_QUANT, _IMP, _OR, _AND, _ATOM = 0, 1, 2, 3, 4


def _sentence_level(phi: Sentence) -> int:
    match phi:
        case Exists() | Forall():
            return _QUANT
        case Implies() | Iff():
            return _IMP
        case Or(items=items):
            return _OR if len(items) >= 2 else _ATOM
        case And(items=items):
            return _AND if len(items) >= 2 else _ATOM
    return _ATOM


def pretty_block(block: Block) -> str:
    parts = [f"{v.name}:{v.sort}~{v.sort}" if v.label else f"{v.name}:{v.sort}" for v in block]
    return "{" + ", ".join(parts) + "}"


def pretty_sentence(phi: Sentence, min_level: int = _QUANT) -> str:
    if _sentence_level(phi) < min_level:
        return f"({pretty_sentence(phi)})"
    match phi:
        case Eq(left=l, right=r):
            return f"{pretty_term(l)} == {pretty_term(r)}"
        case Trans(source=s, action=a, target=t):
            return f"{pretty_term(s)} =[{pretty_action(a)}]=> {pretty_term(t)}"
        case Implies(premise=p, conclusion=c):
            return f"{pretty_sentence(p, _OR)} -> {pretty_sentence(c, _QUANT)}"
        case Iff(left=l, right=r):
            return f"{pretty_sentence(l, _OR)} <-> {pretty_sentence(r, _OR)}"
        case Or(items=()):
            return "false"
        case And(items=()):
            return "true"
        case Or(items=(only,)):
            return f"or({pretty_sentence(only)})"
        case And(items=(only,)):
            return f"and({pretty_sentence(only)})"
        case Or(items=items):
            return " \\/ ".join(pretty_sentence(i, _AND) for i in items)
        case And(items=items):
            return " /\\ ".join(pretty_sentence(i, _ATOM) for i in items)
        case Exists(block=block, body=body):
            return f"exists {pretty_block(block)} . {pretty_sentence(body)}"
        case Forall(block=block, body=body):
            return f"forall {pretty_block(block)} . {pretty_sentence(body)}"
        case Not(body=body):
            return f"~{pretty_sentence(body, _ATOM)}"
        case Le(left=l, right=r):
            return f"le({pretty_action(l)}, {pretty_action(r)})"
        case Equiv(left=l, right=r):
            return f"eqv({pretty_action(l)}, {pretty_action(r)})"
    raise TypeError(f"not a sentence: {phi!r}")


def _sentences(items) -> str:
    return ", ".join(pretty_sentence(phi) for phi in items)


# ---- 理論 ----

def pretty_signature_lines(sig: Signature) -> List[str]:
    lines = [f"{INDENT}sorts {' '.join(sig.sorts)}"] if sig.sorts else []
    for f in sig.funcs:
        args = " ".join(f.args)
        lines.append(f"{INDENT}op {f.name} : {args + ' ' if args else ''}-> {f.result}")
    for l in sig.labels:
        lines.append(f"{INDENT}label {l.name} : {l.source}~{l.target}")
    return lines


def pretty_theory(doc: TheoryDoc) -> str:
    lines = [f"theory {doc.name}"]
    lines.extend(pretty_signature_lines(doc.signature))
    for name, a in doc.actions:
        lines.append(f"{INDENT}action {name} = {pretty_action(a)}")
    for name, phi in doc.axioms:
        lines.append(f"{INDENT}axiom {name} : {pretty_sentence(phi)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


# ---- モデル ----

def pretty_relation(m: FiniteModel, sort: str, r: Relation) -> str:
    names = m.carriers[sort]
    return "{" + ", ".join(f"({names[i]},{names[j]})" for i, j in sorted(r.pairs())) + "}"


def pretty_model(doc: ModelDoc) -> str:
    k = doc.model if isinstance(doc.model, KleeneModel) else None
    m = doc.model.base if k is not None else doc.model
    sig = m.signature
    lines = [f"model {doc.name} use {doc.theory}"]
    for s in sig.sorts:
        lines.append(f"{INDENT}carrier {s} = {' '.join(m.carriers[s])}")
    for f in sig.funcs:
        for args, value in m.table_entries(f.name):
            result = m.element_name(f.result, value)
            if not args:
                lines.append(f"{INDENT}op {f.name} = {result}")
                continue
            arg_names = ", ".join(m.element_name(s, i) for s, i in zip(f.args, args))
            lines.append(f"{INDENT}op {f.name}({arg_names}) = {result}")
    for l in sig.labels:
        lines.append(f"{INDENT}label {l.name} = {pretty_relation(m, l.sort, m.relation(l.name))}")
    if k is not None:
        for s in sig.sorts:
            algebra = k.algebra(s)
            if isinstance(algebra, FullAlgebra):
                lines.append(f"{INDENT}algebra {s} = full")
                continue
            members = list(algebra.members())
            inner = ", ".join(pretty_relation(m, s, r) for r in members)
            lines.append(f"{INDENT}algebra {s} = {{{inner}}}")
            for r in members:
                lines.append(f"{INDENT}star {s} {pretty_relation(m, s, r)} = "
                             f"{pretty_relation(m, s, algebra.star(r))}")
    lines.append("end")
    return "\n".join(lines) + "\n"


# ---- 証明 ----

def _choice(value) -> str:
    if isinstance(value, bool):
        raise TypeError("boolean choice")
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, Term):
        return pretty_term(value)
    if isinstance(value, Action):
        return pretty_action(value)
    if isinstance(value, Sentence):
        return pretty_sentence(value)
    if isinstance(value, Bindings):
        parts = []
        for name, image in value.items:
            text = pretty_term(image) if isinstance(image, Term) else f"[{pretty_action(image)}]"
            parts.append(f"{name} -> {text}")
        return "{" + ", ".join(parts) + "}"
    if isinstance(value, SymbolMap):
        parts = [f"sort {a} -> {b}" for a, b in value.sorts]
        parts += [f"op {a} -> {pretty_term(b)}" for a, b in value.funcs]
        parts += [f"label {a} -> [{pretty_action(b)}]" for a, b in value.labels]
        return "{" + ", ".join(parts) + "}"
    raise TypeError(f"unknown choice value {value!r}")


def pretty_node(node: ProofNode, depth: int = 0) -> str:
    pad = INDENT * depth
    head = node.rule
    if node.over:
        head += f" over {pretty_block(node.over)}"
    left = _sentences(node.left)
    right = _sentences(node.right)
    head += f" {left} |-" if left else " |-"
    if right:
        head += f" {right}"
    if node.choices:
        head += " with " + ", ".join(f"{k} = {_choice(v)}" for k, v in node.choices)
    if not node.premises:
        return pad + head
    children = [pretty_node(p, depth + 1) for p in node.premises]
    body = ";\n".join(children)
    return f"{pad}{head} {{\n{body}\n{pad}}}"


def pretty_proof(doc: ProofDoc) -> str:
    lines = [f"proof {doc.name}", f"{INDENT}use {doc.theory}",
             f"{INDENT}mode {doc.mode.value}", f"{INDENT}rules {doc.ruleset.value}"]
    lines.append(pretty_node(doc.root, 1))
    lines.append("end")
    return "\n".join(lines) + "\n"


# ---- 余スパン ----

def _renaming(r: Renaming) -> str:
    parts = [f"sort {a} -> {b}" for a, b in r.sorts]
    parts += [f"op {a} -> {b}" for a, b in r.funcs]
    parts += [f"label {a} -> {b}" for a, b in r.labels]
    return "{" + ", ".join(parts) + "}"


def pretty_cospan(doc: CospanDoc) -> str:
    lines = [f"cospan {doc.name}", f"{INDENT}base {doc.base}",
             f"{INDENT}left {doc.left} {_renaming(doc.left_map)}",
             f"{INDENT}right {doc.right} {_renaming(doc.right_map)}", "end"]
    return "\n".join(lines) + "\n"


def pretty(x) -> str:
    """文書または構文値を整形する"""
    if isinstance(x, TheoryDoc):
        return pretty_theory(x)
    if isinstance(x, ModelDoc):
        return pretty_model(x)
    if isinstance(x, ProofDoc):
        return pretty_proof(x)
    if isinstance(x, CospanDoc):
        return pretty_cospan(x)
    if isinstance(x, ProofNode):
        return pretty_node(x)
    if isinstance(x, Block):
        return pretty_block(x)
    if isinstance(x, Term):
        return pretty_term(x)
    if isinstance(x, Action):
        return pretty_action(x)
    if isinstance(x, Sentence):
        return pretty_sentence(x)
    raise TypeError(f"cannot pretty-print {type(x).__name__}")
