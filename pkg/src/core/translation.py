"""
シグネチャ射による翻訳・合成・ブロック拡張・代入・整形性検査
"""
import logging
from typing import Collection, Dict, Iterable, List, Optional, Sequence, Tuple, Union as TypingUnion

from ..models.morphism import GenMorphism, Substitution
from ..models.signature import Block, FuncDecl, LabelDecl, Signature, Variable
from ..models.syntax import (
    Action, And, Eq, Exists, Forall, Implies, Label, One, Or,
    Sentence, Term, Trans, Zero, with_children,
)
from .errors import CaptureError, IllFormed, MorphismError, SignatureError, VariableShadowsSymbol


logger = logging.getLogger(__name__)

Translatable = TypingUnion[Term, Action, str]


def fresh_name(base: str, taken: Collection[str]) -> str:
    """taken に含まれない名前を base から作る"""
    if base not in taken:
        return base
    counter = 1
    while f"{base}_{counter}" in taken:
        counter += 1
    return f"{base}_{counter}"


# ---- ブロック拡張 ----

def extend_block(sig: Signature, block: Block) -> Tuple[Signature, GenMorphism]:
    """Σ^D[X] とその包含射を返す"""
    if not block:
        return sig, GenMorphism.identity(sig)
    duplicates = block.duplicates()
    if duplicates:
        raise SignatureError(f"duplicate variable in block: {duplicates[0]}")
    funcs: List[FuncDecl] = []
    labels: List[LabelDecl] = []
    for v in block:
        if not sig.has_sort(v.sort):
            raise SignatureError(f"unknown sort {v.sort} for variable {v.name}")
        if v.name in sig.symbols:
            raise VariableShadowsSymbol(v.name)
        if v.label:
            labels.append(LabelDecl(v.name, v.sort, v.sort))
        else:
            funcs.append(FuncDecl(v.name, (), v.sort))
    extended = sig.extend(funcs=funcs, labels=labels)
    return extended, GenMorphism.inclusion(sig, extended)


# ---- Kleisli 拡張 ----

def _sort(chi: GenMorphism, sort: str) -> str:
    image = chi.sort_map.get(sort)
    if image is None:
        raise MorphismError(f"unmapped symbol: sort {sort}")
    return image


def instantiate(template: Term, args: Sequence[Term]) -> Term:
    """穴 ?i を args[i] で埋める"""
    if template.is_hole:
        index = template.hole_index
        if index >= len(args):
            raise MorphismError(f"hole {template.symbol} out of range")
        return args[index]
    if not template.args:
        return template
    return Term(template.symbol, tuple(instantiate(a, args) for a in template.args), template.sort)


def _extend_term(chi: GenMorphism, t: Term) -> Term:
    if t.is_hole:
        # 合成時の像（穴を含む項）はそのまま通す
        return Term(t.symbol, (), _sort(chi, t.sort))
    image = chi.func_map.get(t.symbol)
    if image is None:
        raise MorphismError(f"unmapped symbol: {t.symbol}")
    return instantiate(image, [_extend_term(chi, a) for a in t.args])


def _extend_action(chi: GenMorphism, a: Action) -> Action:
    match a:
        case Label(name=name):
            image = chi.label_map.get(name)
            if image is None:
                raise MorphismError(f"unmapped symbol: {name}")
            return image
        case Zero(sort=s):
            return Zero(_sort(chi, s))
        case One(sort=s):
            return One(_sort(chi, s))
    return with_children(a, tuple(_extend_action(chi, c) for c in a.children()))


def kleisli_extend(chi: GenMorphism, x: Translatable) -> Translatable:
    """T_χ: ソート・項・アクションを χ の像へ翻訳する"""
    if isinstance(x, str):
        return _sort(chi, x)
    if isinstance(x, Term):
        return _extend_term(chi, x)
    return _extend_action(chi, x)


def compose(chi2: GenMorphism, chi1: GenMorphism) -> GenMorphism:
    """Kleisli 合成 χ2 ∘ χ1"""
    if chi1.target != chi2.source:
        raise MorphismError("signature mismatch: target of the first morphism is not the source of the second")
    return GenMorphism(
        source=chi1.source,
        target=chi2.target,
        sort_map={s: _sort(chi2, t) for s, t in chi1.sort_map.items()},
        func_map={f: _extend_term(chi2, image) for f, image in chi1.func_map.items()},
        label_map={l: _extend_action(chi2, image) for l, image in chi1.label_map.items()},
    )


# ---- 文の翻訳 ----

def _lift_over_block(chi: GenMorphism, block: Block) -> Tuple[GenMorphism, Block]:
    """χ^D[X] と翻訳後のブロック χ_D(X) を作る

    束縛変数が target の記号と衝突する場合は新しい名前に付け替える。
    """
    taken = set(chi.target.symbols)
    renamed: List[Variable] = []
    for v in block:
        name = fresh_name(v.name, taken)
        taken.add(name)
        renamed.append(Variable(name, _sort(chi, v.sort), v.label))
    new_block = Block(tuple(renamed))
    source_ext, _ = extend_block(chi.source, block)
    target_ext, _ = extend_block(chi.target, new_block)
    func_map = dict(chi.func_map)
    label_map = dict(chi.label_map)
    for old, new in zip(block, new_block):
        if old.label:
            label_map[old.name] = Label(new.name, new.sort)
        else:
            func_map[old.name] = Term(new.name, (), new.sort)
    lifted = GenMorphism(source_ext, target_ext, dict(chi.sort_map), func_map, label_map)
    return lifted, new_block


def translate_sentence(chi: GenMorphism, phi: Sentence) -> Sentence:
    """文の翻訳 Sen(χ)"""
    match phi:
        case Eq(left=l, right=r):
            return Eq(_extend_term(chi, l), _extend_term(chi, r))
        case Trans(source=s, action=a, target=t):
            return Trans(_extend_term(chi, s), _extend_action(chi, a), _extend_term(chi, t))
        case Implies(premise=p, conclusion=c):
            return Implies(translate_sentence(chi, p), translate_sentence(chi, c))
        case Or(items=items):
            return Or(tuple(translate_sentence(chi, i) for i in items))
        case And(items=items):
            return And(tuple(translate_sentence(chi, i) for i in items))
        case Exists(block=block, body=body):
            lifted, new_block = _lift_over_block(chi, block)
            return Exists(new_block, translate_sentence(lifted, body))
        case Forall(block=block, body=body):
            lifted, new_block = _lift_over_block(chi, block)
            return Forall(new_block, translate_sentence(lifted, body))
    raise MorphismError(f"cannot translate {type(phi).__name__}; desugar it first")


def translate_all(chi: GenMorphism, sentences: Iterable[Sentence]) -> Tuple[Sentence, ...]:
    return tuple(translate_sentence(chi, phi) for phi in sentences)


# ---- 代入 ----

def substitution_morphism(theta: Substitution) -> GenMorphism:
    """θ: X → Y を Σ^D[X] → Σ^D[Y] の一般化射として返す"""
    source, _ = extend_block(theta.base, theta.domain)
    target, inclusion = extend_block(theta.base, theta.codomain)
    func_map = {f.name: inclusion.func_map[f.name] for f in theta.base.funcs}
    label_map = {l.name: inclusion.label_map[l.name] for l in theta.base.labels}
    for v in theta.domain:
        image = theta.image_of(v.name)
        if image is None:
            raise MorphismError(f"unmapped symbol: {v.name}")
        if v.label:
            if not isinstance(image, Action):
                raise MorphismError(f"label variable {v.name} needs an action image")
            if check_action(target, image) != v.sort:
                raise MorphismError(f"image of {v.name} has the wrong sort")
            label_map[v.name] = image
        else:
            if not isinstance(image, Term):
                raise MorphismError(f"variable {v.name} needs a term image")
            if check_term(target, image) != v.sort:
                raise MorphismError(f"image of {v.name} has the wrong sort")
            func_map[v.name] = image
    return GenMorphism(source, target, {s: s for s in theta.base.sorts}, func_map, label_map)


def apply_substitution(theta: Substitution, x):
    """代入の適用（束縛変数は翻訳時に付け替えられるので捕獲は起こらない）"""
    chi = substitution_morphism(theta)
    if isinstance(x, Sentence):
        result = translate_sentence(chi, x)
        free = set(chi.target.symbols)
        for t in _bound_names(result):
            if t in free:
                raise CaptureError(f"bound variable {t} captured after renaming")
        return result
    return kleisli_extend(chi, x)


def _bound_names(phi: Sentence) -> Iterable[str]:
    match phi:
        case Exists(block=block, body=body) | Forall(block=block, body=body):
            yield from block.names
            yield from _bound_names(body)
        case Implies(premise=p, conclusion=c):
            yield from _bound_names(p)
            yield from _bound_names(c)
        case Or(items=items) | And(items=items):
            for item in items:
                yield from _bound_names(item)


# ---- α 正規形 ----

def canonical(phi: Sentence) -> Sentence:
    """束縛変数を深さと位置による名前 %d.i に付け替えた正規形"""
    return _canonical(phi, {}, 0)


def _rename_term(t: Term, env: Dict[str, str]) -> Term:
    if not t.args:
        name = env.get(t.symbol)
        return t if name is None else Term(name, (), t.sort)
    return Term(t.symbol, tuple(_rename_term(a, env) for a in t.args), t.sort)


def _rename_action(a: Action, env: Dict[str, str]) -> Action:
    if isinstance(a, Label):
        name = env.get(a.name)
        return a if name is None else Label(name, a.sort)
    if not a.children():
        return a
    return with_children(a, tuple(_rename_action(c, env) for c in a.children()))


def _canonical(phi: Sentence, env: Dict[str, str], depth: int) -> Sentence:
    match phi:
        case Eq(left=l, right=r):
            return Eq(_rename_term(l, env), _rename_term(r, env))
        case Trans(source=s, action=a, target=t):
            return Trans(_rename_term(s, env), _rename_action(a, env), _rename_term(t, env))
        case Implies(premise=p, conclusion=c):
            return Implies(_canonical(p, env, depth), _canonical(c, env, depth))
        case Or(items=items):
            return Or(tuple(_canonical(i, env, depth) for i in items))
        case And(items=items):
            return And(tuple(_canonical(i, env, depth) for i in items))
        case Exists(block=block, body=body) | Forall(block=block, body=body):
            inner = dict(env)
            renamed = []
            for i, v in enumerate(block):
                name = f"%{depth}.{i}"
                inner[v.name] = name
                renamed.append(Variable(name, v.sort, v.label))
            new_block = Block(tuple(renamed))
            new_body = _canonical(body, inner, depth + 1)
            return Exists(new_block, new_body) if isinstance(phi, Exists) else Forall(new_block, new_body)
    raise IllFormed(f"cannot canonicalize {type(phi).__name__}")


def alpha_equal(a: Sentence, b: Sentence) -> bool:
    return canonical(a) == canonical(b)


# ---- 整形性検査 ----

def check_term(sig: Signature, t: Term, holes: Optional[Sequence[str]] = None) -> str:
    """項が sig 上で整形なら結果ソートを返す"""
    if t.is_hole:
        if holes is None:
            raise IllFormed(f"hole {t.symbol} outside a morphism image")
        index = t.hole_index
        if index >= len(holes):
            raise IllFormed(f"hole {t.symbol} out of range")
        if holes[index] != t.sort:
            raise IllFormed(f"hole {t.symbol} has sort {t.sort}, expected {holes[index]}")
        return t.sort
    decl = sig.func(t.symbol)
    if decl is None:
        raise IllFormed(f"unknown operation {t.symbol}")
    if len(decl.args) != len(t.args):
        raise IllFormed(f"{t.symbol} expects {len(decl.args)} arguments, got {len(t.args)}")
    for expected, arg in zip(decl.args, t.args):
        got = check_term(sig, arg, holes)
        if got != expected:
            raise IllFormed(f"argument of {t.symbol} has sort {got}, expected {expected}")
    if t.sort != decl.result:
        raise IllFormed(f"{t.symbol} annotated with sort {t.sort}, declared {decl.result}")
    return decl.result


def check_action(sig: Signature, a: Action) -> str:
    """アクションが sig 上で整形ならソートを返す"""
    match a:
        case Label(name=name, sort=s):
            decl = sig.label(name)
            if decl is None:
                raise IllFormed(f"unknown label {name}")
            if decl.source != s:
                raise IllFormed(f"label {name} annotated with sort {s}, declared {decl.source}")
            return s
        case Zero(sort=s) | One(sort=s):
            if not sig.has_sort(s):
                raise IllFormed(f"unknown sort {s}")
            return s
    sorts = [check_action(sig, c) for c in a.children()]
    if len(set(sorts)) > 1:
        raise IllFormed(f"operands of {type(a).__name__} have different sorts {sorts[0]} and {sorts[1]}")
    return sorts[0]


def check_sentence(sig: Signature, phi: Sentence) -> None:
    """文が sig 上で整形でなければ IllFormed を送出"""
    match phi:
        case Eq(left=l, right=r):
            ls, rs = check_term(sig, l), check_term(sig, r)
            if ls != rs:
                raise IllFormed(f"equation between sorts {ls} and {rs}")
        case Trans(source=s, action=a, target=t):
            sorts = {check_term(sig, s), check_action(sig, a), check_term(sig, t)}
            if len(sorts) != 1:
                raise IllFormed("transition endpoints do not match the action's sort")
        case Implies(premise=p, conclusion=c):
            check_sentence(sig, p)
            check_sentence(sig, c)
        case Or(items=items) | And(items=items):
            for item in items:
                check_sentence(sig, item)
        case Exists(block=block, body=body) | Forall(block=block, body=body):
            try:
                extended, _ = extend_block(sig, block)
            except (SignatureError, VariableShadowsSymbol) as e:
                raise IllFormed(str(e)) from e
            check_sentence(extended, body)
        case _:
            raise IllFormed(f"{type(phi).__name__} is not a core sentence")


def check_morphism(chi: GenMorphism) -> List[str]:
    """一般化射の整形性（プロファイルの保存）を検査し違反の一覧を返す"""
    report: List[str] = []
    for s in chi.source.sorts:
        image = chi.sort_map.get(s)
        if image is None:
            report.append(f"unmapped symbol: sort {s}")
        elif not chi.target.has_sort(image):
            report.append(f"sort {s} mapped to unknown sort {image}")
    if report:
        return report
    for f in chi.source.funcs:
        image = chi.func_map.get(f.name)
        if image is None:
            report.append(f"unmapped symbol: {f.name}")
            continue
        holes = [chi.sort_map[s] for s in f.args]
        try:
            got = check_term(chi.target, image, holes)
        except IllFormed as e:
            report.append(f"image of {f.name}: {e}")
            continue
        if got != chi.sort_map[f.result]:
            report.append(f"image of {f.name} has sort {got}, expected {chi.sort_map[f.result]}")
    for l in chi.source.labels:
        image = chi.label_map.get(l.name)
        if image is None:
            report.append(f"unmapped symbol: {l.name}")
            continue
        try:
            got = check_action(chi.target, image)
        except IllFormed as e:
            report.append(f"image of {l.name}: {e}")
            continue
        if got != chi.sort_map[l.source]:
            report.append(f"image of {l.name} has sort {got}, expected {chi.sort_map[l.source]}")
    return report
