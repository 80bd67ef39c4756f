"""
一般化シグネチャ射と代入のデータモデル
"""
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

from .signature import Block, Signature
from .syntax import Action, Label, Term


@dataclass(frozen=True)
class GenMorphism:
    """一般化シグネチャ射 χ: source → target

    関数記号の像は穴 ?0..?n-1 を含む target 上の項、ラベルの像は target 上のアクション。
    対応表は構築後に変更しない。
    """
    source: Signature
    target: Signature
    sort_map: Mapping[str, str] = field(default_factory=dict, hash=False)
    func_map: Mapping[str, Term] = field(default_factory=dict, hash=False)
    label_map: Mapping[str, Action] = field(default_factory=dict, hash=False)

    @classmethod
    def identity(cls, sig: Signature) -> "GenMorphism":
        return cls.inclusion(sig, sig)

    @classmethod
    def inclusion(cls, source: Signature, target: Signature) -> "GenMorphism":
        """source の記号をそれぞれ同名の記号へ送る射"""
        return cls(
            source=source,
            target=target,
            sort_map={s: s for s in source.sorts},
            func_map={f.name: Term(f.name, tuple(Term.hole(i, s) for i, s in enumerate(f.args)), f.result)
                      for f in source.funcs},
            label_map={l.name: Label(l.name, l.source) for l in source.labels},
        )

    @classmethod
    def plain(cls, source: Signature, target: Signature, sorts: Mapping[str, str],
              funcs: Mapping[str, str], labels: Mapping[str, str]) -> "GenMorphism":
        """記号を記号へ送る通常の射を名前の対応から作成"""
        func_map: Dict[str, Term] = {}
        for f in source.funcs:
            image = funcs.get(f.name, f.name)
            result = sorts.get(f.result, f.result)
            func_map[f.name] = Term(image, tuple(Term.hole(i, sorts.get(s, s)) for i, s in enumerate(f.args)),
                                    result)
        label_map: Dict[str, Action] = {
            l.name: Label(labels.get(l.name, l.name), sorts.get(l.source, l.source)) for l in source.labels
        }
        return cls(source, target, {s: sorts.get(s, s) for s in source.sorts}, func_map, label_map)

    @property
    def is_plain(self) -> bool:
        """像がすべて単一の記号か"""
        for name, image in self.func_map.items():
            decl = self.source.func(name)
            if decl is None or image.is_hole:
                return False
            if any(not a.is_hole or a.hole_index != i for i, a in enumerate(image.args)):
                return False
        return all(isinstance(a, Label) for a in self.label_map.values())

    def sort_image(self, sort: str) -> Optional[str]:
        return self.sort_map.get(sort)

    def func_symbol(self, name: str) -> Optional[str]:
        """通常の射で関数記号 name の像の記号名"""
        image = self.func_map.get(name)
        return None if image is None else image.symbol

    def label_symbol(self, name: str) -> Optional[str]:
        image = self.label_map.get(name)
        return image.name if isinstance(image, Label) else None

    def same_maps(self, other: "GenMorphism") -> bool:
        return (self.source == other.source and self.target == other.target
                and dict(self.sort_map) == dict(other.sort_map)
                and dict(self.func_map) == dict(other.func_map)
                and dict(self.label_map) == dict(other.label_map))


@dataclass(frozen=True)
class Substitution:
    """代入 θ: X → Y（Σ 上では恒等）

    terms は一階変数の像、actions はラベル変数の像。
    """
    base: Signature
    domain: Block
    codomain: Block = Block()
    terms: Mapping[str, Term] = field(default_factory=dict, hash=False)
    actions: Mapping[str, Action] = field(default_factory=dict, hash=False)

    def image_of(self, name: str):
        if name in self.terms:
            return self.terms[name]
        return self.actions.get(name)
