"""
有限モデルと TA_k モデル（指定部分代数とスター写像付き）
"""
import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, Mapping, Optional, Tuple, Union as TypingUnion

import numpy as np

from .relation import Relation
from .signature import Signature


Element = int


@dataclass(frozen=True, eq=False)
class FiniteModel:
    """有限モデル

    carriers はソートごとの要素名の列（要素は添字で扱う）。
    tables は関数記号ごとの numpy 配列で、引数の添字の組で引くと結果の添字が得られる
    （定数は 0 次元配列）。relations はラベルごとの関係。
    """
    signature: Signature
    carriers: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)
    tables: Mapping[str, np.ndarray] = field(default_factory=dict)
    relations: Mapping[str, Relation] = field(default_factory=dict)
    name: str = "model"

    def __post_init__(self):
        for table in self.tables.values():
            table.setflags(write=False)

    @classmethod
    def build(cls, signature: Signature, carriers: Mapping[str, Tuple[str, ...]],
              tables: Mapping[str, Mapping[Tuple[Element, ...], Element]],
              relations: Mapping[str, Relation], name: str = "model") -> "FiniteModel":
        """辞書形式の表から numpy の表を作ってモデルを組み立てる（未定義の引数組は 0 へ送る）"""
        arrays: Dict[str, np.ndarray] = {}
        for f in signature.funcs:
            shape = tuple(len(carriers[s]) for s in f.args)
            array = np.zeros(shape, dtype=np.int64)
            for args, value in tables.get(f.name, {}).items():
                array[tuple(args)] = value
            arrays[f.name] = array
        return cls(signature, dict(carriers), arrays, dict(relations), name)

    def size(self, sort: str) -> int:
        return len(self.carriers[sort])

    def sizes(self) -> Tuple[int, ...]:
        return tuple(self.size(s) for s in self.signature.sorts)

    def element(self, sort: str, name: str) -> Optional[Element]:
        try:
            return self.carriers[sort].index(name)
        except ValueError:
            return None

    def element_name(self, sort: str, index: Element) -> str:
        return self.carriers[sort][index]

    def apply(self, func: str, args: Tuple[Element, ...]) -> Element:
        return int(self.tables[func][args])

    def relation(self, label: str) -> Relation:
        return self.relations[label]

    def table_entries(self, func: str) -> Iterator[Tuple[Tuple[Element, ...], Element]]:
        """関数表の (引数組, 値) を辞書順に列挙"""
        decl = self.signature.func(func)
        ranges = [range(self.size(s)) for s in decl.args]
        for args in itertools.product(*ranges):
            yield args, self.apply(func, args)

    def diff(self, other: "FiniteModel") -> Optional[str]:
        """最初に異なる成分の名前（同じなら None）"""
        if self.signature != other.signature:
            return "signature"
        for s in self.signature.sorts:
            if self.carriers[s] != other.carriers[s]:
                return f"carrier {s}"
        for f in self.signature.funcs:
            if not np.array_equal(self.tables[f.name], other.tables[f.name]):
                return f"op {f.name}"
        for l in self.signature.labels:
            if self.relations[l.name] != other.relations[l.name]:
                return f"label {l.name}"
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteModel):
            return NotImplemented
        return self.diff(other) is None

    def __hash__(self) -> int:
        return hash((self.signature, self.sizes()))


# ---- 指定部分代数 ----

class FullAlgebra:
    """台集合上の全関係（冪集合代数）と反射推移閉包のスター"""

    listed = False

    def __init__(self, size: int):
        self.size = size

    def __contains__(self, r: Relation) -> bool:
        return r.size == self.size

    def __len__(self) -> int:
        return 2 ** (self.size * self.size)

    def members(self) -> Iterator[Relation]:
        for bits in range(len(self)):
            yield Relation.from_bits(self.size, bits)

    def star(self, r: Relation) -> Relation:
        return r.star()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FullAlgebra) and other.size == self.size

    def __hash__(self) -> int:
        return hash(("full", self.size))


class ListedAlgebra:
    """明示的に列挙された関係の集合と、その上のスター写像"""

    listed = True

    def __init__(self, size: int, members: FrozenSet[Relation], star_map: Mapping[Relation, Relation]):
        self.size = size
        self._members = frozenset(members)
        self.star_map = dict(star_map)

    def __contains__(self, r: Relation) -> bool:
        return r in self._members

    def __len__(self) -> int:
        return len(self._members)

    def members(self) -> Iterator[Relation]:
        """ビット表現の昇順で列挙（決定的な順序）"""
        return iter(sorted(self._members, key=Relation.bits))

    def star(self, r: Relation) -> Relation:
        image = self.star_map.get(r)
        if image is None:
            raise KeyError(r)
        return image

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ListedAlgebra) and other._members == self._members
                and other.star_map == self.star_map)

    def __hash__(self) -> int:
        return hash(self._members)


Algebra = TypingUnion[FullAlgebra, ListedAlgebra]


@dataclass(frozen=True, eq=False)
class KleeneModel:
    """TA_k モデル：有限モデルとソートごとの指定部分代数"""
    base: FiniteModel
    algebras: Mapping[str, Algebra] = field(default_factory=dict)

    @property
    def signature(self) -> Signature:
        return self.base.signature

    @property
    def name(self) -> str:
        return self.base.name

    def algebra(self, sort: str) -> Algebra:
        return self.algebras[sort]

    def diff(self, other: "KleeneModel") -> Optional[str]:
        found = self.base.diff(other.base)
        if found is not None:
            return found
        for s in self.signature.sorts:
            if self.algebras[s] != other.algebras[s]:
                return f"algebra {s}"
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KleeneModel):
            return NotImplemented
        return self.diff(other) is None

    def __hash__(self) -> int:
        return hash(self.base)


AnyModel = TypingUnion[FiniteModel, KleeneModel]


def standard_kleene(m: FiniteModel) -> KleeneModel:
    """全関係の代数と反射推移閉包のスターを備えた標準 TA_k モデル"""
    return KleeneModel(m, {s: FullAlgebra(m.size(s)) for s in m.signature.sorts})


def plain_model(m: AnyModel) -> FiniteModel:
    return m.base if isinstance(m, KleeneModel) else m
