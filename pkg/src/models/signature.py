"""
シグネチャと変数ブロックのデータモデル
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple


@dataclass(frozen=True)
class FuncDecl:
    """関数記号の宣言（引数ソート列 → 結果ソート）"""
    name: str
    args: Tuple[str, ...]
    result: str

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class LabelDecl:
    """ラベルの宣言。正しいシグネチャでは source == target"""
    name: str
    source: str
    target: str

    @property
    def sort(self) -> str:
        return self.source


@dataclass(frozen=True)
class Variable:
    """ブロック変数。label が True ならソート対 ⟨sort,sort⟩ のラベル変数"""
    name: str
    sort: str
    label: bool = False


@dataclass(frozen=True)
class Block:
    """変数ブロック（書かれた順序を保持する）"""
    variables: Tuple[Variable, ...] = ()

    @classmethod
    def of(cls, *variables: Variable) -> "Block":
        return cls(tuple(variables))

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.variables)

    def __len__(self) -> int:
        return len(self.variables)

    def __bool__(self) -> bool:
        return bool(self.variables)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def get(self, name: str) -> Optional[Variable]:
        for v in self.variables:
            if v.name == name:
                return v
        return None

    def concat(self, other: "Block") -> "Block":
        return Block(self.variables + other.variables)

    def duplicates(self) -> List[str]:
        seen = set()
        dups = []
        for name in self.names:
            if name in seen and name not in dups:
                dups.append(name)
            seen.add(name)
        return dups


@dataclass(frozen=True)
class Signature:
    """多ソートシグネチャ（ソート・関数記号・ラベル）

    各成分は名前順に並べて保持するので、同じ内容なら常に等しい値になる。
    """
    sorts: Tuple[str, ...] = ()
    funcs: Tuple[FuncDecl, ...] = ()
    labels: Tuple[LabelDecl, ...] = ()

    @classmethod
    def build(cls, sorts: Iterable[str] = (), funcs: Iterable[FuncDecl] = (),
              labels: Iterable[LabelDecl] = ()) -> "Signature":
        """成分を正規の順序に並べてシグネチャを作成（検査はしない）"""
        return cls(
            sorts=tuple(sorted(sorts)),
            funcs=tuple(sorted(funcs, key=lambda f: (f.name, f.args, f.result))),
            labels=tuple(sorted(labels, key=lambda l: (l.name, l.source, l.target))),
        )

    @cached_property
    def _func_table(self) -> Dict[str, FuncDecl]:
        return {f.name: f for f in self.funcs}

    @cached_property
    def _label_table(self) -> Dict[str, LabelDecl]:
        return {l.name: l for l in self.labels}

    @cached_property
    def _sort_set(self) -> FrozenSet[str]:
        return frozenset(self.sorts)

    def func(self, name: str) -> Optional[FuncDecl]:
        return self._func_table.get(name)

    def label(self, name: str) -> Optional[LabelDecl]:
        return self._label_table.get(name)

    def has_sort(self, sort: str) -> bool:
        return sort in self._sort_set

    @cached_property
    def symbols(self) -> FrozenSet[str]:
        """全成分の記号名"""
        return frozenset(self.sorts) | frozenset(self._func_table) | frozenset(self._label_table)

    def extend(self, sorts: Iterable[str] = (), funcs: Iterable[FuncDecl] = (),
               labels: Iterable[LabelDecl] = ()) -> "Signature":
        return Signature.build(self.sorts + tuple(sorts), self.funcs + tuple(funcs),
                               self.labels + tuple(labels))

    def funcs_by_profile(self) -> Dict[Tuple[Tuple[str, ...], str], Tuple[str, ...]]:
        """(引数ソート列, 結果ソート) ごとの関数記号名"""
        table: Dict[Tuple[Tuple[str, ...], str], List[str]] = {}
        for f in self.funcs:
            table.setdefault((f.args, f.result), []).append(f.name)
        return {k: tuple(v) for k, v in table.items()}

    def labels_of_sort(self, sort: str) -> Tuple[LabelDecl, ...]:
        return tuple(l for l in self.labels if l.source == sort)

    def __str__(self) -> str:
        return f"Signature({len(self.sorts)} sorts, {len(self.funcs)} ops, {len(self.labels)} labels)"


def validate_signature(sig: Signature) -> List[str]:
    """シグネチャの不変条件を検査し、違反の一覧を返す（空なら正しい）"""
    report: List[str] = []
    seen: Dict[str, str] = {}

    def claim(name: str, component: str) -> None:
        previous = seen.get(name)
        if previous is None:
            seen[name] = component
        elif previous == component:
            report.append(f"duplicate {component}: {name}")
        else:
            report.append(f"name used as both {previous} and {component}: {name}")

    for s in sig.sorts:
        claim(s, "sort")
    for f in sig.funcs:
        claim(f.name, "op")
        for s in f.args + (f.result,):
            if not sig.has_sort(s):
                report.append(f"undeclared sort {s} in op {f.name}")
    for l in sig.labels:
        claim(l.name, "label")
        for s in (l.source, l.target):
            if not sig.has_sort(s):
                report.append(f"undeclared sort {s} in label {l.name}")
        if l.source != l.target:
            report.append(f"non-diagonal label: {l.name}")
    return report
