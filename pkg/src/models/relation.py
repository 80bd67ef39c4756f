"""
有限台集合上の二項関係（numpy の bool 正方行列）
"""
from typing import Iterable, Iterator, Tuple

import numpy as np


class Relation:
    """n×n の bool 行列で表した関係。生成後は書き換えない"""

    __slots__ = ("_matrix",)

    def __init__(self, matrix: np.ndarray):
        m = np.array(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"relation matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        self._matrix = m

    # ---- 生成 ----

    @classmethod
    def empty(cls, n: int) -> "Relation":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> "Relation":
        m = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            m[i, j] = True
        return cls(m)

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "Relation":
        """行優先で i*n+j ビット目が (i,j) を表す整数から作る"""
        flat = np.array([(bits >> k) & 1 for k in range(n * n)], dtype=bool)
        return cls(flat.reshape((n, n)))

    # ---- 参照 ----

    @property
    def size(self) -> int:
        return self._matrix.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def pairs(self) -> Iterator[Tuple[int, int]]:
        for i, j in zip(*np.nonzero(self._matrix)):
            yield int(i), int(j)

    def successors(self, i: int) -> Tuple[int, ...]:
        return tuple(int(j) for j in np.nonzero(self._matrix[i])[0])

    def bits(self) -> int:
        value = 0
        for k, bit in enumerate(self._matrix.flatten()):
            if bit:
                value |= 1 << k
        return value

    def __contains__(self, pair: Tuple[int, int]) -> bool:
        i, j = pair
        return bool(self._matrix[i, j])

    def __len__(self) -> int:
        return int(self._matrix.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self._matrix.shape == other._matrix.shape and bool(np.array_equal(self._matrix, other._matrix))

    def __hash__(self) -> int:
        return hash((self.size, self._matrix.tobytes()))

    def __repr__(self) -> str:
        return f"Relation({self.size}, {sorted(self.pairs())})"

    # ---- 演算 ----

    def _check(self, other: "Relation") -> None:
        if other.size != self.size:
            raise ValueError(f"relations over carriers of size {self.size} and {other.size}")

    def union(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self._matrix | other._matrix)

    def intersection(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self._matrix & other._matrix)

    def complement(self) -> "Relation":
        return Relation(~self._matrix)

    def converse(self) -> "Relation":
        return Relation(self._matrix.T)

    def compose(self, other: "Relation") -> "Relation":
        """self ; other（self の後に other）"""
        self._check(other)
        product = self._matrix.astype(np.int64) @ other._matrix.astype(np.int64)
        return Relation(product > 0)

    def preimp(self, other: "Relation") -> "Relation":
        """self ⊸ other = self の補集合 ∪ other"""
        self._check(other)
        return Relation(~self._matrix | other._matrix)

    def residual(self, other: "Relation") -> "Relation":
        """self ▷ other = self の逆 ; other"""
        return self.converse().compose(other)

    def star(self) -> "Relation":
        """反射推移閉包（1 ∪ a を平方して不動点まで）"""
        closure = self._matrix | np.eye(self.size, dtype=bool)
        while True:
            squared = (closure.astype(np.int64) @ closure.astype(np.int64)) > 0
            if np.array_equal(squared, closure):
                return Relation(closure)
            closure = squared

    def issubset(self, other: "Relation") -> bool:
        self._check(other)
        return not bool((self._matrix & ~other._matrix).any())

    def __le__(self, other: "Relation") -> bool:
        return self.issubset(other)

    def is_reflexive(self) -> bool:
        return bool(np.diagonal(self._matrix).all())

    def is_transitive(self) -> bool:
        return self.compose(self).issubset(self)
