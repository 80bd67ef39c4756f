"""
Union-Find（経路半減と rank による併合）
"""
from typing import Dict, Generic, Hashable, Iterable, List, TypeVar


K = TypeVar("K", bound=Hashable)


class UnionFind(Generic[K]):
    """任意のハッシュ可能な値の同値類を管理する"""

    def __init__(self, items: Iterable[K] = ()):
        self._parent: Dict[K, K] = {}
        self._rank: Dict[K, int] = {}
        for item in items:
            self.add(item)

    def add(self, x: K) -> None:
        if x not in self._parent:
            self._parent[x] = x
            self._rank[x] = 0

    def __contains__(self, x: K) -> bool:
        return x in self._parent

    def find(self, x: K) -> K:
        self.add(x)
        parent = self._parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: K, b: K) -> bool:
        """併合したら True、すでに同じ類なら False"""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self._rank[ra] < self._rank[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if self._rank[ra] == self._rank[rb]:
            self._rank[ra] += 1
        return True

    def same(self, a: K, b: K) -> bool:
        return self.find(a) == self.find(b)

    def classes(self) -> List[List[K]]:
        """同値類を登録順に並べて返す"""
        groups: Dict[K, List[K]] = {}
        for x in self._parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())
