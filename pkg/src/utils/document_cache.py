"""
解析済み文書のキャッシュの実装
"""
import hashlib
import logging
import threading
from collections import OrderedDict
from pathlib import Path
from typing import Generic, Optional, TypeVar


logger = logging.getLogger(__name__)

T = TypeVar("T")


class DocumentCache(Generic[T]):
    """解析済み文書のメモリ内キャッシュ

    キーはパスと本文のハッシュなので、ファイルが書き換われば自然に別の項目になる。
    複数のスレッドから同時に使ってよい。
    """

    def __init__(self, max_entries: int = 256):
        """
        Args:
            max_entries: 保持する文書の最大数（超えたら最も古く使われたものから捨てる）
        """
        self.max_entries = max_entries
        self._entries: "OrderedDict[str, T]" = OrderedDict()
        self._lock = threading.Lock()

    def _get_cache_key(self, path: Path, text: str) -> str:
        """キャッシュキーを生成"""
        key_string = f"{Path(path).resolve()}\0{text}"
        return hashlib.md5(key_string.encode("utf-8")).hexdigest()

    def get(self, path: Path, text: str) -> Optional[T]:
        key = self._get_cache_key(path, text)
        with self._lock:
            doc = self._entries.get(key)
            if doc is not None:
                self._entries.move_to_end(key)
                logger.debug("キャッシュから取得: %s", path)
            return doc

    def put(self, path: Path, text: str, doc: T) -> None:
        key = self._get_cache_key(path, text)
        with self._lock:
            self._entries[key] = doc
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                self._entries.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        return len(self._entries)
