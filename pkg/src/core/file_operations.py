import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from ..models.documents import TheoryDoc
from ..surface.parser import Document, parse
from ..utils.document_cache import DocumentCache
from .errors import DocumentNotFound, SurfaceError


logger = logging.getLogger(__name__)


class DocumentKind(Enum):
    THEORY = ".ta"
    PROOF = ".tap"
    MODEL = ".tam"
    COSPAN = ".tac"


SUPPORTED_EXTENSIONS = {kind.value: kind for kind in DocumentKind}


def read_text(path: Path) -> str:
    """UTF-8 で読み、CRLF を LF に揃える"""
    return path.read_text(encoding="utf-8").replace("\r\n", "\n")


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    logger.info("%s に書き出しました", path)
    return path


def next_free_path(directory: Path, base_name: str, extension: str) -> Path:
    """directory 内で使われていないファイル名（既にあれば -1, -2, ... を付ける）"""
    destination = directory / f"{base_name}{extension}"
    counter = 1
    while destination.exists():
        destination = directory / f"{base_name}-{counter}{extension}"
        counter += 1
    return destination


def get_documents_from_folder(folder_path: Path, kinds: Iterable[DocumentKind] = tuple(DocumentKind)) -> List[Path]:
    """フォルダから文書ファイルを名前順に取得"""
    extensions = {kind.value for kind in kinds}
    if not folder_path.exists() or not folder_path.is_dir():
        return []
    return [p for p in sorted(folder_path.iterdir()) if p.is_file() and p.suffix in extensions]


@dataclass
class DocumentLoader:
    """文書ファイルを解析し、use ヘッダの理論名を search_dirs の <名前>.ta に解決する

    register で与えた理論は探索より優先される（--theory で指定されたもの）。
    """
    search_dirs: List[Path] = field(default_factory=list)
    cache: DocumentCache = field(default_factory=DocumentCache)
    _registered: Dict[str, TheoryDoc] = field(default_factory=dict)

    def register(self, theory: TheoryDoc) -> None:
        self._registered[theory.name] = theory

    def load(self, path: Path) -> Document:
        path = Path(path)
        if path.suffix not in SUPPORTED_EXTENSIONS:
            raise DocumentNotFound(f"{path}: unsupported file extension {path.suffix or '(none)'}")
        try:
            text = read_text(path)
        except OSError as e:
            raise DocumentNotFound(f"{path}: {e.strerror or e}") from None
        cached = self.cache.get(path, text)
        if cached is not None:
            return cached
        directory = path.parent
        try:
            doc = parse(text, lambda name: self.resolve_theory(name, directory), str(path))
        except SurfaceError as e:
            raise e if e.path else e.with_path(str(path))
        self.cache.put(path, text, doc)
        logger.info("%s を読み込みました", path)
        return doc

    def load_theory(self, path: Path) -> TheoryDoc:
        doc = self.load(path)
        if not isinstance(doc, TheoryDoc):
            raise DocumentNotFound(f"{path}: not a theory document")
        return doc

    def resolve_theory(self, name: str, near: Optional[Path] = None) -> TheoryDoc:
        """理論名を文書に解決する（登録済み → near → search_dirs の順に探す）"""
        registered = self._registered.get(name)
        if registered is not None:
            return registered
        candidates = ([near] if near is not None else []) + list(self.search_dirs)
        for directory in candidates:
            path = directory / f"{name}{DocumentKind.THEORY.value}"
            if path.is_file():
                return self.load_theory(path)
        raise DocumentNotFound(f"theory {name} not found")
