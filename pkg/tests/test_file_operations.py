"""
文書ファイルの読み込み・キャッシュ・出力先の名前付けのテスト
"""
import pytest

from src.core.errors import DocumentNotFound
from src.core.file_operations import (
    DocumentKind, DocumentLoader, get_documents_from_folder, next_free_path, write_text,
)
from src.models.documents import ModelDoc, TheoryDoc
from src.utils.document_cache import DocumentCache


THEORY_TEXT = "theory t\n  sorts s\nend\n"


class TestPaths:
    def test_next_free_path(self, tmp_path):
        assert next_free_path(tmp_path, "out", ".tam") == tmp_path / "out.tam"
        (tmp_path / "out.tam").touch()
        (tmp_path / "out-1.tam").touch()
        assert next_free_path(tmp_path, "out", ".tam") == tmp_path / "out-2.tam"

    def test_write_text_creates_parent_directories(self, tmp_path):
        path = write_text(tmp_path / "a" / "b" / "t.ta", THEORY_TEXT)
        assert path.read_text(encoding="utf-8") == THEORY_TEXT

    def test_documents_from_folder(self, fixtures_dir):
        names = [p.name for p in get_documents_from_folder(fixtures_dir / "algebra")]
        assert names == ["bad_star.tam", "four.tam", "swap.tam", "two.ta"]
        theories = get_documents_from_folder(fixtures_dir / "algebra", [DocumentKind.THEORY])
        assert [p.name for p in theories] == ["two.ta"]

    def test_missing_folder(self, tmp_path):
        assert get_documents_from_folder(tmp_path / "nowhere") == []


class TestLoader:
    def test_use_header_is_resolved_next_to_the_file(self, loader, fixtures_dir):
        doc = loader.load(fixtures_dir / "algebra" / "swap.tam")
        assert isinstance(doc, ModelDoc)
        assert doc.theory == "two"

    def test_registered_theory_wins(self, tmp_path):
        (tmp_path / "two.ta").write_text("theory two\n  sorts s\n  label r : s~s\nend\n", encoding="utf-8")
        loader = DocumentLoader()
        override = loader.load_theory(tmp_path / "two.ta")
        loader.register(override)
        assert loader.resolve_theory("two") is override

    def test_unknown_theory(self, loader):
        with pytest.raises(DocumentNotFound, match="theory nowhere not found"):
            loader.resolve_theory("nowhere")

    def test_unsupported_extension(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text(THEORY_TEXT, encoding="utf-8")
        with pytest.raises(DocumentNotFound, match="unsupported file extension .txt"):
            DocumentLoader().load(path)

    def test_not_a_theory(self, loader, fixtures_dir):
        with pytest.raises(DocumentNotFound, match="not a theory document"):
            loader.load_theory(fixtures_dir / "algebra" / "swap.tam")

    def test_parsed_documents_are_cached(self, tmp_path):
        path = tmp_path / "t.ta"
        path.write_text(THEORY_TEXT, encoding="utf-8")
        loader = DocumentLoader()
        first = loader.load(path)
        assert loader.load(path) is first
        assert len(loader.cache) == 1
        path.write_text(THEORY_TEXT.replace("sorts s", "sorts s u"), encoding="utf-8")
        second = loader.load(path)
        assert isinstance(second, TheoryDoc)
        assert second.signature.sorts == ("s", "u")
        assert len(loader.cache) == 2


class TestDocumentCache:
    def test_least_recently_used_entry_is_evicted(self, tmp_path):
        cache = DocumentCache(max_entries=2)
        a, b, c = (tmp_path / f"{n}.ta" for n in "abc")
        cache.put(a, "x", "A")
        cache.put(b, "x", "B")
        assert cache.get(a, "x") == "A"
        cache.put(c, "x", "C")
        assert cache.get(b, "x") is None
        assert cache.get(a, "x") == "A"
        assert cache.get(c, "x") == "C"

    def test_key_includes_the_text(self, tmp_path):
        cache = DocumentCache()
        cache.put(tmp_path / "a.ta", "one", "A")
        assert cache.get(tmp_path / "a.ta", "two") is None

    def test_clear(self, tmp_path):
        cache = DocumentCache()
        cache.put(tmp_path / "a.ta", "one", "A")
        cache.clear()
        assert len(cache) == 0
