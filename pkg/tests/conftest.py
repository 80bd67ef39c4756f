"""
テスト共通のフィクスチャ
"""
from pathlib import Path

import pytest

from src.core.amalgam import cospan_from_doc
from src.core.file_operations import DocumentLoader
from src.models.documents import TheoryDoc


FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def loader() -> DocumentLoader:
    return DocumentLoader(search_dirs=[FIXTURES / name for name in ("kleene", "nat", "meal", "amalgam", "algebra")])


@pytest.fixture
def kernel(loader: DocumentLoader) -> TheoryDoc:
    return loader.load_theory(FIXTURES / "kleene" / "kernel.ta")


@pytest.fixture
def meal(loader: DocumentLoader) -> TheoryDoc:
    return loader.load_theory(FIXTURES / "meal" / "meal.ta")


@pytest.fixture
def nat(loader: DocumentLoader) -> TheoryDoc:
    return loader.load_theory(FIXTURES / "nat" / "nat.ta")


@pytest.fixture
def two(loader: DocumentLoader) -> TheoryDoc:
    return loader.load_theory(FIXTURES / "algebra" / "two.ta")


@pytest.fixture
def load_cospan(loader: DocumentLoader):
    """fixtures/amalgam の余スパンを (Cospan, 左の理論, 右の理論) として読む"""
    def load(name: str):
        path = FIXTURES / "amalgam" / f"{name}.tac"
        doc = loader.load(path)
        return cospan_from_doc(doc, lambda theory: loader.resolve_theory(theory, path.parent))
    return load
