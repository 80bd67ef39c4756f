"""
tak 全体で使う例外の定義
"""
from typing import Iterable, Optional, Tuple


class TakError(Exception):
    """tak の例外の基底クラス"""


class SignatureError(TakError):
    """シグネチャが不正"""


class MorphismError(TakError):
    """シグネチャ射の適用・合成に失敗"""


class VariableShadowsSymbol(TakError):
    """ブロック変数の名前が既存の記号と衝突"""

    def __init__(self, name: str):
        super().__init__(f"variable shadows symbol: {name}")
        self.name = name


class CaptureError(TakError):
    """名前の付け替え後も束縛変数が捕獲される（内部エラー）"""


class SemanticsError(TakError):
    """モデル上の解釈に関するエラー"""


class QuantifierBudgetExceeded(SemanticsError):
    """量化子の列挙が上限を超えた"""


class EscapesSubalgebra(SemanticsError):
    """TA_k モードで部分代数の外の関係が現れた"""


class SearchBudgetExceeded(SemanticsError):
    """モデル探索の候補数が上限を超えた"""


class NotBasicError(TakError):
    """基本断片 Sen^b に属さない文が渡された"""

    def __init__(self, sentence_text: str):
        super().__init__(f"not in basic fragment: {sentence_text}")


class AmalgamationMismatch(TakError):
    """二つのモデルの共通部分への縮約が一致しない"""

    def __init__(self, component: str, detail: str):
        super().__init__(f"reduct mismatch at {component}: {detail}")
        self.component = component
        self.detail = detail


class DocumentNotFound(TakError):
    """use ヘッダで参照された文書が見つからない"""


class SurfaceError(TakError):
    """文書の字句・構文・整形性エラー

    Args:
        message: エラーの内容
        line: 1 始まりの行番号
        column: 1 始まりの桁番号
        expected: 期待されたトークンの集合（構文エラーのみ）
    """

    kind = "error"

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 expected: Iterable[str] = (), path: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.expected: Tuple[str, ...] = tuple(sorted(set(expected)))
        self.path = path
        super().__init__(self.render())

    def render(self) -> str:
        where = f"{self.path}:" if self.path else ""
        text = f"{where}{self.line}:{self.column}: {self.kind}: {self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text

    def with_path(self, path: str) -> "SurfaceError":
        return type(self)(self.message, self.line, self.column, self.expected, path)


class LexError(SurfaceError):
    kind = "lexical error"


class ParseError(SurfaceError):
    kind = "syntax error"


class WellFormednessError(SurfaceError):
    kind = "ill-formed"


class IllFormed(TakError):
    """項・アクション・文がシグネチャ上で整形でない"""


class ComplexityOverflow(TakError):
    """複雑さの成分が 2^63 を超えた"""
