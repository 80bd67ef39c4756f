"""
実行設定（コマンドラインのフラグをまとめたもの）
"""
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple


class Mode(Enum):
    """証明の論理モード"""
    CLASSICAL = "classical"
    INTUITIONISTIC = "int"


class Ruleset(Enum):
    """帰納の規則集合（Ind 規則か KEL 規則のどちらか一方）"""
    IND = "ind"
    KEL = "kel"


class SemanticsMode(Enum):
    """TA（スターは反射推移閉包）か TA_k（指定部分代数とスター写像）"""
    TA = "ta"
    TAK = "tak"


@dataclass(frozen=True)
class QuantifierBudget:
    """量化子の列挙を許す台集合の大きさの上限"""
    label_carrier: int = 3
    first_order_carrier: int = 6


@dataclass(frozen=True)
class SearchBudget:
    """モデル探索で調べる候補数の上限"""
    max_candidates: int = 2_000_000


@dataclass(frozen=True)
class RunConfig:
    """1 回のコマンド実行の設定"""
    command: str
    files: Tuple[Path, ...] = ()
    theory: Optional[Path] = None
    mode: Optional[Mode] = None
    ruleset: Optional[Ruleset] = None
    semantics: SemanticsMode = SemanticsMode.TA
    bound: int = 3
    out: Optional[Path] = None
    refute: Tuple[str, ...] = ()
    sentence: Optional[str] = None
    verbose: bool = False
    jobs: int = 1
    quantifier_budget: QuantifierBudget = field(default_factory=QuantifierBudget)
    search_budget: SearchBudget = field(default_factory=SearchBudget)

    def validate(self) -> List[str]:
        """不正な組み合わせの一覧を返す"""
        problems: List[str] = []
        if self.bound < 1:
            problems.append("--bound must be at least 1")
        if self.jobs < 1:
            problems.append("--jobs must be at least 1")
        if self.theory is not None and self.command not in ("check", "eval"):
            problems.append("--theory only applies to check and eval")
        if self.out is not None and self.command not in ("search", "pushout", "fmt"):
            problems.append("--out only applies to search, pushout and fmt")
        if self.command != "check" and (self.mode is not None or self.ruleset is not None):
            problems.append("--mode and --rules only apply to check")
        if self.command not in ("search", "eval") and self.semantics is not SemanticsMode.TA:
            problems.append("--semantics only applies to eval and search")
        if self.command != "search" and self.refute:
            problems.append("--refute only applies to search")
        return problems
