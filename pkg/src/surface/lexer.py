"""
文書の字句解析（ply.lex）
"""
from dataclasses import dataclass
from typing import List

import ply.lex

from ..core.errors import LexError


RESERVED = {
    "forall": "FORALL",
    "exists": "EXISTS",
    "true": "TRUE",
    "false": "FALSE",
    "and": "AND",
    "or": "OR",
    "le": "LE",
    "eqv": "EQV",
    "with": "WITH",
    "over": "OVER",
    "end": "END",
    "U": "UNION",
    "cap": "MEET",
    # 文書の見出し
    "theory": "THEORY",
    "sorts": "SORTS",
    "op": "OP",
    "label": "LABEL",
    "action": "ACTION",
    "axiom": "AXIOM",
    "model": "MODEL",
    "use": "USE",
    "carrier": "CARRIER",
    "algebra": "ALGEBRA",
    "star": "STARMAP",
    "full": "FULL",
    "proof": "PROOF",
    "mode": "MODE",
    "rules": "RULES",
    "cospan": "COSPAN",
    "base": "BASE",
    "left": "LEFT",
    "right": "RIGHT",
    "sort": "SORT",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


class _Rules:
    tokens = [
        "IDENT", "HOLE", "CARET",
        "TRANS_OPEN", "TRANS_CLOSE", "EQEQ", "TURNSTILE", "RESIDUAL", "PREIMP",
        "IFF", "ARROW", "AND_OP", "OR_OP", "TILDE", "SEMI", "STAR", "COMMA", "COLON",
        "DOT", "LPAREN", "RPAREN", "LBRACKET", "RBRACKET", "LBRACE", "RBRACE", "EQUALS", "AT",
    ] + sorted(set(RESERVED.values()))

    t_ignore = " \t\r"
    t_ignore_COMMENT = r"\#[^\n]*"

    t_HOLE = r"\?[0-9]+"
    t_CARET = r"\^(-1|\+|[0-9]+|[A-Za-z]+)"
    t_TRANS_OPEN = r"=\["
    t_TRANS_CLOSE = r"\]=>"
    t_EQEQ = r"=="
    t_TURNSTILE = r"\|-"
    t_RESIDUAL = r"\|>"
    t_PREIMP = r"-o"
    t_IFF = r"<->"
    t_ARROW = r"->"
    t_AND_OP = r"/\\"
    t_OR_OP = r"\\/"
    t_TILDE = r"~"
    t_SEMI = r";"
    t_STAR = r"\*"
    t_COMMA = r","
    t_COLON = r":"
    t_DOT = r"\."
    t_LPAREN = r"\("
    t_RPAREN = r"\)"
    t_LBRACKET = r"\["
    t_RBRACKET = r"\]"
    t_LBRACE = r"\{"
    t_RBRACE = r"\}"
    t_EQUALS = r"="
    t_AT = r"@"

    def t_IDENT(self, t):
        r"[A-Za-z0-9_][A-Za-z0-9_']*"
        t.type = RESERVED.get(t.value, "IDENT")
        return t

    def t_newline(self, t):
        r"\n+"
        t.lexer.lineno += len(t.value)

    def t_error(self, t):
        line_start = t.lexer.lexdata.rfind("\n", 0, t.lexpos) + 1
        raise LexError(f"unexpected character {t.value[0]!r}", t.lexer.lineno, t.lexpos - line_start + 1)


_lexer = None


def _build():
    global _lexer
    if _lexer is None:
        _lexer = ply.lex.lex(module=_Rules(), optimize=False, debug=False, errorlog=ply.lex.NullLogger())
    return _lexer


def tokenize(text: str) -> List[Token]:
    """テキストをトークン列に分解する（末尾に EOF トークンを付ける）"""
    lexer = _build().clone()
    lexer.lineno = 1
    lexer.input(text)
    result: List[Token] = []
    for tok in iter(lexer.token, None):
        line_start = text.rfind("\n", 0, tok.lexpos) + 1
        result.append(Token(tok.type, tok.value, tok.lineno, tok.lexpos - line_start + 1))
    line = text.count("\n") + 1
    column = len(text) - (text.rfind("\n") + 1) + 1
    result.append(Token("EOF", "", line, column))
    return result
