"""Surface syntax: parsing, definition tables and printing.

Grammar::

    term  ::= lam | app
    lam   ::= ("\\" | unicode lambda) ident+ "." term
    app   ::= atom+                     (left associative)
    atom  ::= ident | "(" term ")"

Identifiers match ``[A-Za-z][A-Za-z0-9_']*``.  ``#`` starts a comment
running to end of line.  An identifier is resolved, in order, as: bound
variable in scope, defined constant (expanded at parse time), free
variable.
"""

from __future__ import annotations

import re

from .terms import App, Free, Lam, Term, Var, free_vars

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<lam>\\|λ)
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<dot>\.)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<semi>;)
  | (?P<eq>=)
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Syntax error; ``offset`` is a byte offset into the input."""

    def __init__(self, msg: str, text: str, pos: int):
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"{msg} (byte {self.offset})")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", text, i)
        kind = m.lastgroup
        assert kind is not None
        if kind != "ws":
            toks.append((kind, m.group(), i))
        i = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class DefinitionTable:
    """Named closed terms, expanded during parsing.

    Definition files are ``name = term;`` statements (``#`` comments
    allowed); each right-hand side may use previously defined names.
    """

    def __init__(self) -> None:
        self._defs: dict[str, Term] = {}

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def __getitem__(self, name: str) -> Term:
        return self._defs[name]

    def names(self) -> list[str]:
        return list(self._defs)

    def define(self, name: str, term: Term | str) -> None:
        if not IDENT_RE.fullmatch(name):
            raise ParseError(f"bad definition name {name!r}", name, 0)
        if isinstance(term, str):
            term = parse(term, self)
        if term.open_n or free_vars(term):
            missing = ", ".join(sorted(free_vars(term))) or "<index>"
            raise ValueError(
                f"definition {name!r} is not closed: unknown constant name {missing}"
            )
        self._defs[name] = term

    def copy(self) -> "DefinitionTable":
        d = DefinitionTable()
        d._defs.update(self._defs)
        return d

    @classmethod
    def from_text(cls, text: str, base: "DefinitionTable | None" = None) -> "DefinitionTable":
        table = base.copy() if base is not None else cls()
        toks = _tokenize(text)
        i = 0
        while toks[i][0] != "eof":
            kind, val, pos = toks[i]
            if kind == "semi":  # stray/trailing separators are harmless
                i += 1
                continue
            if kind != "ident":
                raise ParseError(f"expected definition name, got {val!r}", text, pos)
            name = val
            if toks[i + 1][0] != "eq":
                raise ParseError(f"expected '=' after {name!r}", text, toks[i + 1][2])
            j = i + 2
            while toks[j][0] not in ("semi", "eof"):
                j += 1
            if toks[j][0] != "semi":
                raise ParseError(f"missing ';' after definition of {name!r}", text, toks[j][2])
            body, _ = _parse_tokens(text, toks[i + 2 : j] + [("eof", "", toks[j][2])], table)
            try:
                table.define(name, body)
            except ValueError as e:
                raise ParseError(str(e), text, pos) from None
            i = j + 1
        return table

    @classmethod
    def from_file(cls, path: str, base: "DefinitionTable | None" = None) -> "DefinitionTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read(), base)


def _parse_tokens(
    text: str, toks: list, defs: DefinitionTable | None
) -> tuple[Term, int]:
    """Parse a complete term from ``toks``; returns (term, index of eof)."""

    def parse_term(i: int, scope: list[str]) -> tuple[Term, int]:
        if toks[i][0] == "lam":
            i += 1
            names = []
            while toks[i][0] == "ident":
                names.append(toks[i][1])
                i += 1
            if not names:
                raise ParseError("expected binder name", text, toks[i][2])
            if toks[i][0] != "dot":
                raise ParseError("expected '.' after binders", text, toks[i][2])
            body, i = parse_term(i + 1, scope + names)
            for n in reversed(names):
                body = Lam(n, body)
            return body, i
        return parse_app(i, scope)

    def parse_app(i: int, scope: list[str]) -> tuple[Term, int]:
        t, i = parse_atom(i, scope)
        if t is None:
            raise ParseError(f"expected a term, got {toks[i][1] or 'end of input'!r}", text, toks[i][2])
        while True:
            nxt, j = parse_atom(i, scope)
            if nxt is None:
                return t, i
            t = App(t, nxt)
            i = j

    def parse_atom(i: int, scope: list[str]) -> tuple[Term | None, int]:
        kind, val, pos = toks[i]
        if kind == "ident":
            for depth, n in enumerate(reversed(scope)):
                if n == val:
                    return Var(depth), i + 1
            if defs is not None and val in defs:
                return defs[val], i + 1
            return Free(val), i + 1
        if kind == "lp":
            t, i = parse_term(i + 1, scope)
            if toks[i][0] != "rp":
                raise ParseError("expected ')'", text, toks[i][2])
            return t, i + 1
        return None, i

    t, i = parse_term(0, [])
    if toks[i][0] != "eof":
        raise ParseError(f"trailing input {toks[i][1]!r}", text, toks[i][2])
    return t, i


def parse(text: str, defs: DefinitionTable | None = None) -> Term:
    """Parse a term; names in ``defs`` are replaced by their definitions."""
    t, _ = _parse_tokens(text, _tokenize(text), defs)
    return t


# ---------------------------------------------------------------------------
# printing


def _pick_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    stem = base.rstrip("0123456789") or base
    k = 1
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def pretty(t: Term, compact_lambda: bool = False) -> str:
    """Print with minimal parentheses; ``parse(pretty(t))`` is alpha-equal to ``t``.

    Binder hints are kept where possible and renamed with a numeric
    suffix where they would collide with a name already in scope.
    """
    lam_sym = "λ" if compact_lambda else "\\"

    def go(u: Term, scope: list[str], taken: set[str], ctx: str) -> str:
        match u:
            case Var(i):
                return scope[-1 - i] if i < len(scope) else f"?{i - len(scope)}"
            case Free(n):
                return n
            case Lam(_, _):
                names: list[str] = []
                inner_taken = set(taken)
                body = u
                while type(body) is Lam:
                    n = _pick_name(body.hint, inner_taken)
                    names.append(n)
                    inner_taken.add(n)
                    body = body.body
                s = f"{lam_sym}{' '.join(names)}.{go(body, scope + names, inner_taken, 'top')}"
                return f"({s})" if ctx in ("fn", "arg") else s
            case App(f, a):
                s = f"{go(f, scope, taken, 'fn')} {go(a, scope, taken, 'arg')}"
                return f"({s})" if ctx == "arg" else s
        raise TypeError(f"not a term: {u!r}")

    return go(t, [], set(t.names), "top")
