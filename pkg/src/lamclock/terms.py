"""Immutable lambda terms with nameless binding.

Bound variables are de Bruijn indices; free variables carry names.  Each
binder keeps a *display hint* (the surface name it was written with),
which printing uses but equality ignores — so ``==`` on terms is exactly
alpha-equivalence.

Terms cache their hash, size and "openness" (how many enclosing binders
the term needs) at construction, which keeps substitution and the
reduction loops cheap on shared structure.
"""

from __future__ import annotations

from typing import Iterator

Position = tuple[int, ...]

EMPTY_FVS: frozenset[str] = frozenset()


class TermError(ValueError):
    """Malformed term operation (bad position, open term where closed needed...)."""


class PositionError(TermError):
    """A position does not address a subterm of the given term."""


class Term:
    """Base class; concrete terms are Var, Free, Lam and App."""

    __slots__ = ("size", "open_n", "names", "_h")

    size: int
    open_n: int          # least n such that the term is valid under n binders
    names: frozenset[str]  # free *named* variables
    _h: int

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        from .parser import pretty

        try:
            return f"<{type(self).__name__} {pretty(self)}>"
        except Exception:
            return f"<{type(self).__name__}>"


class Var(Term):
    """Bound variable (de Bruijn index, innermost binder = 0)."""

    __slots__ = ("index",)
    __match_args__ = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise TermError(f"negative de Bruijn index: {index}")
        self.index = index
        self.size = 1
        self.open_n = index + 1
        self.names = EMPTY_FVS
        self._h = hash((0, index))

    def __eq__(self, other: object) -> bool:
        return self is other or (type(other) is Var and other.index == self.index)

    __hash__ = Term.__hash__


class Free(Term):
    """Free variable, identified by name."""

    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.size = 1
        self.open_n = 0
        self.names = frozenset((name,))
        self._h = hash((1, name))

    def __eq__(self, other: object) -> bool:
        return self is other or (type(other) is Free and other.name == self.name)

    __hash__ = Term.__hash__


class Lam(Term):
    """Abstraction.  ``hint`` is the display name; equality ignores it."""

    __slots__ = ("hint", "body")
    __match_args__ = ("hint", "body")

    def __init__(self, hint: str, body: Term):
        self.hint = hint
        self.body = body
        self.size = body.size + 1
        self.open_n = max(0, body.open_n - 1)
        self.names = body.names
        self._h = hash((2, body._h))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is Lam
            and other._h == self._h
            and other.body == self.body
        )

    __hash__ = Term.__hash__


class App(Term):
    """Application, left-associated in surface syntax."""

    __slots__ = ("fn", "arg")
    __match_args__ = ("fn", "arg")

    def __init__(self, fn: Term, arg: Term):
        self.fn = fn
        self.arg = arg
        self.size = fn.size + arg.size + 1
        self.open_n = max(fn.open_n, arg.open_n)
        if fn.names is EMPTY_FVS:
            self.names = arg.names
        elif arg.names is EMPTY_FVS:
            self.names = fn.names
        else:
            self.names = fn.names | arg.names
        self._h = hash((3, fn._h, arg._h))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is App
            and other._h == self._h
            and other.fn == self.fn
            and other.arg == self.arg
        )

    __hash__ = Term.__hash__


def app(fn: Term, *args: Term) -> Term:
    """Left-nested application ``fn a1 ... an``."""
    t = fn
    for a in args:
        t = App(t, a)
    return t


def lam(hints: str | list[str], body: Term) -> Term:
    """Nested abstraction; ``hints`` may be a space-separated string."""
    if isinstance(hints, str):
        hints = hints.split()
    for h in reversed(hints):
        body = Lam(h, body)
    return body


def alpha_eq(a: Term, b: Term) -> bool:
    """Alpha-equivalence (plain equality under nameless binding)."""
    return a == b


def free_vars(t: Term) -> frozenset[str]:
    return t.names


def is_closed(t: Term) -> bool:
    """No unbound indices and no named free variables."""
    return t.open_n == 0 and not t.names


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every index pointing above ``cutoff`` binders."""
    if t.open_n <= cutoff:
        return t
    match t:
        case Var(i):
            return Var(i + by) if i >= cutoff else t
        case Lam(h, b):
            return Lam(h, shift(b, by, cutoff + 1))
        case App(f, a):
            return App(shift(f, by, cutoff), shift(a, by, cutoff))
    raise TermError(f"cannot shift {t!r}")


def _inst(t: Term, arg: Term, depth: int) -> Term:
    if t.open_n <= depth:
        return t
    match t:
        case Var(i):
            if i == depth:
                return shift(arg, depth)
            return Var(i - 1) if i > depth else t
        case Lam(h, b):
            return Lam(h, _inst(b, arg, depth + 1))
        case App(f, a):
            return App(_inst(f, arg, depth), _inst(a, arg, depth))
    raise TermError(f"cannot instantiate {t!r}")


def instantiate(body: Term, arg: Term) -> Term:
    """Substitute ``arg`` for index 0 of ``body`` (the beta step payload)."""
    return _inst(body, arg, 0)


def open_with(body: Term, name: str) -> Term:
    """Instantiate index 0 with the free variable ``name``."""
    return instantiate(body, Free(name))


def subst_free(t: Term, name: str, s: Term) -> Term:
    """Replace the free variable ``name`` by ``s``.

    Capture cannot occur: binders bind indices, never names, and the
    indices of ``s`` are shifted past every binder crossed.
    """
    if name not in t.names:
        return t

    def go(u: Term, depth: int) -> Term:
        if name not in u.names:
            return u
        match u:
            case Free(n):
                return shift(s, depth) if n == name else u
            case Lam(h, b):
                return Lam(h, go(b, depth + 1))
            case App(f, a):
                return App(go(f, depth), go(a, depth))
        return u

    return go(t, 0)


def subterm_at(t: Term, pos: Position) -> Term:
    """Subterm addressed by ``pos`` (0 = under binder, 1 = function, 2 = argument)."""
    cur = t
    for k, d in enumerate(pos):
        match cur, d:
            case (Lam(_, b), 0):
                cur = b
            case (App(f, _), 1):
                cur = f
            case (App(_, a), 2):
                cur = a
            case _:
                raise PositionError(
                    f"position {''.join(map(str, pos))!r} invalid at step {k}: "
                    f"{type(cur).__name__} has no direction {d}"
                )
    return cur


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    """Rebuild ``t`` with the subterm at ``pos`` replaced by ``new``."""
    if not pos:
        return new
    d, rest = pos[0], pos[1:]
    match t, d:
        case (Lam(h, b), 0):
            return Lam(h, replace_at(b, rest, new))
        case (App(f, a), 1):
            return App(replace_at(f, rest, new), a)
        case (App(f, a), 2):
            return App(f, replace_at(a, rest, new))
    raise PositionError(
        f"position {''.join(map(str, pos))!r} invalid: "
        f"{type(t).__name__} has no direction {d}"
    )


def positions(t: Term) -> list[Position]:
    """All positions of ``t`` in preorder (node before 0/1/2 children)."""
    out: list[Position] = []
    stack: list[tuple[Term, Position]] = [(t, ())]
    while stack:
        u, p = stack.pop()
        out.append(p)
        match u:
            case Lam(_, b):
                stack.append((b, p + (0,)))
            case App(f, a):
                stack.append((a, p + (2,)))
                stack.append((f, p + (1,)))
    out.sort()
    return out


def subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    stack: list[tuple[Term, Position]] = [(t, ())]
    while stack:
        u, p = stack.pop()
        yield p, u
        match u:
            case Lam(_, b):
                stack.append((b, p + (0,)))
            case App(f, a):
                stack.append((a, p + (2,)))
                stack.append((f, p + (1,)))


def iterate(mode: str, a: Term, b: Term, n: int) -> Term:
    """Iterated application: ``left`` gives a b b ... b, ``right`` gives a (a (... b))."""
    if n < 0:
        raise TermError("iteration count must be >= 0")
    if mode == "left":
        t = a
        for _ in range(n):
            t = App(t, b)
        return t
    if mode == "right":
        t = b
        for _ in range(n):
            t = App(a, t)
        return t
    raise TermError(f"unknown iteration mode {mode!r}")


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Decompose ``t`` as head applied to arguments."""
    args: list[Term] = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def strip_lams(t: Term) -> tuple[list[str], Term]:
    """Split off the leading binder prefix, returning its hints and the core."""
    hints: list[str] = []
    while type(t) is Lam:
        hints.append(t.hint)
        t = t.body
    return hints, t


def pos_str(p: Position) -> str:
    """Render a position; the empty position prints as ``e``."""
    return "".join(map(str, p)) if p else "e"


def parse_pos(s: str) -> Position:
    if s in ("e", ""):
        return ()
    if not all(c in "012" for c in s):
        raise PositionError(f"bad position string {s!r}")
    return tuple(int(c) for c in s)
