"""Reduction: head steps toward a chosen target, developments, normalization.

``head_reduce`` drives a term toward head normal form, weak head normal
form, or a root-stable form, logging the position of every contracted
redex.  Divergence is only ever reported when a recurrence proves it;
running out of fuel is a separate outcome and never claims divergence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .terms import (
    App,
    Free,
    Lam,
    Position,
    Term,
    TermError,
    Var,
    instantiate,
    positions,
    replace_at,
    spine,
    subterm_at,
)

DEFAULT_FUEL = 10_000
TRACE_CAP = 10_000

Target = Literal["hnf", "whnf", "root_stable"]

RESOLVED = "resolved"
PROVEN_DIVERGENT = "proven_divergent"
FUEL_EXHAUSTED = "fuel_exhausted"


@dataclass
class HeadOutcome:
    """Result of driving a term toward a head target.

    ``steps`` holds the contracted redex positions in order; ``trace``
    the visited terms (one longer than ``steps``).  ``result`` is only
    set when ``status == "resolved"``.
    """

    status: str
    steps: list[Position]
    result: Term | None
    trace: list[Term] = field(repr=False, default_factory=list)

    @property
    def step_count(self) -> int:
        return len(self.steps)


def head_redex_position(t: Term) -> Position | None:
    """Position of the head redex (``0^n 1^m`` shape), or None in hnf."""
    zeros = 0
    while type(t) is Lam:
        t = t.body
        zeros += 1
    ones = 0
    while type(t) is App:
        t = t.fn
        ones += 1
    if type(t) is Lam and ones:
        return (0,) * zeros + (1,) * (ones - 1)
    return None


def is_redex(t: Term) -> bool:
    return type(t) is App and type(t.fn) is Lam


def contract_at(t: Term, pos: Position) -> Term:
    """Contract the beta redex at ``pos``."""
    sub = subterm_at(t, pos)
    if not is_redex(sub):
        raise TermError(f"no redex at position {''.join(map(str, pos)) or 'e'}")
    assert isinstance(sub, App) and isinstance(sub.fn, Lam)
    return replace_at(t, pos, instantiate(sub.fn.body, sub.arg))


def _canonical_core_key(t: Term) -> tuple:
    """Recurrence key for hnf search: the term under its binder prefix,
    with indices into the prefix and free names both canonicalised by
    first occurrence.  Two terms with equal keys head-reduce in lockstep
    forever, so seeing a key twice proves there is no hnf."""
    depth0 = 0
    while type(t) is Lam:
        t = t.body
        depth0 += 1
    ranks: dict[tuple, int] = {}
    out: list = []
    stack: list[tuple[Term, int]] = [(t, 0)]
    while stack:
        u, d = stack.pop()
        match u:
            case Var(i):
                if i < d:
                    out.append(("b", i))
                else:
                    out.append(("o", ranks.setdefault(("i", i - d), len(ranks))))
            case Free(n):
                out.append(("o", ranks.setdefault(("n", n), len(ranks))))
            case Lam(_, b):
                out.append("L")
                stack.append((b, d + 1))
            case App(f, a):
                out.append("A")
                stack.append((a, d))
                stack.append((f, d))
    return tuple(out)


def _whnf_redex_position(t: Term) -> Position | None:
    ones = 0
    while type(t) is App:
        t = t.fn
        ones += 1
    if type(t) is Lam and ones:
        return (1,) * (ones - 1)
    return None


class _Budget:
    __slots__ = ("left",)

    def __init__(self, fuel: int):
        self.left = fuel

    def spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        return True


def _run(t: Term, target: Target, budget: _Budget) -> HeadOutcome:
    steps: list[Position] = []
    trace: list[Term] = [t]
    seen: dict = {}

    def key(u: Term):
        return _canonical_core_key(u) if target == "hnf" else u

    while True:
        if target == "whnf" and type(t) is Lam:
            return HeadOutcome(RESOLVED, steps, t, trace)
        pos = head_redex_position(t) if target == "hnf" else _whnf_redex_position(t)
        if target in ("hnf", "whnf"):
            if pos is None:
                return HeadOutcome(RESOLVED, steps, t, trace)
        else:
            # root_stable: abstractions and variables are stable as given;
            # an application is stable once its function side provably
            # never becomes an abstraction.
            if type(t) is not App:
                return HeadOutcome(RESOLVED, steps, t, trace)
            probe = _run(t.fn, "whnf", budget)
            if probe.status == FUEL_EXHAUSTED:
                return HeadOutcome(FUEL_EXHAUSTED, steps, None, trace)
            if probe.status == PROVEN_DIVERGENT or type(probe.result) is not Lam:
                return HeadOutcome(RESOLVED, steps, t, trace)
            pos = _whnf_redex_position(t)
            assert pos is not None
        if len(seen) < TRACE_CAP:
            k = key(t)
            if k in seen:
                return HeadOutcome(PROVEN_DIVERGENT, steps, None, trace)
            seen[k] = len(steps)
        if not budget.spend():
            return HeadOutcome(FUEL_EXHAUSTED, steps, None, trace)
        t = contract_at(t, pos)
        steps.append(pos)
        if len(trace) < TRACE_CAP:
            trace.append(t)


def head_reduce(t: Term, target: Target = "hnf", fuel: int = DEFAULT_FUEL) -> HeadOutcome:
    """Reduce toward ``target``, recording one position per step.

    The fuel budget is shared with any stability probes the
    ``root_stable`` target performs on function sides.
    """
    if target not in ("hnf", "whnf", "root_stable"):
        raise ValueError(f"unknown target {target!r}")
    return _run(t, target, _Budget(fuel))


# ---------------------------------------------------------------------------
# redex bookkeeping


@dataclass(frozen=True)
class RedexClass:
    """How a redex duplicates work.

    ``linear``: the bound variable occurs at most once in the body.
    ``call_by_value``: the argument is a normal form.
    Either property makes the redex ``simple``.
    """

    linear: bool
    call_by_value: bool

    @property
    def simple(self) -> bool:
        return self.linear or self.call_by_value


def _count_index(t: Term, k: int) -> int:
    if t.open_n <= k:
        return 0
    match t:
        case Var(i):
            return 1 if i == k else 0
        case Lam(_, b):
            return _count_index(b, k + 1)
        case App(f, a):
            return _count_index(f, k) + _count_index(a, k)
    return 0


def classify_redex(t: Term, pos: Position = ()) -> RedexClass:
    sub = subterm_at(t, pos)
    if not is_redex(sub):
        raise TermError(f"no redex at position {''.join(map(str, pos)) or 'e'}")
    assert isinstance(sub, App) and isinstance(sub.fn, Lam)
    return RedexClass(
        linear=_count_index(sub.fn.body, 0) <= 1,
        call_by_value=is_normal(sub.arg),
    )


def redex_positions(t: Term) -> list[Position]:
    return [p for p in positions(t) if is_redex(subterm_at(t, p))]


def is_normal(t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        match u:
            case App(f, a):
                if type(f) is Lam:
                    return False
                stack.append(f)
                stack.append(a)
            case Lam(_, b):
                stack.append(b)
    return True


# ---------------------------------------------------------------------------
# developments


def develop(t: Term, marks: set[Position] | list[Position]) -> Term:
    """Complete development of the marked redexes, contracted inside-out.

    Every mark must address a redex of ``t``; residuals of one mark
    under another are contracted as part of the development, and no
    newly created redex is touched.
    """
    markset = {tuple(p) for p in marks}
    for p in markset:
        if not is_redex(subterm_at(t, p)):
            raise TermError(
                f"development mark {''.join(map(str, p)) or 'e'} is not a redex"
            )

    def go(u: Term, ms: set[Position]) -> Term:
        if not ms:
            return u
        match u:
            case Lam(h, b):
                return Lam(h, go(b, {p[1:] for p in ms if p and p[0] == 0}))
            case App(f, a):
                nf = go(f, {p[1:] for p in ms if p and p[0] == 1})
                na = go(a, {p[1:] for p in ms if p and p[0] == 2})
                if () in ms:
                    assert isinstance(nf, Lam)
                    return instantiate(nf.body, na)
                return App(nf, na)
        return u

    return go(t, markset)


def gross_knuth(t: Term) -> Term:
    """Develop every redex of ``t`` at once."""
    return develop(t, set(redex_positions(t)))


# ---------------------------------------------------------------------------
# full normalization


def leftmost_outermost(t: Term) -> Position | None:
    best: Position | None = None
    for p in positions(t):
        if is_redex(subterm_at(t, p)):
            if best is None or p < best:
                best = p
    return best


@dataclass
class NormalizeOutcome:
    status: str
    steps: int
    result: Term | None


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> NormalizeOutcome:
    """Leftmost-outermost reduction to normal form.

    A repeated term along the (deterministic) strategy proves there is
    no normal form; fuel exhaustion stays agnostic.
    """
    seen: set[Term] = set()
    n = 0
    while True:
        pos = None
        # preorder, parent before children, function before argument
        stack = [(t, ())]
        while stack:
            u, p = stack.pop()
            if is_redex(u):
                pos = p
                break
            match u:
                case Lam(_, b):
                    stack.append((b, p + (0,)))
                case App(f, a):
                    stack.append((a, p + (2,)))
                    stack.append((f, p + (1,)))
        if pos is None:
            return NormalizeOutcome(RESOLVED, n, t)
        if len(seen) < TRACE_CAP:
            if t in seen:
                return NormalizeOutcome(PROVEN_DIVERGENT, n, None)
            seen.add(t)
        if n >= fuel:
            return NormalizeOutcome(FUEL_EXHAUSTED, n, None)
        t = contract_at(t, pos)
        n += 1


# ---------------------------------------------------------------------------
# fixed point combinator order


def reducing_fpc_order(y: Term, fuel: int = DEFAULT_FUEL) -> int | None:
    """Least k such that ``y x`` head-reduces in k steps to ``x (y x)``.

    Returns None when the head trace of ``y x`` never passes through
    that term (within fuel) — i.e. the operator does not *reduce* to its
    unfolding, even if it is convertible with it.
    """
    base = "x"
    k = 1
    while base in y.names:
        base = f"x{k}"
        k += 1
    x = Free(base)
    goal = App(x, App(y, x))
    out = head_reduce(App(y, x), "hnf", fuel)
    for i, u in enumerate(out.trace):
        if u == goal:
            return i
    return None
