"""A catalog of combinators, fixed-point constructions, and related tooling.

Everything here is a plain constructor: named standard combinators, the
two classic fixed-point combinators and the sequences generated from
them (postfixed owls, composition vectors, iterated argument schemes),
the self-application terms used to probe duplication behaviour, three
evaluators for coded combinatory-logic terms, and the labeling /
balancedness machinery for tracking how a marked free variable's
descendants spread through reducts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .parser import DefinitionTable
from .reduction import DEFAULT_FUEL, RESOLVED, gross_knuth, normalize
from .terms import (
    App,
    Free,
    Lam,
    Position,
    Term,
    Var,
    app,
    free_vars,
    iterate,
    lam,
    subterms,
)
from .trees import DEFAULT_DEPTH, compact_cyclic, node_at

_DEFS_TEXT = r"""
I = \x.x;
K = \x y.x;
S = \x y z.x z(y z);
B = \f g x.f(g x);
delta = \a b.b(a b);
Y0 = \f.(\x.f(x x))(\x.f(x x));
eta = \a b.b(a a b);
Y1 = eta eta;
theta = \a b c.b c(a a b c);
Sdup = \a b c.b c(a b c);
E1 = (\x.x x)(\w.\z.z(\a b c.a b((w w b)(w w c))));
E2 = (\x.x x)(\w.\z.z(\a b c.a b(S(\z.z b)(\z.z c)(w w))));
E3 = \z.z((\x.x x)(\w a b c.a b(S b c(w w))));
"""

_BASE = DefinitionTable.from_text(_DEFS_TEXT)


def standard_definitions() -> DefinitionTable:
    """A fresh definition table with the named standard combinators."""
    return _BASE.copy()


def _d(name: str) -> Term:
    return _BASE[name]


# handy constants (closed, safe to share: terms are immutable)
I = _d("I")
K = _d("K")
S = _d("S")
B = _d("B")
DELTA = _d("delta")
Y0 = _d("Y0")
ETA = _d("eta")
Y1 = _d("Y1")
THETA = _d("theta")
SDUP = _d("Sdup")  # the normal form of S S
E1 = _d("E1")
E2 = _d("E2")
E3 = _d("E3")


def omega_of(f: Term | str = "f") -> Term:
    """λx.f(xx) for a free variable or term f."""
    if isinstance(f, str):
        f = Free(f)
    return Lam("x", App(f, App(Var(0), Var(0))))


def bohm_seq(n: int) -> Term:
    """The n-th member of the owl-postfixing sequence: ηη δ…δ with
    n−1 owls (n ≥ 1); each postfix yields a new fixed-point combinator."""
    if n < 1:
        raise ValueError("bohm_seq needs n >= 1")
    return iterate("left", Y1, DELTA, n - 1)


def scott_seq(n: int) -> Term:
    """(B Y0) S…S I with n composition combinators (n ≥ 0)."""
    if n < 0:
        raise ValueError("scott_seq needs n >= 0")
    return App(iterate("left", App(B, Y0), S, n), I)


def gvector(y: Term | None = None, n: int = 0) -> Term:
    """y(SS) S…S I — the vector that turns any fixed-point combinator
    into another one; defaults to the two-step combinator ηη."""
    if y is None:
        y = Y1
    if n < 0:
        raise ValueError("gvector needs n >= 0")
    return App(iterate("left", App(y, App(S, S)), S, n), I)


def bbb_scheme(y: Term | None = None, n: int = 0) -> Term:
    """B B B y A…A I I with A = BS (n ≥ 0 copies)."""
    if y is None:
        y = Y0
    if n < 0:
        raise ValueError("bbb_scheme needs n >= 0")
    a = App(B, S)
    return app(iterate("left", app(B, B, B, y), a, n), I, I)


def dummy_scheme(y: Term | None = None, params: tuple[Term, ...] = ()) -> Term:
    """y Q P₁…Pₙ where Q = λy p₁…pₙ x. x(y p₁…pₙ x) threads the given
    parameter terms through every unfolding without using them."""
    if y is None:
        y = Y0
    n = len(params)
    # body under binders y, p1..pn, x  (de Bruijn: x=0, pn=1, ..., y=n+1)
    inner = app(Var(n + 1), *[Var(n + 1 - i) for i in range(1, n + 1)], Var(0))
    q = lam(["y"] + [f"p{i}" for i in range(1, n + 1)] + ["x"], App(Var(0), inner))
    return app(y, q, *params)


def scott_composite(ns: list[int] | tuple[int, ...]) -> Term:
    """Y0 with the fpc-generating vector ·(SS) S…S I applied once per
    entry: entry nᵢ contributes (SS) followed by nᵢ S's and an I."""
    t = Y0
    for n in ns:
        if n < 0:
            raise ValueError("scott_composite entries must be >= 0")
        t = App(iterate("left", App(t, App(S, S)), S, n), I)
    return t


def scott_composite_simplified(ns: list[int] | tuple[int, ...]) -> Term:
    """The simple reduct of ``scott_composite(ns)`` used for atomic
    clock analysis: θθ S…S I, then per further entry the normal form
    of SS followed by S's and an I."""
    if not ns:
        raise ValueError("need at least one entry")
    if any(n < 0 for n in ns):
        raise ValueError("entries must be >= 0")
    t = App(iterate("left", App(THETA, THETA), S, ns[0]), I)
    for n in ns[1:]:
        t = App(iterate("left", App(t, SDUP), S, n), I)
    return t


def wfpc_flipflop(which: int = 0) -> Term:
    """A pair of mutually recursive weak fixed-point combinators:
    Z x → x(Z' x) and Z' x → x(Z x), so each yields the output spine
    while the generator alternates.  ``which`` selects Z (0) or Z' (1).
    Built by solving the two equations with one fixed-point combinator
    over a two-component selector."""
    if which not in (0, 1):
        raise ValueError("which must be 0 or 1")
    tru = lam(["x", "y"], Var(1))
    fls = lam(["x", "y"], Var(0))
    # p = Y0 (λp s. s (λx.x(p false x)) (λx.x(p true x)))
    gen = lam(
        ["p", "s"],
        app(
            Var(0),
            lam("x", App(Var(0), app(Var(2), fls, Var(0)))),
            lam("x", App(Var(0), app(Var(2), tru, Var(0)))),
        ),
    )
    pair = App(Y0, gen)
    return App(pair, tru if which == 0 else fls)


# ---------------------------------------------------------------------------
# duplication probes


def plotkin_A(y: Term | None = None) -> Term:
    """y(λz.fzz) with f free."""
    if y is None:
        y = Y1
    return App(y, lam("z", app(Free("f"), Var(0), Var(0))))


def plotkin_B(y: Term | None = None) -> Term:
    """y(λx.y(λy'.fxy')) with f free."""
    if y is None:
        y = Y1
    inner = lam("y'", app(Free("f"), Var(1), Var(0)))
    return App(y, lam("x", App(y, inner)))


def plotkin_Bprime(y: Term | None = None) -> Term:
    """y(λx.fx(fx(y(λy'.fxy')))) with f free."""
    if y is None:
        y = Y1
    inner = lam("y'", app(Free("f"), Var(1), Var(0)))
    body = app(
        Free("f"),
        Var(0),
        app(Free("f"), Var(0), App(y, inner)),
    )
    return App(y, Lam("x", body))


# ---------------------------------------------------------------------------
# the label/balance machinery


@dataclass(frozen=True)
class LabeledTerm:
    """A term with one designated free variable marking tracked
    occurrences; the marker must not occur in the unlabeled original."""

    term: Term
    label: str = "f_star"


def label_plotkin_A(y: Term | None = None, label: str = "f_star") -> LabeledTerm:
    """y(λz.f★zz) with the duplicating argument's head marked."""
    if y is None:
        y = Y1
    if label in free_vars(y):
        raise ValueError(f"label {label!r} already occurs in the combinator")
    return LabeledTerm(App(y, lam("z", app(Free(label), Var(0), Var(0)))), label)


def is_balanced(t: LabeledTerm | Term, label: str = "f_star") -> bool:
    """Does every subterm of shape (label s) u have s α-equal to u?"""
    if isinstance(t, LabeledTerm):
        t, label = t.term, t.label
    for _, sub in subterms(t):
        match sub:
            case App(App(Free(name), s), u) if name == label:
                if s != u:
                    return False
    return True


def balanced_reducts(t: LabeledTerm, count: int, expand_cap: int = 400) -> list[Term]:
    """Sample up to ``count`` distinct balanced reducts.

    Worklist closure over balanced reducts only: from each one, take
    its full development (which preserves balance), its one-step
    reducts that happen to stay balanced, and symmetric two-step
    reducts contracting the same redex inside both copies of a
    duplicated argument of the label.  ``expand_cap`` bounds how many
    terms get expanded.
    """
    from collections import deque

    from .reduction import contract_at, redex_positions
    from .terms import replace_at

    out: list[Term] = []
    seen: set[Term] = {t.term}
    frontier: deque[Term] = deque()
    if is_balanced(t.term, t.label):
        out.append(t.term)
        frontier.append(t.term)

    def add(r: Term) -> bool:
        if r not in seen:
            seen.add(r)
            if is_balanced(r, t.label):
                out.append(r)
                frontier.append(r)
        return len(out) >= count

    expanded = 0
    while frontier and len(out) < count and expanded < expand_cap:
        cur = frontier.popleft()
        expanded += 1
        if add(gross_knuth(cur)):
            break
        done = False
        for p in redex_positions(cur):
            if add(contract_at(cur, p)):
                done = True
                break
        if done:
            break
        for pos, sub in subterms(cur):
            if done:
                break
            match sub:
                case App(App(Free(name), s), u) if name == t.label and s == u:
                    for q in redex_positions(s):
                        mirrored = contract_at(s, q)
                        paired = App(App(Free(name), mirrored), mirrored)
                        if add(replace_at(cur, pos, paired)):
                            done = True
                            break
    return out[:count]


def spine_evidence(
    t: Term, var: str = "x", depth: int = DEFAULT_DEPTH, fuel: int = DEFAULT_FUEL
) -> int:
    """Depth-bounded fixed-point evidence.

    Applies ``t`` to the fresh variable ``var`` and counts how many
    consecutive levels of the resulting clocked tree form the pure
    unary spine ``var(var(...))``.  A term whose tree is that spine to
    the full requested depth behaves as a fixed-point builder as far
    as the bound can see.
    """
    from .trees import clocked_bt

    tree = clocked_bt(App(t, Free(var)), depth, fuel)
    node = tree.root
    levels = 0
    while (
        getattr(node, "kind", None) == "hnf"
        and not node.binders
        and node.head_ref == ("f", var)
        and len(node.children) == 1
    ):
        levels += 1
        node = node.children[0]
    return levels


def plotkin_nonzero_witness(
    t: LabeledTerm | Term, depth: int = DEFAULT_DEPTH, fuel: int = DEFAULT_FUEL
) -> Position | None:
    """First position of shape (12)*2 whose clock annotation is
    nonzero, scanning the cyclic clocked tree; None if all such
    positions resolved within ``depth`` are zero."""
    if isinstance(t, LabeledTerm):
        t = t.term
    tree = compact_cyclic(t, depth, fuel)
    for m in range(depth):
        pos = (1, 2) * m + (2,)
        node = node_at(tree, pos)
        if node is None:
            break
        if node.count:
            return pos
    return None


# ---------------------------------------------------------------------------
# coded combinatory logic


@dataclass(frozen=True)
class CLTerm:
    """A binary applicative tree over the constants K and S."""

    kind: str  # "K" | "S" | "app"
    left: "CLTerm | None" = None
    right: "CLTerm | None" = None

    def __str__(self) -> str:
        if self.kind != "app":
            return self.kind
        rhs = str(self.right)
        if self.right.kind == "app":  # type: ignore[union-attr]
            rhs = f"({rhs})"
        return f"{self.left}{rhs}"


CL_K = CLTerm("K")
CL_S = CLTerm("S")


def cl_apply(a: CLTerm, b: CLTerm) -> CLTerm:
    return CLTerm("app", a, b)


def parse_cl(text: str) -> CLTerm:
    """Parse a combinatory term written with K, S, and parentheses."""
    pos = 0

    def atom() -> CLTerm | None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return None
        c = text[pos]
        if c == "K":
            pos += 1
            return CL_K
        if c == "S":
            pos += 1
            return CL_S
        if c == "(":
            pos += 1
            t = expr()
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text) or text[pos] != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            pos += 1
            return t
        if c == ")":
            return None
        raise ValueError(f"unexpected {c!r} in combinatory term")

    def expr() -> CLTerm:
        t = atom()
        if t is None:
            raise ValueError(f"empty combinatory term in {text!r}")
        while True:
            nxt = atom()
            if nxt is None:
                return t
            t = cl_apply(t, nxt)

    t = expr()
    if pos < len(text.rstrip()):
        raise ValueError(f"trailing input in {text!r}")
    return t


def encode_cl(m: CLTerm) -> Term:
    """The self-describing coding: constants carry a K tag and
    themselves, applications carry a KI tag and the coded parts."""
    z = Var(0)
    match m.kind:
        case "K":
            return Lam("z", app(z, K, K, I))
        case "S":
            return Lam("z", app(z, K, S, I))
        case "app":
            assert m.left is not None and m.right is not None
            return Lam(
                "z", app(z, App(K, I), encode_cl(m.left), encode_cl(m.right))
            )
    raise ValueError(f"bad combinatory term kind {m.kind!r}")


def cl_to_lambda(m: CLTerm) -> Term:
    match m.kind:
        case "K":
            return K
        case "S":
            return S
        case "app":
            assert m.left is not None and m.right is not None
            return App(cl_to_lambda(m.left), cl_to_lambda(m.right))
    raise ValueError(f"bad combinatory term kind {m.kind!r}")


def evaluator_check(e: Term, m: CLTerm, fuel: int = DEFAULT_FUEL) -> bool:
    """Does the evaluator applied to the coded term recover the term
    itself?  Both sides are normalized and compared."""
    ne = normalize(App(e, encode_cl(m)), fuel)
    nm = normalize(cl_to_lambda(m), fuel)
    return (
        ne.status == RESOLVED
        and nm.status == RESOLVED
        and ne.result == nm.result
    )


# ---------------------------------------------------------------------------
# atomic clock pattern analysis


def ones_exponents(steps) -> list[int]:
    """Turn an atomic annotation whose positions are all spine
    positions 1…1 into the list of their lengths."""
    out = []
    for p in steps:
        if any(d != 1 for d in p):
            raise ValueError(f"non-spine position {p!r}")
        out.append(len(p))
    return out


def pulse_pattern_count(exponents) -> int:
    """Occurrences of the window l, l+1, l, l−1, l−2 — the signature an
    inner vector leaves in an atomic spine clock.  Counting them (and
    measuring the blocks in between) recovers how a composite
    fixed-point combinator was assembled."""
    e = list(exponents)
    count = 0
    for i in range(len(e) - 4):
        l = e[i]
        if e[i + 1] == l + 1 and e[i + 2] == l and e[i + 3] == l - 1 and e[i + 4] == l - 2:
            count += 1
    return count


# ---------------------------------------------------------------------------
# the catalog


_PLAIN = {
    "i": lambda: I,
    "k": lambda: K,
    "s": lambda: S,
    "b": lambda: B,
    "delta": lambda: DELTA,
    "y0": lambda: Y0,
    "eta": lambda: ETA,
    "y1": lambda: Y1,
    "theta": lambda: THETA,
    "omega-f": omega_of,
    "e1": lambda: E1,
    "e2": lambda: E2,
    "e3": lambda: E3,
}


def catalog_names() -> list[str]:
    return sorted(_PLAIN) + [
        "bbb-scheme",
        "bohm-seq",
        "dummy-scheme",
        "gvector",
        "plotkin-a",
        "plotkin-b",
        "plotkin-bprime",
        "scott-composite",
        "scott-seq",
        "wfpc-flipflop",
    ]


def catalog(name: str, *params) -> Term:
    """Look up a named construction.

    Numeric parameters follow the constructors above; entries taking a
    combinator argument default to the standard choice when it is
    omitted.
    """
    key = name.strip().lower().replace("_", "-")
    if key in _PLAIN:
        if params:
            raise ValueError(f"{name} takes no parameters")
        return _PLAIN[key]()
    ints = [p for p in params if isinstance(p, int)]
    terms = [p for p in params if isinstance(p, Term)]
    match key:
        case "bohm-seq":
            return bohm_seq(*ints)
        case "scott-seq":
            return scott_seq(*ints)
        case "gvector":
            return gvector(terms[0] if terms else None, *ints)
        case "bbb-scheme":
            return bbb_scheme(terms[0] if terms else None, *ints)
        case "dummy-scheme":
            return dummy_scheme(terms[0] if terms else None, tuple(terms[1:]))
        case "scott-composite":
            if len(params) == 1 and isinstance(params[0], (list, tuple)):
                return scott_composite(list(params[0]))
            return scott_composite(ints)
        case "plotkin-a":
            return plotkin_A(terms[0] if terms else None)
        case "plotkin-b":
            return plotkin_B(terms[0] if terms else None)
        case "plotkin-bprime":
            return plotkin_Bprime(terms[0] if terms else None)
        case "wfpc-flipflop":
            return wfpc_flipflop(*ints)
    raise ValueError(f"unknown catalog name {name!r}")
