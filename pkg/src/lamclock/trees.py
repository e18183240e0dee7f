"""Clocked semantic trees.

A tree node records the head reduction that produced it: the number of
steps and the position of every contracted redex.  Three semantics are
supported:

* ``bt``  — nodes are head normal forms ``\\x1..xn. y M1 .. Mm``;
* ``llt`` — nodes are weak head normal forms (single-binder lambda
  layers, or variable-headed spines);
* ``bet`` — nodes are root-stable forms (a variable, a lambda layer, or
  an application whose function side provably never becomes an
  abstraction).

``Bottom`` marks *proven* divergence, ``Unknown`` an exhausted depth or
fuel budget.  With ``cyclic`` construction, a node whose generating term
literally repeats an ancestor's (equal up to binder renaming, free
variables naming the same binders) becomes a ``BackEdge``, and one
that repeats an already finished
self-contained cyclic subtree elsewhere in the tree becomes a
``SharedRef`` to it; a tree whose every unfinished frontier is a back
edge, shared reference or Bottom is *closed* and fully describes the
infinite unfolding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .parser import _pick_name
from .reduction import (
    DEFAULT_FUEL,
    FUEL_EXHAUSTED,
    PROVEN_DIVERGENT,
    HeadOutcome,
    classify_redex,
    RedexClass,
    head_reduce,
)
from .terms import (
    App,
    Free,
    Lam,
    Position,
    Term,
    TermError,
    instantiate,
    pos_str,
    spine,
)

DEFAULT_DEPTH = 12

_SEMANTICS = ("bt", "llt", "bet")
_TARGET = {"bt": "hnf", "llt": "whnf", "bet": "root_stable"}


class Node:
    kind = "?"
    __slots__ = ("count", "steps")

    count: int | None
    steps: tuple[Position, ...] | None

    def clock(self, atomic: bool = False):
        if atomic:
            return None if self.steps is None else [pos_str(p) for p in self.steps]
        return self.count

    @property
    def children(self) -> tuple["Node", ...]:
        return ()


class HnfNode(Node):
    """``bt`` node: binder block, head variable, argument subtrees."""

    kind = "hnf"
    __slots__ = ("binders", "head", "head_ref", "_children")

    def __init__(self, count, steps, binders, head, head_ref, children):
        self.count = count
        self.steps = steps
        self.binders = binders
        self.head = head
        self.head_ref = head_ref
        self._children = children

    @property
    def children(self):
        return self._children


class LamNode(Node):
    """Single lambda layer (``llt`` and ``bet``)."""

    kind = "lam"
    __slots__ = ("binder", "body")

    def __init__(self, count, steps, binder, body):
        self.count = count
        self.steps = steps
        self.binder = binder
        self.body = body

    @property
    def children(self):
        return (self.body,)


class HeadNode(Node):
    """``llt`` node: a variable-headed spine, binders not entered."""

    kind = "head"
    __slots__ = ("head", "head_ref", "_children")

    def __init__(self, count, steps, head, head_ref, children):
        self.count = count
        self.steps = steps
        self.head = head
        self.head_ref = head_ref
        self._children = children

    @property
    def children(self):
        return self._children


class VarNode(Node):
    """``bet`` leaf: a bare variable."""

    kind = "var"
    __slots__ = ("name", "ref")

    def __init__(self, count, steps, name, ref):
        self.count = count
        self.steps = steps
        self.name = name
        self.ref = ref


class AppNode(Node):
    """``bet`` node: a root-stable application."""

    kind = "app"
    __slots__ = ("fn", "arg")

    def __init__(self, count, steps, fn, arg):
        self.count = count
        self.steps = steps
        self.fn = fn
        self.arg = arg

    @property
    def children(self):
        return (self.fn, self.arg)


class Bottom(Node):
    """Proven divergence: the target form is never reached."""

    kind = "bottom"
    __slots__ = ("steps_seen",)

    def __init__(self, steps_seen: int = 0):
        self.count = None
        self.steps = None
        self.steps_seen = steps_seen


class Unknown(Node):
    """Budget ran out; nothing is claimed about this subtree."""

    kind = "unknown"
    __slots__ = ("reason",)

    def __init__(self, reason: str):
        self.count = None
        self.steps = None
        self.reason = reason


class BackEdge(Node):
    """Pointer ``delta`` node levels up to an equal-unfolding ancestor."""

    kind = "backedge"
    __slots__ = ("delta",)

    def __init__(self, delta: int):
        self.count = None
        self.steps = None
        self.delta = delta


class SharedRef(Node):
    """Cross link to an already built subtree with the same unfolding.

    Only *self-contained* subtrees (no internal back edge pointing above
    their root) are ever shared, so the target reads the same from any
    position that references it.
    """

    kind = "shared"
    __slots__ = ("target",)

    def __init__(self, target: Node):
        self.count = None
        self.steps = None
        self.target = target


@dataclass
class ClockTree:
    """A built tree plus the parameters it was built with."""

    root: Node
    semantics: str
    atomic: bool
    depth: int
    fuel: int
    cyclic: bool

    @property
    def closed(self) -> bool:
        """No Unknown frontier: the finite structure describes the whole
        unfolding (shared subtrees are inspected at their defining site)."""
        return not any(n.kind == "unknown" for _, n in iter_nodes(self))

    def node_count(self) -> int:
        return sum(1 for _ in iter_nodes(self))


def iter_nodes(tree: ClockTree):
    """Yield ``(path, node)`` in preorder; paths are child-slot indices."""
    stack: list[tuple[tuple[int, ...], Node]] = [((), tree.root)]
    while stack:
        path, n = stack.pop()
        yield path, n
        for i in reversed(range(len(n.children))):
            stack.append((path + (i,), n.children[i]))


# ---------------------------------------------------------------------------
# construction


def _build(
    t0: Term,
    semantics: str,
    depth: int,
    fuel: int,
    cyclic: bool,
    hook=None,
) -> ClockTree:
    if semantics not in _SEMANTICS:
        raise ValueError(f"unknown tree semantics {semantics!r}")
    if t0.open_n:
        raise TermError("tree construction needs a term with no unbound indices")
    target = _TARGET[semantics]
    counter = itertools.count()
    display: dict[str, str] = {}
    INF = float("inf")
    memo: dict[Term, Node] = {}

    def open_binders(t: Term, k: int, level: int, env, taken):
        """Open the first ``k`` binders of ``t`` with fresh internal names."""
        names: list[str] = []
        shown: list[str] = []
        taken = set(taken)
        for i in range(k):
            assert type(t) is Lam
            internal = f"%{next(counter)}"
            disp = _pick_name(t.hint, taken)
            taken.add(disp)
            display[internal] = disp
            names.append(internal)
            shown.append(disp)
            t = instantiate(t.body, Free(internal))
        env = dict(env)
        for i, nm in enumerate(names):
            env[nm] = (level, i)
        return t, tuple(shown), env, frozenset(taken)

    def head_info(h: Term, env, level):
        if type(h) is not Free:
            raise TermError(f"unexpected head {h!r}")
        at = env.get(h.name)
        if at is None:
            return h.name, ("f", h.name)
        return display[h.name], ("b", level - at[0], at[1])

    def build(term: Term, level: int, ancestors, env, taken, path):
        """Build one node.

        Returns ``(node, escape, complete)``: ``escape`` is the lowest
        ancestor level targeted by any back edge inside the subtree
        (INF when the subtree is acyclic), ``complete`` says the
        subtree contains no Unknown.  A subtree is remembered for
        cross-branch reuse only when it is complete and its cycles are
        self-contained (``level <= escape < INF``); finite acyclic
        pieces are cheap to rebuild and stay separate nodes.

        Recurrence is *literal*: the generating term equals an earlier
        one up to renaming of binders, with every free variable naming
        the same binder on the path (opened binders carry unique
        internal names, so plain term equality checks exactly that).
        """
        if cyclic:
            for aterm, alvl in reversed(ancestors):
                if level - alvl >= 1 and aterm == term:
                    return BackEdge(level - alvl), alvl, True
            hit = memo.get(term)
            if hit is not None:
                return SharedRef(hit), INF, True
            anc = ancestors + ((term, level),)
        else:
            anc = ancestors
        if level >= depth:
            return Unknown("depth"), INF, False
        out = head_reduce(term, target, fuel)
        if hook is not None:
            hook(path, term, out)
        if out.status == PROVEN_DIVERGENT:
            return Bottom(out.step_count), INF, True
        if out.status == FUEL_EXHAUSTED:
            return Unknown("fuel"), INF, False
        r = out.result
        assert r is not None
        count, steps = out.step_count, tuple(out.steps)
        escape = INF
        complete = True

        if semantics == "bt":
            nb = 0
            u = r
            while type(u) is Lam:
                u = u.body
                nb += 1
            opened, shown, env2, taken2 = open_binders(r, nb, level, env, taken)
            head, args = spine(opened)
            name, ref = head_info(head, env2, level)
            kids = []
            for i, a in enumerate(args):
                c, esc, cm = build(a, level + 1, anc, env2, taken2, path + (i,))
                kids.append(c)
                escape = min(escape, esc)
                complete = complete and cm
            node = HnfNode(count, steps, shown, name, ref, tuple(kids))

        elif semantics == "llt":
            if type(r) is Lam:
                opened, shown, env2, taken2 = open_binders(r, 1, level, env, taken)
                body, escape, complete = build(
                    opened, level + 1, anc, env2, taken2, path + (0,)
                )
                node = LamNode(count, steps, shown[0], body)
            else:
                head, args = spine(r)
                name, ref = head_info(head, env, level)
                kids = []
                for i, a in enumerate(args):
                    c, esc, cm = build(a, level + 1, anc, env, taken, path + (i,))
                    kids.append(c)
                    escape = min(escape, esc)
                    complete = complete and cm
                node = HeadNode(count, steps, name, ref, tuple(kids))

        else:  # bet
            if type(r) is Lam:
                opened, shown, env2, taken2 = open_binders(r, 1, level, env, taken)
                body, escape, complete = build(
                    opened, level + 1, anc, env2, taken2, path + (0,)
                )
                node = LamNode(count, steps, shown[0], body)
            elif type(r) is App:
                fn, e1, c1 = build(r.fn, level + 1, anc, env, taken, path + (0,))
                arg, e2, c2 = build(r.arg, level + 1, anc, env, taken, path + (1,))
                escape = min(e1, e2)
                complete = c1 and c2
                node = AppNode(count, steps, fn, arg)
            else:
                name, ref = head_info(r, env, level)
                node = VarNode(count, steps, name, ref)

        if cyclic and complete and level <= escape < INF:
            memo.setdefault(term, node)
        return node, escape, complete

    root, _, _ = build(t0, 0, (), {}, frozenset(t0.names), ())
    return ClockTree(root, semantics, False, depth, fuel, cyclic)


def clocked_bt(
    t: Term, depth: int = DEFAULT_DEPTH, fuel: int = DEFAULT_FUEL, atomic: bool = False
) -> ClockTree:
    """Depth-limited clocked tree of head normal forms (no back edges)."""
    tree = _build(t, "bt", depth, fuel, cyclic=False)
    tree.atomic = atomic
    return tree


def clocked_llt(
    t: Term, depth: int = DEFAULT_DEPTH, fuel: int = DEFAULT_FUEL, atomic: bool = False
) -> ClockTree:
    """Depth-limited clocked tree of weak head normal forms."""
    tree = _build(t, "llt", depth, fuel, cyclic=False)
    tree.atomic = atomic
    return tree


def clocked_bet(
    t: Term, depth: int = DEFAULT_DEPTH, fuel: int = DEFAULT_FUEL, atomic: bool = False
) -> ClockTree:
    """Depth-limited clocked tree of root-stable layers."""
    tree = _build(t, "bet", depth, fuel, cyclic=False)
    tree.atomic = atomic
    return tree


def compact_cyclic(
    t: Term,
    depth: int = DEFAULT_DEPTH,
    fuel: int = DEFAULT_FUEL,
    semantics: str = "bt",
    atomic: bool = False,
    hook=None,
) -> ClockTree:
    """Tree with back edges wherever a node repeats an ancestor's unfolding.

    Completed self-contained cyclic subtrees are additionally reused
    across branches: a later node with the same generating term (equal
    up to binder renaming, free variables naming the same binders)
    becomes a ``SharedRef`` to the first occurrence instead of a copy,
    so the tree stays a finite closed graph even when the repetition is
    between siblings rather than between ancestor and descendant.
    """
    tree = _build(t, semantics, depth, fuel, cyclic=True, hook=hook)
    tree.atomic = atomic
    return tree


def strip(tree: ClockTree) -> ClockTree:
    """The same tree with every clock annotation removed."""
    done: dict[int, Node] = {}

    def go(n: Node) -> Node:
        match n.kind:
            case "hnf":
                assert isinstance(n, HnfNode)
                out = HnfNode(None, None, n.binders, n.head, n.head_ref,
                              tuple(go(c) for c in n.children))
            case "lam":
                assert isinstance(n, LamNode)
                out = LamNode(None, None, n.binder, go(n.body))
            case "head":
                assert isinstance(n, HeadNode)
                out = HeadNode(None, None, n.head, n.head_ref,
                               tuple(go(c) for c in n.children))
            case "var":
                assert isinstance(n, VarNode)
                out = VarNode(None, None, n.name, n.ref)
            case "app":
                assert isinstance(n, AppNode)
                out = AppNode(None, None, go(n.fn), go(n.arg))
            case "bottom":
                out = Bottom()
            case "unknown":
                assert isinstance(n, Unknown)
                out = Unknown(n.reason)
            case "backedge":
                assert isinstance(n, BackEdge)
                out = BackEdge(n.delta)
            case "shared":
                assert isinstance(n, SharedRef)
                # the defining site precedes every reference in preorder
                out = SharedRef(done[id(n.target)])
            case _:
                raise TypeError(n.kind)
        done[id(n)] = out
        return out

    return ClockTree(go(tree.root), tree.semantics, tree.atomic,
                     tree.depth, tree.fuel, tree.cyclic)


# ---------------------------------------------------------------------------
# positions


def child_step(node: Node, i: int) -> Position:
    """Applicative position step from ``node`` down to child slot ``i``."""
    m = len(node.children)
    match node.kind:
        case "hnf":
            assert isinstance(node, HnfNode)
            return (0,) * len(node.binders) + (1,) * (m - 1 - i) + (2,)
        case "lam":
            return (0,)
        case "head":
            return (1,) * (m - 1 - i) + (2,)
        case "app":
            return (1,) if i == 0 else (2,)
    raise TermError(f"{node.kind} node has no children")


def node_at(tree: ClockTree, pos: Position) -> Node | None:
    """Node of the *unfolded* tree at applicative position ``pos``.

    Back edges are followed, so positions arbitrarily deep resolve on a
    closed tree.  Returns None when the position does not exist (or runs
    into Bottom/Unknown before being consumed).
    """
    stack: list[Node] = [tree.root]
    pos = tuple(pos)
    while True:
        n = stack[-1]
        if n.kind == "backedge":
            assert isinstance(n, BackEdge)
            target_idx = len(stack) - 1 - n.delta
            if target_idx < 0:
                return None
            del stack[target_idx + 1 :]
            continue
        if n.kind == "shared":
            assert isinstance(n, SharedRef)
            stack[-1] = n.target
            continue
        if not pos:
            return n
        hit = None
        for i in range(len(n.children)):
            step = child_step(n, i)
            if pos[: len(step)] == step:
                hit = (i, len(step))
                break
        if hit is None:
            return None
        i, k = hit
        pos = pos[k:]
        stack.append(n.children[i])


def node_at_path(tree: ClockTree, path) -> Node:
    """Node at a child-slot index path, following back edges."""
    stack: list[Node] = [tree.root]
    path = list(path)
    while True:
        n = stack[-1]
        if n.kind == "backedge":
            assert isinstance(n, BackEdge)
            target_idx = len(stack) - 1 - n.delta
            if target_idx < 0:
                raise TermError("back edge escapes the tree root")
            del stack[target_idx + 1 :]
            continue
        if n.kind == "shared":
            assert isinstance(n, SharedRef)
            stack[-1] = n.target
            continue
        if not path:
            return n
        i = path.pop(0)
        if i >= len(n.children):
            raise TermError(f"node has no child slot {i}")
        stack.append(n.children[i])


# ---------------------------------------------------------------------------
# serialization


def tree_to_dict(tree: ClockTree, atomic: bool | None = None) -> dict:
    """JSON-ready form; applicative positions are rendered as strings."""
    if atomic is None:
        atomic = tree.atomic
    ids: dict[int, str] = {}
    at: dict[int, Position] = {}
    counter = itertools.count()

    def walk(n: Node, stack: list[tuple[Node, Position]], pos: Position) -> dict:
        nid = f"n{next(counter)}"
        ids[id(n)] = nid
        at[id(n)] = pos
        d: dict = {"id": nid, "kind": n.kind}
        if n.kind == "backedge":
            assert isinstance(n, BackEdge)
            target_idx = len(stack) - n.delta
            target, tpos = stack[target_idx] if target_idx >= 0 else (None, ())
            d["backedge"] = {
                "target": ids.get(id(target), "?"),
                "phase": pos_str(tpos),
                "period": pos_str(pos[len(tpos) :]),
            }
            return d
        if n.kind == "shared":
            assert isinstance(n, SharedRef)
            d["shared"] = {
                "target": ids.get(id(n.target), "?"),
                "defined_at": pos_str(at.get(id(n.target), ())),
            }
            return d
        if n.count is not None:
            d["clock"] = n.clock(atomic)
        match n.kind:
            case "hnf":
                assert isinstance(n, HnfNode)
                d["binders"] = list(n.binders)
                d["head"] = n.head
            case "head":
                assert isinstance(n, HeadNode)
                d["head"] = n.head
            case "lam":
                assert isinstance(n, LamNode)
                d["binders"] = [n.binder]
            case "var":
                assert isinstance(n, VarNode)
                d["head"] = n.name
            case "unknown":
                assert isinstance(n, Unknown)
                d["reason"] = n.reason
        if n.children:
            stack.append((n, pos))
            d["children"] = [
                walk(c, stack, pos + child_step(n, i))
                for i, c in enumerate(n.children)
            ]
            stack.pop()
        return d

    return {
        "semantics": tree.semantics,
        "atomic": atomic,
        "depth": tree.depth,
        "fuel": tree.fuel,
        "closed": tree.closed,
        "root": walk(tree.root, [], ()),
    }


def periodicity_report(tree: ClockTree) -> dict:
    """Where the tree loops: for each back edge its position, the
    position of its target (phase) and the relative path (period)."""
    loops = []

    def walk(n: Node, stack: list[Position], pos: Position):
        if n.kind == "backedge":
            assert isinstance(n, BackEdge)
            idx = len(stack) - n.delta
            tpos = stack[idx] if idx >= 0 else ()
            loops.append(
                {
                    "at": pos_str(pos),
                    "phase": pos_str(tpos),
                    "period": pos_str(pos[len(tpos) :]),
                    "delta": n.delta,
                }
            )
            return
        stack.append(pos)
        for i, c in enumerate(n.children):
            walk(c, stack, pos + child_step(n, i))
        stack.pop()

    walk(tree.root, [], ())
    return {"fully_periodic": tree.closed, "closed": tree.closed, "loops": loops}


# ---------------------------------------------------------------------------
# simplicity


@dataclass
class SimplicityWitness:
    path: tuple[int, ...]
    step: int
    position: Position
    redex_class: RedexClass
    term: Term


@dataclass
class SimplicityReport:
    status: str  # "simple" | "not_simple" | "unknown"
    witness: SimplicityWitness | None
    closed: bool
    depth: int

    def __bool__(self) -> bool:
        return self.status == "simple"


def check_simple(t: Term, depth: int = DEFAULT_DEPTH, fuel: int = DEFAULT_FUEL) -> SimplicityReport:
    """Is every head step performed while unfolding the tree a simple one?

    ``simple`` is only claimed when the cyclic tree is closed, so the
    finitely many classified steps really cover the infinite unfolding.
    A non-simple step is a definite refutation either way.
    """
    found: list[SimplicityWitness] = []
    complete = [True]

    def hook(path, term: Term, out: HeadOutcome):
        for i, p in enumerate(out.steps):
            if found:
                return
            if i >= len(out.trace):
                complete[0] = False
                return
            rc = classify_redex(out.trace[i], p)
            if not rc.simple:
                found.append(SimplicityWitness(path, i, p, rc, out.trace[i]))
                return

    tree = compact_cyclic(t, depth, fuel, "bt", hook=hook)
    closed = tree.closed
    if found:
        return SimplicityReport("not_simple", found[0], closed, depth)
    if closed and complete[0]:
        return SimplicityReport("simple", None, closed, depth)
    return SimplicityReport("unknown", None, closed, depth)
