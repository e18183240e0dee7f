"""Comparing clocked trees, and discriminating terms with them.

Annotation relations (≤, =, ≥ on step counts; subsequence, equality on
step-position lists) are lifted to whole trees either *globally* (at
every mutually resolved position) or *eventually* (from some depth
level on).  On closed cyclic trees the eventual form is decided
exactly: annotations repeat along cycles, so a violation matters iff it
is reachable from a cycle, and otherwise the minimal level is one more
than the deepest violation along the acyclic part.

``discriminate`` turns these checks into verdicts.  It never claims
convertibility; an ``inconvertible`` verdict always rests on one of:

* the trees themselves differ at a mutually resolved position;
* two simple terms (or simple reducts) whose closed trees provably do
  not match eventually;
* a simple term whose closed tree provably does not improve eventually
  on the other side's tree;
* an exhaustive reduct enumeration with a caller-supplied certificate
  that the bound covers all reducts.

Anything weaker yields ``inconclusive`` together with the evidence
gathered (an improving reduct when one was found, or the search
bounds).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .reduction import (
    DEFAULT_FUEL,
    contract_at,
    redex_positions,
)
from .terms import Position, Term, pos_str
from .trees import (
    DEFAULT_DEPTH,
    BackEdge,
    ClockTree,
    Node,
    SharedRef,
    SimplicityReport,
    check_simple,
    child_step,
    compact_cyclic,
    node_at,
)


class Relation(Enum):
    """A relation on node annotations, liftable to whole trees."""

    LE = "le"
    EQ = "eq"
    GE = "ge"
    SUBSEQ_LE = "subseq_le"
    LIST_EQ = "list_eq"
    SUBSEQ_GE = "subseq_ge"

    @property
    def on_lists(self) -> bool:
        return self in (Relation.SUBSEQ_LE, Relation.LIST_EQ, Relation.SUBSEQ_GE)

    def holds_for(self, a: Node, b: Node) -> bool:
        """Apply to annotated nodes ``a``, ``b``."""
        if self.on_lists:
            p, q = a.steps, b.steps
            assert p is not None and q is not None
            match self:
                case Relation.SUBSEQ_LE:
                    return subseq_le(p, q)
                case Relation.LIST_EQ:
                    return tuple(p) == tuple(q)
                case Relation.SUBSEQ_GE:
                    return subseq_le(q, p)
        ka, kb = a.count, b.count
        assert ka is not None and kb is not None
        match self:
            case Relation.LE:
                return ka <= kb
            case Relation.EQ:
                return ka == kb
            case Relation.GE:
                return ka >= kb
        raise AssertionError(self)


def subseq_le(q, p) -> bool:
    """Is ``q`` an order-preserving (not necessarily contiguous)
    subsequence of ``p``?  The natural order on atomic clock lists."""
    it = iter(p)
    for x in q:
        for y in it:
            if x == y:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# product-graph machinery

_REAL = ("hnf", "lam", "head", "var", "app", "bottom", "unknown")


class _Side:
    """One tree preprocessed for paired unfolding.

    Back edges and shared references are resolved to their target
    nodes, every node's head (or variable) reference is turned into a
    *binder identity* — the node that opened the binder plus the index
    within its block — and each node gets the set of binder identities
    its subtree can still mention from above.  Identities are stable
    across repeated occurrences of a node precisely because repetition
    is literal: a back edge or shared reference reuses the generating
    term verbatim, free variables and all.
    """

    __slots__ = ("children", "refid", "blocks", "relevant")

    def __init__(self, tree: ClockTree):
        children: dict[int, list[Node]] = {}
        refid: dict[int, tuple | None] = {}
        blocks: dict[int, tuple] = {}
        order: list[Node] = []

        def resolve(c: Node, stack: list[Node]) -> Node:
            while True:
                if c.kind == "backedge":
                    assert isinstance(c, BackEdge)
                    c = stack[len(stack) - c.delta]
                elif c.kind == "shared":
                    assert isinstance(c, SharedRef)
                    c = c.target
                else:
                    return c

        def walk(n: Node, stack: list[Node]):
            if id(n) in children:
                return
            order.append(n)
            stack.append(n)
            children[id(n)] = [resolve(c, stack) for c in n.children]
            r = getattr(n, "head_ref", None)
            if r is None:
                r = getattr(n, "ref", None)
            if r is not None and r[0] == "b":
                opener = stack[len(stack) - 1 - r[1]]
                refid[id(n)] = ("x", id(opener), r[2])
            else:
                refid[id(n)] = r
            if n.kind == "hnf":
                arity = len(n.binders)  # type: ignore[attr-defined]
            else:
                arity = 1 if n.kind == "lam" else 0
            blocks[id(n)] = tuple(("x", id(n), i) for i in range(arity))
            for c in n.children:
                if c.kind in _REAL:
                    walk(c, stack)
            stack.pop()

        walk(tree.root, [])

        # Which identities from above can a node's whole (cyclic)
        # subtree still reference?  Fixpoint over the graph.
        relevant: dict[int, frozenset] = {id(n): frozenset() for n in order}
        changed = True
        while changed:
            changed = False
            for n in reversed(order):
                s: set = set()
                r = refid[id(n)]
                if r is not None and r[0] == "x":
                    s.add(r)
                for c in children[id(n)]:
                    s.update(relevant[id(c)])
                s.difference_update(blocks[id(n)])
                fs = frozenset(s)
                if fs != relevant[id(n)]:
                    relevant[id(n)] = fs
                    changed = True
        self.children = children
        self.refid = refid
        self.blocks = blocks
        self.relevant = relevant


@dataclass
class _Product:
    """Exploration of the paired unfolding of two trees."""

    states: list[tuple]
    edges: dict[int, list[tuple[int, int]]]  # state -> [(child state, digits)]
    depth: dict[int, int]  # shortest digit-depth from the root pair
    shape_bad: int | None  # first state whose layers differ
    ann_bad: set[int]  # states where the relation fails
    unknown: bool  # some reachable state is unresolved

    def recurring(self) -> set[int]:
        """States reachable from a cycle (they occur at unboundedly
        deep positions of the unfolding)."""
        n = len(self.states)
        # Tarjan SCC, iterative.
        index = [0] * n
        low = [0] * n
        onstk = [False] * n
        comp = [-1] * n
        counter = 1
        stk: list[int] = []
        ncomp = 0
        members: list[list[int]] = []
        for s0 in range(n):
            if index[s0]:
                continue
            work = [(s0, 0)]
            while work:
                s, pi = work.pop()
                if pi == 0:
                    nonlocal_counter = counter
                    index[s] = low[s] = nonlocal_counter
                    counter += 1
                    stk.append(s)
                    onstk[s] = True
                kids = self.edges.get(s, ())
                advanced = False
                while pi < len(kids):
                    t = kids[pi][0]
                    pi += 1
                    if not index[t]:
                        work.append((s, pi))
                        work.append((t, 0))
                        advanced = True
                        break
                    if onstk[t]:
                        low[s] = min(low[s], index[t])
                if advanced:
                    continue
                if low[s] == index[s]:
                    group = []
                    while True:
                        t = stk.pop()
                        onstk[t] = False
                        comp[t] = ncomp
                        group.append(t)
                        if t == s:
                            break
                    members.append(group)
                    ncomp += 1
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[s])
        cyclic = set()
        for group in members:
            if len(group) > 1:
                cyclic.update(group)
            else:
                s = group[0]
                if any(t == s for t, _ in self.edges.get(s, ())):
                    cyclic.add(s)
        # forward closure
        seen = set(cyclic)
        todo = list(cyclic)
        while todo:
            s = todo.pop()
            for t, _ in self.edges.get(s, ()):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen

    def deepest_violation(self) -> int:
        """Longest digit-distance from the root to a violating state;
        only meaningful when no violation is recurring (the relevant
        region is then acyclic)."""
        if not self.ann_bad:
            return -1
        # states that can reach a violation
        rev: dict[int, list[int]] = {}
        for s, kids in self.edges.items():
            for t, _ in kids:
                rev.setdefault(t, []).append(s)
        relevant = set(self.ann_bad)
        todo = list(self.ann_bad)
        while todo:
            s = todo.pop()
            for p in rev.get(s, ()):
                if p not in relevant:
                    relevant.add(p)
                    todo.append(p)
        # longest path over the (acyclic) relevant region
        longest = {0: 0} if 0 in relevant else {}
        order: list[int] = []
        seen: set[int] = set()
        stack = [(0, False)] if 0 in relevant else []
        while stack:
            s, done = stack.pop()
            if done:
                order.append(s)
                continue
            if s in seen:
                continue
            seen.add(s)
            stack.append((s, True))
            for t, _ in self.edges.get(s, ()):
                if t in relevant and t not in seen:
                    stack.append((t, False))
        for s in reversed(order):
            base = longest.get(s)
            if base is None:
                continue
            for t, w in self.edges.get(s, ()):
                if t in relevant and longest.get(t, -1) < base + w:
                    longest[t] = base + w
        return max(longest.get(s, self.depth[s]) for s in self.ann_bad)


def _explore(t1: ClockTree, t2: ClockTree, rel: Relation) -> _Product:
    if t1.semantics != t2.semantics:
        raise ValueError(
            f"cannot compare {t1.semantics!r} tree with {t2.semantics!r} tree"
        )
    s1, s2 = _Side(t1), _Side(t2)

    a0, b0 = t1.root, t2.root
    states: list[tuple[Node, Node, frozenset]] = [(a0, b0, frozenset())]
    key = {(id(a0), id(b0), frozenset()): 0}
    edges: dict[int, list[tuple[int, int]]] = {}
    depth = {0: 0}
    shape_bad: int | None = None
    ann_bad: set[int] = set()
    unknown = False
    i = 0
    while i < len(states):
        a, b, rho = states[i]
        if a.kind == "unknown" or b.kind == "unknown":
            unknown = True
            i += 1
            continue
        ba, bb = s1.blocks[id(a)], s2.blocks[id(b)]
        ca, cb = s1.children[id(a)], s2.children[id(b)]
        ok = a.kind == b.kind and len(ba) == len(bb) and len(ca) == len(cb)
        pairing = rho
        if ok and ba:
            # opening a block shadows, on either side, whatever its
            # binders were previously paired with
            fresh = set(bb)
            pairing = frozenset(
                (x, y) for x, y in rho if y not in fresh
            ) | frozenset(zip(ba, bb))
        if ok:
            ra, rb = s1.refid[id(a)], s2.refid[id(b)]
            if (ra is None) != (rb is None):
                ok = False
            elif ra is not None:
                if ra[0] == "f" or rb[0] == "f":
                    ok = ra == rb
                else:
                    ok = (ra, rb) in pairing
        if not ok:
            if shape_bad is None:
                shape_bad = i
            i += 1
            continue
        if a.count is not None and b.count is not None:
            if not rel.holds_for(a, b):
                ann_bad.add(i)
        kid_edges = []
        for slot in range(len(ca)):
            na, nb = ca[slot], cb[slot]
            keep = s1.relevant[id(na)]
            rho_c = frozenset((x, y) for x, y in pairing if x in keep)
            k = (id(na), id(nb), rho_c)
            j = key.get(k)
            w = len(child_step(a, slot))
            if j is None:
                j = len(states)
                key[k] = j
                states.append((na, nb, rho_c))
                depth[j] = depth[i] + w
            else:
                depth[j] = min(depth[j], depth[i] + w)
            kid_edges.append((j, w))
        edges[i] = kid_edges
        i += 1
    return _Product(states, edges, depth, shape_bad, ann_bad, unknown)


# ---------------------------------------------------------------------------
# the lifted relations


def compare_at(t1: ClockTree, t2: ClockTree, p: Position, rel: Relation) -> bool | None:
    """Does ``rel`` hold between the annotations at position ``p``?

    True also when neither node is annotated; None when the position is
    missing on either side or runs into an unresolved subtree.
    """
    a, b = node_at(t1, p), node_at(t2, p)
    if a is None or b is None or a.kind == "unknown" or b.kind == "unknown":
        return None
    if a.count is None and b.count is None:
        return True
    if a.count is None or b.count is None:
        return False
    return rel.holds_for(a, b)


def holds_globally(t1: ClockTree, t2: ClockTree, rel: Relation) -> bool | None:
    """Equal layer structure and ``rel`` at every mutually resolved
    position; None when unresolved subtrees leave this undetermined."""
    prod = _explore(t1, t2, rel)
    if prod.shape_bad is not None or prod.ann_bad:
        return False
    return None if prod.unknown else True


@dataclass(frozen=True)
class EventualResult:
    """Outcome of an eventual (from some depth on) tree comparison.

    ``certified`` distinguishes an exact answer over the finite cycle
    graph from bounded-depth evidence on trees with unresolved parts.
    For a holding result ``level`` is the least depth that works; for a
    failing one it is the depth of a witnessing violation.
    """

    holds: bool
    level: int
    certified: bool


def holds_eventually(t1: ClockTree, t2: ClockTree, rel: Relation) -> EventualResult:
    """Decide whether ``rel`` holds from some position length on.

    The answer is certified when the violation recurs along a cycle (a
    definite no) or when every reachable pair is resolved (then the
    finite graph covers the whole unfolding).  A layer-structure
    difference is a certified no outright.
    """
    prod = _explore(t1, t2, rel)
    if prod.shape_bad is not None:
        return EventualResult(False, prod.depth[prod.shape_bad], True)
    if prod.ann_bad:
        recurring = prod.recurring()
        bad_forever = prod.ann_bad & recurring
        if bad_forever:
            lvl = min(prod.depth[s] for s in bad_forever)
            return EventualResult(False, lvl, True)
        level = prod.deepest_violation() + 1
    else:
        level = 0
    return EventualResult(True, level, not prod.unknown)


# ---------------------------------------------------------------------------
# reduct search


def enumerate_reducts(
    t: Term, limit: int = 2000, size_limit: int = 500
) -> list[Term]:
    """Breadth-first closure of ``t`` under single reduction steps (the
    term itself first), deduplicated up to renaming; terms larger than
    ``size_limit`` are pruned, at most ``limit`` terms are produced."""
    seen = {t}
    out = [t]
    i = 0
    while i < len(out) and len(out) < limit:
        cur = out[i]
        i += 1
        for p in redex_positions(cur):
            r = contract_at(cur, p)
            if r.size <= size_limit and r not in seen:
                seen.add(r)
                out.append(r)
                if len(out) >= limit:
                    break
    return out


def bounded_joinable(
    a: Term, b: Term, limit: int = 2000, size_limit: int = 500
) -> Term | None:
    """Search for a common reduct by expanding both reduction graphs
    breadth-first; None when the bound is hit without a meeting point."""
    if a == b:
        return a
    seen_a, seen_b = {a}, {b}
    front_a, front_b = [a], [b]
    while front_a or front_b:
        if len(seen_a) + len(seen_b) > 2 * limit:
            return None
        nxt: list[Term] = []
        for cur in front_a:
            for p in redex_positions(cur):
                r = contract_at(cur, p)
                if r.size > size_limit or r in seen_a:
                    continue
                if r in seen_b:
                    return r
                seen_a.add(r)
                nxt.append(r)
        front_a = nxt
        nxt = []
        for cur in front_b:
            for p in redex_positions(cur):
                r = contract_at(cur, p)
                if r.size > size_limit or r in seen_b:
                    continue
                if r in seen_a:
                    return r
                seen_b.add(r)
                nxt.append(r)
        front_b = nxt
    return None


def find_simple_reduct(
    t: Term,
    depth: int = DEFAULT_DEPTH,
    fuel: int = DEFAULT_FUEL,
    extra: tuple[Term, ...] = (),
    limit: int = 2000,
    size_limit: int = 500,
    check_limit: int = 200,
) -> tuple[Term, SimplicityReport] | None:
    """A reduct of ``t`` whose every tree-computing head step is simple.

    Tries ``t`` itself and any caller-supplied candidates first, then
    enumerated reducts in order of increasing size, classifying at most
    ``check_limit`` of them.
    """
    tried = set()
    for c in (t, *extra):
        if c in tried:
            continue
        tried.add(c)
        rep = check_simple(c, depth, fuel)
        if rep.status == "simple":
            return c, rep
    pool = enumerate_reducts(t, limit, size_limit)
    pool.sort(key=lambda u: u.size)
    checked = 0
    for c in pool:
        if checked >= check_limit:
            break
        if c in tried:
            continue
        tried.add(c)
        checked += 1
        rep = check_simple(c, depth, fuel)
        if rep.status == "simple":
            return c, rep
    return None


# ---------------------------------------------------------------------------
# verdicts


INCONVERTIBLE = "inconvertible"
INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    """What the comparison established about β-convertibility."""

    conclusion: str  # INCONVERTIBLE | INCONCLUSIVE
    justification: str  # see discriminate
    evidence: dict

    def __bool__(self) -> bool:
        return self.conclusion == INCONVERTIBLE

    def to_dict(self) -> dict:
        return {
            "conclusion": self.conclusion,
            "justification": self.justification,
            "evidence": self.evidence,
        }


@dataclass
class DiscriminationConfig:
    depth: int = DEFAULT_DEPTH
    fuel: int = DEFAULT_FUEL
    atomic: bool = False
    reduct_limit: int = 2000
    size_limit: int = 500
    simple_check_limit: int = 200
    global_check_limit: int = 60
    reducts_m: tuple[Term, ...] = ()
    reducts_n: tuple[Term, ...] = ()
    # Called with the list of enumerated reducts and whether the
    # enumeration was exhaustive; returning True certifies that every
    # reduct has been covered by the non-improvement check.
    certify_all_reducts: Callable[[list[Term], bool], bool] | None = None


def discriminate(
    m: Term, n: Term, config: DiscriminationConfig | None = None
) -> Verdict:
    """Try to establish that ``m`` and ``n`` are not β-convertible.

    Pipeline: (1) a structural difference between the trees at a
    mutually resolved position is definitive on its own; (2) when both
    sides have simple reducts with closed trees, a certified failure of
    eventual matching is definitive; (3) when one side has a simple
    reduct, a certified failure of that side improving eventually on
    the other is definitive; (4) otherwise enumerate reducts of ``m``
    looking for one improving globally on ``n`` — finding one, or
    running out of budget without a completeness certificate, is
    inconclusive.
    """
    cfg = config or DiscriminationConfig()
    eq_rel = Relation.LIST_EQ if cfg.atomic else Relation.EQ
    le_rel = Relation.SUBSEQ_LE if cfg.atomic else Relation.LE

    tm = compact_cyclic(m, cfg.depth, cfg.fuel, "bt", atomic=cfg.atomic)
    tn = compact_cyclic(n, cfg.depth, cfg.fuel, "bt", atomic=cfg.atomic)
    base = {
        "depth": cfg.depth,
        "fuel": cfg.fuel,
        "atomic": cfg.atomic,
        "closed": [tm.closed, tn.closed],
    }

    # (1) the trees themselves differ
    prod = _explore(tm, tn, eq_rel)
    if prod.shape_bad is not None:
        a, b, _ = prod.states[prod.shape_bad]
        return Verdict(
            INCONVERTIBLE,
            "different-bt",
            base
            | {
                "position_depth": prod.depth[prod.shape_bad],
                "kinds": [a.kind, b.kind],
            },
        )

    # (2)/(3) need simple reducts
    sm = find_simple_reduct(
        m, cfg.depth, cfg.fuel, cfg.reducts_m,
        cfg.reduct_limit, cfg.size_limit, cfg.simple_check_limit,
    )
    sn = find_simple_reduct(
        n, cfg.depth, cfg.fuel, cfg.reducts_n,
        cfg.reduct_limit, cfg.size_limit, cfg.simple_check_limit,
    )
    tsm = (
        compact_cyclic(sm[0], cfg.depth, cfg.fuel, "bt", atomic=cfg.atomic)
        if sm
        else None
    )
    tsn = (
        compact_cyclic(sn[0], cfg.depth, cfg.fuel, "bt", atomic=cfg.atomic)
        if sn
        else None
    )

    if tsm is not None and tsn is not None and tsm.closed and tsn.closed:
        ev = holds_eventually(tsm, tsn, eq_rel)
        if not ev.holds and ev.certified:
            return Verdict(
                INCONVERTIBLE,
                "simple-eventual-mismatch",
                base | {"level": ev.level, "relation": eq_rel.value},
            )

    for tree_simple, tree_other, side in (
        (tsm, tn, "first"),
        (tsn, tm, "second"),
    ):
        if tree_simple is None or not tree_simple.closed:
            continue
        ev = holds_eventually(tree_simple, tree_other, le_rel)
        if not ev.holds and ev.certified:
            return Verdict(
                INCONVERTIBLE,
                "simple-no-improvement",
                base
                | {
                    "level": ev.level,
                    "relation": le_rel.value,
                    "simple_side": side,
                },
            )

    # (4) reducts of m vs the tree of n
    pool = enumerate_reducts(m, cfg.reduct_limit, cfg.size_limit)
    exhaustive = len(pool) < cfg.reduct_limit
    improving = None
    for r in pool[: cfg.global_check_limit]:
        tr = compact_cyclic(r, cfg.depth, cfg.fuel, "bt", atomic=cfg.atomic)
        if holds_globally(tr, tn, le_rel):
            improving = r
            break
    if improving is not None:
        return Verdict(
            INCONCLUSIVE,
            "none",
            base | {"improving_reduct": True, "reducts_enumerated": len(pool)},
        )
    covered = len(pool) <= cfg.global_check_limit and exhaustive
    if covered and cfg.certify_all_reducts is not None and cfg.certify_all_reducts(
        pool, exhaustive
    ):
        return Verdict(
            INCONVERTIBLE,
            "general-no-reduct-improves",
            base | {"reducts_checked": len(pool), "exhaustive": True},
        )
    return Verdict(
        INCONCLUSIVE,
        "none",
        base
        | {
            "improving_reduct": False,
            "reducts_enumerated": len(pool),
            "reducts_checked": min(len(pool), cfg.global_check_limit),
            "exhaustive": exhaustive,
        },
    )
