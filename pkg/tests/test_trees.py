"""Clocked trees: construction, annotations, cycles, sharing, simplicity."""

import pytest

from lamclock.parser import parse
from lamclock.terms import App, Free, pos_str
from lamclock.trees import (
    check_simple,
    child_step,
    clocked_bet,
    clocked_bt,
    clocked_llt,
    compact_cyclic,
    iter_nodes,
    node_at,
    periodicity_report,
    strip,
    tree_to_dict,
)

OMEGA = r"(\x.x x) (\x.x x)"


def spine_counts(tree, n):
    """Annotations down the leftmost/only-child chain."""
    out = []
    node = tree.root
    for _ in range(n):
        if getattr(node, "count", None) is None:
            break
        out.append(node.count)
        if not node.children:
            break
        node = node.children[0]
    return out


# ---------------------------------------------------------------------------
# plain (unfolded) trees


def test_curry_tree_annotations(defs):
    tree = clocked_bt(parse("Y0 f", defs), 3)
    assert spine_counts(tree, 3) == [2, 1, 1]
    assert tree.root.head == "f"


def test_turing_tree_annotations(defs):
    tree = clocked_bt(parse("Y1 f", defs), 3)
    assert spine_counts(tree, 3) == [2, 2, 2]


def test_atomic_annotations_double_fpc(defs):
    tree = clocked_bt(parse("eta eta delta x", defs), 2, atomic=True)
    root = tree.root
    assert [pos_str(p) for p in root.steps] == ["11", "1", "1", "e"]
    assert [pos_str(p) for p in root.children[0].steps] == ["11", "1", "1", "e"]


def test_atomic_length_equals_count(defs):
    for text in ("Y0 f", "Y1 f", "E1", "E3", "eta eta delta x"):
        t = parse(text, defs)
        tree = clocked_bt(t, 5)
        for _, node in iter_nodes(tree):
            if node.count is not None:
                assert len(node.steps) == node.count


def test_bottom_on_proven_divergence():
    tree = clocked_bt(parse(OMEGA), 3)
    assert tree.root.kind == "bottom"


def test_unknown_on_depth():
    tree = clocked_bt(parse("Y0 f", defs=None) if False else parse(r"(\x.f (x x)) (\x.f (x x))"), 1)
    assert tree.root.kind == "hnf"
    assert tree.root.children[0].kind == "unknown"


def test_strip_equalizes_the_two_fpc_trees(defs):
    a = strip(clocked_bt(parse("Y0 f", defs), 6))
    b = strip(clocked_bt(parse("Y1 f", defs), 6))

    def shape(n):
        return (n.kind, getattr(n, "head", None), tuple(shape(c) for c in n.children))

    assert shape(a.root) == shape(b.root)
    assert strip(clocked_bt(parse(OMEGA), 2)).root.kind == "bottom"


def test_strip_drops_atomic_and_plain_to_same_tree(defs):
    t = parse("Y1 f", defs)
    a = strip(clocked_bt(t, 4, atomic=True))
    b = strip(clocked_bt(t, 4))

    def shape(n):
        return (n.kind, getattr(n, "head", None), n.count, n.steps,
                tuple(shape(c) for c in n.children))

    assert shape(a.root) == shape(b.root)


# ---------------------------------------------------------------------------
# weak-head and root-stable semantics


def test_llt_one_binder_per_step():
    pp = parse(r"(\x y.x x) (\x y.x x)")
    tree = clocked_llt(pp, 3)
    node = tree.root
    seen = []
    for _ in range(3):
        seen.append((node.kind, node.count))
        node = node.children[0]
    assert seen == [("lam", 1), ("lam", 1), ("lam", 1)]


def test_llt_alternating_zero_cost():
    qq = parse(r"(\x y z.x x) (\x y z.x x)")
    tree = clocked_llt(qq, 4)
    node = tree.root
    seen = []
    for _ in range(4):
        seen.append(node.count)
        node = node.children[0]
    assert seen == [1, 0, 1, 0]


def test_bt_collapses_both_erasers_to_bottom():
    for text in (r"(\x y.x x) (\x y.x x)", r"(\x y z.x x) (\x y z.x x)"):
        assert clocked_bt(parse(text), 3).root.kind == "bottom"


def test_bet_on_stable_application():
    tree = clocked_bet(parse(f"x ({OMEGA})"), 2)
    assert tree.root.kind == "app"
    assert tree.root.count == 0
    fn, arg = tree.root.children
    assert fn.kind == "var"
    assert arg.kind == "bottom"


def test_bet_bottom_on_root_active():
    assert clocked_bet(parse(OMEGA), 2).root.kind == "bottom"


def test_bet_growing_term_not_bottom(defs):
    tree = clocked_bet(parse("delta delta (delta delta)", defs), 2, fuel=200)
    assert tree.root.kind != "bottom"


# ---------------------------------------------------------------------------
# cyclic compaction


def test_cyclic_turing(defs):
    tree = compact_cyclic(parse("Y1 f", defs))
    assert tree.closed
    assert tree.root.count == 2
    (edge,) = tree.root.children
    assert edge.kind == "backedge" and edge.delta == 1


def test_cyclic_curry(defs):
    tree = compact_cyclic(parse("Y0 f", defs))
    assert tree.closed
    assert spine_counts(tree, 2) == [2, 1]
    inner = tree.root.children[0]
    (edge,) = inner.children
    assert edge.kind == "backedge" and edge.delta == 1


def _node_summary(tree):
    """Preorder (applicative position, kind, count, extra) rows."""
    out = []

    def walk(node, pos):
        entry = (pos_str(pos), node.kind, node.count)
        if node.kind == "hnf":
            entry += (node.head,)
        if node.kind == "backedge":
            entry += (node.delta,)
        out.append(entry)
        for i, c in enumerate(node.children):
            walk(c, pos + child_step(node, i))

    walk(tree.root, ())
    return out


def test_cyclic_first_enumerator(defs):
    tree = compact_cyclic(parse("E1", defs))
    assert tree.closed
    assert _node_summary(tree) == [
        ("e", "hnf", 2, "z"),
        ("02", "hnf", 0, "a"),
        ("0200012", "hnf", 0, "b"),
        ("020002", "hnf", 2, "b"),
        ("02000212", "backedge", None, 2),
        ("0200022", "hnf", 2, "c"),
        ("02000222", "backedge", None, 3),
    ]


def test_cyclic_second_enumerator_strict_annotations(defs):
    # same shape as the first enumerator; inner forks cost 6 and 3 steps
    tree = compact_cyclic(parse("E2", defs))
    assert tree.closed
    assert [e[2] for e in _node_summary(tree)] == [2, 0, 0, 6, None, 3, None]


def test_cyclic_third_enumerator_with_sharing(defs):
    tree = compact_cyclic(parse("E3", defs))
    assert tree.closed
    summary = _node_summary(tree)
    kinds = [e[1] for e in summary]
    counts = [e[2] for e in summary]
    assert kinds == [
        "hnf", "hnf", "hnf", "hnf", "hnf", "hnf", "hnf",
        "backedge", "hnf", "backedge", "hnf", "shared",
    ]
    assert counts == [0, 2, 0, 3, 1, 0, 3, None, 0, None, 0, None]
    # the sibling fork reuses the inner cycle rather than copying it
    shared = [n for _, n in iter_nodes(tree) if n.kind == "shared"]
    assert len(shared) == 1
    assert shared[0].target.count == 1


def test_cyclic_two_loop_self_application():
    # M = \z.z M M, realized as a self-application
    m = parse(r"(\w z.z (w w) (w w)) (\w z.z (w w) (w w))")
    tree = compact_cyclic(m)
    assert tree.closed
    report = periodicity_report(tree)
    assert sorted(loop["at"] for loop in report["loops"]) == ["012", "02"]
    assert report["fully_periodic"]


def test_periodicity_of_turing(defs):
    report = periodicity_report(compact_cyclic(parse("Y1 x", defs)))
    assert report["loops"] == [
        {"at": "2", "phase": "e", "period": "2", "delta": 1}
    ]


def test_acyclic_tree_has_no_loops(defs):
    report = periodicity_report(compact_cyclic(parse("S", defs)))
    assert report["loops"] == []


def test_cyclic_matches_unfolded_approximations(defs):
    for text in ("Y0 f", "Y1 f", "E1", "E3"):
        t = parse(text, defs)
        plain = clocked_bt(t, 5)
        cyclic = compact_cyclic(t, 12)

        def shape(n, depth):
            if depth == 0 or n.kind == "unknown":
                return "?"
            return (n.kind, n.count, tuple(shape(c, depth - 1) for c in n.children))

        def unfold(tree, depth):
            def go(pos, depth):
                n = node_at(tree, pos)
                if n is None or depth == 0:
                    return "?"
                kids = tuple(
                    go(pos + child_step(n, i), depth - 1)
                    for i in range(len(n.children))
                )
                return (n.kind, n.count, kids)

            return go((), depth)

        assert shape(plain.root, 4) == unfold(cyclic, 4)


def test_tree_to_dict_schema(defs):
    d = tree_to_dict(compact_cyclic(parse("Y1 f", defs)))
    assert d["closed"] is True
    root = d["root"]
    assert root["kind"] == "hnf" and root["clock"] == 2 and root["head"] == "f"
    edge = root["children"][0]
    assert edge["backedge"] == {"target": root["id"], "phase": "e", "period": "2"}


def test_tree_to_dict_atomic_clock_strings(defs):
    d = tree_to_dict(compact_cyclic(parse("Y1 f", defs), atomic=True))
    assert d["root"]["clock"] == ["1", "e"]


# ---------------------------------------------------------------------------
# simplicity


def test_simple_fpc_sequence(defs):
    assert check_simple(parse("eta eta delta x", defs)).status == "simple"
    assert check_simple(Free("x")).status == "simple"


def test_duplicator_not_simple(defs):
    report = check_simple(parse(r"Y1 (\z.f z z)", defs))
    assert report.status == "not_simple"
    assert report.witness is not None
    assert not report.witness.redex_class.simple


def test_duplicating_growth_refuted_despite_open_tree(defs):
    # the second head step substitutes a redex for a twice-used binder,
    # so the refutation is definite even though the tree never closes
    report = check_simple(parse("delta delta (delta delta)", defs), depth=4, fuel=200)
    assert report.status == "not_simple"
    assert not report.closed


def test_growing_term_simplicity_unknown(defs):
    # every head step here is linear or call-by-value, but the argument
    # keeps doubling so the tree never closes: no verdict either way
    report = check_simple(parse(r"Y1 (\g x. f (g (x x)))", defs), depth=4, fuel=300)
    assert report.status == "unknown"
