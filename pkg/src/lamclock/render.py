"""Text and DOT renderings of clocked trees.

The text form is an indented outline, one node per line: annotation
first (``[count]`` or the step-position list ``⟨…⟩``), then the node in
head-normal-form notation.  Loop pointers print where they sit, with
the phase/period decomposition of the repeating position.  The DOT form
draws the same graph for external layout tools; loop pointers become
dashed arrows back to their targets, cross links to shared subtrees
dotted ones.
"""

from __future__ import annotations

from .terms import pos_str
from .trees import BackEdge, ClockTree, Node, SharedRef, child_step


def clock_str(node: Node, atomic: bool) -> str:
    c = node.clock(atomic)
    if c is None:
        return ""
    if atomic:
        return "⟨" + ",".join(c) + "⟩"
    return f"[{c}]"


def _label(n: Node, atomic: bool) -> str:
    ann = clock_str(n, atomic)
    pre = ann + " " if ann else ""
    match n.kind:
        case "hnf":
            binders = "λ" + " ".join(n.binders) + ". " if n.binders else ""
            return f"{pre}{binders}{n.head}"
        case "lam":
            return f"{pre}λ{n.binder}"
        case "head":
            return f"{pre}{n.head}"
        case "app":
            return f"{pre}@"
        case "var":
            return f"{pre}{n.name}"
        case "bottom":
            return "⊥"
        case "unknown":
            return f"? ({n.reason})"
    return f"{pre}{n.kind}"


def render_text(tree: ClockTree, atomic: bool | None = None) -> str:
    """Indented outline of the tree, deterministic for equal inputs."""
    if atomic is None:
        atomic = tree.atomic
    lines: list[str] = []

    def walk(n: Node, stack: list[tuple[Node, tuple]], pos: tuple, depth: int):
        pad = "  " * depth
        if n.kind == "backedge":
            assert isinstance(n, BackEdge)
            idx = len(stack) - n.delta
            tpos = stack[idx][1] if idx >= 0 else ()
            lines.append(
                f"{pad}↺ up {n.delta} "
                f"(phase {pos_str(tpos)}, period {pos_str(pos[len(tpos):])})"
            )
            return
        if n.kind == "shared":
            assert isinstance(n, SharedRef)
            lines.append(f"{pad}→ shared subtree at {pos_str(_def_pos(n, stack))}")
            return
        lines.append(pad + _label(n, atomic))
        stack.append((n, pos))
        for i, c in enumerate(n.children):
            walk(c, stack, pos + child_step(n, i), depth + 1)
        stack.pop()

    def _def_pos(ref: SharedRef, stack) -> tuple:
        return _defs.get(id(ref.target), ())

    _defs: dict[int, tuple] = {}

    def index(n: Node, pos: tuple):
        _defs.setdefault(id(n), pos)
        for i, c in enumerate(n.children):
            if c.kind not in ("backedge", "shared"):
                index(c, pos + child_step(n, i))

    index(tree.root, ())
    walk(tree.root, [], (), 0)
    return "\n".join(lines) + "\n"


def render_dot(tree: ClockTree, atomic: bool | None = None) -> str:
    """DOT digraph; dashed arrows are loop pointers labeled with their
    (phase, period) decomposition, dotted arrows reuse shared subtrees."""
    if atomic is None:
        atomic = tree.atomic
    ids: dict[int, str] = {}
    nodes: list[str] = []
    edges: list[str] = []

    def quote(s: str) -> str:
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    def visit(n: Node, stack: list[tuple[Node, tuple]], pos: tuple) -> str | None:
        nid = f"n{len(ids)}"
        ids[id(n)] = nid
        nodes.append(f"  {nid} [label={quote(_label(n, atomic))}];")
        stack.append((n, pos))
        for i, c in enumerate(n.children):
            cpos = pos + child_step(n, i)
            if c.kind == "backedge":
                assert isinstance(c, BackEdge)
                idx = len(stack) - c.delta
                target, tpos = stack[idx] if idx >= 0 else (None, ())
                lbl = f"({pos_str(tpos)}, {pos_str(cpos[len(tpos):])})"
                edges.append(
                    f"  {nid} -> {ids[id(target)]} "
                    f"[style=dashed, label={quote(lbl)}];"
                )
            elif c.kind == "shared":
                assert isinstance(c, SharedRef)
                edges.append(f"  {nid} -> {ids[id(c.target)]} [style=dotted];")
            else:
                cid = visit(c, stack, cpos)
                edges.append(f"  {nid} -> {cid};")
        stack.pop()
        return nid

    visit(tree.root, [], ())
    out = ["digraph clocktree {", '  node [shape=box, fontname="monospace"];']
    out.extend(nodes)
    out.extend(edges)
    out.append("}")
    return "\n".join(out) + "\n"
