"""Critical-difference diagrams rendered as hand-built SVG plus a text twin.

Output is assembled from fixed-precision strings only, so identical inputs
give identical bytes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from featad.errors import DegenerateInput

WIDTH = 640
AXIS_LEFT = 170
AXIS_RIGHT = 470
AXIS_Y = 90
ROW_GAP = 22


def method_label(rank: float, name: str, auc_mean: float, auc_std: float) -> str:
    return f"{rank:.3f} {name} {auc_mean:.3f} ({auc_std:.3f})"


def cliques(mean_ranks: Sequence[float], cd: float) -> list[tuple[int, ...]]:
    """Maximal runs of methods (indices, best first) whose rank spread is below ``cd``."""
    order = sorted(range(len(mean_ranks)), key=lambda i: (mean_ranks[i], i))
    groups: list[tuple[int, ...]] = []
    for start in range(len(order)):
        stop = start
        while stop + 1 < len(order) and mean_ranks[order[stop + 1]] - mean_ranks[order[start]] < cd:
            stop += 1
        if stop > start:
            group = tuple(order[start : stop + 1])
            if not groups or not set(group) <= set(groups[-1]):
                groups.append(group)
    return groups


def _x(rank: float, M: int) -> float:
    return AXIS_LEFT + (rank - 1.0) * (AXIS_RIGHT - AXIS_LEFT) / (M - 1)


def _svg(
    mean_ranks: Sequence[float],
    labels: Sequence[str],
    cd: float,
    title: str,
    groups: list[tuple[int, ...]],
) -> str:
    M = len(mean_ranks)
    order = sorted(range(M), key=lambda i: (mean_ranks[i], i))
    n_left = (M + 1) // 2
    height = AXIS_Y + 40 + ROW_GAP * max(n_left, M - n_left) + 12 * len(groups) + 20
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}" font-family="monospace" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="16" text-anchor="middle" font-size="13">{escape(title)}</text>')

    # CD ruler
    x0 = _x(1.0, M)
    x1 = _x(1.0 + cd, M) if cd <= M - 1 else _x(float(M), M)
    out.append(f'<line x1="{x0:.2f}" y1="40" x2="{x1:.2f}" y2="40" stroke="black" stroke-width="1.5"/>')
    out.append(f'<line x1="{x0:.2f}" y1="35" x2="{x0:.2f}" y2="45" stroke="black"/>')
    out.append(f'<line x1="{x1:.2f}" y1="35" x2="{x1:.2f}" y2="45" stroke="black"/>')
    out.append(f'<text x="{(x0 + x1) / 2:.2f}" y="32" text-anchor="middle">CD = {cd:.3f}</text>')

    # rank axis with ticks at every integer rank
    out.append(f'<line x1="{AXIS_LEFT}" y1="{AXIS_Y}" x2="{AXIS_RIGHT}" y2="{AXIS_Y}" stroke="black"/>')
    for r in range(1, M + 1):
        x = _x(float(r), M)
        out.append(f'<line x1="{x:.2f}" y1="{AXIS_Y - 5}" x2="{x:.2f}" y2="{AXIS_Y}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{AXIS_Y - 8}" text-anchor="middle">{r}</text>')

    # method bars: better half labeled on the left, the rest on the right
    for pos, i in enumerate(order):
        x = _x(float(mean_ranks[i]), M)
        if pos < n_left:
            y = AXIS_Y + 30 + ROW_GAP * pos
            lx, anchor = AXIS_LEFT - 10, "end"
        else:
            y = AXIS_Y + 30 + ROW_GAP * (M - 1 - pos)
            lx, anchor = AXIS_RIGHT + 10, "start"
        out.append(
            f'<polyline points="{x:.2f},{AXIS_Y} {x:.2f},{y} {lx:.2f},{y}" '
            f'fill="none" stroke="black"/>'
        )
        out.append(
            f'<text x="{lx + (-3 if anchor == "end" else 3):.2f}" y="{y + 4}" '
            f'text-anchor="{anchor}">{escape(labels[i])}</text>'
        )

    # clique bars joining methods that are not significantly different
    for g, group in enumerate(groups):
        y = AXIS_Y + 12 + 5 * g
        lo = _x(float(mean_ranks[group[0]]), M) - 3
        hi = _x(float(mean_ranks[group[-1]]), M) + 3
        out.append(f'<line x1="{lo:.2f}" y1="{y}" x2="{hi:.2f}" y2="{y}" stroke="black" stroke-width="3"/>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _text(
    mean_ranks: Sequence[float],
    labels: Sequence[str],
    names: Sequence[str],
    cd: float,
    title: str,
    groups: list[tuple[int, ...]],
    extra: Sequence[str],
) -> str:
    order = sorted(range(len(mean_ranks)), key=lambda i: (mean_ranks[i], i))
    lines = [f"critical difference diagram: {title}" if title else "critical difference diagram"]
    lines.append(f"methods: {len(mean_ranks)}  CD: {cd:.3f}")
    lines.extend(extra)
    lines.append("rank  method  mean_auc (std_auc):")
    lines.extend(f"  {labels[i]}" for i in order)
    lines.append("not significantly different:")
    if groups:
        lines.extend("  " + ", ".join(names[i] for i in group) for group in groups)
    else:
        lines.append("  (none)")
    return "\n".join(lines) + "\n"


def render_cd_diagram(
    mean_ranks: Sequence[float],
    method_names: Sequence[str],
    auc_means: Sequence[float],
    auc_stds: Sequence[float],
    cd: float,
    out: str | Path,
    title: str = "",
    notes: Sequence[str] = (),
) -> tuple[Path, Path]:
    """Write ``<out>.svg`` and ``<out>.txt``; return both paths.

    Each method is labeled ``"<rank> <name> <mean AUC> (<std AUC>)"``.
    """
    M = len(mean_ranks)
    if M < 2:
        raise DegenerateInput(f"a diagram needs at least 2 methods, got {M}")
    if not len(method_names) == len(auc_means) == len(auc_stds) == M:
        raise DegenerateInput("mean_ranks, method_names, auc_means and auc_stds differ in length")
    labels = [method_label(r, n, a, s) for r, n, a, s in zip(mean_ranks, method_names, auc_means, auc_stds)]
    groups = cliques(mean_ranks, cd)

    out = Path(out)
    if out.suffix in (".svg", ".txt"):
        out = out.with_suffix("")
    svg_path = out.parent / (out.name + ".svg")
    txt_path = out.parent / (out.name + ".txt")
    svg_path.write_text(_svg(mean_ranks, labels, cd, title, groups), encoding="utf-8")
    txt_path.write_text(_text(mean_ranks, labels, method_names, cd, title, groups, notes), encoding="utf-8")
    return svg_path, txt_path
