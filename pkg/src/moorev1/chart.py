"""Adams-chart coordinates and deterministic chart rendering.

The trigrading collapses to Adams (filtration, internal degree) by
(s,t,u) -> (s+u, t+u); under it v1 lands at (1,3), h(1,1) at (1,2), and
v1*h(n+1,1) on the bidegree (2, 2^(n+2)+1) of x(n).  Charts are drawn in
(stem, filtration) coordinates with stem = t - s.

Rendering is plain SVG 1.1 or a text grid, byte-identical for identical
input: every collection is sorted before drawing, coordinates are
integers, and colors come from a fixed palette indexed by group.  The
colors carry no meaning.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .gf2poly import GF2PolyError, Multidegree
from .mahowald import ZBHTables
from .specseq import bo_pattern_dim, bu_pattern_dim

__all__ = [
    "AdamsBidegree",
    "ChartDot",
    "ChartLine",
    "ChartDoc",
    "collapse",
    "page_chart",
    "decomposition_chart",
    "render",
    "render_svg",
    "render_txt",
    "PALETTE",
]

# multiplication steps in (stem, filtration) coordinates
H11_STEP = (1, 1)
V1_STEP = (2, 1)

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#bcbd22",
    "#7f7f7f",
    "#aec7e8",
    "#98df8a",
)


@dataclass(frozen=True)
class AdamsBidegree:
    s_adams: int
    t_adams: int

    @property
    def stem(self) -> int:
        return self.t_adams - self.s_adams


def collapse(d: Multidegree) -> AdamsBidegree:
    return AdamsBidegree(d.s + d.u, d.t + d.u)


@dataclass(frozen=True)
class ChartDot:
    stem: int
    filt: int
    group: str
    seq: int = 0  # distinguishes same-group dots on one cell


@dataclass(frozen=True)
class ChartLine:
    kind: str  # h11 | v1
    stem1: int
    filt1: int
    stem2: int
    filt2: int


def _structure_lines(dots: Sequence[ChartDot], successor=None) -> List[ChartLine]:
    """Connect each dot to its h11- and v1-multiple.  The target cell must
    hold a dot of the group successor(group, kind); by default the same
    group."""
    cells = {(d.stem, d.filt, d.group) for d in dots}
    lines = set()
    for stem, filt, group in cells:
        for kind, (ds, df) in (("h11", H11_STEP), ("v1", V1_STEP)):
            target = group if successor is None else successor(group, kind)
            if target is not None and (stem + ds, filt + df, target) in cells:
                lines.add(ChartLine(kind, stem, filt, stem + ds, filt + df))
    return sorted(lines, key=lambda l: (l.kind, l.stem1, l.filt1))


class ChartDoc:
    """Dots, structure lines, and a viewport, ready to render."""

    def __init__(
        self,
        dots: Iterable[ChartDot],
        title: str = "",
        pad: int = 1,
        line_successor=None,
    ):
        self.dots = sorted(set(dots), key=lambda d: (d.stem, d.filt, d.group, d.seq))
        self.title = title
        self.lines = _structure_lines(self.dots, line_successor)
        self.groups = sorted({d.group for d in self.dots})
        self._group_index = {g: i for i, g in enumerate(self.groups)}
        if self.dots:
            stems = [d.stem for d in self.dots]
            filts = [d.filt for d in self.dots]
            self.viewport = (
                min(stems) - pad,
                max(stems) + pad,
                min(filts) - pad,
                max(filts) + pad,
            )
        else:
            self.viewport = (0, 4, 0, 4)

    def color_of(self, group: str) -> str:
        return PALETTE[self._group_index[group] % len(PALETTE)]

    def counts(self) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for d in self.dots:
            out[(d.stem, d.filt)] = out.get((d.stem, d.filt), 0) + 1
        return out


def _u_successor(group: str, kind: str) -> str:
    # h11 keeps the third coordinate, v1 raises it by one
    if kind == "h11":
        return group
    return f"u={int(group[2:]) + 1}"


def page_chart(page, title: str = "") -> ChartDoc:
    """One dot per basis class of a page, collapsed to the Adams chart.
    Dots are grouped by the u-degree they came from, so distinct lines
    landing on the same cell stay distinct dots."""
    dots = []
    label = getattr(page, "name", "") or "page"
    for d in page.degrees():
        ad = collapse(d)
        for i in range(page.dim(d)):
            dots.append(ChartDot(ad.stem, ad.s_adams, f"u={d.u}", i))
    return ChartDoc(dots, title=title or label, line_successor=_u_successor)


def decomposition_chart(
    tables: ZBHTables,
    stem_range: Tuple[int, int] = (0, 24),
    filt_range: Tuple[int, int] = (0, 12),
    title: str = "",
) -> ChartDoc:
    """One group per homology class (a bo pattern suspended by its
    bidegree) and per boundary class (a bu pattern).  Every dot belongs to
    the single group that generated it."""
    dots = []
    specs: List[Tuple[str, int, int]] = []
    for p, q, poly in tables.export_classes("H"):
        specs.append((f"bo[{poly}]", p, q))
    for p, q, poly in tables.export_classes("B"):
        specs.append((f"bu[{poly}]", p, q))
    for group, p, q in specs:
        pattern = bo_pattern_dim if group.startswith("bo") else bu_pattern_dim
        for stem in range(stem_range[0], stem_range[1] + 1):
            for filt in range(filt_range[0], filt_range[1] + 1):
                if pattern(filt - p, stem + filt - q):
                    dots.append(ChartDot(stem, filt, group))
    return ChartDoc(dots, title=title or "decomposition")


# ---- rendering ----

_CELL = 26
_DOT_R = 4
_OFFSETS = ((0, 0), (7, 0), (-7, 0), (0, 7), (0, -7), (7, 7), (-7, -7), (7, -7), (-7, 7))


def render(doc: ChartDoc, fmt: str) -> bytes:
    if fmt == "svg":
        return render_svg(doc)
    if fmt == "txt":
        return render_txt(doc)
    raise GF2PolyError(f"unsupported chart format {fmt!r}")


def _grid(doc: ChartDoc):
    stem_lo, stem_hi, filt_lo, filt_hi = doc.viewport
    ml, mt, mr, mb = 46, 30, 16, 38
    width = ml + (stem_hi - stem_lo + 1) * _CELL + mr
    height = mt + (filt_hi - filt_lo + 1) * _CELL + mb

    def x(stem: int) -> int:
        return ml + (stem - stem_lo) * _CELL + _CELL // 2

    def y(filt: int) -> int:
        return mt + (filt_hi - filt) * _CELL + _CELL // 2

    return width, height, x, y


def render_svg(doc: ChartDoc) -> bytes:
    stem_lo, stem_hi, filt_lo, filt_hi = doc.viewport
    width, height, x, y = _grid(doc)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if doc.title:
        out.append(
            f'<text x="{width // 2}" y="18" text-anchor="middle" '
            f'font-family="monospace" font-size="12" fill="#000000">{doc.title}</text>'
        )
    ax_left = x(stem_lo) - _CELL // 2
    ax_bottom = y(filt_lo) + _CELL // 2
    ax_right = x(stem_hi) + _CELL // 2
    ax_top = y(filt_hi) - _CELL // 2
    out.append(
        f'<line x1="{ax_left}" y1="{ax_bottom}" x2="{ax_right}" y2="{ax_bottom}" '
        f'stroke="#000000" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{ax_left}" y1="{ax_bottom}" x2="{ax_left}" y2="{ax_top}" '
        f'stroke="#000000" stroke-width="1"/>'
    )
    for stem in range(stem_lo, stem_hi + 1):
        if stem % 4 == 0:
            out.append(
                f'<text x="{x(stem)}" y="{ax_bottom + 16}" text-anchor="middle" '
                f'font-family="monospace" font-size="10" fill="#000000">{stem}</text>'
            )
    for filt in range(filt_lo, filt_hi + 1):
        if filt % 4 == 0:
            out.append(
                f'<text x="{ax_left - 6}" y="{y(filt) + 4}" text-anchor="end" '
                f'font-family="monospace" font-size="10" fill="#000000">{filt}</text>'
            )
    for line in doc.lines:
        dash = ' stroke-dasharray="4 3"' if line.kind == "v1" else ""
        out.append(
            f'<line x1="{x(line.stem1)}" y1="{y(line.filt1)}" '
            f'x2="{x(line.stem2)}" y2="{y(line.filt2)}" '
            f'stroke="#555555" stroke-width="1"{dash}/>'
        )
    seen: Dict[Tuple[int, int], int] = {}
    for dot in doc.dots:
        cell = (dot.stem, dot.filt)
        k = seen.get(cell, 0)
        seen[cell] = k + 1
        dx, dy = _OFFSETS[k % len(_OFFSETS)]
        out.append(
            f'<circle cx="{x(dot.stem) + dx}" cy="{y(dot.filt) + dy}" r="{_DOT_R}" '
            f'fill="{doc.color_of(dot.group)}"/>'
        )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("ascii")


def render_txt(doc: ChartDoc) -> bytes:
    stem_lo, stem_hi, filt_lo, filt_hi = doc.viewport
    counts = doc.counts()
    rows = []
    if doc.title:
        rows.append(doc.title)
    for filt in range(filt_hi, filt_lo - 1, -1):
        cells = []
        for stem in range(stem_lo, stem_hi + 1):
            n = counts.get((stem, filt), 0)
            cells.append("  ." if n == 0 else (f"{n:>3}" if n < 10 else "  +"))
        rows.append(f"{filt:>4} |" + "".join(cells))
    rows.append("     +" + "-" * (3 * (stem_hi - stem_lo + 1)))
    labels = []
    for stem in range(stem_lo, stem_hi + 1):
        labels.append(f"{stem:>3}" if stem % 4 == 0 else "   ")
    rows.append("      " + "".join(labels))
    return ("\n".join(rows) + "\n").encode("ascii")
