"""Adams E2 pages: differentials, homotopy readout, bordism pipelines, charts.

A chart is a set of dots in (stem, filtration) coordinates with h0/h1 edges.
Homotopy groups are read off stem by stem: a maximal h0-chain of length L
contributes Z/2^L, a chain still growing at the top of the computed window
contributes a (2-completed) Z, and isolated dots contribute Z/2.  The only
differential rule ever applied automatically is the Bockstein pairing of
h0-towers coming from the twisted B(Z/2^{n-1}) modules; everything else
defaults to collapse, with the bidegree-possible candidates surfaced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .groups import FinAbGroup, direct_sum
from .modules import GradedA1Module
from .resolution import Dot, ExtChart, ext_chart, minimal_resolution
from .thom import thom_module, twisted_bz_module


@dataclass(frozen=True)
class Differential:
    """Explicit d_page of given rank between two bidegrees."""

    page: int
    source: Tuple[int, int]     # (stem, s)
    target: Tuple[int, int]     # (stem - 1, s + page)
    rank: int = 1

    def __post_init__(self) -> None:
        if self.page < 2:
            raise ValueError("Adams differentials start on page 2")
        stem, s = self.source
        if self.target != (stem - 1, s + self.page):
            raise ValueError("target bidegree inconsistent with the page")


@dataclass(frozen=True)
class BocksteinRule:
    """Pair h0-towers joined by the 2^{n-1} Bockstein of the source module.

    For the charge-2^n family the paired towers sit over consecutive cells
    (d, d+1) recorded in the chart metadata; the differential maps the tower
    over cell d+1 (stem d+1) to the tower over cell d with filtration jump
    n - 1, killing the source entirely and the target above the cut.
    """

    n: int


DifferentialSpec = Sequence[object]    # Differential or BocksteinRule entries


class ChartError(ValueError):
    pass


def _stem_dots(chart: ExtChart, stem: int) -> List[Dot]:
    return sorted(d for d in chart.dots if d[0] == stem)


def stem_chains(chart: ExtChart, stem: int) -> Tuple[List[List[Dot]], List[str]]:
    """Decompose a stem into maximal h0-chains (bottom-up dot lists).

    Returns (chains, ambiguities); a dot with two incoming or outgoing
    h0-edges makes the stem ambiguous and is reported, not resolved.
    """
    dots = _stem_dots(chart, stem)
    up: Dict[Dot, List[Dot]] = {d: [] for d in dots}
    down: Dict[Dot, List[Dot]] = {d: [] for d in dots}
    for a, b in chart.h0_edges:
        if a in up and b in down:
            up[a].append(b)
            down[b].append(a)
    ambiguities = []
    for d in dots:
        if len(up[d]) > 1 or len(down[d]) > 1:
            ambiguities.append(f"dot {d} has multiple h0-edges")
    chains = []
    for d in dots:
        if down[d]:
            continue
        chain = [d]
        while up[chain[-1]]:
            chain.append(up[chain[-1]][0])
        chains.append(chain)
    return chains, ambiguities


def collapse_check(chart: ExtChart, stems: Sequence[int]) -> List[dict]:
    """All bidegree-possible d_r within the stem range, with excludability.

    A candidate is marked excludable when its source bidegree supports no
    h0-multiplication but its target does: then d_r(source) = target would
    force d_r(h0 * source) = h0 * target != 0 while h0 * source = 0.  A
    target at the top of the computed window counts as h0-multipliable (its
    tower continuation is what the deeper re-run confirms).
    An empty list certifies degeneration for degree reasons alone.
    """
    out = []
    dims = chart.dims_table()
    h0_out = {(a[0], a[1]) for a, _ in chart.h0_edges}
    for (stem, s), dim in sorted(dims.items()):
        if stem - 1 not in stems and stem not in stems:
            continue
        for r in range(2, chart.s_max - s + 1):
            tgt = (stem - 1, s + r)
            if dims.get(tgt, 0) == 0:
                continue
            excludable = (stem, s) not in h0_out and (
                tgt in h0_out or tgt[1] >= chart.s_max
            )
            out.append({
                "page": r,
                "source": (stem, s),
                "target": tgt,
                "excludable": excludable,
            })
    return out


def _remove_dots(chart: ExtChart, doomed: set) -> None:
    chart.dots -= doomed
    chart.h0_edges = {e for e in chart.h0_edges
                      if e[0] not in doomed and e[1] not in doomed}
    chart.h1_edges = {e for e in chart.h1_edges
                      if e[0] not in doomed and e[1] not in doomed}


def _apply_explicit(chart: ExtChart, d: Differential) -> None:
    for where, count in ((d.source, d.rank), (d.target, d.rank)):
        stem, s = where
        present = sorted(dd for dd in chart.dots if dd[0] == stem and dd[1] == s)
        if len(present) < count:
            raise ChartError(
                f"differential {d} needs {count} dots at {where}, found {len(present)}"
            )
        _remove_dots(chart, set(present[-count:]))


def _apply_bockstein(chart: ExtChart, rule: BocksteinRule) -> None:
    pairs = chart.metadata.get("bockstein_pairs", ())
    if rule.n >= 3 and not pairs:
        raise ChartError("chart has no Bockstein pairing metadata")
    jump = rule.n - 1
    # towers are only fully visible for stems <= t_max - s_max; pairs beyond
    # the certified window are outside the readout range and are skipped
    window = chart.t_max - chart.s_max
    for low, high in pairs:
        if high > window:
            continue
        src_chains, amb = stem_chains(chart, high)
        tgt_chains, amb2 = stem_chains(chart, low)
        if amb or amb2:
            raise ChartError(f"ambiguous tower structure at stems {low}, {high}")
        if not src_chains:
            raise ChartError(f"no source tower at stem {high} (already consumed?)")
        src = min(src_chains, key=lambda ch: ch[0][1])
        if not tgt_chains:
            raise ChartError(f"no target tower at stem {low}")
        tgt = min(tgt_chains, key=lambda ch: ch[0][1])
        if src[0][1] > 1 or tgt[0][1] > 1:
            raise ChartError("Bockstein pairing expects towers starting at s <= 1")
        cut = src[0][1] + jump
        doomed = set(src) | {d for d in tgt if d[1] >= cut}
        _remove_dots(chart, doomed)


def run_differentials(chart: ExtChart, spec: DifferentialSpec) -> ExtChart:
    """Apply a differential spec and return the resulting (E-infinity) chart."""
    out = chart.copy()
    for entry in spec:
        if isinstance(entry, Differential):
            _apply_explicit(out, entry)
        elif isinstance(entry, BocksteinRule):
            _apply_bockstein(out, entry)
        else:
            raise TypeError(f"unknown differential spec entry {entry!r}")
    return out


@dataclass
class HomotopyReadout:
    groups: Dict[int, FinAbGroup]
    two_complete: bool = True      # Z summands mean the 2-completed integers
    ambiguities: List[str] = field(default_factory=list)
    candidates: List[dict] = field(default_factory=list)

    def table(self) -> List[Tuple[int, FinAbGroup]]:
        return sorted(self.groups.items())

    def as_tuple(self) -> Tuple[FinAbGroup, ...]:
        return tuple(g for _, g in self.table())


def read_homotopy(einf: ExtChart, stems: Sequence[int],
                  confirmed_infinite: Optional[set] = None) -> HomotopyReadout:
    """Assemble homotopy groups from the surviving dots, stem by stem.

    A chain whose top dot sits at the computed filtration ceiling counts as
    infinite (Z); pass ``confirmed_infinite`` to restrict that to chains a
    deeper re-run has confirmed (see ``read_homotopy_confirmed``).
    """
    groups: Dict[int, FinAbGroup] = {}
    ambiguities: List[str] = []
    for stem in stems:
        chains, amb = stem_chains(einf, stem)
        ambiguities.extend(amb)
        parts = []
        for chain in chains:
            touches_top = chain[-1][1] >= einf.s_max
            if touches_top and (confirmed_infinite is None
                                or (stem, chain[0][1]) in confirmed_infinite):
                parts.append(FinAbGroup.free(1))
            else:
                parts.append(FinAbGroup.cyclic(2 ** len(chain)))
        groups[stem] = direct_sum(parts)
    out = HomotopyReadout(groups, ambiguities=ambiguities)
    if ambiguities:
        raise ChartError("; ".join(ambiguities))
    return out


def resolve_to_chart(module: GradedA1Module, s_max: int, t_max: int) -> ExtChart:
    return ext_chart(minimal_resolution(module, s_max, t_max))


def read_homotopy_confirmed(module: GradedA1Module, spec: DifferentialSpec,
                            stems: Sequence[int], s_max: int,
                            t_max: int) -> HomotopyReadout:
    """Readout with the infinite-tower re-run check.

    Chains that reach the filtration ceiling are only reported as Z when a
    re-run two filtrations deeper still shows them at the new ceiling;
    otherwise they were long finite towers and are read as cyclic groups.
    """
    first = run_differentials(resolve_to_chart(module, s_max, t_max), spec)
    deeper = run_differentials(
        resolve_to_chart(module, s_max + 2, t_max + 2), spec)
    confirmed = set()
    for stem in stems:
        for chain in stem_chains(deeper, stem)[0]:
            if chain[-1][1] >= deeper.s_max:
                confirmed.add((stem, chain[0][1]))
    out = read_homotopy(first, stems, confirmed_infinite=confirmed)
    out.candidates = [c for c in collapse_check(first, list(stems))
                      if not c["excludable"]]
    return out


# ---------------------------------------------------------------------------
# the bordism pipelines
# ---------------------------------------------------------------------------

MTH_CASES: Dict[str, Tuple[str, int, int]] = {
    # case -> (Thom spectrum kind, rank, suspension), bottom cell at degree 0
    "pin+": ("MO", 1, -1),
    "pin-": ("MTO", 1, 1),
    "pinc-": ("MO", 2, -2),
    "pinc+": ("MTO", 2, 2),
    "g+": ("MO", 3, -3),
}


def parse_case(case: str) -> Tuple[str, Optional[int]]:
    case = case.strip().lower()
    if case.startswith("spinz2n"):
        arg = case[len("spinz2n"):].strip("():")
        n = int(arg)
        if n < 2:
            raise ValueError("spinz2n needs n >= 2")
        return "spinz2n", n
    if case in MTH_CASES:
        return case, None
    raise ValueError(f"unknown case {case!r}")


def mth_pipeline(case: str, stems: Sequence[int], s_max: int = 9) -> HomotopyReadout:
    """Thom module -> minimal resolution -> chart -> differentials -> groups.

    Valid for stems <= 7 only: above that the spectra are no longer seen by
    the connective real K-theory window (the MSpin splitting acquires extra
    summands from degree 8 on).
    """
    stems = sorted(set(stems))
    if not stems:
        raise ValueError("no stems requested")
    if max(stems) > 7:
        raise ValueError(
            "stems above 7 are outside the change-of-rings window "
            "(the spin cobordism comparison fails past degree 7)"
        )
    if min(stems) < 0:
        raise ValueError("stems must be non-negative")
    name, n = parse_case(case)
    t_max = max(stems) + s_max + 2
    if name == "spinz2n":
        if n >= 3 and max(stems) > 4:
            raise ValueError(
                "stems above 4 for the charge-2^n family with n >= 3 need "
                "differential ranks the tower pairing does not determine"
            )
        module = twisted_bz_module(n, truncation=t_max + 2)
        spec: List[object] = [BocksteinRule(n)] if module.metadata.get(
            "bockstein_pairs") else []
    else:
        kind, rank, shift = MTH_CASES[name]
        module = thom_module(kind, rank, shift=shift, truncation=t_max + 2)
        spec = []
    return read_homotopy_confirmed(module, spec, stems, s_max, t_max)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

SVG_STYLE = {
    "cell": 28,          # pixels per chart square
    "margin": 34,
    "dot_radius": 3.2,
    "dot_color": "#000000",
    "h0_color": "#000000",   # vertical multiplication-by-h0 lines
    "h1_color": "#000000",   # diagonal multiplication-by-h1 lines
    "grid_color": "#cccccc",
    "font": "10px sans-serif",
}


def _dot_positions(chart: ExtChart, stems: Sequence[int]) -> Dict[Dot, Tuple[float, float]]:
    cell = SVG_STYLE["cell"]
    margin = SVG_STYLE["margin"]
    lo = min(stems)
    counts: Dict[Tuple[int, int], int] = {}
    for d in sorted(chart.dots):
        counts[(d[0], d[1])] = counts.get((d[0], d[1]), 0) + 1
    pos = {}
    for d in sorted(chart.dots):
        stem, s, i = d
        if stem not in stems:
            continue
        k = counts[(stem, s)]
        frac = (i + 1) / (k + 1)
        x = margin + (stem - lo + frac) * cell
        y = margin + (chart.s_max - s + 0.5) * cell
        pos[d] = (x, y)
    return pos


def chart_render(chart: ExtChart, fmt: str = "ascii",
                 stems: Optional[Sequence[int]] = None) -> str:
    """Deterministic text rendering: (t-s, s) axes, dots, h0/h1 lines (svg)."""
    if stems is None:
        all_stems = chart.stems()
        stems = list(range(min(all_stems + [0]), max(all_stems + [0]) + 1))
    else:
        stems = list(stems)
    if fmt == "ascii":
        dims = chart.dims_table()
        lines = []
        for s in range(chart.s_max, -1, -1):
            cells = []
            for stem in stems:
                k = dims.get((stem, s), 0)
                cells.append("." if k == 0 else (str(k) if k < 10 else "+"))
            lines.append(f"s={s:<2d} | " + " ".join(cells))
        lines.append("     +-" + "-" * (2 * len(stems) - 1))
        labels = " ".join(str(st % 10) for st in stems)
        lines.append("  t-s  " + labels)
        return "\n".join(lines) + "\n"
    if fmt == "svg":
        cell = SVG_STYLE["cell"]
        margin = SVG_STYLE["margin"]
        width = int(2 * margin + len(stems) * cell)
        height = int(2 * margin + (chart.s_max + 1) * cell)
        pos = _dot_positions(chart, stems)
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
        ]
        for i in range(len(stems) + 1):
            x = margin + i * cell
            parts.append(
                f'<line x1="{x}" y1="{margin}" x2="{x}" '
                f'y2="{height - margin}" stroke="{SVG_STYLE["grid_color"]}" '
                f'stroke-width="0.5"/>')
        for j in range(chart.s_max + 2):
            y = margin + j * cell
            parts.append(
                f'<line x1="{margin}" y1="{y}" x2="{width - margin}" '
                f'y2="{y}" stroke="{SVG_STYLE["grid_color"]}" stroke-width="0.5"/>')
        for edges, color in ((chart.h0_edges, SVG_STYLE["h0_color"]),
                             (chart.h1_edges, SVG_STYLE["h1_color"])):
            for a, b in sorted(edges):
                if a in pos and b in pos:
                    (x1, y1), (x2, y2) = pos[a], pos[b]
                    parts.append(
                        f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" '
                        f'y2="{y2:.1f}" stroke="{color}" stroke-width="1"/>')
        for d in sorted(pos):
            x, y = pos[d]
            parts.append(
                f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{SVG_STYLE["dot_radius"]}" '
                f'fill="{SVG_STYLE["dot_color"]}"/>')
        for i, stem in enumerate(stems):
            x = margin + (i + 0.5) * cell
            parts.append(
                f'<text x="{x:.1f}" y="{height - margin + 14}" '
                f'text-anchor="middle" style="font:{SVG_STYLE["font"]}">{stem}</text>')
        for s in range(chart.s_max + 1):
            y = margin + (chart.s_max - s + 0.5) * cell
            parts.append(
                f'<text x="{margin - 10}" y="{y + 3:.1f}" text-anchor="middle" '
                f'style="font:{SVG_STYLE["font"]}">{s}</text>')
        parts.append("</svg>")
        return "\n".join(parts) + "\n"
    raise ValueError(f"unknown chart format {fmt!r}")
