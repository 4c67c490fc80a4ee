"""Minimal free resolutions over A(1) and the Ext charts read off from them.

The resolver walks internal degrees in increasing order.  At each stage the
kernel of the previous differential is a submodule; new generators are added
exactly where the kernel is not already covered by A(1)-multiples of the
generators chosen so far, preferring kernel vectors with the fewest terms
(ties broken by bit pattern), so charts are reproducible.  Minimality makes
Ext^{s,t} the span of the stage-s generators of internal degree t, and the
h0/h1 edges are the Sq1/Sq2 coefficients of the differential entries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .f2 import F2Matrix, Subspace, kernel_basis
from .modules import GradedA1Module, Report
from .steenrod import (
    A1_DEGREES,
    A1_GENERATOR_WORDS,
    a1_basis_by_degree,
    a1_product_indices,
)

Gen = Tuple[int, int, int]        # (stage, internal degree, index within degree)
Dot = Tuple[int, int, int]        # (stem, filtration s, index)


@dataclass
class FreeStage:
    """One free module in the resolution: generator degrees, in order."""

    gen_degrees: List[int]

    def gens_of_degree(self, t: int) -> List[int]:
        return [i for i, d in enumerate(self.gen_degrees) if d == t]

    def basis(self, t: int) -> List[Tuple[int, int]]:
        """Basis of the degree-t piece: (generator index, A(1)-basis index)."""
        out = []
        for i, d in enumerate(self.gen_degrees):
            for b in a1_basis_by_degree(t - d):
                out.append((i, b))
        return out


@dataclass
class FreeResolution:
    module: GradedA1Module
    s_max: int
    t_max: int
    stages: List[FreeStage]
    # diffs[s][gen index] = {target gen index: frozenset of A(1)-basis indices}
    diffs: List[List[Dict[int, FrozenSet[int]]]]
    # stage-0 augmentation: per generator, (degree, vector into module basis)
    augmentation: List[Tuple[int, int]]

    def stage_degrees(self, s: int) -> List[int]:
        return self.stages[s].gen_degrees


def _free_matrix(stage: FreeStage, diff: List[Dict[int, FrozenSet[int]]],
                 target: FreeStage, t: int) -> F2Matrix:
    """Matrix of the differential on the degree-t piece."""
    src = stage.basis(t)
    tgt = target.basis(t)
    tgt_index = {key: r for r, key in enumerate(tgt)}
    rows = [0] * len(tgt)
    for c, (g, b) in enumerate(src):
        entry = diff[g]
        for tg, coeffs in entry.items():
            # multiply the Sq-word (basis element b) into each coefficient
            for cb in coeffs:
                for k in a1_product_indices(b, cb):
                    r = tgt_index[(tg, k)]
                    rows[r] ^= 1 << c
    return F2Matrix(len(tgt), len(src), rows)


def _augmentation_matrix(module: GradedA1Module, stage: FreeStage,
                         aug: List[Tuple[int, int]], t: int) -> F2Matrix:
    src = stage.basis(t)
    rows = [0] * module.dim(t)
    for c, (g, b) in enumerate(src):
        d0, vec = aug[g]
        img = module.operator(A1_GENERATOR_WORDS[b], d0).apply(vec)
        for r in range(module.dim(t)):
            if (img >> r) & 1:
                rows[r] ^= 1 << c
    return F2Matrix(module.dim(t), len(src), rows)


def _popcount_key(v: int) -> Tuple[int, int]:
    return (v.bit_count(), v)


def minimal_resolution(module: GradedA1Module, s_max: int, t_max: int) -> FreeResolution:
    """Minimal free resolution of ``module`` through (s_max, t_max).

    The module must be faithful through degree t_max, i.e. its truncation
    must reach at least t_max.
    """
    if module.truncation < t_max and not module.complete:
        raise ValueError(
            f"module truncated at {module.truncation} cannot support t_max={t_max}"
        )
    lo = module.min_degree
    stages: List[FreeStage] = []
    diffs: List[List[Dict[int, FrozenSet[int]]]] = []
    augmentation: List[Tuple[int, int]] = []

    # stage 0: minimal generators of the module itself
    stage0 = FreeStage([])
    span: Dict[int, Subspace] = {t: Subspace(module.dim(t)) for t in range(lo, t_max + 1)}

    def add_mod_multiples(t0: int, vec: int) -> None:
        for b in range(1, 8):
            t1 = t0 + A1_DEGREES[b]
            if t1 > t_max:
                continue
            img = module.operator(A1_GENERATOR_WORDS[b], t0).apply(vec)
            if img:
                span[t1].add(img)

    for t in range(lo, t_max + 1):
        for i in range(module.dim(t)):
            v = 1 << i
            if span[t].contains(v):
                continue
            span[t].add(v)
            stage0.gen_degrees.append(t)
            augmentation.append((t, v))
            add_mod_multiples(t, v)
    stages.append(stage0)
    diffs.append([])   # no differential out of stage 0 (augmentation separate)

    for s in range(1, s_max + 1):
        prev = stages[s - 1]
        new_stage = FreeStage([])
        new_diff: List[Dict[int, FrozenSet[int]]] = []
        basis_cache: Dict[int, List[Tuple[int, int]]] = {
            t: prev.basis(t) for t in range(lo, t_max + 1)
        }
        kernel_span: Dict[int, Subspace] = {
            t: Subspace(len(basis_cache[t])) for t in range(lo, t_max + 1)
        }

        def add_free_multiples(t0: int, vec: int) -> None:
            """Record A(1)-multiples of a chosen generator inside the kernel."""
            src = basis_cache[t0]
            for b in range(1, 8):
                t1 = t0 + A1_DEGREES[b]
                if t1 > t_max:
                    continue
                tgt_index = {key: r for r, key in enumerate(basis_cache[t1])}
                img = 0
                rest = vec
                while rest:
                    c = (rest & -rest).bit_length() - 1
                    rest &= rest - 1
                    g, cb = src[c]
                    for k in a1_product_indices(b, cb):
                        img ^= 1 << tgt_index[(g, k)]
                if img:
                    kernel_span[t1].add(img)

        for t in range(lo, t_max + 1):
            if s == 1:
                mat = _augmentation_matrix(module, prev, augmentation, t)
            else:
                mat = _free_matrix(prev, diffs[s - 1], stages[s - 2], t)
            kvecs = sorted(kernel_basis(mat), key=_popcount_key)
            for v in kvecs:
                if kernel_span[t].contains(v):
                    continue
                kernel_span[t].add(v)
                gen_index = len(new_stage.gen_degrees)
                new_stage.gen_degrees.append(t)
                # decode v into {target generator: A(1) coefficients}
                entry: Dict[int, set] = {}
                rest = v
                src = basis_cache[t]
                while rest:
                    c = (rest & -rest).bit_length() - 1
                    rest &= rest - 1
                    g, b = src[c]
                    entry.setdefault(g, set()).add(b)
                new_diff.append({g: frozenset(bs) for g, bs in entry.items()})
                add_free_multiples(t, v)
        stages.append(new_stage)
        diffs.append(new_diff)

    return FreeResolution(module, s_max, t_max, stages, diffs, augmentation)


def exactness_report(r: FreeResolution) -> Report:
    """d o d = 0, exactness by rank counting, and minimality of all entries."""
    failures: List[str] = []
    lo = r.module.min_degree
    for s in range(1, r.s_max + 1):
        for entry in r.diffs[s]:
            for coeffs in entry.values():
                if 0 in coeffs:
                    failures.append(f"non-minimal entry (Sq0 term) at stage {s}")
    for t in range(lo, r.t_max + 1):
        mats: List[F2Matrix] = []
        aug = _augmentation_matrix(r.module, r.stages[0], r.augmentation, t)
        if aug.rank() != r.module.dim(t):
            failures.append(f"stage 0 not surjective onto module at degree {t}")
        mats.append(aug)
        for s in range(1, r.s_max + 1):
            mats.append(_free_matrix(r.stages[s], r.diffs[s], r.stages[s - 1], t))
        for s in range(1, r.s_max + 1):
            prod = mats[s - 1].matmul(mats[s])
            if not prod.is_zero():
                failures.append(f"d o d != 0 at stage {s}, degree {t}")
        for s in range(0, r.s_max):
            dim_here = len(r.stages[s].basis(t))
            if dim_here - mats[s].rank() != mats[s + 1].rank():
                failures.append(f"not exact at stage {s}, degree {t}")
    return Report(not failures, failures)


@dataclass
class ExtChart:
    """Bigraded Ext dots in (stem, filtration) coordinates with h0/h1 edges."""

    s_max: int
    t_max: int
    dots: set = field(default_factory=set)          # {(stem, s, i)}
    h0_edges: set = field(default_factory=set)      # {(dot, dot)} one step up
    h1_edges: set = field(default_factory=set)
    metadata: Dict[str, object] = field(default_factory=dict)

    def dim(self, stem: int, s: int) -> int:
        return sum(1 for d in self.dots if d[0] == stem and d[1] == s)

    def dims_table(self) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for stem, s, _ in self.dots:
            out[(stem, s)] = out.get((stem, s), 0) + 1
        return out

    def stems(self) -> List[int]:
        return sorted({d[0] for d in self.dots})

    def copy(self) -> "ExtChart":
        return ExtChart(self.s_max, self.t_max, set(self.dots),
                        set(self.h0_edges), set(self.h1_edges),
                        dict(self.metadata))

    def named_classes(self) -> Dict[str, Tuple[int, int]]:
        """h0, h1, v, w in (s, t) coordinates, where a single dot is present."""
        names = {"h0": (1, 1), "h1": (1, 2), "v": (3, 7), "w": (4, 12)}
        out = {}
        for name, (s, t) in names.items():
            if self.dim(t - s, s) == 1:
                out[name] = (s, t)
        return out


def ext_chart(r: FreeResolution) -> ExtChart:
    """Chart of Ext^{s,t}(module, F2) from a minimal resolution.

    Dots are stage generators; an h0 (h1) edge joins a stage-s generator to a
    stage-(s+1) generator whose differential entry at it contains Sq1 (Sq2).
    """
    chart = ExtChart(r.s_max, r.t_max, metadata=dict(r.module.metadata))
    gen_dot: Dict[Tuple[int, int], Dot] = {}
    for s, stage in enumerate(r.stages):
        seen: Dict[int, int] = {}
        for g, t in enumerate(stage.gen_degrees):
            i = seen.get(t, 0)
            seen[t] = i + 1
            dot = (t - s, s, i)
            chart.dots.add(dot)
            gen_dot[(s, g)] = dot
    for s in range(1, r.s_max + 1):
        for g, entry in enumerate(r.diffs[s]):
            for tg, coeffs in entry.items():
                if 1 in coeffs:   # Sq1 coefficient
                    chart.h0_edges.add((gen_dot[(s - 1, tg)], gen_dot[(s, g)]))
                if 2 in coeffs:   # Sq2 coefficient
                    chart.h1_edges.add((gen_dot[(s - 1, tg)], gen_dot[(s, g)]))
    return chart


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def chart_to_json_dict(chart: ExtChart) -> dict:
    return {
        "s_max": chart.s_max,
        "t_max": chart.t_max,
        "dots": sorted(list(d) for d in chart.dots),
        "h0_edges": sorted([list(a), list(b)] for a, b in chart.h0_edges),
        "h1_edges": sorted([list(a), list(b)] for a, b in chart.h1_edges),
        "metadata": {
            k: (list(map(list, v)) if isinstance(v, tuple) else v)
            for k, v in chart.metadata.items()
        },
    }


def chart_from_json_dict(data: dict) -> ExtChart:
    meta = dict(data.get("metadata", {}))
    if "bockstein_pairs" in meta:
        meta["bockstein_pairs"] = tuple(tuple(p) for p in meta["bockstein_pairs"])
    return ExtChart(
        int(data["s_max"]),
        int(data["t_max"]),
        {tuple(d) for d in data["dots"]},
        {(tuple(a), tuple(b)) for a, b in data.get("h0_edges", [])},
        {(tuple(a), tuple(b)) for a, b in data.get("h1_edges", [])},
        meta,
    )


def resolution_to_json_dict(r: FreeResolution) -> dict:
    from .steenrod import A1_BASIS

    def render_coeffs(coeffs: FrozenSet[int]) -> List[List[int]]:
        words: set = set()
        for b in coeffs:
            words ^= set(A1_BASIS[b])
        return sorted(list(w) for w in words)

    return {
        "s_max": r.s_max,
        "t_max": r.t_max,
        "stages": [list(st.gen_degrees) for st in r.stages],
        "differentials": [
            [
                {str(tg): render_coeffs(coeffs) for tg, coeffs in sorted(entry.items())}
                for entry in r.diffs[s]
            ]
            for s in range(1, r.s_max + 1)
        ],
        "chart": chart_to_json_dict(ext_chart(r)),
    }


def save_chart(chart: ExtChart, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(chart_to_json_dict(chart), fh, indent=1, sort_keys=True)


def load_chart(path: str) -> ExtChart:
    with open(path, "r", encoding="utf-8") as fh:
        return chart_from_json_dict(json.load(fh))
