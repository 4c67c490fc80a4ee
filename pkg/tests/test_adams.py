"""Differentials, homotopy readout, the bordism pipelines, chart rendering."""

import pytest

from a1ext.adams import (
    BocksteinRule,
    ChartError,
    Differential,
    chart_render,
    collapse_check,
    mth_pipeline,
    read_homotopy,
    read_homotopy_confirmed,
    resolve_to_chart,
    run_differentials,
    stem_chains,
)
from a1ext.groups import FinAbGroup, parse_group
from a1ext.modules import standard_module
from a1ext.resolution import ExtChart


def golden(*names):
    return tuple(parse_group(n) for n in names)


def test_ko_homotopy():
    f2 = standard_module("F2")
    out = read_homotopy_confirmed(f2, [], range(8), s_max=10, t_max=20)
    assert out.as_tuple() == golden("Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0")
    assert out.two_complete


def test_ko_collapse_candidates_all_excludable():
    chart = resolve_to_chart(standard_module("F2"), 10, 20)
    cands = collapse_check(chart, list(range(8)))
    assert cands, "the ko chart does have bidegree-possible differentials"
    assert all(c["excludable"] for c in cands)
    # sources are the h1-multiples, targets sit in the h0-towers
    assert {c["source"] for c in cands} <= {(1, 1), (9, 5)}


def test_single_column_chart_has_no_candidates():
    chart = resolve_to_chart(standard_module("M"), 6, 12)
    assert collapse_check(chart, list(range(8))) == []


def test_mth_goldens():
    # the table rows of the five basic cases, stems 0..4 (pi_0 of the G+
    # spectrum carries the bottom Thom class, forced nonzero)
    want = {
        "pin+": golden("Z/2", "Z/2", "Z/8", "0", "0"),
        "pin-": golden("Z/2", "0", "Z/2", "Z/2", "Z/16"),
        "pinc-": golden("Z/2", "0", "Z + Z/2", "0", "Z/2"),
        "pinc+": golden("Z/2", "0", "Z", "Z/2", "(Z/2)^3"),
        "g+": golden("Z/2", "0", "Z/2", "0", "Z/4 + Z/2"),
    }
    for case, expected in want.items():
        out = mth_pipeline(case, range(5))
        assert out.as_tuple() == expected, case


def test_spinz2n_family():
    for n in (2, 3, 4):
        stems = range(6) if n == 2 else range(5)
        out = mth_pipeline(f"spinz2n({n})", stems)
        got = out.as_tuple()
        assert got[0] == FinAbGroup.free(1)
        assert got[1] == FinAbGroup.cyclic(2 ** n)
        assert got[2] == FinAbGroup.trivial()
        assert got[3] == FinAbGroup.cyclic(2 ** (n - 2))
        assert got[4] == FinAbGroup.free(1)
        if n == 2:
            assert got[5] == FinAbGroup.cyclic(16)


def test_stems_out_of_range():
    with pytest.raises(ValueError):
        mth_pipeline("pin+", range(9))
    with pytest.raises(ValueError):
        mth_pipeline("spinz2n(3)", range(6))
    with pytest.raises(ValueError):
        mth_pipeline("unknown", range(3))


def test_run_differentials_identity_and_explicit():
    chart = resolve_to_chart(standard_module("J"), 5, 14)
    same = run_differentials(chart, [])
    assert same.dots == chart.dots
    # a two-dot toy chart: one explicit rank-1 d2 leaves a single dot
    toy = ExtChart(4, 10, {(3, 0, 0), (2, 2, 0)})
    after = run_differentials(toy, [Differential(2, (3, 0), (2, 2))])
    assert after.dots == set()
    toy2 = ExtChart(4, 10, {(3, 0, 0), (2, 2, 0), (5, 1, 0)})
    after2 = run_differentials(toy2, [Differential(2, (3, 0), (2, 2))])
    assert after2.dots == {(5, 1, 0)}


def test_run_differentials_twice_errors():
    toy = ExtChart(4, 10, {(3, 0, 0), (2, 2, 0)})
    spec = [Differential(2, (3, 0), (2, 2))]
    out = run_differentials(toy, spec)
    with pytest.raises(ChartError):
        run_differentials(out, spec)


def test_differential_bidegree_checked():
    with pytest.raises(ValueError):
        Differential(2, (3, 0), (2, 3))
    with pytest.raises(ValueError):
        Differential(1, (3, 0), (2, 1))


def test_bockstein_euler_count():
    # matched source and target dots are removed in pairs below the ceiling
    from a1ext.thom import twisted_bz_module

    module = twisted_bz_module(3, truncation=16)
    chart = resolve_to_chart(module, 7, 14)
    after = run_differentials(chart, [BocksteinRule(3)])
    for low, high in chart.metadata["bockstein_pairs"]:
        if high > chart.t_max - chart.s_max:
            continue
        removed_src = {d for d in chart.dots - after.dots if d[0] == high}
        removed_tgt = {d for d in chart.dots - after.dots if d[0] == low}
        in_window = [d for d in removed_src if d[1] + 2 <= chart.s_max]
        assert len(in_window) <= len(removed_tgt) <= len(removed_src)


def test_read_homotopy_shapes():
    # a single dot is Z/2; an L-chain is Z/2^L; order = 2^(dot count)
    c = ExtChart(6, 12, {(2, 0, 0), (2, 1, 0), (2, 2, 0), (3, 0, 0)},
                 {((2, 0, 0), (2, 1, 0)), ((2, 1, 0), (2, 2, 0))})
    out = read_homotopy(c, [2, 3])
    assert out.groups[2] == FinAbGroup.cyclic(8)
    assert out.groups[3] == FinAbGroup.cyclic(2)


def test_read_homotopy_ambiguity():
    c = ExtChart(6, 12, {(2, 0, 0), (2, 0, 1), (2, 1, 0)},
                 {((2, 0, 0), (2, 1, 0)), ((2, 0, 1), (2, 1, 0))})
    with pytest.raises(ChartError):
        read_homotopy(c, [2])


def test_chart_render_ascii():
    chart = resolve_to_chart(standard_module("F2"), 6, 16)
    text = chart_render(chart, "ascii", stems=range(11))
    lines = text.splitlines()
    assert lines[-1].startswith("  t-s")
    # bottom row of dots: a single generator at stem 0
    srow = [l for l in lines if l.startswith("s=0")][0]
    assert srow.split("|")[1].split() == ["1"] + ["."] * 10
    empty = chart_render(ExtChart(2, 4, set()), "ascii", stems=range(3))
    empty_row = [l for l in empty.splitlines() if l.startswith("s=0")][0]
    assert empty_row.split("|")[1].split() == ["."] * 3


def test_chart_render_svg():
    chart = resolve_to_chart(standard_module("F2"), 6, 16)
    svg = chart_render(chart, "svg", stems=range(11))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<circle") == sum(
        1 for d in chart.dots if 0 <= d[0] <= 10)
    # determinism
    assert svg == chart_render(chart, "svg", stems=range(11))
    one_dot = ExtChart(2, 4, {(0, 0, 0)})
    assert chart_render(one_dot, "svg", stems=range(3)).count("<circle") == 1


def test_stem_chain_decomposition():
    chart = resolve_to_chart(standard_module("P", truncation=18), 5, 16)
    chains, amb = stem_chains(chart, 0)
    assert not amb
    assert len(chains) == 1 and len(chains[0]) == 6
