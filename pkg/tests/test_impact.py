import numpy as np
import pytest

import _oracles as oracles
import _synth as synth
from citecascade import (
    BinSpec,
    EmptyInput,
    batch_cascades,
    build_graph,
    citations_vs_generation_relevance,
    citations_vs_structure,
    distribution_summary,
    relevance_vs_citations,
)
from conftest import make_graph


@pytest.fixture(scope="module")
def corpus():
    rng = np.random.default_rng(512)
    pubs, edges = synth.random_temporal_dag(rng, 400, 1300, coded_fraction=0.85)
    graph, _ = build_graph(pubs, edges)
    return graph, pubs, edges


class TestBinSpec:
    def test_half_open_with_closed_end(self):
        spec = BinSpec("relevance", (0.0, 0.5, 1.0))
        assert spec.bin_of(0.0) == 0
        assert spec.bin_of(0.5) == 1
        assert spec.bin_of(1.0) == 1  # final bin closed
        assert spec.bin_of(1.1) is None
        assert spec.bin_of(-0.1) is None

    def test_edges_validated(self):
        with pytest.raises(ValueError):
            BinSpec("depth", (1.0,))
        with pytest.raises(ValueError):
            BinSpec("depth", (1.0, 1.0))
        with pytest.raises(ValueError):
            BinSpec("nope", (0.0, 1.0))

    def test_log_citation_bins_cover(self):
        spec = BinSpec.log_citation_bins(37)
        assert spec.edges[0] == 0.0
        assert spec.edges[-1] > 37
        assert spec.bin_of(0) == 0
        assert spec.bin_of(37) is not None

    def test_equal_count_collapses_ties(self):
        spec = BinSpec.equal_count("depth", [1, 1, 1, 1, 2], n_bins=7)
        assert len(spec.edges) >= 2
        assert spec.bin_of(1) is not None

    def test_relevance_bins(self):
        spec = BinSpec.relevance_bins(0.1)
        assert spec.n_bins == 10
        assert spec.bin_of(1.0) == 9


class TestDistributionSummary:
    def test_small_example(self):
        graph = make_graph(
            [("r1", "a"), ("r2", "b"), ("r3", "c"), ("c", "d")],
        )
        table = distribution_summary(
            batch_cascades(graph, ["r1", "r2", "r3"]), "depth"
        )
        assert table.values == (1.0, 2.0)
        assert table.fractions == pytest.approx((2 / 3, 1.0))

    def test_single_cascade(self):
        graph = make_graph([("r", "a")])
        table = distribution_summary(batch_cascades(graph, ["r"]), "size")
        assert table.values == (2.0,)
        assert table.fractions == (1.0,)

    def test_cdf_matches_sort_and_count(self, corpus):
        graph, pubs, _ = corpus
        summaries = list(batch_cascades(graph, [p.id for p in pubs]))
        for variable in ("depth", "size", "width", "virality"):
            table = distribution_summary(summaries, variable)
            raw = sorted(
                getattr(s, variable) for s in summaries if getattr(s, variable) is not None
            )
            for value, fraction in zip(table.values, table.fractions):
                expected = sum(1 for v in raw if v <= value) / len(raw)
                assert fraction == pytest.approx(expected, abs=1e-12)
            assert table.n + table.excluded_count == len(summaries)
            assert table.fractions[-1] == 1.0
            assert all(a < b for a, b in zip(table.values, table.values[1:]))
            assert all(a <= b for a, b in zip(table.fractions, table.fractions[1:]))

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            distribution_summary([], "depth")


class TestRelevanceVsCitations:
    def test_uniform_single_bin(self):
        codes = {"r1": ("01.10",), "a": ("01.10",), "r2": ("02.20",), "b": ("02.20",)}
        graph = make_graph([("r1", "a"), ("r2", "b")], codes=codes)
        bins = BinSpec("citation_count", (0.0, 10.0))
        for mode in ("total", "average"):
            summary = relevance_vs_citations(graph, ["r1", "r2"], mode, bins)
            assert summary.counts == (2,)
            assert summary.medians[0] == 1.0

    def test_uncited_root_boundary_rule(self):
        codes = {"r": ("01.10",), "a": ("01.10",), "lone": ("01.10",)}
        graph = make_graph([("r", "a")], ids=["r", "a", "lone"], codes=codes)
        bins = BinSpec("citation_count", (0.0, 10.0))
        total = relevance_vs_citations(graph, ["r", "lone"], "total", bins)
        assert total.counts == (2,)  # uncited root included with total 0.0
        assert total.excluded_count == 0
        average = relevance_vs_citations(graph, ["r", "lone"], "average", bins)
        assert average.counts == (1,)  # uncited root undefined in average mode
        assert average.excluded_count == 1

    def test_matches_group_by_oracle(self, corpus):
        graph, pubs, edges = corpus
        roots = [p.id for p in pubs]
        by_id = {p.id: p for p in pubs}
        adj = oracles.adjacency(edges)
        bins = BinSpec.log_citation_bins(int(graph.out_degree.max()))
        for mode in ("total", "average"):
            xs, ys = [], []
            pre_excluded = 0
            for root in roots:
                children = adj.get(root, [])
                vals = [
                    r
                    for c in children
                    if (r := oracles.jaccard(by_id[root].codes, by_id[c].codes)) is not None
                ]
                if mode == "total":
                    xs.append(len(children))
                    ys.append(sum(vals))
                elif vals:
                    xs.append(len(children))
                    ys.append(np.mean(vals))
                else:
                    pre_excluded += 1
            groups, out_of_range = oracles.group_by_bins(bins.edges, xs, ys)
            summary = relevance_vs_citations(graph, roots, mode, bins)
            assert summary.counts == tuple(len(g) for g in groups)
            assert summary.excluded_count == pre_excluded + out_of_range
            for i, g in enumerate(groups):
                if not g:
                    assert summary.medians[i] is None
                    continue
                count, mean, med, q1, q3 = oracles.quartile_stats(g)
                assert summary.means[i] == pytest.approx(mean, abs=1e-12)
                assert summary.medians[i] == pytest.approx(med, abs=1e-12)
                assert summary.q1[i] == pytest.approx(q1, abs=1e-12)
                assert summary.q3[i] == pytest.approx(q3, abs=1e-12)
                assert summary.q1[i] <= summary.medians[i] <= summary.q3[i]

    def test_planted_disjoint_families_decrease_average(self):
        # high-degree roots draw citations from many disjoint code families,
        # so average first-generation relevance falls as citations rise
        pubs_rows = []
        edges = []
        serial = 0
        for degree in (2, 8, 32):
            for copy in range(6):
                root = f"r{degree}x{copy}"
                pubs_rows.append(synth.Publication(root, 1990, frozenset({f"{degree:02d}.{copy:02d}"})))
                for c in range(degree):
                    child = f"c{serial}"
                    serial += 1
                    codes = (
                        frozenset({f"{degree:02d}.{copy:02d}"})
                        if c == 0
                        else frozenset({f"70.{serial % 97:02d}", f"71.{serial % 89:02d}"})
                    )
                    pubs_rows.append(synth.Publication(child, 1995, codes))
                    edges.append((root, child))
        graph, _ = build_graph(pubs_rows, edges)
        roots = [p.id for p in pubs_rows if p.id.startswith("r")]
        bins = BinSpec("citation_count", (2.0, 4.0, 16.0, 64.0))
        summary = relevance_vs_citations(graph, roots, "average", bins)
        meds = [m for m in summary.medians if m is not None]
        assert len(meds) == 3
        assert meds[0] > meds[1] > meds[2]


class TestCitationsVsStructure:
    def test_uniform_star_corpus(self):
        edges = [(f"r{i}", f"c{i}") for i in range(5)]
        graph = make_graph(edges)
        bins = BinSpec("depth", (0.5, 1.5))
        summary = citations_vs_structure(graph, [f"r{i}" for i in range(5)], "depth", bins)
        assert summary.counts == (5,)

    def test_chain_corpus_flat_medians(self):
        edges = [("r1", "a"), ("a", "b"), ("r2", "c"), ("c", "d"), ("d", "e")]
        graph = make_graph(edges)
        bins = BinSpec("depth", (1.0, 2.5, 4.0))
        summary = citations_vs_structure(graph, ["r1", "r2"], "depth", bins)
        assert summary.medians == (1.0, 1.0)

    @pytest.mark.parametrize("variable", ["depth", "virality"])
    def test_matches_group_by_oracle(self, corpus, variable):
        graph, pubs, _ = corpus
        roots = [p.id for p in pubs]
        summaries = {s.root: s for s in batch_cascades(graph, roots)}
        xs, ys = [], []
        undefined = 0
        for root in roots:
            x = getattr(summaries[root], variable)
            if x is None:
                undefined += 1
                continue
            xs.append(x)
            ys.append(int(graph.out_degree[graph.index_of(root)]))
        spec = BinSpec.equal_count(variable, xs, n_bins=7)
        groups, out_of_range = oracles.group_by_bins(spec.edges, xs, ys)
        summary = citations_vs_structure(graph, roots, variable, spec)
        assert summary.counts == tuple(len(g) for g in groups)
        assert summary.excluded_count == undefined + out_of_range
        assert sum(summary.counts) + summary.excluded_count == len(roots)
        for i, g in enumerate(groups):
            if g:
                _, mean, med, q1, q3 = oracles.quartile_stats(g)
                assert summary.medians[i] == pytest.approx(med, abs=1e-12)
                assert summary.means[i] == pytest.approx(mean, abs=1e-12)
                assert summary.q1[i] <= summary.medians[i] <= summary.q3[i]


class TestCitationsVsGenerationRelevance:
    def test_two_roots_two_bins(self):
        codes = {
            "r1": ("01.10", "02.20", "03.30", "04.40", "05.50"),
            "a": ("01.10", "09.90", "08.80", "07.70", "06.60"),  # R = 1/9
            "r2": ("11.10",),
            "b": ("11.10",),  # R = 1
        }
        graph = make_graph([("r1", "a"), ("r2", "b")], codes=codes)
        bins = BinSpec("relevance", (0.0, 0.5, 1.0))
        summary = citations_vs_generation_relevance(graph, ["r1", "r2"], 1, bins)
        assert summary.counts == (1, 1)

    def test_roots_lacking_generation_excluded(self):
        codes = {"r1": ("01.10",), "a": ("01.10",), "b": ("01.10",), "r2": ("01.10",), "c": ("01.10",)}
        graph = make_graph([("r1", "a"), ("a", "b"), ("r2", "c")], codes=codes)
        bins = BinSpec("relevance", (0.0, 1.0))
        summary = citations_vs_generation_relevance(graph, ["r1", "r2"], 2, bins)
        assert summary.counts == (1,)
        assert summary.excluded_count == 1

    @pytest.mark.parametrize("generation", [1, 2, 3])
    def test_matches_group_by_oracle(self, corpus, generation):
        graph, pubs, edges = corpus
        by_id = {p.id: p for p in pubs}
        roots = [p.id for p in pubs]
        xs, ys = [], []
        undefined = 0
        for root in roots:
            layers = oracles.bfs_layers(edges, root, max_depth=generation)
            if len(layers) < generation:
                undefined += 1
                continue
            vals = [
                r
                for v in layers[generation - 1]
                if (r := oracles.jaccard(by_id[root].codes, by_id[v].codes)) is not None
            ]
            if not vals:
                undefined += 1
                continue
            xs.append(float(np.mean(vals)))
            ys.append(int(graph.out_degree[graph.index_of(root)]))
        bins = BinSpec.relevance_bins(0.1)
        groups, out_of_range = oracles.group_by_bins(bins.edges, xs, ys)
        summary = citations_vs_generation_relevance(graph, roots, generation, bins)
        assert summary.counts == tuple(len(g) for g in groups)
        assert summary.excluded_count == undefined + out_of_range
        for i, g in enumerate(groups):
            if g:
                _, mean, med, q1, q3 = oracles.quartile_stats(g)
                assert summary.medians[i] == pytest.approx(med, abs=1e-12)
                assert summary.q1[i] == pytest.approx(q1, abs=1e-12)
                assert summary.q3[i] == pytest.approx(q3, abs=1e-12)

    def test_generation_validated(self, corpus):
        graph, pubs, _ = corpus
        bins = BinSpec.relevance_bins()
        with pytest.raises(ValueError):
            citations_vs_generation_relevance(graph, [pubs[0].id], 4, bins)


class TestPermutationInvariance:
    def test_outputs_ignore_root_order(self, corpus):
        graph, pubs, _ = corpus
        roots = [p.id for p in pubs]
        shuffled = list(reversed(roots))
        bins = BinSpec.log_citation_bins(int(graph.out_degree.max()))
        a = relevance_vs_citations(graph, roots, "total", bins)
        b = relevance_vs_citations(graph, shuffled, "total", bins)
        assert a.counts == b.counts
        assert a.medians == b.medians
        table_a = distribution_summary(batch_cascades(graph, roots), "depth")
        table_b = distribution_summary(batch_cascades(graph, shuffled), "depth")
        assert table_a == table_b
