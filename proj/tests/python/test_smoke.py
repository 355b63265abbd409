import math

import pytest

import weftprint as wp


def plain_2x2():
    return wp.grid_to_graph(wp.weave_matrix("plain", 2, 2))


def test_plain_2x2_has_one_neighborhood_type():
    fp = wp.fingerprint(plain_2x2(), k=1)
    assert fp.to_dict() == {"A,T;A,T": 4}
    assert fp.total == 4


def test_graph_text_round_trip():
    g = wp.grid_to_graph(wp.weave_matrix("twill", 5, 4, over=2, under=1))
    assert wp.validate(g) == []
    assert wp.parse_graph(wp.serialize_graph(g)) == g


def test_parse_rejects_wrong_node_count():
    text = "crossings 1\n0 -1 1 1\n1 -1 1 0\n2 -1 0 3\n3 -1 0 2\n4 -1 0 2\n"
    with pytest.raises(Exception, match="node count 5"):
        wp.parse_graph(text)


def test_worked_example_distances():
    h1 = wp.Fingerprint({"A,T;A,T": 4})
    h2 = wp.Fingerprint({"A,T;A,T": 2, "N,T;N,T": 2})
    assert wp.hamming_freq_dist(h1, h2) == 4
    assert wp.hamming_bool_dist(h1, h2) == 1
    assert wp.jaccard_dist(h1, h2) == pytest.approx(2 / 3, abs=1e-12)
    assert wp.cosine_freq_dist(h1, h2) == pytest.approx(1 - math.sqrt(2) / 2, abs=1e-12)


def test_distance_matrix_is_symmetric():
    fps = [wp.fingerprint(wp.grid_to_graph(wp.weave_matrix("random", 8, 8, seed=s)), 3) for s in range(5)]
    d = wp.distance_matrix(fps, "jaccard")
    for i in range(5):
        assert d[i][i] == 0.0
        for j in range(5):
            assert d[i][j] == d[j][i]
    assert d == wp.distance_matrix(fps, "jaccard", threads=3)


def test_eval_fixtures():
    merges = wp.upgma_merges([[0, 1, 4], [1, 0, 5], [4, 5, 0]], 1)
    assert merges == [(0, 1, 1.0), (0, 2, 4.5)]
    assert wp.pair_scores([0, 1, 1], [0, 0, 1])["rand_index"] == pytest.approx(1 / 3)
    assert wp.average_precision([0, 1, 2, 3], [0, 2]) == pytest.approx(5 / 6)
    assert wp.interpolated_precision([0, 1, 2, 3, 4], [0, 3]) == [1.0] * 6 + [0.5] * 5


def test_small_pipeline_is_deterministic():
    spec_text = """
seed = 7
[plain]
kind = plain
count = 4
width = 8
height = 8
[twill]
kind = twill
over = 2
under = 1
count = 4
width = 8
height = 8
"""
    spec = wp.parse_corpus_spec(spec_text)
    assert spec.categories == ["plain", "twill"]
    corpus = wp.generate_corpus(spec)
    assert [label for _, _, label in corpus] == ["plain"] * 4 + ["twill"] * 4
    first = wp.pipeline_run(spec, k=2)
    assert first["report"] == wp.pipeline_run(spec, k=2)["report"]
    assert first["map"] == pytest.approx(1.0)
