"""Crossing-based textile graphs, neighborhood fingerprints and retrieval evaluation."""

from ._core import (
    Fingerprint,
    Metric,
    TextileGraph,
    average_precision,
    cosine_freq_dist,
    cosine_tfidf_dist,
    distance,
    distance_matrix,
    fingerprint,
    generate_corpus,
    grid_to_graph,
    hamming_bool_dist,
    hamming_freq_dist,
    interpolated_precision,
    jaccard_dist,
    pair_scores,
    parse_corpus_spec,
    parse_graph,
    pipeline_run,
    serialize_graph,
    upgma_cluster,
    upgma_merges,
    validate,
    weave_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
