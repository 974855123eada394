"""Token-level argument unit recognition and classification."""

from ._core import (
    AurcError,
    IoError,
    Tagger,
    UndefinedError,
    ValidationError,
    __version__,
    alpha_nominal,
    corpus_stats,
    evaluate,
    labels_to_segments,
    load_corpus,
    majority_predictions,
    majority_vote,
    make_splits,
    overlap_curve,
    render_argument,
    save_corpus,
    segment_f1_sentence,
    segments_to_labels,
    select_split,
    sentence_label,
    topics,
    windows,
)

try:
    from ._core import run_cli
except ImportError:  # built without the command-line tool
    pass
