"""Rap lyric toolkit: beat-lyric alignment, rhyme-aware language modeling,
constrained generation, and objective evaluation metrics."""

from ._rapgen import (
    FeatureSequence,
    Model,
    Sentence,
    Song,
    SynthGroundTruth,
    SynthResult,
    SynthSpec,
    TimedWord,
    VowelDictionary,
    Word,
    adjusted_distribution,
    align_beats,
    average_word_duration,
    beat_frequency,
    beat_interval_distributions,
    builtin_dictionary,
    combo_n,
    generate_synthetic_corpus,
    load_dictionary,
    parse_song,
    read_corpus_file,
    render_song,
    rhyme_density,
    rhyme_repetition_rate,
    wasserstein_1d,
    write_corpus_file,
)

__version__ = "0.1.0"

__all__ = [
    "FeatureSequence",
    "Model",
    "Sentence",
    "Song",
    "SynthGroundTruth",
    "SynthResult",
    "SynthSpec",
    "TimedWord",
    "VowelDictionary",
    "Word",
    "adjusted_distribution",
    "align_beats",
    "average_word_duration",
    "beat_frequency",
    "beat_interval_distributions",
    "builtin_dictionary",
    "combo_n",
    "generate_synthetic_corpus",
    "load_dictionary",
    "parse_song",
    "read_corpus_file",
    "render_song",
    "rhyme_density",
    "rhyme_repetition_rate",
    "wasserstein_1d",
    "write_corpus_file",
]
