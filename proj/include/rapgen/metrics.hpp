#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rapgen/corpus.hpp"
#include "rapgen/model.hpp"
#include "rapgen/vowel.hpp"

namespace rapgen {

// Normalized histogram over integer beat intervals (FOD) or interval
// differences (SOD).
struct IntervalDistribution {
    std::map<int, double> pmf;

    bool empty() const { return pmf.empty(); }
};

// Objective metrics for a (model, corpus) pair.  Model-dependent fields
// stay unset when no model is supplied; FOD/SOD distances need a
// reference corpus.
struct MetricsReport {
    std::optional<double> ppl;
    std::optional<double> ra;   // percent
    std::optional<double> ba;   // percent
    std::optional<double> fod;  // Wasserstein distance in [0, 1]
    std::optional<double> sod;
    double rd = 0.0;
    double combo1 = 1.0, combo2 = 1.0, combo3 = 1.0;
    double rhyme_repetition = 0.0;  // percent
};

// Vowel ids of a sentence by intra position (reversed word order).
std::vector<VowelId> sentence_rhyme_pattern(const Sentence& sent,
                                            const VowelDictionary& dict);

// Width of the leading positionwise vowel match between two consecutive
// sentences; unknown vowels never match.
int leading_rhyme_match(const Sentence& prev, const Sentence& cur,
                        const VowelDictionary& dict);

// Longest rhyme of one song: max leading match over consecutive pairs.
int song_rhyme_density(const Song& song, const VowelDictionary& dict);

// Mean of song_rhyme_density over songs.  The per-word variant follows
// the rhyme-density style of Malmi et al. (mean per-word chain length)
// and is selectable for cross-paper comparison.
double rhyme_density(const std::vector<Song>& songs, const VowelDictionary& dict,
                     bool per_word_variant = false);

// Longest run of consecutive sentences chained by N-gram rhymes; a song
// without rhymes scores 1.
long song_combo_n(const Song& song, const VowelDictionary& dict, int n);
double combo_n(const std::vector<Song>& songs, const VowelDictionary& dict, int n);

// Teacher-forced rhyme accuracy: for every sentence after the first, the
// argmax prediction at its first reversed word must rhyme with the
// previous sentence's word at intra position 0.  Sentences whose
// reference vowel is unknown are skipped.
double rhyme_accuracy(const ModelParams& params, const std::vector<Song>& songs,
                      const VowelDictionary& dict, const Vocab& vocab,
                      const EncodeConfig& ecfg = {});

// Teacher-forced beat accuracy: beat-vs-nonbeat agreement of the argmax
// prediction at every step.
double beat_accuracy(const ModelParams& params, const std::vector<Song>& songs,
                     const VowelDictionary& dict, const Vocab& vocab,
                     const EncodeConfig& ecfg = {});

// FOD: words between consecutive beats; SOD: differences between
// consecutive intervals.  Pooled over songs; songs with fewer than two
// beats contribute nothing.
std::pair<IntervalDistribution, IntervalDistribution> beat_interval_distributions(
    const std::vector<Song>& songs);

// Normalized 1-D Wasserstein distance between two histograms on a shared
// integer support: the CDF-difference sum divided by the support span.
double wasserstein_1d(const IntervalDistribution& a, const IntervalDistribution& b);

// Share of rhyming word occurrences realized by the same surface form as
// their partner in the previous sentence.
double rhyme_repetition_rate(const std::vector<Song>& songs, const VowelDictionary& dict);

}  // namespace rapgen
