#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rapgen/align.hpp"
#include "rapgen/corpus.hpp"
#include "rapgen/vowel.hpp"

namespace rapgen {

// Deterministic synthetic corpus with known rhyme structure and beat
// placement, used as ground truth for metric and constraint tests.
struct SynthSpec {
    int n_songs = 10;
    int sentences_per_song = 8;
    int len_min = 4;
    int len_max = 8;
    int vocab_size = 60;
    int n_vowel_classes = 6;
    int ngram = 2;      // rhyme width of the chained sentences
    int chain_len = 4;  // sentences per rhyme chain (1 = no rhyming pairs)
    std::vector<int> beat_pattern = {2, 2, 4};  // words between consecutive beats
    bool repeat_rhyme_words = false;            // realize rhymes with identical words
    std::optional<FreqThresholds> label_freq;   // when set, attach #FREQ labels
    uint64_t seed = 1;
};

// Expected metric values, computed constructively while building the
// corpus (independent of the metrics module).
struct SynthGroundTruth {
    double rd = 0.0;
    double combo1 = 1.0, combo2 = 1.0, combo3 = 1.0;
    double rhyme_repetition = 0.0;        // percent
    std::map<int, double> fod, sod;       // normalized interval histograms
};

struct SynthResult {
    std::vector<Song> songs;
    VowelDictionary dict;
    SynthGroundTruth ground_truth;
};

SynthResult generate_synthetic_corpus(const SynthSpec& spec);

void write_dictionary_file(const std::string& path, const VowelDictionary& dict);
void write_ground_truth_file(const std::string& path, const SynthGroundTruth& gt);

}  // namespace rapgen
