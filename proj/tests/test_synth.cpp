#include "doctest.h"

#include <fstream>

#include "helpers.hpp"
#include "rapgen/error.hpp"
#include "rapgen/metrics.hpp"
#include "rapgen/synth.hpp"

using namespace rapgen;

TEST_CASE("same seed reproduces the corpus exactly") {
    SynthSpec spec;
    spec.seed = 12345;
    const auto a = generate_synthetic_corpus(spec);
    const auto b = generate_synthetic_corpus(spec);
    CHECK(a.songs == b.songs);
    spec.seed = 12346;
    const auto c = generate_synthetic_corpus(spec);
    CHECK(a.songs != c.songs);
}

TEST_CASE("metrics agree with the constructive ground truth") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        SynthSpec spec;
        spec.seed = seed;
        spec.n_songs = 5;
        spec.sentences_per_song = 7;
        spec.len_min = 3 + static_cast<int>(seed % 2);
        spec.len_max = 6;
        spec.ngram = 1 + static_cast<int>(seed % 3);
        spec.chain_len = 1 + static_cast<int>(seed % 6);
        spec.repeat_rhyme_words = seed % 4 == 3;
        const auto synth = generate_synthetic_corpus(spec);
        const auto& gt = synth.ground_truth;

        CHECK(rhyme_density(synth.songs, synth.dict) == doctest::Approx(gt.rd).epsilon(1e-9));
        CHECK(combo_n(synth.songs, synth.dict, 1) == doctest::Approx(gt.combo1));
        CHECK(combo_n(synth.songs, synth.dict, 2) == doctest::Approx(gt.combo2));
        CHECK(combo_n(synth.songs, synth.dict, 3) == doctest::Approx(gt.combo3));
        CHECK(rhyme_repetition_rate(synth.songs, synth.dict) ==
              doctest::Approx(gt.rhyme_repetition).epsilon(1e-9));

        const auto [fod, sod] = beat_interval_distributions(synth.songs);
        REQUIRE(fod.pmf.size() == gt.fod.size());
        for (const auto& [k, v] : gt.fod) {
            CHECK(fod.pmf.at(k) == doctest::Approx(v).epsilon(1e-9));
        }
        REQUIRE(sod.pmf.size() == gt.sod.size());
        for (const auto& [k, v] : gt.sod) {
            CHECK(sod.pmf.at(k) == doctest::Approx(v).epsilon(1e-9));
        }
    }
}

TEST_CASE("three-gram chains of length four measure combo-3 = 4") {
    SynthSpec spec;
    spec.ngram = 3;
    spec.chain_len = 4;
    spec.len_min = 4;
    const auto synth = generate_synthetic_corpus(spec);
    CHECK(combo_n(synth.songs, synth.dict, 3) == doctest::Approx(4.0));
    CHECK(synth.ground_truth.combo3 == doctest::Approx(4.0));
}

TEST_CASE("the 2,2,4 beat pattern lands on the hand-counted FOD") {
    SynthSpec spec;
    spec.n_songs = 1;
    spec.sentences_per_song = 1;
    spec.len_min = spec.len_max = 23;  // beats at 0,3,6,11,14,17,22
    spec.ngram = 1;
    spec.chain_len = 1;
    spec.beat_pattern = {2, 2, 4};
    const auto synth = generate_synthetic_corpus(spec);
    CHECK(synth.ground_truth.fod.at(2) == doctest::Approx(2.0 / 3.0));
    CHECK(synth.ground_truth.fod.at(4) == doctest::Approx(1.0 / 3.0));
    const auto [fod, sod] = beat_interval_distributions(synth.songs);
    CHECK(fod.pmf.at(2) == doctest::Approx(2.0 / 3.0));
    CHECK(fod.pmf.at(4) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("repeat_rhyme_words drives repetition to 100 percent") {
    SynthSpec spec;
    spec.chain_len = 4;
    spec.repeat_rhyme_words = true;
    const auto synth = generate_synthetic_corpus(spec);
    CHECK(synth.ground_truth.rhyme_repetition == doctest::Approx(100.0));
    CHECK(rhyme_repetition_rate(synth.songs, synth.dict) == doctest::Approx(100.0));
}

TEST_CASE("frequency labels follow the beat density") {
    SynthSpec dense;
    dense.beat_pattern = {0};  // ratio 1 word per beat -> slow
    dense.label_freq = FreqThresholds{};
    const auto slow = generate_synthetic_corpus(dense);
    for (const auto& song : slow.songs) {
        REQUIRE(song.freq_label.has_value());
        CHECK(*song.freq_label == FreqLabel::Slow);
    }
    SynthSpec sparse;
    sparse.beat_pattern = {4};  // ratio ~5 words per beat -> fast
    sparse.label_freq = FreqThresholds{};
    const auto fast = generate_synthetic_corpus(sparse);
    for (const auto& song : fast.songs) {
        REQUIRE(song.freq_label.has_value());
        CHECK(*song.freq_label == FreqLabel::Fast);
    }
}

TEST_CASE("infeasible specs are rejected") {
    SynthSpec spec;
    spec.ngram = 9;
    spec.len_min = 4;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), Error);
    spec = SynthSpec{};
    spec.n_vowel_classes = 1;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), Error);
    spec = SynthSpec{};
    spec.chain_len = 99;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), Error);
    spec = SynthSpec{};
    spec.vocab_size = spec.n_vowel_classes;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), Error);
}

TEST_CASE("sidecar files round-trip through the writers") {
    testutil::TempDir dir;
    SynthSpec spec;
    spec.n_songs = 3;
    const auto synth = generate_synthetic_corpus(spec);
    write_dictionary_file(dir.file("vowels.tsv"), synth.dict);
    const auto dict = load_dictionary(dir.file("vowels.tsv"));
    CHECK(dict.entries() == synth.dict.entries());
    write_ground_truth_file(dir.file("gt.tsv"), synth.ground_truth);
    std::ifstream in(dir.file("gt.tsv"));
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("rd\t", 0) == 0);
}
