#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "rapgen/decode.hpp"
#include "rapgen/error.hpp"
#include "rapgen/metrics.hpp"
#include "rapgen/model.hpp"
#include "rapgen/synth.hpp"

using namespace rapgen;

namespace {

RhymeState state_with_prev(std::vector<int32_t> prev, int matched = 0) {
    RhymeState s;
    for (int32_t v : prev) s.prev_sentence_vowels.push_back(VowelId{v});
    s.current_matched = matched;
    return s;
}

// Encoded corpus plus a briefly trained model over it.
struct TrainedFixture {
    SynthResult synth;
    Vocab vocab;
    ModelParams params;

    explicit TrainedFixture(int chain_len, long steps = 150, uint64_t seed = 5) {
        SynthSpec spec;
        spec.n_songs = 6;
        spec.sentences_per_song = 6;
        spec.len_min = 3;
        spec.len_max = 4;
        spec.vocab_size = 24;
        spec.n_vowel_classes = 4;
        spec.ngram = 1;
        spec.chain_len = chain_len;
        spec.seed = seed;
        synth = generate_synthetic_corpus(spec);
        vocab = Vocab::build(synth.songs, synth.dict);
        ModelConfig cfg = ModelConfig::desk_scale(vocab.size(),
                                                  synth.dict.num_classes() + 1);
        cfg.hidden_size = 32;
        cfg.n_heads = 2;
        cfg.max_abs_pos = 96;
        params = init_model(cfg, seed);
        std::vector<FeatureSequence> seqs;
        for (const auto& s : synth.songs) {
            seqs.push_back(encode_training_sequence(s, synth.dict, vocab, {}));
        }
        TrainConfig tcfg;
        tcfg.max_steps = steps;
        tcfg.batch_size = 4;
        tcfg.seed = seed;
        train(params, seqs, tcfg);
    }

    Sentence seed_sentence() const { return synth.songs[0].sentences[0]; }
};

}  // namespace

TEST_CASE("constraint_active: position 0 with a previous sentence") {
    const auto s = state_with_prev({3, 4, 5});
    CHECK(constraint_active(s, 0));
}

TEST_CASE("constraint_active: broken chain disables later positions") {
    auto s = state_with_prev({3, 4, 5});
    s = update_rhyme_state(std::move(s), VowelId{2});  // mismatch at 0
    CHECK(s.current_matched == 0);
    CHECK(!constraint_active(s, 1));
}

TEST_CASE("constraint_active: capped at N_max") {
    auto s = state_with_prev({3, 4, 5, 3, 4});
    s.ngram_max = 3;
    s.current_matched = 3;
    CHECK(!constraint_active(s, 3));
    s.ngram_max = 4;
    CHECK(constraint_active(s, 3));
}

TEST_CASE("constraint_active: no entry or null entry in the previous sentence") {
    auto s = state_with_prev({3});
    CHECK(!constraint_active(s, 1));  // previous sentence too short
    auto n = state_with_prev({0});
    CHECK(!constraint_active(n, 0));  // unknown vowel never targets
}

TEST_CASE("update_rhyme_state matches and freezes") {
    auto s = state_with_prev({3, 4, 5});
    s = update_rhyme_state(std::move(s), VowelId{3});
    CHECK(s.current_matched == 1);
    s = update_rhyme_state(std::move(s), VowelId{9});  // mismatch at 1
    CHECK(s.current_matched == 1);
    s = update_rhyme_state(std::move(s), VowelId{5});  // matched stays frozen
    CHECK(s.current_matched == 1);
    CHECK(!constraint_active(s, 3));
}

TEST_CASE("update_rhyme_state: crafted three-sentence transcript") {
    // Sentences by vowel id, reversed order: A = [1,2,3], B = [1,2,9],
    // C = [1,5].  Expected matched counts: B vs A -> 2, C vs B -> 1.
    RhymeState s;
    for (int32_t v : {1, 2, 3}) s = update_rhyme_state(std::move(s), VowelId{v});
    CHECK(s.current_matched == 0);  // no previous sentence yet
    s = advance_sentence(std::move(s));
    for (int32_t v : {1, 2, 9}) s = update_rhyme_state(std::move(s), VowelId{v});
    CHECK(s.current_matched == 2);
    s = advance_sentence(std::move(s));
    for (int32_t v : {1, 5}) s = update_rhyme_state(std::move(s), VowelId{v});
    CHECK(s.current_matched == 1);
}

TEST_CASE("adjusted_distribution: alpha=1 returns p exactly") {
    Eigen::RowVectorXd p(4);
    p << 0.1, 0.2, 0.3, 0.4;
    const std::vector<int32_t> vowels = {0, 1, 2, 1};
    const auto q = adjusted_distribution(p, VowelId{1}, vowels, 1.0);
    CHECK((q - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjusted_distribution: the worked example") {
    Eigen::RowVectorXd p(3);
    p << 0.5, 0.3, 0.2;
    const std::vector<int32_t> vowels = {1, 2, 3};
    const auto q = adjusted_distribution(p, VowelId{2}, vowels, 0.95);
    CHECK(q(0) == doctest::Approx(0.475).epsilon(1e-12));
    CHECK(q(1) == doctest::Approx(0.335).epsilon(1e-12));
    CHECK(q(2) == doctest::Approx(0.19).epsilon(1e-12));
    CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adjusted_distribution: alpha=0 is uniform over rhyming words") {
    Eigen::RowVectorXd p(5);
    p << 0.5, 0.2, 0.1, 0.1, 0.1;
    const std::vector<int32_t> vowels = {0, 2, 0, 2, 3};
    const auto q = adjusted_distribution(p, VowelId{2}, vowels, 0.0);
    CHECK(q(1) == doctest::Approx(0.5));
    CHECK(q(3) == doctest::Approx(0.5));
    CHECK(q(0) == 0.0);
    CHECK(q(2) == 0.0);
    CHECK(q(4) == 0.0);
}

TEST_CASE("adjusted_distribution stays a distribution for any alpha") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        Eigen::RowVectorXd p(8);
        for (int i = 0; i < 8; ++i) p(i) = uni(rng) + 1e-3;
        p /= p.sum();
        std::vector<int32_t> vowels(8);
        for (auto& v : vowels) v = static_cast<int32_t>(rng() % 4);
        vowels[5] = 2;  // guarantee one rhyming token
        const double alpha = uni(rng);
        const auto q = adjusted_distribution(p, VowelId{2}, vowels, alpha);
        CHECK(q.minCoeff() >= 0.0);
        CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("adjusted_distribution rejects the null target") {
    Eigen::RowVectorXd p(2);
    p << 0.5, 0.5;
    CHECK_THROWS_AS(adjusted_distribution(p, NULL_VOWEL, {0, 1}, 0.9), Error);
}

TEST_CASE("sampling from the adjusted distribution matches it (chi-square)") {
    Eigen::RowVectorXd p(6);
    p << 0.30, 0.25, 0.20, 0.15, 0.05, 0.05;
    const std::vector<int32_t> vowels = {1, 2, 1, 3, 2, 1};
    const auto q = adjusted_distribution(p, VowelId{1}, vowels, 0.9);

    std::mt19937_64 rng(424242);
    const int n = 10000;
    std::vector<long> counts(6, 0);
    for (int i = 0; i < n; ++i) {
        ++counts[static_cast<size_t>(
            sample_from(q, SampleMode::Temperature, 1.0, 0, rng))];
    }
    double stat = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double expected = n * q(i);
        stat += (counts[i] - expected) * (counts[i] - expected) / expected;
    }
    const double pvalue = testutil::chi_square_pvalue(stat, 5);
    CHECK(pvalue > 0.01);
}

TEST_CASE("argmax sampling picks the mode; top-k restricts support") {
    Eigen::RowVectorXd q(4);
    q << 0.1, 0.5, 0.15, 0.25;
    std::mt19937_64 rng(1);
    CHECK(sample_from(q, SampleMode::Argmax, 1.0, 0, rng) == 1);
    for (int i = 0; i < 200; ++i) {
        const auto s = sample_from(q, SampleMode::TopK, 1.0, 2, rng);
        CHECK((s == 1 || s == 3));
    }
}

TEST_CASE("generate: the first sentence is the seed, verbatim") {
    const TrainedFixture fx(/*chain_len=*/4);
    GenControls controls;
    controls.seed_sentence = fx.seed_sentence();
    controls.max_sentences = 4;
    controls.max_tokens = 80;
    controls.rng_seed = 3;
    const auto result = generate(fx.params, fx.vocab, controls);
    REQUIRE(!result.song.sentences.empty());
    CHECK(result.song.sentences[0] == controls.seed_sentence);
    CHECK(result.song.sentences.size() <= 4);
}

TEST_CASE("generate: alpha=0 argmax forces position-0 rhymes everywhere") {
    const TrainedFixture fx(/*chain_len=*/1);  // model never saw rhyme chains
    GenControls controls;
    controls.seed_sentence = fx.seed_sentence();
    controls.alpha = 0.0;
    controls.mode = SampleMode::Argmax;
    controls.max_sentences = 5;
    controls.max_tokens = 90;
    const auto result = generate(fx.params, fx.vocab, controls);
    REQUIRE(result.song.sentences.size() >= 2);
    for (size_t s = 1; s < result.song.sentences.size(); ++s) {
        CHECK(leading_rhyme_match(result.song.sentences[s - 1],
                                  result.song.sentences[s], fx.synth.dict) >= 1);
    }
}

TEST_CASE("generate: fixed rng seed is deterministic") {
    const TrainedFixture fx(/*chain_len=*/4);
    GenControls controls;
    controls.seed_sentence = fx.seed_sentence();
    controls.max_sentences = 5;
    controls.max_tokens = 90;
    controls.rng_seed = 77;
    const auto a = generate(fx.params, fx.vocab, controls);
    const auto b = generate(fx.params, fx.vocab, controls);
    CHECK(a.song == b.song);
    CHECK(a.transcript.tokens == b.transcript.tokens);
    controls.rng_seed = 78;
    const auto c = generate(fx.params, fx.vocab, controls);
    CHECK(a.transcript.tokens != c.transcript.tokens);
}

TEST_CASE("generate: transcripts are structurally valid streams") {
    const TrainedFixture fx(/*chain_len=*/2);
    for (uint64_t seed = 0; seed < 6; ++seed) {
        GenControls controls;
        controls.seed_sentence = fx.seed_sentence();
        controls.max_sentences = 6;
        controls.max_tokens = 70;
        controls.rng_seed = seed;
        controls.temperature = 1.3;  // push toward riskier samples
        const auto result = generate(fx.params, fx.vocab, controls);
        const auto& t = result.transcript.tokens;
        CHECK(t[0] == TOK_START);
        for (size_t i = 1; i < t.size(); ++i) {
            CHECK(t[i] != TOK_START);
            CHECK(t[i] != TOK_PAD);
            if (t[i] == TOK_BEAT) {
                REQUIRE(i + 1 < t.size());
                CHECK(is_word_token(t[i + 1]));
            }
            if (t[i] == TOK_SEP) CHECK(is_word_token(t[i - 1]));
        }
    }
}

TEST_CASE("generate: errors on unknown seed words and empty seeds") {
    const TrainedFixture fx(/*chain_len=*/2);
    GenControls controls;
    controls.seed_sentence.words = {{"nope", false}};
    CHECK_THROWS_AS(generate(fx.params, fx.vocab, controls), Error);
    controls.seed_sentence.words.clear();
    CHECK_THROWS_AS(generate(fx.params, fx.vocab, controls), Error);
}

TEST_CASE("generate with alpha=0 yields maximal combo-1 (metrics cross-check)") {
    const TrainedFixture fx(/*chain_len=*/1);
    GenControls controls;
    controls.seed_sentence = fx.seed_sentence();
    controls.alpha = 0.0;
    controls.mode = SampleMode::Argmax;
    controls.max_sentences = 5;
    controls.max_tokens = 90;
    const auto result = generate(fx.params, fx.vocab, controls);
    const long combo = song_combo_n(result.song, fx.synth.dict, 1);
    CHECK(combo == static_cast<long>(result.song.sentences.size()));
}
