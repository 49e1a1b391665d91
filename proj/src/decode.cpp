#include "rapgen/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "rapgen/error.hpp"

namespace rapgen {

bool constraint_active(const RhymeState& state, int i) {
    return i >= 0 && i < state.ngram_max && state.current_matched == i &&
           i < static_cast<int>(state.prev_sentence_vowels.size()) &&
           !state.prev_sentence_vowels[i].is_null();
}

RhymeState update_rhyme_state(RhymeState state, VowelId emitted_vowel) {
    const int i = static_cast<int>(state.current_vowels.size());
    if (state.current_matched == i &&
        i < static_cast<int>(state.prev_sentence_vowels.size()) &&
        !emitted_vowel.is_null() && emitted_vowel == state.prev_sentence_vowels[i]) {
        ++state.current_matched;
    }
    state.current_vowels.push_back(emitted_vowel);
    return state;
}

RhymeState advance_sentence(RhymeState state) {
    state.prev_sentence_vowels = std::move(state.current_vowels);
    state.current_vowels.clear();
    state.current_matched = 0;
    return state;
}

Eigen::RowVectorXd adjusted_distribution(const Eigen::RowVectorXd& p,
                                         VowelId target_vowel,
                                         const std::vector<int32_t>& token_vowels,
                                         double alpha) {
    if (target_vowel.is_null()) {
        throw data_error("adjusted_distribution: target vowel is the null vowel");
    }
    if (alpha < 0.0 || alpha > 1.0) {
        throw usage_error("adjusted_distribution: alpha must be in [0, 1]");
    }
    if (p.size() != static_cast<Eigen::Index>(token_vowels.size())) {
        throw data_error("adjusted_distribution: vocab size mismatch");
    }
    if (std::abs(p.sum() - 1.0) > 1e-6) {
        throw data_error("adjusted_distribution: input is not a distribution");
    }
    if (alpha == 1.0) return p;  // the check function contributes nothing
    Eigen::RowVectorXd q(p.size());
    for (Eigen::Index w = 0; w < p.size(); ++w) {
        const double pi = token_vowels[w] == target_vowel.id ? 1.0 : 0.0;
        q(w) = alpha * p(w) + (1.0 - alpha) * pi;
    }
    const double total = q.sum();
    if (!(total > 0.0)) {
        throw runtime_error("adjusted_distribution: no probability mass left");
    }
    return q / total;
}

int32_t sample_from(const Eigen::RowVectorXd& probs, SampleMode mode, double temperature,
                    int top_k, std::mt19937_64& rng) {
    if (mode == SampleMode::Argmax) {
        Eigen::Index best = 0;
        probs.maxCoeff(&best);
        return static_cast<int32_t>(best);
    }
    Eigen::RowVectorXd q = probs;
    if (!(temperature > 0.0)) throw usage_error("sampling temperature must be > 0");
    if (temperature != 1.0) {
        for (Eigen::Index i = 0; i < q.size(); ++i) {
            q(i) = q(i) > 0.0 ? std::pow(q(i), 1.0 / temperature) : 0.0;
        }
    }
    if (mode == SampleMode::TopK) {
        if (top_k < 1) throw usage_error("top-k sampling requires top_k >= 1");
        if (top_k < q.size()) {
            std::vector<Eigen::Index> idx(q.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::nth_element(idx.begin(), idx.begin() + top_k - 1, idx.end(),
                             [&](Eigen::Index a, Eigen::Index b) { return q(a) > q(b); });
            Eigen::RowVectorXd kept = Eigen::RowVectorXd::Zero(q.size());
            for (int i = 0; i < top_k; ++i) kept(idx[i]) = q(idx[i]);
            q = kept;
        }
    }
    const double total = q.sum();
    if (!(total > 0.0)) throw runtime_error("sampling: no probability mass");
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        acc += q(i);
        if (u < acc) return static_cast<int32_t>(i);
    }
    for (Eigen::Index i = q.size(); i-- > 0;) {  // rounding tail
        if (q(i) > 0.0) return static_cast<int32_t>(i);
    }
    return 0;
}

namespace {

struct StreamBuilder {
    FeatureSequence seq;
    const ModelConfig* cfg = nullptr;

    void push(int32_t tok, int32_t vowel, int32_t intra, int32_t sent) {
        seq.tokens.push_back(tok);
        seq.vowels.push_back(vowel);
        seq.intra.push_back(std::min(intra, cfg->max_intra_pos - 1));
        seq.sent.push_back(std::min(sent, cfg->max_sentences - 1));
        seq.abs.push_back(static_cast<int32_t>(seq.abs.size()));
    }
};

std::string transcript_text(const FeatureSequence& seq, const Vocab& vocab) {
    std::ostringstream os;
    for (size_t i = 0; i < seq.size(); ++i) {
        if (i) os << ' ';
        os << vocab.token_name(seq.tokens[i]);
    }
    return os.str();
}

}  // namespace

GenResult generate(const ModelParams& params, const Vocab& vocab,
                   const GenControls& controls) {
    const ModelConfig& cfg = params.cfg;
    if (vocab.size() != cfg.vocab_size) {
        throw data_error("generate: vocab does not match the model");
    }
    if (controls.seed_sentence.words.empty()) {
        throw data_error("generate: empty seed sentence");
    }
    if (controls.alpha < 0.0 || controls.alpha > 1.0) {
        throw usage_error("generate: alpha must be in [0, 1]");
    }
    if (controls.ngram_max < 1) throw usage_error("generate: ngram_max must be >= 1");
    const int budget = std::min(controls.max_tokens, cfg.max_abs_pos);
    if (budget < 1) throw usage_error("generate: max_tokens must be >= 1");

    const std::vector<int32_t> token_vowels = vocab.token_vowel_table();

    StreamBuilder sb;
    sb.cfg = &cfg;
    sb.push(TOK_START, NULL_VOWEL.id, 0, 0);
    if (controls.freq) sb.push(freq_token(*controls.freq), NULL_VOWEL.id, 0, 0);

    RhymeState state;
    state.ngram_max = controls.ngram_max;
    state.alpha = controls.alpha;

    const auto& seed = controls.seed_sentence.words;
    int intra = 0;
    for (size_t j = seed.size(); j-- > 0;) {
        const auto id = vocab.try_word_id(seed[j].text);
        if (!id) {
            throw data_error("generate: seed word '" + seed[j].text +
                             "' is not in the model vocabulary");
        }
        if (seed[j].has_beat) sb.push(TOK_BEAT, NULL_VOWEL.id, intra, 0);
        const VowelId v = vocab.token_vowel(*id);
        sb.push(*id, v.id, intra, 0);
        state = update_rhyme_state(std::move(state), v);
        ++intra;
    }
    sb.push(TOK_SEP, NULL_VOWEL.id, 0, 0);
    state = advance_sentence(std::move(state));

    if (static_cast<int>(sb.seq.size()) + 1 > budget) {
        throw data_error("generate: token budget too small for the seed sentence");
    }

    IncrementalScorer scorer(params);
    Eigen::RowVectorXd probs;
    for (size_t t = 0; t < sb.seq.size(); ++t) {
        probs = scorer.append(sb.seq.tokens[t], sb.seq.vowels[t], sb.seq.intra[t],
                              sb.seq.sent[t]);
    }

    std::mt19937_64 rng(controls.rng_seed);
    int sentences_done = 1;  // the seed
    int cur_sent = 1;
    int words_in_sentence = 0;
    bool last_was_beat = false;

    while (static_cast<int>(sb.seq.size()) < budget &&
           (controls.max_sentences <= 0 || sentences_done < controls.max_sentences)) {
        const int tokens_left = budget - static_cast<int>(sb.seq.size());

        Eigen::RowVectorXd masked = probs;
        masked(TOK_PAD) = 0.0;
        masked(TOK_START) = 0.0;
        masked(TOK_FREQ_S) = 0.0;
        masked(TOK_FREQ_M) = 0.0;
        masked(TOK_FREQ_F) = 0.0;
        if (words_in_sentence == 0 || last_was_beat) masked(TOK_SEP) = 0.0;
        if (last_was_beat || tokens_left < 2) masked(TOK_BEAT) = 0.0;
        const double mass = masked.sum();
        if (!(mass > 0.0)) {
            throw runtime_error(
                "generate: model left no structurally valid token; partial transcript: " +
                transcript_text(sb.seq, vocab));
        }
        masked /= mass;

        Eigen::RowVectorXd q = masked;
        if (controls.constraint_enabled && !last_was_beat &&
            constraint_active(state, words_in_sentence)) {
            q = adjusted_distribution(masked,
                                      state.prev_sentence_vowels[words_in_sentence],
                                      token_vowels, controls.alpha);
        }

        const int32_t tok =
            sample_from(q, controls.mode, controls.temperature, controls.top_k, rng);

        if (tok == TOK_SEP) {
            sb.push(TOK_SEP, NULL_VOWEL.id, 0, cur_sent);
            state = advance_sentence(std::move(state));
            ++cur_sent;
            ++sentences_done;
            words_in_sentence = 0;
            last_was_beat = false;
        } else if (tok == TOK_BEAT) {
            sb.push(TOK_BEAT, NULL_VOWEL.id, words_in_sentence, cur_sent);
            last_was_beat = true;
        } else {
            const VowelId v = vocab.token_vowel(tok);
            sb.push(tok, v.id, words_in_sentence, cur_sent);
            state = update_rhyme_state(std::move(state), v);
            ++words_in_sentence;
            last_was_beat = false;
        }
        if (static_cast<int>(sb.seq.size()) >= budget) break;
        if (controls.max_sentences > 0 && sentences_done >= controls.max_sentences) break;
        const size_t t = sb.seq.size() - 1;
        probs = scorer.append(sb.seq.tokens[t], sb.seq.vowels[t], sb.seq.intra[t],
                              sb.seq.sent[t]);
    }

    // The song keeps complete sentences only; the transcript keeps everything.
    GenResult result;
    result.transcript = sb.seq;
    size_t last_sep = 0;
    for (size_t i = 0; i < sb.seq.size(); ++i) {
        if (sb.seq.tokens[i] == TOK_SEP) last_sep = i;
    }
    FeatureSequence clipped = sb.seq;
    const size_t keep = last_sep + 1;
    clipped.tokens.resize(keep);
    clipped.vowels.resize(keep);
    clipped.intra.resize(keep);
    clipped.sent.resize(keep);
    clipped.abs.resize(keep);
    result.song = decode_sequence(clipped, vocab);
    result.song.id = "generated";
    if (controls.freq) result.song.freq_label = controls.freq;
    return result;
}

}  // namespace rapgen
