#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rapgen/corpus.hpp"
#include "rapgen/model.hpp"
#include "rapgen/vowel.hpp"

namespace rapgen {

// Tracks how far the leading rhyme chain of the sentence being generated
// matches the previous sentence, by intra-sentence position.
struct RhymeState {
    std::vector<VowelId> prev_sentence_vowels;  // previous sentence, by intra pos
    std::vector<VowelId> current_vowels;        // sentence in progress
    int current_matched = 0;                    // leading positions matched so far
    int ngram_max = 3;
    double alpha = 0.95;
};

// True when the word about to be emitted at intra position `i` is under
// the rhyme constraint: the chain is unbroken, i is inside the N-gram
// window, and the previous sentence has a (known) vowel there.
bool constraint_active(const RhymeState& state, int i);

// Folds one emitted word's vowel into the chain state.
RhymeState update_rhyme_state(RhymeState state, VowelId emitted_vowel);

// Rolls the finished sentence over at a sentence boundary.
RhymeState advance_sentence(RhymeState state);

// q(w) proportional to alpha * p(w) + (1 - alpha) * [vowel(w) == target],
// renormalized.  `token_vowels` gives each vocab token's vowel id;
// control tokens carry the null vowel and thus never pass the check.
Eigen::RowVectorXd adjusted_distribution(const Eigen::RowVectorXd& p,
                                         VowelId target_vowel,
                                         const std::vector<int32_t>& token_vowels,
                                         double alpha);

enum class SampleMode { Argmax, TopK, Temperature };

struct GenControls {
    Sentence seed_sentence;
    std::optional<FreqLabel> freq;
    int max_tokens = 512;    // total sequence budget, prefix included
    int max_sentences = 0;   // stop after this many sentences (0 = budget only)
    SampleMode mode = SampleMode::Temperature;
    double temperature = 1.0;
    int top_k = 0;
    double alpha = 0.95;
    int ngram_max = 3;
    bool constraint_enabled = true;
    uint64_t rng_seed = 0;
};

// Draws an index from `probs` under the given mode.  Temperature rescales
// in log space; top-k keeps the k most likely tokens.
int32_t sample_from(const Eigen::RowVectorXd& probs, SampleMode mode, double temperature,
                    int top_k, std::mt19937_64& rng);

struct GenResult {
    Song song;
    FeatureSequence transcript;  // full token stream, prefix included
};

// Autoregressive generation: encodes [START], the optional frequency
// token and the reversed seed sentence, then samples token by token.
// Word steps under an active constraint draw from the adjusted
// distribution targeting the previous sentence's vowel at the same intra
// position.  Structurally invalid continuations ([PAD], [START], a
// frequency token, an empty sentence, or [BEAT] not followed by a word)
// are masked out; if the model leaves no valid mass, generation fails
// with a partial transcript in the error message.
GenResult generate(const ModelParams& params, const Vocab& vocab,
                   const GenControls& controls);

}  // namespace rapgen
