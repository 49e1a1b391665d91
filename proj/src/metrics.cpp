#include "rapgen/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rapgen/error.hpp"

namespace rapgen {

std::vector<VowelId> sentence_rhyme_pattern(const Sentence& sent,
                                            const VowelDictionary& dict) {
    std::vector<VowelId> out;
    out.reserve(sent.words.size());
    for (size_t j = sent.words.size(); j-- > 0;) {
        const auto v = dict.try_vowel_of(sent.words[j].text);
        out.push_back(v ? *v : NULL_VOWEL);
    }
    return out;
}

int leading_rhyme_match(const Sentence& prev, const Sentence& cur,
                        const VowelDictionary& dict) {
    const auto a = sentence_rhyme_pattern(prev, dict);
    const auto b = sentence_rhyme_pattern(cur, dict);
    const size_t n = std::min(a.size(), b.size());
    int k = 0;
    while (static_cast<size_t>(k) < n && !a[k].is_null() && a[k] == b[k]) ++k;
    return k;
}

int song_rhyme_density(const Song& song, const VowelDictionary& dict) {
    int best = 0;
    for (size_t s = 1; s < song.sentences.size(); ++s) {
        best = std::max(best,
                        leading_rhyme_match(song.sentences[s - 1], song.sentences[s], dict));
    }
    return best;
}

namespace {

double per_word_rhyme_density(const Song& song, const VowelDictionary& dict) {
    long words = 0, chain_sum = 0;
    std::vector<VowelId> prev;
    for (size_t s = 0; s < song.sentences.size(); ++s) {
        const auto cur = sentence_rhyme_pattern(song.sentences[s], dict);
        long run = 0;
        for (size_t i = 0; i < cur.size(); ++i) {
            const bool match = s > 0 && i < prev.size() && !cur[i].is_null() &&
                               cur[i] == prev[i];
            run = match ? run + 1 : 0;
            chain_sum += run;
            ++words;
        }
        prev = cur;
    }
    return words == 0 ? 0.0 : static_cast<double>(chain_sum) / static_cast<double>(words);
}

}  // namespace

double rhyme_density(const std::vector<Song>& songs, const VowelDictionary& dict,
                     bool per_word_variant) {
    if (songs.empty()) return 0.0;
    double total = 0.0;
    for (const auto& song : songs) {
        total += per_word_variant ? per_word_rhyme_density(song, dict)
                                  : static_cast<double>(song_rhyme_density(song, dict));
    }
    return total / static_cast<double>(songs.size());
}

long song_combo_n(const Song& song, const VowelDictionary& dict, int n) {
    if (n < 1) throw usage_error("combo_n: N must be >= 1");
    long best = 1, run = 1;
    for (size_t s = 1; s < song.sentences.size(); ++s) {
        if (leading_rhyme_match(song.sentences[s - 1], song.sentences[s], dict) >= n) {
            ++run;
        } else {
            run = 1;
        }
        best = std::max(best, run);
    }
    return song.sentences.empty() ? 0 : best;
}

double combo_n(const std::vector<Song>& songs, const VowelDictionary& dict, int n) {
    if (songs.empty()) return 0.0;
    double total = 0.0;
    for (const auto& song : songs) {
        total += static_cast<double>(song_combo_n(song, dict, n));
    }
    return total / static_cast<double>(songs.size());
}

namespace {

// Positions of each sentence's intra-0 word token in the encoded stream,
// in sentence order.
std::vector<size_t> first_word_positions(const FeatureSequence& seq) {
    std::vector<size_t> pos;
    bool seen_word = false;
    for (size_t i = 0; i < seq.size(); ++i) {
        const int32_t tok = seq.tokens[i];
        if (tok == TOK_SEP) {
            seen_word = false;
        } else if (is_word_token(tok) && !seen_word) {
            pos.push_back(i);
            seen_word = true;
        }
    }
    return pos;
}

}  // namespace

double rhyme_accuracy(const ModelParams& params, const std::vector<Song>& songs,
                      const VowelDictionary& dict, const Vocab& vocab,
                      const EncodeConfig& ecfg) {
    long eligible = 0, correct = 0;
    for (const auto& song : songs) {
        const auto seq = encode_training_sequence(song, dict, vocab, ecfg);
        const auto preds = argmax_predictions(params, seq);
        const auto pos = first_word_positions(seq);
        for (size_t s = 1; s < pos.size(); ++s) {
            const VowelId ref{seq.vowels[pos[s - 1]]};
            if (ref.is_null()) continue;
            ++eligible;
            const int32_t pred = preds[pos[s] - 1];
            if (vocab.token_vowel(pred) == ref) ++correct;
        }
    }
    return eligible == 0
               ? 0.0
               : 100.0 * static_cast<double>(correct) / static_cast<double>(eligible);
}

double beat_accuracy(const ModelParams& params, const std::vector<Song>& songs,
                     const VowelDictionary& dict, const Vocab& vocab,
                     const EncodeConfig& ecfg) {
    long steps = 0, correct = 0;
    for (const auto& song : songs) {
        const auto seq = encode_training_sequence(song, dict, vocab, ecfg);
        const auto preds = argmax_predictions(params, seq);
        for (size_t t = 0; t + 1 < seq.size(); ++t) {
            const int32_t target = seq.tokens[t + 1];
            if (target == TOK_PAD) continue;
            ++steps;
            if ((preds[t] == TOK_BEAT) == (target == TOK_BEAT)) ++correct;
        }
    }
    return steps == 0 ? 0.0
                      : 100.0 * static_cast<double>(correct) / static_cast<double>(steps);
}

std::pair<IntervalDistribution, IntervalDistribution> beat_interval_distributions(
    const std::vector<Song>& songs) {
    std::map<int, long> fod_counts, sod_counts;
    long fod_total = 0, sod_total = 0;
    for (const auto& song : songs) {
        std::vector<long> beat_positions;
        long idx = 0;
        for (const auto& sent : song.sentences) {
            for (const auto& w : sent.words) {
                if (w.has_beat) beat_positions.push_back(idx);
                ++idx;
            }
        }
        if (beat_positions.size() < 2) continue;
        std::vector<long> intervals;
        for (size_t k = 1; k < beat_positions.size(); ++k) {
            intervals.push_back(beat_positions[k] - beat_positions[k - 1] - 1);
        }
        for (long v : intervals) {
            ++fod_counts[static_cast<int>(v)];
            ++fod_total;
        }
        for (size_t k = 1; k < intervals.size(); ++k) {
            ++sod_counts[static_cast<int>(intervals[k] - intervals[k - 1])];
            ++sod_total;
        }
    }
    IntervalDistribution fod, sod;
    for (const auto& [k, c] : fod_counts) {
        fod.pmf[k] = static_cast<double>(c) / static_cast<double>(fod_total);
    }
    for (const auto& [k, c] : sod_counts) {
        sod.pmf[k] = static_cast<double>(c) / static_cast<double>(sod_total);
    }
    return {fod, sod};
}

double wasserstein_1d(const IntervalDistribution& a, const IntervalDistribution& b) {
    if (a.empty() || b.empty()) {
        throw data_error("wasserstein_1d: empty distribution");
    }
    const int lo = std::min(a.pmf.begin()->first, b.pmf.begin()->first);
    const int hi = std::max(a.pmf.rbegin()->first, b.pmf.rbegin()->first);
    if (lo == hi) return 0.0;
    double cdf_a = 0.0, cdf_b = 0.0, dist = 0.0;
    for (int k = lo; k < hi; ++k) {
        const auto ia = a.pmf.find(k);
        const auto ib = b.pmf.find(k);
        if (ia != a.pmf.end()) cdf_a += ia->second;
        if (ib != b.pmf.end()) cdf_b += ib->second;
        dist += std::abs(cdf_a - cdf_b);
    }
    return dist / static_cast<double>(hi - lo);
}

double rhyme_repetition_rate(const std::vector<Song>& songs,
                             const VowelDictionary& dict) {
    long total = 0, repeated = 0;
    for (const auto& song : songs) {
        for (size_t s = 1; s < song.sentences.size(); ++s) {
            const auto& prev = song.sentences[s - 1].words;
            const auto& cur = song.sentences[s].words;
            const int m = leading_rhyme_match(song.sentences[s - 1], song.sentences[s], dict);
            for (int i = 0; i < m; ++i) {
                ++total;
                const auto& pw = prev[prev.size() - 1 - static_cast<size_t>(i)];
                const auto& cw = cur[cur.size() - 1 - static_cast<size_t>(i)];
                if (pw.text == cw.text) ++repeated;
            }
        }
    }
    return total == 0 ? 0.0
                      : 100.0 * static_cast<double>(repeated) / static_cast<double>(total);
}

}  // namespace rapgen
