#include "rapgen/synth.hpp"

#include <array>
#include <fstream>
#include <random>
#include <sstream>

#include "rapgen/error.hpp"

namespace rapgen {

namespace {

void validate(const SynthSpec& spec) {
    auto req = [](bool ok, const std::string& what) {
        if (!ok) throw usage_error("synth spec: " + what);
    };
    req(spec.n_songs >= 1, "n_songs must be >= 1");
    req(spec.sentences_per_song >= 1, "sentences_per_song must be >= 1");
    req(spec.len_min >= 1 && spec.len_max >= spec.len_min, "bad sentence length range");
    req(spec.n_vowel_classes >= 2, "need at least 2 vowel classes");
    req(spec.vocab_size >= 2 * spec.n_vowel_classes,
        "vocab_size must be >= 2 per vowel class");
    req(spec.ngram >= 1, "ngram must be >= 1");
    req(spec.ngram <= spec.len_min, "ngram rhyme wider than the shortest sentence");
    req(spec.chain_len >= 1 && spec.chain_len <= spec.sentences_per_song,
        "chain_len must be in [1, sentences_per_song]");
    for (int g : spec.beat_pattern) req(g >= 0, "beat gaps must be >= 0");
}

// Word surfaces depend only on (vocab_size, n_vowel_classes) so corpora
// generated from different seeds share one dictionary.
std::vector<std::string> make_words(int vocab_size, int n_classes) {
    static constexpr std::array<const char*, 8> kCons = {"b", "d", "k", "l",
                                                         "m", "n", "r", "s"};
    static constexpr std::array<const char*, 5> kVows = {"a", "e", "i", "o", "u"};
    std::vector<std::string> words(vocab_size);
    for (int i = 0; i < vocab_size; ++i) {
        const int cls = i % n_classes;
        words[i] = std::string(kCons[(i / n_classes) % kCons.size()]) +
                   kVows[cls % kVows.size()] + std::to_string(i);
    }
    return words;
}

}  // namespace

SynthResult generate_synthetic_corpus(const SynthSpec& spec) {
    validate(spec);
    SynthResult out;

    const int C = spec.n_vowel_classes;
    const std::vector<std::string> words = make_words(spec.vocab_size, C);
    out.dict = VowelDictionary(VowelEquivalence::StripMedial);
    for (int i = 0; i < spec.vocab_size; ++i) {
        out.dict.add_entry(words[i], "syn" + std::to_string(i % C));
    }
    // class -> indices into `words`
    std::vector<std::vector<int>> class_words(C);
    for (int i = 0; i < spec.vocab_size; ++i) class_words[i % C].push_back(i);

    std::mt19937_64 rng(spec.seed);
    auto pick = [&rng](int n) {
        return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
    };
    auto pick_other = [&](int n, int avoid) {
        const int v = pick(n - 1);
        return v >= avoid ? v + 1 : v;
    };

    long rhyme_occurrences = 0, repeated_occurrences = 0;
    std::map<int, long> fod_counts, sod_counts;

    for (int song_i = 0; song_i < spec.n_songs; ++song_i) {
        Song song;
        {
            std::ostringstream id;
            id << "synth-" << song_i;
            song.id = id.str();
        }
        // Rhyme structure is indexed by reversed position: slot 0 is the
        // last word of a sentence, where rhymes live.
        std::vector<std::vector<int>> classes(spec.sentences_per_song);
        std::vector<std::vector<int>> choice(spec.sentences_per_song);  // word index per slot

        for (int s = 0; s < spec.sentences_per_song; ++s) {
            const int len = spec.len_min + pick(spec.len_max - spec.len_min + 1);
            classes[s].resize(len);
            choice[s].resize(len);
            const bool chained = s >= 1 && s < spec.chain_len;
            for (int r = 0; r < len; ++r) {
                if (chained && r < spec.ngram) {
                    classes[s][r] = classes[s - 1][r];
                } else if (chained && r == spec.ngram &&
                           r < static_cast<int>(classes[s - 1].size())) {
                    // Break the chain exactly at width ngram.
                    classes[s][r] = pick_other(C, classes[s - 1][r]);
                } else if (!chained && s >= 1 && r == 0) {
                    // Unchained sentences never rhyme with their predecessor.
                    classes[s][r] = pick_other(C, classes[s - 1][0]);
                } else {
                    classes[s][r] = pick(C);
                }
                const auto& pool = class_words[classes[s][r]];
                if (chained && r < spec.ngram) {
                    const int partner = choice[s - 1][r];
                    ++rhyme_occurrences;
                    if (spec.repeat_rhyme_words) {
                        choice[s][r] = partner;
                        ++repeated_occurrences;
                    } else {
                        // Same class, different surface.
                        int slot = pick(static_cast<int>(pool.size()) - 1);
                        int partner_slot = -1;
                        for (size_t k = 0; k < pool.size(); ++k) {
                            if (pool[k] == partner) partner_slot = static_cast<int>(k);
                        }
                        if (partner_slot >= 0 && slot >= partner_slot) ++slot;
                        choice[s][r] = pool[slot];
                    }
                } else {
                    choice[s][r] = pool[pick(static_cast<int>(pool.size()))];
                }
            }
            Sentence sent;
            for (int j = 0; j < len; ++j) {
                sent.words.push_back({words[choice[s][len - 1 - j]], false});
            }
            song.sentences.push_back(std::move(sent));
        }

        // Beat placement over the flattened word stream.
        if (!spec.beat_pattern.empty()) {
            std::vector<std::pair<int, int>> flat;  // (sentence, word)
            for (int s = 0; s < spec.sentences_per_song; ++s)
                for (size_t i = 0; i < song.sentences[s].words.size(); ++i)
                    flat.emplace_back(s, static_cast<int>(i));
            size_t idx = 0, p = 0;
            long prev_interval = -1;
            bool first = true;
            size_t prev_idx = 0;
            while (idx < flat.size()) {
                song.sentences[flat[idx].first].words[flat[idx].second].has_beat = true;
                if (!first) {
                    const long interval = static_cast<long>(idx - prev_idx) - 1;
                    ++fod_counts[static_cast<int>(interval)];
                    if (prev_interval >= 0) {
                        ++sod_counts[static_cast<int>(interval - prev_interval)];
                    }
                    prev_interval = interval;
                }
                first = false;
                prev_idx = idx;
                idx += static_cast<size_t>(spec.beat_pattern[p % spec.beat_pattern.size()]) + 1;
                ++p;
            }
        }

        if (spec.label_freq && song.beat_count() > 0) {
            song.freq_label = beat_frequency(song, *spec.label_freq).label;
        }
        out.songs.push_back(std::move(song));
    }

    // Constructive expectations: every song realizes one chain of
    // `chain_len` sentences rhyming exactly `ngram` wide.
    auto& gt = out.ground_truth;
    gt.rd = spec.chain_len >= 2 ? static_cast<double>(spec.ngram) : 0.0;
    auto combo = [&](int k) {
        return k <= spec.ngram ? static_cast<double>(std::max(spec.chain_len, 1)) : 1.0;
    };
    gt.combo1 = combo(1);
    gt.combo2 = combo(2);
    gt.combo3 = combo(3);
    gt.rhyme_repetition =
        rhyme_occurrences == 0
            ? 0.0
            : 100.0 * static_cast<double>(repeated_occurrences) /
                  static_cast<double>(rhyme_occurrences);
    long fod_total = 0, sod_total = 0;
    for (const auto& [k, n] : fod_counts) fod_total += n;
    for (const auto& [k, n] : sod_counts) sod_total += n;
    for (const auto& [k, n] : fod_counts) {
        gt.fod[k] = static_cast<double>(n) / static_cast<double>(fod_total);
    }
    for (const auto& [k, n] : sod_counts) {
        gt.sod[k] = static_cast<double>(n) / static_cast<double>(sod_total);
    }
    return out;
}

void write_dictionary_file(const std::string& path, const VowelDictionary& dict) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write dictionary file: " + path);
    out << "# word<TAB>final\n";
    for (const auto& [word, final] : dict.entries()) {
        out << word << '\t' << final << '\n';
    }
    if (!out) throw data_error("write failed: " + path);
}

namespace {

std::string hist_to_string(const std::map<int, double>& h) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [k, p] : h) {
        if (!first) os << ',';
        os << k << ':' << p;
        first = false;
    }
    return os.str();
}

}  // namespace

void write_ground_truth_file(const std::string& path, const SynthGroundTruth& gt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write ground truth file: " + path);
    out.precision(17);
    out << "rd\t" << gt.rd << "\n"
        << "combo1\t" << gt.combo1 << "\n"
        << "combo2\t" << gt.combo2 << "\n"
        << "combo3\t" << gt.combo3 << "\n"
        << "rhyme_repetition\t" << gt.rhyme_repetition << "\n"
        << "fod_hist\t" << hist_to_string(gt.fod) << "\n"
        << "sod_hist\t" << hist_to_string(gt.sod) << "\n";
    if (!out) throw data_error("write failed: " + path);
}

}  // namespace rapgen
