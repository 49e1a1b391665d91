#include "rapgen/align.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rapgen/error.hpp"

namespace rapgen {

TimedWord TimedWord::from_interval(std::string word, double start, double end) {
    return {std::move(word), 0.5 * (start + end)};
}

double average_word_duration(const std::vector<TimedWord>& words, double total_duration) {
    if (words.empty()) throw data_error("average_word_duration: empty word list");
    if (!(total_duration > 0.0)) {
        throw data_error("average_word_duration: total duration must be positive");
    }
    return total_duration / static_cast<double>(words.size());
}

AlignmentResult align_beats(const std::vector<TimedWord>& words,
                            const std::vector<TimedBeat>& beats, double r,
                            const AlignOptions& opts) {
    AlignmentResult result;
    result.r = r;
    const double half = r / 2.0;

    if (!opts.injective) {
        for (size_t j = 0; j < beats.size(); ++j) {
            double best = half;
            size_t best_idx = words.size();
            for (size_t i = 0; i < words.size(); ++i) {
                const double d = std::abs(beats[j].t - words[i].t);
                if (d < best || (d == best && best_idx == words.size())) {
                    best = d;
                    best_idx = i;
                }
            }
            if (best_idx < words.size()) result.pairs.emplace_back(j, best_idx);
        }
        return result;
    }

    // Injective mode: rank every in-window pair by distance (ties toward
    // the earlier word, then earlier beat) and assign greedily.
    struct Cand {
        double d;
        size_t word, beat;
    };
    std::vector<Cand> cands;
    for (size_t j = 0; j < beats.size(); ++j) {
        for (size_t i = 0; i < words.size(); ++i) {
            const double d = std::abs(beats[j].t - words[i].t);
            if (d <= half) cands.push_back({d, i, j});
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.word != b.word) return a.word < b.word;
        return a.beat < b.beat;
    });
    std::vector<bool> word_used(words.size(), false), beat_used(beats.size(), false);
    for (const auto& c : cands) {
        if (word_used[c.word] || beat_used[c.beat]) continue;
        word_used[c.word] = beat_used[c.beat] = true;
        result.pairs.emplace_back(c.beat, c.word);
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    return result;
}

FreqLabel classify_frequency(double ratio, const FreqThresholds& th) {
    if (std::abs(ratio - th.medium_center) <= th.medium_tol) return FreqLabel::Medium;
    return ratio < th.medium_center ? FreqLabel::Slow : FreqLabel::Fast;
}

BeatFrequency beat_frequency(const Song& song, const FreqThresholds& th) {
    const size_t beats = song.beat_count();
    if (beats == 0) throw data_error("beat_frequency: song has no beats");
    const double ratio =
        static_cast<double>(song.word_count()) / static_cast<double>(beats);
    return {ratio, classify_frequency(ratio, th)};
}

double SongTimestamps::total_duration() const {
    if (duration) return *duration;
    double last = observed_end;
    for (const auto& w : words) last = std::max(last, w.t);
    return last;
}

std::vector<SongTimestamps> read_timestamp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open timestamp file: " + path);

    std::vector<SongTimestamps> songs;
    SongTimestamps current;
    bool in_song = false;
    bool pending_break = false;
    auto flush = [&] {
        if (in_song) {
            songs.push_back(std::move(current));
            current = SongTimestamps{};
            pending_break = false;
        }
    };

    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw data_error(path + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "#SONG") {
            flush();
            in_song = true;
            ls >> current.id;
        } else if (tag[0] == '#') {
            if (tag == "#DURATION") {
                double d = 0;
                if (!(ls >> d) || !(d > 0)) fail("#DURATION expects a positive number");
                current.duration = d;
            }
            continue;
        } else if (tag == "WORD") {
            std::string w;
            double start = 0, end = 0;
            if (!(ls >> w >> start >> end)) fail("WORD expects <word> <start_s> <end_s>");
            if (!(std::isfinite(start) && std::isfinite(end)) || start < 0 || end < start) {
                fail("WORD has an invalid time interval");
            }
            if (!in_song) in_song = true;
            if (pending_break) {
                current.sentence_breaks.push_back(current.words.size());
                pending_break = false;
            }
            current.words.push_back(TimedWord::from_interval(w, start, end));
            current.observed_end = std::max(current.observed_end, end);
        } else if (tag == "BEAT") {
            double t = 0;
            if (!(ls >> t) || !std::isfinite(t) || t < 0) fail("BEAT expects <t_s> >= 0");
            if (!in_song) in_song = true;
            current.beats.push_back({t});
        } else if (tag == "SENT") {
            pending_break = true;
        } else {
            fail("unknown record '" + tag + "'");
        }
    }
    flush();
    if (songs.empty()) throw data_error(path + ": no songs found");
    for (auto& s : songs) {
        std::sort(s.beats.begin(), s.beats.end(),
                  [](const TimedBeat& a, const TimedBeat& b) { return a.t < b.t; });
    }
    return songs;
}

Song align_song(const SongTimestamps& ts, const AlignOptions& opts) {
    if (ts.words.empty()) throw data_error("align: song '" + ts.id + "' has no words");
    const double r = average_word_duration(ts.words, ts.total_duration());
    const AlignmentResult alignment = align_beats(ts.words, ts.beats, r, opts);

    std::vector<bool> has_beat(ts.words.size(), false);
    for (const auto& [beat, word] : alignment.pairs) has_beat[word] = true;

    Song song;
    song.id = ts.id;
    Sentence sent;
    size_t next_break = 0;
    for (size_t i = 0; i < ts.words.size(); ++i) {
        if (next_break < ts.sentence_breaks.size() &&
            ts.sentence_breaks[next_break] == i && !sent.words.empty()) {
            song.sentences.push_back(std::move(sent));
            sent = Sentence{};
        }
        if (next_break < ts.sentence_breaks.size() && ts.sentence_breaks[next_break] == i) {
            ++next_break;
        }
        sent.words.push_back({ts.words[i].word, has_beat[i]});
    }
    if (!sent.words.empty()) song.sentences.push_back(std::move(sent));
    return song;
}

}  // namespace rapgen
