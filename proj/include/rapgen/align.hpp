#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rapgen/corpus.hpp"

namespace rapgen {

// A word with its midpoint timestamp in seconds.
struct TimedWord {
    std::string word;
    double t = 0.0;

    static TimedWord from_interval(std::string word, double start, double end);
};

struct TimedBeat {
    double t = 0.0;
};

struct AlignmentResult {
    // (beat index, word index) for every beat that found a word inside
    // the half-window.
    std::vector<std::pair<size_t, size_t>> pairs;
    double r = 0.0;  // average word duration used for the window
};

struct AlignOptions {
    // When set, each word receives at most one beat; pairs are assigned
    // greedily in order of increasing distance.
    bool injective = false;
};

// r = total duration / number of words.
double average_word_duration(const std::vector<TimedWord>& words, double total_duration);

// For each beat, the candidate words are those within r/2 of the beat;
// the closest one wins, ties break toward the earlier word.  Beats with
// no candidate stay unaligned.
AlignmentResult align_beats(const std::vector<TimedWord>& words,
                            const std::vector<TimedBeat>& beats, double r,
                            const AlignOptions& opts = {});

// Beat-frequency bucketing: the ratio is words per beat; MEDIUM within
// `medium_tol` of `medium_center`, SLOW below, FAST above.
struct FreqThresholds {
    double medium_center = 3.0;
    double medium_tol = 0.25;
};

struct BeatFrequency {
    double ratio = 0.0;
    FreqLabel label = FreqLabel::Medium;
};

BeatFrequency beat_frequency(const Song& song, const FreqThresholds& th = {});
FreqLabel classify_frequency(double ratio, const FreqThresholds& th = {});

// --- Timestamp files.
//
// Per song block:
//   #SONG <id>
//   #DURATION <seconds>          (optional; default: last word end time)
//   WORD <word> <start_s> <end_s>
//   BEAT <t_s>
//   SENT                         (sentence boundary between WORD records)

struct SongTimestamps {
    std::string id;
    std::vector<TimedWord> words;           // midpoints, in file order
    std::vector<size_t> sentence_breaks;    // word index starting each new sentence
    std::vector<TimedBeat> beats;
    std::optional<double> duration;
    double observed_end = 0.0;  // last word end time seen in the file

    double total_duration() const;
};

std::vector<SongTimestamps> read_timestamp_file(const std::string& path);

// Full alignment step: window from the average word duration, Eq.-style
// nearest-word matching, beat flags attached to the words.
Song align_song(const SongTimestamps& ts, const AlignOptions& opts = {});

}  // namespace rapgen
