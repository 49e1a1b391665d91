#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "rapgen/align.hpp"
#include "rapgen/error.hpp"

using namespace rapgen;

namespace {

// Exhaustive reference: for each beat scan every word.
std::vector<std::pair<size_t, size_t>> brute_force_align(
    const std::vector<TimedWord>& words, const std::vector<TimedBeat>& beats, double r) {
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t j = 0; j < beats.size(); ++j) {
        size_t best = words.size();
        double best_d = 0;
        for (size_t i = 0; i < words.size(); ++i) {
            const double d = std::abs(beats[j].t - words[i].t);
            if (d > r / 2) continue;
            if (best == words.size() || d < best_d) {
                best = i;
                best_d = d;
            }
        }
        if (best < words.size()) pairs.emplace_back(j, best);
    }
    return pairs;
}

}  // namespace

TEST_CASE("average_word_duration") {
    std::vector<TimedWord> ten(10);
    CHECK(average_word_duration(ten, 20.0) == doctest::Approx(2.0));
    std::vector<TimedWord> one(1);
    CHECK(average_word_duration(one, 3.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(average_word_duration({}, 5.0), Error);
    CHECK_THROWS_AS(average_word_duration(ten, 0.0), Error);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dur(0.5, 500.0);
    std::uniform_int_distribution<int> n(1, 200);
    for (int it = 0; it < 50; ++it) {
        const int k = n(rng);
        const double d = dur(rng);
        std::vector<TimedWord> words(static_cast<size_t>(k));
        CHECK(average_word_duration(words, d) == doctest::Approx(d / k).epsilon(1e-12));
    }
}

TEST_CASE("align_beats: exact coincidence and window exclusion") {
    const std::vector<TimedWord> words = {{"w", 1.0}};
    CHECK(align_beats(words, {{1.0}}, 1.0).pairs ==
          std::vector<std::pair<size_t, size_t>>{{0, 0}});
    CHECK(align_beats(words, {{5.0}}, 1.0).pairs.empty());
    // Window is inclusive at exactly r/2.
    CHECK(align_beats(words, {{1.5}}, 1.0).pairs.size() == 1);
    CHECK(align_beats(words, {{1.500001}}, 1.0).pairs.empty());
}

TEST_CASE("align_beats: ties break toward the earlier word") {
    const std::vector<TimedWord> words = {{"a", 0.9}, {"b", 1.1}};
    const auto result = align_beats(words, {{1.0}}, 2.0);
    REQUIRE(result.pairs.size() == 1);
    CHECK(result.pairs[0].second == 0);
}

TEST_CASE("align_beats: empty inputs give empty result") {
    CHECK(align_beats({}, {{1.0}}, 1.0).pairs.empty());
    CHECK(align_beats({{"w", 1.0}}, {}, 1.0).pairs.empty());
}

TEST_CASE("align_beats matches the brute-force oracle on 500 random instances") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 60.0);
    std::uniform_int_distribution<int> nw(0, 40), nb(0, 25);
    std::uniform_real_distribution<double> rdist(0.1, 5.0);
    for (int it = 0; it < 500; ++it) {
        std::vector<TimedWord> words(static_cast<size_t>(nw(rng)));
        for (size_t i = 0; i < words.size(); ++i) words[i] = {"w", uni(rng)};
        std::sort(words.begin(), words.end(),
                  [](const TimedWord& a, const TimedWord& b) { return a.t < b.t; });
        std::vector<TimedBeat> beats(static_cast<size_t>(nb(rng)));
        for (auto& b : beats) b.t = uni(rng);
        std::sort(beats.begin(), beats.end(),
                  [](const TimedBeat& a, const TimedBeat& b) { return a.t < b.t; });
        const double r = rdist(rng);
        CHECK(align_beats(words, beats, r).pairs == brute_force_align(words, beats, r));
    }
}

TEST_CASE("alignment is invariant under time translation and scaling") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 30.0);
    for (int it = 0; it < 50; ++it) {
        std::vector<TimedWord> words(12);
        for (auto& w : words) w = {"w", uni(rng)};
        std::vector<TimedBeat> beats(8);
        for (auto& b : beats) b.t = uni(rng);
        const double r = 1.7;
        const auto base = align_beats(words, beats, r).pairs;

        auto wt = words;
        auto bt = beats;
        for (auto& w : wt) w.t += 100.0;
        for (auto& b : bt) b.t += 100.0;
        CHECK(align_beats(wt, bt, r).pairs == base);

        auto ws = words;
        auto bs = beats;
        for (auto& w : ws) w.t *= 2.0;
        for (auto& b : bs) b.t *= 2.0;
        CHECK(align_beats(ws, bs, 2.0 * r).pairs == base);
    }
}

TEST_CASE("one word may take several beats unless injectivity is on") {
    const std::vector<TimedWord> words = {{"a", 1.0}, {"b", 9.0}};
    const std::vector<TimedBeat> beats = {{0.9}, {1.1}};
    const auto loose = align_beats(words, beats, 2.0);
    REQUIRE(loose.pairs.size() == 2);
    CHECK(loose.pairs[0].second == 0);
    CHECK(loose.pairs[1].second == 0);

    AlignOptions opts;
    opts.injective = true;
    const auto strict = align_beats(words, beats, 2.0, opts);
    REQUIRE(strict.pairs.size() == 1);
    CHECK(strict.pairs[0].second == 0);  // nearest beat keeps the word
}

TEST_CASE("beat_frequency buckets follow the configured thresholds") {
    auto make_song = [](int words, int beats) {
        Song song;
        Sentence s;
        for (int i = 0; i < words; ++i) s.words.push_back({"w", i < beats});
        song.sentences.push_back(s);
        return song;
    };
    // 43 words / 10 beats = 4.3 -> fast; 21/10 = 2.1 -> slow; 30/10 = 3 -> medium.
    CHECK(beat_frequency(make_song(43, 10)).label == FreqLabel::Fast);
    CHECK(beat_frequency(make_song(43, 10)).ratio == doctest::Approx(4.3));
    CHECK(beat_frequency(make_song(21, 10)).label == FreqLabel::Slow);
    CHECK(beat_frequency(make_song(30, 10)).label == FreqLabel::Medium);
    // Boundary band: exactly +-0.25 around 3 is medium.
    CHECK(classify_frequency(3.25) == FreqLabel::Medium);
    CHECK(classify_frequency(2.75) == FreqLabel::Medium);
    CHECK(classify_frequency(3.26) == FreqLabel::Fast);
    CHECK(classify_frequency(2.6) == FreqLabel::Slow);

    Song no_beats = make_song(5, 0);
    CHECK_THROWS_AS(beat_frequency(no_beats), Error);
}

TEST_CASE("timestamp file parses words, beats, breaks, duration") {
    testutil::TempDir dir;
    const auto path = dir.file("ts.txt");
    {
        std::ofstream out(path);
        out << "#SONG demo\n"
            << "#DURATION 12\n"
            << "WORD 我 0.0 1.0\n"
            << "WORD 抬 1.0 2.0\n"
            << "SENT\n"
            << "WORD 头 2.0 3.0\n"
            << "BEAT 1.4\n"
            << "BEAT 9.9\n";
    }
    const auto songs = read_timestamp_file(path);
    REQUIRE(songs.size() == 1);
    CHECK(songs[0].id == "demo");
    CHECK(songs[0].total_duration() == doctest::Approx(12.0));
    REQUIRE(songs[0].words.size() == 3);
    CHECK(songs[0].words[0].t == doctest::Approx(0.5));  // interval midpoint
    CHECK(songs[0].sentence_breaks == std::vector<size_t>{2});
    REQUIRE(songs[0].beats.size() == 2);

    // r = 12 / 3 = 4; both beats within 2.0 of some word midpoint? The
    // second beat at 9.9 is 7.4 from the last midpoint: unaligned.
    const Song aligned = align_song(songs[0]);
    REQUIRE(aligned.sentences.size() == 2);
    CHECK(aligned.sentences[0].words[1].has_beat);   // 1.4 -> 抬 (midpoint 1.5)
    CHECK(!aligned.sentences[1].words[0].has_beat);
}

TEST_CASE("timestamp file rejects malformed records") {
    testutil::TempDir dir;
    const auto path = dir.file("bad.txt");
    std::ofstream(path) << "#SONG x\nWORD a 1.0\n";
    CHECK_THROWS_WITH_AS(read_timestamp_file(path), doctest::Contains(":2"), Error);
    CHECK_THROWS_AS(read_timestamp_file("/nonexistent"), Error);
}
