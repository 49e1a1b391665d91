#include "doctest.h"

#include <fstream>
#include <map>
#include <random>

#include "helpers.hpp"
#include "rapgen/error.hpp"
#include "rapgen/vowel.hpp"

using namespace rapgen;

namespace {

std::string write_file(const testutil::TempDir& dir, const std::string& name,
                       const std::string& content) {
    const std::string path = dir.file(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_dictionary reads word/final pairs") {
    testutil::TempDir dir;
    const auto path = write_file(dir, "d.tsv", "寨\tai\n菜\tai\n");
    const auto dict = load_dictionary(path);
    CHECK(dict.size() == 2);
    CHECK(dict.same_rhyme("寨", "菜"));
}

TEST_CASE("load_dictionary: empty file gives empty dictionary") {
    testutil::TempDir dir;
    const auto path = write_file(dir, "empty.tsv", "");
    const auto dict = load_dictionary(path);
    CHECK(dict.size() == 0);
    CHECK(!dict.try_vowel_of("寨").has_value());
    CHECK_THROWS_AS(dict.vowel_of("寨"), Error);
}

TEST_CASE("load_dictionary: idempotent duplicate accepted, conflict rejected") {
    testutil::TempDir dir;
    const auto dup = write_file(dir, "dup.tsv", "寨\tai\n寨\tai\n");
    CHECK(load_dictionary(dup).size() == 1);

    const auto conflict = write_file(dir, "conf.tsv", "寨\tai\n寨\tei\n");
    CHECK_THROWS_WITH_AS(load_dictionary(conflict),
                         doctest::Contains("conf.tsv:2"), Error);
}

TEST_CASE("load_dictionary: malformed line reports its number") {
    testutil::TempDir dir;
    const auto path = write_file(dir, "bad.tsv", "寨\tai\nnotab\n");
    CHECK_THROWS_WITH_AS(load_dictionary(path), doctest::Contains("bad.tsv:2"), Error);
}

TEST_CASE("load_dictionary: comments and blank lines are skipped") {
    testutil::TempDir dir;
    const auto path = write_file(dir, "c.tsv", "# header\n\n寨\tai  # trailing\n");
    CHECK(load_dictionary(path).size() == 1);
}

TEST_CASE("missing dictionary file") {
    CHECK_THROWS_AS(load_dictionary("/nonexistent/path.tsv"), Error);
}

TEST_CASE("builtin dictionary covers the figure rhyme groups") {
    const auto dict = builtin_dictionary();
    CHECK(dict.vowel_of("寨") == dict.class_id("ai").value());
    CHECK(dict.same_rhyme("寨", "菜"));
    CHECK(dict.same_rhyme("爱", "菜"));
    CHECK(dict.same_rhyme("爱", "代"));
    // Medial stripping lets these rhyme (iang/uang -> ang).
    CHECK(dict.same_rhyme("象", "量"));
    CHECK(dict.same_rhyme("望", "茫"));
    CHECK(dict.same_rhyme("仰", "苍"));
    CHECK(dict.same_rhyme("我", "婆"));
    // Unrelated finals stay apart.
    CHECK(!dict.same_rhyme("寨", "望"));
    CHECK(!dict.same_rhyme("的", "机"));
}

TEST_CASE("identity equivalence keeps finals verbatim") {
    const auto dict = builtin_dictionary(VowelEquivalence::Identity);
    CHECK(dict.same_rhyme("象", "量"));   // both iang
    CHECK(!dict.same_rhyme("望", "茫"));  // uang vs ang
    CHECK(!dict.same_rhyme("我", "婆"));  // uo vs o
}

TEST_CASE("unknown word raises a lookup error") {
    const auto dict = builtin_dictionary();
    CHECK_THROWS_AS(dict.vowel_of("@"), Error);
    CHECK(!dict.try_vowel_of("@").has_value());
}

TEST_CASE("multi-character words rhyme by their last character") {
    const auto dict = builtin_dictionary();
    CHECK(dict.vowel_of("地方") == dict.vowel_of("方"));
    CHECK(dict.same_rhyme("地方", "苍"));
}

TEST_CASE("vowel_of is pure and reload yields identical ids") {
    testutil::TempDir dir;
    const auto path = write_file(dir, "d.tsv", "a\tai\nb\tei\nc\tai\nd\tuang\n");
    const auto d1 = load_dictionary(path);
    const auto d2 = load_dictionary(path);
    for (const auto& w : {"a", "b", "c", "d"}) {
        CHECK(d1.vowel_of(w) == d1.vowel_of(w));
        CHECK(d1.vowel_of(w) == d2.vowel_of(w));
    }
}

TEST_CASE("NULL_VOWEL never matches a word vowel") {
    const auto dict = builtin_dictionary();
    for (const auto& [word, final] : dict.entries()) {
        CHECK(dict.vowel_of(word) != NULL_VOWEL);
    }
}

TEST_CASE("same_rhyme agrees with direct final comparison on a random dictionary") {
    // Brute-force oracle: build 100 random word/final pairs and compare
    // same_rhyme against string equality of the mapped finals.
    std::mt19937_64 rng(42);
    const std::vector<std::string> finals = {"ai",  "ei",  "ao", "ou", "an",
                                             "en",  "ang", "eng", "ong", "i",
                                             "u",   "o"};
    std::map<std::string, std::string> truth;
    VowelDictionary dict(VowelEquivalence::StripMedial);
    for (int i = 0; i < 100; ++i) {
        const std::string word = "w" + std::to_string(i);
        const std::string final = finals[rng() % finals.size()];
        truth[word] = final;
        dict.add_entry(word, final);
    }
    for (const auto& [wa, fa] : truth) {
        for (const auto& [wb, fb] : truth) {
            CHECK(dict.same_rhyme(wa, wb) == (fa == fb));
        }
    }
}

TEST_CASE("same_rhyme is an equivalence relation on the builtin dictionary") {
    const auto dict = builtin_dictionary();
    std::vector<std::string> words;
    for (const auto& [w, f] : dict.entries()) words.push_back(w);
    // Reflexive on everything, symmetric + transitive via class ids.
    std::map<int32_t, std::string> rep;
    for (const auto& w : words) {
        CHECK(dict.same_rhyme(w, w));
        const auto id = dict.vowel_of(w);
        auto [it, fresh] = rep.emplace(id.id, w);
        if (!fresh) {
            CHECK(dict.same_rhyme(w, it->second));
            CHECK(dict.same_rhyme(it->second, w));
        }
    }
    // Words in different classes never rhyme.
    auto it = rep.begin();
    const std::string& a = it->second;
    for (++it; it != rep.end(); ++it) CHECK(!dict.same_rhyme(a, it->second));
}

TEST_CASE("file overrides replace builtin finals") {
    testutil::TempDir dir;
    const auto path = write_file(dir, "o.tsv", "寨\tei\n");
    const auto dict = builtin_dictionary_with_overrides(path);
    CHECK(dict.same_rhyme("寨", "给"));   // now ei
    CHECK(!dict.same_rhyme("寨", "菜"));  // no longer ai
}

TEST_CASE("orthographic shorthands normalize under strip equivalence") {
    VowelDictionary dict(VowelEquivalence::StripMedial);
    dict.add_entry("a", "ui");   // => uei => ei
    dict.add_entry("b", "uei");
    dict.add_entry("c", "ei");
    dict.add_entry("d", "iu");   // => iou => ou
    dict.add_entry("e", "ou");
    CHECK(dict.same_rhyme("a", "b"));
    CHECK(dict.same_rhyme("a", "c"));
    CHECK(dict.same_rhyme("d", "e"));
}
