#include "rapgen/vowel.hpp"

#include <fstream>
#include <sstream>

#include "rapgen/error.hpp"
#include "rapgen/utf8.hpp"

namespace rapgen {

namespace {

bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// ui -> uei, iu -> iou, un -> uen.  Leaves everything else alone.
std::string normalize_shorthand(const std::string& f) {
    if (f == "ui") return "uei";
    if (f == "iu") return "iou";
    if (f == "un") return "uen";
    return f;
}

}  // namespace

std::string VowelDictionary::class_of_final(const std::string& final) const {
    if (equivalence_ == VowelEquivalence::Identity) return final;
    std::string f = normalize_shorthand(final);
    // Drop a leading medial i/u/v when another vowel follows, so that
    // iang/uang -> ang, uai -> ai, van -> an, uo -> o.  Finals like in,
    // ing, vn keep their head vowel.
    if (f.size() > 1 && (f[0] == 'i' || f[0] == 'u' || f[0] == 'v') &&
        is_vowel_letter(f[1])) {
        f.erase(0, 1);
    }
    return f;
}

void VowelDictionary::add_entry(const std::string& word, const std::string& final,
                                bool overwrite) {
    if (word.empty() || final.empty()) {
        throw data_error("vowel dictionary: empty word or final");
    }
    auto it = entries_.find(word);
    if (it != entries_.end()) {
        if (it->second == final) return;
        if (!overwrite) {
            throw data_error("vowel dictionary: conflicting finals for '" + word +
                             "': '" + it->second + "' vs '" + final + "'");
        }
        it->second = final;
    } else {
        entries_.emplace(word, final);
    }
    rebuild_classes();
}

void VowelDictionary::rebuild_classes() {
    class_to_id_.clear();
    for (const auto& [word, final] : entries_) {
        class_to_id_.emplace(class_of_final(final), 0);
    }
    id_to_class_.assign(1, "");
    int32_t next = 1;
    for (auto& [cls, id] : class_to_id_) {  // std::map: deterministic order
        id = next++;
        id_to_class_.push_back(cls);
    }
}

std::optional<VowelId> VowelDictionary::try_vowel_of(const std::string& word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) {
        // Rhyme is carried by the last syllable: multi-character words
        // fall back to their final character.
        const std::string last = utf8::last_codepoint(word);
        if (last.empty() || last == word) return std::nullopt;
        it = entries_.find(last);
        if (it == entries_.end()) return std::nullopt;
    }
    const auto cit = class_to_id_.find(class_of_final(it->second));
    if (cit == class_to_id_.end()) return std::nullopt;
    return VowelId{cit->second};
}

VowelId VowelDictionary::vowel_of(const std::string& word) const {
    auto v = try_vowel_of(word);
    if (!v) throw data_error("vowel dictionary: unknown word '" + word + "'");
    return *v;
}

bool VowelDictionary::same_rhyme(const std::string& a, const std::string& b) const {
    return vowel_of(a) == vowel_of(b);
}

const std::string& VowelDictionary::class_name(VowelId id) const {
    if (id.id < 0 || id.id >= static_cast<int32_t>(id_to_class_.size())) {
        throw data_error("vowel dictionary: invalid vowel id " + std::to_string(id.id));
    }
    return id_to_class_[id.id];
}

std::vector<std::string> VowelDictionary::class_names() const {
    return {id_to_class_.begin() + 1, id_to_class_.end()};
}

std::optional<VowelId> VowelDictionary::class_id(const std::string& cls) const {
    auto it = class_to_id_.find(cls);
    if (it == class_to_id_.end()) return std::nullopt;
    return VowelId{it->second};
}

namespace {

void load_entries_from_file(VowelDictionary& dict, const std::string& path,
                            bool overwrite) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open vowel dictionary file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
            throw data_error(path + ":" + std::to_string(lineno) +
                             ": expected 'word<TAB>final'");
        }
        try {
            dict.add_entry(line.substr(0, tab), line.substr(tab + 1), overwrite);
        } catch (const Error& e) {
            throw data_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

}  // namespace

VowelDictionary load_dictionary(const std::string& path, VowelEquivalence eq) {
    VowelDictionary dict(eq);
    load_entries_from_file(dict, path, /*overwrite=*/false);
    return dict;
}

VowelDictionary builtin_dictionary(VowelEquivalence eq) {
    VowelDictionary dict(eq);
    for (const auto& [word, final] : detail::builtin_finals()) {
        dict.add_entry(word, final);
    }
    return dict;
}

VowelDictionary builtin_dictionary_with_overrides(const std::string& path,
                                                  VowelEquivalence eq) {
    VowelDictionary dict = builtin_dictionary(eq);
    load_entries_from_file(dict, path, /*overwrite=*/true);
    return dict;
}

}  // namespace rapgen
