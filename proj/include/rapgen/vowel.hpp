#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rapgen {

// Rhyme class of a syllable.  Id 0 is reserved for non-word tokens and
// never rhymes with anything.
struct VowelId {
    int32_t id = 0;

    bool is_null() const { return id == 0; }
    friend bool operator==(VowelId a, VowelId b) { return a.id == b.id; }
    friend bool operator!=(VowelId a, VowelId b) { return a.id != b.id; }
};

inline constexpr VowelId NULL_VOWEL{0};

// How pinyin finals collapse into rhyme classes.
enum class VowelEquivalence {
    // Strip the medial glide (iang -> ang, uai -> ai, van -> an), after
    // normalising the orthographic shorthands ui/iu/un to uei/iou/uen.
    // This makes e.g. xiang-final and liang-final words rhyme.
    StripMedial,
    // Finals compared verbatim.
    Identity,
};

// Maps words to rhyme classes.  Entries associate a word (single
// character or whole syllable string) with its pinyin final; finals are
// collapsed into rhyme classes by the equivalence mode.  Multi-character
// words that have no entry of their own fall back to their last
// character, which carries the rhyme.
//
// Immutable once built; concurrent reads are safe.
class VowelDictionary {
public:
    VowelDictionary() = default;
    explicit VowelDictionary(VowelEquivalence eq) : equivalence_(eq) {}

    // Adds one word -> final pair.  Re-adding an identical pair is a
    // no-op; a conflicting final throws unless `overwrite` is set.
    void add_entry(const std::string& word, const std::string& final,
                   bool overwrite = false);

    // Rhyme class of `word`.  Throws a data error for unknown words.
    VowelId vowel_of(const std::string& word) const;

    // Like vowel_of but returns nullopt instead of throwing.
    std::optional<VowelId> try_vowel_of(const std::string& word) const;

    bool same_rhyme(const std::string& a, const std::string& b) const;

    // Rhyme-class string for an id ("" for NULL_VOWEL).
    const std::string& class_name(VowelId id) const;

    // Class strings in id order, starting at id 1.
    std::vector<std::string> class_names() const;

    size_t size() const { return entries_.size(); }
    int32_t num_classes() const { return static_cast<int32_t>(class_to_id_.size()); }
    VowelEquivalence equivalence() const { return equivalence_; }

    // Id of a class string under the current equivalence, if present.
    std::optional<VowelId> class_id(const std::string& cls) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::string class_of_final(const std::string& final) const;
    void rebuild_classes();

    VowelEquivalence equivalence_ = VowelEquivalence::StripMedial;
    std::map<std::string, std::string> entries_;       // word -> final
    std::map<std::string, int32_t> class_to_id_;       // rhyme class -> id (>= 1)
    std::vector<std::string> id_to_class_;             // [0] = ""
};

// Loads a `word<TAB>final` file.  `#` starts a comment; blank lines are
// skipped.  Duplicate words with conflicting finals are an error.
VowelDictionary load_dictionary(const std::string& path,
                                VowelEquivalence eq = VowelEquivalence::StripMedial);

// The shipped dictionary of common Chinese characters' pinyin finals.
VowelDictionary builtin_dictionary(VowelEquivalence eq = VowelEquivalence::StripMedial);

// Builtin table plus entries from `path` (file entries win on conflict).
VowelDictionary builtin_dictionary_with_overrides(
    const std::string& path, VowelEquivalence eq = VowelEquivalence::StripMedial);

namespace detail {
// Exposed for the builtin table source file.
const std::vector<std::pair<const char*, const char*>>& builtin_finals();
}  // namespace detail

}  // namespace rapgen
