#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rapgen/vowel.hpp"

namespace rapgen {

// Beat-frequency bucket of a song.
enum class FreqLabel { Slow, Medium, Fast };

char freq_label_char(FreqLabel f);                    // 'S' / 'M' / 'F'
std::optional<FreqLabel> freq_label_from_char(char c);

struct Word {
    std::string text;
    bool has_beat = false;

    friend bool operator==(const Word&, const Word&) = default;
};

struct Sentence {
    std::vector<Word> words;

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Ordered sentences of word tokens with optional beat flags; the unit of
// ingestion, generation, and evaluation.
struct Song {
    std::string id;
    std::vector<Sentence> sentences;
    std::optional<FreqLabel> freq_label;

    size_t word_count() const;
    size_t beat_count() const;

    friend bool operator==(const Song&, const Song&) = default;
};

// --- Annotated lyric text (one sentence per line, `*` marks a beat on
// --- the word right after it).

Song parse_song(const std::string& text);
std::string render_song(const Song& song);

// Corpus files hold several songs:
//   #SONG <id>
//   #FREQ <S|M|F>        (optional)
//   <annotated lyric lines>
std::vector<Song> read_corpus_file(const std::string& path);
void write_corpus_file(const std::string& path, const std::vector<Song>& songs);

// --- Token vocabulary.

// Special token ids; word tokens start at FIRST_WORD_ID.
enum SpecialToken : int32_t {
    TOK_PAD = 0,
    TOK_START = 1,
    TOK_SEP = 2,
    TOK_BEAT = 3,
    TOK_FREQ_S = 4,
    TOK_FREQ_M = 5,
    TOK_FREQ_F = 6,
    FIRST_WORD_ID = 7,
};

inline bool is_word_token(int32_t id) { return id >= FIRST_WORD_ID; }
int32_t freq_token(FreqLabel f);

// Maps word strings to token ids and records each word's rhyme class.
// Word ids are assigned in sorted word order, so the same corpus always
// yields the same vocabulary.
class Vocab {
public:
    Vocab() = default;

    // Collects every distinct word of `songs`.  Words missing from the
    // dictionary get NULL_VOWEL; their count is reported via
    // `unknown_words` when non-null.
    static Vocab build(const std::vector<Song>& songs, const VowelDictionary& dict,
                       size_t* unknown_words = nullptr);

    // Reassembles a vocabulary from checkpoint data.
    static Vocab from_lists(const std::vector<std::string>& words,
                            const std::vector<int32_t>& word_vowels);

    int32_t size() const { return static_cast<int32_t>(FIRST_WORD_ID + words_.size()); }
    int32_t word_id(const std::string& word) const;       // throws if unknown
    std::optional<int32_t> try_word_id(const std::string& word) const;
    const std::string& word_of(int32_t token_id) const;   // throws on non-word ids
    std::string token_name(int32_t token_id) const;       // specials as "[SEP]" etc.

    // Vowel id per token id (NULL_VOWEL for specials).
    VowelId token_vowel(int32_t token_id) const;
    std::vector<int32_t> token_vowel_table() const;

    const std::vector<std::string>& words() const { return words_; }
    const std::vector<int32_t>& word_vowels() const { return word_vowels_; }

private:
    std::vector<std::string> words_;
    std::vector<int32_t> word_vowels_;  // by word index
    std::unordered_map<std::string, int32_t> index_;
};

// --- Model-ready feature sequences.

struct EncodeConfig {
    int32_t max_len = 1024;
    int32_t max_intra_pos = 32;   // intra positions clamp to max_intra_pos - 1
    int32_t max_sentences = 128;  // sentence indices clamp to max_sentences - 1
    bool include_freq_token = true;
    bool pad_to_max = false;
};

// Token stream over reversed sentences.  Positions carry token id, vowel
// id, intra-sentence position (word tokens only; a [BEAT] carries the
// intra position of the word it precedes), sentence index, and absolute
// position.
struct FeatureSequence {
    std::vector<int32_t> tokens;
    std::vector<int32_t> vowels;
    std::vector<int32_t> intra;
    std::vector<int32_t> sent;
    std::vector<int32_t> abs;
    bool truncated = false;

    size_t size() const { return tokens.size(); }
};

// Layout: [START], optional frequency token, then per sentence (original
// song order): the words reversed, [BEAT] immediately before each
// beat-aligned word, then [SEP].
FeatureSequence encode_training_sequence(const Song& song, const VowelDictionary& dict,
                                         const Vocab& vocab, const EncodeConfig& cfg);

// Inverse of the encoder: un-reverses sentences, re-attaches beats,
// strips control tokens.  Throws a data error naming the offending
// position on malformed streams.  A trailing unterminated sentence (from
// truncation or a generation budget) is flushed as a final sentence.
Song decode_sequence(const FeatureSequence& seq, const Vocab& vocab);

// Splits one lyric line into word tokens: each CJK character is a token,
// anything else groups into whitespace-delimited runs.
std::vector<std::string> tokenize_line(const std::string& line);

}  // namespace rapgen
