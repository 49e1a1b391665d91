#include "rapgen/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "rapgen/error.hpp"
#include "rapgen/utf8.hpp"

namespace rapgen {

char freq_label_char(FreqLabel f) {
    switch (f) {
        case FreqLabel::Slow: return 'S';
        case FreqLabel::Medium: return 'M';
        case FreqLabel::Fast: return 'F';
    }
    return '?';
}

std::optional<FreqLabel> freq_label_from_char(char c) {
    switch (c) {
        case 'S': case 's': return FreqLabel::Slow;
        case 'M': case 'm': return FreqLabel::Medium;
        case 'F': case 'f': return FreqLabel::Fast;
        default: return std::nullopt;
    }
}

int32_t freq_token(FreqLabel f) {
    switch (f) {
        case FreqLabel::Slow: return TOK_FREQ_S;
        case FreqLabel::Medium: return TOK_FREQ_M;
        case FreqLabel::Fast: return TOK_FREQ_F;
    }
    return TOK_FREQ_M;
}

size_t Song::word_count() const {
    size_t n = 0;
    for (const auto& s : sentences) n += s.words.size();
    return n;
}

size_t Song::beat_count() const {
    size_t n = 0;
    for (const auto& s : sentences)
        for (const auto& w : s.words) n += w.has_beat ? 1 : 0;
    return n;
}

std::vector<std::string> tokenize_line(const std::string& line) {
    std::vector<std::string> tokens;
    std::string run;
    auto flush = [&] {
        if (!run.empty()) {
            tokens.push_back(run);
            run.clear();
        }
    };
    size_t i = 0;
    while (i < line.size()) {
        const size_t start = i;
        const char32_t cp = utf8::next(line, i);
        if (cp == U' ' || cp == U'\t') {
            flush();
        } else if (utf8::is_cjk(cp)) {
            flush();
            tokens.push_back(line.substr(start, i - start));
        } else {
            run += line.substr(start, i - start);
        }
    }
    flush();
    return tokens;
}

namespace {

Sentence parse_sentence_line(const std::string& line, int lineno) {
    Sentence sent;
    bool pending_beat = false;
    std::string run;
    auto flush = [&] {
        if (!run.empty()) {
            sent.words.push_back({run, pending_beat});
            pending_beat = false;
            run.clear();
        }
    };
    size_t i = 0;
    while (i < line.size()) {
        const size_t start = i;
        const char32_t cp = utf8::next(line, i);
        if (cp == U'*') {
            flush();
            pending_beat = true;
        } else if (cp == U' ' || cp == U'\t') {
            flush();
            if (pending_beat) {
                throw data_error("line " + std::to_string(lineno) +
                                 ": '*' must directly precede a word");
            }
        } else if (utf8::is_cjk(cp)) {
            flush();
            sent.words.push_back({line.substr(start, i - start), pending_beat});
            pending_beat = false;
        } else {
            run += line.substr(start, i - start);
        }
    }
    flush();
    if (pending_beat) {
        throw data_error("line " + std::to_string(lineno) + ": dangling '*' at end of line");
    }
    return sent;
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

Song parse_song(const std::string& text) {
    Song song;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        Sentence sent = parse_sentence_line(line, lineno);
        if (!sent.words.empty()) song.sentences.push_back(std::move(sent));
    }
    if (song.sentences.empty()) throw data_error("parse_song: no sentences in input");
    return song;
}

std::string render_song(const Song& song) {
    std::string out;
    for (const auto& sent : song.sentences) {
        bool prev_ends_plain = false;  // previous word ended in a non-CJK char
        for (const auto& w : sent.words) {
            size_t tmp = 0;
            const bool starts_cjk = !w.text.empty() && utf8::is_cjk(utf8::next(w.text, tmp));
            // Adjacent non-CJK runs would merge back into one token; a
            // beat marker already separates them.
            if (prev_ends_plain && !starts_cjk && !w.has_beat) out += ' ';
            if (w.has_beat) out += '*';
            out += w.text;
            const std::string last = utf8::last_codepoint(w.text);
            size_t j = 0;
            prev_ends_plain = last.empty() || !utf8::is_cjk(utf8::next(last, j));
        }
        out += '\n';
    }
    return out;
}

std::vector<Song> read_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open corpus file: " + path);
    std::vector<Song> songs;
    Song current;
    bool in_song = false;
    auto flush = [&] {
        if (in_song) {
            if (current.sentences.empty()) {
                throw data_error(path + ": song '" + current.id + "' has no sentences");
            }
            songs.push_back(std::move(current));
            current = Song{};
        }
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        if (line.rfind("#SONG", 0) == 0) {
            flush();
            in_song = true;
            const auto sp = line.find_first_not_of(" \t", 5);
            current.id = sp == std::string::npos ? "" : line.substr(sp);
        } else if (line.rfind("#FREQ", 0) == 0) {
            const auto sp = line.find_first_not_of(" \t", 5);
            const auto f = sp == std::string::npos ? std::nullopt
                                                   : freq_label_from_char(line[sp]);
            if (!f) {
                throw data_error(path + ":" + std::to_string(lineno) +
                                 ": #FREQ expects S, M or F");
            }
            current.freq_label = f;
        } else if (line[0] == '#') {
            continue;  // comment
        } else {
            if (!in_song) {
                // Headerless file: treat the whole file as one song.
                in_song = true;
                current.id = "song";
            }
            current.sentences.push_back(parse_sentence_line(line, lineno));
        }
    }
    flush();
    if (songs.empty()) throw data_error(path + ": no songs found");
    return songs;
}

void write_corpus_file(const std::string& path, const std::vector<Song>& songs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write corpus file: " + path);
    for (const auto& song : songs) {
        out << "#SONG " << song.id << "\n";
        if (song.freq_label) out << "#FREQ " << freq_label_char(*song.freq_label) << "\n";
        out << render_song(song);
    }
    if (!out) throw data_error("write failed: " + path);
}

// --- Vocab

Vocab Vocab::build(const std::vector<Song>& songs, const VowelDictionary& dict,
                   size_t* unknown_words) {
    std::set<std::string> distinct;
    for (const auto& song : songs)
        for (const auto& sent : song.sentences)
            for (const auto& w : sent.words) distinct.insert(w.text);
    Vocab v;
    size_t unknown = 0;
    for (const auto& w : distinct) {
        const auto vid = dict.try_vowel_of(w);
        if (!vid) ++unknown;
        v.index_.emplace(w, static_cast<int32_t>(FIRST_WORD_ID + v.words_.size()));
        v.words_.push_back(w);
        v.word_vowels_.push_back(vid ? vid->id : NULL_VOWEL.id);
    }
    if (unknown_words) *unknown_words = unknown;
    return v;
}

Vocab Vocab::from_lists(const std::vector<std::string>& words,
                        const std::vector<int32_t>& word_vowels) {
    if (words.size() != word_vowels.size()) {
        throw data_error("vocab: words/vowels length mismatch");
    }
    Vocab v;
    v.words_ = words;
    v.word_vowels_ = word_vowels;
    for (size_t i = 0; i < words.size(); ++i) {
        v.index_.emplace(words[i], static_cast<int32_t>(FIRST_WORD_ID + i));
    }
    return v;
}

int32_t Vocab::word_id(const std::string& word) const {
    const auto id = try_word_id(word);
    if (!id) throw data_error("vocab: unknown word '" + word + "'");
    return *id;
}

std::optional<int32_t> Vocab::try_word_id(const std::string& word) const {
    const auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string& Vocab::word_of(int32_t token_id) const {
    if (!is_word_token(token_id) ||
        token_id - FIRST_WORD_ID >= static_cast<int32_t>(words_.size())) {
        throw data_error("vocab: token id " + std::to_string(token_id) + " is not a word");
    }
    return words_[token_id - FIRST_WORD_ID];
}

std::string Vocab::token_name(int32_t token_id) const {
    switch (token_id) {
        case TOK_PAD: return "[PAD]";
        case TOK_START: return "[START]";
        case TOK_SEP: return "[SEP]";
        case TOK_BEAT: return "[BEAT]";
        case TOK_FREQ_S: return "[S]";
        case TOK_FREQ_M: return "[M]";
        case TOK_FREQ_F: return "[F]";
        default: return word_of(token_id);
    }
}

VowelId Vocab::token_vowel(int32_t token_id) const {
    if (!is_word_token(token_id)) return NULL_VOWEL;
    if (token_id - FIRST_WORD_ID >= static_cast<int32_t>(word_vowels_.size())) {
        throw data_error("vocab: token id out of range");
    }
    return VowelId{word_vowels_[token_id - FIRST_WORD_ID]};
}

std::vector<int32_t> Vocab::token_vowel_table() const {
    std::vector<int32_t> table(size(), NULL_VOWEL.id);
    for (size_t i = 0; i < word_vowels_.size(); ++i) {
        table[FIRST_WORD_ID + i] = word_vowels_[i];
    }
    return table;
}

// --- Encoding / decoding

FeatureSequence encode_training_sequence(const Song& song, const VowelDictionary& dict,
                                         const Vocab& vocab, const EncodeConfig& cfg) {
    if (song.sentences.empty()) throw data_error("encode: song has no sentences");
    if (cfg.max_len < 2) throw usage_error("encode: max_len must be >= 2");

    FeatureSequence seq;
    auto push = [&](int32_t tok, int32_t vowel, int32_t intra, int32_t sent_idx) {
        seq.tokens.push_back(tok);
        seq.vowels.push_back(vowel);
        seq.intra.push_back(std::min(intra, cfg.max_intra_pos - 1));
        seq.sent.push_back(std::min(sent_idx, cfg.max_sentences - 1));
        seq.abs.push_back(static_cast<int32_t>(seq.abs.size()));
    };

    push(TOK_START, NULL_VOWEL.id, 0, 0);
    if (cfg.include_freq_token && song.freq_label) {
        push(freq_token(*song.freq_label), NULL_VOWEL.id, 0, 0);
    }

    for (size_t s = 0; s < song.sentences.size(); ++s) {
        const auto& words = song.sentences[s].words;
        if (words.empty()) throw data_error("encode: empty sentence " + std::to_string(s));
        const auto sent_idx = static_cast<int32_t>(s);
        int32_t intra = 0;
        for (size_t j = words.size(); j-- > 0;) {
            const auto& w = words[j];
            const auto vid = dict.try_vowel_of(w.text);
            const int32_t vowel = vid ? vid->id : NULL_VOWEL.id;
            if (w.has_beat) push(TOK_BEAT, NULL_VOWEL.id, intra, sent_idx);
            push(vocab.word_id(w.text), vowel, intra, sent_idx);
            ++intra;
        }
        push(TOK_SEP, NULL_VOWEL.id, 0, sent_idx);
    }

    if (seq.size() > static_cast<size_t>(cfg.max_len)) {
        seq.tokens.resize(cfg.max_len);
        seq.vowels.resize(cfg.max_len);
        seq.intra.resize(cfg.max_len);
        seq.sent.resize(cfg.max_len);
        seq.abs.resize(cfg.max_len);
        seq.truncated = true;
    }
    if (cfg.pad_to_max) {
        while (seq.size() < static_cast<size_t>(cfg.max_len)) {
            push(TOK_PAD, NULL_VOWEL.id, 0, 0);
        }
    }
    return seq;
}

Song decode_sequence(const FeatureSequence& seq, const Vocab& vocab) {
    auto fail = [](size_t pos, const std::string& what) -> Song {
        throw data_error("decode: position " + std::to_string(pos) + ": " + what);
    };
    if (seq.size() == 0) return fail(0, "empty sequence");
    if (seq.tokens[0] != TOK_START) return fail(0, "sequence must begin with [START]");

    Song song;
    Sentence current;
    bool pending_beat = false;
    size_t i = 1;
    if (i < seq.size() && (seq.tokens[i] == TOK_FREQ_S || seq.tokens[i] == TOK_FREQ_M ||
                           seq.tokens[i] == TOK_FREQ_F)) {
        song.freq_label = seq.tokens[i] == TOK_FREQ_S   ? FreqLabel::Slow
                          : seq.tokens[i] == TOK_FREQ_M ? FreqLabel::Medium
                                                        : FreqLabel::Fast;
        ++i;
    }
    for (; i < seq.size(); ++i) {
        const int32_t tok = seq.tokens[i];
        if (tok == TOK_PAD) break;  // padding tail
        if (tok == TOK_BEAT) {
            if (pending_beat) return fail(i, "[BEAT] must precede a word, got [BEAT]");
            pending_beat = true;
        } else if (tok == TOK_SEP) {
            if (pending_beat) return fail(i, "[BEAT] must precede a word, got [SEP]");
            if (current.words.empty()) return fail(i, "empty sentence");
            std::reverse(current.words.begin(), current.words.end());
            song.sentences.push_back(std::move(current));
            current = Sentence{};
        } else if (is_word_token(tok)) {
            current.words.push_back({vocab.word_of(tok), pending_beat});
            pending_beat = false;
        } else {
            return fail(i, "unexpected control token " + vocab.token_name(tok));
        }
    }
    for (; i < seq.size(); ++i) {
        if (seq.tokens[i] != TOK_PAD) return fail(i, "content after [PAD]");
    }
    if (pending_beat) return fail(seq.size() - 1, "[BEAT] at end of stream");
    if (!current.words.empty()) {
        // Unterminated tail (truncated input or exhausted budget).
        std::reverse(current.words.begin(), current.words.end());
        song.sentences.push_back(std::move(current));
    }
    if (song.sentences.empty()) {
        return fail(seq.size() - 1, "sequence contains no sentences");
    }
    return song;
}

}  // namespace rapgen
