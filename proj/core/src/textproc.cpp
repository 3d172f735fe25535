#include "manuscriptor/textproc.hpp"

#include "embedded_data.hpp"
#include "manuscriptor/stemmer.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>

namespace manuscriptor {
namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }

// Decodes the code point starting at `i`; returns a negative value for malformed input.
UChar32 next_code_point(std::string_view text, std::size_t& i) {
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    auto pos = static_cast<int32_t>(i);
    UChar32 c = 0;
    U8_NEXT(bytes, pos, length, c);
    i = static_cast<std::size_t>(pos);
    return c;
}

void append_utf8(std::string& out, UChar32 c) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

bool starts_sentence(std::string_view text, std::size_t i) {
    if (i >= text.size()) return true;
    const UChar32 c = next_code_point(text, i);
    return c >= 0 && (u_isupper(c) || u_isdigit(c));
}

}  // namespace

WordSet parse_word_list(std::string_view contents) {
    WordSet words;
    std::size_t pos = 0;
    while (pos <= contents.size()) {
        std::size_t eol = contents.find('\n', pos);
        if (eol == std::string_view::npos) eol = contents.size();
        std::string_view line = contents.substr(pos, eol - pos);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
        while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
        if (!line.empty()) {
            std::string word(line);
            std::transform(word.begin(), word.end(), word.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            words.insert(std::move(word));
        }
        pos = eol + 1;
    }
    return words;
}

const WordSet& default_stop_words() {
    static const WordSet words = parse_word_list(embedded::kStopWords);
    return words;
}

const WordSet& default_abbreviations() {
    static const WordSet words = parse_word_list(embedded::kAbbreviations);
    return words;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char b = static_cast<unsigned char>(text[i]);
        if (b < 0x80) {
            ++i;
            if (std::isalnum(b)) {
                current.push_back(static_cast<char>(std::tolower(b)));
                continue;
            }
        } else {
            const UChar32 c = next_code_point(text, i);
            if (c >= 0 && u_isalnum(c)) {
                append_utf8(current, u_tolower(c));
                continue;
            }
        }
        if (!current.empty()) words.push_back(std::move(current));
        current.clear();
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

std::optional<std::string> normalize_word(std::string_view word) {
    auto words = split_words(word);
    if (words.size() != 1) return std::nullopt;
    // Any separator inside `word` would have produced a split or been dropped.
    std::size_t i = 0;
    while (i < word.size()) {
        const UChar32 c = next_code_point(word, i);
        if (c < 0 || !u_isalnum(c)) return std::nullopt;
    }
    return std::move(words.front());
}

TextProcessor::TextProcessor(WordSet stop_words, WordSet abbreviations)
    : stop_words_(std::move(stop_words)), abbreviations_(std::move(abbreviations)) {}

const TextProcessor& TextProcessor::standard() {
    static const TextProcessor instance(default_stop_words(), default_abbreviations());
    return instance;
}

bool TextProcessor::is_stop_word(std::string_view token) const {
    return stop_words_.find(token) != stop_words_.end();
}

bool TextProcessor::is_abbreviation(std::string_view word) const {
    std::string lowered(word);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return abbreviations_.find(lowered) != abbreviations_.end();
}

std::vector<std::string> TextProcessor::tokenize(std::string_view text, Pipeline kind) const {
    std::vector<std::string> words = split_words(text);
    if (kind == Pipeline::Embed) return words;

    std::vector<std::string> tokens;
    tokens.reserve(words.size());
    for (auto& w : words) {
        if (is_stop_word(w)) continue;
        // A stem can itself be a stop word ("wills" -> "will").
        std::string stem = stem_to_fixed_point(w);
        if (is_stop_word(stem)) continue;
        tokens.push_back(std::move(stem));
    }
    return tokens;
}

std::vector<Sentence> TextProcessor::split_sentences(std::span<const std::string> paragraphs) const {
    std::vector<Sentence> sentences;
    std::size_t base = 0;
    auto emit = [&](std::string_view para, std::size_t begin, std::size_t end) {
        while (end > begin && is_space(para[end - 1])) --end;
        if (end == begin) return;
        Sentence s;
        s.ordinal = static_cast<std::uint32_t>(sentences.size());
        s.span = {base + begin, base + end};
        s.text = std::string(para.substr(begin, end - begin));
        sentences.push_back(std::move(s));
    };

    for (const std::string& p : paragraphs) {
        const std::string_view para(p);
        std::size_t start = 0;
        while (start < para.size() && is_space(para[start])) ++start;
        std::size_t i = start;
        while (i < para.size()) {
            if (!is_terminator(para[i])) {
                ++i;
                continue;
            }
            const std::size_t run_begin = i;
            while (i < para.size() && is_terminator(para[i])) ++i;
            const bool single_period = (i - run_begin == 1) && para[run_begin] == '.';
            while (i < para.size() && is_closer(para[i])) ++i;
            const std::size_t end = i;

            std::size_t next = end;
            while (next < para.size() && is_space(para[next])) ++next;
            bool boundary = false;
            if (next == para.size()) {
                boundary = true;
            } else if (next > end && starts_sentence(para, next)) {
                boundary = true;
            }
            if (boundary && single_period) {
                std::size_t w = run_begin;
                while (w > start && !is_space(para[w - 1])) --w;
                std::string_view word = para.substr(w, run_begin - w);
                while (!word.empty() && !std::isalnum(static_cast<unsigned char>(word.front()))) {
                    word.remove_prefix(1);
                }
                if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0]))) {
                    boundary = false;
                } else if (!word.empty() && is_abbreviation(word)) {
                    boundary = false;
                }
            }
            if (boundary) {
                emit(para, start, end);
                start = next;
                i = next;
            }
        }
        if (start < para.size()) emit(para, start, para.size());
        base += para.size() + 1;
    }
    return sentences;
}

std::vector<std::string> tokenize(std::string_view text, Pipeline kind) {
    return TextProcessor::standard().tokenize(text, kind);
}

std::vector<Sentence> split_sentences(std::span<const std::string> paragraphs) {
    return TextProcessor::standard().split_sentences(paragraphs);
}

std::string join_paragraphs(std::span<const std::string> paragraphs) {
    std::string out;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        if (i) out.push_back('\n');
        out += paragraphs[i];
    }
    return out;
}

}  // namespace manuscriptor
