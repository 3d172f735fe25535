#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace manuscriptor {

/// Which normalization a token stream is meant for.
///
/// `Index` tokens are lowercase, stop-word-free and stemmed (the inverted
/// index and filter terms). `Embed` tokens are lowercase surface forms with
/// stop words kept, matching the vocabulary of pretrained word vectors.
enum class Pipeline { Index, Embed };

using WordSet = std::set<std::string, std::less<>>;

/// Half-open byte range into a paper's joined body text.
struct CharSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool operator==(const CharSpan&) const = default;
};

struct Sentence {
    std::uint32_t ordinal = 0;
    CharSpan span;
    std::string text;

    bool operator==(const Sentence&) const = default;
};

/// Parses a word-list file: one entry per line, `#` starts a comment,
/// surrounding whitespace is ignored, entries are lowercased.
WordSet parse_word_list(std::string_view contents);

/// The stop-word and abbreviation lists compiled into the library.
const WordSet& default_stop_words();
const WordSet& default_abbreviations();

class TextProcessor {
public:
    TextProcessor(WordSet stop_words, WordSet abbreviations);

    /// Shared instance using the bundled lists.
    static const TextProcessor& standard();

    std::vector<std::string> tokenize(std::string_view text, Pipeline kind) const;

    /// Splits paragraphs into sentences. Spans index into
    /// `join_paragraphs(paragraphs)`; a sentence never crosses a paragraph.
    std::vector<Sentence> split_sentences(std::span<const std::string> paragraphs) const;

    bool is_stop_word(std::string_view token) const;
    const WordSet& stop_words() const { return stop_words_; }

private:
    bool is_abbreviation(std::string_view word) const;

    WordSet stop_words_;
    WordSet abbreviations_;
};

std::vector<std::string> tokenize(std::string_view text, Pipeline kind);
std::vector<Sentence> split_sentences(std::span<const std::string> paragraphs);

/// Paragraphs joined with a single '\n'; the coordinate system of sentence spans.
std::string join_paragraphs(std::span<const std::string> paragraphs);

/// Lowercases and splits into maximal runs of Unicode letters/digits.
std::vector<std::string> split_words(std::string_view text);

/// Lowercased `word` if it is a single run of letters/digits, else nullopt.
std::optional<std::string> normalize_word(std::string_view word);

}  // namespace manuscriptor
