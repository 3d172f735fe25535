#pragma once

// Deliberately naive reference implementations used to check the engine.
// They share no code with the library beyond the Paper struct.

#include "manuscriptor/paper.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

using WordVectors = std::map<std::string, std::vector<float>>;

/// Lowercased maximal runs of ASCII letters and digits.
std::vector<std::string> ascii_words(std::string_view text);

/// title, abstract and body paragraphs separated by spaces.
std::string paper_text(const manuscriptor::Paper& p, bool with_abstract = true);

/// Mean of the in-vocabulary word vectors, accumulated in double and stored
/// as float; nullopt when no word is in the vocabulary.
std::optional<std::vector<float>> mean_vector(const WordVectors& vectors, std::string_view text);

double cosine_distance(const std::vector<float>& a, const std::vector<float>& b);

struct Ranked {
    std::string id;
    double distance;
    bool operator==(const Ranked&) const = default;
};

/// Distances of every allowed paper with a usable embedding, sorted by
/// (distance, id) with a full sort.
std::vector<Ranked> full_sort(const std::vector<manuscriptor::Paper>& papers,
                              const std::vector<std::optional<std::vector<float>>>& doc_vectors,
                              const std::vector<bool>& allowed, const std::vector<float>& query,
                              const std::string& exclude_id);

struct Clause {
    bool negated = false;
    std::vector<std::string> terms;
};

/// Renders clauses as `a b|c !d`.
std::string render(const std::vector<Clause>& clauses);

/// Linear scan: doc matches iff every plain clause has a present term and no
/// negated clause does.
std::vector<std::uint32_t> scan(const std::vector<std::set<std::string>>& doc_terms,
                                const std::vector<Clause>& clauses);

/// Random corpus over the vocabulary `w0 .. w{vocab-1}`; these words are
/// unchanged by stemming and are not stop words, so index terms equal the
/// words. Word frequencies are skewed so posting lengths vary.
std::vector<manuscriptor::Paper> random_corpus(std::mt19937_64& rng, std::size_t docs, std::size_t vocab);

std::string random_word(std::mt19937_64& rng, std::size_t vocab);

/// 1-4 clauses of 1-3 terms, about a third negated; occasionally a term that
/// is in no document.
std::vector<Clause> random_clauses(std::mt19937_64& rng, std::size_t vocab);

/// Terms of each paper, by splitting its text on non-alphanumerics.
std::vector<std::set<std::string>> doc_terms(const std::vector<manuscriptor::Paper>& papers);

/// Independent random vectors for `w0 .. w{vocab-1}`, components in [-1, 1].
WordVectors random_vectors(std::mt19937_64& rng, std::size_t vocab, std::size_t dim);

}  // namespace oracle
