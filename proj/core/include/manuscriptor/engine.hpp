#pragma once

#include "manuscriptor/embedder.hpp"
#include "manuscriptor/snapshot.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace manuscriptor {

/// Hard cap on ranked results per search.
inline constexpr std::size_t kMaxResults = 1000;
/// Sentences returned by `highlight` unless asked otherwise.
inline constexpr std::size_t kDefaultHighlightCount = 20;

/// What a search is ranked against: free text (a manuscript or a selection)
/// or an existing paper.
class RankingSource {
public:
    enum class Kind { Text, Paper };

    static RankingSource text(std::string text) { return {Kind::Text, std::move(text)}; }
    static RankingSource paper(std::string id) { return {Kind::Paper, std::move(id)}; }

    Kind kind() const { return kind_; }
    /// The text itself, or the paper id.
    const std::string& value() const { return value_; }

    bool operator==(const RankingSource&) const = default;

private:
    RankingSource(Kind kind, std::string value) : kind_(kind), value_(std::move(value)) {}

    Kind kind_;
    std::string value_;
};

struct SearchHit {
    DocOrdinal ordinal = 0;
    std::string paper_id;
    double distance = 0.0;
    std::string title;
    std::vector<std::string> authors;
    std::string journal;
    int year = 0;
    std::string abstract;

    bool operator==(const SearchHit&) const = default;
};

/// Hits ordered by (distance, paper id).
struct SearchResult {
    std::vector<SearchHit> hits;
    std::size_t candidates = 0;  ///< rankable documents that passed the filter

    bool operator==(const SearchResult&) const = default;
};

struct SearchOptions {
    std::size_t limit = kMaxResults;
    /// Skips this many top hits; offset + limit is clipped to kMaxResults.
    std::size_t offset = 0;
    /// Drop the source paper from its own results.
    bool exclude_source_paper = true;
};

struct HighlightedSentence {
    std::uint32_t ordinal = 0;
    CharSpan span;
    double distance = 0.0;

    bool operator==(const HighlightedSentence&) const = default;
};

struct HighlightResult {
    std::vector<HighlightedSentence> sentences;  ///< by (distance, ordinal)

    bool operator==(const HighlightResult&) const = default;
};

struct ResolvedSource {
    Embedding embedding;
    std::optional<DocOrdinal> paper;  ///< set for paper sources
};

/// Filter-then-rank search over an immutable snapshot. All members are const
/// and safe to call from any number of threads.
class Engine {
public:
    explicit Engine(std::shared_ptr<const Snapshot> snapshot);

    /// Ranks against `document_embeddings` instead of the snapshot's own
    /// (e.g. abstract-free embeddings for the parent-retrieval evaluation).
    Engine(std::shared_ptr<const Snapshot> snapshot, std::vector<Embedding> document_embeddings);

    const Snapshot& snapshot() const { return *snapshot_; }
    const std::vector<Embedding>& document_embeddings() const { return *documents_; }

    /// Throws InvalidSource for an unknown paper id or text/paper without a
    /// usable (valid, nonzero) embedding.
    ResolvedSource resolve(const RankingSource& source) const;

    /// Parses `filter` (SyntaxError on bad input), keeps matching documents
    /// with usable embeddings, ranks them by cosine distance to the source.
    SearchResult search(std::string_view filter, const RankingSource& source, const SearchOptions& options = {}) const;

    /// Ranking core: orders `candidates` (minus `exclude`) by distance to
    /// `query` and returns ranks [offset, offset + limit) with no result cap.
    SearchResult rank(std::span<const DocOrdinal> candidates, const Embedding& query,
                      std::optional<DocOrdinal> exclude, std::size_t limit, std::size_t offset = 0) const;

    /// The k sentences of `paper_id` closest to the source. Sentences without
    /// in-vocabulary words are skipped. Throws UnknownPaper or InvalidSource.
    HighlightResult highlight(std::string_view paper_id, const RankingSource& source,
                              std::size_t k = kDefaultHighlightCount) const;

    /// True iff the filtered ranking equals the unfiltered ranking restricted
    /// to the filtered set, in the same relative order.
    bool subset_consistency_check(std::string_view filter, const RankingSource& source) const;

private:
    SearchHit make_hit(DocOrdinal ord, double distance) const;

    std::shared_ptr<const Snapshot> snapshot_;
    std::shared_ptr<const std::vector<Embedding>> documents_;
    std::vector<double> norms_;  ///< 0 for documents that cannot be ranked
};

}  // namespace manuscriptor
