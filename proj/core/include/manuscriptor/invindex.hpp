#pragma once

#include "manuscriptor/boolquery.hpp"
#include "manuscriptor/paper.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace manuscriptor {

/// Position of a paper in corpus order; shared by metadata, index and embeddings.
using DocOrdinal = std::uint32_t;

/// Strictly ascending, never empty.
using PostingList = std::vector<DocOrdinal>;

/// Presence-only unigram index over title, abstract and body.
class InvertedIndex {
public:
    using Dictionary = std::map<std::string, PostingList, std::less<>>;

    InvertedIndex() = default;

    /// Throws DuplicateIdError if two papers share an id.
    static InvertedIndex build(std::span<const Paper> corpus);

    std::size_t doc_count() const { return doc_ids_.size(); }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const Dictionary& dictionary() const { return dictionary_; }

    /// Empty span for terms that never occur.
    std::span<const DocOrdinal> postings(std::string_view term) const;

    /// Ordinals matching `q`, ascending. Plain clauses are intersected
    /// smallest-first, then negated clauses are subtracted.
    std::vector<DocOrdinal> filter(const FilterQuery& q) const;

    /// `IDX1` section bytes: doc ids, then terms in byte order with
    /// gap-encoded postings, all little-endian u32.
    std::string serialize() const;

    /// Throws FormatError on truncation, bad magic or broken posting invariants.
    static InvertedIndex deserialize(std::string_view bytes);

    bool operator==(const InvertedIndex&) const = default;

private:
    std::vector<std::string> doc_ids_;
    Dictionary dictionary_;
};

/// Convenience for `index.filter(parse_filter(raw))`.
std::vector<DocOrdinal> filter_docs(const InvertedIndex& index, std::string_view raw_filter);

}  // namespace manuscriptor
