#include "manuscriptor/invindex.hpp"

#include "binary_io.hpp"
#include "manuscriptor/errors.hpp"
#include "manuscriptor/textproc.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <unordered_set>

namespace manuscriptor {
namespace {

// Sorted union of the postings of a clause's alternatives.
std::vector<DocOrdinal> clause_union(const InvertedIndex& index, const Clause& clause) {
    std::vector<DocOrdinal> out;
    for (const auto& term : clause.alternatives) {
        auto list = index.postings(term);
        if (list.empty()) continue;
        if (out.empty()) {
            out.assign(list.begin(), list.end());
            continue;
        }
        std::vector<DocOrdinal> merged;
        merged.reserve(out.size() + list.size());
        std::set_union(out.begin(), out.end(), list.begin(), list.end(), std::back_inserter(merged));
        out = std::move(merged);
    }
    return out;
}

}  // namespace

InvertedIndex InvertedIndex::build(std::span<const Paper> corpus) {
    InvertedIndex index;
    std::unordered_set<std::string_view> seen;
    index.doc_ids_.reserve(corpus.size());
    for (const auto& p : corpus) {
        if (!seen.insert(p.id).second) throw DuplicateIdError(p.id);
        index.doc_ids_.push_back(p.id);
    }

    for (std::size_t ord = 0; ord < corpus.size(); ++ord) {
        auto tokens = tokenize(full_text(corpus[ord]), Pipeline::Index);
        std::sort(tokens.begin(), tokens.end());
        tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
        for (auto& t : tokens) {
            // Documents are visited in order, so each list stays ascending.
            index.dictionary_[std::move(t)].push_back(static_cast<DocOrdinal>(ord));
        }
    }
    return index;
}

std::span<const DocOrdinal> InvertedIndex::postings(std::string_view term) const {
    auto it = dictionary_.find(term);
    if (it == dictionary_.end()) return {};
    return it->second;
}

std::vector<DocOrdinal> InvertedIndex::filter(const FilterQuery& q) const {
    std::vector<std::vector<DocOrdinal>> required;
    std::vector<std::vector<DocOrdinal>> excluded;
    for (const auto& clause : q.clauses) {
        auto u = clause_union(*this, clause);
        if (clause.negated) {
            if (!u.empty()) excluded.push_back(std::move(u));
        } else {
            if (u.empty()) return {};
            required.push_back(std::move(u));
        }
    }

    std::vector<DocOrdinal> result;
    if (required.empty()) {
        result.resize(doc_count());
        std::iota(result.begin(), result.end(), DocOrdinal{0});
    } else {
        std::sort(required.begin(), required.end(),
                  [](const auto& a, const auto& b) { return a.size() < b.size(); });
        result = std::move(required.front());
        for (std::size_t i = 1; i < required.size() && !result.empty(); ++i) {
            std::vector<DocOrdinal> next;
            std::set_intersection(result.begin(), result.end(), required[i].begin(), required[i].end(),
                                  std::back_inserter(next));
            result = std::move(next);
        }
    }
    for (const auto& ex : excluded) {
        if (result.empty()) break;
        std::vector<DocOrdinal> next;
        std::set_difference(result.begin(), result.end(), ex.begin(), ex.end(), std::back_inserter(next));
        result = std::move(next);
    }
    return result;
}

std::string InvertedIndex::serialize() const {
    detail::ByteWriter w;
    w.magic("IDX1");
    w.u32(static_cast<std::uint32_t>(doc_ids_.size()));
    for (const auto& id : doc_ids_) w.str(id);
    w.u32(static_cast<std::uint32_t>(dictionary_.size()));
    for (const auto& [term, list] : dictionary_) {
        w.str(term);
        w.u32(static_cast<std::uint32_t>(list.size()));
        DocOrdinal prev = 0;
        for (DocOrdinal ord : list) {
            w.u32(ord - prev);
            prev = ord;
        }
    }
    return w.take();
}

InvertedIndex InvertedIndex::deserialize(std::string_view bytes) {
    detail::ByteReader r(bytes);
    r.expect_magic("IDX1");
    InvertedIndex index;
    const std::uint32_t doc_count = r.u32();
    index.doc_ids_.reserve(std::min<std::size_t>(doc_count, bytes.size() / 4));
    for (std::uint32_t i = 0; i < doc_count; ++i) index.doc_ids_.push_back(r.str());

    const std::uint32_t term_count = r.u32();
    std::string previous_term;
    for (std::uint32_t t = 0; t < term_count; ++t) {
        std::string term = r.str();
        if (t > 0 && term <= previous_term) throw FormatError("terms out of order at '" + term + "'");
        const std::uint32_t n = r.u32();
        if (n == 0) throw FormatError("empty posting list for '" + term + "'");
        PostingList list;
        list.reserve(std::min<std::size_t>(n, bytes.size() / 4));
        std::uint64_t ord = 0;
        for (std::uint32_t k = 0; k < n; ++k) {
            const std::uint32_t gap = r.u32();
            if (k > 0 && gap == 0) throw FormatError("non-ascending postings for '" + term + "'");
            ord += gap;
            if (ord >= doc_count) throw FormatError("posting out of range for '" + term + "'");
            list.push_back(static_cast<DocOrdinal>(ord));
        }
        previous_term = term;
        index.dictionary_.emplace_hint(index.dictionary_.end(), std::move(term), std::move(list));
    }
    r.expect_end();
    return index;
}

std::vector<DocOrdinal> filter_docs(const InvertedIndex& index, std::string_view raw_filter) {
    return index.filter(parse_filter(raw_filter));
}

}  // namespace manuscriptor
