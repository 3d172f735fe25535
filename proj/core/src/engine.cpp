#include "manuscriptor/engine.hpp"

#include "manuscriptor/boolquery.hpp"
#include "manuscriptor/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace manuscriptor {

Engine::Engine(std::shared_ptr<const Snapshot> snapshot)
    : snapshot_(std::move(snapshot)),
      documents_(std::shared_ptr<const std::vector<Embedding>>(snapshot_, &snapshot_->embeddings())) {
    norms_.reserve(documents_->size());
    for (const auto& e : *documents_) norms_.push_back(e.valid ? l2_norm(e.vec) : 0.0);
}

Engine::Engine(std::shared_ptr<const Snapshot> snapshot, std::vector<Embedding> document_embeddings)
    : snapshot_(std::move(snapshot)),
      documents_(std::make_shared<const std::vector<Embedding>>(std::move(document_embeddings))) {
    if (documents_->size() != snapshot_->size()) {
        throw std::invalid_argument("document embeddings must align with the snapshot");
    }
    norms_.reserve(documents_->size());
    for (const auto& e : *documents_) {
        if (e.vec.size() != snapshot_->dim()) throw std::invalid_argument("document embedding has wrong dimension");
        norms_.push_back(e.valid ? l2_norm(e.vec) : 0.0);
    }
}

ResolvedSource Engine::resolve(const RankingSource& source) const {
    ResolvedSource out;
    if (source.kind() == RankingSource::Kind::Paper) {
        auto ord = snapshot_->find(source.value());
        if (!ord) throw InvalidSource("unknown paper '" + source.value() + "'");
        out.paper = *ord;
        out.embedding = (*documents_)[*ord];
        if (!out.embedding.valid || norms_[*ord] == 0.0) {
            throw InvalidSource("paper '" + source.value() + "' has no usable embedding");
        }
        return out;
    }
    out.embedding = embed_text(snapshot_->vectors(), source.value());
    if (!out.embedding.valid || l2_norm(out.embedding.vec) == 0.0) {
        throw InvalidSource("ranking text contains no in-vocabulary words");
    }
    return out;
}

SearchHit Engine::make_hit(DocOrdinal ord, double distance) const {
    const Paper& p = snapshot_->papers()[ord];
    return SearchHit{ord, p.id, distance, p.title, p.authors, p.journal, p.year, p.abstract};
}

SearchResult Engine::rank(std::span<const DocOrdinal> candidates, const Embedding& query,
                          std::optional<DocOrdinal> exclude, std::size_t limit, std::size_t offset) const {
    if (query.vec.size() != snapshot_->dim()) throw InvalidEmbedding("query embedding has wrong dimension");
    const double query_norm = l2_norm(query.vec);
    if (!query.valid || query_norm == 0.0) throw InvalidEmbedding("query embedding is not usable");

    const auto& papers = snapshot_->papers();
    struct Scored {
        double distance;
        DocOrdinal ord;
    };
    auto before = [&papers](const Scored& a, const Scored& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return papers[a.ord].id < papers[b.ord].id;
    };

    SearchResult result;
    const std::size_t keep = limit > std::numeric_limits<std::size_t>::max() - offset ? limit : offset + limit;
    // Max-heap on (distance, id): the top is the worst hit kept so far.
    std::priority_queue<Scored, std::vector<Scored>, decltype(before)> heap(before);
    for (DocOrdinal ord : candidates) {
        if (exclude && ord == *exclude) continue;
        const double norm = norms_[ord];
        if (norm == 0.0) continue;
        ++result.candidates;
        const Scored s{cosine_distance_from(dot(query.vec, (*documents_)[ord].vec), query_norm, norm), ord};
        if (heap.size() < keep) {
            heap.push(s);
        } else if (keep > 0 && before(s, heap.top())) {
            heap.pop();
            heap.push(s);
        }
    }

    std::vector<Scored> ranked;
    ranked.reserve(heap.size());
    while (!heap.empty()) {
        ranked.push_back(heap.top());
        heap.pop();
    }
    std::reverse(ranked.begin(), ranked.end());
    for (std::size_t i = offset; i < ranked.size(); ++i) result.hits.push_back(make_hit(ranked[i].ord, ranked[i].distance));
    return result;
}

SearchResult Engine::search(std::string_view filter, const RankingSource& source, const SearchOptions& options) const {
    if (options.limit == 0) throw std::invalid_argument("limit must be at least 1");
    const FilterQuery query = parse_filter(filter);
    const ResolvedSource resolved = resolve(source);
    const std::vector<DocOrdinal> candidates = snapshot_->index().filter(query);

    const std::size_t offset = std::min(options.offset, kMaxResults);
    const std::size_t limit = std::min(options.limit, kMaxResults - offset);
    return rank(candidates, resolved.embedding, options.exclude_source_paper ? resolved.paper : std::nullopt, limit,
                offset);
}

HighlightResult Engine::highlight(std::string_view paper_id, const RankingSource& source, std::size_t k) const {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    auto ord = snapshot_->find(paper_id);
    if (!ord) throw UnknownPaper(std::string(paper_id));
    const ResolvedSource resolved = resolve(source);
    const double source_norm = l2_norm(resolved.embedding.vec);

    HighlightResult result;
    for (const Sentence& s : snapshot_->sentences()[*ord]) {
        const Embedding e = embed_text(snapshot_->vectors(), s.text);
        if (!e.valid) continue;
        const double norm = l2_norm(e.vec);
        if (norm == 0.0) continue;
        result.sentences.push_back(
            {s.ordinal, s.span, cosine_distance_from(dot(resolved.embedding.vec, e.vec), source_norm, norm)});
    }
    auto by_distance = [](const HighlightedSentence& a, const HighlightedSentence& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.ordinal < b.ordinal;
    };
    const std::size_t n = std::min(k, result.sentences.size());
    std::partial_sort(result.sentences.begin(), result.sentences.begin() + static_cast<std::ptrdiff_t>(n),
                      result.sentences.end(), by_distance);
    result.sentences.resize(n);
    return result;
}

bool Engine::subset_consistency_check(std::string_view filter, const RankingSource& source) const {
    const ResolvedSource resolved = resolve(source);
    const std::vector<DocOrdinal> filtered = snapshot_->index().filter(parse_filter(filter));
    std::vector<DocOrdinal> all(snapshot_->size());
    std::iota(all.begin(), all.end(), DocOrdinal{0});

    const std::size_t everything = snapshot_->size();
    const SearchResult narrow = rank(filtered, resolved.embedding, resolved.paper, everything);
    const SearchResult wide = rank(all, resolved.embedding, resolved.paper, everything);

    std::vector<SearchHit> restricted;
    for (const auto& hit : wide.hits) {
        if (std::binary_search(filtered.begin(), filtered.end(), hit.ordinal)) restricted.push_back(hit);
    }
    return restricted == narrow.hits;
}

}  // namespace manuscriptor
