#pragma once

#include "manuscriptor/embedder.hpp"
#include "manuscriptor/invindex.hpp"
#include "manuscriptor/paper.hpp"
#include "manuscriptor/textproc.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace manuscriptor {

/// Immutable serving state: papers, their sentence tables, the inverted
/// index, document embeddings and the word vectors used to embed queries.
/// Element i of every per-paper table belongs to papers()[i].
class Snapshot {
public:
    /// Checks ordinal alignment; throws Error on any mismatch.
    Snapshot(std::vector<Paper> papers, std::vector<std::vector<Sentence>> sentences, InvertedIndex index,
             std::vector<Embedding> embeddings, VectorStore vectors, std::string hash = {});

    /// Derives index, sentences and embeddings from the papers.
    static Snapshot build(std::vector<Paper> papers, VectorStore vectors);

    std::size_t size() const { return papers_.size(); }
    std::size_t dim() const { return vectors_.dim(); }
    const std::vector<Paper>& papers() const { return papers_; }
    const std::vector<std::vector<Sentence>>& sentences() const { return sentences_; }
    const InvertedIndex& index() const { return index_; }
    const std::vector<Embedding>& embeddings() const { return embeddings_; }
    const VectorStore& vectors() const { return vectors_; }

    /// sha256 of the manifest this snapshot was loaded from; empty when built in memory.
    const std::string& hash() const { return hash_; }

    std::optional<DocOrdinal> find(std::string_view id) const;

private:
    std::vector<Paper> papers_;
    std::vector<std::vector<Sentence>> sentences_;
    InvertedIndex index_;
    std::vector<Embedding> embeddings_;
    VectorStore vectors_;
    std::string hash_;
    std::unordered_map<std::string, DocOrdinal> by_id_;
};

/// `filename<TAB>sha256-hex` per section file, in a fixed order.
struct Manifest {
    std::vector<std::pair<std::string, std::string>> files;
    std::string hash;  ///< sha256 of the manifest file itself

    bool operator==(const Manifest&) const = default;
};

inline constexpr const char* kManifestFile = "manifest.tsv";

/// Writes papers.jsonl, sentences.bin, index.idx, embeddings.emb, vectors.vec
/// and the manifest. Identical inputs produce byte-identical files.
Manifest write_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir);
Manifest build_snapshot(std::span<const Paper> papers, const VectorStore& vectors,
                        const std::filesystem::path& dir);

/// Verifies every hash and section before returning. Throws CorruptSnapshot
/// naming the offending file.
Snapshot load_snapshot(const std::filesystem::path& dir);

Manifest read_manifest(const std::filesystem::path& dir);

std::string sha256_hex(std::string_view bytes);

}  // namespace manuscriptor
