#pragma once

#include "manuscriptor/paper.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace manuscriptor {

/// Word -> dense vector table. All vectors have `dim()` components and words
/// are stored in their embed-pipeline form (lowercase surface words).
class VectorStore {
public:
    explicit VectorStore(std::size_t dim = 400);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return slots_.size(); }

    std::optional<std::span<const float>> find(const std::string& word) const;

    /// Inserts or replaces. Returns true when an existing word was replaced.
    bool set(const std::string& word, std::span<const float> values);

    /// Vocabulary in byte order.
    std::vector<std::string> words() const;

    /// `VEC1` section bytes: u32 count, u32 dim, then words in byte order,
    /// each a length-prefixed string followed by dim little-endian f32.
    std::string serialize() const;
    static VectorStore deserialize(std::string_view bytes);

    bool operator==(const VectorStore& other) const;

private:
    std::size_t dim_;
    std::unordered_map<std::string, std::size_t> slots_;
    std::vector<float> data_;
};

struct VectorLoadReport {
    VectorStore store;
    std::size_t duplicates = 0;  ///< lines whose word was seen before (last one wins)
    std::size_t skipped = 0;     ///< words that are not a single letter/digit run
};

/// Reads the text vector format: a `<count> <dim>` header, then `count`
/// lines of `<word> <c1> ... <cdim>`. Throws FormatError with the line number.
VectorLoadReport load_vectors(std::istream& in);
VectorLoadReport load_vectors_file(const std::string& path);

/// Deterministic stand-in for a trained model.
///
/// Word w gets components drawn from a SplitMix64 stream whose state starts
/// at `splitmix64(seed) ^ fnv1a64(bytes of w)`. Each 64-bit output z becomes
/// `(z >> 40) * 2^-23 - 1`, a uniform value on [-1, 1) that is exactly
/// representable as a float, so stores agree bit-for-bit on every platform.
VectorStore synth_vectors(std::span<const std::string> vocab, std::size_t dim, std::uint64_t seed);

/// Every embed-pipeline token in the papers' full text, sorted and unique.
std::vector<std::string> corpus_vocabulary(std::span<const Paper> corpus);

struct Embedding {
    std::vector<float> vec;
    bool valid = false;  ///< false iff no input token was in the vocabulary

    bool operator==(const Embedding&) const = default;
};

/// Componentwise mean of the in-vocabulary token vectors (with multiplicity),
/// accumulated in double and rounded to float.
Embedding embed_tokens(const VectorStore& store, std::span<const std::string> tokens);
Embedding embed_text(const VectorStore& store, std::string_view text);

double dot(std::span<const float> a, std::span<const float> b);
double l2_norm(std::span<const float> v);

/// `1 - dot(u, v) / (|u| * |v|)`, clamped to [0, 2]. Both operands must be
/// valid, nonzero and of equal dimension; otherwise throws InvalidEmbedding.
double cosine_distance(const Embedding& u, const Embedding& v);

/// Same formula from precomputed norms; no validation.
inline double cosine_distance_from(double dot_uv, double norm_u, double norm_v) {
    const double d = 1.0 - dot_uv / (norm_u * norm_v);
    return d < 0.0 ? 0.0 : (d > 2.0 ? 2.0 : d);
}

enum class DocumentText { Full, WithoutAbstract };

/// Ordinal-aligned document embeddings.
std::vector<Embedding> embed_corpus(const VectorStore& store, std::span<const Paper> corpus,
                                    DocumentText text = DocumentText::Full);

struct EmbeddingTable {
    std::size_t dim = 0;
    std::vector<std::string> ids;
    std::vector<Embedding> embeddings;
};

/// `EMB1` section bytes: u32 count, u32 dim, then per record a
/// length-prefixed id, a validity byte and dim little-endian f32.
std::string serialize_embeddings(std::size_t dim, std::span<const std::string> ids,
                                 std::span<const Embedding> embeddings);
EmbeddingTable deserialize_embeddings(std::string_view bytes);

}  // namespace manuscriptor
