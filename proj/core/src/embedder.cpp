#include "manuscriptor/embedder.hpp"

#include "binary_io.hpp"
#include "manuscriptor/errors.hpp"
#include "manuscriptor/textproc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <set>

namespace manuscriptor {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

VectorStore::VectorStore(std::size_t dim) : dim_(dim) {}

std::optional<std::span<const float>> VectorStore::find(const std::string& word) const {
    auto it = slots_.find(word);
    if (it == slots_.end()) return std::nullopt;
    return std::span<const float>(data_.data() + it->second * dim_, dim_);
}

bool VectorStore::set(const std::string& word, std::span<const float> values) {
    if (values.size() != dim_) throw InvalidEmbedding("vector has wrong dimension for '" + word + "'");
    auto [it, inserted] = slots_.try_emplace(word, slots_.size());
    if (inserted) data_.resize(data_.size() + dim_);
    std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
    return !inserted;
}

std::vector<std::string> VectorStore::words() const {
    std::vector<std::string> out;
    out.reserve(slots_.size());
    for (const auto& [w, _] : slots_) out.push_back(w);
    std::sort(out.begin(), out.end());
    return out;
}

bool VectorStore::operator==(const VectorStore& other) const {
    if (dim_ != other.dim_ || size() != other.size()) return false;
    for (const auto& [w, slot] : slots_) {
        auto theirs = other.find(w);
        if (!theirs) return false;
        if (!std::equal(theirs->begin(), theirs->end(), data_.begin() + static_cast<std::ptrdiff_t>(slot * dim_))) {
            return false;
        }
    }
    return true;
}

std::string VectorStore::serialize() const {
    detail::ByteWriter w;
    w.magic("VEC1");
    w.u32(static_cast<std::uint32_t>(size()));
    w.u32(static_cast<std::uint32_t>(dim_));
    for (const auto& word : words()) {
        w.str(word);
        const auto values = *find(word);
        for (float x : values) w.f32(x);
    }
    return w.take();
}

VectorStore VectorStore::deserialize(std::string_view bytes) {
    detail::ByteReader r(bytes);
    r.expect_magic("VEC1");
    const std::uint32_t count = r.u32();
    const std::uint32_t dim = r.u32();
    if (dim == 0) throw FormatError("zero vector dimension");
    VectorStore store(dim);
    std::vector<float> buf(dim);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::string word = r.str();
        for (auto& x : buf) x = r.f32();
        if (store.set(word, buf)) throw FormatError("duplicate word '" + word + "'");
    }
    r.expect_end();
    return store;
}

VectorLoadReport load_vectors(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t count = 0;
    std::size_t dim = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!split_fields(line).empty()) break;
    }
    {
        auto header = split_fields(line);
        if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) || dim == 0) {
            throw FormatError("expected header '<count> <dim>'", line_no ? line_no : 1);
        }
    }

    VectorLoadReport report{VectorStore(dim)};
    std::vector<float> values(dim);
    std::size_t records = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (records == count) throw FormatError("more vectors than the header's count", line_no);
        if (fields.size() != dim + 1) {
            throw FormatError("expected " + std::to_string(dim) + " components, found " +
                                  std::to_string(fields.size() - 1),
                              line_no);
        }
        for (std::size_t k = 0; k < dim; ++k) {
            double v = 0.0;
            if (!parse_number(fields[k + 1], v)) {
                throw FormatError("component " + std::to_string(k + 1) + " is not a number", line_no);
            }
            const auto f = static_cast<float>(v);
            if (!std::isfinite(v) || !std::isfinite(f)) {
                throw FormatError("component " + std::to_string(k + 1) + " is not finite", line_no);
            }
            values[k] = f;
        }
        ++records;
        auto word = normalize_word(fields[0]);
        if (!word) {
            ++report.skipped;
            continue;
        }
        if (report.store.set(*word, values)) ++report.duplicates;
    }
    if (records != count) {
        throw FormatError("header announces " + std::to_string(count) + " vectors, file has " +
                              std::to_string(records),
                          line_no);
    }
    return report;
}

VectorLoadReport load_vectors_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open vector file " + path);
    return load_vectors(in);
}

VectorStore synth_vectors(std::span<const std::string> vocab, std::size_t dim, std::uint64_t seed) {
    VectorStore store(dim);
    std::vector<float> values(dim);
    const std::uint64_t seed_key = splitmix64(seed);
    for (const auto& word : vocab) {
        std::uint64_t state = seed_key ^ fnv1a64(word);
        for (auto& v : values) {
            state += 0x9E3779B97F4A7C15ULL;
            const std::uint64_t z = splitmix64(state);
            v = static_cast<float>(static_cast<double>(z >> 40) * 0x1p-23 - 1.0);
        }
        store.set(word, values);
    }
    return store;
}

std::vector<std::string> corpus_vocabulary(std::span<const Paper> corpus) {
    std::set<std::string> vocab;
    for (const auto& p : corpus) {
        for (auto& t : tokenize(full_text(p), Pipeline::Embed)) vocab.insert(std::move(t));
    }
    return {vocab.begin(), vocab.end()};
}

Embedding embed_tokens(const VectorStore& store, std::span<const std::string> tokens) {
    std::vector<double> sum(store.dim(), 0.0);
    std::size_t hits = 0;
    for (const auto& t : tokens) {
        auto v = store.find(t);
        if (!v) continue;
        ++hits;
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*v)[k];
    }
    Embedding e;
    e.vec.assign(store.dim(), 0.0f);
    e.valid = hits > 0;
    if (hits) {
        const auto n = static_cast<double>(hits);
        for (std::size_t k = 0; k < sum.size(); ++k) e.vec[k] = static_cast<float>(sum[k] / n);
    }
    return e;
}

Embedding embed_text(const VectorStore& store, std::string_view text) {
    return embed_tokens(store, tokenize(text, Pipeline::Embed));
}

double dot(std::span<const float> a, std::span<const float> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<double>(a[k]) * static_cast<double>(b[k]);
    return s;
}

double l2_norm(std::span<const float> v) { return std::sqrt(dot(v, v)); }

double cosine_distance(const Embedding& u, const Embedding& v) {
    if (!u.valid || !v.valid) throw InvalidEmbedding("cosine distance of an invalid embedding");
    if (u.vec.size() != v.vec.size()) throw InvalidEmbedding("embedding dimensions differ");
    const double nu = l2_norm(u.vec);
    const double nv = l2_norm(v.vec);
    if (nu == 0.0 || nv == 0.0) throw InvalidEmbedding("cosine distance of a zero vector");
    return cosine_distance_from(dot(u.vec, v.vec), nu, nv);
}

std::vector<Embedding> embed_corpus(const VectorStore& store, std::span<const Paper> corpus, DocumentText text) {
    std::vector<Embedding> out;
    out.reserve(corpus.size());
    for (const auto& p : corpus) {
        out.push_back(embed_text(store, text == DocumentText::Full ? full_text(p) : text_without_abstract(p)));
    }
    return out;
}

std::string serialize_embeddings(std::size_t dim, std::span<const std::string> ids,
                                 std::span<const Embedding> embeddings) {
    if (ids.size() != embeddings.size()) throw Error("embedding table: ids and vectors differ in length");
    detail::ByteWriter w;
    w.magic("EMB1");
    w.u32(static_cast<std::uint32_t>(ids.size()));
    w.u32(static_cast<std::uint32_t>(dim));
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (embeddings[i].vec.size() != dim) throw InvalidEmbedding("embedding of '" + ids[i] + "' has wrong dimension");
        w.str(ids[i]);
        w.u8(embeddings[i].valid ? 1 : 0);
        for (float x : embeddings[i].vec) w.f32(x);
    }
    return w.take();
}

EmbeddingTable deserialize_embeddings(std::string_view bytes) {
    detail::ByteReader r(bytes);
    r.expect_magic("EMB1");
    EmbeddingTable table;
    const std::uint32_t count = r.u32();
    table.dim = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        table.ids.push_back(r.str());
        Embedding e;
        const std::uint8_t flag = r.u8();
        if (flag > 1) throw FormatError("validity byte must be 0 or 1");
        e.valid = flag == 1;
        e.vec.resize(table.dim);
        for (auto& x : e.vec) x = r.f32();
        table.embeddings.push_back(std::move(e));
    }
    r.expect_end();
    return table;
}

}  // namespace manuscriptor
