#include "manuscriptor/snapshot.hpp"

#include "binary_io.hpp"
#include "manuscriptor/corpus.hpp"
#include "manuscriptor/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <set>
#include <sstream>

namespace manuscriptor {
namespace {

namespace fs = std::filesystem;

constexpr const char* kPapersFile = "papers.jsonl";
constexpr const char* kSentencesFile = "sentences.bin";
constexpr const char* kIndexFile = "index.idx";
constexpr const char* kEmbeddingsFile = "embeddings.emb";
constexpr const char* kVectorsFile = "vectors.vec";

const std::array<const char*, 5> kSectionFiles{kPapersFile, kSentencesFile, kIndexFile, kEmbeddingsFile,
                                               kVectorsFile};

std::string read_file(const fs::path& path, const std::string& name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptSnapshot(name, "missing or unreadable");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + path.filename().string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("cannot write " + path.filename().string());
    }
    fs::rename(tmp, path);
}

// SEN1: u32 doc count, then per doc a u32 sentence count and (begin, end) u32 pairs.
std::string serialize_sentences(const std::vector<std::vector<Sentence>>& tables) {
    detail::ByteWriter w;
    w.magic("SEN1");
    w.u32(static_cast<std::uint32_t>(tables.size()));
    for (const auto& table : tables) {
        w.u32(static_cast<std::uint32_t>(table.size()));
        for (const auto& s : table) {
            w.u32(static_cast<std::uint32_t>(s.span.begin));
            w.u32(static_cast<std::uint32_t>(s.span.end));
        }
    }
    return w.take();
}

std::vector<std::vector<Sentence>> deserialize_sentences(std::string_view bytes, const std::vector<Paper>& papers) {
    detail::ByteReader r(bytes);
    r.expect_magic("SEN1");
    const std::uint32_t docs = r.u32();
    if (docs != papers.size()) throw FormatError("sentence table count differs from paper count");
    std::vector<std::vector<Sentence>> tables(docs);
    for (std::uint32_t d = 0; d < docs; ++d) {
        const std::string body = join_paragraphs(papers[d].body);
        const std::uint32_t n = r.u32();
        std::size_t previous_end = 0;
        for (std::uint32_t k = 0; k < n; ++k) {
            Sentence s;
            s.ordinal = k;
            s.span.begin = r.u32();
            s.span.end = r.u32();
            if (s.span.begin < previous_end || s.span.end <= s.span.begin || s.span.end > body.size()) {
                throw FormatError("bad sentence span in paper '" + papers[d].id + "'");
            }
            previous_end = s.span.end;
            s.text = body.substr(s.span.begin, s.span.size());
            tables[d].push_back(std::move(s));
        }
    }
    r.expect_end();
    return tables;
}

std::string render_manifest(const std::vector<std::pair<std::string, std::string>>& files) {
    std::string out;
    for (const auto& [name, hash] : files) {
        out += name;
        out += '\t';
        out += hash;
        out += '\n';
    }
    return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0xF]);
    }
    return hex;
}

Snapshot::Snapshot(std::vector<Paper> papers, std::vector<std::vector<Sentence>> sentences, InvertedIndex index,
                   std::vector<Embedding> embeddings, VectorStore vectors, std::string hash)
    : papers_(std::move(papers)),
      sentences_(std::move(sentences)),
      index_(std::move(index)),
      embeddings_(std::move(embeddings)),
      vectors_(std::move(vectors)),
      hash_(std::move(hash)) {
    if (sentences_.size() != papers_.size() || embeddings_.size() != papers_.size() ||
        index_.doc_count() != papers_.size()) {
        throw Error("snapshot tables are not ordinal-aligned");
    }
    by_id_.reserve(papers_.size());
    for (std::size_t i = 0; i < papers_.size(); ++i) {
        if (index_.doc_ids()[i] != papers_[i].id) {
            throw Error("index ordinal " + std::to_string(i) + " does not match paper '" + papers_[i].id + "'");
        }
        if (embeddings_[i].vec.size() != vectors_.dim()) {
            throw Error("embedding of '" + papers_[i].id + "' has the wrong dimension");
        }
        if (!by_id_.emplace(papers_[i].id, static_cast<DocOrdinal>(i)).second) throw DuplicateIdError(papers_[i].id);
    }
}

Snapshot Snapshot::build(std::vector<Paper> papers, VectorStore vectors) {
    InvertedIndex index = InvertedIndex::build(papers);
    std::vector<std::vector<Sentence>> sentences;
    sentences.reserve(papers.size());
    for (const auto& p : papers) sentences.push_back(split_sentences(p.body));
    std::vector<Embedding> embeddings = embed_corpus(vectors, papers);
    return Snapshot(std::move(papers), std::move(sentences), std::move(index), std::move(embeddings),
                    std::move(vectors));
}

std::optional<DocOrdinal> Snapshot::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

Manifest write_snapshot(const Snapshot& snapshot, const fs::path& dir) {
    fs::create_directories(dir);

    std::string papers;
    for (const auto& p : snapshot.papers()) {
        papers += to_json_line(p);
        papers += '\n';
    }
    const std::vector<std::pair<const char*, std::string>> sections{
        {kPapersFile, std::move(papers)},
        {kSentencesFile, serialize_sentences(snapshot.sentences())},
        {kIndexFile, snapshot.index().serialize()},
        {kEmbeddingsFile, serialize_embeddings(snapshot.dim(), snapshot.index().doc_ids(), snapshot.embeddings())},
        {kVectorsFile, snapshot.vectors().serialize()},
    };

    Manifest manifest;
    for (const auto& [name, bytes] : sections) {
        write_file(dir / name, bytes);
        manifest.files.emplace_back(name, sha256_hex(bytes));
    }
    const std::string text = render_manifest(manifest.files);
    write_file(dir / kManifestFile, text);
    manifest.hash = sha256_hex(text);
    return manifest;
}

Manifest build_snapshot(std::span<const Paper> papers, const VectorStore& vectors, const fs::path& dir) {
    return write_snapshot(Snapshot::build({papers.begin(), papers.end()}, vectors), dir);
}

Manifest read_manifest(const fs::path& dir) {
    const std::string text = read_file(dir / kManifestFile, kManifestFile);
    Manifest manifest;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || line.size() - tab - 1 != 64) {
            throw CorruptSnapshot(kManifestFile, "malformed line");
        }
        manifest.files.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    manifest.hash = sha256_hex(text);
    return manifest;
}

Snapshot load_snapshot(const fs::path& dir) {
    const Manifest manifest = read_manifest(dir);

    std::set<std::string> listed;
    for (const auto& [name, _] : manifest.files) {
        if (!listed.insert(name).second) throw CorruptSnapshot(kManifestFile, "file listed twice: " + name);
    }
    for (const char* required : kSectionFiles) {
        if (!listed.count(required)) throw CorruptSnapshot(kManifestFile, std::string("does not list ") + required);
    }

    std::unordered_map<std::string, std::string> contents;
    for (const auto& [name, hash] : manifest.files) {
        if (name.find('/') != std::string::npos || name.find('\\') != std::string::npos || name == "..") {
            throw CorruptSnapshot(kManifestFile, "file name outside the snapshot: " + name);
        }
        std::string bytes = read_file(dir / name, name);
        if (sha256_hex(bytes) != hash) throw CorruptSnapshot(name, "content hash mismatch");
        contents.emplace(name, std::move(bytes));
    }

    auto section = [&](const char* name, auto&& parse) {
        try {
            return parse(contents.at(name));
        } catch (const CorruptSnapshot&) {
            throw;
        } catch (const Error& e) {
            throw CorruptSnapshot(name, e.what());
        }
    };

    std::vector<Paper> papers = section(kPapersFile, [](const std::string& bytes) {
        std::istringstream in(bytes);
        return ingest(in);
    });
    auto sentences = section(kSentencesFile, [&](const std::string& bytes) {
        return deserialize_sentences(bytes, papers);
    });
    InvertedIndex index = section(kIndexFile, [](const std::string& bytes) { return InvertedIndex::deserialize(bytes); });
    EmbeddingTable table = section(kEmbeddingsFile, [](const std::string& bytes) { return deserialize_embeddings(bytes); });
    VectorStore vectors = section(kVectorsFile, [](const std::string& bytes) { return VectorStore::deserialize(bytes); });

    if (index.doc_ids().size() != papers.size()) throw CorruptSnapshot(kIndexFile, "document count differs from papers");
    if (table.ids != index.doc_ids()) throw CorruptSnapshot(kEmbeddingsFile, "ids are not aligned with the index");
    if (table.dim != vectors.dim()) throw CorruptSnapshot(kEmbeddingsFile, "dimension differs from the word vectors");

    try {
        return Snapshot(std::move(papers), std::move(sentences), std::move(index), std::move(table.embeddings),
                        std::move(vectors), manifest.hash);
    } catch (const Error& e) {
        throw CorruptSnapshot(kIndexFile, e.what());
    }
}

}  // namespace manuscriptor
