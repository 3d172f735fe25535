#include "manuscriptor/corpus.hpp"
#include "manuscriptor/engine.hpp"
#include "manuscriptor/errors.hpp"
#include "manuscriptor/snapshot.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace manuscriptor;
using testing_support::TempDir;

namespace {

std::vector<Paper> parse(const std::string& text) {
    std::istringstream in(text);
    return ingest(in);
}

std::size_t parse_error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << bytes;
}

std::string corrupt_file(const std::filesystem::path& dir) {
    try {
        load_snapshot(dir);
    } catch (const CorruptSnapshot& e) {
        return e.file();
    }
    return "<loaded>";
}

VectorStore vectors_for(const std::vector<Paper>& papers, std::uint64_t seed = 1) {
    return synth_vectors(corpus_vocabulary(papers), 16, seed);
}

}  // namespace

TEST_SUITE("corpus") {
    TEST_CASE("ingest: empty input and blank lines") {
        CHECK(parse("").empty());
        CHECK(parse("\n  \n").empty());
    }

    TEST_CASE("ingest: one record maps fields verbatim") {
        const auto papers = parse(
            R"({"id":"p1","title":"T","authors":["A B","C D"],"journal":"J","year":2001,)"
            R"("abstract":"Abs.","body":["One.","Two."],"doi":"10.1/x","extra":1})"
            "\n");
        REQUIRE(papers.size() == 1);
        const Paper& p = papers[0];
        CHECK(p.id == "p1");
        CHECK(p.title == "T");
        CHECK(p.authors == std::vector<std::string>{"A B", "C D"});
        CHECK(p.journal == "J");
        CHECK(p.year == 2001);
        CHECK(p.abstract == "Abs.");
        CHECK(p.body == std::vector<std::string>{"One.", "Two."});
        CHECK(p.doi == std::optional<std::string>("10.1/x"));
    }

    TEST_CASE("ingest: optional fields default") {
        const auto papers = parse(R"({"id":"only"})");
        REQUIRE(papers.size() == 1);
        CHECK(papers[0].year == 0);
        CHECK(papers[0].body.empty());
        CHECK_FALSE(papers[0].doi);
    }

    TEST_CASE("ingest: validation errors carry line numbers") {
        CHECK(parse_error_line("{\"id\":\"a\"}\n{\"title\":\"no id\"}\n") == 2);
        CHECK(parse_error_line("{\"id\":\"\"}") == 1);
        CHECK(parse_error_line("{\"id\":7}") == 1);
        CHECK(parse_error_line("\n\n{not json") == 3);
        CHECK(parse_error_line("[1,2]") == 1);
        CHECK(parse_error_line("{\"id\":\"a\",\"year\":1200}") == 1);
        CHECK(parse_error_line("{\"id\":\"a\",\"year\":\"2001\"}") == 1);
        CHECK(parse_error_line("{\"id\":\"a\",\"authors\":\"X\"}") == 1);
        CHECK(parse_error_line("{\"id\":\"a\",\"body\":[1]}") == 1);
        CHECK_THROWS_AS(parse("{\"id\":\"a\"}\n{\"id\":\"a\"}"), DuplicateIdError);
    }

    TEST_CASE("to_json_line round-trips") {
        std::mt19937_64 rng(41);
        auto papers = oracle::random_corpus(rng, 20, 50);
        papers[3].doi = "10.9/zz";
        papers[4].authors = {"Ünïcode Name"};
        papers[5].year = 1999;
        std::string text;
        for (const auto& p : papers) text += to_json_line(p) + "\n";
        CHECK(parse(text) == papers);
    }

    TEST_CASE("snapshot: empty corpus") {
        TempDir dir;
        const auto manifest = build_snapshot(std::vector<Paper>{}, VectorStore(8), dir.path());
        const Snapshot s = load_snapshot(dir.path());
        CHECK(s.size() == 0);
        CHECK(s.dim() == 8);
        CHECK(s.hash() == manifest.hash);
    }

    TEST_CASE("snapshot: manifest lists every section with its sha256") {
        std::mt19937_64 rng(43);
        const auto papers = oracle::random_corpus(rng, 25, 80);
        TempDir dir;
        const auto manifest = build_snapshot(papers, vectors_for(papers), dir.path());
        CHECK(manifest.files.size() == 5);
        for (const auto& [name, hash] : manifest.files) CHECK(sha256_hex(read_file(dir / name)) == hash);
        CHECK(manifest.hash == sha256_hex(read_file(dir / kManifestFile)));
        CHECK(read_manifest(dir.path()) == manifest);
        CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    TEST_CASE("snapshot: rebuild is byte-identical") {
        std::mt19937_64 rng(47);
        const auto papers = oracle::random_corpus(rng, 40, 100);
        TempDir a, b;
        const auto ma = build_snapshot(papers, vectors_for(papers), a.path());
        const auto mb = build_snapshot(papers, vectors_for(papers), b.path());
        CHECK(ma == mb);
        const Snapshot loaded = load_snapshot(a.path());
        TempDir c;
        CHECK(write_snapshot(loaded, c.path()) == ma);
    }

    TEST_CASE("snapshot: round trip preserves state and search behavior") {
        std::mt19937_64 rng(53);
        auto papers = oracle::random_corpus(rng, 200, 300);
        papers[0].body = {"First sentence here. Second one follows.", "New paragraph."};
        const auto vectors = vectors_for(papers, 5);
        TempDir dir;
        build_snapshot(papers, vectors, dir.path());
        const auto built = std::make_shared<const Snapshot>(Snapshot::build(papers, vectors));
        const auto loaded = std::make_shared<const Snapshot>(load_snapshot(dir.path()));
        CHECK(loaded->papers() == built->papers());
        CHECK(loaded->sentences() == built->sentences());
        CHECK(loaded->index() == built->index());
        CHECK(loaded->embeddings() == built->embeddings());
        CHECK(loaded->vectors() == built->vectors());

        const Engine e1(built), e2(loaded);
        for (int q = 0; q < 20; ++q) {
            const std::string filter = oracle::render(oracle::random_clauses(rng, 300));
            const auto source = RankingSource::paper(papers[rng() % papers.size()].id);
            try {
                CHECK(e1.search(filter, source) == e2.search(filter, source));
            } catch (const InvalidSource&) {
                CHECK_THROWS_AS(e2.search(filter, source), InvalidSource);
            }
        }
    }

    TEST_CASE("snapshot: corruption is detected and names the file") {
        std::mt19937_64 rng(59);
        const auto papers = oracle::random_corpus(rng, 10, 40);
        TempDir dir;
        build_snapshot(papers, vectors_for(papers), dir.path());
        const std::string manifest = read_file(dir / kManifestFile);
        for (const char* name : {"papers.jsonl", "sentences.bin", "index.idx", "embeddings.emb", "vectors.vec"}) {
            const std::string original = read_file(dir / name);
            std::string flipped = original;
            flipped[flipped.size() / 2] ^= 0x01;
            write_file(dir / name, flipped);
            CHECK(corrupt_file(dir.path()) == name);
            write_file(dir / name, original.substr(0, original.size() - 3));
            CHECK(corrupt_file(dir.path()) == name);
            std::filesystem::remove(dir / name);
            CHECK(corrupt_file(dir.path()) == name);
            write_file(dir / name, original);
        }
        CHECK_NOTHROW(load_snapshot(dir.path()));
        write_file(dir / kManifestFile, "garbage line\n");
        CHECK(corrupt_file(dir.path()) == kManifestFile);
        std::filesystem::remove(dir / kManifestFile);
        CHECK(corrupt_file(dir.path()) == kManifestFile);
        write_file(dir / kManifestFile, manifest);
        CHECK_NOTHROW(load_snapshot(dir.path()));
    }

    TEST_CASE("snapshot: consistent hashes but misaligned sections are rejected") {
        std::mt19937_64 rng(61);
        const auto papers = oracle::random_corpus(rng, 10, 40);
        auto fewer = papers;
        fewer.pop_back();
        TempDir a, b;
        build_snapshot(papers, vectors_for(papers), a.path());
        build_snapshot(fewer, vectors_for(papers), b.path());
        // Splice b's index into a and fix up the manifest hash.
        std::filesystem::copy_file(b / "index.idx", a / "index.idx", std::filesystem::copy_options::overwrite_existing);
        std::string manifest;
        for (const auto& [name, hash] : read_manifest(a.path()).files) {
            manifest += name + "\t" + (name == "index.idx" ? sha256_hex(read_file(a / name)) : hash) + "\n";
        }
        write_file(a / kManifestFile, manifest);
        CHECK_THROWS_AS(load_snapshot(a.path()), CorruptSnapshot);
    }

    TEST_CASE("snapshot: find and ordinal alignment") {
        std::mt19937_64 rng(67);
        const auto papers = oracle::random_corpus(rng, 30, 50);
        const Snapshot s = Snapshot::build(papers, vectors_for(papers));
        for (std::size_t i = 0; i < papers.size(); ++i) {
            CHECK(s.find(papers[i].id) == std::optional<DocOrdinal>(static_cast<DocOrdinal>(i)));
            CHECK(s.index().doc_ids()[i] == papers[i].id);
            CHECK(s.sentences()[i] == split_sentences(papers[i].body));
        }
        CHECK_FALSE(s.find("missing"));
    }
}
