#include "manuscriptor/engine.hpp"
#include "manuscriptor/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <thread>

using namespace manuscriptor;

namespace {

struct World {
    std::vector<Paper> papers;
    oracle::WordVectors vectors;
    std::shared_ptr<const Snapshot> snapshot;
    std::vector<std::optional<std::vector<float>>> doc_vectors;

    World(std::vector<Paper> p, oracle::WordVectors v) : papers(std::move(p)), vectors(std::move(v)) {
        VectorStore store(vectors.begin()->second.size());
        for (const auto& [w, vec] : vectors) store.set(w, vec);
        snapshot = std::make_shared<const Snapshot>(Snapshot::build(papers, std::move(store)));
        for (const auto& paper : papers) doc_vectors.push_back(oracle::mean_vector(vectors, oracle::paper_text(paper)));
    }
};

World random_world(std::mt19937_64& rng, std::size_t docs, std::size_t vocab, std::size_t covered, std::size_t dim) {
    auto papers = oracle::random_corpus(rng, docs, vocab);
    auto vectors = oracle::random_vectors(rng, covered, dim);
    return World(std::move(papers), std::move(vectors));
}

std::vector<oracle::Ranked> as_ranked(const SearchResult& r) {
    std::vector<oracle::Ranked> out;
    for (const auto& h : r.hits) out.push_back({h.paper_id, h.distance});
    return out;
}

std::vector<bool> allow_all(std::size_t n) { return std::vector<bool>(n, true); }

std::vector<bool> allowed_by(const World& w, const std::vector<oracle::Clause>& clauses) {
    std::vector<bool> allowed(w.papers.size(), false);
    for (auto d : oracle::scan(oracle::doc_terms(w.papers), clauses)) allowed[d] = true;
    return allowed;
}

Paper paper(std::string id, std::string title, std::vector<std::string> body = {}) {
    Paper p;
    p.id = std::move(id);
    p.title = std::move(title);
    p.body = std::move(body);
    return p;
}

}  // namespace

TEST_SUITE("engine") {
    TEST_CASE("default limit caps results at 1000") {
        std::mt19937_64 rng(71);
        World w = random_world(rng, 1300, 50, 50, 8);
        const Engine engine(w.snapshot);
        const auto r = engine.search("", RankingSource::text("w1 w2 w3"));
        CHECK(r.hits.size() == 1000);
        const auto rankable = std::count_if(w.doc_vectors.begin(), w.doc_vectors.end(),
                                            [](const auto& v) { return v.has_value(); });
        CHECK(r.candidates == static_cast<std::size_t>(rankable));
        SearchOptions big;
        big.limit = 5000;
        CHECK(engine.search("", RankingSource::text("w1"), big).hits.size() == 1000);
    }

    TEST_CASE("filter matching nothing gives an empty result") {
        std::mt19937_64 rng(73);
        World w = random_world(rng, 50, 40, 40, 4);
        const Engine engine(w.snapshot);
        CHECK(engine.search("zzzunknownterm", RankingSource::text("w1")).hits.empty());
        CHECK(engine.search("w1 !w1", RankingSource::text("w1")).hits.empty());
    }

    TEST_CASE("paper source excludes itself") {
        World w({paper("p", "alpha beta"), paper("q", "alpha beta gamma")},
                {{"alpha", {1, 0, 0}}, {"beta", {0, 1, 0}}, {"gamma", {0, 0, 1}}});
        const Engine engine(w.snapshot);
        const auto r = engine.search("", RankingSource::paper("p"));
        REQUIRE(r.hits.size() == 1);
        CHECK(r.hits[0].paper_id == "q");
        SearchOptions keep;
        keep.exclude_source_paper = false;
        const auto all = engine.search("", RankingSource::paper("p"), keep);
        REQUIRE(all.hits.size() == 2);
        CHECK(all.hits[0].paper_id == "p");
        CHECK(all.hits[0].distance == doctest::Approx(0.0));
    }

    TEST_CASE("hits carry metadata") {
        Paper p = paper("p", "alpha");
        p.authors = {"X Y"};
        p.journal = "J";
        p.year = 2000;
        p.abstract = "beta";
        World w({p}, {{"alpha", {1, 0}}, {"beta", {0, 1}}});
        const auto r = Engine(w.snapshot).search("", RankingSource::text("alpha"));
        REQUIRE(r.hits.size() == 1);
        const SearchHit& h = r.hits[0];
        CHECK(h.title == "alpha");
        CHECK(h.authors == p.authors);
        CHECK(h.journal == "J");
        CHECK(h.year == 2000);
        CHECK(h.abstract == "beta");
    }

    TEST_CASE("errors") {
        World w({paper("p", "alpha"), paper("empty", "zzz")}, {{"alpha", {1, 0}}});
        const Engine engine(w.snapshot);
        CHECK_THROWS_AS(engine.search("", RankingSource::paper("nope")), InvalidSource);
        CHECK_THROWS_AS(engine.search("", RankingSource::paper("empty")), InvalidSource);
        CHECK_THROWS_AS(engine.search("", RankingSource::text("zzz qqq")), InvalidSource);
        CHECK_THROWS_AS(engine.search("", RankingSource::text("")), InvalidSource);
        CHECK_THROWS_AS(engine.search("a||b", RankingSource::text("alpha")), SyntaxError);
        SearchOptions zero;
        zero.limit = 0;
        CHECK_THROWS_AS(engine.search("", RankingSource::text("alpha"), zero), std::invalid_argument);
    }

    TEST_CASE("papers without usable embeddings are never ranked") {
        World w({paper("a", "alpha"), paper("b", "zzz"), paper("c", "alpha beta")}, {{"alpha", {1, 0}}, {"beta", {0, 1}}});
        const auto r = Engine(w.snapshot).search("", RankingSource::text("beta"));
        CHECK(r.candidates == 2);
        REQUIRE(r.hits.size() == 2);
        CHECK(r.hits[0].paper_id == "c");
        CHECK(r.hits[1].paper_id == "a");
    }

    TEST_CASE("ties break by paper id") {
        World w({paper("m", "alpha"), paper("b", "alpha"), paper("x", "alpha"), paper("a", "beta")},
                {{"alpha", {1, 0}}, {"beta", {0, 1}}});
        const auto r = Engine(w.snapshot).search("", RankingSource::text("alpha"));
        std::vector<std::string> ids;
        for (const auto& h : r.hits) ids.push_back(h.paper_id);
        CHECK(ids == std::vector<std::string>{"b", "m", "x", "a"});
    }

    TEST_CASE("property: search equals a full sort by (distance, id)") {
        std::mt19937_64 rng(79);
        for (int trial = 0; trial < 30; ++trial) {
            World w = random_world(rng, 200, 300, 250, 12);
            const Engine engine(w.snapshot);
            const auto clauses = oracle::random_clauses(rng, 300);
            const bool by_paper = rng() % 2;
            std::string exclude;
            std::optional<std::vector<float>> query;
            RankingSource source = RankingSource::text("");
            if (by_paper) {
                const auto& p = w.papers[rng() % w.papers.size()];
                source = RankingSource::paper(p.id);
                exclude = p.id;
                query = w.doc_vectors[*w.snapshot->find(p.id)];
            } else {
                std::string text;
                for (int i = 0; i < 15; ++i) text += oracle::random_word(rng, 300) + " ";
                source = RankingSource::text(text);
                query = oracle::mean_vector(w.vectors, text);
            }
            if (!query) {
                CHECK_THROWS_AS(engine.search(oracle::render(clauses), source), InvalidSource);
                continue;
            }
            SearchOptions opts;
            opts.limit = 1 + rng() % 250;
            auto expected = oracle::full_sort(w.papers, w.doc_vectors, allowed_by(w, clauses), *query, exclude);
            if (expected.size() > opts.limit) expected.resize(opts.limit);
            CHECK(as_ranked(engine.search(oracle::render(clauses), source, opts)) == expected);
        }
    }

    TEST_CASE("property: filtering commutes with ranking") {
        std::mt19937_64 rng(83);
        for (int trial = 0; trial < 30; ++trial) {
            World w = random_world(rng, 150, 200, 200, 8);
            const Engine engine(w.snapshot);
            const auto source = RankingSource::paper(w.papers[rng() % w.papers.size()].id);
            const std::string filter = oracle::render(oracle::random_clauses(rng, 200));
            try {
                engine.resolve(source);
            } catch (const InvalidSource&) {
                continue;
            }
            CHECK(engine.subset_consistency_check(filter, source));
            const auto filtered = engine.search(filter, source);
            const auto all = engine.search("", source);
            const auto allowed = w.snapshot->index().filter(parse_filter(filter));
            std::vector<SearchHit> restricted;
            for (const auto& h : all.hits) {
                if (std::binary_search(allowed.begin(), allowed.end(), h.ordinal)) restricted.push_back(h);
            }
            CHECK(filtered.hits == restricted);
        }
    }

    TEST_CASE("subset_consistency_check trivial cases") {
        std::mt19937_64 rng(89);
        World w = random_world(rng, 60, 50, 50, 4);
        const Engine engine(w.snapshot);
        CHECK(engine.subset_consistency_check("", RankingSource::text("w1 w2")));
        CHECK(engine.subset_consistency_check("w1 !w1", RankingSource::text("w1 w2")));
    }

    TEST_CASE("offset pagination slices the capped ranking") {
        std::mt19937_64 rng(97);
        World w = random_world(rng, 1100, 60, 60, 6);
        const Engine engine(w.snapshot);
        const auto source = RankingSource::text("w3 w5 w8");
        const auto full = engine.search("", source);
        REQUIRE(full.hits.size() == 1000);
        for (std::size_t offset : {0u, 1u, 37u, 990u, 999u}) {
            SearchOptions o;
            o.offset = offset;
            o.limit = 25;
            const auto page = engine.search("", source, o);
            const std::size_t n = std::min<std::size_t>(25, 1000 - offset);
            REQUIRE(page.hits.size() == n);
            CHECK(std::equal(page.hits.begin(), page.hits.end(), full.hits.begin() + static_cast<long>(offset)));
        }
        SearchOptions past;
        past.offset = 1000;
        CHECK(engine.search("", source, past).hits.empty());
    }

    TEST_CASE("deterministic and safe under concurrent use") {
        std::mt19937_64 rng(101);
        World w = random_world(rng, 400, 200, 200, 16);
        const Engine engine(w.snapshot);
        const auto source = RankingSource::text("w1 w9 w27 w81");
        const auto expected = engine.search("w2|w3", source);
        std::vector<std::thread> threads;
        std::vector<int> ok(8, 0);
        for (int t = 0; t < 8; ++t) {
            threads.emplace_back([&, t] {
                for (int i = 0; i < 20; ++i) ok[t] += engine.search("w2|w3", source) == expected;
            });
        }
        for (auto& t : threads) t.join();
        for (int v : ok) CHECK(v == 20);
    }

    TEST_CASE("highlight defaults to 20 sentences") {
        std::vector<std::string> body;
        for (int i = 0; i < 30; ++i) body.push_back("Sentence alpha number " + std::to_string(i) + ".");
        World w({paper("p", "t", body)}, {{"alpha", {1, 0}}, {"number", {0, 1}}});
        const Engine engine(w.snapshot);
        CHECK(kDefaultHighlightCount == 20);
        CHECK(engine.highlight("p", RankingSource::text("alpha")).sentences.size() == 20);
        CHECK(engine.highlight("p", RankingSource::text("alpha"), 3).sentences.size() == 3);
    }

    TEST_CASE("highlight returns all sentences when there are fewer than k") {
        World w({paper("p", "t", {"One alpha. Two beta. Three alpha beta."})}, {{"alpha", {1, 0}}, {"beta", {0, 1}}});
        const auto r = Engine(w.snapshot).highlight("p", RankingSource::text("beta"));
        REQUIRE(r.sentences.size() == 3);
        CHECK(r.sentences[0].ordinal == 1);
        CHECK(r.sentences[1].ordinal == 2);
        CHECK(r.sentences[2].ordinal == 0);
    }

    TEST_CASE("highlight skips sentences without vocabulary and breaks ties by ordinal") {
        World w({paper("p", "t", {"Zzz qqq. Alpha here. Nothing. Alpha again."})}, {{"alpha", {1, 0}}});
        const auto r = Engine(w.snapshot).highlight("p", RankingSource::text("alpha"));
        REQUIRE(r.sentences.size() == 2);
        CHECK(r.sentences[0].ordinal == 1);
        CHECK(r.sentences[1].ordinal == 3);
    }

    TEST_CASE("highlight errors") {
        World w({paper("p", "alpha", {"Alpha."})}, {{"alpha", {1, 0}}});
        const Engine engine(w.snapshot);
        CHECK_THROWS_AS(engine.highlight("nope", RankingSource::text("alpha")), UnknownPaper);
        CHECK_THROWS_AS(engine.highlight("p", RankingSource::text("zzz")), InvalidSource);
        CHECK_THROWS_AS(engine.highlight("p", RankingSource::paper("nope")), InvalidSource);
        CHECK_THROWS_AS(engine.highlight("p", RankingSource::text("alpha"), 0), std::invalid_argument);
    }

    TEST_CASE("property: highlight equals a per-sentence brute force") {
        std::mt19937_64 rng(103);
        World w = random_world(rng, 80, 150, 120, 10);
        const Engine engine(w.snapshot);
        int checked = 0;
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t ord = rng() % w.papers.size();
            const auto& p = w.papers[ord];
            std::string text;
            for (int i = 0; i < 8; ++i) text += oracle::random_word(rng, 150) + " ";
            const auto query = oracle::mean_vector(w.vectors, text);
            if (!query) continue;
            const std::size_t k = 1 + rng() % 5;
            const auto& sentences = w.snapshot->sentences()[ord];
            std::vector<std::pair<double, std::uint32_t>> expected;
            for (const auto& s : sentences) {
                auto v = oracle::mean_vector(w.vectors, s.text);
                if (v) expected.push_back({oracle::cosine_distance(*query, *v), s.ordinal});
            }
            std::sort(expected.begin(), expected.end());
            if (expected.size() > k) expected.resize(k);
            const auto got = engine.highlight(p.id, RankingSource::text(text), k);
            std::vector<std::pair<double, std::uint32_t>> actual;
            const std::string joined = join_paragraphs(p.body);
            for (const auto& h : got.sentences) {
                actual.push_back({h.distance, h.ordinal});
                CHECK(h.span == sentences[h.ordinal].span);
                CHECK(h.span.end <= joined.size());
            }
            CHECK(actual == expected);
            ++checked;
        }
        CHECK(checked > 20);
    }
}
