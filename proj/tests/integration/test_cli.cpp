#include "temp_dir.hpp"

#include "manuscriptor/corpus.hpp"
#include "manuscriptor/embedder.hpp"
#include "manuscriptor/engine.hpp"
#include "manuscriptor/evalharness.hpp"
#include "manuscriptor/snapshot.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

using namespace manuscriptor;
using testing_support::TempDir;

namespace {

const std::string kSource = MANUSCRIPTOR_SOURCE_DIR;
const std::string kCli = MANUSCRIPTOR_CLI;

struct Run {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs `env... manuscriptor args` through the shell, capturing both streams.
Run run(const TempDir& tmp, const std::string& args, const std::string& env = "", const std::string& input = "") {
    const auto err_path = tmp / "stderr.txt";
    std::string cmd = env + " '" + kCli + "' " + args + " 2>'" + err_path.string() + "'";
    if (!input.empty()) {
        std::ofstream(tmp / "stdin.txt") << input;
        cmd += " <'" + (tmp / "stdin.txt").string() + "'";
    }
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_path);
    return r;
}

std::vector<std::vector<std::string>> tsv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, '\t');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

struct Fixture {
    TempDir tmp;
    std::vector<Paper> papers;
    std::string corpus;
    std::string snap;

    Fixture() {
        papers = ingest_file(kSource + "/data/sample_corpus.jsonl");
        papers.resize(50);
        corpus = (tmp / "corpus.jsonl").string();
        std::ofstream out(corpus);
        for (const auto& p : papers) out << to_json_line(p) << "\n";
        out.close();
        snap = (tmp / "snap").string();
        const Run r = run(tmp, "ingest --corpus '" + corpus + "' --synth-seed 42 --dim 48 --out '" + snap + "'");
        INFO(r.err);
        REQUIRE(r.exit_code == 0);
    }
};

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("ingest prints the manifest hash and is reproducible") {
        Fixture f;
        const Manifest m = read_manifest(f.snap);
        const Run again = run(f.tmp, "ingest --corpus '" + f.corpus + "' --synth-seed 42 --dim 48 --out '" +
                                         (f.tmp / "snap2").string() + "'");
        CHECK(again.exit_code == 0);
        CHECK(again.out == m.hash + "\n");
        CHECK(std::regex_match(m.hash, std::regex("[0-9a-f]{64}")));
        const Snapshot s = load_snapshot(f.snap);
        CHECK(s.size() == f.papers.size());
        CHECK(s.dim() == 48);
        const auto expected = synth_vectors(corpus_vocabulary(f.papers), 48, 42);
        CHECK(s.vectors() == expected);
    }

    TEST_CASE("ingest with a vector file") {
        Fixture f;
        std::ofstream(f.tmp / "vec.txt") << "3 2\nzarmi 1 0\nbalwex 0 1\nzarmi 0.5 0.5\n";
        const std::string out = (f.tmp / "vsnap").string();
        const Run r = run(f.tmp, "ingest --corpus '" + f.corpus + "' --vectors '" + (f.tmp / "vec.txt").string() +
                                     "' --out '" + out + "'");
        INFO(r.err);
        CHECK(r.exit_code == 0);
        CHECK(r.err.find("1 duplicate") != std::string::npos);
        CHECK(load_snapshot(out).dim() == 2);

        const Run mismatch = run(f.tmp, "ingest --corpus '" + f.corpus + "' --vectors '" +
                                            (f.tmp / "vec.txt").string() + "' --dim 3 --out '" + out + "'");
        CHECK(mismatch.exit_code == 1);
        CHECK(mismatch.err.rfind("error: ", 0) == 0);
    }

    TEST_CASE("ingest argument errors") {
        Fixture f;
        CHECK(run(f.tmp, "ingest --corpus '" + f.corpus + "' --out x").exit_code == 1);
        CHECK(run(f.tmp, "ingest --corpus '" + f.corpus + "' --synth-seed 1 --vectors v --out x").exit_code != 0);
        CHECK(run(f.tmp, "ingest --corpus /nonexistent --synth-seed 1 --out x").exit_code == 1);
        CHECK(run(f.tmp, "").exit_code != 0);
    }

    TEST_CASE("search prints TSV equal to the engine ranking") {
        Fixture f;
        const std::string text = f.papers[7].abstract;
        std::ofstream(f.tmp / "query.txt") << text;
        const Run r = run(f.tmp, "search --snapshot '" + f.snap + "' --filter 'zarmi|balwex' --query-file '" +
                                     (f.tmp / "query.txt").string() + "' --limit 10");
        INFO(r.err);
        REQUIRE(r.exit_code == 0);
        const auto rows = tsv(r.out);
        REQUIRE(!rows.empty());
        CHECK(rows[0] == std::vector<std::string>{"rank", "id", "distance", "title"});

        const Engine engine(std::make_shared<const Snapshot>(load_snapshot(f.snap)));
        SearchOptions options;
        options.limit = 10;
        const auto expected = engine.search("zarmi|balwex", RankingSource::text(text), options);
        REQUIRE(rows.size() == expected.hits.size() + 1);
        char buf[32];
        for (std::size_t i = 0; i < expected.hits.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6f", expected.hits[i].distance);
            CHECK(rows[i + 1] ==
                  std::vector<std::string>{std::to_string(i + 1), expected.hits[i].paper_id, buf, expected.hits[i].title});
        }

        const Run piped = run(f.tmp, "search --filter 'zarmi|balwex' --query-file - --limit 10",
                              "MANUSCRIPTOR_SNAPSHOT='" + f.snap + "'", text);
        CHECK(piped.exit_code == 0);
        CHECK(piped.out == r.out);
    }

    TEST_CASE("search by paper and error exits") {
        Fixture f;
        const std::string id = f.papers[0].id;
        const Run r = run(f.tmp, "search --snapshot '" + f.snap + "' --paper " + id);
        CHECK(r.exit_code == 0);
        CHECK(tsv(r.out).size() == f.papers.size());
        CHECK(r.out.find("\t" + id + "\t") == std::string::npos);

        const Run bad_filter = run(f.tmp, "search --snapshot '" + f.snap + "' --paper " + id + " --filter '!'");
        CHECK(bad_filter.exit_code == 1);
        CHECK(bad_filter.err.rfind("error: ", 0) == 0);
        CHECK(run(f.tmp, "search --snapshot '" + f.snap + "'").exit_code == 1);
        CHECK(run(f.tmp, "search --snapshot '" + f.snap + "' --paper NOPE").exit_code == 1);
        CHECK(run(f.tmp, "search --snapshot '" + f.snap + "' --paper " + id + " --limit 0").exit_code != 0);
        CHECK(run(f.tmp, "search --snapshot /nonexistent --paper " + id).exit_code == 1);
    }

    TEST_CASE("eval matches the library harness") {
        Fixture f;
        const Run r = run(f.tmp, "eval --snapshot '" + f.snap + "' --samples 30 --seed 9 --top-k 5 --format tsv");
        INFO(r.err);
        REQUIRE(r.exit_code == 0);
        const auto expected =
            run_parent_retrieval(std::make_shared<const Snapshot>(load_snapshot(f.snap)), 30, 5, 9);
        CHECK(parse_report_tsv(r.out) == expected);

        const Run table = run(f.tmp, "eval --samples 30 --top-k 5", "MANUSCRIPTOR_SNAPSHOT='" + f.snap + "' MANUSCRIPTOR_SEED=9");
        CHECK(table.exit_code == 0);
        CHECK(table.out == report_to_text(expected));

        CHECK(run(f.tmp, "eval --snapshot '" + f.snap + "' --samples 51").exit_code == 1);
        CHECK(run(f.tmp, "eval --snapshot '" + f.snap + "' --format xml").exit_code != 0);
    }

    TEST_CASE("serve answers, reloads on SIGHUP and stops on SIGTERM") {
        Fixture f;
        const auto log = f.tmp / "serve.log";
        const auto pid_file = f.tmp / "serve.pid";
        const std::string cmd = "'" + kCli + "' serve --snapshot '" + f.snap + "' --port 0 --library-dir '" +
                                (f.tmp / "lib").string() + "' 2>'" + log.string() + "' & echo $! >'" +
                                pid_file.string() + "'";
        REQUIRE(std::system(cmd.c_str()) == 0);
        int port = 0;
        const std::regex listening("listening on http://127\\.0\\.0\\.1:(\\d+)");
        for (int i = 0; i < 500 && port == 0; ++i) {
            std::smatch m;
            const std::string text = slurp(log);
            if (std::regex_search(text, m, listening)) {
                port = std::stoi(m[1]);
            } else {
                std::this_thread::sleep_for(std::chrono::milliseconds(10));
            }
        }
        REQUIRE(port > 0);
        const std::string pid = [&] {
            std::string s = slurp(pid_file);
            return s.substr(0, s.find('\n'));
        }();

        httplib::Client client("127.0.0.1", port);
        auto health = client.Get("/api/health");
        REQUIRE(health);
        CHECK(health->status == 200);
        CHECK(nlohmann::json::parse(health->body)["corpus_size"] == f.papers.size());

        REQUIRE(std::system(("kill -HUP " + pid).c_str()) == 0);
        for (int i = 0; i < 500 && slurp(log).find("snapshot reloaded") == std::string::npos; ++i) {
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        CHECK(slurp(log).find("snapshot reloaded") != std::string::npos);
        CHECK(client.Get("/api/health")->status == 200);

        REQUIRE(std::system(("kill -TERM " + pid).c_str()) == 0);
        bool exited = false;
        for (int i = 0; i < 500 && !exited; ++i) {
            exited = std::system(("kill -0 " + pid + " 2>/dev/null").c_str()) != 0;
            if (!exited) std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        CHECK(exited);
    }
}
