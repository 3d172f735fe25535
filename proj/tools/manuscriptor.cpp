#include "manuscriptor/corpus.hpp"
#include "manuscriptor/embedder.hpp"
#include "manuscriptor/engine.hpp"
#include "manuscriptor/errors.hpp"
#include "manuscriptor/evalharness.hpp"
#include "manuscriptor/service.hpp"
#include "manuscriptor/snapshot.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

namespace ms = manuscriptor;

namespace {

struct IngestArgs {
    std::string corpus;
    std::string vectors;
    std::optional<std::uint64_t> synth_seed;
    std::size_t dim = 400;
    std::string out;
};

struct ServeArgs {
    std::string snapshot;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string ui;
    std::string library_dir = "library";
    std::string doi_fixture;
    std::string doi_resolver_url;
};

struct SearchArgs {
    std::string snapshot;
    std::string filter;
    std::string query_file;
    std::string paper;
    std::size_t limit = ms::kMaxResults;
};

struct EvalArgs {
    std::string snapshot;
    std::size_t samples = 200;
    std::uint64_t seed = 42;
    std::size_t top_k = 20;
    std::string format = "table";
};

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ms::Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_ingest(const IngestArgs& a, bool dim_given) {
    auto papers = ms::ingest_file(a.corpus);
    ms::VectorStore vectors;
    if (!a.vectors.empty()) {
        auto report = ms::load_vectors_file(a.vectors);
        if (dim_given && report.store.dim() != a.dim) {
            throw ms::Error("--dim " + std::to_string(a.dim) + " does not match the vector file's " +
                            std::to_string(report.store.dim()));
        }
        if (report.duplicates) std::cerr << "warning: " << report.duplicates << " duplicate words, last one kept\n";
        if (report.skipped) std::cerr << "warning: " << report.skipped << " words skipped (not a single token)\n";
        vectors = std::move(report.store);
    } else {
        if (a.dim == 0) throw ms::Error("--dim must be positive");
        vectors = ms::synth_vectors(ms::corpus_vocabulary(papers), a.dim, *a.synth_seed);
    }
    const auto manifest = ms::build_snapshot(papers, vectors, a.out);
    std::cerr << papers.size() << " papers, " << vectors.size() << " word vectors of dim " << vectors.dim() << "\n";
    std::cout << manifest.hash << "\n";
    return 0;
}

int run_serve(const ServeArgs& a) {
    // Signals are handled by a dedicated thread; block them everywhere else.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    sigaddset(&signals, SIGHUP);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    ms::ServiceConfig config;
    config.snapshot_dir = a.snapshot;
    config.ui_dir = a.ui;
    config.library_dir = a.library_dir;
    if (!a.doi_fixture.empty()) {
        config.resolver = std::make_shared<ms::FixtureResolver>(ms::FixtureResolver::from_file(a.doi_fixture));
    } else if (!a.doi_resolver_url.empty()) {
        config.resolver = std::make_shared<ms::HttpDoiResolver>(a.doi_resolver_url);
    }

    ms::Service service(std::move(config));
    service.load();
    const int port = service.bind(a.host, a.port);
    std::cerr << "listening on http://" << a.host << ":" << port << "\n";

    std::thread watcher([&] {
        for (;;) {
            int sig = 0;
            if (sigwait(&signals, &sig) != 0) continue;
            if (sig == SIGHUP) {
                try {
                    service.load();
                    std::cerr << "snapshot reloaded\n";
                } catch (const std::exception& e) {
                    std::cerr << "reload failed: " << e.what() << "\n";
                }
                continue;
            }
            service.stop();
            return;
        }
    });
    service.listen();
    // listen() may also end without a signal (e.g. socket error); wake the watcher.
    pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
    return 0;
}

int run_search(const SearchArgs& a) {
    if (a.query_file.empty() == a.paper.empty()) throw ms::Error("give exactly one of --query-file and --paper");
    auto snapshot = std::make_shared<const ms::Snapshot>(ms::load_snapshot(a.snapshot));
    const ms::Engine engine(snapshot);
    const auto source = a.paper.empty() ? ms::RankingSource::text(read_all(a.query_file)) : ms::RankingSource::paper(a.paper);
    ms::SearchOptions options;
    options.limit = a.limit;
    const auto result = engine.search(a.filter, source, options);
    std::cout << "rank\tid\tdistance\ttitle\n";
    char distance[32];
    for (std::size_t i = 0; i < result.hits.size(); ++i) {
        const auto& h = result.hits[i];
        std::snprintf(distance, sizeof distance, "%.6f", h.distance);
        std::cout << i + 1 << '\t' << h.paper_id << '\t' << distance << '\t' << h.title << '\n';
    }
    return 0;
}

int run_eval(const EvalArgs& a) {
    auto snapshot = std::make_shared<const ms::Snapshot>(ms::load_snapshot(a.snapshot));
    const auto report = ms::run_parent_retrieval(snapshot, a.samples, a.top_k, a.seed);
    std::cout << ms::report_to_text(report, a.format == "tsv" ? ms::ReportFormat::Tsv : ms::ReportFormat::Table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Literature search over a corpus snapshot: filter by keywords, rank by embedding distance."};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Build a snapshot directory from a JSON-lines corpus");
    ingest_cmd->add_option("--corpus", ingest.corpus, "Corpus file, one JSON record per line")
        ->required()
        ->envname("MANUSCRIPTOR_CORPUS");
    auto* vectors_opt = ingest_cmd->add_option("--vectors", ingest.vectors, "Word-vector text file")
                            ->envname("MANUSCRIPTOR_VECTORS");
    auto* seed_opt = ingest_cmd->add_option("--synth-seed", ingest.synth_seed,
                                            "Generate deterministic vectors for the corpus vocabulary")
                         ->envname("MANUSCRIPTOR_SYNTH_SEED");
    vectors_opt->excludes(seed_opt);
    auto* dim_opt = ingest_cmd->add_option("--dim", ingest.dim, "Vector dimension")
                        ->capture_default_str()
                        ->envname("MANUSCRIPTOR_DIM");
    ingest_cmd->add_option("--out", ingest.out, "Snapshot directory to write")
        ->required()
        ->envname("MANUSCRIPTOR_OUT");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API (and optionally a UI bundle)");
    serve_cmd->add_option("--snapshot", serve.snapshot, "Snapshot directory")->required()->envname("MANUSCRIPTOR_SNAPSHOT");
    serve_cmd->add_option("--host", serve.host, "Address to bind")->capture_default_str()->envname("MANUSCRIPTOR_HOST");
    serve_cmd->add_option("--port", serve.port, "Port, 0 for any free port")
        ->capture_default_str()
        ->envname("MANUSCRIPTOR_PORT");
    serve_cmd->add_option("--ui", serve.ui, "Directory of static UI files")->envname("MANUSCRIPTOR_UI");
    serve_cmd->add_option("--library-dir", serve.library_dir, "Directory of per-user library files")
        ->capture_default_str()
        ->envname("MANUSCRIPTOR_LIBRARY_DIR");
    auto* fixture_opt = serve_cmd->add_option("--doi-fixture", serve.doi_fixture, "Offline DOI metadata (JSON lines)")
                            ->envname("MANUSCRIPTOR_DOI_FIXTURE");
    serve_cmd
        ->add_option("--doi-resolver-url", serve.doi_resolver_url,
                     "DOI content-negotiation service, e.g. https://doi.org")
        ->envname("MANUSCRIPTOR_DOI_RESOLVER_URL")
        ->excludes(fixture_opt);

    SearchArgs search;
    auto* search_cmd = app.add_subcommand("search", "Rank papers against a text file or a paper; prints TSV");
    search_cmd->add_option("--snapshot", search.snapshot, "Snapshot directory")->required()->envname("MANUSCRIPTOR_SNAPSHOT");
    search_cmd->add_option("--filter", search.filter, "Keyword filter, e.g. 'lung cancer|tumor !mouse'")
        ->envname("MANUSCRIPTOR_FILTER");
    search_cmd->add_option("--query-file", search.query_file, "Ranking text ('-' for stdin)")
        ->envname("MANUSCRIPTOR_QUERY_FILE");
    search_cmd->add_option("--paper", search.paper, "Rank against this paper instead")->envname("MANUSCRIPTOR_PAPER");
    search_cmd->add_option("--limit", search.limit, "Maximum results (at most 1000)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->envname("MANUSCRIPTOR_LIMIT");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Parent-retrieval evaluation (abstract as query)");
    eval_cmd->add_option("--snapshot", eval.snapshot, "Snapshot directory")->required()->envname("MANUSCRIPTOR_SNAPSHOT");
    eval_cmd->add_option("--samples", eval.samples, "Abstracts to sample")->capture_default_str()->envname("MANUSCRIPTOR_SAMPLES");
    eval_cmd->add_option("--seed", eval.seed, "Sampling seed")->capture_default_str()->envname("MANUSCRIPTOR_SEED");
    eval_cmd->add_option("--top-k", eval.top_k, "Cutoff for the top-k rate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->envname("MANUSCRIPTOR_TOP_K");
    eval_cmd->add_option("--format", eval.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"table", "tsv"}))
        ->envname("MANUSCRIPTOR_FORMAT");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest_cmd->parsed()) {
            if (ingest.vectors.empty() && !ingest.synth_seed) throw ms::Error("give --vectors or --synth-seed");
            return run_ingest(ingest, dim_opt->count() > 0 || std::getenv("MANUSCRIPTOR_DIM"));
        }
        if (serve_cmd->parsed()) return run_serve(serve);
        if (search_cmd->parsed()) return run_search(search);
        if (eval_cmd->parsed()) return run_eval(eval);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
