#include "manuscriptor/evalharness.hpp"

#include "manuscriptor/engine.hpp"
#include "manuscriptor/errors.hpp"

#include <charconv>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace manuscriptor {
namespace {

// Uniform in [0, bound) without modulo bias.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

const char* const kTsvColumns[] = {"samples", "top1_hits", "topk_hits", "top1_rate", "topk_rate",
                                   "k",       "seed",      "excluded_invalid"};

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string percent(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", rate * 100.0);
    return buf;
}

template <typename T>
T parse_field(std::string_view field, const char* name) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError(std::string("bad value for ") + name + ": '" + std::string(field) + "'", 2);
    }
    return value;
}

}  // namespace

std::vector<DocOrdinal> sample_ordinals(std::size_t n, std::size_t count, std::uint64_t seed) {
    if (count > n) throw InsufficientCorpus("cannot sample " + std::to_string(count) + " of " + std::to_string(n));
    std::vector<DocOrdinal> pool(n);
    std::iota(pool.begin(), pool.end(), DocOrdinal{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + bounded(rng, n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

EvalReport run_parent_retrieval(std::shared_ptr<const Snapshot> snapshot, std::size_t samples, std::size_t k,
                                std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (samples > snapshot->size()) {
        throw InsufficientCorpus("requested " + std::to_string(samples) + " samples from a corpus of " +
                                 std::to_string(snapshot->size()));
    }
    const Snapshot& snap = *snapshot;
    auto bodies = embed_corpus(snap.vectors(), snap.papers(), DocumentText::WithoutAbstract);
    const Engine engine(snapshot, std::move(bodies));

    std::vector<DocOrdinal> everyone(snap.size());
    std::iota(everyone.begin(), everyone.end(), DocOrdinal{0});

    EvalReport report;
    report.k = k;
    report.seed = seed;
    for (DocOrdinal parent : sample_ordinals(snap.size(), samples, seed)) {
        const Embedding query = embed_text(snap.vectors(), snap.papers()[parent].abstract);
        if (!query.valid || l2_norm(query.vec) == 0.0) {
            ++report.excluded_invalid;
            continue;
        }
        ++report.samples;
        const SearchResult result = engine.rank(everyone, query, std::nullopt, k);
        for (std::size_t rank = 0; rank < result.hits.size(); ++rank) {
            if (result.hits[rank].ordinal != parent) continue;
            if (rank == 0) ++report.top1_hits;
            ++report.topk_hits;
            break;
        }
    }
    if (report.samples > 0) {
        report.top1_rate = static_cast<double>(report.top1_hits) / static_cast<double>(report.samples);
        report.topk_rate = static_cast<double>(report.topk_hits) / static_cast<double>(report.samples);
    }
    return report;
}

std::string report_to_text(const EvalReport& report, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Tsv) {
        for (std::size_t i = 0; i < std::size(kTsvColumns); ++i) out << (i ? "\t" : "") << kTsvColumns[i];
        out << '\n'
            << report.samples << '\t' << report.top1_hits << '\t' << report.topk_hits << '\t'
            << format_double(report.top1_rate) << '\t' << format_double(report.topk_rate) << '\t' << report.k << '\t'
            << report.seed << '\t' << report.excluded_invalid << '\n';
        return out.str();
    }

    char line[128];
    auto row = [&](const char* label, const std::string& value) {
        std::snprintf(line, sizeof line, "%-20s %s\n", label, value.c_str());
        out << line;
    };
    row("metric", "value");
    if (report.samples == 0) {
        row("samples", "no samples");
    } else {
        row("samples", std::to_string(report.samples));
        row("top-1", percent(report.top1_rate));
        row(("top-" + std::to_string(report.k)).c_str(), percent(report.topk_rate));
    }
    row("excluded (no vocab)", std::to_string(report.excluded_invalid));
    row("seed", std::to_string(report.seed));
    return out.str();
}

EvalReport parse_report_tsv(std::string_view text) {
    std::vector<std::vector<std::string_view>> rows;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (std::size_t tab; (tab = line.find('\t', start)) != std::string_view::npos; start = tab + 1) {
            fields.push_back(line.substr(start, tab - start));
        }
        fields.push_back(line.substr(start));
        rows.push_back(std::move(fields));
    }
    if (rows.size() != 2 || rows[0].size() != std::size(kTsvColumns) || rows[1].size() != rows[0].size()) {
        throw FormatError("expected a header row and one value row of " + std::to_string(std::size(kTsvColumns)) +
                          " columns");
    }
    for (std::size_t i = 0; i < std::size(kTsvColumns); ++i) {
        if (rows[0][i] != kTsvColumns[i]) throw FormatError("unexpected column '" + std::string(rows[0][i]) + "'", 1);
    }
    const auto& v = rows[1];
    EvalReport r;
    r.samples = parse_field<std::size_t>(v[0], "samples");
    r.top1_hits = parse_field<std::size_t>(v[1], "top1_hits");
    r.topk_hits = parse_field<std::size_t>(v[2], "topk_hits");
    r.top1_rate = parse_field<double>(v[3], "top1_rate");
    r.topk_rate = parse_field<double>(v[4], "topk_rate");
    r.k = parse_field<std::size_t>(v[5], "k");
    r.seed = parse_field<std::uint64_t>(v[6], "seed");
    r.excluded_invalid = parse_field<std::size_t>(v[7], "excluded_invalid");
    return r;
}

}  // namespace manuscriptor
