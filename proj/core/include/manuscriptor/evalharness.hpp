#pragma once

#include "manuscriptor/snapshot.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace manuscriptor {

/// Outcome of a parent-retrieval run. `samples` counts the queries actually
/// evaluated; sampled papers without a usable abstract embedding are counted
/// in `excluded_invalid` instead.
struct EvalReport {
    std::size_t samples = 0;
    std::size_t top1_hits = 0;
    std::size_t topk_hits = 0;
    double top1_rate = 0.0;
    double topk_rate = 0.0;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::size_t excluded_invalid = 0;

    bool operator==(const EvalReport&) const = default;
};

/// `count` distinct ordinals from [0, n), in draw order. Partial Fisher-Yates
/// driven by std::mt19937_64(seed) with rejection sampling for each bounded
/// draw, so the sequence is identical on every platform.
std::vector<DocOrdinal> sample_ordinals(std::size_t n, std::size_t count, std::uint64_t seed);

/// For each sampled paper, ranks every paper (embedded without its abstract)
/// against the paper's abstract and records whether the paper itself comes
/// first and whether it is within the first k. Throws InsufficientCorpus when
/// samples exceeds the corpus size.
EvalReport run_parent_retrieval(std::shared_ptr<const Snapshot> snapshot, std::size_t samples, std::size_t k,
                                std::uint64_t seed);

enum class ReportFormat { Table, Tsv };

/// Table rates use one decimal place ("57.3%"); TSV keeps full precision and
/// round-trips through parse_report_tsv.
std::string report_to_text(const EvalReport& report, ReportFormat format = ReportFormat::Table);
EvalReport parse_report_tsv(std::string_view text);

}  // namespace manuscriptor
