#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace manuscriptor {

/// Bibliographic metadata for an item that is not in the corpus.
struct ExternalMetadata {
    std::string doi;
    std::string title;
    std::vector<std::string> authors;
    std::string journal;
    int year = 0;

    bool operator==(const ExternalMetadata&) const = default;
};

/// A saved paper. Corpus papers are keyed by their paper id; DOI-only items
/// by `doi:<lowercased doi>`.
struct LibraryEntry {
    std::string entry_id;
    std::optional<std::string> paper_id;
    std::optional<ExternalMetadata> external;
    std::int64_t added_at = 0;  ///< milliseconds since the Unix epoch
    std::set<std::string> cite_keys;

    bool cited() const { return !cite_keys.empty(); }
    bool operator==(const LibraryEntry&) const = default;
};

struct CitationMarker {
    std::string marker_id;
    std::string entry_id;

    bool operator==(const CitationMarker&) const = default;
};

struct RemovalReport {
    LibraryEntry removed;
    std::vector<std::string> dangling_markers;  ///< markers that pointed at the entry
};

/// Throws MalformedDoi unless `doi` looks like `10.<registrant>/<suffix>`.
void validate_doi(std::string_view doi);

/// Looks up bibliographic metadata for a DOI.
class MetadataResolver {
public:
    virtual ~MetadataResolver() = default;
    /// Throws DoiNotFound or ResolverUnavailable.
    virtual ExternalMetadata resolve(std::string_view doi) = 0;
};

/// Offline resolver backed by a JSON-lines file of
/// `{"doi", "title", "authors", "journal", "year"}` records.
class FixtureResolver : public MetadataResolver {
public:
    explicit FixtureResolver(std::vector<ExternalMetadata> records);
    static FixtureResolver from_file(const std::filesystem::path& path);

    ExternalMetadata resolve(std::string_view doi) override;

private:
    std::map<std::string, ExternalMetadata> by_doi_;
};

/// Resolver speaking CSL-JSON content negotiation to a DOI service
/// (`GET <base>/<doi>` with `Accept: application/vnd.citationstyles.csl+json`).
/// See docs/doi-resolver.md.
class HttpDoiResolver : public MetadataResolver {
public:
    explicit HttpDoiResolver(std::string base_url = "https://doi.org",
                             std::chrono::milliseconds timeout = std::chrono::seconds(10));

    ExternalMetadata resolve(std::string_view doi) override;

    /// Maps a CSL-JSON document to metadata; exposed for tests.
    static ExternalMetadata from_csl_json(std::string_view doi, std::string_view body);

private:
    std::string base_url_;
    std::chrono::milliseconds timeout_;
};

/// Validates the DOI, then asks the resolver.
ExternalMetadata resolve_doi(std::string_view doi, MetadataResolver& resolver);

/// One user's bibliography. Not thread-safe; the service serializes writers.
class Library {
public:
    using PaperExists = std::function<bool(std::string_view)>;
    using Clock = std::function<std::int64_t()>;

    explicit Library(PaperExists paper_exists, Clock clock = {});

    /// Idempotent. Throws UnknownPaper for ids not in the corpus.
    const LibraryEntry& add_paper(std::string_view paper_id);
    /// Idempotent per DOI.
    const LibraryEntry& add_external(const ExternalMetadata& metadata);

    /// Registers a marker on an entry. `entry_or_paper` may also be a corpus
    /// paper id that is not saved yet; it is added first. Throws
    /// DuplicateMarker, NotFound, or UnknownPaper.
    CitationMarker cite(std::string_view entry_or_paper, std::string marker_id);

    /// Throws NotFound for unknown markers.
    CitationMarker remove_marker(std::string_view marker_id);

    /// Entries by (added_at, entry_id); `cited_only` keeps entries with markers.
    std::vector<LibraryEntry> list(bool cited_only) const;

    const LibraryEntry* find(std::string_view entry_id) const;
    const CitationMarker* find_marker(std::string_view marker_id) const;

    /// Removes the entry and its markers, reporting which markers now dangle
    /// in the manuscript. Throws NotFound.
    RemovalReport remove_entry(std::string_view entry_id);

    /// Writes atomically (temporary file + rename).
    void save(const std::filesystem::path& path) const;
    /// A missing file yields an empty library.
    static Library load(const std::filesystem::path& path, PaperExists paper_exists, Clock clock = {});

    std::string to_json() const;
    static Library from_json(std::string_view text, PaperExists paper_exists, Clock clock = {});

private:
    std::int64_t now() const;

    PaperExists paper_exists_;
    Clock clock_;
    std::map<std::string, LibraryEntry, std::less<>> entries_;
    std::map<std::string, CitationMarker, std::less<>> markers_;
};

}  // namespace manuscriptor
