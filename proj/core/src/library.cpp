#include "manuscriptor/library.hpp"

#include "manuscriptor/errors.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace manuscriptor {
namespace {

using nlohmann::json;

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string external_entry_id(std::string_view doi) { return "doi:" + lowercase(doi); }

json metadata_to_json(const ExternalMetadata& m) {
    return {{"doi", m.doi}, {"title", m.title}, {"authors", m.authors}, {"journal", m.journal}, {"year", m.year}};
}

ExternalMetadata metadata_from_json(const json& j) {
    ExternalMetadata m;
    m.doi = j.at("doi").get<std::string>();
    m.title = j.value("title", "");
    m.authors = j.value("authors", std::vector<std::string>{});
    m.journal = j.value("journal", "");
    m.year = j.value("year", 0);
    return m;
}

// CSL-JSON allows either a string or an array of strings for titles.
std::string csl_text(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) return {};
    if (it->is_string()) return it->get<std::string>();
    if (it->is_array() && !it->empty() && it->front().is_string()) return it->front().get<std::string>();
    return {};
}

}  // namespace

void validate_doi(std::string_view doi) {
    // 10.<digits>[.<digits>...]/<non-empty suffix without whitespace>
    const auto slash = doi.find('/');
    bool ok = doi.substr(0, 3) == "10." && slash != std::string_view::npos && slash > 3 && slash + 1 < doi.size();
    if (ok) {
        std::string_view registrant = doi.substr(3, slash - 3);
        bool previous_dot = true;
        for (char c : registrant) {
            if (c == '.') {
                if (previous_dot) ok = false;
                previous_dot = true;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                previous_dot = false;
            } else {
                ok = false;
            }
        }
        if (previous_dot) ok = false;
        for (char c : doi.substr(slash + 1)) {
            if (std::isspace(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) < 0x20) ok = false;
        }
    }
    if (!ok) throw MalformedDoi(std::string(doi));
}

FixtureResolver::FixtureResolver(std::vector<ExternalMetadata> records) {
    for (auto& r : records) {
        std::string key = lowercase(r.doi);
        by_doi_[std::move(key)] = std::move(r);
    }
}

FixtureResolver FixtureResolver::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ResolverUnavailable("cannot open DOI fixture " + path.filename().string());
    std::vector<ExternalMetadata> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(metadata_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad DOI fixture record: ") + e.what(), line_no);
        }
    }
    return FixtureResolver(std::move(records));
}

ExternalMetadata FixtureResolver::resolve(std::string_view doi) {
    auto it = by_doi_.find(lowercase(doi));
    if (it == by_doi_.end()) throw DoiNotFound(std::string(doi));
    return it->second;
}

HttpDoiResolver::HttpDoiResolver(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

ExternalMetadata HttpDoiResolver::from_csl_json(std::string_view doi, std::string_view body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error&) {
        throw ResolverUnavailable("DOI service returned invalid JSON");
    }
    if (!doc.is_object()) throw ResolverUnavailable("DOI service returned an unexpected document");

    ExternalMetadata m;
    m.doi = std::string(doi);
    m.title = csl_text(doc, "title");
    m.journal = csl_text(doc, "container-title");
    if (auto authors = doc.find("author"); authors != doc.end() && authors->is_array()) {
        for (const auto& a : *authors) {
            if (!a.is_object()) continue;
            std::string name = a.value("literal", "");
            if (name.empty()) {
                const std::string given = a.value("given", "");
                const std::string family = a.value("family", "");
                name = given.empty() ? family : (family.empty() ? given : given + " " + family);
            }
            if (!name.empty()) m.authors.push_back(std::move(name));
        }
    }
    for (const char* key : {"issued", "published-print", "published-online"}) {
        auto date = doc.find(key);
        if (date == doc.end() || !date->is_object()) continue;
        auto parts = date->find("date-parts");
        if (parts != date->end() && parts->is_array() && !parts->empty() && parts->front().is_array() &&
            !parts->front().empty() && parts->front().front().is_number_integer()) {
            m.year = parts->front().front().get<int>();
            break;
        }
    }
    return m;
}

ExternalMetadata HttpDoiResolver::resolve(std::string_view doi) {
    // Split "scheme://host[:port]" from an optional path prefix.
    const auto scheme_end = base_url_.find("://");
    const auto path_start = base_url_.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin = base_url_.substr(0, path_start);
    const std::string prefix = path_start == std::string::npos ? "" : base_url_.substr(path_start);

    httplib::Client client(origin);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_follow_location(true);

    auto res = client.Get(prefix + "/" + std::string(doi), {{"Accept", "application/vnd.citationstyles.csl+json"}});
    if (!res) throw ResolverUnavailable("DOI service unreachable: " + httplib::to_string(res.error()));
    if (res->status == 404) throw DoiNotFound(std::string(doi));
    if (res->status != 200) throw ResolverUnavailable("DOI service answered HTTP " + std::to_string(res->status));
    return from_csl_json(doi, res->body);
}

ExternalMetadata resolve_doi(std::string_view doi, MetadataResolver& resolver) {
    validate_doi(doi);
    return resolver.resolve(doi);
}

Library::Library(PaperExists paper_exists, Clock clock) : paper_exists_(std::move(paper_exists)), clock_(std::move(clock)) {}

std::int64_t Library::now() const {
    if (clock_) return clock_();
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

const LibraryEntry& Library::add_paper(std::string_view paper_id) {
    if (auto it = entries_.find(paper_id); it != entries_.end()) return it->second;
    if (!paper_exists_ || !paper_exists_(paper_id)) throw UnknownPaper(std::string(paper_id));
    LibraryEntry e;
    e.entry_id = std::string(paper_id);
    e.paper_id = std::string(paper_id);
    e.added_at = now();
    return entries_.emplace(e.entry_id, std::move(e)).first->second;
}

const LibraryEntry& Library::add_external(const ExternalMetadata& metadata) {
    validate_doi(metadata.doi);
    const std::string id = external_entry_id(metadata.doi);
    if (auto it = entries_.find(id); it != entries_.end()) return it->second;
    LibraryEntry e;
    e.entry_id = id;
    e.external = metadata;
    e.added_at = now();
    return entries_.emplace(id, std::move(e)).first->second;
}

CitationMarker Library::cite(std::string_view entry_or_paper, std::string marker_id) {
    if (marker_id.empty()) throw Error("marker id must not be empty");
    if (markers_.find(marker_id) != markers_.end()) throw DuplicateMarker(marker_id);
    auto it = entries_.find(entry_or_paper);
    if (it == entries_.end()) {
        if (entry_or_paper.substr(0, 4) == "doi:") throw NotFound("no library entry '" + std::string(entry_or_paper) + "'");
        const LibraryEntry& added = add_paper(entry_or_paper);
        it = entries_.find(added.entry_id);
    }
    it->second.cite_keys.insert(marker_id);
    CitationMarker m{marker_id, it->second.entry_id};
    markers_.emplace(std::move(marker_id), m);
    return m;
}

CitationMarker Library::remove_marker(std::string_view marker_id) {
    auto it = markers_.find(marker_id);
    if (it == markers_.end()) throw NotFound("no citation marker '" + std::string(marker_id) + "'");
    CitationMarker m = it->second;
    markers_.erase(it);
    if (auto e = entries_.find(m.entry_id); e != entries_.end()) e->second.cite_keys.erase(m.marker_id);
    return m;
}

std::vector<LibraryEntry> Library::list(bool cited_only) const {
    std::vector<LibraryEntry> out;
    for (const auto& [_, e] : entries_) {
        if (!cited_only || e.cited()) out.push_back(e);
    }
    std::stable_sort(out.begin(), out.end(), [](const LibraryEntry& a, const LibraryEntry& b) {
        return a.added_at != b.added_at ? a.added_at < b.added_at : a.entry_id < b.entry_id;
    });
    return out;
}

const LibraryEntry* Library::find(std::string_view entry_id) const {
    auto it = entries_.find(entry_id);
    return it == entries_.end() ? nullptr : &it->second;
}

const CitationMarker* Library::find_marker(std::string_view marker_id) const {
    auto it = markers_.find(marker_id);
    return it == markers_.end() ? nullptr : &it->second;
}

RemovalReport Library::remove_entry(std::string_view entry_id) {
    auto it = entries_.find(entry_id);
    if (it == entries_.end()) throw NotFound("no library entry '" + std::string(entry_id) + "'");
    RemovalReport report;
    report.removed = std::move(it->second);
    entries_.erase(it);
    for (const auto& marker : report.removed.cite_keys) {
        markers_.erase(marker);
        report.dangling_markers.push_back(marker);
    }
    return report;
}

std::string Library::to_json() const {
    json entries = json::array();
    for (const auto& [_, e] : entries_) {
        json j = {{"entry_id", e.entry_id}, {"added_at", e.added_at}, {"cite_keys", e.cite_keys}};
        if (e.paper_id) j["paper_id"] = *e.paper_id;
        if (e.external) j["external"] = metadata_to_json(*e.external);
        entries.push_back(std::move(j));
    }
    json markers = json::array();
    for (const auto& [_, m] : markers_) markers.push_back({{"marker_id", m.marker_id}, {"entry_id", m.entry_id}});
    return json{{"version", 1}, {"entries", std::move(entries)}, {"markers", std::move(markers)}}.dump(2);
}

Library Library::from_json(std::string_view text, PaperExists paper_exists, Clock clock) {
    Library lib(std::move(paper_exists), std::move(clock));
    try {
        const json doc = json::parse(text);
        if (doc.at("version").get<int>() != 1) throw Error("unsupported library file version");
        for (const auto& j : doc.at("entries")) {
            LibraryEntry e;
            e.entry_id = j.at("entry_id").get<std::string>();
            e.added_at = j.at("added_at").get<std::int64_t>();
            if (j.contains("paper_id")) e.paper_id = j.at("paper_id").get<std::string>();
            if (j.contains("external")) e.external = metadata_from_json(j.at("external"));
            lib.entries_.emplace(e.entry_id, std::move(e));
        }
        for (const auto& j : doc.at("markers")) {
            CitationMarker m{j.at("marker_id").get<std::string>(), j.at("entry_id").get<std::string>()};
            auto e = lib.entries_.find(m.entry_id);
            if (e == lib.entries_.end()) throw Error("marker '" + m.marker_id + "' refers to a missing entry");
            e->second.cite_keys.insert(m.marker_id);
            lib.markers_.emplace(m.marker_id, std::move(m));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("bad library file: ") + e.what());
    }
    return lib;
}

void Library::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << to_json();
        if (!out) throw Error("cannot write library file");
    }
    std::filesystem::rename(tmp, path);
}

Library Library::load(const std::filesystem::path& path, PaperExists paper_exists, Clock clock) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Library(std::move(paper_exists), std::move(clock));
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str(), std::move(paper_exists), std::move(clock));
}

}  // namespace manuscriptor
