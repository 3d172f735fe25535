#include "manuscriptor/service.hpp"

#include "manuscriptor/engine.hpp"
#include "manuscriptor/errors.hpp"
#include "manuscriptor/snapshot.hpp"

#include <httplib.h>
#include <json.hpp>

#include <map>
#include <mutex>
#include <regex>

namespace manuscriptor {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

struct ApiError {
    int status;
    std::string code;
    std::string message;
    json detail = nullptr;
};

ApiError bad_request(std::string message) { return {400, "BadRequest", std::move(message)}; }

json parse_body(const httplib::Request& req, bool required) {
    if (req.body.empty()) {
        if (required) throw bad_request("request body must be a JSON object");
        return json::object();
    }
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) throw bad_request("request body must be a JSON object");
    return body;
}

std::string string_field(const json& body, const char* key, bool required) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) {
        if (required) throw bad_request(std::string("missing field '") + key + "'");
        return {};
    }
    if (!it->is_string()) throw bad_request(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::optional<std::int64_t> int_field(const json& body, const char* key, std::int64_t minimum) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) throw bad_request(std::string("field '") + key + "' must be an integer");
    const auto v = it->get<std::int64_t>();
    if (v < minimum) {
        throw bad_request(std::string("field '") + key + "' must be at least " + std::to_string(minimum));
    }
    return v;
}

RankingSource parse_source(const json& body) {
    auto it = body.find("source");
    if (it == body.end() || !it->is_object()) throw bad_request("missing object field 'source'");
    const std::string kind = string_field(*it, "kind", true);
    if (kind == "text") return RankingSource::text(string_field(*it, "text", true));
    if (kind == "paper") return RankingSource::paper(string_field(*it, "id", true));
    throw bad_request("source kind must be \"text\" or \"paper\"");
}

json hit_to_json(const SearchHit& hit, std::size_t rank) {
    return {{"rank", rank},         {"paper_id", hit.paper_id}, {"distance", hit.distance},
            {"title", hit.title},   {"authors", hit.authors},   {"journal", hit.journal},
            {"year", hit.year},     {"abstract", hit.abstract}};
}

json paper_to_json(const Paper& p, const std::vector<Sentence>& sentences) {
    json table = json::array();
    for (const auto& s : sentences) {
        table.push_back({{"ordinal", s.ordinal}, {"start", s.span.begin}, {"end", s.span.end}, {"text", s.text}});
    }
    return {{"id", p.id},
            {"title", p.title},
            {"authors", p.authors},
            {"journal", p.journal},
            {"year", p.year},
            {"abstract", p.abstract},
            {"body", p.body},
            {"doi", p.doi ? json(*p.doi) : json(nullptr)},
            {"sentences", std::move(table)}};
}

bool valid_user(const std::string& user) {
    static const std::regex pattern("[A-Za-z0-9_-][A-Za-z0-9_.-]{0,63}");
    return std::regex_match(user, pattern);
}

}  // namespace

struct Service::Impl {
    struct UserLibrary {
        std::mutex mu;
        std::optional<Library> library;
    };

    explicit Impl(ServiceConfig c) : config(std::move(c)) {}

    ServiceConfig config;
    httplib::Server server;

    mutable std::mutex engine_mu;
    std::shared_ptr<const Engine> engine;

    std::mutex users_mu;
    std::map<std::string, std::unique_ptr<UserLibrary>> users;

    std::shared_ptr<const Engine> current() const {
        std::lock_guard lock(engine_mu);
        return engine;
    }

    std::shared_ptr<const Engine> require_engine() const {
        auto e = current();
        if (!e) throw ApiError{503, "Unavailable", "no snapshot loaded"};
        return e;
    }

    void load() {
        auto snapshot = std::make_shared<const Snapshot>(load_snapshot(config.snapshot_dir));
        auto fresh = std::make_shared<const Engine>(std::move(snapshot));
        std::lock_guard lock(engine_mu);
        engine = std::move(fresh);
    }

    json health_json(const Engine& e) const {
        return {{"status", "ok"},
                {"corpus_size", e.snapshot().size()},
                {"dim", e.snapshot().dim()},
                {"snapshot_hash", e.snapshot().hash()}};
    }

    Library::PaperExists paper_exists() {
        return [this](std::string_view id) {
            auto e = current();
            return e && e->snapshot().find(id).has_value();
        };
    }

    UserLibrary& user_library(const httplib::Request& req) {
        std::string user = req.get_header_value("user");
        if (user.empty()) user = "default";
        if (!valid_user(user)) throw bad_request("user must match [A-Za-z0-9_-][A-Za-z0-9_.-]{0,63}");
        std::lock_guard lock(users_mu);
        auto& slot = users[user];
        if (!slot) slot = std::make_unique<UserLibrary>();
        if (!slot->library) {
            try {
                slot->library = Library::load(library_path(user), paper_exists());
            } catch (const Error&) {
                throw ApiError{500, "Corrupt", "library of user '" + user + "' is unreadable"};
            }
        }
        return *slot;
    }

    std::filesystem::path library_path(const std::string& user) const {
        return config.library_dir / (user + ".json");
    }

    // Applies `change` to a copy, persists it, then publishes it.
    template <typename F>
    auto mutate(const httplib::Request& req, F&& change) {
        UserLibrary& u = user_library(req);
        std::lock_guard lock(u.mu);
        Library copy = *u.library;
        auto result = change(copy);
        std::string user = req.get_header_value("user");
        copy.save(library_path(user.empty() ? "default" : user));
        u.library = std::move(copy);
        return result;
    }

    json entry_json(const LibraryEntry& e) const {
        json j = {{"entry_id", e.entry_id},
                  {"paper_id", e.paper_id ? json(*e.paper_id) : json(nullptr)},
                  {"added_at", e.added_at},
                  {"cite_keys", e.cite_keys},
                  {"cited", e.cited()},
                  {"title", ""},
                  {"authors", json::array()},
                  {"journal", ""},
                  {"year", 0},
                  {"doi", nullptr}};
        if (e.external) {
            j["title"] = e.external->title;
            j["authors"] = e.external->authors;
            j["journal"] = e.external->journal;
            j["year"] = e.external->year;
            j["doi"] = e.external->doi;
        } else if (auto eng = current(); eng && e.paper_id) {
            if (auto ord = eng->snapshot().find(*e.paper_id)) {
                const Paper& p = eng->snapshot().papers()[*ord];
                j["title"] = p.title;
                j["authors"] = p.authors;
                j["journal"] = p.journal;
                j["year"] = p.year;
                if (p.doi) j["doi"] = *p.doi;
            }
        }
        return j;
    }

    static void send(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), kJson);
    }

    static void send_error(httplib::Response& res, const ApiError& e) {
        json err = {{"code", e.code}, {"message", e.message}};
        if (!e.detail.is_null()) err["detail"] = e.detail;
        send(res, e.status, json{{"error", std::move(err)}});
    }

    template <typename F>
    httplib::Server::Handler guarded(F handler) {
        return [this, handler](const httplib::Request& req, httplib::Response& res) {
            try {
                handler(req, res);
            } catch (const ApiError& e) {
                send_error(res, e);
            } catch (const SyntaxError& e) {
                send_error(res, {400, "BadFilter", e.what(), json{{"group", e.group()}}});
            } catch (const InvalidSource& e) {
                send_error(res, {400, "InvalidSource", e.what()});
            } catch (const UnknownPaper& e) {
                send_error(res, {404, "UnknownPaper", e.what(), json{{"id", e.id()}}});
            } catch (const DuplicateMarker& e) {
                send_error(res, {409, "Conflict", e.what()});
            } catch (const MalformedDoi& e) {
                send_error(res, {400, "BadRequest", e.what()});
            } catch (const DoiNotFound& e) {
                send_error(res, {404, "NotFound", e.what()});
            } catch (const NotFound& e) {
                send_error(res, {404, "NotFound", e.what()});
            } catch (const ResolverUnavailable&) {
                send_error(res, {503, "Unavailable", "DOI resolver unavailable"});
            } catch (const CorruptSnapshot& e) {
                send_error(res, {500, "Corrupt", e.what(), json{{"file", e.file()}}});
            } catch (const std::exception&) {
                send_error(res, {500, "Internal", "internal error"});
            }
        };
    }

    void routes();
};

void Service::Impl::routes() {
    server.set_payload_max_length(64u << 20);

    server.Get("/api/health", guarded([this](const httplib::Request&, httplib::Response& res) {
                   send(res, 200, health_json(*require_engine()));
               }));

    server.Post("/api/admin/reload", guarded([this](const httplib::Request&, httplib::Response& res) {
                    load();
                    send(res, 200, health_json(*require_engine()));
                }));

    server.Post("/api/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
                    const json body = parse_body(req, true);
                    const auto engine = require_engine();
                    const std::string filter = string_field(body, "filter", false);
                    const RankingSource source = parse_source(body);
                    SearchOptions options;
                    options.limit = static_cast<std::size_t>(
                        std::min<std::int64_t>(int_field(body, "limit", 1).value_or(kMaxResults), kMaxResults));
                    options.offset = static_cast<std::size_t>(
                        std::min<std::int64_t>(int_field(body, "offset", 0).value_or(0), kMaxResults));
                    if (source.kind() == RankingSource::Kind::Paper && !engine->snapshot().find(source.value())) {
                        throw UnknownPaper(source.value());
                    }
                    const SearchResult result = engine->search(filter, source, options);
                    json hits = json::array();
                    for (std::size_t i = 0; i < result.hits.size(); ++i) {
                        hits.push_back(hit_to_json(result.hits[i], options.offset + i + 1));
                    }
                    send(res, 200,
                         {{"hits", std::move(hits)},
                          {"candidates", result.candidates},
                          {"offset", options.offset},
                          {"limit", options.limit}});
                }));

    server.Get(R"(/api/papers/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const auto engine = require_engine();
                   const std::string id = req.matches[1];
                   auto ord = engine->snapshot().find(id);
                   if (!ord) throw ApiError{404, "NotFound", "no paper '" + id + "'"};
                   send(res, 200, paper_to_json(engine->snapshot().papers()[*ord], engine->snapshot().sentences()[*ord]));
               }));

    server.Post(R"(/api/papers/(.+)/highlight)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                    const auto engine = require_engine();
                    const std::string id = req.matches[1];
                    const json body = parse_body(req, true);
                    const RankingSource source = parse_source(body);
                    const auto k = int_field(body, "k", 1).value_or(kDefaultHighlightCount);
                    auto ord = engine->snapshot().find(id);
                    if (!ord) throw UnknownPaper(id);
                    if (source.kind() == RankingSource::Kind::Paper && !engine->snapshot().find(source.value())) {
                        throw UnknownPaper(source.value());
                    }
                    const HighlightResult result = engine->highlight(id, source, static_cast<std::size_t>(k));
                    const auto& table = engine->snapshot().sentences()[*ord];
                    json sentences = json::array();
                    for (const auto& s : result.sentences) {
                        sentences.push_back({{"ordinal", s.ordinal},
                                             {"start", s.span.begin},
                                             {"end", s.span.end},
                                             {"distance", s.distance},
                                             {"text", table[s.ordinal].text}});
                    }
                    send(res, 200, {{"paper_id", id}, {"sentences", std::move(sentences)}});
                }));

    server.Get("/api/library", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   bool cited_only = false;
                   if (req.has_param("cited_only")) {
                       const std::string v = req.get_param_value("cited_only");
                       if (v == "true" || v == "1") {
                           cited_only = true;
                       } else if (v != "false" && v != "0") {
                           throw bad_request("cited_only must be true or false");
                       }
                   }
                   UserLibrary& u = user_library(req);
                   std::vector<LibraryEntry> entries;
                   {
                       std::lock_guard lock(u.mu);
                       entries = u.library->list(cited_only);
                   }
                   json out = json::array();
                   for (const auto& e : entries) out.push_back(entry_json(e));
                   send(res, 200, {{"entries", std::move(out)}});
               }));

    server.Post("/api/library", guarded([this](const httplib::Request& req, httplib::Response& res) {
                    const json body = parse_body(req, true);
                    const std::string paper_id = string_field(body, "paper_id", false);
                    const std::string doi = string_field(body, "doi", false);
                    if (paper_id.empty() == doi.empty()) throw bad_request("give exactly one of 'paper_id' and 'doi'");

                    std::optional<ExternalMetadata> metadata;
                    if (!doi.empty()) {
                        validate_doi(doi);
                        if (!config.resolver) throw ApiError{503, "Unavailable", "DOI lookup is not configured"};
                        metadata = resolve_doi(doi, *config.resolver);
                        metadata->doi = doi;
                    }
                    auto [entry, created] = mutate(req, [&](Library& lib) {
                        const std::size_t before = lib.list(false).size();
                        const LibraryEntry& e = metadata ? lib.add_external(*metadata) : lib.add_paper(paper_id);
                        return std::pair{e, lib.list(false).size() > before};
                    });
                    send(res, created ? 201 : 200, entry_json(entry));
                }));

    server.Post(R"(/api/library/(.+)/cite)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                    const std::string entry = req.matches[1];
                    const json body = parse_body(req, true);
                    std::string marker = string_field(body, "marker_id", true);
                    if (marker.empty()) throw bad_request("marker_id must not be empty");
                    const CitationMarker m =
                        mutate(req, [&](Library& lib) { return lib.cite(entry, std::move(marker)); });
                    send(res, 201, {{"marker_id", m.marker_id}, {"entry_id", m.entry_id}});
                }));

    server.Delete(R"(/api/library/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                      const std::string entry = req.matches[1];
                      const RemovalReport report = mutate(req, [&](Library& lib) { return lib.remove_entry(entry); });
                      send(res, 200,
                           {{"removed", entry_json(report.removed)}, {"dangling_markers", report.dangling_markers}});
                  }));

    server.Delete(R"(/api/markers/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                      const std::string marker = req.matches[1];
                      const CitationMarker m = mutate(req, [&](Library& lib) { return lib.remove_marker(marker); });
                      send(res, 200, {{"marker_id", m.marker_id}, {"entry_id", m.entry_id}});
                  }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        if (res.status == 404) {
            send_error(res, {404, "NotFound", "no such endpoint"});
        } else if (res.status >= 400) {
            send_error(res, {res.status, res.status < 500 ? "BadRequest" : "Internal", httplib::status_message(res.status)});
        }
    });

    if (!config.ui_dir.empty() && !server.set_mount_point("/", config.ui_dir.string())) {
        throw Error("UI directory does not exist");
    }
}

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) { impl_->routes(); }

Service::~Service() { stop(); }

void Service::load() { impl_->load(); }

bool Service::loaded() const { return impl_->current() != nullptr; }

int Service::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw Error("cannot bind to " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind to " + host + ":" + std::to_string(port));
    return port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace manuscriptor
