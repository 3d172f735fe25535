#pragma once

#include "manuscriptor/library.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

namespace manuscriptor {

struct ServiceConfig {
    /// Snapshot loaded by `load()` and `POST /api/admin/reload`.
    std::filesystem::path snapshot_dir;
    /// Static files served under `/`; empty disables.
    std::filesystem::path ui_dir;
    /// One `<user>.json` library file per `user` header value.
    std::filesystem::path library_dir = "library";
    /// DOI lookups for `POST /api/library {"doi": ...}`; null disables them.
    std::shared_ptr<MetadataResolver> resolver;
};

/// JSON API over an Engine and per-user libraries. Requests are served
/// concurrently; the snapshot is swapped atomically on reload and in-flight
/// requests finish against the one they started with.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Loads (or reloads) the configured snapshot. Throws on failure and keeps
    /// serving the previous snapshot, if any.
    void load();
    bool loaded() const;

    /// Binds to `host:port`; port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until `stop()`; call after `bind`.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace manuscriptor
