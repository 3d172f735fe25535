#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace manuscriptor {

/// Base of every error the library reports for bad input or state.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed filter expression; `group()` is the offending whitespace-separated group.
class SyntaxError : public Error {
public:
    SyntaxError(std::string group, const std::string& reason)
        : Error("bad filter group '" + group + "': " + reason), group_(std::move(group)) {}
    const std::string& group() const { return group_; }

private:
    std::string group_;
};

class DuplicateIdError : public Error {
public:
    explicit DuplicateIdError(std::string id)
        : Error("duplicate paper id '" + id + "'"), id_(std::move(id)) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

/// Bad vector file or binary section. `line()` is 1-based, 0 when not line-oriented.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Bad corpus record.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class InvalidEmbedding : public Error {
public:
    using Error::Error;
};

/// Ranking source that cannot be embedded (unknown paper, all-OOV text).
class InvalidSource : public Error {
public:
    using Error::Error;
};

class UnknownPaper : public Error {
public:
    explicit UnknownPaper(std::string id) : Error("unknown paper '" + id + "'"), id_(std::move(id)) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

/// Snapshot integrity failure; `file()` is the file name relative to the snapshot directory.
class CorruptSnapshot : public Error {
public:
    CorruptSnapshot(std::string file, const std::string& reason)
        : Error("corrupt snapshot file '" + file + "': " + reason), file_(std::move(file)) {}
    const std::string& file() const { return file_; }

private:
    std::string file_;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class DuplicateMarker : public Error {
public:
    explicit DuplicateMarker(const std::string& id) : Error("citation marker '" + id + "' already exists") {}
};

class MalformedDoi : public Error {
public:
    explicit MalformedDoi(const std::string& doi) : Error("malformed DOI '" + doi + "'") {}
};

class DoiNotFound : public Error {
public:
    explicit DoiNotFound(const std::string& doi) : Error("DOI '" + doi + "' not found") {}
};

class ResolverUnavailable : public Error {
public:
    using Error::Error;
};

class InsufficientCorpus : public Error {
public:
    using Error::Error;
};

}  // namespace manuscriptor
