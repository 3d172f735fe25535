#pragma once

#include "manuscriptor/paper.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace manuscriptor {

/// Reads line-delimited JSON records, one paper per line, keeping file order.
///
/// Recognized fields: `id` (required, nonempty string), `title`, `authors`
/// (array of strings), `journal`, `year` (integer, 0 or 1500..2100),
/// `abstract`, `body` (array of paragraph strings) and `doi`. Unknown fields
/// are ignored and blank lines skipped. Throws ParseError with the 1-based
/// line number, or DuplicateIdError.
std::vector<Paper> ingest(std::istream& in);
std::vector<Paper> ingest_file(const std::string& path);

/// One-line JSON record with keys in byte order; the inverse of `ingest`.
std::string to_json_line(const Paper& paper);

}  // namespace manuscriptor
