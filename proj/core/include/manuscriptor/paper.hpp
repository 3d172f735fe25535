#pragma once

#include <optional>
#include <string>
#include <vector>

namespace manuscriptor {

/// One corpus document. `year` is 0 when unknown, otherwise in [1500, 2100].
struct Paper {
    std::string id;
    std::string title;
    std::vector<std::string> authors;
    std::string journal;
    int year = 0;
    std::string abstract;
    std::vector<std::string> body;
    std::optional<std::string> doi;

    bool operator==(const Paper&) const = default;
};

/// Title, abstract and body joined with newlines: what the index and the
/// document embedding see.
std::string full_text(const Paper& paper);

/// Title and body only, used for the parent-retrieval evaluation so that the
/// abstract query does not leak into the document it should find.
std::string text_without_abstract(const Paper& paper);

}  // namespace manuscriptor
