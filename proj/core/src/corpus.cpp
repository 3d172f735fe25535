#include "manuscriptor/corpus.hpp"

#include "manuscriptor/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <unordered_set>

namespace manuscriptor {
namespace {

using nlohmann::json;

std::string string_field(const json& rec, const char* key, std::size_t line) {
    auto it = rec.find(key);
    if (it == rec.end() || it->is_null()) return {};
    if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string", line);
    return it->get<std::string>();
}

std::vector<std::string> string_array(const json& rec, const char* key, std::size_t line) {
    auto it = rec.find(key);
    if (it == rec.end() || it->is_null()) return {};
    if (!it->is_array()) throw ParseError(std::string("field '") + key + "' must be an array of strings", line);
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be an array of strings", line);
        out.push_back(v.get<std::string>());
    }
    return out;
}

Paper parse_record(std::string_view text, std::size_t line) {
    json rec;
    try {
        rec = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), line);
    }
    if (!rec.is_object()) throw ParseError("record must be a JSON object", line);

    Paper p;
    auto id = rec.find("id");
    if (id == rec.end() || !id->is_string() || id->get<std::string>().empty()) {
        throw ParseError("missing or empty 'id'", line);
    }
    p.id = id->get<std::string>();
    p.title = string_field(rec, "title", line);
    p.authors = string_array(rec, "authors", line);
    p.journal = string_field(rec, "journal", line);
    p.abstract = string_field(rec, "abstract", line);
    p.body = string_array(rec, "body", line);

    if (auto y = rec.find("year"); y != rec.end() && !y->is_null()) {
        if (!y->is_number_integer()) throw ParseError("field 'year' must be an integer", line);
        const auto year = y->get<long long>();
        if (year != 0 && (year < 1500 || year > 2100)) {
            throw ParseError("year " + std::to_string(year) + " outside 1500..2100", line);
        }
        p.year = static_cast<int>(year);
    }
    if (auto d = rec.find("doi"); d != rec.end() && !d->is_null()) {
        if (!d->is_string()) throw ParseError("field 'doi' must be a string", line);
        p.doi = d->get<std::string>();
    }
    return p;
}

}  // namespace

std::vector<Paper> ingest(std::istream& in) {
    std::vector<Paper> papers;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Paper p = parse_record(line, line_no);
        if (!ids.insert(p.id).second) throw DuplicateIdError(p.id);
        papers.push_back(std::move(p));
    }
    return papers;
}

std::vector<Paper> ingest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file " + path);
    return ingest(in);
}

std::string to_json_line(const Paper& p) {
    json rec = {
        {"id", p.id},           {"title", p.title},       {"authors", p.authors}, {"journal", p.journal},
        {"year", p.year},       {"abstract", p.abstract}, {"body", p.body},
    };
    if (p.doi) rec["doi"] = *p.doi;
    return rec.dump();
}

}  // namespace manuscriptor
