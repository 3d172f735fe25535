#include "manuscriptor/boolquery.hpp"

#include "manuscriptor/errors.hpp"
#include "manuscriptor/textproc.hpp"

#include <algorithm>

namespace manuscriptor {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

Clause parse_group(std::string_view group) {
    Clause clause;
    std::string_view rest = group;
    if (rest.front() == '!') {
        clause.negated = true;
        rest.remove_prefix(1);
        if (rest.empty()) throw SyntaxError(std::string(group), "negation without a term");
    }
    if (rest.find('!') != std::string_view::npos) {
        throw SyntaxError(std::string(group), "'!' may only start a group");
    }

    std::size_t pos = 0;
    while (true) {
        const std::size_t bar = rest.find('|', pos);
        const std::string_view alt =
            rest.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
        if (alt.empty()) throw SyntaxError(std::string(group), "empty alternative");

        auto tokens = tokenize(alt, Pipeline::Index);
        if (tokens.size() > 1) {
            throw SyntaxError(std::string(group),
                              "'" + std::string(alt) + "' is more than one term; phrases are not supported");
        }
        if (tokens.size() == 1 &&
            std::find(clause.alternatives.begin(), clause.alternatives.end(), tokens[0]) ==
                clause.alternatives.end()) {
            clause.alternatives.push_back(std::move(tokens[0]));
        }
        if (bar == std::string_view::npos) break;
        pos = bar + 1;
    }
    if (clause.alternatives.empty()) {
        throw SyntaxError(std::string(group), "no searchable term (stop words only?)");
    }
    return clause;
}

}  // namespace

FilterQuery parse_filter(std::string_view raw) {
    FilterQuery q;
    std::size_t i = 0;
    while (i < raw.size()) {
        while (i < raw.size() && is_space(raw[i])) ++i;
        const std::size_t start = i;
        while (i < raw.size() && !is_space(raw[i])) ++i;
        if (i > start) q.clauses.push_back(parse_group(raw.substr(start, i - start)));
    }
    return q;
}

std::set<std::string> query_terms(const FilterQuery& q) {
    std::set<std::string> terms;
    for (const auto& c : q.clauses) terms.insert(c.alternatives.begin(), c.alternatives.end());
    return terms;
}

std::string to_string(const FilterQuery& q) {
    std::string out;
    for (const auto& c : q.clauses) {
        if (!out.empty()) out.push_back(' ');
        if (c.negated) out.push_back('!');
        for (std::size_t i = 0; i < c.alternatives.size(); ++i) {
            if (i) out.push_back('|');
            out += c.alternatives[i];
        }
    }
    return out;
}

}  // namespace manuscriptor
