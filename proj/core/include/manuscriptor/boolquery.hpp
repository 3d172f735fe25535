#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace manuscriptor {

/// One AND-operand of a filter: an OR over normalized unigrams, optionally negated.
struct Clause {
    bool negated = false;
    std::vector<std::string> alternatives;

    bool operator==(const Clause&) const = default;
};

/// Conjunction of clauses. A document matches iff every plain clause has at
/// least one alternative present and no negated clause has any. No clauses
/// means match-all.
struct FilterQuery {
    std::vector<Clause> clauses;

    bool match_all() const { return clauses.empty(); }
    bool operator==(const FilterQuery&) const = default;
};

/// Parses `term1 term2|term3 !term4`: whitespace separates AND-groups, `|`
/// separates alternatives inside a group, and a leading `!` negates the whole
/// group. Each alternative must normalize (index pipeline) to exactly one
/// unigram; alternatives that normalize to nothing are dropped unless the
/// whole group would be empty. Throws SyntaxError naming the group otherwise.
FilterQuery parse_filter(std::string_view raw);

/// Union of all alternatives across clauses.
std::set<std::string> query_terms(const FilterQuery& q);

/// Canonical text form; `parse_filter(to_string(q)) == q`.
std::string to_string(const FilterQuery& q);

}  // namespace manuscriptor
