#include "manuscriptor/stemmer.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace manuscriptor {
namespace {

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_double(std::string_view s) {
    static constexpr std::array<std::string_view, 9> kDoubles{"bb", "dd", "ff", "gg", "mm",
                                                              "nn", "pp", "rr", "tt"};
    return std::find(kDoubles.begin(), kDoubles.end(), s) != kDoubles.end();
}

bool is_valid_li(char c) {
    return std::string_view("cdeghkmnrt").find(c) != std::string_view::npos;
}

// Working state for one word: the buffer plus the R1/R2 region starts.
class Word {
public:
    explicit Word(std::string_view w) : s_(w) {}

    std::string& str() { return s_; }
    std::size_t size() const { return s_.size(); }
    std::size_t r1() const { return r1_; }
    std::size_t r2() const { return r2_; }

    bool ends_with(std::string_view suffix) const {
        return s_.size() >= suffix.size() &&
               std::string_view(s_).substr(s_.size() - suffix.size()) == suffix;
    }

    void replace_suffix(std::size_t suffix_len, std::string_view with) {
        s_.resize(s_.size() - suffix_len);
        s_.append(with);
    }

    bool has_vowel_before(std::size_t end) const {
        return std::any_of(s_.begin(), s_.begin() + static_cast<std::ptrdiff_t>(end), is_vowel);
    }

    // Short syllable ending at `end` (exclusive).
    bool short_syllable_at(std::size_t end) const {
        if (end >= 3) {
            char last = s_[end - 1];
            if (!is_vowel(last) && last != 'w' && last != 'x' && last != 'Y' &&
                is_vowel(s_[end - 2]) && !is_vowel(s_[end - 3])) {
                return true;
            }
        }
        if (end == 2 && is_vowel(s_[0]) && !is_vowel(s_[1])) return true;
        return end >= 4 && std::string_view(s_).substr(end - 4, 4) == "past";
    }

    void mark_regions() {
        const std::size_t n = s_.size();
        r1_ = n;
        r2_ = n;
        static constexpr std::array<std::string_view, 9> kPrefixes{
            "arsen", "commun", "emerg", "gener", "inter", "later", "organ", "past", "univers"};
        bool prefixed = false;
        for (auto p : kPrefixes) {
            if (std::string_view(s_).substr(0, p.size()) == p) {
                r1_ = p.size();
                prefixed = true;
                break;
            }
        }
        if (!prefixed) r1_ = region_after(0);
        r2_ = region_after(r1_);
    }

private:
    // Position after the first non-vowel that follows a vowel, scanning from `from`.
    std::size_t region_after(std::size_t from) const {
        const std::size_t n = s_.size();
        std::size_t i = from;
        while (i < n && !is_vowel(s_[i])) ++i;
        while (i < n && is_vowel(s_[i])) ++i;
        return i < n ? i + 1 : n;
    }

    std::string s_;
    std::size_t r1_ = 0;
    std::size_t r2_ = 0;
};

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

// Longest suffix among `rules` that ends the word, or nullptr.
template <std::size_t N>
const Rule* longest_match(const Word& w, const std::array<Rule, N>& rules) {
    const Rule* best = nullptr;
    for (const auto& r : rules) {
        if (w.ends_with(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
    }
    return best;
}

std::string_view exception1(std::string_view w) {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 15> kForms{{
        {"skis", "ski"},   {"skies", "sky"},  {"idly", "idl"},     {"gently", "gentl"},
        {"ugly", "ugli"},  {"early", "earli"}, {"only", "onli"},    {"singly", "singl"},
        {"sky", "sky"},    {"news", "news"},   {"howe", "howe"},    {"atlas", "atlas"},
        {"cosmos", "cosmos"}, {"bias", "bias"}, {"andes", "andes"},
    }};
    for (const auto& [from, to] : kForms) {
        if (w == from) return to;
    }
    return {};
}

void step0(Word& w) {
    for (std::string_view suffix : {"'s'", "'s", "'"}) {
        if (w.ends_with(suffix)) {
            w.replace_suffix(suffix.size(), "");
            return;
        }
    }
}

void step1a(Word& w) {
    if (w.ends_with("sses")) {
        w.replace_suffix(4, "ss");
    } else if (w.ends_with("ied") || w.ends_with("ies")) {
        w.replace_suffix(3, w.size() > 4 ? "i" : "ie");
    } else if (w.ends_with("us") || w.ends_with("ss")) {
        // unchanged
    } else if (w.ends_with("s")) {
        if (w.size() >= 2 && w.has_vowel_before(w.size() - 2)) w.replace_suffix(1, "");
    }
}

void step1b(Word& w) {
    static constexpr std::array<Rule, 6> kSuffixes{{
        {"eed", ""}, {"eedly", ""}, {"ed", ""}, {"edly", ""}, {"ing", ""}, {"ingly", ""},
    }};
    const Rule* m = longest_match(w, kSuffixes);
    if (!m) return;
    const std::size_t start = w.size() - m->suffix.size();
    const std::string_view stem = std::string_view(w.str()).substr(0, start);

    if (m->suffix == "eed" || m->suffix == "eedly") {
        if (start < w.r1()) return;
        if (stem == "succ" || stem == "proc" || stem == "exc") return;
        w.replace_suffix(m->suffix.size(), "ee");
        return;
    }
    if (m->suffix == "ing") {
        // dying -> die, but not eying or (vowel)ying
        if (stem.size() == 2 && stem[1] == 'y' && !is_vowel(stem[0])) {
            w.replace_suffix(4, "ie");
            return;
        }
        static constexpr std::array<std::string_view, 6> kKeep{"even", "cann", "inn",
                                                               "earr", "herr", "out"};
        if (std::find(kKeep.begin(), kKeep.end(), stem) != kKeep.end()) return;
    }
    if (!w.has_vowel_before(start)) return;
    w.replace_suffix(m->suffix.size(), "");

    const std::string& s = w.str();
    if (w.ends_with("at") || w.ends_with("bl") || w.ends_with("iz")) {
        w.str().push_back('e');
    } else if (s.size() >= 2 && is_double(std::string_view(s).substr(s.size() - 2))) {
        // add, err, off: a/e/o plus a double at the very start stay as they are
        if (s.size() == 3 && std::string_view("aeo").find(s[0]) != std::string_view::npos) return;
        w.str().pop_back();
    } else if (w.r1() == s.size() && w.short_syllable_at(s.size())) {
        w.str().push_back('e');
    }
}

void step1c(Word& w) {
    if (w.size() > 2 && (w.ends_with("y") || w.ends_with("Y")) && !is_vowel(w.str()[w.size() - 2])) {
        w.str().back() = 'i';
    }
}

void step2(Word& w) {
    static constexpr std::array<Rule, 25> kRules{{
        {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},   {"abli", "able"},
        {"entli", "ent"},   {"izer", "ize"},    {"ization", "ize"}, {"ational", "ate"},
        {"ation", "ate"},   {"ator", "ate"},    {"alism", "al"},    {"aliti", "al"},
        {"alli", "al"},     {"fulness", "ful"}, {"ousli", "ous"},   {"ousness", "ous"},
        {"iveness", "ive"}, {"iviti", "ive"},   {"biliti", "ble"},  {"bli", "ble"},
        {"ogi", "og"},      {"fulli", "ful"},   {"lessli", "less"}, {"li", ""},
        {"ogist", "og"},
    }};
    const Rule* m = longest_match(w, kRules);
    if (!m) return;
    const std::size_t start = w.size() - m->suffix.size();
    if (start < w.r1()) return;
    if (m->suffix == "ogi") {
        if (start == 0 || w.str()[start - 1] != 'l') return;
    } else if (m->suffix == "li") {
        if (start == 0 || !is_valid_li(w.str()[start - 1])) return;
    }
    w.replace_suffix(m->suffix.size(), m->replacement);
}

void step3(Word& w) {
    static constexpr std::array<Rule, 9> kRules{{
        {"tional", "tion"}, {"ational", "ate"}, {"alize", "al"}, {"icate", "ic"}, {"iciti", "ic"},
        {"ical", "ic"},     {"ful", ""},        {"ness", ""},    {"ative", ""},
    }};
    const Rule* m = longest_match(w, kRules);
    if (!m) return;
    const std::size_t start = w.size() - m->suffix.size();
    if (start < w.r1()) return;
    if (m->suffix == "ative" && start < w.r2()) return;
    w.replace_suffix(m->suffix.size(), m->replacement);
}

void step4(Word& w) {
    static constexpr std::array<Rule, 18> kRules{{
        {"al", ""},  {"ance", ""}, {"ence", ""}, {"er", ""},    {"ic", ""},   {"able", ""},
        {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""}, {"ent", ""},  {"ism", ""},
        {"ate", ""}, {"iti", ""},  {"ous", ""},  {"ive", ""},   {"ize", ""},  {"ion", ""},
    }};
    const Rule* m = longest_match(w, kRules);
    if (!m) return;
    const std::size_t start = w.size() - m->suffix.size();
    if (start < w.r2()) return;
    if (m->suffix == "ion") {
        if (start == 0 || (w.str()[start - 1] != 's' && w.str()[start - 1] != 't')) return;
    }
    w.replace_suffix(m->suffix.size(), "");
}

void step5(Word& w) {
    if (w.ends_with("e")) {
        const std::size_t start = w.size() - 1;
        if (start >= w.r2() || (start >= w.r1() && !w.short_syllable_at(start))) {
            w.replace_suffix(1, "");
        }
    } else if (w.ends_with("l")) {
        const std::size_t start = w.size() - 1;
        if (start >= w.r2() && start > 0 && w.str()[start - 1] == 'l') w.replace_suffix(1, "");
    }
}

}  // namespace

std::string stem_english(std::string_view word) {
    if (word.size() < 3) return std::string(word);
    if (auto e = exception1(word); !e.empty()) return std::string(e);

    Word w(word);
    std::string& s = w.str();
    if (!s.empty() && s.front() == '\'') s.erase(0, 1);
    if (!s.empty() && s.front() == 'y') s.front() = 'Y';
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == 'y' && is_vowel(s[i - 1])) s[i] = 'Y';
    }
    w.mark_regions();

    step0(w);
    step1a(w);
    step1b(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5(w);
    std::replace(s.begin(), s.end(), 'Y', 'y');
    return s;
}

std::string stem_to_fixed_point(std::string_view word) {
    std::string current(word);
    // Each pass never lengthens the word, so this settles quickly.
    for (int pass = 0; pass < 16; ++pass) {
        std::string next = stem_english(current);
        if (next == current) break;
        current = std::move(next);
    }
    return current;
}

}  // namespace manuscriptor
