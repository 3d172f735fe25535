#include "manuscriptor/stemmer.hpp"

#include <doctest.h>

#include <fstream>
#include <string>

using manuscriptor::stem_english;
using manuscriptor::stem_to_fixed_point;

TEST_SUITE("stemmer") {
    TEST_CASE("common inflections") {
        CHECK(stem_english("cancers") == "cancer");
        CHECK(stem_english("treated") == "treat");
        CHECK(stem_english("lungs") == "lung");
        CHECK(stem_english("running") == "run");
        CHECK(stem_english("generously") == "generous");
        CHECK(stem_english("happiness") == "happi");
    }

    TEST_CASE("exceptional forms") {
        CHECK(stem_english("skies") == "sky");
        CHECK(stem_english("news") == "news");
        CHECK(stem_english("atlas") == "atlas");
        CHECK(stem_english("generate") == "generat");
        CHECK(stem_english("communism") == "communism");
    }

    TEST_CASE("short and non-alphabetic words pass through") {
        CHECK(stem_english("") == "");
        CHECK(stem_english("a") == "a");
        CHECK(stem_english("is") == "is");
        CHECK(stem_english("2020") == "2020");
        CHECK(stem_english("w17") == "w17");
    }

    TEST_CASE("fixed point removes the non-idempotent corner cases") {
        CHECK(stem_english("abase") == "abas");
        CHECK(stem_english("abas") == "aba");
        CHECK(stem_to_fixed_point("abase") == "aba");
        CHECK(stem_to_fixed_point("aba") == "aba");
    }

    TEST_CASE("agreement with the bundled reference pairs") {
        std::ifstream in(std::string(MANUSCRIPTOR_SOURCE_DIR) + "/tests/data/snowball_english_pairs.tsv");
        REQUIRE(in);
        std::string line;
        int total = 0, agree = 0;
        while (std::getline(in, line)) {
            const auto tab = line.find('\t');
            REQUIRE(tab != std::string::npos);
            ++total;
            if (stem_english(line.substr(0, tab)) == line.substr(tab + 1)) ++agree;
        }
        CHECK(total == 1000);
        CHECK(agree == total);
    }
}
