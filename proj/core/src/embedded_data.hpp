#pragma once

#include <string_view>

// Data files compiled into the library (generated from core/data/ at configure time).
namespace manuscriptor::embedded {

extern const std::string_view kStopWords;
extern const std::string_view kAbbreviations;

}  // namespace manuscriptor::embedded
