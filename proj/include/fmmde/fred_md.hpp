#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace fmmde::fred_md {

struct SeriesInfo {
  int id;
  std::string_view mnemonic;
  std::string_view description;
  int group;
  int tcode;
};

/// The 123-series FRED-MD list with group and transformation code.
std::span<const SeriesInfo> builtin_series();

std::optional<SeriesInfo> find_series(std::string_view mnemonic);

inline constexpr std::array<std::string_view, 8> kGroupNames = {
    "Output & Income",
    "Labor Market",
    "Housing",
    "Consumption, Orders & Inventories",
    "Money & Credit",
    "Interest & Exchange Rates",
    "Prices",
    "Stock Market",
};

/// Name of group 1..8; "Ungrouped" otherwise.
std::string_view group_name(int group);

/// Text legend of transformation codes 1..7.
std::string_view tcode_legend();

}  // namespace fmmde::fred_md
