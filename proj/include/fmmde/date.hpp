#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace fmmde {

/// Calendar month. Panels are monthly, so day-of-month is discarded on parse.
struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  friend auto operator<=>(const YearMonth&, const YearMonth&) = default;

  /// Months since year 0; consecutive months differ by exactly one.
  [[nodiscard]] int ordinal() const { return year * 12 + (month - 1); }
  [[nodiscard]] static YearMonth from_ordinal(int ordinal);
  [[nodiscard]] YearMonth plus_months(int k) const { return from_ordinal(ordinal() + k); }
  /// ISO 8601 reduced precision, "YYYY-MM".
  [[nodiscard]] std::string iso() const;
};

/// Accepts "M/D/YYYY", "YYYY-MM" and "YYYY-MM-DD". Throws InputError.
YearMonth parse_date(std::string_view text);

inline int months_between(YearMonth from, YearMonth to) { return to.ordinal() - from.ordinal(); }

}  // namespace fmmde
