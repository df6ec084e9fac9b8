#include "fmmde/date.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

#include "fmmde/error.hpp"

namespace fmmde {

namespace {

int parse_int(std::string_view field, std::string_view whole) {
  int value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw InputError("malformed date '" + std::string(whole) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

YearMonth YearMonth::from_ordinal(int ordinal) {
  int year = ordinal / 12;
  int month = ordinal % 12;
  if (month < 0) {
    month += 12;
    --year;
  }
  return YearMonth{year, month + 1};
}

std::string YearMonth::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

YearMonth parse_date(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '"')) text.remove_suffix(1);

  YearMonth ym;
  int day = 1;
  if (text.find('/') != std::string_view::npos) {
    auto parts = split(text, '/');
    if (parts.size() != 3) throw InputError("malformed date '" + std::string(text) + "'");
    ym.month = parse_int(parts[0], text);
    day = parse_int(parts[1], text);
    ym.year = parse_int(parts[2], text);
  } else {
    auto parts = split(text, '-');
    if (parts.size() != 2 && parts.size() != 3) {
      throw InputError("malformed date '" + std::string(text) + "'");
    }
    ym.year = parse_int(parts[0], text);
    ym.month = parse_int(parts[1], text);
    if (parts.size() == 3) day = parse_int(parts[2], text);
  }
  if (ym.month < 1 || ym.month > 12 || day < 1 || day > 31 || ym.year < 1000 || ym.year > 9999) {
    throw InputError("malformed date '" + std::string(text) + "'");
  }
  return ym;
}

}  // namespace fmmde
