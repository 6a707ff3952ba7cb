#include "accf/timestamp.hpp"

#include <charconv>
#include <stdexcept>
#include <string>


namespace accf {

std::string to_string(HlcTimestamp ts) {
  if (ts.is_infinite()) return "inf";
  return std::to_string(ts.l) + "." + std::to_string(ts.c);
}

namespace {

std::int64_t parse_component(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value < 0) {
    throw std::invalid_argument("malformed timestamp '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

HlcTimestamp parse_timestamp(std::string_view text) {
  if (text == "inf") return HlcTimestamp::infinity();
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
  }
  return {parse_component(text.substr(0, dot), text),
          parse_component(text.substr(dot + 1), text)};
}

std::ostream& operator<<(std::ostream& os, HlcTimestamp ts) { return os << to_string(ts); }

}  // namespace accf
