#include "bpi/numeric.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace bpi {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string &text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  const char *first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

}  // namespace bpi
