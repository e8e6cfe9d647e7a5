#include <charconv>
#include <cmath>
#include <stdexcept>

#include "dephaseprobe/cli.hpp"

namespace dephaseprobe::cli {

namespace {

template <typename T>
T parse_field(const std::string& text, const char* what) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument(std::string("range: bad ") + what + " '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<double> Range::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  const double last = static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / last;
    if (i == count - 1) {
      out[static_cast<std::size_t>(i)] = stop;
    } else if (logarithmic) {
      out[static_cast<std::size_t>(i)] = std::exp(std::log(start) + t * (std::log(stop) - std::log(start)));
    } else {
      out[static_cast<std::size_t>(i)] = start + t * (stop - start);
    }
  }
  return out;
}

std::string Range::to_string() const {
  return std::string(logarithmic ? "log:" : "") + format_number(start) + ":" + format_number(stop) +
         ":" + std::to_string(count);
}

Range parse_range(const std::string& text) {
  std::string body = text;
  Range range;
  if (body.rfind("log:", 0) == 0) {
    range.logarithmic = true;
    body = body.substr(4);
  }
  const auto first = body.find(':');
  const auto second = first == std::string::npos ? std::string::npos : body.find(':', first + 1);
  if (second == std::string::npos || body.find(':', second + 1) != std::string::npos) {
    throw std::invalid_argument("range: expected start:stop:count, got '" + text + "'");
  }
  range.start = parse_field<double>(body.substr(0, first), "start");
  range.stop = parse_field<double>(body.substr(first + 1, second - first - 1), "stop");
  range.count = parse_field<int>(body.substr(second + 1), "count");
  if (range.count < 2) throw std::invalid_argument("range: count must be >= 2");
  if (!(range.stop > range.start)) throw std::invalid_argument("range: stop must exceed start");
  if (range.logarithmic && !(range.start > 0.0)) {
    throw std::invalid_argument("range: log spacing needs start > 0");
  }
  return range;
}

}  // namespace dephaseprobe::cli
