#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <utility>

namespace muxstat {

/// Error thrown by every module. `category` is a short machine-parsable
/// tag ("sample-size", "parameter-domain", "format", ...); the CLI prints
/// failures as "error: <category>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& detail)
      : std::runtime_error("error: " + category + ": " + detail),
        category_(std::move(category)),
        detail_(detail) {}

  const std::string& category() const noexcept { return category_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string category_;
  std::string detail_;
};

/// Shortest decimal form that round-trips; keeps CSV/JSON/SVG output
/// byte-stable across runs.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace muxstat
