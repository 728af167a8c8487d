#include "ljopt/radii.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ljopt/errors.hpp"
#include "ljopt/text.hpp"

namespace ljopt {

namespace {

// Generated at build time from data/vdw_radii.txt.
#include "radii_data.inc"

}  // namespace

std::string normalize_element(std::string_view element) {
  const std::string_view trimmed = trim(element);
  std::string out;
  out.reserve(trimmed.size());
  for (char c : trimmed)
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

const RadiiTable& RadiiTable::bondi() {
  static const RadiiTable table =
      RadiiTable::from_text(kVdwRadiiData, "vdw_radii.txt");
  return table;
}

RadiiTable RadiiTable::from_text(std::string_view text,
                                 std::string_view source) {
  const std::string src(source);
  RadiiTable table;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_comment(raw);
    if (line.empty()) continue;
    std::istringstream fields{std::string(line)};
    std::string symbol, radius_token, extra;
    if (!(fields >> symbol >> radius_token) || (fields >> extra))
      throw ParseError(src, line_no, "expected 'element radius'");
    double radius = 0.0;
    if (!parse_double(radius_token, radius) || !(radius > 0.0) ||
        !std::isfinite(radius))
      throw ParseError(src, line_no, "radius must be a positive number");
    const std::string key = normalize_element(symbol);
    if (key.empty() || key.size() > 2)
      throw ParseError(src, line_no, "element symbol must be 1-2 characters");
    if (!table.radii_.emplace(key, radius).second)
      throw ParseError(src, line_no, "duplicate element '" + key + "'");
  }
  return table;
}

RadiiTable RadiiTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open radii file");
  std::ostringstream contents;
  contents << in.rdbuf();
  return from_text(contents.str(), path);
}

RadiiTable RadiiTable::merged_with(const RadiiTable& overrides) const {
  RadiiTable merged = *this;
  for (const auto& [element, radius] : overrides.radii_)
    merged.radii_[element] = radius;
  return merged;
}

double RadiiTable::radius(std::string_view element) const {
  const std::string key = normalize_element(element);
  const auto it = radii_.find(key);
  if (it == radii_.end()) throw UnknownElementError(key);
  return it->second;
}

std::optional<double> RadiiTable::find(std::string_view element) const {
  const auto it = radii_.find(normalize_element(element));
  if (it == radii_.end()) return std::nullopt;
  return it->second;
}

bool RadiiTable::contains(std::string_view element) const {
  return radii_.count(normalize_element(element)) != 0;
}

}  // namespace ljopt
