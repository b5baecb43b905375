#include "mdgi/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mdgi/error.hpp"

namespace mdgi {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t begin = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > begin) out.push_back({line.substr(begin, i - begin), begin + 1});
  }
  return out;
}

std::optional<double> to_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  // from_chars rejects "nan"/"inf" spellings in some forms; accept the usual ones.
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "nan" || lower == "-nan") return std::nan("");
  if (lower == "inf" || lower == "infinity") return INFINITY;
  if (lower == "-inf" || lower == "-infinity") return -INFINITY;
  return std::nullopt;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

std::size_t to_count(double v, std::size_t line, std::string_view key) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
    throw ParseError(ParseError::Kind::kMalformedHeader, line, 0,
                     std::string(key) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

RawGrid read_esri_ascii(std::istream& in) {
  static const std::map<std::string, std::string> kAliases = {
      {"ncols", "ncols"},         {"nrows", "nrows"},         {"xllcorner", "xll"},
      {"xllcenter", "xll"},       {"yllcorner", "yll"},       {"yllcenter", "yll"},
      {"cellsize", "cellsize"},   {"nodata_value", "nodata"},
  };

  std::map<std::string, double> header;
  std::string line;
  std::size_t line_no = 0;
  bool have_data_line = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (to_number(tokens.front().text)) {
      have_data_line = true;
      break;
    }
    auto key = kAliases.find(lowercase(tokens.front().text));
    if (key == kAliases.end())
      throw ParseError(ParseError::Kind::kMalformedHeader, line_no, tokens.front().column,
                       "unknown header key '" + std::string(tokens.front().text) + "'");
    if (tokens.size() != 2)
      throw ParseError(ParseError::Kind::kMalformedHeader, line_no, 0,
                       "header line must be '<key> <value>'");
    auto value = to_number(tokens[1].text);
    if (!value || !std::isfinite(*value))
      throw ParseError(ParseError::Kind::kMalformedHeader, line_no, tokens[1].column,
                       "header value '" + std::string(tokens[1].text) + "' is not a number");
    if (!header.emplace(key->second, *value).second)
      throw ParseError(ParseError::Kind::kMalformedHeader, line_no, 0,
                       "duplicate header key '" + std::string(tokens.front().text) + "'");
  }
  for (const char* required : {"ncols", "nrows", "xll", "yll", "cellsize"}) {
    if (!header.count(required))
      throw ParseError(ParseError::Kind::kMalformedHeader, line_no, 0,
                       std::string("header is missing ") +
                           (std::string(required) == "xll"   ? "xllcorner"
                            : std::string(required) == "yll" ? "yllcorner"
                                                             : required));
  }
  if (!(header["cellsize"] > 0.0))
    throw ParseError(ParseError::Kind::kMalformedHeader, line_no, 0, "cellsize must be positive");

  RawGrid raw;
  raw.width = to_count(header["ncols"], line_no, "ncols");
  raw.height = to_count(header["nrows"], line_no, "nrows");
  const std::size_t expected = raw.width * raw.height;
  const std::optional<double> nodata =
      header.count("nodata") ? std::optional<double>(header["nodata"]) : std::nullopt;
  raw.values.reserve(expected);
  raw.mask.reserve(expected);

  auto consume = [&](const std::string& text) {
    for (const Token& tok : tokenize(text)) {
      if (raw.values.size() == expected)
        throw ParseError(ParseError::Kind::kCellCount, line_no, tok.column,
                         "more than " + std::to_string(expected) + " cell values");
      auto v = to_number(tok.text);
      if (!v)
        throw ParseError(ParseError::Kind::kNonNumeric, line_no, tok.column,
                         "non-numeric cell value '" + std::string(tok.text) + "'");
      const bool present = std::isfinite(*v) && !(nodata && *v == *nodata);
      raw.values.push_back(present ? *v : 0.0);
      raw.mask.push_back(present ? 1 : 0);
    }
  };
  if (have_data_line) {
    consume(line);
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(line);
      consume(line);
    }
  }
  if (raw.values.size() != expected)
    throw ParseError(ParseError::Kind::kCellCount, line_no, 0,
                     "expected " + std::to_string(expected) + " cell values, found " +
                         std::to_string(raw.values.size()));
  if (std::none_of(raw.mask.begin(), raw.mask.end(), [](std::uint8_t m) { return m != 0; }))
    throw ParseError(ParseError::Kind::kAllNoData, line_no, 0, "every cell is NODATA");
  return raw;
}

Dem parse_esri_ascii(std::istream& in, const std::optional<Quantization>& q) {
  return to_dem(read_esri_ascii(in), q);
}

void write_esri_ascii(std::ostream& out, const Dem& dem) {
  out << "ncols " << dem.width() << "\n"
      << "nrows " << dem.height() << "\n"
      << "xllcorner 0\n"
      << "yllcorner 0\n"
      << "cellsize 1\n"
      << "NODATA_value -9999\n";
  for (std::size_t r = 0; r < dem.height(); ++r) {
    for (std::size_t c = 0; c < dem.width(); ++c) {
      if (c) out << ' ';
      if (auto v = dem.at(r, c))
        out << *v;
      else
        out << "-9999";
    }
    out << '\n';
  }
}

RawGrid read_fixture_csv(std::istream& in) {
  RawGrid raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    std::size_t fields = 0;
    std::size_t begin = 0;
    while (true) {
      const std::size_t end = std::min(line.find(',', begin), line.size());
      std::string_view field(line.data() + begin, end - begin);
      while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front())))
        field.remove_prefix(1);
      while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back())))
        field.remove_suffix(1);
      if (field.empty()) {
        raw.values.push_back(0.0);
        raw.mask.push_back(0);
      } else {
        auto v = to_number(field);
        if (!v)
          throw ParseError(ParseError::Kind::kNonNumeric, line_no, begin + 1,
                           "non-numeric field '" + std::string(field) + "'");
        raw.values.push_back(*v);
        raw.mask.push_back(std::isfinite(*v) ? 1 : 0);
      }
      ++fields;
      if (end == line.size()) break;
      begin = end + 1;
    }
    if (raw.height == 0)
      raw.width = fields;
    else if (fields != raw.width)
      throw ParseError(ParseError::Kind::kCellCount, line_no, 0,
                       "expected " + std::to_string(raw.width) + " fields, found " +
                           std::to_string(fields));
    ++raw.height;
  }
  if (raw.height == 0)
    throw ParseError(ParseError::Kind::kCellCount, line_no, 0, "fixture has no rows");
  if (std::none_of(raw.mask.begin(), raw.mask.end(), [](std::uint8_t m) { return m != 0; }))
    throw ParseError(ParseError::Kind::kAllNoData, line_no, 0, "every cell is masked");
  return raw;
}

Dem parse_fixture_csv(std::istream& in, const std::optional<Quantization>& q) {
  return to_dem(read_fixture_csv(in), q);
}

void write_fixture_csv(std::ostream& out, const Dem& dem) {
  for (std::size_t r = 0; r < dem.height(); ++r) {
    for (std::size_t c = 0; c < dem.width(); ++c) {
      if (c) out << ',';
      if (auto v = dem.at(r, c)) out << *v;
    }
    out << '\n';
  }
}

Dem load_dem(const std::filesystem::path& path, const std::optional<Quantization>& q) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const std::string ext = lowercase(path.extension().string());
  if (ext == ".asc") return parse_esri_ascii(in, q);
  if (ext == ".csv") return parse_fixture_csv(in, q);
  throw Error("unsupported input extension '" + ext + "' for " + path.string());
}

}  // namespace mdgi
