#include <boost/tokenizer.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>

#include "mdgi/error.hpp"
#include "mdgi_cli/cli.hpp"

namespace mdgi::cli {

std::string format_probability(std::uint64_t loss, std::uint64_t total) {
  if (loss == 0) return "0";
  return std::to_string(loss) + "/" + std::to_string(total);
}

std::string format_real(double value) {
  if (value == 0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_spectrum_csv(std::ostream& out, const PatternSpectrum& ps) {
  out << "n,volume,p_n\n";
  for (std::size_t i = 0; i < ps.size(); ++i)
    out << ps.first_scale + i << ',' << ps.volumes[i] << ','
        << format_probability(ps.loss(i), ps.total_volume()) << '\n';
}

std::string features_header(bool with_label) {
  std::string h = "id";
  for (auto se : kAllNamedSes) h += ",GI_" + std::string(to_string(se));
  for (int i = 1; i <= 4; ++i) h += ",Z" + std::to_string(i);
  for (std::size_t k = 0; k < kFeatureCount; ++k) h += ",X" + std::to_string(k);
  h += ",degenerate,high,low";
  if (with_label) h += ",label";
  return h;
}

std::string features_row(const FeatureRecord& r, bool with_label) {
  std::string line = csv_field(r.id);
  for (double g : r.gi) line += "," + format_real(g);
  for (double z : r.z) line += "," + format_real(z);
  for (double x : r.x) line += "," + format_real(x);
  line += r.degenerate ? ",1" : ",0";
  if (r.degenerate) {
    line += ",,";
  } else {
    const auto ext = high_low_direction(r.z);
    line += "," + std::string(to_string(ext.high)) + "," + std::string(to_string(ext.low));
  }
  if (with_label) line += "," + csv_field(r.label.value_or(""));
  return line;
}

namespace {

using Fields = std::vector<std::string>;

Fields split_csv(const std::string& line, std::size_t line_no) {
  try {
    boost::tokenizer<boost::escaped_list_separator<char>> tok(
        line, boost::escaped_list_separator<char>('\0', ',', '"'));
    return Fields(tok.begin(), tok.end());
  } catch (const boost::escaped_list_error& e) {
    throw ParseError(ParseError::Kind::kNonNumeric, line_no, 0, e.what());
  }
}

bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

double parse_real(const std::string& s, std::size_t line, std::size_t col) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v))
    throw ParseError(ParseError::Kind::kNonNumeric, line, col, "not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<FeatureRecord> read_features_csv(std::istream& in, const std::string& label_column,
                                             bool require_label) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no))
    throw ParseError(ParseError::Kind::kMalformedHeader, 1, 0, "empty features file");
  const Fields header = split_csv(line, line_no);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(header[i], i);

  auto need = [&](const std::string& name) {
    auto it = col.find(name);
    if (it == col.end())
      throw ParseError(ParseError::Kind::kMalformedHeader, line_no, 0, "missing column " + name);
    return it->second;
  };
  const std::size_t id_col = need("id");
  std::array<std::size_t, kFeatureCount> x_col{};
  for (std::size_t k = 0; k < kFeatureCount; ++k) x_col[k] = need("X" + std::to_string(k));
  std::optional<std::size_t> label_col;
  if (!label_column.empty() && col.count(label_column)) label_col = col[label_column];
  if (require_label && !label_col) need(label_column);

  std::vector<FeatureRecord> records;
  while (next_line(in, line, line_no)) {
    const Fields f = split_csv(line, line_no);
    if (f.size() != header.size())
      throw ParseError(ParseError::Kind::kCellCount, line_no, 0,
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(f.size()));
    FeatureRecord r;
    r.id = f[id_col];
    for (std::size_t k = 0; k < kFeatureCount; ++k)
      r.x[k] = parse_real(f[x_col[k]], line_no, x_col[k] + 1);
    for (std::size_t i = 0; i < 5; ++i)
      if (auto it = col.find("GI_" + std::string(to_string(kAllNamedSes[i]))); it != col.end())
        r.gi[i] = parse_real(f[it->second], line_no, it->second + 1);
    if (label_col) {
      if (f[*label_col].empty() && require_label)
        throw ParseError(ParseError::Kind::kBadValue, line_no, *label_col + 1, "empty label");
      if (!f[*label_col].empty()) r.label = f[*label_col];
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<std::pair<std::string, std::string>> read_labels_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no))
    throw ParseError(ParseError::Kind::kMalformedHeader, 1, 0, "empty labels file");
  std::vector<std::pair<std::string, std::string>> out;
  while (next_line(in, line, line_no)) {
    const Fields f = split_csv(line, line_no);
    if (f.size() != 2)
      throw ParseError(ParseError::Kind::kCellCount, line_no, 0, "expected id,label");
    out.emplace_back(f[0], f[1]);
  }
  return out;
}

}  // namespace mdgi::cli
