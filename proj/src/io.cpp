#include "evcop/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "evcop/error.hpp"

namespace evcop::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool try_parse_row(std::string_view line, std::vector<double>& row) {
  row.clear();
  for (auto field : split(line, ',')) {
    double x = 0.0;
    const auto* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, x);
    if (field.empty() || res.ec != std::errc() || res.ptr != end) return false;
    row.push_back(x);
  }
  return true;
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

// prefix1,...,prefixp[,last]
std::string header(std::string_view prefix, int p, std::string_view last = {}) {
  std::string h;
  for (int j = 1; j <= p; ++j) h += (j > 1 ? "," : "") + std::string(prefix) + std::to_string(j);
  if (!last.empty()) h += "," + std::string(last);
  return h;
}

void write_point(std::ostream& out, const SimplexPoint& v) {
  for (std::size_t j = 0; j < v.dim(); ++j) out << format_double(v[j]) << ',';
}

// Numeric rows of a CSV with an optional header; `meta` collects '#' lines.
std::vector<std::vector<double>> read_rows(std::istream& in, Metadata* meta, bool allow_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> row;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) {
      const auto t = trim(line);
      if (meta && !t.empty() && t.front() == '#') {
        for (auto& [k, v] : parse_metadata_line(t)) (*meta)[k] = v;
      }
      continue;
    }
    if (!try_parse_row(line, row)) {
      if (first && allow_header) {
        first = false;
        continue;
      }
      throw IoError("line " + std::to_string(lineno) + ": not a row of numbers");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) +
                    " columns, found " + std::to_string(row.size()));
    rows.push_back(row);
  }
  return rows;
}

int metadata_int(const Metadata& meta, const std::string& key) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw IoError("missing metadata key '" + key + "'");
  return static_cast<int>(parse_double(it->second));
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double x = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  return x;
}

Metadata parse_metadata_line(std::string_view line) {
  Metadata meta;
  line = trim(line);
  if (!line.empty() && line.front() == '#') line.remove_prefix(1);
  for (auto token : split(trim(line), ' ')) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) continue;
    meta.emplace(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
  }
  return meta;
}

DataMatrix parse_data_csv(std::istream& in) {
  const auto rows = read_rows(in, nullptr, /*allow_header=*/true);
  if (rows.empty()) throw IoError("data CSV has no rows");
  const std::size_t p = rows.front().size();
  std::vector<double> x;
  x.reserve(rows.size() * p);
  for (const auto& r : rows) x.insert(x.end(), r.begin(), r.end());
  return DataMatrix(rows.size(), p, std::move(x));
}

DataMatrix read_data_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_data_csv(in);
}

void write_data_csv(std::ostream& out, const DataMatrix& data) {
  out << header("x", static_cast<int>(data.cols())) << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) out << (j ? "," : "") << format_double(data(i, j));
    out << '\n';
  }
}

void write_grid_csv(std::ostream& out, const AtomGrid& grid) {
  out << "# grid p=" << grid.p() << " m=" << grid.m() << '\n';
  out << header("v", grid.p()) << '\n';
  for (const auto& v : grid.points()) {
    for (std::size_t j = 0; j < v.dim(); ++j) out << (j ? "," : "") << format_double(v[j]);
    out << '\n';
  }
}

void write_rule_csv(std::ostream& out, const QuadratureRule& rule) {
  out << "# rule p=" << rule.p << " N=" << rule.subdivisions << '\n';
  out << header("w", rule.p, "weight") << '\n';
  for (std::size_t k = 0; k < rule.size(); ++k) {
    write_point(out, rule.nodes[k]);
    out << format_double(rule.weights[k]) << '\n';
  }
}

void write_surface_csv(std::ostream& out, const DependenceSurface& surface, const Metadata& extra) {
  out << "# surface p=" << surface.p() << " N=" << surface.rule->subdivisions;
  for (const auto& [k, v] : extra) out << ' ' << k << '=' << v;
  out << '\n' << header("w", surface.p(), "value") << '\n';
  for (std::size_t k = 0; k < surface.size(); ++k) {
    write_point(out, surface.rule->nodes[k]);
    out << format_double(surface.values[k]) << '\n';
  }
}

DependenceSurface parse_surface_csv(std::istream& in, Metadata* meta_out) {
  Metadata meta;
  const auto rows = read_rows(in, &meta, /*allow_header=*/true);
  const int p = metadata_int(meta, "p");
  const int n = metadata_int(meta, "N");
  auto rule = std::make_shared<const QuadratureRule>(midpoint_rule(p, n));
  if (rows.size() != rule->size())
    throw IoError("surface has " + std::to_string(rows.size()) + " rows, rule p=" + std::to_string(p) +
                  " N=" + std::to_string(n) + " has " + std::to_string(rule->size()) + " nodes");
  std::vector<double> values(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != static_cast<std::size_t>(p + 1)) throw IoError("surface rows need p + 1 columns");
    for (int j = 0; j < p; ++j)
      if (std::abs(rows[k][static_cast<std::size_t>(j)] - rule->nodes[k][static_cast<std::size_t>(j)]) > 1e-9)
        throw IoError("surface row " + std::to_string(k + 1) + " is not at the expected quadrature node");
    values[k] = rows[k][static_cast<std::size_t>(p)];
  }
  if (meta_out) *meta_out = meta;
  return DependenceSurface(std::move(rule), std::move(values));
}

DependenceSurface read_surface_csv(const std::string& path, Metadata* meta) {
  auto in = open_input(path);
  return parse_surface_csv(in, meta);
}

nlohmann::json surface_to_json(const DependenceSurface& surface, const nlohmann::json& metadata) {
  nlohmann::json j;
  j["metadata"] = metadata;
  j["p"] = surface.p();
  j["N"] = surface.rule->subdivisions;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (std::size_t k = 0; k < surface.size(); ++k) {
    const auto c = surface.rule->nodes[k].coords();
    nodes.push_back({{"w", std::vector<double>(c.begin(), c.end())}, {"value", surface.values[k]}});
  }
  return j;
}

void write_measure_csv(std::ostream& out, const SpectralMeasure& h) {
  out << header("v", h.p(), "mass") << '\n';
  for (const auto& a : h.atoms()) {
    write_point(out, a.v);
    out << format_double(a.mass) << '\n';
  }
}

SpectralMeasure parse_measure_csv(std::istream& in) {
  const auto rows = read_rows(in, nullptr, /*allow_header=*/true);
  if (rows.empty()) throw IoError("measure CSV has no atoms");
  const std::size_t cols = rows.front().size();
  if (cols < 3) throw IoError("measure CSV needs p >= 2 coordinate columns plus mass");
  std::vector<Atom> atoms;
  for (const auto& r : rows)
    atoms.push_back({SimplexPoint(std::vector<double>(r.begin(), r.end() - 1)), r.back()});
  return SpectralMeasure(static_cast<int>(cols - 1), std::move(atoms));
}

nlohmann::json measure_to_json(const SpectralMeasure& h) {
  nlohmann::json j;
  j["p"] = h.p();
  auto& atoms = j["atoms"] = nlohmann::json::array();
  for (const auto& a : h.atoms()) {
    const auto c = a.v.coords();
    atoms.push_back({{"v", std::vector<double>(c.begin(), c.end())}, {"h", a.mass}});
  }
  return j;
}

SpectralMeasure measure_from_json(const nlohmann::json& j) {
  try {
    const int p = j.at("p").get<int>();
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      auto v = a.at("v").get<std::vector<double>>();
      if (v.size() != static_cast<std::size_t>(p)) throw IoError("atom coordinate count does not match p");
      atoms.push_back({SimplexPoint(std::move(v)), a.at("h").get<double>()});
    }
    return SpectralMeasure(p, std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed measure JSON: ") + e.what());
  }
}

SpectralMeasure read_measure(const std::string& path) {
  auto in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = (path.size() >= 5 && path.substr(path.size() - 5) == ".json") ||
                    (first != std::string::npos && text[first] == '{');
  if (json) {
    try {
      return measure_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError(std::string("cannot parse measure JSON: ") + e.what());
    }
  }
  std::istringstream s(text);
  return parse_measure_csv(s);
}

}  // namespace evcop::io
