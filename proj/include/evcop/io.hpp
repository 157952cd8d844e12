#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "evcop/empirical.hpp"
#include "evcop/simplex.hpp"
#include "evcop/spectral.hpp"

namespace evcop::io {

// CSV conventions: comma separated, '.' decimal point, parsing and printing
// independent of the C locale. Lines starting with '#' carry metadata as
// space separated key=value pairs and are otherwise ignored.
using Metadata = std::map<std::string, std::string>;

// Shortest round-trip representation.
std::string format_double(double x);
double parse_double(std::string_view text);

// Headerless or single-header CSV, one observation per row. A first row that
// does not parse as numbers is taken as the header.
DataMatrix parse_data_csv(std::istream& in);
DataMatrix read_data_csv(const std::string& path);
void write_data_csv(std::ostream& out, const DataMatrix& data);

void write_grid_csv(std::ostream& out, const AtomGrid& grid);
void write_rule_csv(std::ostream& out, const QuadratureRule& rule);

// "# surface p=.. N=.." metadata, header w1..wp,value, one row per node.
void write_surface_csv(std::ostream& out, const DependenceSurface& surface, const Metadata& extra = {});
// Rebuilds the midpoint rule from the p and N metadata and checks that the
// node coordinates match.
DependenceSurface parse_surface_csv(std::istream& in, Metadata* meta = nullptr);
DependenceSurface read_surface_csv(const std::string& path, Metadata* meta = nullptr);
nlohmann::json surface_to_json(const DependenceSurface& surface, const nlohmann::json& metadata);

// Header v1..vp,mass.
void write_measure_csv(std::ostream& out, const SpectralMeasure& h);
SpectralMeasure parse_measure_csv(std::istream& in);
// {p, atoms: [{v: [...], h: ...}]}
nlohmann::json measure_to_json(const SpectralMeasure& h);
SpectralMeasure measure_from_json(const nlohmann::json& j);
// JSON when the path ends in .json or the content starts with '{'.
SpectralMeasure read_measure(const std::string& path);

Metadata parse_metadata_line(std::string_view line);

}  // namespace evcop::io
