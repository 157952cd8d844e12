#include "evcop/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evcop/empirical.hpp"
#include "evcop/error.hpp"
#include "evcop/estimators.hpp"
#include "evcop/io.hpp"
#include "evcop/kernels.hpp"
#include "evcop/projection.hpp"
#include "evcop/sampling.hpp"
#include "evcop/study.hpp"

namespace evcop::cli {

namespace {

using nlohmann::json;

// Flag combinations rejected before any computation.
class UsageError : public Error {
 public:
  using Error::Error;
};

// QP breakdown with the diagnostics of the last iterate.
class ProjectionFailure : public NumericalError {
 public:
  ProjectionFailure(const std::string& what, json diagnostics)
      : NumericalError(what), diagnostics_(std::move(diagnostics)) {}
  const json& diagnostics() const noexcept { return diagnostics_; }

 private:
  json diagnostics_;
};

enum class Format { csv, json };

struct Common {
  std::string output = "-";
  std::string format = "csv";
};

Format format_of(const Common& c) { return c.format == "json" ? Format::json : Format::csv; }

// Writes to --output, or to the caller's stream for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw IoError("cannot open '" + path + "' for writing");
    out_ = file_.get();
  }
  std::ostream& stream() { return *out_; }
  void close() {
    out_->flush();
    if (file_) {
      file_->close();
      if (!*file_) throw IoError("write failed");
    }
  }

 private:
  std::ostream* out_;
  std::unique_ptr<std::ofstream> file_;
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << j.dump(2) << '\n';
  if (!f) throw IoError("write failed for '" + path + "'");
}

json kkt_json(const KktResiduals& k) {
  return {{"stationarity", k.stationarity}, {"primal", k.primal}, {"complementarity", k.complementarity}};
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  std::string model = "asylog";
  double alpha = 1.0;
  double theta = 0.0;
  double phi = 0.0;
  double psi = 1.0;
  std::string measure;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
};

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.model == "maxlinear" && a.measure.empty()) throw UsageError("--model maxlinear requires --measure");
  if (a.model == "asylog" && !a.measure.empty()) throw UsageError("--measure applies only to --model maxlinear");
  if (a.n < 1) throw UsageError("--n must be >= 1");

  RngStream rng(a.seed, a.stream);
  std::optional<DataMatrix> data;
  if (a.model == "asylog") {
    const AsymmetricLogisticParams params{a.alpha, a.theta, a.phi, a.psi};
    try {
      params.check();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    data.emplace(sample_asy_logistic(params, a.n, rng));
  } else {
    const SpectralMeasure h = io::read_measure(a.measure);
    const auto report = validate(h);
    if (!report.pass)
      throw InvalidArgument("measure violates the moment constraints (max residual " +
                            io::format_double(report.max_abs_residual()) + ")");
    data.emplace(sample_max_linear(h, a.n, rng));
  }

  Sink sink(a.common.output, out);
  if (format_of(a.common) == Format::json) {
    json rows = json::array();
    for (std::size_t i = 0; i < data->rows(); ++i) {
      const auto r = data->row(i);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    sink.stream() << json{{"model", a.model}, {"n", data->rows()}, {"p", data->cols()},
                          {"seed", a.seed}, {"stream", a.stream}, {"data", rows}}
                         .dump()
                  << '\n';
  } else {
    io::write_data_csv(sink.stream(), *data);
  }
  sink.close();
}

// ---------------------------------------------------------------- estimate

struct EstimatorArgs {
  std::string estimator = "cfg";
  std::string correction;  // empty: linear for pickands/cfg, none for ht
  int subdivisions = 0;    // 0: default for m = 20
};

EstimatorSpec spec_of(const EstimatorArgs& a) {
  try {
    const auto kind = parse_estimator_kind(a.estimator);
    const auto corr = a.correction.empty()
                          ? (kind == EstimatorKind::ht ? Correction::none : Correction::linear)
                          : parse_correction(a.correction);
    return EstimatorSpec(kind, corr);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

struct Estimated {
  DependenceSurface surface;
  json metadata;
};

// Without --N the rule is the default one for atom resolution `m`.
Estimated estimate_from_file(const std::string& input, const EstimatorArgs& a, int m) {
  const EstimatorSpec spec = spec_of(a);
  const DataMatrix data = io::read_data_csv(input);
  const int p = static_cast<int>(data.cols());
  const int n_sub = a.subdivisions > 0 ? a.subdivisions : default_subdivisions(p, m);
  const PseudoSample sample = pseudo_observations(data);
  auto rule = std::make_shared<const QuadratureRule>(midpoint_rule(p, n_sub));
  json meta{{"kind", to_string(spec.kind)},
            {"correction", to_string(spec.correction)},
            {"n", data.rows()},
            {"p", p},
            {"N", n_sub}};
  return {estimate_surface(spec, sample, std::move(rule)), std::move(meta)};
}

io::Metadata flat_metadata(const json& meta) {
  io::Metadata m;
  for (const auto& [k, v] : meta.items())
    if (k != "p" && k != "N") m[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return m;
}

struct EstimateArgs {
  Common common;
  std::string input;
  EstimatorArgs est;
  std::string metadata;
};

void cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  if (a.est.subdivisions < 0) throw UsageError("--N must be >= 1");
  const auto result = estimate_from_file(a.input, a.est, 20);
  Sink sink(a.common.output, out);
  if (format_of(a.common) == Format::json)
    sink.stream() << io::surface_to_json(result.surface, result.metadata).dump() << '\n';
  else
    io::write_surface_csv(sink.stream(), result.surface, flat_metadata(result.metadata));
  sink.close();
  if (!a.metadata.empty()) write_json_file(a.metadata, result.metadata);
}

// ---------------------------------------------------------------- project

struct ProjectArgs {
  Common common;
  std::string surface;
  std::string input;
  EstimatorArgs est;
  int m = 20;
  std::string diagnostics;
  std::string surface_output;
};

json diagnostics_json(const ProjectionResult& r) {
  std::size_t positive = 0;
  for (double h : r.masses) positive += h > 0.0;
  return {{"objective", r.objective},   {"qp_objective", r.qp_objective},
          {"kkt", kkt_json(r.kkt)},     {"iterations", r.iterations},
          {"m", r.m},                   {"N", r.subdivisions},
          {"atoms", r.masses.size()},   {"positive_atoms", positive}};
}

void cmd_project(const ProjectArgs& a, std::ostream& out) {
  if (a.surface.empty() == a.input.empty()) throw UsageError("give exactly one of --surface or --input");
  if (!a.surface.empty() && (a.est.subdivisions > 0 || !a.est.correction.empty()))
    throw UsageError("--N and --correction apply only with --input; a surface file fixes its own rule");
  if (a.m < 1) throw UsageError("--m must be >= 1");
  if (a.est.subdivisions < 0) throw UsageError("--N must be >= 1");

  std::optional<DependenceSurface> pilot;
  if (!a.surface.empty()) {
    pilot.emplace(io::read_surface_csv(a.surface));
  } else {
    pilot.emplace(estimate_from_file(a.input, a.est, a.m).surface);
  }

  ProjectionResult result = [&] {
    try {
      return project(*pilot, a.m, pilot->rule);
    } catch (const QpMaxIterations& e) {
      const auto& b = e.best();
      throw ProjectionFailure(e.what(), {{"objective", b.objective},
                                         {"kkt", kkt_json(b.kkt)},
                                         {"iterations", b.iterations},
                                         {"m", a.m},
                                         {"N", pilot->rule->subdivisions}});
    }
  }();
  const auto report = validate(result.measure);
  if (!report.pass)
    throw NumericalError("projected measure fails the moment constraints (max residual " +
                         io::format_double(report.max_abs_residual()) + ")");

  const json diag = diagnostics_json(result);
  Sink sink(a.common.output, out);
  if (format_of(a.common) == Format::json)
    sink.stream() << json{{"measure", io::measure_to_json(result.measure)}, {"diagnostics", diag}}.dump() << '\n';
  else
    io::write_measure_csv(sink.stream(), result.measure);
  sink.close();

  if (!a.diagnostics.empty()) write_json_file(a.diagnostics, diag);
  if (!a.surface_output.empty()) {
    std::ofstream f(a.surface_output);
    if (!f) throw IoError("cannot open '" + a.surface_output + "' for writing");
    io::write_surface_csv(f, result.surface, {{"kind", "projection"}, {"m", std::to_string(a.m)}});
    if (!f) throw IoError("write failed for '" + a.surface_output + "'");
  }
}

// ---------------------------------------------------------------- mise

struct MiseArgs {
  Common common;
  std::vector<std::size_t> ns{50};
  std::vector<double> alphas{0.3, 0.5, 0.7, 0.9, 1.0};
  double theta = 0.0;
  double phi = 0.0;
  double psi = 1.0;
  std::size_t reps = 1000;
  int m = 20;
  int subdivisions = 80;
  std::vector<std::string> estimators{"PD", "PD-pr", "CFG", "CFG-pr"};
  std::uint64_t seed = 20111;
  std::string json_path;
};

json table_json(const MiseArgs& a, const MiseTable& t) {
  json records = json::array();
  for (const auto& r : t.records)
    records.push_back({{"estimator", to_string(r.estimator)},
                       {"n", r.n},
                       {"alpha", r.alpha},
                       {"mise", r.mise},
                       {"std_error", r.std_error},
                       {"reps", r.reps},
                       {"failures", r.failures}});
  return {{"config",
           {{"theta", a.theta},
            {"phi", a.phi},
            {"psi", a.psi},
            {"reps", a.reps},
            {"m", a.m},
            {"N", a.subdivisions},
            {"seed", a.seed}}},
          {"records", records}};
}

// Rows n x estimator, one column per alpha.
void write_table_csv(std::ostream& out, const MiseArgs& a, const std::vector<StudyEstimator>& ests,
                     const MiseTable& t) {
  out << "# mise reps=" << a.reps << " m=" << a.m << " N=" << a.subdivisions << " theta=" << io::format_double(a.theta)
      << " phi=" << io::format_double(a.phi) << " psi=" << io::format_double(a.psi) << " seed=" << a.seed << '\n';
  out << "n,estimator";
  for (double al : a.alphas) out << ",alpha=" << io::format_double(al);
  out << '\n';
  for (std::size_t n : a.ns) {
    for (auto e : ests) {
      out << n << ',' << to_string(e);
      for (double al : a.alphas) out << ',' << io::format_double(t.at(e, n, al).mise);
      out << '\n';
    }
  }
}

void cmd_mise(const MiseArgs& a, std::ostream& out) {
  StudyConfig base;
  base.params = {a.alphas.empty() ? 1.0 : a.alphas.front(), a.theta, a.phi, a.psi};
  base.reps = a.reps;
  base.m = a.m;
  base.subdivisions = a.subdivisions;
  base.seed = a.seed;
  base.n = a.ns.empty() ? 0 : a.ns.front();
  base.estimators.clear();
  try {
    for (const auto& name : a.estimators) base.estimators.push_back(parse_study_estimator(name));
    for (double al : a.alphas) {
      AsymmetricLogisticParams p = base.params;
      p.alpha = al;
      p.check();
    }
    for (std::size_t n : a.ns)
      if (n < 2) throw InvalidArgument("every --n must be >= 2");
    base.check();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (a.ns.empty() || a.alphas.empty()) throw UsageError("--n and --alpha need at least one value");
  if (a.m < 1 || midpoint_rule(3, std::max(a.subdivisions, 1)).size() < 4 * binomial(a.m + 2, 2))
    throw UsageError("--N is too small for --m (need at least 4 quadrature nodes per atom)");

  const MiseTable table = run_study_grid(base, a.ns, a.alphas);
  const json j = table_json(a, table);
  Sink sink(a.common.output, out);
  if (format_of(a.common) == Format::json)
    sink.stream() << j.dump(2) << '\n';
  else
    write_table_csv(sink.stream(), a, base.estimators, table);
  sink.close();
  if (!a.json_path.empty()) write_json_file(a.json_path, j);
}

// ---------------------------------------------------------------- driver

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--output", c.output, "Output file ('-' for stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_estimator(CLI::App* cmd, EstimatorArgs& e) {
  cmd->add_option("--estimator", e.estimator, "Pilot estimator")->check(CLI::IsMember({"pickands", "cfg", "ht"}));
  cmd->add_option("--correction", e.correction, "Endpoint correction (default: linear; none for ht)")
      ->check(CLI::IsMember({"none", "linear"}));
  cmd->add_option("--N", e.subdivisions, "Quadrature subdivisions (default: smallest N >= 4m with 4 nodes per atom)");
}

int report(std::ostream& err, int code, const std::string& kind, const std::string& message, json extra = {}) {
  json j{{"error", kind}, {"message", message}, {"exit_code", code}};
  if (extra.is_object())
    for (auto& [k, v] : extra.items()) j[k] = v;
  err << j.dump() << '\n';
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pickands dependence function estimation for extreme-value copulas", "evcop"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads for parallel kernels")
      ->envname("EVCOP_THREADS")
      ->check(CLI::NonNegativeNumber);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Draw a max-stable sample with unit Frechet margins");
  add_common(c_sim, sim.common);
  c_sim->add_option("--model", sim.model, "Model")->check(CLI::IsMember({"asylog", "maxlinear"}));
  c_sim->add_option("--alpha", sim.alpha, "Dependence parameter in (0, 1]");
  c_sim->add_option("--theta", sim.theta, "Pair weight on the first member");
  c_sim->add_option("--phi", sim.phi, "Pair weight on the second member");
  c_sim->add_option("--psi", sim.psi, "Weight of the full triple");
  c_sim->add_option("--measure", sim.measure, "Spectral measure file (CSV or JSON) for maxlinear");
  c_sim->add_option("--n", sim.n, "Sample size")->required();
  c_sim->add_option("--seed", sim.seed, "Random seed");
  c_sim->add_option("--stream", sim.stream, "Stream id");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Tabulate a rank estimator of A on the quadrature grid");
  add_common(c_est, est.common);
  c_est->add_option("-i,--input", est.input, "Data CSV")->required();
  add_estimator(c_est, est.est);
  c_est->add_option("--metadata", est.metadata, "Also write metadata JSON here");

  ProjectArgs prj;
  auto* c_prj = app.add_subcommand("project", "Project a pilot surface onto valid Pickands functions");
  add_common(c_prj, prj.common);
  auto* o_surface = c_prj->add_option("--surface", prj.surface, "Pilot surface CSV");
  auto* o_input = c_prj->add_option("-i,--input", prj.input, "Data CSV (pilot estimated on the fly)");
  o_surface->excludes(o_input);
  add_estimator(c_prj, prj.est);
  c_prj->add_option("--m", prj.m, "Atom grid resolution");
  c_prj->add_option("--diagnostics", prj.diagnostics, "Write solver diagnostics JSON here");
  c_prj->add_option("--surface-output", prj.surface_output, "Write the projected surface CSV here");

  MiseArgs mis;
  auto* c_mis = app.add_subcommand("mise", "Monte Carlo MISE of PD, PD-pr, CFG, CFG-pr");
  add_common(c_mis, mis.common);
  c_mis->add_option("--n", mis.ns, "Sample sizes")->delimiter(',');
  c_mis->add_option("--alpha", mis.alphas, "Dependence parameters")->delimiter(',');
  c_mis->add_option("--theta", mis.theta, "Pair weight on the first member");
  c_mis->add_option("--phi", mis.phi, "Pair weight on the second member");
  c_mis->add_option("--psi", mis.psi, "Weight of the full triple");
  c_mis->add_option("--reps", mis.reps, "Replicates per cell");
  c_mis->add_option("--m", mis.m, "Atom grid resolution");
  c_mis->add_option("--N", mis.subdivisions, "Quadrature subdivisions");
  c_mis->add_option("--estimators", mis.estimators, "Subset of PD,PD-pr,CFG,CFG-pr")->delimiter(',');
  c_mis->add_option("--seed", mis.seed, "Random seed");
  c_mis->add_option("--json", mis.json_path, "Also write the table with standard errors as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report(err, kUsage, "usage", e.what());
  }

  try {
    if (threads > 0) kernels::set_worker_count(threads);
    if (c_sim->parsed()) cmd_simulate(sim, out);
    else if (c_est->parsed()) cmd_estimate(est, out);
    else if (c_prj->parsed()) cmd_project(prj, out);
    else if (c_mis->parsed()) cmd_mise(mis, out);
    return kOk;
  } catch (const UsageError& e) {
    return report(err, kUsage, "usage", e.what());
  } catch (const TiesPresent& e) {
    return report(err, kDataError, "ties",
                  "column " + std::to_string(e.column() + 1) + " contains repeated values",
                  {{"column", e.column() + 1}});
  } catch (const InvalidArgument& e) {
    return report(err, kDataError, "invalid_data", e.what());
  } catch (const IoError& e) {
    return report(err, kIoError, "io", e.what());
  } catch (const ProjectionFailure& e) {
    return report(err, kNumericalError, "numerical", e.what(), {{"diagnostics", e.diagnostics()}});
  } catch (const NumericalError& e) {
    return report(err, kNumericalError, "numerical", e.what());
  } catch (const std::exception& e) {
    return report(err, kNumericalError, "internal", e.what());
  }
}

}  // namespace evcop::cli
