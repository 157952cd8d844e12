#include "evcop/study.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <exception>
#include <optional>
#include <string>

#include "evcop/empirical.hpp"
#include "evcop/error.hpp"
#include "evcop/estimators.hpp"

namespace evcop {

namespace {

constexpr std::size_t kEstimatorCount = 4;

std::size_t slot(StudyEstimator e) { return static_cast<std::size_t>(e); }

struct ReplicateResult {
  std::array<std::optional<double>, kEstimatorCount> ise;
};

bool wants(const StudyConfig& c, StudyEstimator e) {
  for (auto x : c.estimators)
    if (x == e) return true;
  return false;
}

// Pilot ISE, then projected ISE, for one corrected estimator.
void evaluate_pair(const StudyConfig& config, const StudyWorkspace& ws, const PseudoSample& sample,
                   const DependenceSurface& truth, EstimatorKind kind, StudyEstimator raw,
                   StudyEstimator projected, ReplicateResult& out) {
  const bool want_raw = wants(config, raw);
  const bool want_pr = wants(config, projected);
  if (!want_raw && !want_pr) return;
  try {
    const auto pilot = estimate_surface({kind, Correction::linear}, sample, ws.rule(), ExecMode::serial);
    if (want_raw) out.ise[slot(raw)] = ise(pilot, truth);
    if (want_pr) {
      const auto result = ws.projection().project(pilot, ExecMode::serial);
      out.ise[slot(projected)] = ise(result.surface, truth);
    }
  } catch (const NumericalError&) {
    // Recorded as a failure for every requested estimator not yet filled.
  }
}

ReplicateResult run_replicate(const StudyConfig& config, const StudyWorkspace& ws,
                              const DependenceSurface& truth, std::size_t r) {
  ReplicateResult out;
  RngStream rng(config.seed, r);
  const DataMatrix data = sample_asy_logistic(config.params, config.n, rng);
  std::optional<PseudoSample> sample;
  try {
    sample.emplace(pseudo_observations(data));
  } catch (const TiesPresent&) {
    return out;
  }
  evaluate_pair(config, ws, *sample, truth, EstimatorKind::pickands, StudyEstimator::pd,
                StudyEstimator::pd_pr, out);
  evaluate_pair(config, ws, *sample, truth, EstimatorKind::cfg, StudyEstimator::cfg,
                StudyEstimator::cfg_pr, out);
  return out;
}

}  // namespace

std::string_view to_string(StudyEstimator e) {
  switch (e) {
    case StudyEstimator::pd: return "PD";
    case StudyEstimator::pd_pr: return "PD-pr";
    case StudyEstimator::cfg: return "CFG";
    case StudyEstimator::cfg_pr: return "CFG-pr";
  }
  return "?";
}

StudyEstimator parse_study_estimator(std::string_view name) {
  for (auto e : kAllStudyEstimators) {
    std::string lower(to_string(e));
    for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (name == to_string(e) || name == lower) return e;
  }
  throw InvalidArgument("unknown study estimator '" + std::string(name) + "'");
}

void StudyConfig::check() const {
  params.check();
  if (reps < 1) throw InvalidArgument("reps must be >= 1");
  if (n < 2) throw InvalidArgument("sample size n must be >= 2");
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (subdivisions < m) throw InvalidArgument("quadrature subdivisions N must be >= m");
  if (estimators.empty()) throw InvalidArgument("no estimators requested");
}

const MiseRecord& MiseTable::at(StudyEstimator e, std::size_t n, double alpha) const {
  for (const auto& r : records)
    if (r.estimator == e && r.n == n && std::abs(r.alpha - alpha) < 1e-12) return r;
  throw InvalidArgument("no MISE row for " + std::string(to_string(e)) + ", n=" + std::to_string(n) +
                        ", alpha=" + std::to_string(alpha));
}

void MiseTable::append(const MiseTable& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

double ise(const DependenceSurface& estimate, const DependenceSurface& truth) {
  if (!estimate.rule->same_layout(*truth.rule)) throw InvalidArgument("ise: surfaces use different rules");
  const auto& w = truth.rule->weights;
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double e = estimate.values[k] - truth.values[k];
    s += w[k] * (e * e);
  }
  return s;
}

StudyWorkspace::StudyWorkspace(int p, int m, int subdivisions, ExecMode mode)
    : m_(m),
      subdivisions_(subdivisions),
      rule_(std::make_shared<const QuadratureRule>(midpoint_rule(p, subdivisions))) {
  ProjectionOptions opts;
  opts.mode = mode;
  context_ = std::make_unique<ProjectionContext>(m, rule_, opts);
}

MiseTable run_study(const StudyConfig& config, ExecMode mode) {
  config.check();
  const StudyWorkspace ws(3, config.m, config.subdivisions, mode);
  return run_study(config, ws, mode);
}

MiseTable run_study(const StudyConfig& config, const StudyWorkspace& ws, ExecMode mode) {
  config.check();
  if (ws.m() != config.m || ws.subdivisions() != config.subdivisions)
    throw InvalidArgument("study workspace does not match config (m, N)");

  std::vector<double> truth_values(ws.rule()->size());
  for (std::size_t k = 0; k < truth_values.size(); ++k)
    truth_values[k] = asy_logistic_pickands(config.params, ws.rule()->nodes[k]);
  const DependenceSurface truth(ws.rule(), std::move(truth_values));

  std::vector<ReplicateResult> results(config.reps);
  if (mode == ExecMode::serial) {
    for (std::size_t r = 0; r < config.reps; ++r) results[r] = run_replicate(config, ws, truth, r);
  } else {
    std::exception_ptr failure;
    const auto reps = static_cast<std::ptrdiff_t>(config.reps);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < reps; ++r) {
      try {
        results[static_cast<std::size_t>(r)] = run_replicate(config, ws, truth, static_cast<std::size_t>(r));
      } catch (...) {
#pragma omp critical(evcop_study_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  MiseTable table;
  for (auto e : config.estimators) {
    MiseRecord rec;
    rec.estimator = e;
    rec.n = config.n;
    rec.alpha = config.params.alpha;
    double sum = 0.0;
    for (const auto& res : results) {
      if (res.ise[slot(e)]) {
        sum += *res.ise[slot(e)];
        ++rec.reps;
      } else {
        ++rec.failures;
      }
    }
    if (rec.reps > 0) {
      rec.mise = sum / static_cast<double>(rec.reps);
      double ss = 0.0;
      for (const auto& res : results) {
        if (!res.ise[slot(e)]) continue;
        const double dev = *res.ise[slot(e)] - rec.mise;
        ss += dev * dev;
      }
      if (rec.reps > 1)
        rec.std_error = std::sqrt(ss / static_cast<double>(rec.reps - 1) / static_cast<double>(rec.reps));
    }
    table.records.push_back(rec);
  }
  return table;
}

MiseTable run_study_grid(const StudyConfig& base, const std::vector<std::size_t>& ns,
                         const std::vector<double>& alphas, ExecMode mode) {
  base.check();
  const StudyWorkspace ws(3, base.m, base.subdivisions, mode);
  MiseTable table;
  for (std::size_t n : ns) {
    for (double a : alphas) {
      StudyConfig c = base;
      c.n = n;
      c.params.alpha = a;
      table.append(run_study(c, ws, mode));
    }
  }
  return table;
}

}  // namespace evcop
