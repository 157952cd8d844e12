#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "evcop/kernels.hpp"
#include "evcop/projection.hpp"
#include "evcop/sampling.hpp"
#include "evcop/spectral.hpp"

namespace evcop {

// PD and CFG are the endpoint-corrected Pickands and CFG estimators; the -pr
// variants are their projections.
enum class StudyEstimator { pd, pd_pr, cfg, cfg_pr };

inline constexpr StudyEstimator kAllStudyEstimators[] = {StudyEstimator::pd, StudyEstimator::pd_pr,
                                                          StudyEstimator::cfg, StudyEstimator::cfg_pr};

std::string_view to_string(StudyEstimator e);
StudyEstimator parse_study_estimator(std::string_view name);

struct StudyConfig {
  AsymmetricLogisticParams params;
  std::size_t n = 50;
  std::size_t reps = 1000;
  int m = 20;
  int subdivisions = 80;
  std::vector<StudyEstimator> estimators{std::begin(kAllStudyEstimators), std::end(kAllStudyEstimators)};
  std::uint64_t seed = 20111;

  void check() const;
};

struct MiseRecord {
  StudyEstimator estimator = StudyEstimator::pd;
  std::size_t n = 0;
  double alpha = 0.0;
  double mise = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;      // replicates that contributed
  std::size_t failures = 0;  // replicates excluded after a numerical failure
};

struct MiseTable {
  std::vector<MiseRecord> records;

  // Throws InvalidArgument when the row is missing.
  const MiseRecord& at(StudyEstimator e, std::size_t n, double alpha) const;
  void append(const MiseTable& other);
};

// Integrated squared error of `estimate` against `truth` on their shared rule.
double ise(const DependenceSurface& estimate, const DependenceSurface& truth);

// Quadrature rule and projection context for one (m, N), shared across study
// cells so the Gram matrix is built once.
class StudyWorkspace {
 public:
  StudyWorkspace(int p, int m, int subdivisions, ExecMode mode = ExecMode::parallel);
  const std::shared_ptr<const QuadratureRule>& rule() const noexcept { return rule_; }
  const ProjectionContext& projection() const noexcept { return *context_; }
  int m() const noexcept { return m_; }
  int subdivisions() const noexcept { return subdivisions_; }

 private:
  int m_;
  int subdivisions_;
  std::shared_ptr<const QuadratureRule> rule_;
  std::unique_ptr<ProjectionContext> context_;
};

// Monte Carlo MISE for one (params, n). Replicate r draws from stream r of
// config.seed; replicates run concurrently in parallel mode and are reduced
// in replicate order, so the table is independent of the worker count.
MiseTable run_study(const StudyConfig& config, ExecMode mode = ExecMode::parallel);
MiseTable run_study(const StudyConfig& config, const StudyWorkspace& workspace,
                    ExecMode mode = ExecMode::parallel);

// Every (n, alpha) combination with the asymmetry weights of `base`.
MiseTable run_study_grid(const StudyConfig& base, const std::vector<std::size_t>& ns,
                         const std::vector<double>& alphas, ExecMode mode = ExecMode::parallel);

}  // namespace evcop
