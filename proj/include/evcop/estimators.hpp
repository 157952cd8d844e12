#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "evcop/empirical.hpp"
#include "evcop/kernels.hpp"
#include "evcop/simplex.hpp"
#include "evcop/spectral.hpp"

namespace evcop {

// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286061;

enum class EstimatorKind { pickands, cfg, ht };
// linear: endpoint correction with weights lambda_j(w) = w_j.
enum class Correction { none, linear };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::cfg;
  Correction correction = Correction::linear;

  EstimatorSpec() = default;
  // Hall-Tajvidi is already a rescaling and admits no correction.
  EstimatorSpec(EstimatorKind k, Correction c);
};

std::string_view to_string(EstimatorKind kind);
std::string_view to_string(Correction correction);
EstimatorKind parse_estimator_kind(std::string_view name);
Correction parse_correction(std::string_view name);

// xi_i(w) = min over {j : w_j > 0} of -log U_ij / w_j; i is zero-based.
double xi(const PseudoSample& sample, std::size_t i, const SimplexPoint& w);

// 1 / mean_i xi_i(w)
double pickands_estimate(const PseudoSample& sample, const SimplexPoint& w);
// exp(-mean_i log xi_i(w) - gamma)
double cfg_estimate(const PseudoSample& sample, const SimplexPoint& w);
// Pickands or CFG with the linear endpoint correction; equals 1 at vertices.
// Throws NumericalError if the corrected Pickands reciprocal is not positive.
double corrected_estimate(const EstimatorSpec& spec, const PseudoSample& sample, const SimplexPoint& w);
// pickands_estimate(w) / pickands_estimate(e_1)
double ht_estimate(const PseudoSample& sample, const SimplexPoint& w);

double estimate(const EstimatorSpec& spec, const PseudoSample& sample, const SimplexPoint& w);

// The estimator at every node of `rule`. Node values are computed
// independently, so the result does not depend on `mode` or thread count.
DependenceSurface estimate_surface(const EstimatorSpec& spec, const PseudoSample& sample,
                                   std::shared_ptr<const QuadratureRule> rule,
                                   ExecMode mode = ExecMode::parallel);

}  // namespace evcop
