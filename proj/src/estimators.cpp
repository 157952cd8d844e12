#include "evcop/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "evcop/error.hpp"

namespace evcop {

namespace {

void check_point(const PseudoSample& sample, const SimplexPoint& w) {
  if (w.dim() != sample.cols()) throw InvalidArgument("estimator: dimension mismatch");
}

double mean_xi(const PseudoSample& sample, const SimplexPoint& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < sample.rows(); ++i) s += xi(sample, i, w);
  return s / static_cast<double>(sample.rows());
}

double mean_log_xi(const PseudoSample& sample, const SimplexPoint& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < sample.rows(); ++i) s += std::log(xi(sample, i, w));
  return s / static_cast<double>(sample.rows());
}

// 1 / A^P(e_j) = mean_i -log U_ij
double vertex_reciprocal(const PseudoSample& sample, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < sample.rows(); ++i) s += sample.neg_log_row(i)[j];
  return s / static_cast<double>(sample.rows());
}

// log A^CFG(e_j) = -mean_i log(-log U_ij) - gamma
double vertex_log_cfg(const PseudoSample& sample, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < sample.rows(); ++i) s += sample.log_neg_log_row(i)[j];
  return -s / static_cast<double>(sample.rows()) - kEulerGamma;
}

// Endpoint adjustments evaluated once per sample.
struct VertexTerms {
  std::vector<double> pickands_excess;  // 1/A^P(e_j) - 1
  std::vector<double> cfg_log;          // log A^CFG(e_j)
};

VertexTerms vertex_terms(const PseudoSample& sample) {
  VertexTerms t;
  for (std::size_t j = 0; j < sample.cols(); ++j) {
    t.pickands_excess.push_back(vertex_reciprocal(sample, j) - 1.0);
    t.cfg_log.push_back(vertex_log_cfg(sample, j));
  }
  return t;
}

double corrected_pickands(double mean_xi_w, const SimplexPoint& w, const VertexTerms& t) {
  double recip = mean_xi_w;
  for (std::size_t j = 0; j < w.dim(); ++j) recip -= w[j] * t.pickands_excess[j];
  if (!(recip > 0.0))
    throw NumericalError("corrected Pickands estimate has nonpositive reciprocal");
  return 1.0 / recip;
}

double corrected_cfg(double mean_log_xi_w, const SimplexPoint& w, const VertexTerms& t) {
  double log_a = -mean_log_xi_w - kEulerGamma;
  for (std::size_t j = 0; j < w.dim(); ++j) log_a -= w[j] * t.cfg_log[j];
  return std::exp(log_a);
}

}  // namespace

EstimatorSpec::EstimatorSpec(EstimatorKind k, Correction c) : kind(k), correction(c) {
  if (k == EstimatorKind::ht && c != Correction::none)
    throw InvalidArgument("the ht estimator admits no endpoint correction");
}

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::pickands: return "pickands";
    case EstimatorKind::cfg: return "cfg";
    case EstimatorKind::ht: return "ht";
  }
  return "?";
}

std::string_view to_string(Correction correction) {
  return correction == Correction::linear ? "linear" : "none";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "pickands") return EstimatorKind::pickands;
  if (name == "cfg") return EstimatorKind::cfg;
  if (name == "ht") return EstimatorKind::ht;
  throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

Correction parse_correction(std::string_view name) {
  if (name == "none") return Correction::none;
  if (name == "linear") return Correction::linear;
  throw InvalidArgument("unknown correction '" + std::string(name) + "'");
}

double xi(const PseudoSample& sample, std::size_t i, const SimplexPoint& w) {
  check_point(sample, w);
  if (i >= sample.rows()) throw InvalidArgument("xi: row index out of range");
  const auto nl = sample.neg_log_row(i);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < w.dim(); ++j)
    if (w[j] > 0.0) best = std::min(best, nl[j] / w[j]);
  if (!std::isfinite(best)) throw InvalidArgument("xi: weight vector has no positive coordinate");
  return best;
}

double pickands_estimate(const PseudoSample& sample, const SimplexPoint& w) {
  return 1.0 / mean_xi(sample, w);
}

double cfg_estimate(const PseudoSample& sample, const SimplexPoint& w) {
  return std::exp(-mean_log_xi(sample, w) - kEulerGamma);
}

double corrected_estimate(const EstimatorSpec& spec, const PseudoSample& sample, const SimplexPoint& w) {
  if (spec.correction != Correction::linear)
    throw InvalidArgument("corrected_estimate requires the linear correction");
  const auto terms = vertex_terms(sample);
  if (spec.kind == EstimatorKind::pickands) return corrected_pickands(mean_xi(sample, w), w, terms);
  if (spec.kind == EstimatorKind::cfg) return corrected_cfg(mean_log_xi(sample, w), w, terms);
  throw InvalidArgument("corrected_estimate: unsupported estimator kind");
}

double ht_estimate(const PseudoSample& sample, const SimplexPoint& w) {
  return pickands_estimate(sample, w) * vertex_reciprocal(sample, 0);
}

double estimate(const EstimatorSpec& spec, const PseudoSample& sample, const SimplexPoint& w) {
  if (spec.kind == EstimatorKind::ht) return ht_estimate(sample, w);
  if (spec.correction == Correction::linear) return corrected_estimate(spec, sample, w);
  return spec.kind == EstimatorKind::pickands ? pickands_estimate(sample, w) : cfg_estimate(sample, w);
}

DependenceSurface estimate_surface(const EstimatorSpec& spec, const PseudoSample& sample,
                                   std::shared_ptr<const QuadratureRule> rule, ExecMode mode) {
  if (!rule) throw InvalidArgument("estimate_surface: missing quadrature rule");
  const bool want_log = spec.kind == EstimatorKind::cfg;
  const auto stats = kernels::node_statistics(sample, *rule, !want_log, want_log, mode);
  const auto terms = vertex_terms(sample);
  const double ht_scale = vertex_reciprocal(sample, 0);

  std::vector<double> values(rule->size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto& w = rule->nodes[k];
    switch (spec.kind) {
      case EstimatorKind::pickands:
        values[k] = spec.correction == Correction::linear ? corrected_pickands(stats.mean_xi[k], w, terms)
                                                          : 1.0 / stats.mean_xi[k];
        break;
      case EstimatorKind::cfg:
        values[k] = spec.correction == Correction::linear
                        ? corrected_cfg(stats.mean_log_xi[k], w, terms)
                        : std::exp(-stats.mean_log_xi[k] - kEulerGamma);
        break;
      case EstimatorKind::ht:
        values[k] = ht_scale / stats.mean_xi[k];
        break;
    }
  }
  return DependenceSurface(std::move(rule), std::move(values));
}

}  // namespace evcop
