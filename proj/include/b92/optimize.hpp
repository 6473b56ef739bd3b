#ifndef B92_OPTIMIZE_HPP
#define B92_OPTIMIZE_HPP

// Minimization of Eve's ambiguity S(X|EP) over a convex set of qubit
// channels: either a KL confidence region, or the set of channels whose
// nine-outcome statistics coincide exactly with a reference channel.
//
// The search runs Nelder-Mead in coordinates whitened by the curvature of
// the KL constraint, around a strictly feasible anchor, through a sequence
// of stages with increasing weight w:
//
//  - kBarrier (regions): minimize S - (log(t - D) + log det Choi) / w over
//    the interior.
//  - kRetraction (and the exact-statistics set): a trial point is pulled
//    back toward the anchor by bisection until feasible, S is evaluated
//    there, and the pulled-back distance is charged as w * distance^2.
//
// S(X|EP) is therefore only ever evaluated on admissible channels.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include "b92/b92core.hpp"
#include "b92/channel.hpp"
#include "b92/errors.hpp"
#include "b92/estimation.hpp"

namespace b92 {

enum class SearchMethod {
  // Log-barrier on the KL slack and the Choi determinant.
  kBarrier,
  // Retraction to the anchor plus exterior penalty on the retracted distance.
  kRetraction,
};

struct OptimizerOptions {
  int max_iterations = 4000;  // per start and penalty stage
  int restarts = 3;
  // Stage weights: penalty weights for kRetraction, inverse barrier
  // parameters for kBarrier.
  std::vector<double> penalty_schedule{1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10};
  double step_scale = 1.0;  // initial simplex edge in whitened units
  double convergence_tol = 1e-10;
  std::uint64_t seed = 20150614;
  // Search all 12 entries of (R, t) instead of the 7-parameter slice.
  bool full_parameter_space = false;
  SearchMethod method = SearchMethod::kBarrier;

  void validate() const {
    if (max_iterations <= 0 || restarts <= 0) {
      throw DomainError("optimizer: max_iterations and restarts must be positive");
    }
    if (penalty_schedule.empty()) throw DomainError("optimizer: penalty schedule is empty");
    for (std::size_t i = 0; i < penalty_schedule.size(); ++i) {
      if (!(penalty_schedule[i] > 0.0) || (i > 0 && penalty_schedule[i] <= penalty_schedule[i - 1])) {
        throw DomainError("optimizer: penalty schedule must be positive and strictly increasing");
      }
    }
    if (!(step_scale > 0.0)) throw DomainError("optimizer: step_scale must be positive");
    if (!(convergence_tol >= 1e-10)) throw DomainError("optimizer: convergence_tol must be >= 1e-10");
  }
};

struct OptimizationResult {
  double min_value = 0.0;  // bits
  FreeChannelParams argmin;
  BlochChannel argmin_channel;
  bool feasible = false;
  int iterations = 0;
  // Smallest objective over the supplied probes minus min_value (>= 0);
  // infinity when no probe was feasible.
  double probe_gap = std::numeric_limits<double>::infinity();
  std::vector<double> restart_values;
};

struct ObjectiveValue {
  double value = 0.0;
  bool feasible = false;
  double kl_slack = 0.0;    // threshold - D
  double choi_slack = 0.0;  // smallest Choi eigenvalue
};

namespace detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double eve_ambiguity_at(const BlochChannel& ch, double alpha) {
  const DensityMatrix rho1(joint_state_raw(ch, alpha), ab_factors(), DensityMatrix::Trusted{});
  return eve_ambiguity(rho1, alpha);
}

// Largest lambda with lambda*choi(ch) + (1-lambda)*I/2 >= 0; the full
// contraction has Choi matrix I/2.
inline BlochChannel retract_toward_center(const BlochChannel& ch) {
  const double mu = min_choi_eigenvalue(ch);
  if (mu >= 0.0) return ch;
  const double lambda = 0.5 / (0.5 - mu) * (1.0 - 1e-12);
  return mix(BlochChannel::full_contraction(), ch, lambda);
}

struct Embedding {
  bool full = false;

  int size() const { return full ? 12 : FreeChannelParams::kSize; }

  BlochChannel channel(const VectorXd& p) const {
    return full ? BlochChannel::from_vector(p) : BlochChannel::from_free(FreeChannelParams::from_vector(p));
  }

  VectorXd params(const BlochChannel& ch) const {
    if (full) return ch.to_vector();
    return ch.free_params().to_vector();
  }
};

// lambda_inf(p) = A p + c; exact because rho_1 is affine in (R, t).
struct AffineStatistics {
  MatrixXd A;
  VectorXd c;

  AffineStatistics(const Embedding& emb, double alpha, double r_pub) {
    const auto povm = estimation_povm(alpha, r_pub);
    const int n = emb.size();
    const auto eval = [&](const VectorXd& p) {
      const auto probs = outcome_probabilities_raw(joint_state_raw(emb.channel(p), alpha), povm);
      return VectorXd(Eigen::Map<const VectorXd>(probs.data(), kOutcomes));
    };
    c = eval(VectorXd::Zero(n));
    A.resize(kOutcomes, n);
    for (int j = 0; j < n; ++j) A.col(j) = eval(VectorXd::Unit(n, j)) - c;
  }

  VectorXd at(const VectorXd& p) const { return A * p + c; }
};

inline double divergence_from(const OutcomeDistribution& lambda_m, const VectorXd& lam) {
  return kl_divergence(std::span<const double>(lambda_m.probs), std::span<const double>(lam.data(), kOutcomes));
}

struct NelderMeadResult {
  VectorXd x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Adaptive-coefficient Nelder-Mead. Converges when the objective spread is
// below ftol and the simplex diameter, measured in parameter space through
// `metric`, is below xtol.
template <class F>
NelderMeadResult nelder_mead(F&& f, const VectorXd& x0, double step, int max_iterations, double ftol,
                             double xtol, const MatrixXd& metric) {
  const int n = static_cast<int>(x0.size());
  const double nd = static_cast<double>(n);
  const double reflect = 1.0, expand = 1.0 + 2.0 / nd;
  const double contract = 0.75 - 1.0 / (2.0 * nd), shrink = 1.0 - 1.0 / nd;

  std::vector<VectorXd> x(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> fx(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i + 1)][i] += step;
  for (std::size_t i = 0; i < x.size(); ++i) fx[i] = f(x[i]);

  std::vector<std::size_t> order(x.size());
  NelderMeadResult res;
  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

    double diameter = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      diameter = std::max(diameter, (metric * (x[i] - x[best])).cwiseAbs().maxCoeff());
    }
    if (fx[worst] - fx[best] < ftol && diameter < xtol) {
      res.converged = true;
      break;
    }

    VectorXd centroid = VectorXd::Zero(n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i != worst) centroid += x[i];
    }
    centroid /= nd;

    const VectorXd xr = centroid + reflect * (centroid - x[worst]);
    const double fr = f(xr);
    if (fr < fx[best]) {
      const VectorXd xe = centroid + expand * (xr - centroid);
      const double fe = f(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second]) {
      x[worst] = xr;
      fx[worst] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < fx[worst]) {
      const VectorXd xc = centroid + contract * (xr - centroid);
      const double fc = f(xc);
      if (fc <= fr) {
        x[worst] = xc;
        fx[worst] = fc;
        accepted = true;
      }
    } else {
      const VectorXd xc = centroid - contract * (xr - centroid);
      const double fc = f(xc);
      if (fc < fx[worst]) {
        x[worst] = xc;
        fx[worst] = fc;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (i == best) continue;
        x[i] = x[best] + shrink * (x[i] - x[best]);
        fx[i] = f(x[i]);
      }
    }
  }
  const auto it = std::min_element(fx.begin(), fx.end());
  res.x = x[static_cast<std::size_t>(it - fx.begin())];
  res.fx = *it;
  return res;
}

// Convex feasible set described by a membership test plus a strictly
// feasible anchor, searched in coordinates p = anchor + basis * u.
struct SearchProblem {
  Embedding embedding;
  VectorXd anchor;
  MatrixXd basis;
  std::function<bool(const VectorXd&)> feasible;
  // When set: -(sum of log constraint slacks), +infinity outside the
  // interior. Stages then minimize S + barrier / weight.
  std::function<double(const VectorXd&)> log_barrier;
  double alpha = 0.39;
};

// Fraction s in [0, 1] such that anchor + s (p - anchor) is feasible and,
// when s < 1, lies within 2^-48 of the boundary.
inline double retraction_fraction(const SearchProblem& prob, const VectorXd& p) {
  if (prob.feasible(p)) return 1.0;
  double lo = 0.0, hi = 1.0;
  const VectorXd d = p - prob.anchor;
  for (int i = 0; i < 48; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (prob.feasible(prob.anchor + mid * d)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

struct SearchOutcome {
  double value = std::numeric_limits<double>::infinity();
  VectorXd argmin;
  int iterations = 0;
  bool last_stage_converged = true;
  std::vector<double> stage_values;
};

inline SearchOutcome run_search(const SearchProblem& prob, const VectorXd& u_start, const OptimizerOptions& opts) {
  SearchOutcome out;
  out.argmin = prob.anchor;
  out.value = eve_ambiguity_at(prob.embedding.channel(prob.anchor), prob.alpha);

  const auto evaluate = [&](const VectorXd& u, double weight) {
    const VectorXd p = prob.anchor + prob.basis * u;
    if (prob.log_barrier) {
      const double b = prob.log_barrier(p);
      if (!std::isfinite(b)) return std::numeric_limits<double>::infinity();
      const double value = eve_ambiguity_at(prob.embedding.channel(p), prob.alpha);
      if (value < out.value) {
        out.value = value;
        out.argmin = p;
      }
      return value + b / weight;
    }
    const double s = retraction_fraction(prob, p);
    const VectorXd pr = prob.anchor + s * (p - prob.anchor);
    const double value = eve_ambiguity_at(prob.embedding.channel(pr), prob.alpha);
    if (value < out.value) {
      out.value = value;
      out.argmin = pr;
    }
    return value + weight * (1.0 - s) * (1.0 - s) * u.squaredNorm();
  };

  VectorXd u = u_start;
  if (prob.log_barrier) {
    // Barrier stages need a strictly interior start.
    u *= 0.5 * retraction_fraction(prob, prob.anchor + prob.basis * u);
  }
  const MatrixXd metric = prob.basis;
  for (const double weight : opts.penalty_schedule) {
    const auto f = [&](const VectorXd& v) { return evaluate(v, weight); };
    double step = opts.step_scale;
    double previous = std::numeric_limits<double>::infinity();
    bool converged = false;
    // Nelder-Mead can stall on a degenerate simplex; rebuild it around the
    // incumbent until a pass stops improving.
    for (int pass = 0; pass < 6; ++pass) {
      const auto nm = nelder_mead(f, u, step, opts.max_iterations, opts.convergence_tol, 1e-7, metric);
      out.iterations += nm.iterations;
      u = nm.x;
      converged = nm.converged;
      if (previous - nm.fx < opts.convergence_tol) break;
      previous = nm.fx;
      step = opts.step_scale;
    }
    out.last_stage_converged = converged;
    out.stage_values.push_back(out.value);
  }
  return out;
}

// Columns spanning the directions along which the statistics move, scaled
// so that a unit step changes the divergence by about the threshold, plus
// the unobservable directions scaled to `null_scale`.
inline MatrixXd whitened_basis(const AffineStatistics& stats, const OutcomeDistribution& lambda_m,
                               const VectorXd& anchor, double threshold, double null_scale) {
  const VectorXd lam = stats.at(anchor);
  VectorXd w(kOutcomes);
  for (int i = 0; i < kOutcomes; ++i) {
    const double q = lam[i];
    w[i] = q > 1e-300 ? lambda_m.probs[static_cast<std::size_t>(i)] / (q * q) : 0.0;
  }
  MatrixXd H = stats.A.transpose() * w.asDiagonal() * stats.A / std::log(2.0);
  // Outcomes never observed make D grow linearly (through the remaining
  // mass), so a step of size ~t along that gradient already exhausts it.
  VectorXd unseen = VectorXd::Zero(kOutcomes);
  for (int i = 0; i < kOutcomes; ++i) {
    if (lambda_m.probs[static_cast<std::size_t>(i)] <= 0.0) unseen[i] = 1.0 / std::log(2.0);
  }
  const VectorXd g = stats.A.transpose() * unseen;
  if (g.squaredNorm() > 0.0) H += g * g.transpose() / threshold;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(H);
  const double hmax = std::max(eig.eigenvalues().maxCoeff(), 1e-300);
  MatrixXd basis(H.rows(), H.cols());
  for (Index j = 0; j < H.cols(); ++j) {
    const double h = eig.eigenvalues()[j];
    double scale = null_scale;
    if (h > 1e-10 * hmax) scale = std::min(null_scale, std::sqrt(2.0 * threshold / h));
    basis.col(j) = eig.eigenvectors().col(j) * scale;
  }
  return basis;
}

inline MatrixXd null_space_basis(const MatrixXd& A, double null_scale) {
  Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-10 * std::max(smax, 1e-300)) ++rank;
  }
  const Index n = A.cols();
  return svd.matrixV().rightCols(n - rank) * null_scale;
}

inline std::vector<VectorXd> start_points(const SearchProblem& prob, const OptimizerOptions& opts) {
  const Index k = prob.basis.cols();
  std::vector<VectorXd> starts;
  starts.push_back(VectorXd::Zero(k));
  if (opts.restarts > 1) {
    const VectorXd target = prob.embedding.params(BlochChannel::identity()) - prob.anchor;
    starts.push_back(prob.basis.completeOrthogonalDecomposition().solve(target));
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  while (static_cast<int>(starts.size()) < opts.restarts) {
    VectorXd u(k);
    for (Index i = 0; i < k; ++i) u[i] = opts.step_scale * jitter(rng);
    starts.push_back(u);
  }
  return starts;
}

inline OptimizationResult solve(const SearchProblem& prob, const OptimizerOptions& opts) {
  OptimizationResult res;
  SearchOutcome best;
  if (prob.basis.cols() == 0) {
    best.value = eve_ambiguity_at(prob.embedding.channel(prob.anchor), prob.alpha);
    best.argmin = prob.anchor;
    res.restart_values.push_back(best.value);
  } else {
    for (const auto& u0 : start_points(prob, opts)) {
      auto run = run_search(prob, u0, opts);
      res.iterations += run.iterations;
      res.restart_values.push_back(run.value);
      if (run.value < best.value) best = std::move(run);
    }
    const auto& sv = best.stage_values;
    if (!best.last_stage_converged && sv.size() >= 2 && sv[sv.size() - 2] - sv.back() > 1e-6) {
      std::ostringstream msg;
      msg << "optimizer did not settle: last penalty stage moved S(X|EP) by " << sv[sv.size() - 2] - sv.back()
          << " bits without converging";
      throw ConvergenceError(msg.str());
    }
  }
  res.min_value = best.value;
  res.argmin_channel = prob.embedding.channel(best.argmin);
  res.argmin = res.argmin_channel.free_params();
  res.feasible = prob.feasible(best.argmin);
  return res;
}

}  // namespace detail

// Single evaluation at a point of the 7-parameter slice. At non-CP points
// the value and the KL slack are taken at the channel pulled radially toward
// the full contraction until its Choi matrix is PSD.
inline ObjectiveValue objective(const FreeChannelParams& params, const ConfidenceRegion& region) {
  const BlochChannel ch = BlochChannel::from_free(params);
  ObjectiveValue out;
  out.choi_slack = min_choi_eigenvalue(ch);
  const BlochChannel physical = detail::retract_toward_center(ch);
  out.value = detail::eve_ambiguity_at(physical, region.alpha);
  out.kl_slack = region.kl_threshold - region_divergence(region, physical);
  out.feasible = out.choi_slack >= -region.cp_tol && out.kl_slack >= 0.0;
  return out;
}

// min S(X|EP) over the confidence region. Feasible probes seed the anchor
// search and bound the result from above.
inline OptimizationResult min_eve_ambiguity(const ConfidenceRegion& region, const OptimizerOptions& opts,
                                            std::span<const BlochChannel> probes = {}) {
  using detail::VectorXd;
  opts.validate();
  if (!(region.kl_threshold > 0.0)) throw DomainError("min_eve_ambiguity: kl_threshold must be positive");
  const detail::Embedding emb{opts.full_parameter_space};
  const detail::AffineStatistics stats(emb, region.alpha, region.r_pub);
  const double t = region.kl_threshold;

  const auto divergence = [&](const VectorXd& p) { return detail::divergence_from(region.lambda_m, stats.at(p)); };
  const auto cp_strict = [&](const VectorXd& p) { return min_choi_eigenvalue(emb.channel(p)) >= 0.0; };

  // Pull a feasible point slightly toward the full contraction so that the
  // anchor is interior to the CP set whenever the region allows it.
  const auto interior = [&](const VectorXd& p) -> VectorXd {
    for (double eps = 1e-3; eps >= 1e-9; eps *= 0.1) {
      const VectorXd q = (1.0 - eps) * p;
      if (min_choi_eigenvalue(emb.channel(q)) > 0.0 && divergence(q) <= 0.5 * t) return q;
    }
    return p;
  };

  std::vector<VectorXd> candidates;
  for (const auto& ch : probes) candidates.push_back(emb.params(ch));
  const VectorXd target = Eigen::Map<const VectorXd>(region.lambda_m.probs.data(), kOutcomes) - stats.c;
  VectorXd recon = stats.A.completeOrthogonalDecomposition().solve(target);
  {
    // The least-squares solution zeroes the unobservable directions, which
    // may leave it outside the CP set; move along them to the point of
    // largest minimal Choi eigenvalue before falling back to retraction.
    const Eigen::MatrixXd null = detail::null_space_basis(stats.A, 1.0);
    if (null.cols() > 0) {
      const auto neg_slack = [&](const VectorXd& v) { return -min_choi_eigenvalue(emb.channel(recon + null * v)); };
      const Eigen::MatrixXd metric = Eigen::MatrixXd::Identity(null.cols(), null.cols());
      const auto nm = detail::nelder_mead(neg_slack, VectorXd::Zero(null.cols()), 0.1, 20 * opts.max_iterations,
                                          1e-14, 1e-10, metric);
      recon += null * nm.x;
    }
  }
  recon = emb.params(detail::retract_toward_center(emb.channel(recon)));
  candidates.push_back(recon);

  std::optional<VectorXd> anchor;
  for (const auto& p : candidates) {
    if (min_choi_eigenvalue(emb.channel(p)) >= -1e-12 && divergence(p) <= t) {
      anchor = interior(p);
      break;
    }
  }
  if (!anchor) {
    // Feasibility phase: minimize the divergence over CP channels.
    const auto g = [&](const VectorXd& p) {
      return divergence(emb.params(detail::retract_toward_center(emb.channel(p))));
    };
    const Eigen::MatrixXd metric = Eigen::MatrixXd::Identity(emb.size(), emb.size());
    const auto nm = detail::nelder_mead(g, recon, 0.05, 20 * opts.max_iterations, 1e-16, 1e-10, metric);
    const VectorXd p = emb.params(detail::retract_toward_center(emb.channel(nm.x)));
    if (divergence(p) <= t && cp_strict(p)) {
      anchor = interior(p);
    } else {
      std::ostringstream msg;
      msg << "confidence region is empty: smallest divergence over CP channels " << nm.fx
          << " exceeds threshold " << t;
      throw InfeasibleRegionError(msg.str());
    }
  }

  detail::SearchProblem prob;
  prob.embedding = emb;
  prob.anchor = *anchor;
  prob.alpha = region.alpha;
  prob.basis = detail::whitened_basis(stats, region.lambda_m, prob.anchor, t, 0.1);
  // The search boundary sits just inside the region so that the argmin also
  // passes region_contains, which recomputes the divergence along another
  // path; the absolute term covers rounding for very small thresholds.
  const double t_inner = t * (1.0 - 1e-9) - 1e-15;
  prob.feasible = [&](const VectorXd& p) { return cp_strict(p) && divergence(p) <= t_inner; };
  if (opts.method == SearchMethod::kBarrier) {
    prob.log_barrier = [&](const VectorXd& p) {
      const double slack = t_inner - divergence(p);
      if (!(slack > 0.0)) return std::numeric_limits<double>::infinity();
      const Eigen::LLT<ComplexMatrix> llt(choi(emb.channel(p)));
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      const auto diag = llt.matrixLLT().diagonal().real();
      double logdet = 0.0;
      for (Index i = 0; i < diag.size(); ++i) {
        if (!(diag[i] > 0.0)) return std::numeric_limits<double>::infinity();
        logdet += 2.0 * std::log(diag[i]);
      }
      return -std::log(slack) - logdet;
    };
  }

  auto res = detail::solve(prob, opts);
  res.feasible = region_contains(region, res.argmin_channel);

  for (const auto& ch : probes) {
    if (!region_contains(region, ch)) continue;
    const double v = detail::eve_ambiguity_at(ch, region.alpha);
    if (v < res.min_value || !res.feasible) {
      res.min_value = v;
      res.argmin_channel = ch;
      res.argmin = ch.free_params();
      res.feasible = true;
    }
    res.probe_gap = std::min(res.probe_gap, v - res.min_value);
  }
  if (!res.feasible) throw InfeasibleRegionError("min_eve_ambiguity: no feasible minimizer found");
  return res;
}

// min S(X|EP) over every CP channel whose nine-outcome distribution equals
// that of `reference` (the zero-radius limit of the confidence region).
inline OptimizationResult min_eve_ambiguity_consistent(const BlochChannel& reference, double alpha, double r_pub,
                                                       const OptimizerOptions& opts) {
  using detail::VectorXd;
  opts.validate();
  const B92Params params(alpha, r_pub);
  if (!is_cp(reference)) throw FeasibilityError("reference channel is not completely positive");
  // Off-slice references need the full parametrization to be represented.
  const bool on_slice = (BlochChannel::from_free(reference.free_params()).to_vector() - reference.to_vector())
                            .cwiseAbs()
                            .maxCoeff() == 0.0;
  const detail::Embedding emb{opts.full_parameter_space || !on_slice};
  const detail::AffineStatistics stats(emb, alpha, r_pub);

  detail::SearchProblem prob;
  prob.embedding = emb;
  prob.anchor = emb.params(reference);
  prob.alpha = alpha;
  prob.basis = detail::null_space_basis(stats.A, 0.1);
  const auto anchor = prob.anchor;
  prob.feasible = [&emb, anchor](const VectorXd& p) {
    // The anchor itself may sit on the CP boundary; accept it exactly.
    return p == anchor || min_choi_eigenvalue(emb.channel(p)) >= 0.0;
  };
  auto res = detail::solve(prob, opts);
  res.feasible = is_cp(res.argmin_channel);
  const double ref_value = detail::eve_ambiguity_at(reference, alpha);
  res.probe_gap = ref_value - res.min_value;
  return res;
}

}  // namespace b92

#endif  // B92_OPTIMIZE_HPP
