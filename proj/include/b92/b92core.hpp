#ifndef B92_B92CORE_HPP
#define B92_B92CORE_HPP

// B92 protocol quantities for a given qubit channel: signal states, Bob's
// sifting measurement, the joint Alice-Bob state, Eve's ambiguity S(X|EP),
// the reconciliation cost H(X'|Y') and the asymptotic key rate.

#include <array>
#include <cmath>
#include <sstream>

#include "b92/channel.hpp"
#include "b92/errors.hpp"
#include "b92/qmath.hpp"

namespace b92 {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0 / std::sqrt(2.0))) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " violates 0 < alpha < 1/sqrt(2)";
    throw DomainError(msg.str());
  }
}

inline void check_r_pub(double r_pub) {
  if (!(r_pub > 0.0 && r_pub < 1.0)) {
    std::ostringstream msg;
    msg << "r_pub = " << r_pub << " violates 0 < r_pub < 1";
    throw DomainError(msg.str());
  }
}

class B92Params {
 public:
  B92Params(double alpha, double r_pub) : alpha_(alpha), r_pub_(r_pub) {
    check_alpha(alpha);
    check_r_pub(r_pub);
  }

  double alpha() const { return alpha_; }
  double beta() const { return std::sqrt(1.0 - alpha_ * alpha_); }
  double r_pub() const { return r_pub_; }

 private:
  double alpha_;
  double r_pub_;
};

struct SignalStates {
  PureState phi0;
  PureState phi1;
  PureState phibar0;
  PureState phibar1;
};

// phi_j = beta|0> + (-1)^j alpha|1>,  phibar_j = alpha|0> - (-1)^j beta|1>.
inline SignalStates signal_states(double alpha) {
  check_alpha(alpha);
  const double beta = std::sqrt(1.0 - alpha * alpha);
  auto ket = [](double a0, double a1) {
    ComplexVector v(2);
    v << a0, a1;
    return PureState(v);
  };
  return {ket(beta, alpha), ket(beta, -alpha), ket(alpha, -beta), ket(alpha, beta)};
}

// Bob's four-outcome measurement; each element is a rank-one |v><v|/2, so
// its square root is |v><v|/sqrt(2).
struct SiftPovm {
  ComplexMatrix f0, f1, f0bar, f1bar;
  ComplexMatrix sqrt_f0, sqrt_f1, sqrt_f0bar, sqrt_f1bar;

  ComplexMatrix sifted() const { return f0 + f1; }
};

inline SiftPovm sift_povm(double alpha) {
  const auto s = signal_states(alpha);
  const auto half = [](const PureState& v) -> ComplexMatrix { return 0.5 * projector(v.amplitudes()); };
  const auto root = [](const PureState& v) -> ComplexMatrix {
    return projector(v.amplitudes()) / std::sqrt(2.0);
  };
  return {half(s.phibar1), half(s.phibar0), half(s.phi1), half(s.phi0),
          root(s.phibar1), root(s.phibar0), root(s.phi1), root(s.phi0)};
}

inline Factors ab_factors() { return {{"A", 2}, {"B", 2}}; }

// |Psi> = (|0>_A |phi_0>_B + |1>_A |phi_1>_B) / sqrt(2).
inline PureState entangled_source(double alpha) {
  const auto s = signal_states(alpha);
  ComplexVector e0(2), e1(2);
  e0 << 1.0, 0.0;
  e1 << 0.0, 1.0;
  return PureState((tensor(e0, s.phi0.amplitudes()) + tensor(e1, s.phi1.amplitudes())) / std::sqrt(2.0));
}

// rho_{1,AB} = (I (x) E_B)|Psi><Psi|; computed for any channel, no CP check.
inline ComplexMatrix joint_state_raw(const BlochChannel& ch, double alpha) {
  return apply_on_second_factor_raw(ch, projector(entangled_source(alpha).amplitudes()));
}

inline DensityMatrix joint_state(const BlochChannel& ch, double alpha) {
  if (!is_cp(ch)) throw FeasibilityError("joint_state: channel is not completely positive");
  return DensityMatrix(joint_state_raw(ch, alpha), ab_factors(), DensityMatrix::Trusted{});
}

inline void check_ab(const DensityMatrix& rho1) {
  if (rho1.factors().size() != 2 || rho1.factors()[0].dim != 2 || rho1.factors()[1].dim != 2) {
    throw LabelError("expected a two-qubit state over factors A, B");
  }
}

// Tr[rho_1 (I (x) (F0 + F1))].
inline double sift_probability(const DensityMatrix& rho1, double alpha) {
  check_ab(rho1);
  const auto f = sift_povm(alpha);
  return (rho1.matrix() * tensor(pauli::identity(), f.sifted())).trace().real();
}

// The selection map rho_{1,ABE} -> rho_{2,ABEP}. The kept branch (P = 0)
// applies sqrt(F0), sqrt(F1) to B; the discard branch (P = 1) resets A to
// |0><0| and applies sqrt(F0bar), sqrt(F1bar) to B. Input factors are
// A:2, B:2, E:d; output factors append P:2 as the last factor.
inline DensityMatrix selection_map(const DensityMatrix& rho_abe, double alpha) {
  const auto& f = rho_abe.factors();
  if (f.size() != 3 || f[0].dim != 2 || f[1].dim != 2) {
    throw LabelError("selection_map: expected factors A:2, B:2, E");
  }
  const Index de = f[2].dim;
  const auto povm = sift_povm(alpha);
  const ComplexMatrix ie = ComplexMatrix::Identity(de, de);
  const ComplexMatrix& rho = rho_abe.matrix();

  ComplexMatrix kept = ComplexMatrix::Zero(4 * de, 4 * de);
  for (const ComplexMatrix* sq : {&povm.sqrt_f0, &povm.sqrt_f1}) {
    const ComplexMatrix k = tensor(tensor(pauli::identity(), *sq), ie);
    kept += k * rho * k.adjoint();
  }

  const ComplexMatrix rho_be = partial_trace(rho, {2, 2, de}, {false, true, true});
  ComplexMatrix discarded_be = ComplexMatrix::Zero(2 * de, 2 * de);
  for (const ComplexMatrix* sq : {&povm.sqrt_f0bar, &povm.sqrt_f1bar}) {
    const ComplexMatrix k = tensor(*sq, ie);
    discarded_be += k * rho_be * k.adjoint();
  }
  ComplexMatrix reset_a = ComplexMatrix::Zero(2, 2);
  reset_a(0, 0) = 1.0;
  const ComplexMatrix discarded = tensor(reset_a, discarded_be);

  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Factors out_f = f;
  out_f.push_back({"P", 2});
  return DensityMatrix(tensor(kept, p0) + tensor(discarded, p1), std::move(out_f),
                       DensityMatrix::Trusted{});
}

// Sum_j (|j><j| (x) I) rho (|j><j| (x) I) on the first factor.
inline DensityMatrix dephase_first_factor(const DensityMatrix& rho) {
  const Index d0 = rho.factors().front().dim;
  const Index rest = rho.dim() / d0;
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (Index j = 0; j < d0; ++j) {
    out.block(j * rest, j * rest, rest, rest) = rho.matrix().block(j * rest, j * rest, rest, rest);
  }
  return DensityMatrix(std::move(out), rho.factors(), DensityMatrix::Trusted{});
}

// S(X|EP) = S(rho_{2,XEP}) - S(rho_{2,EP}) from an explicit A-B-E state.
inline double eve_ambiguity_from_purification(const DensityMatrix& rho_abe, double alpha) {
  const DensityMatrix rho2 = selection_map(rho_abe, alpha);
  const std::string e = rho_abe.factors()[2].label;
  const DensityMatrix xep = dephase_first_factor(partial_trace(rho2, {"A", e, "P"}));
  const DensityMatrix ep = partial_trace(xep, {e, "P"});
  return von_neumann_entropy(xep) - von_neumann_entropy(ep);
}

// Eve holds the purification of rho_{1,AB} on a 4-dimensional E.
inline double eve_ambiguity(const DensityMatrix& rho1, double alpha) {
  check_ab(rho1);
  const PureState phi = purify(rho1);
  const DensityMatrix rho_abe = phi.density({{"A", 2}, {"B", 2}, {"E", 4}});
  return eve_ambiguity_from_purification(rho_abe, alpha);
}

// H(X'|Y') for a joint distribution p[2*j + k] = P(X' = j, Y' = k).
inline double conditional_entropy_xy(const std::array<double, 4>& joint) {
  const double total = joint[0] + joint[1] + joint[2] + joint[3];
  if (!(total > 0.0)) throw DegenerateError("H(X'|Y'): joint distribution has zero mass");
  RealVector pxy(4), py(2);
  for (int i = 0; i < 4; ++i) pxy[i] = std::max(0.0, joint[static_cast<std::size_t>(i)]) / total;
  py << pxy[0] + pxy[2], pxy[1] + pxy[3];
  return std::max(0.0, entropy_bits(pxy) - entropy_bits(py));
}

// Joint (unnormalized) weights Tr[rho_1 (|j><j| (x) F_k)] for j, k in {0, 1}.
inline std::array<double, 4> sifted_joint_weights(const DensityMatrix& rho1, double alpha) {
  check_ab(rho1);
  const auto f = sift_povm(alpha);
  std::array<double, 4> w{};
  for (Index j = 0; j < 2; ++j) {
    ComplexMatrix proj = ComplexMatrix::Zero(2, 2);
    proj(j, j) = 1.0;
    w[static_cast<std::size_t>(2 * j)] = (rho1.matrix() * tensor(proj, f.f0)).trace().real();
    w[static_cast<std::size_t>(2 * j + 1)] = (rho1.matrix() * tensor(proj, f.f1)).trace().real();
  }
  return w;
}

inline double reconciliation_entropy(const DensityMatrix& rho1, double alpha) {
  const auto w = sifted_joint_weights(rho1, alpha);
  if (!(w[0] + w[1] + w[2] + w[3] > 1e-15)) {
    throw DegenerateError("H(X'|Y'): sift probability is zero");
  }
  return conditional_entropy_xy(w);
}

// S(X|EP) / Pr(sift) - H(X'|Y'), evaluated at the given channel.
inline double asymptotic_rate(const BlochChannel& ch, double alpha) {
  const DensityMatrix rho1 = joint_state(ch, alpha);
  const double ps = sift_probability(rho1, alpha);
  if (!(ps > 1e-15)) throw DegenerateError("asymptotic_rate: sift probability is zero");
  return eve_ambiguity(rho1, alpha) / ps - reconciliation_entropy(rho1, alpha);
}

}  // namespace b92

#endif  // B92_B92CORE_HPP
