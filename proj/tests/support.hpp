#ifndef B92_TESTS_SUPPORT_HPP
#define B92_TESTS_SUPPORT_HPP

// Random generators and independent reference implementations shared by the
// test suites. The oracles here use plain Eigen and explicit index loops;
// they deliberately avoid the library's tensor, partial-trace, purification
// and selection-map code.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "b92/b92core.hpp"
#include "b92/channel.hpp"
#include "b92/estimation.hpp"

namespace b92::testing {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat random_ginibre(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = cd(g(rng), g(rng));
  }
  return m;
}

// Random full-rank density matrix G G^dag / Tr.
inline Mat random_density(std::mt19937_64& rng, int dim) {
  const Mat g = random_ginibre(rng, dim, dim);
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline Mat random_hermitian(std::mt19937_64& rng, int dim) {
  const Mat g = random_ginibre(rng, dim, dim);
  return 0.5 * (g + g.adjoint());
}

// Random CPTP qubit map from a 2r x 2 isometry (Stinespring), returned as
// its Kraus operators.
inline std::vector<Mat> random_kraus(std::mt19937_64& rng, int rank = 4) {
  const Mat g = random_ginibre(rng, 2 * rank, 2);
  const Mat v = Eigen::HouseholderQR<Mat>(g).householderQ() * Mat::Identity(2 * rank, 2);
  std::vector<Mat> ks;
  for (int k = 0; k < rank; ++k) ks.push_back(v.block(2 * k, 0, 2, 2));
  return ks;
}

inline Mat apply_kraus(const std::vector<Mat>& ks, const Mat& rho) {
  Mat out = Mat::Zero(2, 2);
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

// Pauli matrices written out, (z, x, y) order.
inline std::array<Mat, 3> paulis_zxy() {
  Mat z(2, 2), x(2, 2), y(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  y << 0, cd(0, -1), cd(0, 1), 0;
  return {z, x, y};
}

// Bloch representation of a Kraus map: t_i = Tr[s_i E(I)]/2,
// R_ij = Tr[s_i E(s_j)]/2.
inline BlochChannel bloch_from_kraus(const std::vector<Mat>& ks) {
  const auto s = paulis_zxy();
  BlochChannel ch;
  const Mat e_id = apply_kraus(ks, Mat::Identity(2, 2));
  for (int i = 0; i < 3; ++i) {
    ch.t[i] = 0.5 * (s[i] * e_id).trace().real();
    for (int j = 0; j < 3; ++j) ch.R(i, j) = 0.5 * (s[i] * apply_kraus(ks, s[j])).trace().real();
  }
  return ch;
}

inline BlochChannel random_cp_channel(std::mt19937_64& rng) { return bloch_from_kraus(random_kraus(rng)); }

// Random CP channel with R_xy = R_yx = R_yz = R_zy = t_y = 0, by rejection
// from uniform draws of the seven free parameters.
inline BlochChannel random_slice_channel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    FreeChannelParams p{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto ch = BlochChannel::from_free(p);
    if (min_choi_eigenvalue(ch) >= 0.0) return ch;
  }
}

// Explicit Kronecker product.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

// -sum lambda log2 lambda of a PSD (possibly unnormalized) matrix.
inline double eta_bits(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (l > 1e-15) s -= l * std::log2(l);
  }
  return s;
}

// rho_{1,AB} = (I (x) E)|Psi><Psi| built from the channel's Bloch action on
// the matrix units of B: rho_1 = sum_{ab} |a><b| (x) E(M_ab) / 2 with
// M_ab = |phi_a><phi_b|.
inline Mat joint_state_oracle(const BlochChannel& ch, double alpha) {
  const double beta = std::sqrt(1.0 - alpha * alpha);
  Vec phi[2];
  phi[0] = Vec(2);
  phi[1] = Vec(2);
  phi[0] << beta, alpha;
  phi[1] << beta, -alpha;
  const auto s = paulis_zxy();
  const auto channel_on = [&](const Mat& x) {
    // Linear extension: x = (c0 I + sum c_k s_k)/2 with c0 = Tr x, c_k = Tr[s_k x].
    const cd c0 = x.trace();
    Eigen::Vector3cd c;
    for (int k = 0; k < 3; ++k) c[k] = (s[k] * x).trace();
    const Eigen::Vector3cd out = ch.R.cast<cd>() * c + c0 * ch.t.cast<cd>();
    Mat y = c0 * Mat::Identity(2, 2);
    for (int k = 0; k < 3; ++k) y += out[k] * s[k];
    return Mat(0.5 * y);
  };
  Mat rho = Mat::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Mat unit = Mat::Zero(2, 2);
      unit(a, b) = 1.0;
      rho += 0.5 * kron(unit, channel_on(phi[a] * phi[b].adjoint()));
    }
  }
  return rho;
}

// S(X|EP) with a minimal-rank purification and the classical branches
// handled directly. For Bob's rank-one element |v><v|/2, Eve's
// unnormalized conditional state given (A = a, click v) is |w><w| with
// w_e = <a, v, e|Phi> / sqrt(2). The kept branch carries X = a; the discard
// branch carries X = 0, so it contributes equally to S(XEP) and S(EP) and
// cancels:
//   S(X|EP) = eta(sigma_0) + eta(sigma_1) - eta(sigma_0 + sigma_1),
// sigma_a = sum_{v in {phibar1, phibar0}} |w_{a,v}><w_{a,v}|.
inline double eve_ambiguity_oracle(const Mat& rho1, double alpha) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho1 + rho1.adjoint()));
  std::vector<int> keep;
  for (int i = 0; i < 4; ++i) {
    if (es.eigenvalues()[i] > 1e-13) keep.push_back(i);
  }
  const int r = static_cast<int>(keep.size());
  // Phi[(a, b), e] = sqrt(p_e) <a b|e-th eigenvector>.
  Mat phi(4, r);
  for (int e = 0; e < r; ++e) {
    phi.col(e) = std::sqrt(es.eigenvalues()[keep[e]]) * es.eigenvectors().col(keep[e]);
  }
  const double beta = std::sqrt(1.0 - alpha * alpha);
  Vec bar1(2), bar0(2);
  bar1 << alpha, beta;   // F0 = |phibar1><phibar1| / 2
  bar0 << alpha, -beta;  // F1 = |phibar0><phibar0| / 2
  Mat sigma[2] = {Mat::Zero(r, r), Mat::Zero(r, r)};
  for (int a = 0; a < 2; ++a) {
    for (const Vec* v : {&bar1, &bar0}) {
      Vec w = Vec::Zero(r);
      for (int e = 0; e < r; ++e) {
        for (int b = 0; b < 2; ++b) w[e] += std::conj((*v)[b]) * phi(2 * a + b, e);
      }
      w /= std::sqrt(2.0);
      sigma[a] += w * w.adjoint();
    }
  }
  return eta_bits(sigma[0]) + eta_bits(sigma[1]) - eta_bits(sigma[0] + sigma[1]);
}

inline OutcomeDistribution expected_statistics(const BlochChannel& ch, std::int64_t m, double alpha = 0.39,
                                               double r_pub = 0.5) {
  const auto lam = theoretical_distribution(joint_state(ch, alpha), alpha, r_pub);
  return empirical_distribution(lam, m, StatisticsMode::kExpected);
}

}  // namespace b92::testing

#endif  // B92_TESTS_SUPPORT_HPP
