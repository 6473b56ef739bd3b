#ifndef B92_CHANNEL_HPP
#define B92_CHANNEL_HPP

// Qubit channels as affine maps on Bloch vectors. Every public interface
// orders Bloch coordinates as (z, x, y):
//
//   (z, x, y)^T  ->  R (z, x, y)^T + t
//
// The Choi matrix uses the unnormalized maximally entangled input
// sum_ij |ii><jj|, so its trace is 2 for every channel.

#include <Eigen/Dense>

#include <array>
#include <string>

#include "b92/errors.hpp"
#include "b92/qmath.hpp"

namespace b92 {

inline constexpr double kDefaultCpTol = 1e-9;

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

// Pauli operators in (z, x, y) order.
inline std::array<ComplexMatrix, 3> bloch_paulis() {
  return {pauli::z(), pauli::x(), pauli::y()};
}

inline Vector3 bloch_vector(const ComplexMatrix& rho) {
  const auto s = bloch_paulis();
  Vector3 v;
  for (int k = 0; k < 3; ++k) v[k] = (rho * s[static_cast<std::size_t>(k)]).trace().real();
  return v;
}

inline ComplexMatrix from_bloch_vector(const Vector3& v) {
  const auto s = bloch_paulis();
  ComplexMatrix rho = pauli::identity();
  for (int k = 0; k < 3; ++k) rho += v[k] * s[static_cast<std::size_t>(k)];
  return 0.5 * rho;
}

// The seven parameters left after fixing R_xy = R_yx = R_yz = R_zy = t_y = 0.
struct FreeChannelParams {
  double r_zz = 0.0;
  double r_zx = 0.0;
  double r_xz = 0.0;
  double r_xx = 0.0;
  double r_yy = 0.0;
  double t_z = 0.0;
  double t_x = 0.0;

  static constexpr int kSize = 7;

  Eigen::Matrix<double, kSize, 1> to_vector() const {
    Eigen::Matrix<double, kSize, 1> v;
    v << r_zz, r_zx, r_xz, r_xx, r_yy, t_z, t_x;
    return v;
  }

  static FreeChannelParams from_vector(const Eigen::VectorXd& v) {
    if (v.size() != kSize) throw DomainError("FreeChannelParams needs 7 entries");
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
};

// Entries of R and t of a CP channel lie in [-1, 1]; this is a consequence
// of is_cp, not enforced on construction, so that search routines can
// evaluate slack diagnostics at non-physical points.
struct BlochChannel {
  Matrix3 R = Matrix3::Identity();
  Vector3 t = Vector3::Zero();

  static BlochChannel identity() { return {}; }

  // R = 0, t = 0: every state goes to I/2.
  static BlochChannel full_contraction() { return {Matrix3::Zero(), Vector3::Zero()}; }

  static BlochChannel from_free(const FreeChannelParams& p) {
    BlochChannel ch;
    ch.R << p.r_zz, p.r_zx, 0.0,
            p.r_xz, p.r_xx, 0.0,
            0.0,    0.0,    p.r_yy;
    ch.t << p.t_z, p.t_x, 0.0;
    return ch;
  }

  // Parameter vector (R row-major, then t) of length 12.
  Eigen::VectorXd to_vector() const {
    Eigen::VectorXd v(12);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) v[3 * i + j] = R(i, j);
    }
    v.tail<3>() = t;
    return v;
  }

  static BlochChannel from_vector(const Eigen::VectorXd& v) {
    if (v.size() != 12) throw DomainError("BlochChannel needs 12 entries");
    BlochChannel ch;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) ch.R(i, j) = v[3 * i + j];
    }
    ch.t = v.tail<3>();
    return ch;
  }

  FreeChannelParams free_params() const {
    return {R(0, 0), R(0, 1), R(1, 0), R(1, 1), R(2, 2), t[0], t[1]};
  }

  bool has_bounded_entries() const {
    return R.cwiseAbs().maxCoeff() <= 1.0 + 1e-12 && t.cwiseAbs().maxCoeff() <= 1.0 + 1e-12;
  }
};

inline BlochChannel mix(const BlochChannel& a, const BlochChannel& b, double lambda) {
  return {(1.0 - lambda) * a.R + lambda * b.R, (1.0 - lambda) * a.t + lambda * b.t};
}

// Linear extension of the channel to all 2x2 complex operators.
inline ComplexMatrix apply_linear(const BlochChannel& ch, const ComplexMatrix& x) {
  const auto s = bloch_paulis();
  Eigen::Vector3cd coeff;
  for (int k = 0; k < 3; ++k) coeff[k] = (x * s[static_cast<std::size_t>(k)]).trace();
  const Complex tr = x.trace();
  const Eigen::Vector3cd out = ch.R.cast<Complex>() * coeff + tr * ch.t.cast<Complex>();
  ComplexMatrix y = tr * pauli::identity();
  for (int k = 0; k < 3; ++k) y += out[k] * s[static_cast<std::size_t>(k)];
  return 0.5 * y;
}

inline DensityMatrix apply(const BlochChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DomainError("apply: channel acts on qubit states only");
  const Vector3 v = ch.R * bloch_vector(rho.matrix()) + ch.t;
  return DensityMatrix(from_bloch_vector(v), rho.factors(), DensityMatrix::Trusted{});
}

// Transfer matrix T with vec(E(X)) = T vec(X), vec stacking rows of X.
inline ComplexMatrix transfer_matrix(const BlochChannel& ch) {
  ComplexMatrix T(4, 4);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(2, 2);
      unit(i, j) = 1.0;
      const ComplexMatrix img = apply_linear(ch, unit);
      for (Index a = 0; a < 2; ++a) {
        for (Index b = 0; b < 2; ++b) T(2 * a + b, 2 * i + j) = img(a, b);
      }
    }
  }
  return T;
}

// (I (x) E) applied to an operator on C^d (x) C^2; no validity checks.
inline ComplexMatrix apply_on_second_factor_raw(const BlochChannel& ch, const ComplexMatrix& m) {
  const ComplexMatrix T = transfer_matrix(ch);
  const Index da = m.rows() / 2;
  ComplexMatrix out(m.rows(), m.cols());
  ComplexVector blk(4);
  for (Index a = 0; a < da; ++a) {
    for (Index b = 0; b < da; ++b) {
      blk << m(2 * a, 2 * b), m(2 * a, 2 * b + 1), m(2 * a + 1, 2 * b), m(2 * a + 1, 2 * b + 1);
      const ComplexVector img = T * blk;
      out(2 * a, 2 * b) = img[0];
      out(2 * a, 2 * b + 1) = img[1];
      out(2 * a + 1, 2 * b) = img[2];
      out(2 * a + 1, 2 * b + 1) = img[3];
    }
  }
  return out;
}

inline DensityMatrix apply_on_second_factor(const BlochChannel& ch, const DensityMatrix& rho) {
  const auto& f = rho.factors();
  if (f.size() != 2 || f[1].dim != 2) {
    throw LabelError("apply_on_second_factor: expected two factors with a qubit second factor");
  }
  return DensityMatrix(apply_on_second_factor_raw(ch, rho.matrix()), f, DensityMatrix::Trusted{});
}

inline ComplexMatrix choi(const BlochChannel& ch) {
  ComplexMatrix c(4, 4);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(2, 2);
      unit(i, j) = 1.0;
      c.block(2 * i, 2 * j, 2, 2) = apply_linear(ch, unit);
    }
  }
  return hermitian_part(c);
}

inline double min_choi_eigenvalue(const BlochChannel& ch) {
  return hermitian_eigenvalues(choi(ch)).minCoeff();
}

inline bool is_cp(const BlochChannel& ch, double tol = kDefaultCpTol) {
  if (tol < 0.0) throw DomainError("is_cp: tolerance must be non-negative");
  return min_choi_eigenvalue(ch) >= -tol;
}

enum class DepolarizingConvention {
  // R = (1 - 4q/3) I, the Bloch form used for the key-rate curves.
  kBloch4q3,
  // E(rho) = (1 - q) rho + (q/2) I, i.e. R = (1 - q) I.
  kKraus1q,
};

inline BlochChannel depolarizing(double q,
                                 DepolarizingConvention convention = DepolarizingConvention::kBloch4q3) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("depolarizing: q must lie in [0, 1]");
  const double scale = convention == DepolarizingConvention::kBloch4q3 ? 1.0 - 4.0 * q / 3.0 : 1.0 - q;
  return {scale * Matrix3::Identity(), Vector3::Zero()};
}

inline BlochChannel depolarizing_kraus(double q) {
  return depolarizing(q, DepolarizingConvention::kKraus1q);
}

inline std::string to_string(DepolarizingConvention c) {
  return c == DepolarizingConvention::kBloch4q3 ? "bloch-4q3" : "kraus-1q";
}

inline DepolarizingConvention parse_depolarizing_convention(const std::string& s) {
  if (s == "bloch-4q3") return DepolarizingConvention::kBloch4q3;
  if (s == "kraus-1q") return DepolarizingConvention::kKraus1q;
  throw DomainError("unknown depolarizing convention '" + s + "' (expected bloch-4q3 or kraus-1q)");
}

}  // namespace b92

#endif  // B92_CHANNEL_HPP
