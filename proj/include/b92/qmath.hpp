#ifndef B92_QMATH_HPP
#define B92_QMATH_HPP

// Dense complex linear algebra for small (dim <= 64) Hermitian operators:
// Kronecker products, labeled partial traces, spectra, entropies and
// purifications. Every entropy in this library is in bits.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "b92/errors.hpp"

namespace b92 {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
// Eigenvalues in [-kSpectrumClamp, 0) are treated as numerical zeros.
inline constexpr double kSpectrumClamp = 1e-10;
inline constexpr Index kMaxDim = 64;

namespace pauli {

inline ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

inline ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

inline ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace pauli

inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

inline ComplexMatrix ket_bra(const ComplexVector& ket, const ComplexVector& bra) {
  return ket * bra.adjoint();
}

inline ComplexMatrix projector(const ComplexVector& v) { return ket_bra(v, v); }

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

// Averages m with its adjoint; removes rounding asymmetry from products.
inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

struct HermitianEigen {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // column k pairs with values[k]
};

inline HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DomainError("hermitian_eigen: matrix is not square");
  }
  const double tol = kHermitianTol * std::max(1.0, max_abs(m));
  if (!is_hermitian(m, tol)) {
    throw DomainError("hermitian_eigen: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw DomainError("hermitian_eigen: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  return hermitian_eigen(m).values;
}

// Partial trace of an operator on a tensor product with the given factor
// dimensions (first factor most significant). keep[k] selects factor k.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<Index>& dims,
                                   const std::vector<bool>& keep) {
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  if (m.rows() != total || m.cols() != total || keep.size() != dims.size()) {
    throw LabelError("partial_trace: factor dimensions do not match the operator");
  }
  const std::size_t nf = dims.size();
  Index kept_dim = 1;
  for (std::size_t k = 0; k < nf; ++k) {
    if (keep[k]) kept_dim *= dims[k];
  }
  // Split every full index into (kept index, traced index).
  std::vector<Index> kept_of(static_cast<std::size_t>(total));
  std::vector<Index> traced_of(static_cast<std::size_t>(total));
  for (Index full = 0; full < total; ++full) {
    Index rest = full;
    Index kept = 0, kept_stride = 1;
    Index traced = 0, traced_stride = 1;
    for (std::size_t k = nf; k-- > 0;) {
      const Index digit = rest % dims[k];
      rest /= dims[k];
      if (keep[k]) {
        kept += digit * kept_stride;
        kept_stride *= dims[k];
      } else {
        traced += digit * traced_stride;
        traced_stride *= dims[k];
      }
    }
    kept_of[static_cast<std::size_t>(full)] = kept;
    traced_of[static_cast<std::size_t>(full)] = traced;
  }
  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (Index i = 0; i < total; ++i) {
    const auto ti = traced_of[static_cast<std::size_t>(i)];
    const auto ki = kept_of[static_cast<std::size_t>(i)];
    for (Index j = 0; j < total; ++j) {
      if (traced_of[static_cast<std::size_t>(j)] == ti) {
        out(ki, kept_of[static_cast<std::size_t>(j)]) += m(i, j);
      }
    }
  }
  return out;
}

// -0 log 0 := 0; entries in [-kSpectrumClamp, 0) are clamped to zero.
inline double entropy_bits(const RealVector& spectrum) {
  double h = 0.0;
  for (const double raw : spectrum) {
    if (raw < -kSpectrumClamp) {
      std::ostringstream msg;
      msg << "entropy: eigenvalue " << raw << " is below -" << kSpectrumClamp;
      throw NotAStateError(msg.str());
    }
    if (raw > 0.0) h -= raw * std::log2(raw);
  }
  return h;
}

inline double binary_entropy(double p) {
  RealVector v(2);
  v << p, 1.0 - p;
  return entropy_bits(v);
}

struct Factor {
  std::string label;
  Index dim = 0;

  friend bool operator==(const Factor&, const Factor&) = default;
};

using Factors = std::vector<Factor>;

inline Index total_dim(const Factors& factors) {
  Index d = 1;
  for (const auto& f : factors) d *= f.dim;
  return d;
}

// Hermitian, PSD, unit-trace operator over labeled tensor factors.
class DensityMatrix {
 public:
  struct Trusted {};

  DensityMatrix(ComplexMatrix matrix, Factors factors)
      : DensityMatrix(std::move(matrix), std::move(factors), Trusted{}) {
    validate_spectrum();
  }

  // Skips the spectral PSD check; for outputs of CPTP maps applied to
  // states that were already validated.
  DensityMatrix(ComplexMatrix matrix, Factors factors, Trusted)
      : matrix_(std::move(matrix)), factors_(std::move(factors)) {
    validate_shape();
    matrix_ = hermitian_part(matrix_);
  }

  static DensityMatrix single(ComplexMatrix matrix, std::string label = "S") {
    const Index d = matrix.rows();
    return DensityMatrix(std::move(matrix), Factors{{std::move(label), d}});
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const Factors& factors() const { return factors_; }
  Index dim() const { return matrix_.rows(); }

  std::vector<Index> dims() const {
    std::vector<Index> d;
    d.reserve(factors_.size());
    for (const auto& f : factors_) d.push_back(f.dim);
    return d;
  }

  std::size_t factor_index(const std::string& label) const {
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      if (factors_[k].label == label) return k;
    }
    throw LabelError("unknown subsystem label '" + label + "'");
  }

 private:
  void validate_shape() const {
    if (matrix_.rows() != matrix_.cols()) {
      throw NotAStateError("density matrix must be square");
    }
    if (matrix_.rows() > kMaxDim) {
      throw DomainError("density matrix dimension exceeds 64");
    }
    if (factors_.empty() || total_dim(factors_) != matrix_.rows()) {
      throw LabelError("product of factor dimensions does not equal the matrix dimension");
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      for (std::size_t j = i + 1; j < factors_.size(); ++j) {
        if (factors_[i].label == factors_[j].label) {
          throw LabelError("duplicate subsystem label '" + factors_[i].label + "'");
        }
      }
    }
    if (!is_hermitian(matrix_, 1e-10)) {
      throw NotAStateError("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > kTraceTol) {
      std::ostringstream msg;
      msg << "density matrix trace " << matrix_.trace().real() << " differs from 1";
      throw NotAStateError(msg.str());
    }
  }

  void validate_spectrum() const {
    const RealVector ev = hermitian_eigenvalues(matrix_);
    if (ev.size() > 0 && ev.minCoeff() < -kSpectrumClamp) {
      throw NotAStateError("density matrix has a negative eigenvalue");
    }
  }

  ComplexMatrix matrix_;
  Factors factors_;
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Factors f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return DensityMatrix(tensor(a.matrix(), b.matrix()), std::move(f), DensityMatrix::Trusted{});
}

// Traces out every factor not listed in keep. Kept factors stay in their
// original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  if (keep.empty()) throw LabelError("partial_trace: keep set is empty");
  std::vector<bool> mask(rho.factors().size(), false);
  for (const auto& label : keep) mask[rho.factor_index(label)] = true;
  Factors kept;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask[k]) kept.push_back(rho.factors()[k]);
  }
  return DensityMatrix(partial_trace(rho.matrix(), rho.dims(), mask), std::move(kept),
                       DensityMatrix::Trusted{});
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_bits(hermitian_eigenvalues(rho.matrix()));
}

class PureState {
 public:
  explicit PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw DomainError("pure state must have positive dimension");
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-12) {
      throw NotAStateError("pure state is not normalized");
    }
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Index dim() const { return amplitudes_.size(); }

  Complex inner(const PureState& other) const { return amplitudes_.dot(other.amplitudes_); }

  DensityMatrix density(Factors factors) const {
    return DensityMatrix(projector(amplitudes_), std::move(factors), DensityMatrix::Trusted{});
  }

 private:
  ComplexVector amplitudes_;
};

// Purification sum_i sqrt(p_i) |e_i> (x) |i> with an environment of the same
// dimension as rho; zero-weight branches are kept so the shape is static.
inline PureState purify(const DensityMatrix& rho) {
  const auto eig = hermitian_eigen(rho.matrix());
  const Index d = rho.dim();
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) {
    const double p = eig.values[i];
    if (p < -kSpectrumClamp) throw NotAStateError("purify: negative eigenvalue");
    if (p <= 0.0) continue;
    ComplexVector env = ComplexVector::Zero(d);
    env[i] = 1.0;
    psi += std::sqrt(p) * tensor(ComplexVector(eig.vectors.col(i)), env);
  }
  // Clamped eigenvalues can leave the norm off by ~1e-10.
  psi.normalize();
  return PureState(std::move(psi));
}

}  // namespace b92

#endif  // B92_QMATH_HPP
