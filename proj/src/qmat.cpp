#include "lazylab/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lazylab {

ComplexMatrix HermitianSpectrum::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

namespace qmat {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream msg;
    msg << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  return (m - m.adjoint()).norm() <= tol * (1.0 + m.norm());
}

ComplexMatrix require_hermitian(const ComplexMatrix& m, const char* what) {
  require_square(m, what);
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + " has non-finite entries");
  }
  if (!is_hermitian(m)) {
    std::ostringstream msg;
    msg << what << " is not Hermitian: ||m - m^dagger||_F = " << (m - m.adjoint()).norm();
    throw std::invalid_argument(msg.str());
  }
  return (m + m.adjoint()) * 0.5;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dS, int dE, Subsystem keep) {
  if (dS < 1 || dE < 1 || m.rows() != dS * dE || m.cols() != dS * dE) {
    std::ostringstream msg;
    msg << "partial_trace: expected a " << dS * dE << "x" << dS * dE << " matrix for dims (" << dS
        << ", " << dE << "), got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
  if (keep == Subsystem::System) {
    ComplexMatrix out = ComplexMatrix::Zero(dS, dS);
    for (int a = 0; a < dS; ++a)
      for (int b = 0; b < dS; ++b)
        for (int e = 0; e < dE; ++e) out(a, b) += m(a * dE + e, b * dE + e);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dE, dE);
  for (int s = 0; s < dS; ++s) out += m.block(s * dE, s * dE, dE, dE);
  return out;
}

ComplexMatrix partial_transpose_system(const ComplexMatrix& m, int dS, int dE) {
  if (m.rows() != dS * dE || m.cols() != dS * dE) {
    throw std::invalid_argument("partial_transpose_system: dimension mismatch");
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (int a = 0; a < dS; ++a)
    for (int b = 0; b < dS; ++b)
      out.block(a * dE, b * dE, dE, dE) = m.block(b * dE, a * dE, dE, dE);
  return out;
}

HermitianSpectrum hermitian_eig(const ComplexMatrix& h) {
  ComplexMatrix sym = require_hermitian(h, "hermitian_eig input");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  // BDCSVD falls back to Jacobi below its block size; values come out descending.
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

ComplexMatrix matrix_function(const ComplexMatrix& h, const std::function<double(double)>& f) {
  const HermitianSpectrum spec = hermitian_eig(h);
  RealVector fl(spec.eigenvalues.size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) {
    fl(i) = f(spec.eigenvalues(i));
    if (!std::isfinite(fl(i))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "matrix_function: f is undefined at eigenvalue " << spec.eigenvalues(i);
      throw DomainError(msg.str());
    }
  }
  return spec.eigenvectors * fl.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
}

ComplexMatrix matrix_exp(const ComplexMatrix& h) {
  return matrix_function(h, [](double x) { return std::exp(x); });
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& h) {
  // Tiny negative eigenvalues from roundoff are treated as zero.
  return matrix_function(h, [](double x) {
    if (x < -1e-12) return std::nan("");
    return std::sqrt(std::max(x, 0.0));
  });
}

ComplexMatrix matrix_power(const ComplexMatrix& h, int n) {
  if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
  require_square(h, "matrix_power input");
  ComplexMatrix out = ComplexMatrix::Identity(h.rows(), h.cols());
  for (int k = 0; k < n; ++k) out = out * h;
  return out;
}

ComplexMatrix matrix_log(const ComplexMatrix& h, double floor) {
  return matrix_function(h, [floor](double x) {
    if (x < floor) return std::nan("");
    return std::log(x);
  });
}

double norm(const ComplexMatrix& m, NormKind kind) {
  if (m.size() == 0) return 0.0;
  switch (kind) {
    case NormKind::Frobenius:
      return m.norm();
    case NormKind::Operator:
      return singular_values(m)(0);
    case NormKind::Trace:
      return singular_values(m).sum();
  }
  return 0.0;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    std::ostringstream msg;
    msg << "commutator: operands must be square with equal size, got " << a.rows() << "x"
        << a.cols() << " and " << b.rows() << "x" << b.cols();
    throw std::invalid_argument(msg.str());
  }
  return a * b - b * a;
}

ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t) {
  const HermitianSpectrum spec = hermitian_eig(h);
  ComplexVector phases(spec.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, -spec.eigenvalues(i) * t);
  }
  return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

}  // namespace qmat
}  // namespace lazylab
