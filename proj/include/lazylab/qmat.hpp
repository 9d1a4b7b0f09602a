#pragma once

// Dense complex linear algebra for desk-scale Hilbert spaces.
//
// Tensor-product index convention, shared by every module: for a bipartite
// space S (x) E the composite index of |iS>|iE> is iS * dE + iE.

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lazylab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised when a numerical routine is asked to leave its domain, e.g. the
/// logarithm of a (numerically) singular density matrix.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Subsystem { System, Environment };
enum class NormKind { Trace, Operator, Frobenius };

/// Eigenvalues ascending; eigenvectors are the matching orthonormal columns.
struct HermitianSpectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
};

namespace qmat {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kLogFloor = 1e-12;

ComplexMatrix identity(int d);

bool all_finite(const ComplexMatrix& m);

/// ||m - m^dagger||_F <= tol * (1 + ||m||_F)
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

/// Checks Hermiticity (square, finite, within tolerance) and returns the
/// symmetrized (m + m^dagger) / 2. Throws std::invalid_argument otherwise.
ComplexMatrix require_hermitian(const ComplexMatrix& m, const char* what = "matrix");

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Partial trace of an operator on S (x) E. keep = System returns tr_E m.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dS, int dE, Subsystem keep);

/// Partial transpose on the system factor.
ComplexMatrix partial_transpose_system(const ComplexMatrix& m, int dS, int dE);

HermitianSpectrum hermitian_eig(const ComplexMatrix& h);

/// Singular values in descending order.
RealVector singular_values(const ComplexMatrix& m);

/// V diag(f(lambda)) V^dagger for Hermitian h. Throws DomainError naming the
/// eigenvalue when f returns a non-finite value.
ComplexMatrix matrix_function(const ComplexMatrix& h, const std::function<double(double)>& f);

ComplexMatrix matrix_exp(const ComplexMatrix& h);
ComplexMatrix matrix_sqrt(const ComplexMatrix& h);
ComplexMatrix matrix_power(const ComplexMatrix& h, int n);

/// Natural logarithm; refuses eigenvalues below `floor` instead of clamping.
ComplexMatrix matrix_log(const ComplexMatrix& h, double floor = kLogFloor);

double norm(const ComplexMatrix& m, NormKind kind);
inline double trace_norm(const ComplexMatrix& m) { return norm(m, NormKind::Trace); }
inline double operator_norm(const ComplexMatrix& m) { return norm(m, NormKind::Operator); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(-i h t), hbar = 1.
ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t);

}  // namespace qmat
}  // namespace lazylab
