#pragma once

// Density matrices, bipartite states and the factories used to build them.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lazylab/qmat.hpp"

namespace lazylab {

inline constexpr double kStateTol = 1e-10;

/// Hermitian, unit-trace, positive semidefinite (all within kStateTol).
/// The stored matrix is the symmetrized input.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  RealVector eigenvalues() const;
  double purity() const;

 private:
  ComplexMatrix matrix_;
};

/// A density matrix on S (x) E with the row = iS * dE + iE convention.
class BipartiteState {
 public:
  BipartiteState(const ComplexMatrix& m, int dS, int dE);
  static BipartiteState from_pure(const ComplexVector& chi, int dS, int dE);

  int ds() const { return ds_; }
  int de() const { return de_; }
  int dim() const { return ds_ * de_; }
  const ComplexMatrix& matrix() const { return rho_.matrix(); }
  const DensityMatrix& density() const { return rho_; }

  DensityMatrix system() const;
  DensityMatrix environment() const;

  double purity() const { return rho_.purity(); }
  /// purity > 1 - tol
  bool is_pure(double tol = kStateTol) const { return purity() > 1.0 - tol; }
  /// Dominant eigenvector, meaningful when is_pure().
  ComplexVector pure_vector() const;

 private:
  DensityMatrix rho_;
  int ds_;
  int de_;
};

struct SchmidtDecomposition {
  RealVector coefficients;  // sqrt(p_i), descending
  ComplexMatrix left;       // dS x rank, columns psi_i
  ComplexMatrix right;      // dE x rank, columns phi_i
  int ds = 0;
  int de = 0;

  int rank() const { return static_cast<int>(coefficients.size()); }
  RealVector probabilities() const { return coefficients.array().square(); }
  ComplexVector reconstruct() const;
};

struct SpectralProjection {
  std::vector<ComplexMatrix> projectors;
  std::vector<double> values;  // descending, pairwise separated
  std::vector<int> multiplicities;

  int dim() const { return projectors.empty() ? 0 : static_cast<int>(projectors.front().rows()); }
  ComplexMatrix reconstruct() const;
};

struct Purification {
  ComplexVector vector;  // on S (x) A
  int ds = 0;
  int da = 0;
};

ComplexVector basis_vector(int d, int i);
ComplexMatrix ket_bra(const ComplexVector& ket, const ComplexVector& bra);

BipartiteState product_state(const DensityMatrix& s, const DensityMatrix& e);

ComplexVector haar_random_pure(int d, std::uint64_t seed);
DensityMatrix ginibre_mixed(int d, int rank, std::uint64_t seed);
/// GUE: unit-variance off-diagonal moduli, N(0,1) diagonal.
ComplexMatrix random_hermitian(int d, std::uint64_t seed);
/// Haar unitary from the QR decomposition of a Ginibre matrix (phase-fixed).
ComplexMatrix haar_unitary(int d, std::uint64_t seed);

BipartiteState maximally_entangled(int d);

/// sum_j p_j |j><j| (x) rho^E_j with |j> the columns of `basis`.
BipartiteState zero_discord_state(std::span<const double> probs, const ComplexMatrix& basis,
                                  std::span<const DensityMatrix> envStates);

/// sum_i sqrt(p_i) |i>|i>, the canonical pure state with the given Schmidt spectrum.
ComplexVector schmidt_vector(std::span<const double> probs, int dS, int dE);

/// Lazy state whose reduced system state has higher-rank spectral projectors.
/// The system space is cut into consecutive blocks of the given sizes; block j
/// carries weight blockProbs[j] and a mixture of maximally entangled states
/// between the block and the environment, so tr_E restricted to the block is
/// proportional to the block identity. Random local unitaries are applied on
/// both sides. Requires every block size <= dE.
BipartiteState block_lazy_state(std::span<const int> blockSizes, std::span<const double> blockProbs,
                                int dE, std::uint64_t seed);

SchmidtDecomposition schmidt_decompose(const ComplexVector& chi, int dS, int dE,
                                       double cutoff = 1e-12);

/// chi = sum_i sqrt(lambda_i) v_i (x) a_i over the support of rho. The
/// ancilla basis {a_i} defaults to the computational basis; `ancillaBasis`
/// (unitary, rank x rank) rotates it.
Purification purify(const DensityMatrix& rho,
                    const std::optional<ComplexMatrix>& ancillaBasis = std::nullopt);

/// Spectral projectors of rho with eigenvalues merged when adjacent ones
/// differ by at most clusterTol * lambda_max.
SpectralProjection spectral_projection(const DensityMatrix& rho, double clusterTol = 1e-8);

}  // namespace lazylab
