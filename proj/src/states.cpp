#include "lazylab/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lazylab/random.hpp"

namespace lazylab {

namespace {

void require_dims(int dS, int dE, const char* what) {
  if (dS < 1 || dE < 1) {
    std::ostringstream msg;
    msg << what << ": subsystem dimensions must be positive, got (" << dS << ", " << dE << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : matrix_(qmat::require_hermitian(m, "density matrix")) {
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kStateTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "density matrix trace is " << tr << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
  const double lmin = eigenvalues().minCoeff();
  if (lmin < -kStateTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "density matrix is not positive semidefinite: min eigenvalue " << lmin;
    throw std::invalid_argument(msg.str());
  }
}

RealVector DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double DensityMatrix::purity() const {
  // tr(rho^2) = ||rho||_F^2 for Hermitian rho.
  return matrix_.squaredNorm();
}

BipartiteState::BipartiteState(const ComplexMatrix& m, int dS, int dE)
    : rho_(m), ds_(dS), de_(dE) {
  require_dims(dS, dE, "BipartiteState");
  if (rho_.dim() != dS * dE) {
    std::ostringstream msg;
    msg << "BipartiteState: matrix is " << rho_.dim() << "x" << rho_.dim() << " but dims (" << dS
        << ", " << dE << ") need " << dS * dE;
    throw std::invalid_argument(msg.str());
  }
}

BipartiteState BipartiteState::from_pure(const ComplexVector& chi, int dS, int dE) {
  require_dims(dS, dE, "BipartiteState::from_pure");
  if (chi.size() != dS * dE) {
    throw std::invalid_argument("BipartiteState::from_pure: vector length does not match dims");
  }
  if (std::abs(chi.norm() - 1.0) > kStateTol) {
    throw std::invalid_argument("BipartiteState::from_pure: vector is not normalized");
  }
  return BipartiteState(chi * chi.adjoint(), dS, dE);
}

DensityMatrix BipartiteState::system() const {
  return DensityMatrix(qmat::partial_trace(matrix(), ds_, de_, Subsystem::System));
}

DensityMatrix BipartiteState::environment() const {
  return DensityMatrix(qmat::partial_trace(matrix(), ds_, de_, Subsystem::Environment));
}

ComplexVector BipartiteState::pure_vector() const {
  const HermitianSpectrum spec = qmat::hermitian_eig(matrix());
  return spec.eigenvectors.col(spec.eigenvectors.cols() - 1);
}

ComplexVector SchmidtDecomposition::reconstruct() const {
  ComplexVector chi = ComplexVector::Zero(ds * de);
  for (int i = 0; i < rank(); ++i) {
    chi += coefficients(i) * qmat::kron(ComplexVector(left.col(i)), ComplexVector(right.col(i)));
  }
  return chi;
}

ComplexMatrix SpectralProjection::reconstruct() const {
  ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
  for (std::size_t j = 0; j < projectors.size(); ++j) out += values[j] * projectors[j];
  return out;
}

ComplexVector basis_vector(int d, int i) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return v;
}

ComplexMatrix ket_bra(const ComplexVector& ket, const ComplexVector& bra) {
  return ket * bra.adjoint();
}

BipartiteState product_state(const DensityMatrix& s, const DensityMatrix& e) {
  return BipartiteState(qmat::kron(s.matrix(), e.matrix()), s.dim(), e.dim());
}

ComplexVector haar_random_pure(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("haar_random_pure: dimension must be >= 1");
  Rng rng(seed);
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

DensityMatrix ginibre_mixed(int d, int rank, std::uint64_t seed) {
  if (d < 1 || rank < 1 || rank > d) {
    std::ostringstream msg;
    msg << "ginibre_mixed: need 1 <= rank <= d, got d = " << d << ", rank = " << rank;
    throw std::invalid_argument(msg.str());
  }
  Rng rng(seed);
  const ComplexMatrix g = rng.complex_gaussian(d, rank);
  const ComplexMatrix w = g * g.adjoint();
  return DensityMatrix(w / w.trace().real());
}

ComplexMatrix random_hermitian(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_hermitian: dimension must be >= 1");
  Rng rng(seed);
  ComplexMatrix h(d, d);
  for (int i = 0; i < d; ++i) {
    h(i, i) = rng.normal();
    for (int j = i + 1; j < d; ++j) {
      h(i, j) = rng.complex_normal();
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

ComplexMatrix haar_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("haar_unitary: dimension must be >= 1");
  Rng rng(seed);
  const ComplexMatrix g = rng.complex_gaussian(d, d);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mod = std::abs(rii);
    if (mod > 0) q.col(i) *= rii / mod;
  }
  return q;
}

BipartiteState maximally_entangled(int d) {
  if (d < 2) throw std::invalid_argument("maximally_entangled: dimension must be >= 2");
  ComplexVector chi = ComplexVector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) chi(i * d + i) = amp;
  return BipartiteState::from_pure(chi, d, d);
}

BipartiteState zero_discord_state(std::span<const double> probs, const ComplexMatrix& basis,
                                  std::span<const DensityMatrix> envStates) {
  if (probs.empty()) throw std::invalid_argument("zero_discord_state: no probabilities");
  if (probs.size() != envStates.size() || static_cast<Eigen::Index>(probs.size()) != basis.cols()) {
    throw std::invalid_argument(
        "zero_discord_state: probs, basis columns and environment states must have equal counts");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("zero_discord_state: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kStateTol) {
    throw std::invalid_argument("zero_discord_state: probabilities do not sum to 1");
  }
  const ComplexMatrix gram = basis.adjoint() * basis;
  if ((gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).norm() > kStateTol) {
    throw std::invalid_argument("zero_discord_state: basis vectors are not orthonormal");
  }
  const int dS = static_cast<int>(basis.rows());
  const int dE = envStates.front().dim();
  ComplexMatrix rho = ComplexMatrix::Zero(dS * dE, dS * dE);
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (envStates[j].dim() != dE) {
      throw std::invalid_argument("zero_discord_state: environment states differ in dimension");
    }
    const ComplexVector ket = basis.col(static_cast<Eigen::Index>(j));
    rho += probs[j] * qmat::kron(ket_bra(ket, ket), envStates[j].matrix());
  }
  return BipartiteState(rho, dS, dE);
}

ComplexVector schmidt_vector(std::span<const double> probs, int dS, int dE) {
  require_dims(dS, dE, "schmidt_vector");
  if (static_cast<int>(probs.size()) > std::min(dS, dE)) {
    throw std::invalid_argument("schmidt_vector: more coefficients than min(dS, dE)");
  }
  ComplexVector chi = ComplexVector::Zero(dS * dE);
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw std::invalid_argument("schmidt_vector: negative probability");
    total += probs[i];
    const int k = static_cast<int>(i);
    chi(k * dE + k) = std::sqrt(probs[i]);
  }
  if (std::abs(total - 1.0) > kStateTol) {
    throw std::invalid_argument("schmidt_vector: probabilities do not sum to 1");
  }
  return chi;
}

BipartiteState block_lazy_state(std::span<const int> blockSizes, std::span<const double> blockProbs,
                                int dE, std::uint64_t seed) {
  if (blockSizes.empty() || blockSizes.size() != blockProbs.size()) {
    throw std::invalid_argument("block_lazy_state: block sizes and weights must match");
  }
  int dS = 0;
  for (int r : blockSizes) {
    if (r < 1 || r > dE) throw std::invalid_argument("block_lazy_state: need 1 <= block size <= dE");
    dS += r;
  }
  Rng rng(seed);
  constexpr int kMixture = 2;
  ComplexMatrix rho = ComplexMatrix::Zero(dS * dE, dS * dE);
  int offset = 0;
  std::uint64_t stream = 0;
  for (std::size_t j = 0; j < blockSizes.size(); ++j) {
    const int r = blockSizes[j];
    ComplexVector phi = ComplexVector::Zero(dS * dE);
    for (int i = 0; i < r; ++i) phi((offset + i) * dE + i) = 1.0 / std::sqrt(static_cast<double>(r));
    // Mixture of environment-rotated copies keeps tr_E on the block = I/r.
    std::vector<double> w(kMixture);
    double wsum = 0.0;
    for (double& x : w) {
      x = std::abs(rng.normal()) + 0.1;
      wsum += x;
    }
    for (int k = 0; k < kMixture; ++k) {
      const ComplexMatrix ue = haar_unitary(dE, derive_seed(seed, ++stream));
      const ComplexVector v = qmat::kron(qmat::identity(dS), ue) * phi;
      rho += blockProbs[j] * (w[k] / wsum) * ket_bra(v, v);
    }
    offset += r;
  }
  const ComplexMatrix us = haar_unitary(dS, derive_seed(seed, ++stream));
  const ComplexMatrix ue = haar_unitary(dE, derive_seed(seed, ++stream));
  const ComplexMatrix u = qmat::kron(us, ue);
  return BipartiteState(u * rho * u.adjoint(), dS, dE);
}

SchmidtDecomposition schmidt_decompose(const ComplexVector& chi, int dS, int dE, double cutoff) {
  require_dims(dS, dE, "schmidt_decompose");
  if (chi.size() != dS * dE) {
    throw std::invalid_argument("schmidt_decompose: vector length does not match dims");
  }
  if (std::abs(chi.norm() - 1.0) > kStateTol) {
    throw std::invalid_argument("schmidt_decompose: vector is not normalized");
  }
  // C(a, b) = chi(a * dE + b) = sum_i s_i u_i(a) conj(v_i(b)).
  ComplexMatrix c(dS, dE);
  for (int a = 0; a < dS; ++a)
    for (int b = 0; b < dE; ++b) c(a, b) = chi(a * dE + b);
  Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  SchmidtDecomposition out;
  out.ds = dS;
  out.de = dE;
  out.coefficients = sv.head(rank);
  out.left = svd.matrixU().leftCols(rank);
  out.right = svd.matrixV().leftCols(rank).conjugate();
  return out;
}

Purification purify(const DensityMatrix& rho, const std::optional<ComplexMatrix>& ancillaBasis) {
  const HermitianSpectrum spec = qmat::hermitian_eig(rho.matrix());
  std::vector<int> support;
  for (int i = static_cast<int>(spec.eigenvalues.size()) - 1; i >= 0; --i) {
    if (spec.eigenvalues(i) > qmat::kLogFloor) support.push_back(i);
  }
  const int da = static_cast<int>(support.size());
  ComplexMatrix basis = ComplexMatrix::Identity(da, da);
  if (ancillaBasis) {
    if (ancillaBasis->rows() != da || ancillaBasis->cols() != da) {
      throw std::invalid_argument("purify: ancilla basis must be rank x rank");
    }
    basis = *ancillaBasis;
  }
  const int d = rho.dim();
  ComplexVector chi = ComplexVector::Zero(d * da);
  for (int k = 0; k < da; ++k) {
    const double lambda = spec.eigenvalues(support[k]);
    chi += std::sqrt(lambda) *
           qmat::kron(ComplexVector(spec.eigenvectors.col(support[k])), ComplexVector(basis.col(k)));
  }
  // Renormalize the dropped sub-floor weight away.
  chi /= chi.norm();
  return {chi, d, da};
}

SpectralProjection spectral_projection(const DensityMatrix& rho, double clusterTol) {
  const HermitianSpectrum spec = qmat::hermitian_eig(rho.matrix());
  const int d = rho.dim();
  const double scale = std::max(std::abs(spec.eigenvalues(d - 1)), std::abs(spec.eigenvalues(0)));
  const double tol = clusterTol * (scale > 0 ? scale : 1.0);

  SpectralProjection out;
  int i = d - 1;
  while (i >= 0) {
    int j = i;
    while (j - 1 >= 0 && spec.eigenvalues(j) - spec.eigenvalues(j - 1) <= tol) --j;
    // Cluster spans eigenvalue indices [j, i].
    const int m = i - j + 1;
    const ComplexMatrix v = spec.eigenvectors.middleCols(j, m);
    out.projectors.push_back(v * v.adjoint());
    out.values.push_back(spec.eigenvalues.segment(j, m).mean());
    out.multiplicities.push_back(m);
    i = j - 1;
  }
  return out;
}

}  // namespace lazylab
