#include "lazylab/laziness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lazylab {

namespace {

ComplexMatrix checked_interaction(const BipartiteState& rho, const ComplexMatrix& hInt) {
  if (hInt.rows() != rho.dim() || hInt.cols() != rho.dim()) {
    std::ostringstream msg;
    msg << "interaction Hamiltonian is " << hInt.rows() << "x" << hInt.cols() << ", state needs "
        << rho.dim() << "x" << rho.dim();
    throw std::invalid_argument(msg.str());
  }
  return qmat::require_hermitian(hInt, "interaction Hamiltonian");
}

// tr(a b) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

// tr(H C) for Hermitian H and anti-Hermitian C is purely imaginary; returns
// its imaginary part after checking the real residue.
double imaginary_trace(const ComplexMatrix& h, const ComplexMatrix& c, const char* what) {
  const Complex z = trace_of_product(h, c);
  const double scale = std::max(1.0, h.norm() * c.norm());
  if (std::abs(z.real()) > 1e-10 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": non-real rate, residue " << z.real();
    throw std::runtime_error(msg.str());
  }
  // + 0.0 folds -0 into +0.
  return z.imag() + 0.0;
}

void require_full_rank(const DensityMatrix& rhoS) {
  const double lmin = rhoS.eigenvalues().minCoeff();
  if (lmin <= qmat::kLogFloor) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "reduced system state is rank-deficient (min eigenvalue " << lmin
        << "); the entropy rate needs ln(rho^S), use explicit regularization";
    throw DomainError(msg.str());
  }
}

}  // namespace

double default_lazy_tolerance(const BipartiteState& rho) {
  return 1e-10 * rho.ds() * rho.de();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double l : rho.eigenvalues()) {
    if (l > 0.0) s -= l * std::log(l);
  }
  return std::clamp(s, 0.0, std::log(static_cast<double>(rho.dim())));
}

std::map<int, double> moments(const DensityMatrix& rho, std::span<const int> orders) {
  const RealVector lambda = rho.eigenvalues().cwiseMax(0.0);
  std::map<int, double> out;
  for (int n : orders) {
    if (n < 1) throw std::invalid_argument("moments: order must be >= 1");
    out[n] = lambda.array().pow(n).sum();
  }
  return out;
}

CommutatorReport laziness_commutator(const BipartiteState& rho, std::optional<double> tolerance) {
  CommutatorReport rep;
  const ComplexMatrix lifted = qmat::kron(rho.system().matrix(), qmat::identity(rho.de()));
  rep.commutator = qmat::commutator(lifted, rho.matrix());
  rep.traceNorm = qmat::trace_norm(rep.commutator);
  rep.frobeniusNorm = rep.commutator.norm();
  rep.tolerance = tolerance.value_or(default_lazy_tolerance(rho));
  rep.lazy = rep.traceNorm <= rep.tolerance;
  return rep;
}

ComplexMatrix log_commutator(const BipartiteState& rho) {
  const DensityMatrix rhoS = rho.system();
  require_full_rank(rhoS);
  const ComplexMatrix lifted = qmat::kron(qmat::matrix_log(rhoS.matrix()), qmat::identity(rho.de()));
  return qmat::commutator(lifted, rho.matrix());
}

BipartiteState spectral_pinch(const BipartiteState& rho, const SpectralProjection& proj) {
  if (proj.dim() != rho.ds()) {
    std::ostringstream msg;
    msg << "spectral_pinch: projectors act on dimension " << proj.dim() << ", system has "
        << rho.ds();
    throw std::invalid_argument(msg.str());
  }
  const ComplexMatrix idE = qmat::identity(rho.de());
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const ComplexMatrix& p : proj.projectors) {
    const ComplexMatrix lifted = qmat::kron(p, idE);
    out += lifted * rho.matrix() * lifted;
  }
  return BipartiteState(out, rho.ds(), rho.de());
}

double pinching_residual(const BipartiteState& rho, double clusterTol) {
  const SpectralProjection proj = spectral_projection(rho.system(), clusterTol);
  return qmat::trace_norm(rho.matrix() - spectral_pinch(rho, proj).matrix());
}

BipartiteState regularized(const BipartiteState& rho, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("regularization weight must lie in [0, 1]");
  }
  const int d = rho.dim();
  return BipartiteState((1.0 - delta) * rho.matrix() + (delta / d) * qmat::identity(d), rho.ds(),
                        rho.de());
}

double entropy_rate(const BipartiteState& rho, const ComplexMatrix& hInt,
                    std::optional<double> regularize) {
  const ComplexMatrix h = checked_interaction(rho, hInt);
  if (regularize) {
    return entropy_rate(regularized(rho, *regularize), h, std::nullopt);
  }
  const ComplexMatrix k = log_commutator(rho);
  // -i tr(H K) = Im tr(H K)
  return imaginary_trace(h, k, "entropy_rate");
}

double moment_rate(const BipartiteState& rho, const ComplexMatrix& hInt, int order) {
  if (order < 1) throw std::invalid_argument("moment_rate: order must be >= 1");
  const ComplexMatrix h = checked_interaction(rho, hInt);
  if (order == 1) return 0.0;
  const ComplexMatrix power = qmat::matrix_power(rho.system().matrix(), order - 1);
  const ComplexMatrix c =
      qmat::commutator(qmat::kron(power, qmat::identity(rho.de())), rho.matrix());
  // i N tr(H C) = -N Im tr(H C)
  return -order * imaginary_trace(h, c, "moment_rate") + 0.0;
}

RateReport rate_bounds(const BipartiteState& rho, const ComplexMatrix& hInt,
                       std::span<const int> momentOrders, std::optional<double> regularize) {
  if (regularize) return rate_bounds(regularized(rho, *regularize), hInt, momentOrders);

  const ComplexMatrix h = checked_interaction(rho, hInt);
  RateReport rep;
  rep.entropyRate = entropy_rate(rho, h);
  rep.purityRate = moment_rate(rho, h, 2);
  for (int n : momentOrders) rep.momentRates[n] = moment_rate(rho, h, n);

  rep.hIntOperatorNorm = qmat::operator_norm(h);
  rep.lnCommutatorTraceNorm = qmat::trace_norm(log_commutator(rho));
  rep.commutatorTraceNorm = laziness_commutator(rho).traceNorm;
  rep.entropyBound = rep.hIntOperatorNorm * rep.lnCommutatorTraceNorm;
  rep.purityBound = 2.0 * rep.hIntOperatorNorm * rep.commutatorTraceNorm;
  if (rho.is_pure()) {
    const double mi = std::max(0.0, correlation_measures(rho).mutualInformation);
    rep.miPurityBound = 4.0 * rep.hIntOperatorNorm * std::sqrt(2.0 * mi);
  }
  return rep;
}

WitnessHamiltonian witness_hamiltonian(const BipartiteState& rho) {
  WitnessHamiltonian out;
  if (laziness_commutator(rho).lazy) {
    out.hInt = ComplexMatrix::Zero(rho.dim(), rho.dim());
    return out;
  }
  const ComplexMatrix k = log_commutator(rho);
  const ComplexMatrix h = Complex(0.0, 1.0) * k;
  out.hInt = (h + h.adjoint()) * 0.5;
  out.predictedRate = -k.squaredNorm();
  return out;
}

CorrelationReport correlation_measures(const BipartiteState& rho) {
  CorrelationReport rep;
  const DensityMatrix rhoS = rho.system();
  const DensityMatrix rhoE = rho.environment();
  rep.systemEntropy = von_neumann_entropy(rhoS);
  rep.environmentEntropy = von_neumann_entropy(rhoE);
  rep.totalEntropy = von_neumann_entropy(rho.density());
  rep.mutualInformation = rep.systemEntropy + rep.environmentEntropy - rep.totalEntropy;

  const ComplexMatrix pt = qmat::partial_transpose_system(rho.matrix(), rho.ds(), rho.de());
  rep.negativity = std::max(0.0, (qmat::trace_norm(pt) - 1.0) / 2.0);

  if (!rho.is_pure()) return rep;

  rep.entanglementEntropy = rep.systemEntropy;
  const SchmidtDecomposition schmidt = schmidt_decompose(rho.pure_vector(), rho.ds(), rho.de());

  // Discord S -> E: measuring S in its Schmidt basis is optimal for a pure
  // state, so delta = I - [S(rho^E) - sum_i p_i S(rho^E_i)].
  const RealVector p = schmidt.probabilities();
  const ComplexMatrix idE = qmat::identity(rho.de());
  double conditional = 0.0;
  for (int i = 0; i < schmidt.rank(); ++i) {
    const ComplexVector psi = schmidt.left.col(i);
    const ComplexMatrix lifted = qmat::kron(ket_bra(psi, psi), idE);
    const ComplexMatrix post = lifted * rho.matrix() * lifted;
    const ComplexMatrix condE =
        qmat::partial_trace(post, rho.ds(), rho.de(), Subsystem::Environment) / p(i);
    conditional += p(i) * von_neumann_entropy(DensityMatrix(condE / condE.trace().real()));
  }
  const double classical = rep.environmentEntropy - conditional;
  rep.pureDiscord = rep.mutualInformation - classical;
  rep.robustness = pure_state_analytics(schmidt).robustness;
  return rep;
}

PureStateAnalytics pure_state_analytics(const SchmidtDecomposition& schmidt) {
  PureStateAnalytics out;
  const int s = schmidt.rank();
  if (s == 0) return out;
  const RealVector p = schmidt.probabilities();
  const double uniform = 1.0 / s;
  out.isLazy = (p.array() - uniform).abs().maxCoeff() <= 1e-10;

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
  for (int i = 0; i < s; ++i) {
    for (int k = 0; k < s; ++k) {
      if (i == k) continue;
      m(i, k) = std::sqrt(p(i) * p(k)) * (p(i) - p(k));
      out.entrywiseBound += std::abs(m(i, k));
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  out.commutatorTraceNorm = svd.singularValues().sum();
  const double rootSum = schmidt.coefficients.sum();
  out.robustness = rootSum * rootSum - 1.0;
  return out;
}

}  // namespace lazylab
