#pragma once

// Laziness of bipartite states and the system entropy/purity rates they allow.
//
// Rates are instantaneous derivatives under the von Neumann equation
// d(rho)/dt = -i [H, rho] with hbar = 1. Only the interaction part of H
// contributes, so every rate function takes that part directly.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lazylab/states.hpp"

namespace lazylab {

struct CommutatorReport {
  ComplexMatrix commutator;  // [rho^S (x) I, rho^SE], anti-Hermitian
  double traceNorm = 0.0;
  double frobeniusNorm = 0.0;
  bool lazy = false;  // traceNorm <= tolerance
  double tolerance = 0.0;
};

struct RateReport {
  double entropyRate = 0.0;  // nats per unit time
  double purityRate = 0.0;
  std::map<int, double> momentRates;
  double entropyBound = 0.0;
  double purityBound = 0.0;
  std::optional<double> miPurityBound;  // pure states only
  double hIntOperatorNorm = 0.0;
  double lnCommutatorTraceNorm = 0.0;
  double commutatorTraceNorm = 0.0;
  /// Which norm of H_int enters the bounds.
  std::string hIntNorm = "operator";

  friend bool operator==(const RateReport&, const RateReport&) = default;
};

struct CorrelationReport {
  double mutualInformation = 0.0;
  double systemEntropy = 0.0;
  double environmentEntropy = 0.0;
  double totalEntropy = 0.0;
  double negativity = 0.0;
  // Pure states only.
  std::optional<double> entanglementEntropy;
  std::optional<double> pureDiscord;
  std::optional<double> robustness;

  friend bool operator==(const CorrelationReport&, const CorrelationReport&) = default;
};

struct PureStateAnalytics {
  bool isLazy = false;
  double commutatorTraceNorm = 0.0;
  double entrywiseBound = 0.0;
  double robustness = 0.0;
};

struct WitnessHamiltonian {
  ComplexMatrix hInt;
  double predictedRate = 0.0;  // -||K||_F^2
};

/// Default laziness tolerance 1e-10 * dS * dE.
double default_lazy_tolerance(const BipartiteState& rho);

double von_neumann_entropy(const DensityMatrix& rho);

/// f_N = tr(rho^N) for each requested N >= 1.
std::map<int, double> moments(const DensityMatrix& rho, std::span<const int> orders);

CommutatorReport laziness_commutator(const BipartiteState& rho,
                                     std::optional<double> tolerance = std::nullopt);

/// [ln(rho^S) (x) I, rho^SE]. Throws DomainError when rho^S has an
/// eigenvalue below the log floor.
ComplexMatrix log_commutator(const BipartiteState& rho);

/// sum_j (P_j (x) I) rho (P_j (x) I).
BipartiteState spectral_pinch(const BipartiteState& rho, const SpectralProjection& proj);

/// ||rho - pinch(rho)||_1 with the projectors of rho^S itself.
double pinching_residual(const BipartiteState& rho, double clusterTol = 1e-8);

/// (1 - delta) rho + delta I / (dS dE)
BipartiteState regularized(const BipartiteState& rho, double delta);

/// dS/dt = -i tr(H_int [ln(rho^S) (x) I, rho^SE]).
double entropy_rate(const BipartiteState& rho, const ComplexMatrix& hInt,
                    std::optional<double> regularize = std::nullopt);

/// d f_N/dt = i N tr(H_int [(rho^S)^(N-1) (x) I, rho^SE]).
double moment_rate(const BipartiteState& rho, const ComplexMatrix& hInt, int order);

inline double purity_rate(const BipartiteState& rho, const ComplexMatrix& hInt) {
  return moment_rate(rho, hInt, 2);
}

RateReport rate_bounds(const BipartiteState& rho, const ComplexMatrix& hInt,
                       std::span<const int> momentOrders = {},
                       std::optional<double> regularize = std::nullopt);

/// H_int = i K with K = [ln(rho^S) (x) I, rho^SE]; the entropy rate under it is
/// -||K||_F^2. Lazy states (per laziness_commutator) get the zero Hamiltonian.
WitnessHamiltonian witness_hamiltonian(const BipartiteState& rho);

CorrelationReport correlation_measures(const BipartiteState& rho);

PureStateAnalytics pure_state_analytics(const SchmidtDecomposition& schmidt);

}  // namespace lazylab
