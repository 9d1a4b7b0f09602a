#pragma once

// Closed-form von Neumann evolution of bipartite states.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lazylab/laziness.hpp"

namespace lazylab {

/// H_tot = hS (x) I + I (x) hE + hInt with tr_S hInt = tr_E hInt = 0.
struct HamiltonianTriple {
  ComplexMatrix hS;
  ComplexMatrix hE;
  ComplexMatrix hInt;
  double shiftSplit = 0.0;  // share of tr(H)/(dS dE) moved into each local term
  int ds = 0;
  int de = 0;

  ComplexMatrix total() const;
};

HamiltonianTriple decompose_hamiltonian(const ComplexMatrix& hTot, int dS, int dE);

/// exp(-i H t) from one spectral decomposition of H, reused for every t.
class Propagator {
 public:
  explicit Propagator(const ComplexMatrix& hamiltonian);

  ComplexMatrix unitary(double t) const;
  BipartiteState evolve(const BipartiteState& rho, double t) const;

 private:
  HermitianSpectrum spectrum_;
};

BipartiteState evolve_exact(const BipartiteState& rho, const ComplexMatrix& hTot, double t);

/// Scalar observable of the reduced system state.
struct Observable {
  enum class Kind { Entropy, Moment };
  Kind kind = Kind::Entropy;
  int order = 0;

  static Observable entropy() { return {Kind::Entropy, 0}; }
  static Observable moment(int n) { return {Kind::Moment, n}; }

  double evaluate(const DensityMatrix& rhoS) const;
};

inline constexpr double kDefaultFdStep = 1e-5;

/// Central difference (g(+h) - g(-h)) / 2h of g(t) = observable(tr_E rho(t)).
double finite_difference_rate(const BipartiteState& rho, const ComplexMatrix& hTot,
                              Observable observable, double h = kDefaultFdStep);

/// Two-step Richardson extrapolation (4 D(h/2) - D(h)) / 3.
double richardson_rate(const BipartiteState& rho, const ComplexMatrix& hTot, Observable observable,
                       double h = kDefaultFdStep);

struct TrajectoryRecord {
  double time = 0.0;
  double entropy = 0.0;
  double purity = 0.0;
  std::map<int, double> momentValues;
  double commutatorTraceNorm = 0.0;
  double entropyRate = 0.0;
  double entropyBound = 0.0;
  double purityRate = 0.0;
  double purityBound = 0.0;
  double totalPurity = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<TrajectoryRecord> records;
};

struct TrajectoryOptions {
  std::vector<int> moments;
  std::optional<double> regularize;
};

Trajectory record_trajectory(const BipartiteState& rho0, const ComplexMatrix& hTot,
                             std::span<const double> times, const TrajectoryOptions& options = {});

}  // namespace lazylab
