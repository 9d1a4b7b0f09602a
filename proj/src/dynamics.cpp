#include "lazylab/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace lazylab {

ComplexMatrix HamiltonianTriple::total() const {
  return qmat::kron(hS, qmat::identity(de)) + qmat::kron(qmat::identity(ds), hE) + hInt;
}

HamiltonianTriple decompose_hamiltonian(const ComplexMatrix& hTot, int dS, int dE) {
  if (dS < 1 || dE < 1 || hTot.rows() != dS * dE || hTot.cols() != dS * dE) {
    std::ostringstream msg;
    msg << "decompose_hamiltonian: expected a " << dS * dE << "x" << dS * dE << " matrix, got "
        << hTot.rows() << "x" << hTot.cols();
    throw std::invalid_argument(msg.str());
  }
  const ComplexMatrix h = qmat::require_hermitian(hTot, "total Hamiltonian");
  const ComplexMatrix a = qmat::partial_trace(h, dS, dE, Subsystem::System) / double(dE);
  const ComplexMatrix b = qmat::partial_trace(h, dS, dE, Subsystem::Environment) / double(dS);
  const double c = h.trace().real() / double(dS * dE);
  const ComplexMatrix idS = qmat::identity(dS);
  const ComplexMatrix idE = qmat::identity(dE);

  HamiltonianTriple out;
  out.ds = dS;
  out.de = dE;
  out.shiftSplit = c / 2.0;
  out.hInt = h - qmat::kron(a, idE) - qmat::kron(idS, b) + c * qmat::identity(dS * dE);
  out.hS = a - out.shiftSplit * idS;
  out.hE = b - out.shiftSplit * idE;
  return out;
}

Propagator::Propagator(const ComplexMatrix& hamiltonian)
    : spectrum_(qmat::hermitian_eig(hamiltonian)) {}

ComplexMatrix Propagator::unitary(double t) const {
  ComplexVector phases(spectrum_.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, -spectrum_.eigenvalues(i) * t);
  }
  return spectrum_.eigenvectors * phases.asDiagonal() * spectrum_.eigenvectors.adjoint();
}

BipartiteState Propagator::evolve(const BipartiteState& rho, double t) const {
  if (spectrum_.eigenvalues.size() != rho.dim()) {
    throw std::invalid_argument("evolve: Hamiltonian and state dimensions differ");
  }
  const ComplexMatrix u = unitary(t);
  return BipartiteState(u * rho.matrix() * u.adjoint(), rho.ds(), rho.de());
}

BipartiteState evolve_exact(const BipartiteState& rho, const ComplexMatrix& hTot, double t) {
  return Propagator(hTot).evolve(rho, t);
}

double Observable::evaluate(const DensityMatrix& rhoS) const {
  if (kind == Kind::Moment) {
    const int n[] = {order};
    return moments(rhoS, n).at(order);
  }
  const double lmin = rhoS.eigenvalues().minCoeff();
  if (lmin <= qmat::kLogFloor) {
    std::ostringstream msg;
    msg << "finite difference: reduced state became rank-deficient (min eigenvalue " << lmin
        << "); use a smaller step or regularize the state";
    throw DomainError(msg.str());
  }
  return von_neumann_entropy(rhoS);
}

namespace {

double central_difference(const Propagator& prop, const BipartiteState& rho, Observable obs,
                          double h) {
  const double plus = obs.evaluate(prop.evolve(rho, h).system());
  const double minus = obs.evaluate(prop.evolve(rho, -h).system());
  return (plus - minus) / (2.0 * h);
}

}  // namespace

double finite_difference_rate(const BipartiteState& rho, const ComplexMatrix& hTot,
                              Observable observable, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_difference_rate: step must be positive");
  if (observable.kind == Observable::Kind::Moment && observable.order < 1) {
    throw std::invalid_argument("finite_difference_rate: moment order must be >= 1");
  }
  return central_difference(Propagator(hTot), rho, observable, h);
}

double richardson_rate(const BipartiteState& rho, const ComplexMatrix& hTot, Observable observable,
                       double h) {
  const double coarse = finite_difference_rate(rho, hTot, observable, h);
  const double fine = finite_difference_rate(rho, hTot, observable, h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

Trajectory record_trajectory(const BipartiteState& rho0, const ComplexMatrix& hTot,
                             std::span<const double> times, const TrajectoryOptions& options) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] < times[i - 1]) {
      throw std::invalid_argument("record_trajectory: times must be sorted ascending");
    }
  }
  const BipartiteState start = options.regularize ? regularized(rho0, *options.regularize) : rho0;
  const HamiltonianTriple parts = decompose_hamiltonian(hTot, rho0.ds(), rho0.de());
  const Propagator prop(hTot);
  const double hNorm = qmat::operator_norm(parts.hInt);

  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.records.reserve(times.size());
  for (double t : times) {
    const BipartiteState rho = prop.evolve(start, t);
    const DensityMatrix rhoS = rho.system();
    TrajectoryRecord rec;
    rec.time = t;
    rec.entropy = von_neumann_entropy(rhoS);
    rec.purity = rhoS.purity();
    rec.totalPurity = rho.purity();
    if (!options.moments.empty()) rec.momentValues = moments(rhoS, options.moments);
    rec.commutatorTraceNorm = laziness_commutator(rho).traceNorm;
    rec.entropyRate = entropy_rate(rho, parts.hInt);
    rec.entropyBound = hNorm * qmat::trace_norm(log_commutator(rho));
    rec.purityRate = purity_rate(rho, parts.hInt);
    rec.purityBound = 2.0 * hNorm * rec.commutatorTraceNorm;
    traj.records.push_back(std::move(rec));
  }
  return traj;
}

}  // namespace lazylab
