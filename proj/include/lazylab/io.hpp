#pragma once

// State/Hamiltonian files and report serialization.
//
// State files are UTF-8 JSON:
//   {"dims": [dS, dE], "kind": "density" | "purevector" | "hermitian",
//    "data": [[re, im], ...]}   (row-major)
// A purevector carries dS*dE entries; the matrix kinds carry (dS*dE)^2.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lazylab/dynamics.hpp"

namespace lazylab {

/// Malformed or invalid input file.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StateKind { Density, PureVector, Hermitian };

const char* to_string(StateKind kind);

struct StateFile {
  int ds = 0;
  int de = 0;
  StateKind kind = StateKind::Density;
  std::vector<Complex> data;

  static StateFile from_state(const BipartiteState& rho);
  static StateFile from_vector(const ComplexVector& chi, int dS, int dE);
  static StateFile from_hamiltonian(const ComplexMatrix& h, int dS, int dE);

  ComplexMatrix matrix() const;  // density or hermitian
  ComplexVector vector() const;  // purevector
  /// Density matrix for either state kind; ParseError for hermitian files.
  BipartiteState state() const;
  ComplexMatrix hamiltonian() const;

  friend bool operator==(const StateFile&, const StateFile&) = default;
};

/// Parses and validates: a state payload must satisfy the density-matrix or
/// unit-vector invariants, a hermitian payload must be Hermitian.
StateFile parse_state_file(const std::string& text);
/// Canonical form: one matrix row per line, shortest round-trip doubles.
std::string serialize(const StateFile& file);

StateFile load_state_file(const std::string& path);
void save_state_file(const std::string& path, const StateFile& file);

/// "%.17g"
std::string format_real(double x);

void to_json(nlohmann::json& j, const RateReport& r);
void from_json(const nlohmann::json& j, RateReport& r);
void to_json(nlohmann::json& j, const CorrelationReport& r);
void from_json(const nlohmann::json& j, CorrelationReport& r);
void to_json(nlohmann::json& j, const PureStateAnalytics& r);
void from_json(const nlohmann::json& j, PureStateAnalytics& r);

inline bool operator==(const PureStateAnalytics& a, const PureStateAnalytics& b) {
  return a.isLazy == b.isLazy && a.commutatorTraceNorm == b.commutatorTraceNorm &&
         a.entrywiseBound == b.entrywiseBound && a.robustness == b.robustness;
}

/// Trajectory as CSV with header
/// time,entropy,purity,comm_trace_norm,entropy_rate,entropy_bound,purity_rate,purity_bound
/// followed by one f_N column per requested moment order.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<int>& moments);

}  // namespace lazylab
