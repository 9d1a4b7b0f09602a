#pragma once

// lazy-lab command implementations. Each subcommand is a thin shell over one
// of the functions below so the logic can be tested without a process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lazylab/io.hpp"

namespace lazylab::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kDomainError = 3 };

/// Outcome of the local purity-monitoring protocol. Detection is one-sided:
/// true proves a non-lazy (hence discordant) state; false proves nothing.
struct ProtocolVerdict {
  int samples = 0;
  double maxAbsPurityRate = 0.0;
  double threshold = 0.0;
  bool discordDetected = false;
  bool finiteDifference = false;
  std::vector<double> perSampleRates;

  friend bool operator==(const ProtocolVerdict&, const ProtocolVerdict&) = default;
};

inline constexpr double kDefaultProtocolThreshold = 1e-8;

/// Samples random GUE couplings, reduces each to its interaction part with
/// unit operator norm, and records the system purity rate under it.
ProtocolVerdict detect_discord(const BipartiteState& rho, int samples, std::uint64_t seed,
                               double threshold = kDefaultProtocolThreshold,
                               bool finiteDifference = false);

struct SparsitySummary {
  int samples = 0;
  int ds = 0;
  int de = 0;
  int rank = 0;
  double lazyTol = 0.0;
  int lazyCount = 0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  /// Counts per decade: bin 0 holds values below 1e-12, bin k >= 1 holds
  /// [10^(k-13), 10^(k-12)); binLowerEdges[k] is the lower edge.
  std::vector<int> histogram;
  std::vector<double> binLowerEdges;

  friend bool operator==(const SparsitySummary&, const SparsitySummary&) = default;
};

/// ||C||_1 over Ginibre samples. `included` states take the first slots of
/// the sample budget; the rest are drawn from the induced measure.
SparsitySummary sparsity_scan(int dS, int dE, int samples, int rank, std::uint64_t seed,
                              double lazyTol, std::span<const BipartiteState> included = {});

struct SweepRow {
  int sample = 0;
  std::string kind;
  double entropyRate = 0.0;
  double entropyBound = 0.0;
  double purityRate = 0.0;
  double purityBound = 0.0;
  std::optional<double> miBound;

  double entropySlack() const;
  double puritySlack() const;
};

/// Random (state, H_int) pairs cycling through full-rank mixed, pure, lazy
/// and low-rank mixed states.
std::vector<SweepRow> bound_sweep(int dS, int dE, int samples, std::uint64_t seed);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

struct SchmidtSummary {
  std::vector<double> coefficients;
  PureStateAnalytics analytics;

  friend bool operator==(const SchmidtSummary& a, const SchmidtSummary& b) {
    return a.coefficients == b.coefficients && a.analytics == b.analytics;
  }
};

struct AnalysisReport {
  int ds = 0;
  int de = 0;
  std::string kind;
  double purity = 0.0;
  double commutatorTraceNorm = 0.0;
  double commutatorFrobeniusNorm = 0.0;
  bool lazy = false;
  double tolerance = 0.0;
  double pinchingResidual = 0.0;
  CorrelationReport correlations;
  std::optional<SchmidtSummary> schmidt;
  std::optional<RateReport> rates;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

AnalysisReport analyze(const StateFile& state, const std::optional<ComplexMatrix>& hTot,
                       std::optional<double> tolerance, std::optional<double> regularize,
                       std::span<const int> momentOrders);

void to_json(nlohmann::json& j, const ProtocolVerdict& v);
void from_json(const nlohmann::json& j, ProtocolVerdict& v);
void to_json(nlohmann::json& j, const SparsitySummary& s);
void from_json(const nlohmann::json& j, SparsitySummary& s);
void to_json(nlohmann::json& j, const AnalysisReport& r);
void from_json(const nlohmann::json& j, AnalysisReport& r);

/// Entry point of the lazy-lab executable. Never throws; returns 0, 2 (input
/// or parse error) or 3 (numerical-domain error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lazylab::cli
