#include "lazylab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "lazylab/random.hpp"

namespace lazylab::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Library-level commands

ProtocolVerdict detect_discord(const BipartiteState& rho, int samples, std::uint64_t seed,
                               double threshold, bool finiteDifference) {
  if (samples < 1) throw std::invalid_argument("detect-discord: need at least one sample");
  ProtocolVerdict v;
  v.samples = samples;
  v.threshold = threshold;
  v.finiteDifference = finiteDifference;
  v.perSampleRates.reserve(samples);
  for (int m = 0; m < samples; ++m) {
    const ComplexMatrix raw = random_hermitian(rho.dim(), derive_seed(seed, m));
    ComplexMatrix h = decompose_hamiltonian(raw, rho.ds(), rho.de()).hInt;
    const double scale = qmat::operator_norm(h);
    if (scale > 0.0) h /= scale;
    const double rate = finiteDifference
                            ? finite_difference_rate(rho, h, Observable::moment(2))
                            : purity_rate(rho, h);
    v.perSampleRates.push_back(rate);
    v.maxAbsPurityRate = std::max(v.maxAbsPurityRate, std::abs(rate));
  }
  v.discordDetected = v.maxAbsPurityRate > threshold;
  return v;
}

namespace {

constexpr int kHistogramBins = 14;

int histogram_bin(double x) {
  if (!(x >= 1e-12)) return 0;
  const int k = static_cast<int>(std::floor(std::log10(x))) + 13;
  return std::clamp(k, 1, kHistogramBins - 1);
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

SparsitySummary sparsity_scan(int dS, int dE, int samples, int rank, std::uint64_t seed,
                              double lazyTol, std::span<const BipartiteState> included) {
  if (samples < 1) throw std::invalid_argument("sparsity: need at least one sample");
  if (dS < 1 || dE < 1) throw std::invalid_argument("sparsity: dimensions must be positive");
  const int d = dS * dE;
  if (rank == 0) rank = d;
  if (rank < 1 || rank > d) throw std::invalid_argument("sparsity: rank must lie in [1, dS*dE]");
  if (static_cast<int>(included.size()) > samples) {
    throw std::invalid_argument("sparsity: more included states than samples");
  }
  SparsitySummary s;
  s.samples = samples;
  s.ds = dS;
  s.de = dE;
  s.rank = rank;
  s.lazyTol = lazyTol;
  s.histogram.assign(kHistogramBins, 0);
  s.binLowerEdges.push_back(0.0);
  for (int k = 1; k < kHistogramBins; ++k) s.binLowerEdges.push_back(std::pow(10.0, k - 13));

  std::vector<double> norms;
  norms.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    double c;
    if (i < static_cast<int>(included.size())) {
      if (included[i].ds() != dS || included[i].de() != dE) {
        throw std::invalid_argument("sparsity: included state has different dims");
      }
      c = laziness_commutator(included[i]).traceNorm;
    } else {
      const BipartiteState rho(ginibre_mixed(d, rank, derive_seed(seed, i)).matrix(), dS, dE);
      c = laziness_commutator(rho).traceNorm;
    }
    norms.push_back(c);
    if (c < lazyTol) ++s.lazyCount;
    ++s.histogram[histogram_bin(c)];
  }
  s.median = median_of(norms);
  s.min = *std::min_element(norms.begin(), norms.end());
  s.max = *std::max_element(norms.begin(), norms.end());
  return s;
}

double SweepRow::entropySlack() const { return entropyBound - std::abs(entropyRate); }
double SweepRow::puritySlack() const { return purityBound - std::abs(purityRate); }

namespace {

std::vector<double> random_simplex(Rng& rng, int n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = std::abs(rng.normal()) + 0.05;
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace

std::vector<SweepRow> bound_sweep(int dS, int dE, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sweep: need at least one sample");
  if (dS < 1 || dE < 1) throw std::invalid_argument("sweep: dimensions must be positive");
  const int d = dS * dE;
  // Smallest total rank whose partial trace is generically full rank on S.
  const int lowRank = std::min(d, std::max(2, (dS + dE - 1) / dE));

  std::vector<SweepRow> rows;
  rows.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t trial = derive_seed(seed, i);
    Rng rng(derive_seed(trial, 0));
    SweepRow row;
    row.sample = i;
    std::optional<BipartiteState> rho;
    switch (i % 4) {
      case 0:
        row.kind = "ginibre";
        rho.emplace(ginibre_mixed(d, d, derive_seed(trial, 1)).matrix(), dS, dE);
        break;
      case 1:
        if (dS <= dE) {
          row.kind = "pure";
          rho.emplace(BipartiteState::from_pure(haar_random_pure(d, derive_seed(trial, 1)), dS, dE));
        } else {
          row.kind = "ginibre-lowrank";
          rho.emplace(ginibre_mixed(d, lowRank, derive_seed(trial, 1)).matrix(), dS, dE);
        }
        break;
      case 2: {
        row.kind = "lazy";
        const std::vector<double> probs = random_simplex(rng, dS);
        const ComplexMatrix basis = haar_unitary(dS, derive_seed(trial, 2));
        std::vector<DensityMatrix> env;
        for (int j = 0; j < dS; ++j) env.push_back(ginibre_mixed(dE, dE, derive_seed(trial, 3 + j)));
        rho.emplace(zero_discord_state(probs, basis, env));
        break;
      }
      default:
        row.kind = "ginibre-lowrank";
        rho.emplace(ginibre_mixed(d, lowRank, derive_seed(trial, 1)).matrix(), dS, dE);
        break;
    }
    const ComplexMatrix h =
        decompose_hamiltonian(random_hermitian(d, derive_seed(trial, 100)), dS, dE).hInt;
    const RateReport rep = rate_bounds(*rho, h);
    row.entropyRate = rep.entropyRate;
    row.entropyBound = rep.entropyBound;
    row.purityRate = rep.purityRate;
    row.purityBound = rep.purityBound;
    row.miBound = rep.miPurityBound;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "sample,kind,entropy_rate,entropy_bound,slack,purity_rate,purity_bound,purity_slack,"
         "mi_bound\r\n";
  for (const SweepRow& r : rows) {
    out << r.sample << ',' << r.kind << ',' << format_real(r.entropyRate) << ','
        << format_real(r.entropyBound) << ',' << format_real(r.entropySlack()) << ','
        << format_real(r.purityRate) << ',' << format_real(r.purityBound) << ','
        << format_real(r.puritySlack()) << ',' << (r.miBound ? format_real(*r.miBound) : "")
        << "\r\n";
  }
}

AnalysisReport analyze(const StateFile& state, const std::optional<ComplexMatrix>& hTot,
                       std::optional<double> tolerance, std::optional<double> regularize,
                       std::span<const int> momentOrders) {
  const BipartiteState rho = state.state();
  AnalysisReport rep;
  rep.ds = rho.ds();
  rep.de = rho.de();
  rep.kind = to_string(state.kind);
  rep.purity = rho.purity();

  const CommutatorReport comm = laziness_commutator(rho, tolerance);
  rep.commutatorTraceNorm = comm.traceNorm;
  rep.commutatorFrobeniusNorm = comm.frobeniusNorm;
  rep.lazy = comm.lazy;
  rep.tolerance = comm.tolerance;
  rep.pinchingResidual = pinching_residual(rho);
  rep.correlations = correlation_measures(rho);

  if (rho.is_pure()) {
    const ComplexVector chi =
        state.kind == StateKind::PureVector ? state.vector() : rho.pure_vector();
    const SchmidtDecomposition sd = schmidt_decompose(chi / chi.norm(), rho.ds(), rho.de());
    SchmidtSummary summary;
    summary.coefficients.assign(sd.coefficients.data(), sd.coefficients.data() + sd.rank());
    summary.analytics = pure_state_analytics(sd);
    rep.schmidt = std::move(summary);
  }

  if (hTot) {
    const HamiltonianTriple parts = decompose_hamiltonian(*hTot, rho.ds(), rho.de());
    rep.rates = rate_bounds(rho, parts.hInt, momentOrders, regularize);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const ProtocolVerdict& v) {
  j = json{{"samples", v.samples},
           {"maxAbsPurityRate", v.maxAbsPurityRate},
           {"threshold", v.threshold},
           {"discordDetected", v.discordDetected},
           {"mode", v.finiteDifference ? "finite-difference" : "analytic"},
           {"perSampleRates", v.perSampleRates}};
}

void from_json(const json& j, ProtocolVerdict& v) {
  j.at("samples").get_to(v.samples);
  j.at("maxAbsPurityRate").get_to(v.maxAbsPurityRate);
  j.at("threshold").get_to(v.threshold);
  j.at("discordDetected").get_to(v.discordDetected);
  v.finiteDifference = j.at("mode").get<std::string>() == "finite-difference";
  j.at("perSampleRates").get_to(v.perSampleRates);
}

void to_json(json& j, const SparsitySummary& s) {
  j = json{{"samples", s.samples},     {"dims", {s.ds, s.de}},    {"rank", s.rank},
           {"lazyTol", s.lazyTol},     {"lazyCount", s.lazyCount}, {"median", s.median},
           {"min", s.min},             {"max", s.max},             {"histogram", s.histogram},
           {"binLowerEdges", s.binLowerEdges}};
}

void from_json(const json& j, SparsitySummary& s) {
  j.at("samples").get_to(s.samples);
  s.ds = j.at("dims").at(0).get<int>();
  s.de = j.at("dims").at(1).get<int>();
  j.at("rank").get_to(s.rank);
  j.at("lazyTol").get_to(s.lazyTol);
  j.at("lazyCount").get_to(s.lazyCount);
  j.at("median").get_to(s.median);
  j.at("min").get_to(s.min);
  j.at("max").get_to(s.max);
  j.at("histogram").get_to(s.histogram);
  j.at("binLowerEdges").get_to(s.binLowerEdges);
}

void to_json(json& j, const AnalysisReport& r) {
  j = json{{"dims", {r.ds, r.de}},
           {"kind", r.kind},
           {"purity", r.purity},
           {"commutator",
            {{"traceNorm", r.commutatorTraceNorm},
             {"frobeniusNorm", r.commutatorFrobeniusNorm},
             {"lazy", r.lazy},
             {"tolerance", r.tolerance}}},
           {"pinchingResidual", r.pinchingResidual},
           {"correlations", r.correlations}};
  if (r.schmidt) {
    j["schmidt"] = {{"coefficients", r.schmidt->coefficients},
                    {"rank", r.schmidt->coefficients.size()},
                    {"analytics", r.schmidt->analytics}};
  } else {
    j["schmidt"] = nullptr;
  }
  j["rates"] = r.rates ? json(*r.rates) : json(nullptr);
}

void from_json(const json& j, AnalysisReport& r) {
  r.ds = j.at("dims").at(0).get<int>();
  r.de = j.at("dims").at(1).get<int>();
  j.at("kind").get_to(r.kind);
  j.at("purity").get_to(r.purity);
  const json& c = j.at("commutator");
  c.at("traceNorm").get_to(r.commutatorTraceNorm);
  c.at("frobeniusNorm").get_to(r.commutatorFrobeniusNorm);
  c.at("lazy").get_to(r.lazy);
  c.at("tolerance").get_to(r.tolerance);
  j.at("pinchingResidual").get_to(r.pinchingResidual);
  j.at("correlations").get_to(r.correlations);
  if (j.at("schmidt").is_null()) {
    r.schmidt.reset();
  } else {
    SchmidtSummary s;
    j["schmidt"].at("coefficients").get_to(s.coefficients);
    j["schmidt"].at("analytics").get_to(s.analytics);
    r.schmidt = std::move(s);
  }
  if (j.at("rates").is_null()) {
    r.rates.reset();
  } else {
    r.rates = j["rates"].get<RateReport>();
  }
}

// ---------------------------------------------------------------------------
// Command-line front end

namespace {

enum class Format { Text, Json, Csv };

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_real(j.get<double>()));
  } else if (j.is_null()) {
    out.emplace_back(prefix, "");
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

void emit(std::ostream& out, const json& j, Format format) {
  if (format == Format::Json) {
    out << j.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  if (format == Format::Csv) {
    out << "key,value\r\n";
    for (const auto& [k, v] : rows) out << k << ',' << v << "\r\n";
    return;
  }
  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  for (const auto& [k, v] : rows) {
    out << k << std::string(width - k.size() + 2, ' ') << (v.empty() ? "-" : v) << "\n";
  }
}

std::vector<double> parse_reals(const std::string& csv, const char* what) {
  std::vector<double> xs;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + ": cannot parse \"" + item + "\" as a number");
    }
    xs.push_back(x);
  }
  if (xs.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return xs;
}

// Writes to `path` when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ParseError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

struct GenOptions {
  std::string kind;
  int ds = 0;
  int de = 0;
  int rank = 0;
  std::uint64_t seed = 0;
  std::string probs;
  std::string out;
};

StateFile generate(const GenOptions& o) {
  const auto need_dims = [&](int defS, int defE) {
    const int dS = o.ds > 0 ? o.ds : defS;
    const int dE = o.de > 0 ? o.de : defE;
    if (dS < 1 || dE < 1) throw std::invalid_argument("gen: dimensions must be positive");
    return std::pair{dS, dE};
  };
  if (o.kind == "bell") {
    if ((o.ds && o.ds != 2) || (o.de && o.de != 2)) throw std::invalid_argument("gen bell: dims are fixed to 2x2");
    const double half[] = {0.5, 0.5};
    return StateFile::from_vector(schmidt_vector(half, 2, 2), 2, 2);
  }
  if (o.kind == "maxent") {
    const auto [dS, dE] = need_dims(2, o.ds > 0 ? o.ds : 2);
    if (dS != dE) throw std::invalid_argument("gen maxent: requires ds == de");
    if (dS < 2) throw std::invalid_argument("gen maxent: requires d >= 2");
    std::vector<double> p(dS, 1.0 / dS);
    return StateFile::from_vector(schmidt_vector(p, dS, dE), dS, dE);
  }
  if (o.kind == "product") {
    const auto [dS, dE] = need_dims(2, 2);
    const DensityMatrix s = ginibre_mixed(dS, dS, derive_seed(o.seed, 0));
    const DensityMatrix e = ginibre_mixed(dE, dE, derive_seed(o.seed, 1));
    return StateFile::from_state(product_state(s, e));
  }
  if (o.kind == "ginibre") {
    const auto [dS, dE] = need_dims(2, 2);
    const int rank = o.rank > 0 ? o.rank : dS * dE;
    return StateFile::from_state(BipartiteState(ginibre_mixed(dS * dE, rank, o.seed).matrix(), dS, dE));
  }
  if (o.kind == "haarpure") {
    const auto [dS, dE] = need_dims(2, 2);
    return StateFile::from_vector(haar_random_pure(dS * dE, o.seed), dS, dE);
  }
  if (o.kind == "zerodiscord" || o.kind == "schmidt") {
    if (o.probs.empty()) throw std::invalid_argument("gen " + o.kind + ": --probs is required");
    const std::vector<double> p = parse_reals(o.probs, "--probs");
    const int n = static_cast<int>(p.size());
    const auto [dS, dE] = need_dims(n, o.kind == "schmidt" ? n : 2);
    if (o.kind == "schmidt") return StateFile::from_vector(schmidt_vector(p, dS, dE), dS, dE);
    if (n > dS) throw std::invalid_argument("gen zerodiscord: more probabilities than ds");
    const ComplexMatrix basis = haar_unitary(dS, derive_seed(o.seed, 0)).leftCols(n);
    std::vector<DensityMatrix> env;
    for (int j = 0; j < n; ++j) env.push_back(ginibre_mixed(dE, dE, derive_seed(o.seed, 1 + j)));
    return StateFile::from_state(zero_discord_state(p, basis, env));
  }
  if (o.kind == "gue") {
    const auto [dS, dE] = need_dims(2, 2);
    return StateFile::from_hamiltonian(random_hermitian(dS * dE, o.seed), dS, dE);
  }
  if (o.kind == "ising") {
    if ((o.ds && o.ds != 2) || (o.de && o.de != 2)) throw std::invalid_argument("gen ising: dims are fixed to 2x2");
    ComplexMatrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    const ComplexMatrix id = qmat::identity(2);
    const ComplexMatrix h = qmat::kron(z, z) + qmat::kron(x, id) + qmat::kron(id, x);
    return StateFile::from_hamiltonian(h, 2, 2);
  }
  throw std::invalid_argument("gen: unknown kind \"" + o.kind + "\"");
}

std::vector<int> parse_orders(const std::string& csv) {
  std::vector<int> out;
  if (csv.empty()) return out;
  for (double x : parse_reals(csv, "--moments")) {
    if (x < 1 || x != std::floor(x)) throw std::invalid_argument("--moments: orders must be integers >= 1");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

Format pick_format(bool asJson, bool asCsv) {
  if (asJson && asCsv) throw std::invalid_argument("--json and --csv are mutually exclusive");
  return asJson ? Format::Json : (asCsv ? Format::Csv : Format::Text);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"lazy-lab: laziness, entropy rates and decoherence bounds for bipartite states"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* genCmd = app.add_subcommand("gen", "Write a state or Hamiltonian file");
  genCmd->add_option("kind", gen.kind,
                     "product | bell | maxent | zerodiscord | haarpure | ginibre | schmidt | gue | ising")
      ->required();
  genCmd->add_option("--ds", gen.ds, "System dimension");
  genCmd->add_option("--de", gen.de, "Environment dimension");
  genCmd->add_option("--rank", gen.rank, "Rank of a Ginibre state (default: full)");
  genCmd->add_option("--seed", gen.seed, "64-bit seed");
  genCmd->add_option("--probs", gen.probs, "Comma-separated probabilities");
  genCmd->add_option("-o,--out", gen.out, "Output path (default: standard output)");

  std::string statePath, hamPath, outPath;
  std::optional<double> tol, regularize;
  std::string momentList = "2,3";
  bool asJson = false, asCsv = false;
  auto* analyzeCmd = app.add_subcommand("analyze", "Laziness, correlation and rate report");
  analyzeCmd->add_option("state", statePath, "State file")->required();
  analyzeCmd->add_option("hamiltonian", hamPath, "Total Hamiltonian file");
  analyzeCmd->add_option("--tol", tol, "Laziness tolerance on ||C||_1 (default 1e-10*dS*dE)");
  analyzeCmd->add_option("--regularize", regularize, "Mix weight with I/d before rate evaluation");
  analyzeCmd->add_option("--moments", momentList, "Moment orders for rates");
  analyzeCmd->add_flag("--json", asJson, "JSON output");
  analyzeCmd->add_flag("--csv", asCsv, "CSV output");
  analyzeCmd->add_option("-o,--out", outPath, "Output path");

  double tMax = 1.0;
  int steps = 11;
  std::string evolveMoments;
  auto* evolveCmd = app.add_subcommand("evolve", "Record a trajectory as CSV");
  evolveCmd->add_option("state", statePath, "State file")->required();
  evolveCmd->add_option("hamiltonian", hamPath, "Total Hamiltonian file")->required();
  evolveCmd->add_option("--t-max", tMax, "Final time");
  evolveCmd->add_option("--steps", steps, "Number of samples (>= 2)");
  evolveCmd->add_option("--moments", evolveMoments, "Extra f_N columns");
  evolveCmd->add_option("--regularize", regularize, "Mix weight with I/d applied to the initial state");
  evolveCmd->add_option("-o,--out", outPath, "Output CSV path");

  int samples = 20;
  std::uint64_t seed = 0;
  double threshold = kDefaultProtocolThreshold;
  bool useFd = false;
  auto* detectCmd = app.add_subcommand("detect-discord", "Purity-rate discord detection protocol");
  detectCmd->add_option("state", statePath, "State file")->required();
  detectCmd->add_option("--samples", samples, "Number of random couplings");
  detectCmd->add_option("--seed", seed, "64-bit seed");
  detectCmd->add_option("--threshold", threshold, "Detection threshold on |dP/dt|");
  detectCmd->add_flag("--fd", useFd, "Estimate rates by finite differences of the purity");
  detectCmd->add_flag("--json", asJson, "JSON output");
  detectCmd->add_option("-o,--out", outPath, "Output path");

  int ds = 2, de = 2, rank = 0;
  double lazyTol = 1e-3;
  std::vector<std::string> includeFiles;
  auto* sparsityCmd = app.add_subcommand("sparsity", "Monte Carlo census of near-lazy states");
  sparsityCmd->add_option("--ds", ds, "System dimension");
  sparsityCmd->add_option("--de", de, "Environment dimension");
  sparsityCmd->add_option("--samples", samples, "Number of samples");
  sparsityCmd->add_option("--rank", rank, "Ginibre rank (default: full)");
  sparsityCmd->add_option("--seed", seed, "64-bit seed");
  sparsityCmd->add_option("--lazy-tol", lazyTol, "Count samples with ||C||_1 below this");
  sparsityCmd->add_option("--include-file", includeFiles, "State files placed first in the sample");
  sparsityCmd->add_flag("--json", asJson, "JSON output");
  sparsityCmd->add_option("-o,--out", outPath, "Output path");

  auto* sweepCmd = app.add_subcommand("sweep", "Bound-slack sweep over random pairs, as CSV");
  sweepCmd->add_option("--ds", ds, "System dimension");
  sweepCmd->add_option("--de", de, "Environment dimension");
  sweepCmd->add_option("--samples", samples, "Number of pairs");
  sweepCmd->add_option("--seed", seed, "64-bit seed");
  sweepCmd->add_option("-o,--out", outPath, "Output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (genCmd->parsed()) {
      const StateFile f = generate(gen);
      Sink sink(gen.out, out);
      sink.get() << serialize(f);
    } else if (analyzeCmd->parsed()) {
      const Format format = pick_format(asJson, asCsv);
      const StateFile state = load_state_file(statePath);
      std::optional<ComplexMatrix> h;
      if (!hamPath.empty()) h = load_state_file(hamPath).hamiltonian();
      const std::vector<int> orders = parse_orders(momentList);
      const AnalysisReport rep = analyze(state, h, tol, regularize, orders);
      Sink sink(outPath, out);
      emit(sink.get(), json(rep), format);
    } else if (evolveCmd->parsed()) {
      if (!(tMax > 0.0)) throw std::invalid_argument("--t-max must be positive");
      if (steps < 2) throw std::invalid_argument("--steps must be at least 2");
      const BipartiteState rho = load_state_file(statePath).state();
      const ComplexMatrix h = load_state_file(hamPath).hamiltonian();
      TrajectoryOptions opts;
      opts.moments = parse_orders(evolveMoments);
      opts.regularize = regularize;
      std::vector<double> times(steps);
      for (int i = 0; i < steps; ++i) times[i] = tMax * i / (steps - 1);
      const Trajectory traj = record_trajectory(rho, h, times, opts);
      Sink sink(outPath, out);
      write_trajectory_csv(sink.get(), traj, opts.moments);
    } else if (detectCmd->parsed()) {
      const BipartiteState rho = load_state_file(statePath).state();
      const ProtocolVerdict v = detect_discord(rho, samples, seed, threshold, useFd);
      Sink sink(outPath, out);
      emit(sink.get(), json(v), asJson ? Format::Json : Format::Text);
    } else if (sparsityCmd->parsed()) {
      std::vector<BipartiteState> included;
      for (const std::string& path : includeFiles) included.push_back(load_state_file(path).state());
      const SparsitySummary s = sparsity_scan(ds, de, samples, rank, seed, lazyTol, included);
      Sink sink(outPath, out);
      emit(sink.get(), json(s), asJson ? Format::Json : Format::Text);
    } else if (sweepCmd->parsed()) {
      const std::vector<SweepRow> rows = bound_sweep(ds, de, samples, seed);
      Sink sink(outPath, out);
      write_sweep_csv(sink.get(), rows);
    }
  } catch (const DomainError& e) {
    err << "lazy-lab: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::invalid_argument& e) {
    err << "lazy-lab: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "lazy-lab: numerical failure: " << e.what() << "\n";
    return kDomainError;
  }
  return kOk;
}

}  // namespace lazylab::cli
