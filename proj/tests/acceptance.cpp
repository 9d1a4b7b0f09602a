// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "lazylab/cli.hpp"
#include "lazylab/random.hpp"
#include "oracles.hpp"

using namespace lazylab;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string sci(double x) { return fmt("%.3g", x); }

double relative_error(double a, double ref) { return std::abs(a - ref) / std::abs(ref); }

ComplexMatrix interaction(int dS, int dE, std::uint64_t seed) {
  return decompose_hamiltonian(random_hermitian(dS * dE, seed), dS, dE).hInt;
}

ComplexMatrix local_terms(int dS, int dE, std::uint64_t seed) {
  return qmat::kron(random_hermitian(dS, derive_seed(seed, 0)), qmat::identity(dE)) +
         qmat::kron(qmat::identity(dS), random_hermitian(dE, derive_seed(seed, 1)));
}

std::vector<double> random_simplex(Rng& rng, int n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) total += (x = std::abs(rng.normal()) + 0.05);
  for (double& x : p) x /= total;
  return p;
}

BipartiteState zero_discord(int dS, int dE, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<double> p = random_simplex(rng, dS);
  std::vector<DensityMatrix> env;
  for (int j = 0; j < dS; ++j) env.push_back(ginibre_mixed(dE, 1 + j % dE, derive_seed(seed, 1 + j)));
  return zero_discord_state(p, haar_unitary(dS, derive_seed(seed, 100)), env);
}

// Full-rank lazy states of four families, cycling with the index.
BipartiteState lazy_state(int index, int d, std::uint64_t seed) {
  switch (index % 4) {
    case 0:
      return product_state(ginibre_mixed(d, d, derive_seed(seed, 0)), ginibre_mixed(d, 1 + index % d, derive_seed(seed, 1)));
    case 1:
      return zero_discord(d, d, seed);
    case 2:
      return maximally_entangled(d);
    default: {
      const std::vector<int> sizes = d == 2 ? std::vector<int>{2} : std::vector<int>{2, 1};
      const std::vector<double> probs = d == 2 ? std::vector<double>{1.0} : std::vector<double>{0.55, 0.45};
      return block_lazy_state(sizes, probs, d, seed);
    }
  }
}

// ---------------------------------------------------------------------------

Outcome entropy_rate_exactness() {
  Outcome o;
  double maxRel = 0.0, minRatio = 1e300, maxRatio = 0.0, maxRelExt = 0.0;
  int samples = 0;
  for (int i = 0; i < 100; ++i) {
    const int d = 2 + i % 2;
    const std::uint64_t seed = derive_seed(101, i);
    const BipartiteState rho(ginibre_mixed(d * d, d * d, derive_seed(seed, 0)).matrix(), d, d);
    if (laziness_commutator(rho).lazy) continue;
    const ComplexMatrix h = interaction(d, d, derive_seed(seed, 1));
    const double analytic = entropy_rate(rho, h);
    const double fd = finite_difference_rate(rho, h, Observable::entropy(), 1e-5);
    maxRel = std::max(maxRel, relative_error(fd, analytic));

    // h^2 scaling, measured with the extended-precision propagator so that
    // rounding does not mask the truncation error.
    const oracle::ExtendedEvolution ext(rho.matrix(), h, d, d);
    const double e1 = std::abs(ext.entropy_rate(1e-5) - analytic);
    const double e2 = std::abs(ext.entropy_rate(5e-6) - analytic);
    maxRelExt = std::max(maxRelExt, e1 / std::abs(analytic));
    const double ratio = e1 / e2;
    minRatio = std::min(minRatio, ratio);
    maxRatio = std::max(maxRatio, ratio);
    ++samples;
  }
  o.pass = samples == 100 && maxRel <= 1e-5 && maxRelExt <= 1e-5 && minRatio >= 3.0 && maxRatio <= 5.0;
  o.detail = std::to_string(samples) + " states, max rel err " + sci(maxRel) + " (extended " + sci(maxRelExt) +
             "), err(h)/err(h/2) in [" + fmt("%.3f", minRatio) + ", " + fmt("%.3f", maxRatio) + "]";
  return o;
}

Outcome lazy_states_freeze() {
  Outcome o;
  double maxEntropy = 0.0, maxMoment = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 2;
    const std::uint64_t seed = derive_seed(202, i);
    const BipartiteState rho = lazy_state(i / 2, d, seed);
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix hTot = random_hermitian(d * d, derive_seed(seed, 1000 + k));
      const ComplexMatrix h = decompose_hamiltonian(hTot, d, d).hInt;
      maxEntropy = std::max(maxEntropy, std::abs(entropy_rate(rho, h)));
      for (int n = 1; n <= 5; ++n) maxMoment = std::max(maxMoment, std::abs(moment_rate(rho, h, n)));
    }
  }
  o.pass = maxEntropy < 1e-9 && maxMoment < 1e-9;
  o.detail = "1000 pairs, max |dS/dt| " + sci(maxEntropy) + ", max |df_N/dt| " + sci(maxMoment);
  return o;
}

Outcome witness_converse() {
  Outcome o;
  double maxAbs = 0.0, maxRate = -1e300, maxRel = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 2;
    const std::uint64_t seed = derive_seed(303, i);
    const BipartiteState rho(ginibre_mixed(d * d, d * d, seed).matrix(), d, d);
    const WitnessHamiltonian w = witness_hamiltonian(rho);
    const double k2 = oracle::Matrix(log_commutator(rho)).squaredNorm();
    const double rate = entropy_rate(rho, w.hInt);
    maxAbs = std::max(maxAbs, std::abs(rate + k2));
    maxRate = std::max(maxRate, rate);
    const double fd = oracle::ExtendedEvolution(rho.matrix(), w.hInt, d, d).entropy_rate(1e-5);
    maxRel = std::max(maxRel, relative_error(fd, rate));
  }
  o.pass = maxAbs <= 1e-9 && maxRate < -1e-12 && maxRel <= 1e-5;
  o.detail = "50 states, max |rate + ||K||_F^2| " + sci(maxAbs) + ", max rate " + sci(maxRate) +
             ", finite-difference rel err " + sci(maxRel);
  return o;
}

Outcome pinching_equivalence() {
  Outcome o;
  int counterexamples = 0, lazyCount = 0;
  double minNonLazy = 1e300, maxLazy = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t seed = derive_seed(404, i);
    const int dS = 2 + i % 2, dE = 2 + (i / 2) % 2;
    const int d = dS * dE;
    std::optional<BipartiteState> rho;
    switch (i % 5) {
      case 0:
      case 1:
        rho.emplace(ginibre_mixed(d, 1 + (i / 5) % d, seed).matrix(), dS, dE);
        break;
      case 2:
        rho.emplace(zero_discord(dS, dE, seed));
        break;
      case 3:
        rho.emplace(product_state(ginibre_mixed(dS, 1 + (i / 5) % dS, seed), ginibre_mixed(dE, dE, seed + 1)));
        break;
      default:
        if (dS == dE && (i / 5) % 2 == 0) {
          rho.emplace(maximally_entangled(dS));
        } else {
          const std::vector<int> sizes = dS == 2 ? std::vector<int>{2} : std::vector<int>{1, 2};
          const std::vector<double> probs = dS == 2 ? std::vector<double>{1.0} : std::vector<double>{0.4, 0.6};
          rho.emplace(block_lazy_state(sizes, probs, dE, seed));
        }
    }
    const double c = laziness_commutator(*rho).traceNorm;
    const double r = pinching_residual(*rho);
    const bool lazyC = c < 1e-8, lazyR = r < 1e-8;
    if (lazyC != lazyR) ++counterexamples;
    if (lazyC) {
      ++lazyCount;
      maxLazy = std::max({maxLazy, c, r});
    } else {
      minNonLazy = std::min({minNonLazy, c, r});
    }
  }
  o.pass = counterexamples == 0;
  o.detail = "200 states (" + std::to_string(lazyCount) + " lazy), " + std::to_string(counterexamples) +
             " counterexamples, lazy max " + sci(maxLazy) + ", non-lazy min " + sci(minNonLazy);
  return o;
}

Outcome rate_bounds_hold() {
  Outcome o;
  int violations = 0, pureCount = 0;
  double minEntropySlack = 1e300, minPuritySlack = 1e300, minMiSlack = 1e300;
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t seed = derive_seed(505, i);
    const int dS = 2 + i % 2, dE = 2 + (i / 2) % 2;
    const int d = dS * dE;
    std::optional<BipartiteState> rho;
    switch (i % 4) {
      case 0:
        rho.emplace(ginibre_mixed(d, d, seed).matrix(), dS, dE);
        break;
      case 1:
        rho.emplace(BipartiteState::from_pure(haar_random_pure(d, seed), dS, dE));
        break;
      case 2:
        rho.emplace(ginibre_mixed(d, 2, seed).matrix(), dS, dE);
        break;
      default:
        rho.emplace(zero_discord(dS, dE, seed));
    }
    if (rho->system().eigenvalues().minCoeff() <= qmat::kLogFloor) {
      // Pure states with dS > dE have a rank-deficient marginal.
      rho.emplace(BipartiteState::from_pure(haar_random_pure(d, seed), dE, dS));
    }
    const ComplexMatrix h = interaction(rho->ds(), rho->de(), derive_seed(seed, 7));
    const RateReport rep = rate_bounds(*rho, h);
    const double hNorm = qmat::hermitian_eig(h).eigenvalues.cwiseAbs().maxCoeff();
    const double kNorm = oracle::trace_norm(log_commutator(*rho));
    const double cNorm = oracle::trace_norm(oracle::laziness_commutator(rho->matrix(), rho->ds(), rho->de()));
    const double entropySlack = hNorm * kNorm - std::abs(rep.entropyRate);
    const double puritySlack = 2 * hNorm * cNorm - std::abs(rep.purityRate);
    minEntropySlack = std::min(minEntropySlack, entropySlack);
    minPuritySlack = std::min(minPuritySlack, puritySlack);
    if (entropySlack < -1e-9 || puritySlack < -1e-9) ++violations;
    if (rho->is_pure()) {
      ++pureCount;
      const double mi = correlation_measures(*rho).mutualInformation;
      const double miSlack = 4 * hNorm * std::sqrt(2 * std::max(0.0, mi)) - std::abs(rep.purityRate);
      minMiSlack = std::min(minMiSlack, miSlack);
      if (miSlack < -1e-9) ++violations;
    }
  }
  o.pass = violations == 0;
  o.detail = "500 pairs (" + std::to_string(pureCount) + " pure), " + std::to_string(violations) +
             " violations, min slacks: entropy " + sci(minEntropySlack) + ", purity " + sci(minPuritySlack) +
             ", mutual-information " + sci(minMiSlack);
  return o;
}

Outcome pure_state_chain() {
  Outcome o;
  int points = 0, failures = 0;
  double maxDense = 0.0, maxRankTwoGap = 0.0, minHigherGap = 1e300, maxChain = -1e300, maxRobust = 0.0;
  std::uint64_t counter = 0;
  for (int s = 2; s <= 4; ++s) {
    std::vector<std::vector<int>> grid;
    std::vector<int> prefix;
    oracle::compositions(20, s, prefix, grid);
    for (const std::vector<int>& units : grid) {
      std::vector<double> p;
      for (int u : units) p.push_back(0.05 * u);
      const std::uint64_t seed = derive_seed(606, counter++);
      const ComplexMatrix local = qmat::kron(haar_unitary(4, derive_seed(seed, 0)), haar_unitary(4, derive_seed(seed, 1)));
      const ComplexVector chi = local * schmidt_vector(p, 4, 4);
      const SchmidtDecomposition sd = schmidt_decompose(chi, 4, 4);
      const PureStateAnalytics a = pure_state_analytics(sd);
      ++points;

      const bool uniform = std::all_of(p.begin(), p.end(), [&](double x) { return std::abs(x - 1.0 / s) <= 1e-10; });
      if (a.isLazy != uniform || sd.rank() != s) ++failures;

      const ComplexMatrix rho = chi * chi.adjoint();
      const double dense = oracle::trace_norm(oracle::laziness_commutator(rho, 4, 4));
      maxDense = std::max(maxDense, std::abs(dense - a.commutatorTraceNorm));

      const double gap = a.entrywiseBound - a.commutatorTraceNorm;
      maxChain = std::max({maxChain, -gap + 0.0, a.entrywiseBound - a.robustness});
      if (gap < -1e-10 || a.entrywiseBound > a.robustness + 1e-10) ++failures;
      if (s == 2) {
        maxRankTwoGap = std::max(maxRankTwoGap, std::abs(gap));
        if (std::abs(gap) > 1e-10) ++failures;
      } else if (!uniform) {
        minHigherGap = std::min(minHigherGap, gap);
        if (gap <= 1e-10) ++failures;
      }

      const ComplexMatrix pt = qmat::partial_transpose_system(rho, 4, 4);
      const double negativity = (oracle::trace_norm(pt) - 1.0) / 2.0;
      maxRobust = std::max(maxRobust, std::abs(a.robustness - 2 * negativity));
      if (std::abs(a.robustness - 2 * negativity) > 1e-9) ++failures;
    }
  }
  o.pass = failures == 0 && maxDense <= 1e-9;
  o.detail = std::to_string(points) + " spectra, " + std::to_string(failures) + " failures, dense vs closed form " +
             sci(maxDense) + ", rank-2 |gap| max " + sci(maxRankTwoGap) + ", higher-rank gap min " +
             sci(minHigherGap) + ", chain excess max " + sci(maxChain) + ", |R - 2N| max " + sci(maxRobust);
  return o;
}

Outcome correlation_identities() {
  Outcome o;
  double maxEntanglement = 0.0, maxDiscord = 0.0, maxRobust = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int dS = 2 + i % 3, dE = 2 + (i / 3) % 3;
    const BipartiteState rho = BipartiteState::from_pure(haar_random_pure(dS * dE, derive_seed(707, i)), dS, dE);
    const CorrelationReport c = correlation_measures(rho);
    if (!c.entanglementEntropy || !c.pureDiscord || !c.robustness) {
      o.pass = false;
      continue;
    }
    maxEntanglement = std::max(maxEntanglement, std::abs(c.mutualInformation - 2 * *c.entanglementEntropy));
    maxDiscord = std::max(maxDiscord, std::abs(c.mutualInformation - 2 * *c.pureDiscord));
    // Negativity through an independent partial transpose and trace norm.
    oracle::Matrix pt(rho.dim(), rho.dim());
    for (int a = 0; a < dS; ++a)
      for (int b = 0; b < dS; ++b)
        for (int e = 0; e < dE; ++e)
          for (int f = 0; f < dE; ++f) pt(a * dE + e, b * dE + f) = rho.matrix()(b * dE + e, a * dE + f);
    const double negativity = (oracle::hermitian_trace_norm(pt) - 1.0) / 2.0;
    maxRobust = std::max(maxRobust, std::abs(*c.robustness - 2 * negativity));
  }
  o.pass = o.pass && maxEntanglement <= 1e-9 && maxDiscord <= 1e-9 && maxRobust <= 1e-9;
  o.detail = "100 pure states, |I - 2E| " + sci(maxEntanglement) + ", |I - 2 delta| " + sci(maxDiscord) +
             ", |R - 2N| " + sci(maxRobust);
  return o;
}

Outcome hamiltonian_decomposition() {
  Outcome o;
  double maxTrace = 0.0, maxRebuild = 0.0, maxRate = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int dS = 2 + i % 3, dE = 2 + (i / 3) % 3;
    const std::uint64_t seed = derive_seed(808, i);
    const ComplexMatrix h = random_hermitian(dS * dE, seed);
    const HamiltonianTriple t = decompose_hamiltonian(h, dS, dE);
    const double scale = t.hInt.norm();
    maxTrace = std::max({maxTrace, oracle::trace_env(t.hInt, dS, dE).norm() / scale,
                         oracle::trace_sys(t.hInt, dS, dE).norm() / scale});
    maxRebuild = std::max(maxRebuild, (t.total() - h).norm() / h.norm());

    const BipartiteState rho(ginibre_mixed(dS * dE, dS * dE, derive_seed(seed, 1)).matrix(), dS, dE);
    const HamiltonianTriple shifted = decompose_hamiltonian(h + local_terms(dS, dE, derive_seed(seed, 2)), dS, dE);
    maxRate = std::max(maxRate, std::abs(entropy_rate(rho, shifted.hInt) - entropy_rate(rho, t.hInt)));
    for (int n = 2; n <= 3; ++n) {
      maxRate = std::max(maxRate, std::abs(moment_rate(rho, shifted.hInt, n) - moment_rate(rho, t.hInt, n)));
    }
  }
  o.pass = maxTrace < 1e-12 && maxRebuild <= 1e-12 && maxRate <= 1e-10;
  o.detail = "100 Hamiltonians, partial traces / ||H_int||_F " + sci(maxTrace) + ", rebuild rel err " +
             sci(maxRebuild) + ", rate change under local terms " + sci(maxRate);
  return o;
}

Outcome sparsity_census() {
  Outcome o;
  const cli::SparsitySummary s = cli::sparsity_scan(2, 2, 10000, 4, 909, 1e-3);
  o.pass = s.lazyCount == 0;
  o.detail = "10000 Ginibre states, " + std::to_string(s.lazyCount) + " below 1e-3, median ||C||_1 " +
             fmt("%.4f", s.median) + ", min " + sci(s.min);
  return o;
}

Outcome cli_contract() {
  using namespace cli_harness;
  Outcome o;
  int mismatches = 0;
  for (const GoldenCase& c : golden_cases()) {
    const CliResult a = run_cli(c.args), b = run_cli(c.args);
    const std::string golden = read_file(fs::path(LAZYLAB_GOLDEN_DIR) / (c.name + ".txt"));
    if (a.code != 0 || a.out != b.out || a.out != golden) {
      ++mismatches;
      o.detail += "[" + c.name + " differs] ";
    }
  }
  const auto detected = [](const std::string& file) {
    const CliResult r = run_cli({"detect-discord", fixture(file), "--samples", "20", "--seed", "0", "--json"});
    return r.code == 0 && json::parse(r.out).at("discordDetected").get<bool>();
  };
  const bool zd = detected("zerodiscord.json"), me = detected("maxent.json"), sc = detected("schmidt82.json");
  o.pass = mismatches == 0 && !zd && !me && sc;
  o.detail += std::to_string(golden_cases().size()) + " golden outputs, " + std::to_string(mismatches) +
              " mismatches; detect-discord zero-discord=" + (zd ? "true" : "false") +
              " maxent=" + (me ? "true" : "false") + " schmidt(0.8,0.2)=" + (sc ? "true" : "false");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"entropy-rate formula matches finite differences", entropy_rate_exactness},
      {"lazy states have vanishing rates", lazy_states_freeze},
      {"witness Hamiltonian lowers entropy of non-lazy states", witness_converse},
      {"commutator and pinching characterizations agree", pinching_equivalence},
      {"entropy, purity and mutual-information rate bounds", rate_bounds_hold},
      {"pure-state commutator norm chain", pure_state_chain},
      {"pure-state correlation identities", correlation_identities},
      {"Hamiltonian decomposition", hamiltonian_decomposition},
      {"sparsity Monte Carlo", sparsity_census},
      {"command-line contract", cli_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > 60.0) {
      o.pass = false;
      o.detail += " (exceeded 60 s)";
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
