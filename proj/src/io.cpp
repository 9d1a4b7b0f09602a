#include "lazylab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lazylab {

using nlohmann::json;

namespace {

StateKind parse_kind(const std::string& s) {
  if (s == "density") return StateKind::Density;
  if (s == "purevector") return StateKind::PureVector;
  if (s == "hermitian") return StateKind::Hermitian;
  throw ParseError("unknown state kind \"" + s + "\"");
}

std::size_t expected_entries(const StateFile& f) {
  const auto n = static_cast<std::size_t>(f.ds) * static_cast<std::size_t>(f.de);
  return f.kind == StateKind::PureVector ? n : n * n;
}

std::string number(double x) { return json(x).dump(); }

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  const auto& x = j.at(key);
  if (x.is_null()) {
    v.reset();
  } else {
    v = x.get<T>();
  }
}

}  // namespace

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Density:
      return "density";
    case StateKind::PureVector:
      return "purevector";
    case StateKind::Hermitian:
      return "hermitian";
  }
  return "density";
}

StateFile StateFile::from_state(const BipartiteState& rho) {
  StateFile f;
  f.ds = rho.ds();
  f.de = rho.de();
  f.kind = StateKind::Density;
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) f.data.push_back(m(i, j));
  return f;
}

StateFile StateFile::from_vector(const ComplexVector& chi, int dS, int dE) {
  StateFile f;
  f.ds = dS;
  f.de = dE;
  f.kind = StateKind::PureVector;
  f.data.assign(chi.data(), chi.data() + chi.size());
  return f;
}

StateFile StateFile::from_hamiltonian(const ComplexMatrix& h, int dS, int dE) {
  StateFile f;
  f.ds = dS;
  f.de = dE;
  f.kind = StateKind::Hermitian;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j) f.data.push_back(h(i, j));
  return f;
}

ComplexMatrix StateFile::matrix() const {
  if (kind == StateKind::PureVector) throw ParseError("file holds a vector, not a matrix");
  const int n = ds * de;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = data.at(static_cast<std::size_t>(i) * n + j);
  return m;
}

ComplexVector StateFile::vector() const {
  if (kind != StateKind::PureVector) throw ParseError("file holds a matrix, not a vector");
  ComplexVector v(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) v(static_cast<Eigen::Index>(i)) = data[i];
  return v;
}

BipartiteState StateFile::state() const {
  try {
    switch (kind) {
      case StateKind::PureVector:
        return BipartiteState::from_pure(vector(), ds, de);
      case StateKind::Density:
        return BipartiteState(matrix(), ds, de);
      case StateKind::Hermitian:
        break;
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid state payload: ") + e.what());
  }
  throw ParseError("expected a state file, got kind \"hermitian\"");
}

ComplexMatrix StateFile::hamiltonian() const {
  if (kind != StateKind::Hermitian) {
    throw ParseError(std::string("expected a hermitian file, got kind \"") + to_string(kind) + "\"");
  }
  const ComplexMatrix m = matrix();
  if (!qmat::is_hermitian(m)) throw ParseError("hamiltonian payload is not Hermitian");
  return m;
}

StateFile parse_state_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  StateFile f;
  try {
    const auto& dims = j.at("dims");
    if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
        !dims[1].is_number_integer()) {
      throw ParseError("\"dims\" must be a pair of integers");
    }
    f.ds = dims[0].get<int>();
    f.de = dims[1].get<int>();
    if (f.ds < 1 || f.de < 1) throw ParseError("\"dims\" entries must be positive");
    f.kind = parse_kind(j.at("kind").get<std::string>());
    const auto& data = j.at("data");
    if (!data.is_array()) throw ParseError("\"data\" must be an array");
    if (data.size() != expected_entries(f)) {
      std::ostringstream msg;
      msg << "\"data\" has " << data.size() << " entries, expected " << expected_entries(f);
      throw ParseError(msg.str());
    }
    f.data.reserve(data.size());
    for (const auto& z : data) {
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw ParseError("complex entries must be [re, im] number pairs");
      }
      const Complex c(z[0].get<double>(), z[1].get<double>());
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw ParseError("non-finite entry");
      }
      f.data.push_back(c);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid state file: ") + e.what());
  }
  if (f.kind == StateKind::Hermitian) {
    f.hamiltonian();
  } else {
    f.state();
  }
  return f;
}

std::string serialize(const StateFile& f) {
  std::ostringstream out;
  out << "{\n  \"dims\": [" << f.ds << ", " << f.de << "],\n  \"kind\": \"" << to_string(f.kind)
      << "\",\n  \"data\": [";
  const std::size_t rowLen =
      f.kind == StateKind::PureVector ? 1 : static_cast<std::size_t>(f.ds) * f.de;
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    out << (i == 0 ? "\n    " : (i % rowLen == 0 ? ",\n    " : ", "));
    out << "[" << number(f.data[i].real()) << ", " << number(f.data[i].imag()) << "]";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

StateFile load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_state_file(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_state_file(const std::string& path, const StateFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << serialize(file);
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void to_json(json& j, const RateReport& r) {
  j = json{{"entropyRate", r.entropyRate},
           {"purityRate", r.purityRate},
           {"entropyBound", r.entropyBound},
           {"purityBound", r.purityBound},
           {"hIntOperatorNorm", r.hIntOperatorNorm},
           {"hIntNorm", r.hIntNorm},
           {"lnCommutatorTraceNorm", r.lnCommutatorTraceNorm},
           {"commutatorTraceNorm", r.commutatorTraceNorm}};
  json m = json::object();
  for (const auto& [n, v] : r.momentRates) m[std::to_string(n)] = v;
  j["momentRates"] = m;
  put_optional(j, "miPurityBound", r.miPurityBound);
}

void from_json(const json& j, RateReport& r) {
  j.at("entropyRate").get_to(r.entropyRate);
  j.at("purityRate").get_to(r.purityRate);
  j.at("entropyBound").get_to(r.entropyBound);
  j.at("purityBound").get_to(r.purityBound);
  j.at("hIntOperatorNorm").get_to(r.hIntOperatorNorm);
  j.at("hIntNorm").get_to(r.hIntNorm);
  j.at("lnCommutatorTraceNorm").get_to(r.lnCommutatorTraceNorm);
  j.at("commutatorTraceNorm").get_to(r.commutatorTraceNorm);
  r.momentRates.clear();
  for (const auto& [key, v] : j.at("momentRates").items()) r.momentRates[std::stoi(key)] = v.get<double>();
  get_optional(j, "miPurityBound", r.miPurityBound);
}

void to_json(json& j, const CorrelationReport& r) {
  j = json{{"mutualInformation", r.mutualInformation},
           {"systemEntropy", r.systemEntropy},
           {"environmentEntropy", r.environmentEntropy},
           {"totalEntropy", r.totalEntropy},
           {"negativity", r.negativity}};
  put_optional(j, "entanglementEntropy", r.entanglementEntropy);
  put_optional(j, "pureDiscord", r.pureDiscord);
  put_optional(j, "robustness", r.robustness);
}

void from_json(const json& j, CorrelationReport& r) {
  j.at("mutualInformation").get_to(r.mutualInformation);
  j.at("systemEntropy").get_to(r.systemEntropy);
  j.at("environmentEntropy").get_to(r.environmentEntropy);
  j.at("totalEntropy").get_to(r.totalEntropy);
  j.at("negativity").get_to(r.negativity);
  get_optional(j, "entanglementEntropy", r.entanglementEntropy);
  get_optional(j, "pureDiscord", r.pureDiscord);
  get_optional(j, "robustness", r.robustness);
}

void to_json(json& j, const PureStateAnalytics& r) {
  j = json{{"isLazy", r.isLazy},
           {"commutatorTraceNorm", r.commutatorTraceNorm},
           {"entrywiseBound", r.entrywiseBound},
           {"robustness", r.robustness}};
}

void from_json(const json& j, PureStateAnalytics& r) {
  j.at("isLazy").get_to(r.isLazy);
  j.at("commutatorTraceNorm").get_to(r.commutatorTraceNorm);
  j.at("entrywiseBound").get_to(r.entrywiseBound);
  j.at("robustness").get_to(r.robustness);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<int>& moments) {
  out << "time,entropy,purity,comm_trace_norm,entropy_rate,entropy_bound,purity_rate,purity_bound";
  for (int n : moments) out << ",f_" << n;
  out << "\r\n";
  for (const TrajectoryRecord& r : traj.records) {
    out << format_real(r.time) << ',' << format_real(r.entropy) << ',' << format_real(r.purity)
        << ',' << format_real(r.commutatorTraceNorm) << ',' << format_real(r.entropyRate) << ','
        << format_real(r.entropyBound) << ',' << format_real(r.purityRate) << ','
        << format_real(r.purityBound);
    for (int n : moments) out << ',' << format_real(r.momentValues.at(n));
    out << "\r\n";
  }
}

}  // namespace lazylab
