#include "bq/states.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

namespace bq {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Ensemble

Ensemble::Ensemble(std::vector<double> probabilities, std::vector<DensityOperator> members)
    : probs_(std::move(probabilities)), members_(std::move(members)) {
  if (probs_.empty()) throw InputError("ensemble", "empty ensemble");
  if (probs_.size() != members_.size()) throw InputError("ensemble", "probability/member count mismatch");
  double total = 0.0;
  for (double p : probs_) {
    if (p < 0.0) throw ValidationError("probability", "negative ensemble weight");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("probability", "ensemble weights do not sum to 1");
  for (const auto& m : members_)
    if (!(m.layout() == members_.front().layout()))
      throw InputError("layout", "ensemble members must share one layout");
}

DensityOperator Ensemble::average() const {
  Matrix avg = Matrix::Zero(members_.front().dim(), members_.front().dim());
  for (std::size_t k = 0; k < size(); ++k) avg += probs_[k] * members_[k].matrix();
  return DensityOperator(layout(), avg / avg.trace().real());
}

double Ensemble::shannon_entropy() const { return bq::shannon_entropy(probs_); }

double Ensemble::average_mutual_information() const {
  double total = 0.0;
  for (std::size_t k = 0; k < size(); ++k)
    if (probs_[k] > 0.0) total += probs_[k] * mutual_information(members_[k]);
  return total;
}

// ---------------------------------------------------------------------------
// Families

double StateSpec::param(const std::string& name, double fallback) const {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

namespace {

Eigen::VectorXcd ket(std::initializer_list<cplx> amplitudes) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (cplx a : amplitudes) v(i++) = a;
  return v;
}

Matrix projector(const Eigen::VectorXcd& v) {
  const Eigen::VectorXcd u = v / v.norm();
  return u * u.adjoint();
}

void require_unit_interval(const std::string& name, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InputError(name, "must lie in [0,1], got " + std::to_string(x));
}

int integer_param(const StateSpec& spec, const std::string& name, int fallback, int lo) {
  const double v = spec.param(name, fallback);
  if (v != std::floor(v) || v < lo) throw InputError(name, "must be an integer >= " + std::to_string(lo));
  return static_cast<int>(v);
}

std::array<double, 4> cc_weights(const StateSpec& spec) {
  std::array<double, 4> p{spec.param("p00", 0.5), spec.param("p01", 0.0), spec.param("p10", 0.0),
                          spec.param("p11", 0.5)};
  const char* names[] = {"p00", "p01", "p10", "p11"};
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    require_unit_interval(names[i], p[i]);
    total += p[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("p", "cc weights must sum to 1");
  return p;
}

const Eigen::VectorXcd& plus_plus() {
  static const Eigen::VectorXcd v = ket({0.5, 0.5, 0.5, 0.5});
  return v;
}

const Eigen::VectorXcd& zero_zero() {
  static const Eigen::VectorXcd v = ket({1, 0, 0, 0});
  return v;
}

}  // namespace

DensityOperator bell_state() {
  return DensityOperator::pure(SubsystemLayout::bipartite(2, 2), ket({1, 0, 0, 1}));
}

DensityOperator werner_state(double p) {
  require_unit_interval("p", p);
  const Matrix singlet = projector(ket({0, 1, -1, 0}));
  return DensityOperator(SubsystemLayout::bipartite(2, 2), p * singlet + (1 - p) * Matrix::Identity(4, 4) / 4.0);
}

DensityOperator schmidt_state(double lambda_sq) {
  require_unit_interval("lambda_sq", lambda_sq);
  return DensityOperator::pure(SubsystemLayout::bipartite(2, 2),
                               ket({std::sqrt(lambda_sq), 0, 0, std::sqrt(1 - lambda_sq)}));
}

DensityOperator make_state(const StateSpec& spec) {
  const auto layout = SubsystemLayout::bipartite(2, 2);
  if (spec.family == "bell") return bell_state();
  if (spec.family == "cc") {
    const auto p = cc_weights(spec);
    return DensityOperator(layout, Eigen::Vector4d(p[0], p[1], p[2], p[3]).cast<cplx>().asDiagonal());
  }
  if (spec.family == "product-mix") {
    const double q = spec.param("q", 0.5);
    require_unit_interval("q", q);
    return DensityOperator(layout, q * projector(zero_zero()) + (1 - q) * projector(plus_plus()));
  }
  if (spec.family == "werner") return werner_state(spec.param("p", 1.0));
  if (spec.family == "isotropic") {
    const double p = spec.param("p", 1.0);
    require_unit_interval("p", p);
    return DensityOperator(layout, p * projector(ket({1, 0, 0, 1})) + (1 - p) * Matrix::Identity(4, 4) / 4.0);
  }
  if (spec.family == "random") {
    const int da = integer_param(spec, "dA", 2, 1);
    const int db = integer_param(spec, "dB", 2, 1);
    const int rank = integer_param(spec, "rank", da * db, 1);
    const auto seed = spec.seed.value_or(static_cast<std::uint64_t>(spec.param("seed", 0)));
    return random_density(SubsystemLayout::bipartite(da, db), rank, seed);
  }
  if (spec.family == "file") return load_state(spec.path);
  throw InputError("family", "unknown state family '" + spec.family + "'");
}

Ensemble canonical_ensembles(const StateSpec& spec) {
  const auto layout = SubsystemLayout::bipartite(2, 2);
  if (spec.family == "cc") {
    const auto p = cc_weights(spec);
    std::vector<double> probs;
    std::vector<DensityOperator> members;
    for (int k = 0; k < 4; ++k) {
      if (p[k] <= 0.0) continue;
      Matrix m = Matrix::Zero(4, 4);
      m(k, k) = 1.0;  // |i⟩⟨i| ⊗ |j⟩⟨j| with k = 2i + j
      probs.push_back(p[k]);
      members.emplace_back(layout, m);
    }
    return Ensemble(probs, members);
  }
  if (spec.family == "product-mix") {
    const double q = spec.param("q", 0.5);
    require_unit_interval("q", q);
    return Ensemble({q, 1 - q}, {DensityOperator::pure(layout, zero_zero()),
                                 DensityOperator::pure(layout, plus_plus())});
  }
  throw InputError("family", "no product ensemble is known for family '" + spec.family + "'");
}

DensityOperator purify(const DensityOperator& rho) {
  const Spectrum spec = hermitian_eig(rho.matrix());
  int rank = 0;
  for (double l : spec.eigenvalues)
    if (l > 1e-12) ++rank;
  rank = std::max(rank, 1);
  const int d = rho.dim();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * rank);
  for (int i = 0; i < rank; ++i) {
    const double w = std::sqrt(std::max(spec.eigenvalues(i), 0.0));
    for (int x = 0; x < d; ++x) psi(static_cast<Eigen::Index>(x) * rank + i) += w * spec.eigenvectors(x, i);
  }
  const SubsystemLayout r({{"R", rank, Side::B}});
  return DensityOperator::pure(rho.layout().concat(r), psi);
}

SubsystemLayout copies_layout(const SubsystemLayout& base, int n) {
  if (n < 1) throw InputError("n", "copy count must be >= 1");
  SubsystemLayout out = base.suffixed("1");
  for (int k = 2; k <= n; ++k) out = out.concat(base.suffixed(std::to_string(k)));
  return out;
}

DensityOperator definetti_broadcast(const Ensemble& ens, int n) {
  const SubsystemLayout layout = copies_layout(ens.layout(), n);
  const int d = layout.total_dim();
  Matrix joint = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < ens.size(); ++k) {
    Matrix power = ens.members()[k].matrix();
    for (int c = 1; c < n; ++c) power = tensor(power, ens.members()[k].matrix());
    joint += ens.probabilities()[k] * power;
  }
  return DensityOperator(layout, joint);
}

DensityOperator random_density(const SubsystemLayout& layout, int rank, std::uint64_t seed) {
  const int dim = layout.total_dim();
  if (rank < 1 || rank > dim) throw InputError("rank", "must lie in [1, dim]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix g(dim, rank);
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = cplx(normal(rng), normal(rng));
  Matrix m = g * g.adjoint();
  return DensityOperator(layout, m / m.trace().real());
}

DensityOperator random_density(int dim, int rank, std::uint64_t seed) {
  return random_density(SubsystemLayout({{"X", dim, Side::A}}), rank, seed);
}

// ---------------------------------------------------------------------------
// Channels

Matrix Channel::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(dim_out(), dim_out());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

void Channel::validate() const {
  if (kraus.empty()) throw InputError("kraus", "channel has no Kraus operators");
  Matrix sum = Matrix::Zero(dim_in(), dim_in());
  for (const auto& k : kraus) {
    if (k.cols() != dim_in() || k.rows() != dim_out()) throw InputError("kraus", "inconsistent Kraus shapes");
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(dim_in(), dim_in())).norm() > 1e-9)
    throw InputError("kraus", "channel is not trace preserving");
}

Channel depolarizing(int dim, double p) {
  require_unit_interval("p", p);
  // Kraus form via the uniform mixture of generalized Paulis X^a Z^b.
  Channel ch;
  const double w_id = std::sqrt(1.0 - p + p / (dim * dim));
  const double w = std::sqrt(p) / dim;
  const cplx omega = std::polar(1.0, 2.0 * M_PI / dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      Matrix k = Matrix::Zero(dim, dim);
      for (int j = 0; j < dim; ++j) k((j + a) % dim, j) = std::pow(omega, b * j);
      ch.kraus.push_back((a == 0 && b == 0 ? w_id : w) * k);
    }
  }
  return ch;
}

Channel identity_channel(int dim) { return Channel{{Matrix::Identity(dim, dim)}}; }

DensityOperator apply_channel(const DensityOperator& rho, const Channel& channel, std::size_t position) {
  channel.validate();
  const auto& factors = rho.layout().factors();
  if (position >= factors.size()) throw InputError("position", "factor position out of range");
  if (factors[position].dim != channel.dim_in())
    throw InputError(factors[position].label, "channel input dimension mismatch");
  int before = 1, after = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i < position) before *= factors[i].dim;
    if (i > position) after *= factors[i].dim;
  }
  const Matrix left = Matrix::Identity(before, before);
  const Matrix right = Matrix::Identity(after, after);
  const int out_dim = before * channel.dim_out() * after;
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (const auto& k : channel.kraus) {
    const Matrix full = tensor(tensor(left, k), right);
    out += full * rho.matrix() * full.adjoint();
  }
  std::vector<Factor> fs = factors;
  fs[position].dim = channel.dim_out();
  return DensityOperator(SubsystemLayout(fs), out);
}

// ---------------------------------------------------------------------------
// Files

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int line_of(const std::string& text, std::size_t byte) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

}  // namespace

std::string state_to_json(const DensityOperator& rho) {
  std::ostringstream os;
  os << "{\"format\":\"bq-state-v1\",\"labels\":[";
  const auto& fs = rho.layout().factors();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) os << ",";
    os << "{\"name\":" << json(fs[i].label).dump() << ",\"dim\":" << fs[i].dim << ",\"side\":\""
       << (fs[i].side == Side::A ? "A" : "B") << "\"}";
  }
  os << "],\"matrix\":[";
  const Matrix& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << (r ? ",\n" : "\n") << "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ",";
      os << "[" << format_double(m(r, c).real()) << "," << format_double(m(r, c).imag()) << "]";
    }
    os << "]";
  }
  os << "\n]}\n";
  return os.str();
}

DensityOperator state_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte)), e.what());
  }
  auto field = [&](const json& obj, const char* name, const std::string& where) -> const json& {
    if (!obj.is_object() || !obj.contains(name)) throw ParseError(where + "." + name, "missing field");
    return obj.at(name);
  };
  if (!doc.is_object()) throw ParseError("document", "top level must be an object");
  const json& format = field(doc, "format", "document");
  if (!format.is_string() || format.get<std::string>() != "bq-state-v1")
    throw ParseError("format", "expected \"bq-state-v1\"");
  const json& labels = field(doc, "labels", "document");
  if (!labels.is_array() || labels.empty()) throw ParseError("labels", "must be a nonempty array");
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string where = "labels[" + std::to_string(i) + "]";
    const json& name = field(labels[i], "name", where);
    const json& dim = field(labels[i], "dim", where);
    const json& side = field(labels[i], "side", where);
    if (!name.is_string()) throw ParseError(where + ".name", "must be a string");
    if (!dim.is_number_integer() || dim.get<int>() < 1) throw ParseError(where + ".dim", "must be a positive integer");
    if (!side.is_string() || (side != "A" && side != "B")) throw ParseError(where + ".side", "must be \"A\" or \"B\"");
    factors.push_back({name.get<std::string>(), dim.get<int>(), side == "A" ? Side::A : Side::B});
  }
  SubsystemLayout layout(std::move(factors));
  const int n = layout.total_dim();
  const json& rows = field(doc, "matrix", "document");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ParseError("matrix", "expected " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError("matrix[" + std::to_string(r) + "]", "expected " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError("matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                         "entry must be [re, im]");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return DensityOperator(std::move(layout), std::move(m));
}

void save_state(const std::filesystem::path& path, const DensityOperator& rho) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string(), "cannot open for writing");
  out << state_to_json(rho);
  if (!out) throw InputError(path.string(), "write failed");
}

DensityOperator load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), "cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return state_from_json(ss.str());
}

}  // namespace bq
