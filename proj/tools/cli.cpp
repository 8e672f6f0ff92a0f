#include "cli.hpp"

#include <Eigen/Eigenvalues>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "nct/anchors.hpp"
#include "nct/bridge.hpp"

namespace nct::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// configuration

json RunConfig::defaults() {
  return json{
      // module
      {"norm", "euclidean"},
      {"p", 0},
      {"q", 1},
      {"d", 1},
      {"theta", 0.7071067811865476},
      {"seed", 1},
      // D-norm grid and inner-product box
      {"grid_directions", 64},
      {"grid_t", 33},
      {"box_radius", 16},
      {"tail", "ring"},
      // dnorm-sweep
      {"vector", "hermite:0"},
      {"theta_limit", 0.7071067811865476},
      {"k_min", 1},
      {"k_max", 8},
      {"rho", "constant"},
      {"rho_slope", 0.0},
      // laguerre-approx
      {"profile_radius", 2.0},
      {"eth_min", 1.0},
      {"eth_max", 1.0},
      {"eth_points", 1},
      {"cesaro_N", json::array({4, 16, 64})},
      {"normalization", "auto"},
      // bridge-length
      {"h_values", json::array({0.1, 0.05, 0.01})},
      {"anchor_N", 6},
      {"anchor_epsilon", 1.0},
      {"anchor_random_extra", 3},
      {"anchor_density_samples", 6},
      {"anchor_max", 16},
      {"anchor_grid_directions", 16},
      {"anchor_grid_t", 9},
      {"anchor_box", 8},
      {"pivot_orders", json::array({4, 6, 8, 10, 12, 14})},
      {"bridge_box", 10},
      {"bridge_drop", 1e-10},
      {"sample_budget", 128},
      {"imprint_samples", 3},
      // inner-product
      {"xi", "gaussian"},
      {"omega", "hermite:1"},
  };
}

namespace {

void check_type(const std::string& key, const json& def, const json& v) {
  auto bad = [&](const char* want) { throw ConfigError("config field '" + key + "': expected " + want); };
  if (def.is_number_integer()) {
    if (!v.is_number_integer()) bad("an integer");
  } else if (def.is_number()) {
    if (!v.is_number()) bad("a number");
  } else if (def.is_string()) {
    if (!v.is_string()) bad("a string");
  } else if (def.is_array()) {
    if (!v.is_array() || v.empty()) bad("a nonempty array");
    const bool ints = def.front().is_number_integer();
    for (const auto& e : v)
      if (ints ? !e.is_number_integer() : !e.is_number()) bad(ints ? "an array of integers" : "an array of numbers");
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config field '" + key + "': " + what);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// independent stream per use site, all drawn from the config seed
std::uint64_t sub_seed(std::uint64_t seed, std::uint32_t site) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), site};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t(out[0]) << 32) | out[1];
}

}  // namespace

RunConfig RunConfig::load(const std::string& text, const std::vector<std::string>& overrides) {
  json user;
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      user = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!user.is_object()) throw ConfigError("config must be a JSON object");
  } else {
    user = json::object();
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "': expected key=value");
    const std::string k = o.substr(0, eq), v = o.substr(eq + 1);
    json parsed = json::parse(v, nullptr, false);
    user[k] = parsed.is_discarded() ? json(v) : parsed;
  }

  RunConfig cfg;
  cfg.values = defaults();
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!cfg.values.contains(it.key())) throw ConfigError("config: unknown field '" + it.key() + "'");
    if (it.value().is_object()) throw ConfigError("config field '" + it.key() + "': nested objects are not allowed");
    check_type(it.key(), cfg.values[it.key()], it.value());
    cfg.values[it.key()] = it.value();
  }

  // module-level preconditions, checked at load
  try {
    cfg.params().validate();
    cfg.params(cfg.num("theta_limit")).validate();
    parse_plane_norm(cfg.str("norm"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  require(cfg.integer("grid_directions") >= 1, "grid_directions", "must be >= 1");
  require(cfg.integer("grid_t") >= 2, "grid_t", "must be >= 2");
  require(cfg.integer("box_radius") >= 1, "box_radius", "must be >= 1");
  require(cfg.str("tail") == "ring" || cfg.str("tail") == "doubling", "tail", "must be ring or doubling");
  require(cfg.integer("k_min") >= 0 && cfg.integer("k_min") <= cfg.integer("k_max"), "k_min",
          "must satisfy 0 <= k_min <= k_max");
  require(cfg.str("rho") == "constant" || cfg.str("rho") == "affine", "rho", "must be constant or affine");
  require(cfg.num("profile_radius") > 0, "profile_radius", "must be positive");
  require(cfg.num("eth_min") > 0 && cfg.num("eth_min") <= cfg.num("eth_max"), "eth_min",
          "must satisfy 0 < eth_min <= eth_max");
  require(cfg.integer("eth_points") >= 1, "eth_points", "must be >= 1");
  for (int N : cfg.integers("cesaro_N")) require(N >= 0, "cesaro_N", "entries must be >= 0");
  const std::string nn = cfg.str("normalization");
  require(nn == "auto" || nn == "literal" || nn == "orthonormal", "normalization",
          "must be auto, literal or orthonormal");
  for (double h : cfg.nums("h_values")) {
    require(h > 0, "h_values", "entries must be positive");
    try {
      cfg.params(cfg.num("theta") + h).validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config field 'h_values': ") + e.what());
    }
  }
  for (int N : cfg.integers("pivot_orders")) require(N >= 1, "pivot_orders", "entries must be >= 1");
  for (const char* k : {"anchor_N", "anchor_random_extra", "anchor_density_samples"})
    require(cfg.integer(k) >= 0, k, "must be >= 0");
  for (const char* k : {"anchor_max", "anchor_grid_directions", "anchor_box", "bridge_box", "sample_budget",
                        "imprint_samples"})
    require(cfg.integer(k) >= 1, k, "must be >= 1");
  require(cfg.integer("anchor_grid_t") >= 2, "anchor_grid_t", "must be >= 2");
  require(cfg.num("anchor_epsilon") > 0, "anchor_epsilon", "must be positive");
  require(cfg.num("bridge_drop") >= 0, "bridge_drop", "must be >= 0");
  require(cfg.values["seed"].get<long long>() >= 0, "seed", "must be >= 0");
  for (const char* k : {"vector", "xi", "omega"}) {
    try {
      vector_from_tag(cfg.str(k), cfg.params());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config field '") + k + "': " + e.what());
    }
  }
  return cfg;
}

double RunConfig::num(const std::string& key) const { return values.at(key).get<double>(); }
int RunConfig::integer(const std::string& key) const { return values.at(key).get<int>(); }
std::string RunConfig::str(const std::string& key) const { return values.at(key).get<std::string>(); }
std::vector<double> RunConfig::nums(const std::string& key) const {
  return values.at(key).get<std::vector<double>>();
}
std::vector<int> RunConfig::integers(const std::string& key) const { return values.at(key).get<std::vector<int>>(); }

ModuleParams RunConfig::params(double theta) const {
  return ModuleParams(integer("p"), integer("q"), integer("d"), theta);
}

GridSpec RunConfig::grid() const { return GridSpec{integer("grid_directions"), integer("grid_t"), norm()}; }
PlaneNorm RunConfig::norm() const { return parse_plane_norm(str("norm")); }
std::uint64_t RunConfig::seed() const { return values.at("seed").get<std::uint64_t>(); }
std::string RunConfig::fingerprint() const { return hex16(fnv1a(values.dump())); }

SchwartzVector vector_from_tag(const std::string& tag, const ModuleParams& P) {
  const double e = std::abs(P.eth());
  if (tag == "zero") return SchwartzVector::zero(P.d);
  if (tag == "gaussian") return SchwartzVector::gaussian(P.d, 0);
  if (tag.rfind("hermite:", 0) == 0) {
    std::size_t used = 0;
    const std::string rest = tag.substr(8);
    int j = -1;
    try {
      j = std::stoi(rest, &used);
    } catch (const std::exception&) {
    }
    if (j < 0 || used != rest.size()) throw ParameterError("bad Hermite index in '" + tag + "'");
    return SchwartzVector::hermite(e, j, P.d, 0);
  }
  if (tag.rfind("dilated:", 0) == 0) {
    const std::string rest = tag.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ParameterError("expected dilated:r:<tag> in '" + tag + "'");
    char* end = nullptr;
    const std::string rs = rest.substr(0, colon);
    const double r = std::strtod(rs.c_str(), &end);
    if (rs.empty() || *end != '\0') throw ParameterError("bad dilation factor in '" + tag + "'");
    return dilate(vector_from_tag(rest.substr(colon + 1), P), r);
  }
  throw ParameterError("unknown vector tag '" + tag + "'");
}

// ---------------------------------------------------------------------------
// output

namespace {

std::string cell(const json& v) {
  if (v.is_number_float()) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());  // shortest round trip
    return std::string(buf, res.ptr);
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string to_csv(const Table& t, const RunConfig& cfg) {
  std::ostringstream os;
  os << "# nct " << t.command << " fingerprint=" << cfg.fingerprint() << " seed=" << cfg.seed()
     << " units=dimensionless (theta in turns)\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
    os << '\n';
  }
  return os.str();
}

json to_json(const Table& t, const RunConfig& cfg) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
    rows.push_back(o);
  }
  return json{{"command", t.command}, {"fingerprint", cfg.fingerprint()}, {"config", cfg.values}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// invariants

namespace {

SchwartzVector random_series(const ModuleParams& P, std::mt19937_64& rng, int terms) {
  std::normal_distribution<double> g;
  std::vector<std::vector<cplx>> co(terms, std::vector<cplx>(P.d));
  for (auto& row : co)
    for (auto& c : row) c = cplx(g(rng), g(rng));
  SchwartzVector v = SchwartzVector::hermite_series(std::abs(P.eth()), co);
  return v.scaled(1.0 / l2_norm(v));
}

TorusElement random_element(double theta, std::mt19937_64& rng, int radius) {
  std::normal_distribution<double> g;
  TorusElement a(theta);
  for (int n = -radius; n <= radius; ++n)
    for (int m = -radius; m <= radius; ++m) a.add(n, m, cplx(g(rng), g(rng)));
  return a;
}

double box_distance(const TorusElement& a, const TorusElement& b, int R) {
  double worst = 0.0;
  for (int n = -R; n <= R; ++n)
    for (int m = -R; m <= R; ++m) worst = std::max(worst, std::abs(a.at(n, m) - b.at(n, m)));
  return worst;
}

}  // namespace

std::vector<CheckResult> run_invariants(const RunConfig& cfg, bool broken) {
  const ModuleParams P = cfg.params();
  const double th = P.theta;
  std::mt19937_64 rng(sub_seed(cfg.seed(), 1));
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, double value, double tol) {
    if (broken) tol = -std::numeric_limits<double>::max();
    out.push_back({name, value, tol, value <= tol});
  };

  {
    TorusElement U = TorusElement::U(th), V = TorusElement::V(th);
    add("qtorus.commutation",
        max_coeff_distance(twisted_product(V, U), twisted_product(U, V) * std::polar(1.0, kTwoPi * th)), 1e-14);
    TorusElement a = random_element(th, rng, 2), b = random_element(th, rng, 2);
    add("qtorus.involution_reverses_products",
        max_coeff_distance(involution(twisted_product(a, b)), twisted_product(involution(b), involution(a))),
        1e-12);
    NormInterval n = torus_norm(U, 8);
    add("qtorus.unitary_norm_bracket", std::max({0.0, n.lower - 1.0, 1.0 - n.upper}), 1e-10);
    double worst = 0.0;
    for (int N : {8, 16, 32, 64}) worst = std::max(worst, N * fejer_constant(N, cfg.norm(), 2 * N));
    add("qtorus.fejer_constant_times_N", worst, 3.0);
  }
  {
    double worst = 0.0;
    for (int j = 0; j <= 4; ++j)
      for (int k = 0; k <= 4; ++k) {
        cplx v = l2_inner(SchwartzVector::hermite(std::abs(P.eth()), j), SchwartzVector::hermite(std::abs(P.eth()), k));
        worst = std::max(worst, std::abs(v - (j == k ? 1.0 : 0.0)));
      }
    add("schwartz.hermite_orthonormality", worst, 1e-10);
  }
  {
    ClockShift cs = clock_shift(P);
    add("heisenberg.clock_shift_relation",
        (cs.v * cs.u - std::polar(1.0, kTwoPi * P.p / P.q) * cs.u * cs.v).cwiseAbs().maxCoeff(), 1e-12);
    SchwartzVector xi = random_series(P, rng, 3);
    std::vector<double> s;
    for (int i = 0; i <= 40; ++i) s.push_back(-2.0 + 0.1 * i);
    std::uniform_int_distribution<int> pick(-3, 3);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      Site g{pick(rng), pick(rng)}, h{pick(rng), pick(rng)};
      Jet L = varpi_act(P, g.n, g.m, varpi_act(P, h.n, h.m, xi)).evaluate(s);
      Jet R = varpi_act(P, g.n + h.n, g.m + h.m, xi).evaluate(s);
      const cplx c = cocycle(th, g, h);
      for (std::size_t k = 0; k < s.size(); ++k)
        for (int j = 0; j < P.d; ++j) worst = std::max(worst, std::abs(L(0, k, j) - c * R(0, k, j)));
    }
    add("heisenberg.varpi_cocycle", worst, 1e-10);
  }
  {
    constexpr int R = 8;
    const InnerOptions o{TailMode::ring, {}};
    SchwartzVector xi = random_series(P, rng, 3), om = random_series(P, rng, 3);
    TorusElement ab = module_inner(xi, om, P, R, o).element;
    add("hmodule.hermiticity", box_distance(involution(ab), module_inner(om, xi, P, R, o).element, R), 1e-8);
    Eigen::MatrixXcd M = gns_matrix(module_inner(xi, xi, P, R, o).element, R / 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
    add("hmodule.gns_positivity", -es.eigenvalues().minCoeff(), 1e-8);
    TorusElement a = random_element(th, rng, 1);
    add("hmodule.left_module_identity",
        box_distance(module_inner(module_left_act(a, xi, P), om, P, R, o).element, twisted_product(a, ab), R - 1),
        1e-8);
    DNormEstimate d = dnorm(xi, P, GridSpec{8, 5, cfg.norm()}, R);
    add("hmodule.dnorm_dominates_module_norm",
        module_norm(xi, P, R, {o, {}}).lower - d.interval.upper, 1e-9);
  }
  {
    std::vector<double> err;
    select_cesaro_normalization(bump_profile(2.0), 1.0, {4, 16, 64}, &err);
    add("specfun.cesaro_error_decreasing", std::max(err[1] - err[0], err[2] - err[1]), 0.0);
  }
  {
    TorusElement a = random_element(th, rng, 1);
    add("bridge.identity_pivot_self_distance", bridge_norm(a, a, PivotSpec::identity(5)).upper, 1e-12);
  }
  return out;
}

// ---------------------------------------------------------------------------
// tables

Table dnorm_sweep(const RunConfig& cfg) {
  Table t{"dnorm-sweep", {"k", "theta", "rho", "dnorm_lower", "dnorm_upper", "dnorm_midpoint", "gap_rel"}, {}};
  const double lim_theta = cfg.num("theta_limit");
  const ModuleParams lim = cfg.params(lim_theta);
  const SchwartzVector xi = vector_from_tag(cfg.str("vector"), lim);
  const bool affine = cfg.str("rho") == "affine";
  auto rho = [&](double th) { return affine ? 1.0 + cfg.num("rho_slope") * (th - lim_theta) : 1.0; };
  const int box = cfg.integer("box_radius");
  const double mid_lim = dnorm(xi, lim, cfg.grid(), box, {}, rho(lim_theta)).interval.midpoint();
  for (int k = cfg.integer("k_min"); k <= cfg.integer("k_max"); ++k) {
    const double th = lim_theta + std::ldexp(1.0, -k);
    const double r = rho(th);
    if (!(r > 0.0)) throw ParameterError("rho must stay positive on the sweep");
    NormInterval n = dnorm(xi, cfg.params(th), cfg.grid(), box, {}, r).interval;
    const double gap = mid_lim > 0.0 ? std::abs(n.midpoint() - mid_lim) / mid_lim : 0.0;
    t.rows.push_back({k, th, r, n.lower, n.upper, n.midpoint(), gap});
  }
  return t;
}

Table laguerre_approx(const RunConfig& cfg) {
  Table t{"laguerre-approx", {"eth", "N", "normalization", "l1_rdr_error"}, {}};
  const RadialProfile f = bump_profile(cfg.num("profile_radius"));
  const std::vector<int> Ns = cfg.integers("cesaro_N");
  CesaroNormalization norm = CesaroNormalization::literal;
  const std::string sel = cfg.str("normalization");
  if (sel == "orthonormal") norm = CesaroNormalization::orthonormal;
  if (sel == "auto") norm = select_cesaro_normalization(f, 1.0, Ns);
  const int pts = cfg.integer("eth_points");
  const double lo = cfg.num("eth_min"), hi = cfg.num("eth_max");
  for (int i = 0; i < pts; ++i) {
    const double e = pts == 1 ? lo : lo + (hi - lo) * i / (pts - 1);
    for (int N : Ns) t.rows.push_back({e, N, to_string(norm), cesaro_error(f, e, N, norm)});
  }
  return t;
}

Table bridge_length_sweep(const RunConfig& cfg) {
  Table t{"bridge-length",
          {"theta", "vartheta", "h", "pivot_order", "reach_modular", "imprint_a", "imprint_b", "basic_estimate",
           "total", "seed", "grid_fingerprint"},
          {}};
  const ModuleParams A = cfg.params();
  AnchorOptions ao;
  ao.grid = GridSpec{cfg.integer("anchor_grid_directions"), cfg.integer("anchor_grid_t"), cfg.norm()};
  ao.box_radius = cfg.integer("anchor_box");
  ao.random_extra = cfg.integer("anchor_random_extra");
  ao.density_samples = cfg.integer("anchor_density_samples");
  ao.max_anchors = cfg.integer("anchor_max");
  ao.seed = sub_seed(cfg.seed(), 2);
  const int N = cfg.integer("anchor_N");
  const AnchorFamily fam = anchor_family(A, cfg.num("anchor_epsilon"), N, ao);
  std::vector<Tester> anchors;
  for (const auto& a : fam.anchors) anchors.push_back(a.t);

  BridgeLengthOptions bo;
  bo.box_radius = cfg.integer("bridge_box");
  bo.norm.drop = cfg.num("bridge_drop");
  bo.sample_budget = cfg.integer("sample_budget");
  bo.seed = sub_seed(cfg.seed(), 3);
  const std::uint64_t imprint_seed = sub_seed(cfg.seed(), 4);
  const std::string gfp = "g" + std::to_string(ao.grid.directions) + "x" + std::to_string(ao.grid.t_samples) +
                          "b" + std::to_string(ao.box_radius) + "i" + std::to_string(bo.box_radius);

  for (double h : cfg.nums("h_values")) {
    const ModuleParams B = A.with_theta(A.theta + h);
    ModularBridge br{PivotSpec::fejer(cfg.integers("pivot_orders").front()), A, B, anchors,
                     rescaled_co_anchors(fam, B, ao)};
    br.pivot = select_fejer_pivot(br, cfg.integers("pivot_orders"), bo.box_radius, bo.inner, bo.norm);
    ImprintInputs im;
    im.samples_a = random_unit_ball(A, N, cfg.integer("imprint_samples"), imprint_seed, ao);
    im.samples_b = random_unit_ball(B, N, cfg.integer("imprint_samples"), imprint_seed, ao);
    im.testers_a = br.anchors;
    im.testers_b = br.co_anchors;
    const BridgeLengthReport r = bridge_length(br, im, bo);
    t.rows.push_back({A.theta, B.theta, h, br.pivot.order, r.modular_reach, r.imprint_a, r.imprint_b,
                      r.basic.value, r.propinquity_upper, cfg.seed(), gfp});
  }
  return t;
}

Table inner_product(const RunConfig& cfg) {
  Table t{"inner-product", {"n", "m", "re", "im", "tail_bound", "certified"}, {}};
  const ModuleParams P = cfg.params();
  const SchwartzVector xi = vector_from_tag(cfg.str("xi"), P), om = vector_from_tag(cfg.str("omega"), P);
  InnerOptions o;
  o.tail = cfg.str("tail") == "ring" ? TailMode::ring : TailMode::doubling;
  const int R = cfg.integer("box_radius");
  const InnerProductResult r = module_inner(xi, om, P, R, o);
  for (int n = -R; n <= R; ++n)
    for (int m = -R; m <= R; ++m) {
      const cplx c = r.element.at(n, m);
      t.rows.push_back({n, m, c.real(), c.imag(), r.tail_bound, r.certified ? 1 : 0});
    }
  return t;
}

// ---------------------------------------------------------------------------
// entry point

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << body;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"noncommutative torus modules: invariant checks and experiment tables"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::vector<std::string> sets;
  bool broken = false;

  const char* names[] = {"invariants", "dnorm-sweep", "laguerre-approx", "bridge-length", "inner-product"};
  for (const char* name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "flat JSON config; defaults apply to missing keys");
    sub->add_option("--set", sets, "key=value override, repeatable");
    sub->add_option("-o,--out", out_dir, "output directory (else $NCT_OUT_DIR, else .)");
    if (std::string(name) == "invariants")
      sub->add_flag("--break-tolerance", broken, "replace every tolerance so each check fails");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  if (out_dir.empty()) {
    const char* env = std::getenv("NCT_OUT_DIR");
    out_dir = env ? env : ".";
  }

  try {
    const RunConfig cfg = RunConfig::load(config_path.empty() ? "" : read_file(config_path), sets);
    if (cmd == "invariants") {
      const auto checks = run_invariants(cfg, broken);
      json arr = json::array();
      bool ok = true;
      Table t{"invariants", {"check", "value", "tolerance", "pass"}, {}};
      for (const auto& c : checks) {
        ok = ok && c.pass;
        t.rows.push_back({c.name, c.value, c.tolerance, c.pass ? 1 : 0});
        std::printf("%s %s value=%.3e tolerance=%.3e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                    c.tolerance);
      }
      json j = to_json(t, cfg);
      j["pass"] = ok;
      write_file(out_dir + "/invariants.csv", to_csv(t, cfg));
      write_file(out_dir + "/invariants.json", j.dump(2) + "\n");
      return ok ? kPass : kInvariantFailure;
    }
    Table t;
    if (cmd == "dnorm-sweep") t = dnorm_sweep(cfg);
    if (cmd == "laguerre-approx") t = laguerre_approx(cfg);
    if (cmd == "bridge-length") t = bridge_length_sweep(cfg);
    if (cmd == "inner-product") t = inner_product(cfg);
    const std::string csv = to_csv(t, cfg);
    write_file(out_dir + "/" + cmd + ".csv", csv);
    write_file(out_dir + "/" + cmd + ".json", to_json(t, cfg).dump(2) + "\n");
    std::fputs(csv.c_str(), stdout);
    return kPass;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    // ParameterError and DimensionError raised by a module precondition
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
}

}  // namespace nct::cli
