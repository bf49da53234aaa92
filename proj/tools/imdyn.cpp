#include "imdyn/distortion.hpp"
#include "imdyn/expansion.hpp"
#include "imdyn/map_gen.hpp"
#include "imdyn/measure.hpp"
#include "imdyn/orbit.hpp"
#include "imdyn/renorm.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace imdyn;

constexpr int kExitInput = 1;
constexpr int kExitRefusal = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PiecewiseMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open map file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_map(ss.str());
  } catch (const MapError& e) {
    throw InputError(std::string("map parse error: ") + e.what());
  }
}

Rational parse_rat(const std::string& s, const std::string& what) {
  auto v = parse_rational(s);
  if (!v) throw InputError("malformed " + what + ": " + s);
  return *v;
}

/// Report sink: --out file or stdout.
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw InputError("cannot open output file: " + path);
      os = &file;
    }
  }
  template <class T>
  Sink& operator<<(const T& v) {
    *os << v;
    return *this;
  }
};

int threads_cap() {
  const char* env = std::getenv("IMDYN_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw InputError("invalid IMDYN_THREADS value");
  return static_cast<int>(v);
}

int cmd_orbits(const std::string& mapfile, std::size_t period, const std::string& out) {
  auto f = load_map(mapfile);
  auto orbits = periodic_orbits(f, period);
  Sink sink(out);
  sink << "word,base,period,mult_left,mult_right,magnitude,type\n";
  for (const auto& o : orbits) {
    sink << word_to_string(o.word) << "," << to_string(o.points.front()) << "," << o.period
         << "," << to_string(o.multiplier.left) << "," << to_string(o.multiplier.right)
         << "," << to_string(o.multiplier_magnitude()) << "," << to_string(o.hyperbolicity)
         << "\n";
  }
  std::cout << "period=" << period << " orbits=" << orbits.size() << "\n";
  return 0;
}

int cmd_kn(const std::string& mapfile, std::size_t nmax, const std::string& out) {
  auto f = load_map(mapfile);
  auto table = kn_table(f, nmax);
  Sink sink(out);
  sink << "n,K_n,orbit_count,word\n";
  for (const auto& r : table.rows) {
    sink << r.n << "," << (r.K_n ? to_string(*r.K_n) : "") << "," << r.orbit_count << ","
         << word_to_string(r.attaining_word) << "\n";
  }
  const auto& last = table.rows.back();
  std::cout << "nmax=" << nmax << " K_nmax=" << (last.K_n ? to_string(*last.K_n) : "none")
            << "\n";
  return 0;
}

int cmd_expand(const std::string& mapfile, std::size_t limit, const std::string& out) {
  auto f = load_map(mapfile);
  auto res = expansion_N(f, limit);
  if (const auto* c = std::get_if<ExpansionCertificate>(&res)) {
    Sink sink(out);
    sink << "N,min_expansion,witness_word\n";
    sink << c->N << "," << to_string(c->min_expansion) << "," << word_to_string(c->witness_word)
         << "\n";
    std::cout << "N=" << c->N << " min_expansion=" << to_string(c->min_expansion) << "\n";
    return 0;
  }
  const auto& r = std::get<ExpansionRefusal>(res);
  std::cout << "refused: no expansion up to N=" << r.n_limit
            << " min_at_limit=" << to_string(r.min_at_limit) << " worst_word="
            << word_to_string(r.worst_word) << "\n";
  return kExitRefusal;
}

IntervalSet parse_avoid(const std::string& spec) {
  IntervalSet U;
  if (spec.empty()) return U;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    auto comma = part.find(',');
    if (comma == std::string::npos) throw InputError("avoid needs lo,hi pairs: " + part);
    Rational lo = parse_rat(part.substr(0, comma), "avoid endpoint");
    Rational hi = parse_rat(part.substr(comma + 1), "avoid endpoint");
    if (!(lo < hi)) throw InputError("avoid interval must have lo < hi: " + part);
    U.add({lo, hi});
  }
  return U;
}

int cmd_mane(const std::string& mapfile, const std::string& avoid, std::size_t nmax,
             const std::string& out) {
  auto f = load_map(mapfile);
  auto U = parse_avoid(avoid);
  auto mg = mane_growth(f, U, nmax);
  Sink sink(out);
  sink << "n,min_abs_deriv\n";
  for (std::size_t n = 1; n <= nmax; ++n)
    sink << n << "," << (mg.min_per_n[n - 1] ? to_string(*mg.min_per_n[n - 1]) : "") << "\n";
  std::cout << "certified=" << (mg.certified ? "yes" : "no") << " fit_C=" << fmt(mg.fit_C)
            << " fit_lambda=" << fmt(mg.fit_lambda) << "\n";
  return 0;
}

int cmd_renorm(const std::string& mapfile, std::size_t qmax, const std::string& out) {
  auto f = load_map(mapfile);
  auto reports = is_renormalizable(f, qmax);
  Sink sink(out);
  for (const auto& rep : reports) {
    sink << "c=" << to_string(rep.c) << " depth=" << rep.depth
         << " solenoid_suspect=" << (rep.solenoid_suspect ? "yes" : "no") << "\n";
    for (std::size_t i = 0; i < rep.tower.levels.size(); ++i) {
      const auto& lv = rep.tower.levels[i];
      sink << "level=" << i + 1 << " q=" << lv.q << " J=[" << to_string(lv.J.lo) << ","
           << to_string(lv.J.hi) << "] boundary_touching=" << (lv.boundary_touching ? "yes" : "no")
           << "\n";
    }
  }
  std::size_t max_depth = 0;
  for (const auto& rep : reports) max_depth = std::max(max_depth, rep.depth);
  std::cout << "turning_points=" << reports.size() << " max_depth=" << max_depth << "\n";
  return 0;
}

int cmd_distort(const std::string& mapfile, std::size_t trials, std::uint64_t seed,
                const std::string& out) {
  std::optional<PiecewiseMap> fixed;
  if (!mapfile.empty()) fixed = load_map(mapfile);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(0, 60);
  Sink sink(out);
  sink << "map_id,J_lo,J_hi,n,empirical,S,bound_multiplicity,bound_sum,pass\n";
  std::size_t violations = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    PiecewiseMap f = fixed ? *fixed : random_affine_map(seed * 1000003 + i);
    Interval dom = f.domain();
    int a = coord(rng), b = coord(rng);
    if (a == b) b = (b + 1) % 61;
    Rational lo = dom.lo + dom.length() * Rational(std::min(a, b)) / 60;
    Rational hi = dom.lo + dom.length() * Rational(std::max(a, b)) / 60;
    std::size_t n = 1 + i % 8;
    auto rep = empirical_distortion(f, {lo, hi}, n);
    if (!rep.pass) ++violations;
    sink << i << "," << to_string(lo) << "," << to_string(hi) << "," << n << ","
         << to_string(rep.empirical) << "," << rep.S << "," << to_string(rep.mult_bound) << ","
         << (rep.sum_bound ? fmt(*rep.sum_bound) : "") << "," << (rep.pass ? "yes" : "no")
         << "\n";
  }
  std::cout << "trials=" << trials << " violations=" << violations << "\n";
  return 0;
}

int cmd_omega(const std::string& mapfile, std::size_t c_index, std::size_t burn,
              std::size_t steps, const std::string& eps_list, const std::string& out) {
  auto f = load_map(mapfile);
  if (c_index >= f.turning_points().size())
    throw InputError("seed-point index out of range (map has " +
                     std::to_string(f.turning_points().size()) + " turning points)");
  std::vector<double> eps;
  std::stringstream ss(eps_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    double e = std::strtod(tok.c_str(), &end);
    if (*end != '\0' || !(e > 0)) throw InputError("malformed eps: " + tok);
    eps.push_back(e);
  }
  if (eps.empty()) throw InputError("eps-list is empty");

  auto oa = omega_approx(f, f.turning_points()[c_index], burn, steps, eps);
  Sink sink(out);
  sink << "eps,cover_length,component_count\n";
  for (const auto& r : oa.rows)
    sink << fmt(r.eps) << "," << fmt(r.cover_length) << "," << r.components << "\n";
  std::cout << "seed=" << to_string(oa.seed) << " steps=" << steps
            << " final_cover=" << fmt(oa.rows.back().cover_length) << "\n";
  return 0;
}

int cmd_acip(const std::string& mapfile, std::size_t bins, std::size_t limit,
             const std::string& out) {
  auto f = load_map(mapfile);
  auto res = expansion_N(f, limit);
  const auto* cert = std::get_if<ExpansionCertificate>(&res);
  if (!cert) {
    const auto& r = std::get<ExpansionRefusal>(res);
    std::cout << "refused: no expansion certificate up to N=" << r.n_limit
              << " (min_at_limit=" << to_string(r.min_at_limit) << ")\n";
    return kExitRefusal;
  }
  auto d = ulam_acip(f, bins, *cert);
  Sink sink(out);
  sink << "bin_lo,bin_hi,mass,density\n";
  for (std::size_t i = 0; i < d.mass.size(); ++i)
    sink << to_string(d.edges[i]) << "," << to_string(d.edges[i + 1]) << "," << fmt(d.mass[i])
         << "," << fmt(d.density[i]) << "\n";
  std::cout << "bins=" << d.mass.size() << " certificate_N=" << cert->N
            << " invariance_residual=" << fmt(d.invariance_residual)
            << " converged=" << (d.converged ? "yes" : "no") << "\n";
  return 0;
}

int cmd_returns(const std::string& mapfile, const std::string& base, std::size_t horizon,
                std::size_t c_index, const std::string& out) {
  auto f = load_map(mapfile);
  if (c_index >= f.turning_points().size())
    throw InputError("turning-point index out of range");
  Rational x = parse_rat(base, "base point");
  auto s = symmetric_interval(f, f.turning_points()[c_index], x);
  auto rs = first_return(f, s, horizon);
  Sink sink(out);
  sink << "comp_lo,comp_hi,transfer_time\n";
  for (const auto& comp : rs.components)
    sink << to_string(comp.comp.lo) << "," << to_string(comp.comp.hi) << "," << comp.k << "\n";
  std::cout << "U=(" << to_string(s.U.lo) << "," << to_string(s.U.hi)
            << ") components=" << rs.components.size()
            << " unresolved_length=" << to_string(rs.unresolved.total_length()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analyses for continuous piecewise affine interval maps"};
  app.require_subcommand(1);

  std::string mapfile, out, avoid, eps_list = "1e-2,1e-3,1e-4", base;
  std::size_t period = 1, nmax = 8, limit = 12, qmax = 8, trials = 100;
  std::size_t c_index = 0, burn = 1000, steps = 100000, bins = 256, horizon = 8;
  std::uint64_t seed = 20240901;

  auto add_map = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("mapfile", mapfile, "map definition file");
    if (required) opt->required();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out, "write the CSV report to this file");
  };

  auto* orbits = app.add_subcommand("orbits", "periodic orbits of a given minimal period");
  add_map(orbits);
  orbits->add_option("--period", period, "minimal period")->required();
  add_out(orbits);

  auto* kn = app.add_subcommand("kn", "minimal |Df^n| over period-n orbits, n = 1..nmax");
  add_map(kn);
  kn->add_option("--nmax", nmax, "largest period");
  add_out(kn);

  auto* expand = app.add_subcommand("expand", "eventual-expansion certificate search");
  add_map(expand);
  expand->add_option("--limit", limit, "largest iterate to try");
  add_out(expand);

  auto* mane = app.add_subcommand("mane", "derivative growth on the avoidance set");
  add_map(mane);
  mane->add_option("--avoid", avoid, "open set U as lo,hi[;lo,hi...]");
  mane->add_option("--nmax", nmax, "growth horizon");
  add_out(mane);

  auto* renorm = app.add_subcommand("renorm", "restrictive-interval towers per turning point");
  add_map(renorm);
  renorm->add_option("--qmax", qmax, "largest return period");
  add_out(renorm);

  auto* distort = app.add_subcommand("distort", "randomized distortion-bound trials");
  add_map(distort, false);
  distort->add_option("--trials", trials, "trial count");
  distort->add_option("--seed", seed, "RNG seed");
  add_out(distort);

  auto* omega = app.add_subcommand("omega", "omega-limit eps-cover decay for a turning point");
  add_map(omega);
  omega->add_option("--seed-point", c_index, "turning point index");
  omega->add_option("--burn", burn, "burn-in iterations");
  omega->add_option("--steps", steps, "tail length");
  omega->add_option("--eps-list", eps_list, "comma-separated eps schedule");
  add_out(omega);

  auto* acip = app.add_subcommand("acip", "Ulam invariant-density estimate");
  add_map(acip);
  acip->add_option("--bins", bins, "bin count");
  acip->add_option("--limit", limit, "expansion-certificate search limit");
  add_out(acip);

  auto* returns = app.add_subcommand("returns", "first-return structure of a symmetric interval");
  add_map(returns);
  returns->add_option("--base", base, "base point x of U_x = (x, tau(x))")->required();
  returns->add_option("--horizon", horizon, "largest transfer time");
  returns->add_option("--turning", c_index, "turning point index");
  add_out(returns);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    threads_cap();  // validated; analyses are sequential (worker count 1)
    if (orbits->parsed()) return cmd_orbits(mapfile, period, out);
    if (kn->parsed()) return cmd_kn(mapfile, nmax, out);
    if (expand->parsed()) return cmd_expand(mapfile, limit, out);
    if (mane->parsed()) return cmd_mane(mapfile, avoid, nmax, out);
    if (renorm->parsed()) return cmd_renorm(mapfile, qmax, out);
    if (distort->parsed()) return cmd_distort(mapfile, trials, seed, out);
    if (omega->parsed()) return cmd_omega(mapfile, c_index, burn, steps, eps_list, out);
    if (acip->parsed()) return cmd_acip(mapfile, bins, limit, out);
    if (returns->parsed()) return cmd_returns(mapfile, base, horizon, c_index, out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const MapError& e) {
    std::cout << "refused: " << e.what() << "\n";
    return kExitRefusal;
  }
  return kExitInput;
}
