#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaprel/errors.hpp"
#include "chaprel/eigen.hpp"
#include "chaprel/fvm.hpp"
#include "chaprel/riemann.hpp"
#include "chaprel/rng.hpp"
#include "chaprel/state.hpp"
#include "chaprel/verify.hpp"
#include "chaprel/wavecurves.hpp"
#include "chaprel/version.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInadmissible = 3;
constexpr int kExitInternal = 4;
constexpr int kExitTolerance = 5;

class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char ch : bytes) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Config {
  chaprel::ModelParams params;
  chaprel::PrimitiveState left;
  chaprel::PrimitiveState right;
  json raw;
  std::string path;
  std::uint64_t hash = 0;
};

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw config_error("config: missing or non-numeric field '" + key + "'");
  const double v = j[key].get<double>();
  if (!std::isfinite(v))
    throw config_error("config: field '" + key + "' is not finite");
  return v;
}

chaprel::PrimitiveState parse_state(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_object())
    throw config_error("config: missing state block '" + key + "'");
  const json& s = j[key];
  return {require_number(s, "n"), require_number(s, "rho"), require_number(s, "v")};
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  Config cfg;
  cfg.path = path;
  cfg.hash = fnv1a(bytes);
  try {
    cfg.raw = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: parse error: ") + e.what());
  }
  cfg.params.c = cfg.raw.contains("c") ? require_number(cfg.raw, "c") : 1.0;
  if (!cfg.params.valid()) throw config_error("config: c must be positive and finite");
  cfg.left = parse_state(cfg.raw, "left");
  cfg.right = parse_state(cfg.raw, "right");
  return cfg;
}

void require_admissible(const Config& cfg) {
  const auto al = chaprel::validate_physical(cfg.left, cfg.params);
  const auto ar = chaprel::validate_physical(cfg.right, cfg.params);
  if (!al.ok()) throw chaprel::domain_error("left state " + al.describe());
  if (!ar.ok()) throw chaprel::domain_error("right state " + ar.describe());
}

// Output sink: file when --out given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw config_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

void header(std::ostream& os, const Config& cfg, const std::string& command) {
  os << "# chaprel " << command << " v" << chaprel::kVersion << "\n";
  os << "# config=" << cfg.path << " hash=" << hex16(cfg.hash) << "\n";
}

const char* tag_name(chaprel::RegionTag tag) {
  switch (tag) {
    case chaprel::RegionTag::Left: return "left";
    case chaprel::RegionTag::Star1: return "star1";
    case chaprel::RegionTag::Star2: return "star2";
    case chaprel::RegionTag::Right: return "right";
    case chaprel::RegionTag::DeltaCarrier: return "delta_carrier";
  }
  return "?";
}

// ---------------------------------------------------------------------------

int cmd_solve(const Config& cfg, const std::string& out_path) {
  require_admissible(cfg);
  const chaprel::RiemannData data{cfg.left, cfg.right, cfg.params};
  const chaprel::RiemannSolution sol = chaprel::solve(data);

  Sink sink(out_path);
  std::ostream& os = sink.out();
  header(os, cfg, "solve");
  os << "key,value\n";
  os << "c," << fmt17(cfg.params.c) << "\n";
  if (sol.regime() == chaprel::Regime::Classical) {
    const auto& fan = sol.fan();
    os << "classification,classical\n";
    os << "a," << fmt17(fan.a()) << "\n";
    os << "v_star," << fmt17(fan.v_star()) << "\n";
    os << "b," << fmt17(fan.b()) << "\n";
    os << "rho_star," << fmt17(fan.rho_star()) << "\n";
    os << "n_star1," << fmt17(fan.states[1].n) << "\n";
    os << "n_star2," << fmt17(fan.states[2].n) << "\n";
  } else {
    const auto& ds = sol.delta();
    os << "classification,delta\n";
    os << "sigma," << fmt17(ds.sigma) << "\n";
    os << "h_slope," << fmt17(ds.h_slope) << "\n";
    os << "w_slope," << fmt17(ds.w_slope) << "\n";
    os << "E," << fmt17(ds.E) << "\n";
    os << "F," << fmt17(ds.F) << "\n";
    os << "G," << fmt17(ds.G) << "\n";
  }
  return kExitOk;
}

int cmd_sample(const Config& cfg, double t, double xmin, double xmax,
               int npoints, const std::string& out_path) {
  require_admissible(cfg);
  if (!(t > 0.0)) throw config_error("sample: t must be positive");
  if (npoints < 2) throw config_error("sample: npoints must be at least 2");
  if (!(xmin < xmax)) throw config_error("sample: xmin must be below xmax");

  const chaprel::RiemannSolution sol =
      chaprel::solve({cfg.left, cfg.right, cfg.params});

  std::vector<double> xis;
  xis.reserve(npoints + 1);
  for (int i = 0; i < npoints; ++i)
    xis.push_back((xmin + (xmax - xmin) * i / (npoints - 1)) / t);
  if (sol.regime() == chaprel::Regime::Delta) {
    const double s = sol.delta().sigma;
    if (s * t >= xmin && s * t <= xmax) {
      bool present = false;
      for (const double xi : xis) present = present || xi == s;
      if (!present) xis.push_back(s);
    }
  }
  std::sort(xis.begin(), xis.end());

  Sink sink(out_path);
  std::ostream& os = sink.out();
  header(os, cfg, "sample");
  os << "# t=" << fmt17(t) << "\n";
  os << "xi,region,n,rho,v,p,v_delta,h_slope,w_slope\n";
  for (const double xi : xis) {
    const chaprel::SamplePoint p = chaprel::sample(sol, xi);
    os << fmt17(xi) << "," << tag_name(p.tag) << ",";
    if (p.tag == chaprel::RegionTag::DeltaCarrier) {
      os << ",,,," << fmt17(p.v_delta) << "," << fmt17(p.h_slope) << ","
         << fmt17(p.w_slope) << "\n";
    } else {
      os << fmt17(p.state.n) << "," << fmt17(p.state.rho) << ","
         << fmt17(p.state.v) << "," << fmt17(chaprel::pressure(p.state.rho))
         << ",,,\n";
    }
  }
  return kExitOk;
}

// Scale of the RH equation k for a discontinuity candidate, used to turn
// the dimensional residual into a relative one.
double rh_scale(const chaprel::PrimitiveState& l, const chaprel::PrimitiveState& r,
                double sigma, int k, const chaprel::ModelParams& params) {
  const auto ul = chaprel::as_array(chaprel::to_conserved(l, params));
  const auto ur = chaprel::as_array(chaprel::to_conserved(r, params));
  const auto fl = chaprel::flux_of(l, params);
  const auto fr = chaprel::flux_of(r, params);
  return std::max({1.0, std::fabs(sigma * ul[k]), std::fabs(sigma * ur[k]),
                   std::fabs(fl[k]), std::fabs(fr[k])});
}

struct Tolerances {
  double rh = 1e-12;
  double grh = 1e-12;
  double weak = 1e-9;
};

struct VerifyOptions {
  Tolerances tol;
  std::uint64_t seed = 42;
  double perturb_sigma = 0.0; // debug knob; breaks the record on purpose
};

std::vector<chaprel::BumpTestFunction> place_bumps(const chaprel::RiemannSolution& sol,
                                                   int count, std::uint64_t seed) {
  // Centers scatter around the wave fan at t ~ 1; radii keep the support
  // strictly inside t > 0.
  double lo = 0.0, hi = 0.0;
  if (sol.regime() == chaprel::Regime::Classical) {
    lo = sol.fan().a();
    hi = sol.fan().b();
  } else {
    lo = hi = sol.delta().sigma;
  }
  chaprel::SplitMix64 rng(seed);
  std::vector<chaprel::BumpTestFunction> bumps;
  bumps.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double t0 = rng.uniform(0.7, 1.1);
    const double Rt = rng.uniform(0.25, 0.5);
    const double xi0 = rng.uniform(lo - 0.3, hi + 0.3);
    const double x0 = xi0 * t0;
    const double Rx = rng.uniform(0.3, 0.6);
    bumps.emplace_back(t0, x0, Rt, Rx);
  }
  return bumps;
}

int cmd_verify(const Config& cfg, const VerifyOptions& opt,
               const std::string& out_path) {
  require_admissible(cfg);
  chaprel::RiemannSolution sol = chaprel::solve({cfg.left, cfg.right, cfg.params});

  if (opt.perturb_sigma != 0.0) {
    if (sol.regime() == chaprel::Regime::Delta) {
      std::get<chaprel::DeltaShock>(sol.wave).sigma += opt.perturb_sigma;
    } else {
      auto& fan = std::get<chaprel::ClassicalFan>(sol.wave);
      fan.states[1].v += opt.perturb_sigma;
      fan.states[2].v += opt.perturb_sigma;
    }
  }

  int bumps = 5;
  int panels = 64;
  if (cfg.raw.contains("verify")) {
    const json& v = cfg.raw["verify"];
    if (v.contains("bumps")) bumps = v["bumps"].get<int>();
    if (v.contains("panels")) panels = v["panels"].get<int>();
  }

  Sink sink(out_path);
  std::ostream& os = sink.out();
  header(os, cfg, "verify");
  os << "# rh residuals are relative to each equation's term magnitude\n";
  os << "check,quantity,value,tolerance,pass\n";

  bool all_pass = true;
  const auto emit = [&](const std::string& check, const std::string& what,
                        double value, double tol) {
    const bool pass = value <= tol;
    all_pass = all_pass && pass;
    os << check << "," << what << "," << fmt17(value) << "," << fmt17(tol)
       << "," << (pass ? 1 : 0) << "\n";
  };

  if (sol.regime() == chaprel::Regime::Classical) {
    const auto& fan = sol.fan();
    const char* names[3] = {"J1", "J2", "J3"};
    for (int w = 0; w < 3; ++w) {
      const auto& l = fan.states[w];
      const auto& r = fan.states[w + 1];
      const double s = fan.speeds[w];
      const auto res = chaprel::rh_residual(l, r, s, cfg.params);
      const double rr[3] = {res.res1, res.res2, res.res3};
      double worst = 0.0;
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::fabs(rr[k]) / rh_scale(l, r, s, k, cfg.params));
      emit("rh", names[w], worst, opt.tol.rh);
    }
  } else {
    const auto res = chaprel::grh_residual(sol.delta(), sol.data);
    for (int k = 0; k < 4; ++k)
      emit("grh", "line" + std::to_string(k + 1), res.res[k], opt.tol.grh);
  }

  chaprel::QuadratureSpec quad;
  quad.panels = panels;
  const auto bump_set = place_bumps(sol, bumps, opt.seed);
  for (std::size_t i = 0; i < bump_set.size(); ++i) {
    const auto rep = chaprel::weak_residual(sol, bump_set[i], quad);
    char name[32];
    std::snprintf(name, sizeof name, "bump%02zu", i);
    for (int k = 0; k < 3; ++k)
      emit("weak", std::string(name) + ".eq" + std::to_string(k + 1),
           rep.residual[k], opt.tol.weak);
  }

  return all_pass ? kExitOk : kExitTolerance;
}

int cmd_limit_study(const Config& cfg, const std::string& out_path) {
  require_admissible(cfg);
  std::vector<double> eps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  if (cfg.raw.contains("verify") && cfg.raw["verify"].contains("epsilons"))
    eps = cfg.raw["verify"]["epsilons"].get<std::vector<double>>();

  const auto result = chaprel::limit_study(cfg.left, cfg.params, eps);

  Sink sink(out_path);
  std::ostream& os = sink.out();
  header(os, cfg, "limit-study");
  os << "eps,int_rho,int_n,int_v,target_rho,target_n,target_v,err_rho,err_n,"
        "err_v\n";
  for (const auto& row : result.rows) {
    os << fmt17(row.eps) << "," << fmt17(row.integral_rho) << ","
       << fmt17(row.integral_n) << "," << fmt17(row.integral_v) << ","
       << fmt17(result.target_rho) << "," << fmt17(result.target_n) << ","
       << fmt17(result.target_v) << "," << fmt17(row.err_rho) << ","
       << fmt17(row.err_n) << "," << fmt17(row.err_v) << "\n";
  }
  os << "# extrapolated rho=" << fmt17(result.extrap_rho)
     << " n=" << fmt17(result.extrap_n) << " v=" << fmt17(result.extrap_v)
     << "\n";
  return kExitOk;
}

int cmd_simulate(const Config& cfg, const std::string& flux_override,
                 const std::string& out_prefix) {
  require_admissible(cfg);
  if (!cfg.raw.contains("sim") || !cfg.raw["sim"].is_object())
    throw config_error("simulate: config needs a 'sim' block");
  const json& sj = cfg.raw["sim"];

  chaprel::Grid1D grid;
  grid.xmin = require_number(sj, "xmin");
  grid.xmax = require_number(sj, "xmax");
  grid.ncells = static_cast<int>(require_number(sj, "ncells"));
  if (!grid.valid()) throw config_error("simulate: invalid grid block");

  chaprel::SimConfig sim;
  sim.t_end = require_number(sj, "t_end");
  if (sj.contains("cfl")) sim.cfl = require_number(sj, "cfl");
  if (sj.contains("snapshots"))
    sim.snapshot_times = sj["snapshots"].get<std::vector<double>>();
  if (sj.contains("spike_window_cells"))
    sim.spike_window_cells = sj["spike_window_cells"].get<int>();

  std::string flux = sj.contains("flux") ? sj["flux"].get<std::string>() : "lxf";
  if (!flux_override.empty()) flux = flux_override;
  if (flux == "godunov")
    sim.flux = chaprel::FluxScheme::Godunov;
  else if (flux == "lxf")
    sim.flux = chaprel::FluxScheme::LaxFriedrichs;
  else
    throw config_error("simulate: flux must be 'godunov' or 'lxf'");

  const auto initial = [&](double x) { return x < 0.0 ? cfg.left : cfg.right; };
  const auto result = chaprel::run(initial, grid, sim, cfg.params);

  const chaprel::RiemannData data{cfg.left, cfg.right, cfg.params};
  const bool classical = chaprel::classify(data) == chaprel::Regime::Classical;
  std::optional<chaprel::RiemannSolution> exact;
  if (classical) exact = chaprel::solve(data);

  const std::string prefix = out_prefix.empty() ? "sim" : out_prefix;

  // Per-snapshot tables.
  for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
    char path[512];
    std::snprintf(path, sizeof path, "%s_snap_%03zu.csv", prefix.c_str(), s);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw config_error(std::string("cannot open '") + path + "'");
    const auto& snap = result.snapshots[s];
    header(os, cfg, "simulate");
    os << "# t=" << fmt17(snap.t) << "\n";
    os << "x,D,M,En,n,rho,v\n";
    for (int i = 0; i < grid.ncells; ++i) {
      os << fmt17(grid.center(i)) << "," << fmt17(snap.cells[i].D) << ","
         << fmt17(snap.cells[i].M) << "," << fmt17(snap.cells[i].En) << ",";
      if (snap.recovered[i].ok) {
        os << fmt17(snap.recovered[i].prim.n) << ","
           << fmt17(snap.recovered[i].prim.rho) << ","
           << fmt17(snap.recovered[i].prim.v) << "\n";
      } else {
        os << ",,\n";
      }
    }
  }

  // Diagnostics series.
  {
    const std::string path = prefix + "_diag.csv";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw config_error("cannot open '" + path + "'");
    header(os, cfg, "simulate");
    os << "# scheme=" << (sim.flux == chaprel::FluxScheme::Godunov ? "godunov" : "lxf")
       << " ncells=" << grid.ncells << " steps=" << result.total_steps << "\n";
    os << "t,spike_position,window_mass_En,window_mass_D,recovery_failures";
    if (classical)
      os << ",l1_rho_error";
    else
      os << ",spike_speed_est";
    os << "\n";
    const auto& d = result.diagnostics;
    for (std::size_t s = 0; s < d.times.size(); ++s) {
      os << fmt17(d.times[s]) << "," << fmt17(d.spike_position[s]) << ","
         << fmt17(d.window_mass_En[s]) << "," << fmt17(d.window_mass_D[s])
         << "," << d.recovery_failures[s];
      if (classical) {
        double l1 = 0.0;
        const auto& snap = result.snapshots[s];
        for (int i = 0; i < grid.ncells; ++i) {
          const auto p = chaprel::sample(*exact, grid.center(i) / snap.t);
          if (snap.recovered[i].ok)
            l1 += std::fabs(snap.recovered[i].prim.rho - p.state.rho) * grid.dx();
        }
        os << "," << fmt17(l1);
      } else {
        os << "," << fmt17(d.times[s] > 0.0 ? d.spike_position[s] / d.times[s] : 0.0);
      }
      os << "\n";
    }
  }
  return kExitOk;
}

int cmd_eigen(const std::optional<Config>& cfg, std::optional<double> n,
              std::optional<double> rho, std::optional<double> v,
              std::optional<double> c, const std::string& out_path) {
  chaprel::ModelParams params;
  chaprel::PrimitiveState s{1.0, 2.0, 0.0};
  if (cfg) {
    params = cfg->params;
    s = cfg->left;
  }
  if (c) params.c = *c;
  if (n) s.n = *n;
  if (rho) s.rho = *rho;
  if (v) s.v = *v;

  const auto sys = chaprel::eigensystem(s, params);

  Sink sink(out_path);
  std::ostream& os = sink.out();
  os << "# chaprel eigen v" << chaprel::kVersion << "\n";
  os << "# state n=" << fmt17(s.n) << " rho=" << fmt17(s.rho)
     << " v=" << fmt17(s.v) << " c=" << fmt17(params.c) << "\n";
  os << "key,value\n";
  for (int i = 0; i < 3; ++i)
    os << "lambda" << i + 1 << "," << fmt17(sys.lambda[i]) << "\n";
  const char* comp[3] = {"n", "rho", "v"};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      os << "r" << i + 1 << "_" << comp[k] << "," << fmt17(sys.r[i][k]) << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Riemann solver for the relativistic Chaplygin-gas Euler "
               "equations, with verification and finite-volume cross-checks"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  double t = 1.0, xmin = -1.0, xmax = 1.0;
  int npoints = 201;
  std::vector<std::string> tol_overrides;
  std::string flux_override;
  std::uint64_t seed = 42;
  double perturb_sigma = 0.0;
  std::optional<double> en, erho, ev, ec;

  auto* solve = app.add_subcommand("solve", "Solve the Riemann problem and print the record");
  solve->add_option("--config", config_path, "Problem config (JSON)")->required();
  solve->add_option("--out", out_path, "Output file (default stdout)");

  auto* sample = app.add_subcommand("sample", "Sample the exact solution on an x-grid at time t");
  sample->add_option("--config", config_path)->required();
  sample->add_option("--out", out_path);
  sample->add_option("--t", t, "Sampling time (> 0)");
  sample->add_option("--xmin", xmin);
  sample->add_option("--xmax", xmax);
  sample->add_option("--npoints", npoints);

  auto* verify = app.add_subcommand("verify", "Residual checks of the solved problem");
  verify->add_option("--config", config_path)->required();
  verify->add_option("--out", out_path);
  verify->add_option("--tolerance", tol_overrides,
                     "Override tolerances, e.g. --tolerance rh=1e-10 (names: rh, grh, weak)");
  verify->add_option("--seed", seed, "Seed for test-function placement");
  verify->add_option("--debug-perturb-sigma", perturb_sigma,
                     "Corrupt the solution record before verifying (debug)");

  auto* limit = app.add_subcommand("limit-study", "Singular-limit integrals vs epsilon");
  limit->add_option("--config", config_path)->required();
  limit->add_option("--out", out_path);

  auto* simulate = app.add_subcommand("simulate", "First-order finite-volume run");
  simulate->add_option("--config", config_path)->required();
  simulate->add_option("--out", out_path, "Output file prefix (default 'sim')");
  simulate->add_option("--flux", flux_override, "Override the scheme: godunov | lxf");

  auto* eigen = app.add_subcommand("eigen", "Dump eigenvalues/eigenvectors at a state");
  eigen->add_option("--config", config_path, "Use the config's left state");
  eigen->add_option("--out", out_path);
  eigen->add_option("--n", en);
  eigen->add_option("--rho", erho);
  eigen->add_option("--v", ev);
  eigen->add_option("--c", ec);

  CLI11_PARSE(app, argc, argv);

  try {
    if (eigen->parsed()) {
      std::optional<Config> cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      return cmd_eigen(cfg, en, erho, ev, ec, out_path);
    }

    const Config cfg = load_config(config_path);
    if (solve->parsed()) return cmd_solve(cfg, out_path);
    if (sample->parsed()) return cmd_sample(cfg, t, xmin, xmax, npoints, out_path);
    if (verify->parsed()) {
      VerifyOptions opt;
      opt.seed = seed;
      opt.perturb_sigma = perturb_sigma;
      for (const auto& ov : tol_overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
          throw config_error("--tolerance expects name=value");
        const std::string name = ov.substr(0, eq);
        const double value = std::stod(ov.substr(eq + 1));
        if (name == "rh")
          opt.tol.rh = value;
        else if (name == "grh")
          opt.tol.grh = value;
        else if (name == "weak")
          opt.tol.weak = value;
        else
          throw config_error("--tolerance name must be rh, grh or weak");
      }
      return cmd_verify(cfg, opt, out_path);
    }
    if (limit->parsed()) return cmd_limit_study(cfg, out_path);
    if (simulate->parsed()) return cmd_simulate(cfg, flux_override, out_path);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const chaprel::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitConfig;
}
