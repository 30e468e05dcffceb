// Command-line front end: algebra summaries, group operations, transform tables,
// slow-decrease checks, the deconvolution demo and the acceptance runner.
//
// Exit codes: 0 success, 1 validation failure (a check failed or a numerical
// error was raised), 2 usage error (bad flags, grids or config).

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hna/hna.hpp"

namespace {

using namespace hna;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string config;
  std::optional<int> k, b, sphere_nodes;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output, format;
};

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : RunConfig::load(f.config);
  if (f.k) c.k = *f.k;
  if (f.b) c.b = *f.b;
  if (f.seed) c.quadrature.seed = *f.seed;
  if (f.sphere_nodes) c.quadrature.sphere_nodes = *f.sphere_nodes;
  if (f.output) c.output_path = *f.output;
  if (f.format) c.format = *f.format;
  c.validate();
  return c;
}

HTypeAlgebra algebra(const RunConfig& c) {
  try {
    return build_htype(c.k, c.b);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
}

/// Output stream chosen by the config: a file or standard output.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw config_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<double> grid_or(const std::optional<std::string>& flag, const std::optional<GridSpec>& cfg, const std::string& fallback) {
  if (flag) return GridSpec::parse(*flag).values;
  if (cfg) return cfg->values;
  return GridSpec::parse(fallback).values;
}

void write_json(const RunConfig& c, const nlohmann::json& j) {
  Sink s(c.output_path);
  s.out() << j.dump(1) << '\n';
}

int cmd_htype(const RunConfig& c) {
  const auto alg = algebra(c);
  write_json(c, {{"algebra", alg.to_json()}, {"clifford_defect", alg.clifford_defect()}});
  return 0;
}

struct GroupArgs {
  std::string op = "distance";
  std::string p, q;
};

int cmd_group(const RunConfig& c, const GroupArgs& a) {
  const auto alg = algebra(c);
  auto point = [&](const std::string& text, const char* name) {
    if (text.empty()) throw config_error(std::string("group ") + a.op + ": --" + name + " is required");
    try {
      return point_from_json(alg, nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw config_error(std::string("--") + name + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("--") + name + ": " + e.what());
    }
  };
  nlohmann::json out{{"op", a.op}};
  const NAPoint p = point(a.p, "p");
  if (a.op == "multiply") out["result"] = point_to_json(multiply(alg, p, point(a.q, "q")));
  else if (a.op == "inverse") out["result"] = point_to_json(inverse(alg, p));
  else if (a.op == "distance") out["result"] = a.q.empty() ? distance_to_origin(alg, p) : distance(alg, p, point(a.q, "q"));
  else if (a.op == "inversion") out["result"] = point_to_json(geodesic_inversion(alg, p));
  else if (a.op == "cayley") {
    const auto bp = cayley(alg, p);
    std::vector<double> v(bp.Xp.data(), bp.Xp.data() + bp.Xp.size());
    v.insert(v.end(), bp.Zp.data(), bp.Zp.data() + bp.Zp.size());
    v.push_back(bp.lp);
    out["result"] = v;
  }
  write_json(c, out);
  return 0;
}

int cmd_spherical_table(const RunConfig& c, const std::optional<std::string>& lg, const std::optional<std::string>& rg) {
  const auto alg = algebra(c);
  const auto lams = grid_or(lg, c.lambda_grid, "0,1,5,10");
  const auto rs = grid_or(rg, c.r_grid, "0.5,1,2");
  Table t{{"lambda", "r", "re", "im", "delta_integral", "delta_koornwinder"}, {}};
  for (double l : lams)
    for (double r : rs) {
      if (r < 0.0) throw config_error("spherical table: radii must be nonnegative");
      const cplx v = spherical_phi(alg, l, r);
      const NAPoint y{Vec::Zero(alg.m()), Vec::Zero(alg.k()), r};
      const double di = std::abs(v - spherical_phi_integral(alg, l, y, c.quadrature));
      const double dk = r > 0.0 ? std::abs(v - koornwinder_phi(alg, l, r, c.quadrature)) : std::numeric_limits<double>::quiet_NaN();
      t.add({l, r, v.real(), v.imag(), di, dk});
    }
  Sink s(c.output_path);
  t.write(s.out(), c.format);
  return 0;
}

int cmd_spherical_fourier(const RunConfig& c, const std::optional<std::string>& lg, double R, const std::string& n0_text) {
  const auto alg = algebra(c);
  const auto lams = grid_or(lg, c.lambda_grid, "0:5:11");
  nlohmann::json n0s;
  try {
    n0s = nlohmann::json::parse(n0_text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("--n0: ") + e.what());
  }
  if (!n0s.is_array() || n0s.empty()) throw config_error("--n0: expected a nonempty array of [X..., Z...] arrays");
  const auto f = RadialFunction::bump(R);
  auto fx = [&](const NAPoint& x) { return f(distance_to_origin(alg, x)); };
  const std::vector<SpectralPoint> sp(lams.begin(), lams.end());
  const auto rule = BallRule::for_spec(alg.dims(), c.quadrature);
  Table t{{"lambda", "n0", "re", "im"}, {}};
  for (std::size_t i = 0; i < n0s.size(); ++i) {
    const auto& e = n0s[i];
    if (!e.is_array() || static_cast<int>(e.size()) != alg.m() + alg.k())
      throw config_error("--n0: each entry must have m+k numbers");
    Vec X0(alg.m()), Z0(alg.k());
    for (int j = 0; j < alg.m(); ++j) X0(j) = e[static_cast<std::size_t>(j)].get<double>();
    for (int j = 0; j < alg.k(); ++j) Z0(j) = e[static_cast<std::size_t>(alg.m() + j)].get<double>();
    const auto vals = helgason_fourier(alg, fx, R, sp, X0, Z0, rule);
    for (std::size_t j = 0; j < lams.size(); ++j) t.add({lams[j], static_cast<double>(i), vals[j].real(), vals[j].imag()});
  }
  Sink s(c.output_path);
  t.write(s.out(), c.format);
  return 0;
}

int cmd_abel_slice(const RunConfig& c, const std::optional<std::string>& lg, double R) {
  const auto alg = algebra(c);
  const auto lams = grid_or(lg, c.lambda_grid, "0:20:41");
  const auto f = RadialFunction::bump(R);
  const std::vector<cplx> lc(lams.begin(), lams.end());
  const auto ft = abel_fourier(alg.dims(), f, lc, c.quadrature);
  const auto sph = spherical_transform_radial(alg.dims(), f, lc, c.quadrature);
  Table t{{"lambda", "ft_abel", "spherical_ft", "delta"}, {}};
  for (std::size_t i = 0; i < lams.size(); ++i) t.add({lams[i], ft[i].real(), sph[i].real(), std::abs(ft[i] - sph[i])});
  Sink s(c.output_path);
  t.write(s.out(), c.format);
  return 0;
}

struct AsymptoticsArgs {
  int nu = 2;
  double t = 1.0, lambda_min = 50.0, lambda_max = 400.0;
  int count = 3501;
};

int cmd_meanvalue_asymptotics(const RunConfig& c, const AsymptoticsArgs& a) {
  if (!(a.t > 0.0) || !(a.lambda_min < a.lambda_max) || a.count < 2) throw config_error("meanvalue asymptotics: bad grid");
  const auto grid = linear_grid(a.lambda_min, a.lambda_max, a.count);
  const auto rep = oscillatory_report(a.nu, a.t, grid, c.quadrature);
  Table t{{"lambda", "quadrature", "leading", "scaled_remainder"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.add({grid[i], rep.quadrature[i], rep.asymptotic[i], rep.remainder[i] * std::pow(grid[i], a.nu + 1.5)});
  Sink s(c.output_path);
  t.write(s.out(), c.format);
  return 0;
}

struct SlowArgs {
  std::string target = "phi";
  double t = 1.0;
  int m = 2;
  std::optional<double> xi_max;
  std::string witness, file;
};

/// Even measure on the line given as "s,weight" rows; F(lambda) = sum weight cos(lambda s).
EntireFunction cosine_sum_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open target file '" + path + "'");
  auto nodes = std::make_shared<std::vector<std::pair<double, double>>>();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("s,", 0) == 0) continue;
    const auto g = GridSpec::parse(line).values;
    if (g.size() != 2) throw config_error("target file: expected 's,weight' rows");
    nodes->emplace_back(g[0], g[1]);
  }
  if (nodes->empty()) throw config_error("target file: no samples");
  return [nodes](cplx l) {
    cplx acc = 0.0;
    for (const auto& [s, w] : *nodes) acc += w * std::cos(l * s);
    return acc;
  };
}

int cmd_slowdecrease_check(const RunConfig& c, const SlowArgs& a) {
  const double xi_max = a.xi_max.value_or(c.xi_max);
  std::optional<SlowDecreaseWitness> w;
  if (!a.witness.empty()) {
    const auto v = GridSpec::parse(a.witness).values;
    if (v.size() != 4) throw config_error("--witness expects A,B,C,D");
    w = SlowDecreaseWitness{};
    w->A = v[0];
    w->B = v[1];
    w->C = v[2];
    w->D = v[3];
    w->xi_max = xi_max;
    w->xi_points = c.xi_points;
    try {
      w->validate();
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
  }
  const WitnessSearchGrid grid;
  const double amax = w ? w->A : *std::max_element(grid.A.begin(), grid.A.end());
  const double lambda_max = xi_max + amax * std::log(2.0 + xi_max) + 1.0;
  EntireFunction F;
  if (a.target == "phi") F = spherical_phi_function(algebra(c).dims(), a.t, lambda_max);
  else if (a.target == "file") {
    if (a.file.empty()) throw config_error("slowdecrease check: --target file needs --file");
    F = cosine_sum_from_file(a.file);
  } else throw config_error("slowdecrease check: unknown target '" + a.target + "'");

  nlohmann::json out{{"target", a.target}, {"xi_range", {0.0, xi_max}}};
  bool ok = false;
  if (w) {
    const auto s = check_slow_decrease(F, *w);
    out.update(nlohmann::json(s));
    out["witness"] = *w;
    ok = s.pass;
  } else {
    const auto found = find_witness(F, 0.0, xi_max, grid, c.xi_points);
    ok = found.has_value();
    if (found) {
      const auto s = check_slow_decrease(F, *found);
      out.update(nlohmann::json(s));
      out["witness"] = *found;
    } else {
      out["status"] = "fail";
      out["witness"] = nullptr;
    }
  }
  write_json(c, out);
  return ok ? 0 : kExitFail;
}

int cmd_slowdecrease_report(const RunConfig& c, const SlowArgs& a) {
  const auto rep = phi_k_slow_decrease_report(Dimensions{a.m, c.k}, a.t, a.xi_max.value_or(c.xi_max), c.xi_points);
  write_json(c, rep);
  return rep.pass ? 0 : kExitFail;
}

struct DeconvArgs {
  double t = 1.0, R = 1.0;
  std::string summary;
};

int cmd_deconvolve_demo(const RunConfig& c, const DeconvArgs& a) {
  if (!(a.t > 0.0) || !(a.R > 0.0)) throw config_error("deconvolve demo: t and R must be positive");
  const auto alg = algebra(c);
  const auto sphere = SphereRule::for_spec(alg.n(), c.quadrature);
  const auto f0 = RadialFunction::bump(a.R);
  const auto g = mean_value_target(alg, f0, a.t, sphere);
  const auto res = solve(alg, DeconvolutionProblem::make(alg.dims(), g, a.t), sphere, c.quadrature);
  Table t{{"r", "f_true", "f_rec", "residual"}, {}};
  for (std::size_t i = 0; i < res.r_grid.size(); ++i) t.add({res.r_grid[i], f0(res.r_grid[i]), res.f_rec[i], res.residual[i]});
  Sink s(c.output_path);
  t.write(s.out(), c.format);
  nlohmann::json summary = res;
  summary["t"] = a.t;
  summary["R"] = a.R;
  summary["status"] = res.residual_rel < 1e-2 ? "pass" : "fail";
  if (a.summary.empty()) std::cerr << summary.dump() << '\n';
  else {
    std::ofstream js(a.summary);
    if (!js) throw config_error("cannot open summary file '" + a.summary + "'");
    js << summary.dump(1) << '\n';
  }
  return res.residual_rel < 1e-2 ? 0 : kExitFail;
}

int cmd_verify_all(const RunConfig& c, int only) {
  AcceptanceConfig cfg;
  cfg.k = c.k;
  cfg.b = c.b;
  cfg.spec = c.quadrature;
  algebra(c);
  std::vector<CriterionResult> results;
  if (only > 0) results.push_back(run_criterion(only, cfg));
  else results = run_acceptance(cfg);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.pass;
    std::cerr << format_line(r) << '\n';
  }
  write_json(c, {{"status", ok ? "pass" : "fail"}, {"criteria", results}});
  return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic analysis on harmonic NA groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config, "JSON config file; flags override it")->check(CLI::ExistingFile);
  app.add_option("--k", flags.k, "Center dimension k")->check(CLI::IsMember({1, 2, 3, 4, 5, 6, 7, 8}));
  app.add_option("--b", flags.b, "Multiplicity b (m = b times the minimal dimension)")->check(CLI::PositiveNumber);
  app.add_option("--seed", flags.seed, "Seed for random sphere rules and samples");
  app.add_option("--sphere-nodes", flags.sphere_nodes, "Nodes of sphere rules")->check(CLI::PositiveNumber);
  app.add_option("-o,--output", flags.output, "Output file (default: standard output)");
  app.add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::function<int(const RunConfig&)> action;

  auto* htype = app.add_subcommand("htype", "Algebra summary as JSON");
  htype->callback([&] { action = cmd_htype; });

  GroupArgs ga;
  auto* group = app.add_subcommand("group", "Group operations on points [X..., Z..., log a]");
  group->add_option("--op", ga.op, "multiply, inverse, distance, inversion or cayley")
      ->check(CLI::IsMember({"multiply", "inverse", "distance", "inversion", "cayley"}));
  group->add_option("--p", ga.p, "First point as a JSON array")->required();
  group->add_option("--q", ga.q, "Second point as a JSON array");
  group->callback([&] { action = [&](const RunConfig& c) { return cmd_group(c, ga); }; });

  std::optional<std::string> lambda_grid, r_grid;
  double bump_R = 1.0;
  std::string n0 = "[[0,0,0]]";
  auto* spherical = app.add_subcommand("spherical", "Spherical functions and transforms");
  spherical->require_subcommand(1);
  auto* table = spherical->add_subcommand("table", "phi_lambda(r) with integral and Koornwinder deltas (CSV)");
  table->add_option("--lambda-grid", lambda_grid, "List a,b,c or min:max:count");
  table->add_option("--r-grid", r_grid, "List a,b,c or min:max:count");
  table->callback([&] { action = [&](const RunConfig& c) { return cmd_spherical_table(c, lambda_grid, r_grid); }; });
  auto* fourier = spherical->add_subcommand("fourier", "Helgason-Fourier transform of a bump (CSV lambda,n0,re,im)");
  fourier->add_option("--lambda-grid", lambda_grid, "List a,b,c or min:max:count");
  fourier->add_option("--bump", bump_R, "Support radius of the bump")->check(CLI::PositiveNumber);
  fourier->add_option("--n0", n0, "JSON array of boundary points [X..., Z...]");
  fourier->callback([&] { action = [&](const RunConfig& c) { return cmd_spherical_fourier(c, lambda_grid, bump_R, n0); }; });

  auto* abel = app.add_subcommand("abel", "Abel transform");
  abel->require_subcommand(1);
  auto* slice = abel->add_subcommand("slice", "Fourier transform of the Abel transform vs spherical transform (CSV)");
  slice->add_option("--bump", bump_R, "Support radius of the bump")->check(CLI::PositiveNumber);
  slice->add_option("--lambda-grid", lambda_grid, "List a,b,c or min:max:count");
  slice->callback([&] { action = [&](const RunConfig& c) { return cmd_abel_slice(c, lambda_grid, bump_R); }; });

  AsymptoticsArgs aa;
  auto* meanvalue = app.add_subcommand("meanvalue", "Mean-value operator layer");
  meanvalue->require_subcommand(1);
  auto* asym = meanvalue->add_subcommand("asymptotics", "I~_nu quadrature, leading term and scaled remainder (CSV)");
  asym->add_option("--nu", aa.nu, "Order nu")->check(CLI::NonNegativeNumber);
  asym->add_option("--t", aa.t, "Radius t")->check(CLI::PositiveNumber);
  asym->add_option("--lambda-min", aa.lambda_min, "Smallest lambda");
  asym->add_option("--lambda-max", aa.lambda_max, "Largest lambda");
  asym->add_option("--count", aa.count, "Number of lambda samples")->check(CLI::Range(2, 1000000));
  asym->callback([&] { action = [&](const RunConfig& c) { return cmd_meanvalue_asymptotics(c, aa); }; });

  SlowArgs sa;
  auto* slow = app.add_subcommand("slowdecrease", "Slow-decrease checks");
  slow->require_subcommand(1);
  auto* check = slow->add_subcommand("check", "Check a witness, or search one when --witness is omitted (JSON)");
  check->add_option("--target", sa.target, "phi (phi_lambda(t) on the algebra) or file (s,weight rows)")
      ->check(CLI::IsMember({"phi", "file"}));
  check->add_option("--t", sa.t, "Radius t")->check(CLI::PositiveNumber);
  check->add_option("--xi-max", sa.xi_max, "Largest xi")->check(CLI::PositiveNumber);
  check->add_option("--witness", sa.witness, "A,B,C,D");
  check->add_option("--file", sa.file, "Target file for --target file");
  check->callback([&] { action = [&](const RunConfig& c) { return cmd_slowdecrease_check(c, sa); }; });
  auto* report = slow->add_subcommand("report", "Witness argument for Phi_k, k even >= 4 (JSON)");
  report->add_option("--t", sa.t, "Radius t")->check(CLI::PositiveNumber);
  report->add_option("--m", sa.m, "Dimension m of the Jacobi parameters")->check(CLI::PositiveNumber);
  report->add_option("--xi-max", sa.xi_max, "Largest xi")->check(CLI::PositiveNumber);
  report->callback([&] { action = [&](const RunConfig& c) { return cmd_slowdecrease_report(c, sa); }; });

  DeconvArgs da;
  auto* deconv = app.add_subcommand("deconvolve", "Spectral deconvolution of M_t");
  deconv->require_subcommand(1);
  auto* demo = deconv->add_subcommand("demo", "Recover a bump from g = M_t f0 (CSV, JSON summary)");
  demo->add_option("--t", da.t, "Radius t")->check(CLI::PositiveNumber);
  demo->add_option("--R", da.R, "Support radius of f0")->check(CLI::PositiveNumber);
  demo->add_option("--summary", da.summary, "JSON summary file (default: standard error)");
  demo->callback([&] { action = [&](const RunConfig& c) { return cmd_deconvolve_demo(c, da); }; });

  int only = 0;
  auto* verify = app.add_subcommand("verify-all", "Run the acceptance criteria (JSON)");
  verify->add_option("--only", only, "Single criterion 1-12")->check(CLI::Range(1, kAcceptanceCriteria));
  verify->callback([&] { action = [&](const RunConfig& c) { return cmd_verify_all(c, only); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    const RunConfig cfg = resolve(flags);
    return action(cfg);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
