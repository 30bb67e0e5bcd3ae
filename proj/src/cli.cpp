#include "tjd/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tjd/centroids.hpp"
#include "tjd/clustering.hpp"
#include "tjd/divergences.hpp"
#include "tjd/geometry.hpp"
#include "tjd/io.hpp"
#include "tjd/rng.hpp"
#include "tjd/robustness.hpp"

namespace tjd {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json nums(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

// Options shared by the subcommands; unused ones stay at their defaults.
struct Options {
  std::string generator = "shannon";
  int dim = 0;
  std::string matrix;
  double alpha = 0.5;
  std::string p, q;
  std::string kind;
  std::string sigma1, sigma2;
  std::string input;
  bool weights = false;
  std::string side = "right";
  std::string report;
  int inner_iters = 20;
  double outer_tol = 1e-10;
  int outer_max_iters = 1000;
  bool no_correction = false;
  double ymin = 0.0;
  double ymax = 1e9;
  int per_decade = 40;
  bool empirical = false;
  double eps = 1e-4;
  int k = 2;
  std::optional<uint64_t> rng_seed;
  std::vector<std::string> weight_spec;
  int trials = 2000;
  double epsilon = 0.5;
  int samples = 10000;
  int max_rounds = 100;
  bool search = false;
};

struct Context {
  Options o;
  json args;     // resolved parameters echoed in the report
  json results;
  std::ostringstream summary;
};

Generator generator_for(const Options& o, int dim) {
  std::optional<Matrix> q;
  if (!o.matrix.empty()) q = read_matrix(o.matrix);
  const int d = o.dim > 0 ? o.dim : dim;
  return make_builtin(o.generator, d, q);
}

void echo_generator(Context& c, int dim) {
  c.args["generator"] = c.o.generator;
  c.args["dim"] = dim;
  if (!c.o.matrix.empty()) c.args["matrix"] = c.o.matrix;
}

uint64_t resolve_seed(Context& c) {
  if (!c.o.rng_seed) {
    c.o.rng_seed = random_seed();
    c.summary << "generated rng seed " << *c.o.rng_seed << "\n";
  }
  c.args["rng_seed"] = *c.o.rng_seed;
  return *c.o.rng_seed;
}

void cmd_divergence(Context& c) {
  const Options& o = c.o;
  const DivergenceKind kind = parse_divergence_kind(o.kind);
  const Vector p = parse_vector(o.p), q = parse_vector(o.q);
  if (p.size() != q.size()) throw InvalidArgument("--p and --q differ in dimension");
  c.args["kind"] = o.kind;
  c.args["p"] = vec(p);
  c.args["q"] = vec(q);

  json r;
  r["kind"] = o.kind;
  if (kind == DivergenceKind::kKlGaussian) {
    if (o.sigma1.empty() || o.sigma2.empty()) throw InvalidArgument("kl-gaussian needs --sigma1 and --sigma2");
    c.args["sigma1"] = o.sigma1;
    c.args["sigma2"] = o.sigma2;
    r["value"] = num(kl_gaussian(p, read_matrix(o.sigma1), q, read_matrix(o.sigma2)).value);
    r["rho_j"] = r["rho_b_q"] = r["slope_sq"] = nullptr;
    c.results = r;
    c.summary << o.kind << " = " << r["value"].dump() << "\n";
    return;
  }

  const bool histogram = kind == DivergenceKind::kJensenShannon || kind == DivergenceKind::kTotalJensenShannon;
  const Generator g = histogram ? make_builtin("shannon", static_cast<int>(p.size()))
                                : generator_for(o, static_cast<int>(p.size()));
  if (histogram) {
    c.args["generator"] = "shannon";
    c.args["dim"] = p.size();
  } else {
    echo_generator(c, g.dim());
    c.args["alpha"] = o.alpha;
  }

  double value = 0.0;
  switch (kind) {
    case DivergenceKind::kJensenRaw: value = jensen_raw(g, o.alpha, p, q).value; break;
    case DivergenceKind::kJensenScaled: value = jensen_scaled(g, o.alpha, p, q).value; break;
    case DivergenceKind::kBregman: value = bregman(g, p, q).value; break;
    case DivergenceKind::kTotalBregman: value = total_bregman(g, p, q).value; break;
    case DivergenceKind::kTotalJensen: value = total_jensen(g, o.alpha, p, q).value; break;
    case DivergenceKind::kTotalJensenRaw: value = total_jensen(g, o.alpha, p, q, JensenScaling::kRaw).value; break;
    case DivergenceKind::kJensenShannon: value = jensen_shannon(p, q).value; break;
    case DivergenceKind::kTotalJensenShannon: value = total_jensen_shannon(p, q).value; break;
    case DivergenceKind::kKlGaussian: break;
  }
  r["value"] = num(value);
  if (p == q) {
    r["rho_j"] = r["slope_sq"] = nullptr;
  } else {
    const ConformalFactors cf = conformal_factors(g, p, q);
    r["rho_j"] = num(cf.rho_j);
    r["slope_sq"] = num(cf.slope_sq);
  }
  r["rho_b_q"] = g.domain().interior(q) ? num(rho_b(g, q)) : json(nullptr);
  c.results = r;
  c.summary << o.kind << " = " << r["value"].dump() << "\n";
}

void cmd_project(Context& c) {
  const Options& o = c.o;
  const Vector p = parse_vector(o.p), q = parse_vector(o.q);
  const Generator g = generator_for(o, static_cast<int>(p.size()));
  echo_generator(c, g.dim());
  c.args["alpha"] = o.alpha;
  c.args["p"] = vec(p);
  c.args["q"] = vec(q);
  const ProjectionResult pr = project_beta(g, o.alpha, p, q);
  c.results = {{"beta", num(pr.beta)},
               {"distance", num(pr.distance)},
               {"j_raw", num(pr.j_raw)},
               {"rho_j", num(pr.rho_j)},
               {"pythagoras_residual", num(pr.pythagoras_residual)},
               {"foot", {num(pr.foot_abscissa), num(pr.foot_ordinate)}},
               {"oracle_distance", num(geometric_oracle_tj(g, o.alpha, p, q))}};
  c.summary << "beta = " << pr.beta << ", distance = " << pr.distance << "\n";
}

void cmd_centroid(Context& c) {
  const Options& o = c.o;
  if (o.input.empty()) throw InvalidArgument("--input is required");
  if (o.side != "right" && o.side != "left") throw InvalidArgument("--side must be right or left");
  const DatasetFile probe = read_dataset(o.input, {o.weights});
  const Generator g = generator_for(o, probe.dimension);
  const DatasetFile ds = load_dataset(o.input, g, false, {o.weights});
  echo_generator(c, g.dim());
  c.args["alpha"] = o.alpha;
  c.args["input"] = o.input;
  c.args["weights"] = ds.has_weights;
  c.args["side"] = o.side;
  c.args["inner_iters"] = o.inner_iters;
  c.args["outer_tol"] = o.outer_tol;
  c.args["outer_max_iters"] = o.outer_max_iters;
  c.args["conformal_correction"] = !o.no_correction;

  CentroidConfig cfg;
  cfg.alpha = o.alpha;
  cfg.inner_cccp_iters = o.inner_iters;
  cfg.outer_tol = o.outer_tol;
  cfg.outer_max_iters = o.outer_max_iters;
  cfg.conformal_correction = !o.no_correction;
  const CentroidResult r = o.side == "left" ? left_sided_centroid(g, ds.data, cfg) : total_jensen_centroid(g, ds.data, cfg);
  c.results = {{"center", vec(r.center)},
               {"loss_trace", nums(r.loss_trace)},
               {"iterations", r.iterations},
               {"converged", r.converged},
               {"clamped", r.clamped},
               {"final_stage_weights", r.stage_weights_trace.empty() ? json::array() : nums(r.stage_weights_trace.back())}};
  if (!o.report.empty()) {
    std::ofstream f(o.report);
    if (!f) throw InvalidArgument("cannot write report file " + o.report);
    f << c.results.dump(2) << "\n";
    c.args["report"] = o.report;
  }
  c.summary << "centroid " << to_string(r.center) << " after " << r.iterations << " stages"
            << (r.converged ? "" : " (not converged)") << "\n";
}

void cmd_influence(Context& c) {
  const Options& o = c.o;
  const Generator g = make_builtin(o.generator, 1);
  const double p = o.p.empty() ? 1.0 : parse_vector(o.p)(0);
  const double ymin = o.ymin > 0.0 ? o.ymin : p;
  c.args["generator"] = o.generator;
  c.args["p"] = p;
  c.args["ymin"] = ymin;
  c.args["ymax"] = o.ymax;
  c.args["per_decade"] = o.per_decade;
  c.args["empirical"] = o.empirical;
  if (o.empirical) c.args["eps"] = o.eps;
  const auto grid = geometric_grid(ymin, o.ymax, o.per_decade);
  const BoundednessReport rep = boundedness_sweep(g, p, grid, o.empirical ? std::optional<double>(o.eps) : std::nullopt);
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json jr = {{"y", num(row.y)}, {"z_analytic", num(row.z_analytic)}, {"rho_j", num(row.rho_j)}};
    if (row.z_empirical) jr["z_empirical"] = num(*row.z_empirical);
    rows.push_back(jr);
  }
  c.results = {{"table", rows},
               {"sup_abs_z", num(rep.sup_abs_z)},
               {"last_decade_growth", num(rep.last_decade_growth)},
               {"trend", rep.trend == InfluenceTrend::kBounded ? "bounded" : "unbounded"},
               {"rho_log_product", num(rep.rho_log_product)}};
  c.summary << "sup |z| = " << rep.sup_abs_z << " ("
            << (rep.trend == InfluenceTrend::kBounded ? "bounded" : "unbounded") << ")\n";
}

struct LoadedPoints {
  Generator g;
  std::vector<Vector> points;
};

LoadedPoints load_points(Context& c, bool need_interior) {
  const Options& o = c.o;
  if (o.input.empty()) throw InvalidArgument("--input is required");
  const DatasetFile probe = read_dataset(o.input, {o.weights});
  Generator g = generator_for(o, probe.dimension);
  DatasetFile ds = load_dataset(o.input, g, need_interior, {o.weights});
  echo_generator(c, g.dim());
  c.args["input"] = o.input;
  c.args["alpha"] = o.alpha;
  return {std::move(g), std::move(ds.data.points)};
}

json indexed_centers(const std::vector<size_t>& idx, const std::vector<Vector>& centers) {
  json a = json::array();
  for (size_t i = 0; i < centers.size(); ++i) {
    json e = {{"coordinates", vec(centers[i])}};
    e["row"] = i < idx.size() ? json(idx[i]) : json(nullptr);
    a.push_back(e);
  }
  return a;
}

void cmd_seed(Context& c) {
  auto [g, pts] = load_points(c, false);
  SeedingConfig cfg{c.o.k, c.o.alpha, resolve_seed(c), 1};
  c.args["k"] = cfg.k;
  const Seeding s = seed(g, pts, cfg);
  const double pot = potential(g, cfg.alpha, pts, s.centers);
  c.results = {{"centers", indexed_centers(s.indices, s.centers)}, {"potential", num(pot)}};
  c.summary << "seeded " << cfg.k << " centers, potential " << pot << "\n";
}

void cmd_cluster(Context& c) {
  auto [g, pts] = load_points(c, true);
  SeedingConfig cfg{c.o.k, c.o.alpha, resolve_seed(c), 1};
  c.args["k"] = cfg.k;
  c.args["max_rounds"] = c.o.max_rounds;
  c.args["conformal_correction"] = !c.o.no_correction;
  CentroidConfig ccfg;
  ccfg.conformal_correction = !c.o.no_correction;
  const ClusterModel m = lloyd_cluster(g, pts, cfg, ccfg, c.o.max_rounds);
  json rounds = json::array();
  for (const auto& r : m.rounds)
    rounds.push_back({{"potential_before_assignment", num(r.potential_before_assignment)},
                      {"potential_after_assignment", num(r.potential_after_assignment)},
                      {"assignments_changed", r.assignments_changed}});
  json assignments = json::array();
  for (size_t a : m.assignments) assignments.push_back(a);
  c.results = {{"centers", indexed_centers(m.center_indices, m.centers)},
               {"assignments", assignments},
               {"potential", num(m.potential)},
               {"rounds", rounds},
               {"empty_cluster_repairs", m.empty_cluster_repairs}};
  c.summary << "clustered into " << cfg.k << " groups, potential " << m.potential << "\n";
}

json constants_json(const BoundConstants& bc, int k) {
  json curve = json::array();
  for (int i = 1; i <= 9; ++i) {
    const double e = i / 10.0;
    curve.push_back({{"epsilon", e},
                     {"u", num(bc.u_hat(e))},
                     {"v", num(bc.v_hat(e))},
                     {"seeding_multiplier", num(bc.seeding_multiplier(e, k))}});
  }
  return {{"k1_hat", num(bc.k1_hat)},
          {"k1_global_hat", num(bc.k1_global_hat)},
          {"k2_hat", num(bc.k2_hat)},
          {"rho_min", num(bc.rho_min)},
          {"rho_max", num(bc.rho_max)},
          {"bounded", bc.bounded},
          {"offending_point", bc.offending_point ? vec(*bc.offending_point) : json(nullptr)},
          {"rho_exact", bc.rho_exact},
          {"k2_exact", bc.k2_exact},
          {"epsilon_note", "epsilon is an existential constant of the Taylor remainder; U and V are reported as curves over epsilon"},
          {"curve", curve}};
}

void cmd_bound_experiment(Context& c) {
  auto [g, pts] = load_points(c, false);
  SeedingConfig cfg{c.o.k, c.o.alpha, resolve_seed(c), c.o.trials};
  c.args["k"] = cfg.k;
  c.args["trials"] = cfg.trials;
  c.args["epsilon"] = c.o.epsilon;
  c.args["samples"] = c.o.samples;
  const SeedingExperiment ex = seeding_bound_experiment(g, pts, cfg, c.o.epsilon, c.o.samples);
  json opt = json::array();
  for (size_t i : ex.optimal_indices) opt.push_back(i);
  c.results = {{"mean_potential", num(ex.mean_potential)},
               {"optimal_potential", num(ex.optimal_potential)},
               {"optimal_rows", opt},
               {"ratio", num(ex.ratio)},
               {"epsilon", ex.epsilon},
               {"multiplier", num(ex.multiplier)},
               {"multiplier_finite", ex.multiplier_finite},
               {"bound_holds", ex.bound_holds},
               {"constants", constants_json(ex.constants, cfg.k)}};
  c.summary << "mean/opt = " << ex.ratio << ", bound multiplier = " << ex.multiplier << "\n";
}

void cmd_constants(Context& c) {
  auto [g, pts] = load_points(c, false);
  const uint64_t s = resolve_seed(c);
  c.args["samples"] = c.o.samples;
  c.args["k"] = c.o.k;
  const BoundConstants bc = estimate_bound_constants(g, pts, c.o.samples, s);
  json r = constants_json(bc, c.o.k);
  const InequalitySurrogates sur = inequality_surrogates(g, c.o.alpha, pts, c.o.samples, s);
  r["triangle_sup"] = num(sur.triangle_sup);
  r["symmetric_sup"] = num(sur.symmetric_sup);
  c.results = r;
  c.summary << "K1 = " << bc.k1_hat << ", K2 = " << bc.k2_hat << ", rho in [" << bc.rho_min << ", " << bc.rho_max << "]\n";
}

double sqrt_tjs(const Vector& a, const Vector& b) { return std::sqrt(total_jensen_shannon(a, b).value); }

void cmd_metric_check(Context& c) {
  Vector p(2), q(2), r(2);
  p << 0.98, 0.02;
  q << 0.52, 0.48;
  r << 0.006, 0.994;
  const double d1 = sqrt_tjs(p, q), d2 = sqrt_tjs(q, r), d3 = sqrt_tjs(p, r);
  c.results = {{"p", vec(p)},
               {"q", vec(q)},
               {"r", vec(r)},
               {"d1", num(d1)},
               {"d2", num(d2)},
               {"d3", num(d3)},
               {"deficiency", num(d3 - (d1 + d2))},
               {"triangle_violated", d1 + d2 < d3}};
  c.summary << "sqrt(tJS): d1 = " << d1 << ", d2 = " << d2 << ", d3 = " << d3 << ", deficiency = " << d3 - (d1 + d2)
            << "\n";
  c.args["search"] = c.o.search;
  if (!c.o.search) return;

  const int dim = c.o.dim > 0 ? c.o.dim : 2;
  c.args["dim"] = dim;
  c.args["samples"] = c.o.samples;
  Rng rng(resolve_seed(c));
  auto simplex_point = [&] {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = -std::log(1.0 - rng.uniform());
    return Vector(v / v.sum());
  };
  double worst = -INFINITY;
  Vector wp, wq, wr;
  int violations = 0;
  for (int s = 0; s < c.o.samples; ++s) {
    const Vector a = simplex_point(), b = simplex_point(), m = simplex_point();
    const double def = sqrt_tjs(a, m) - (sqrt_tjs(a, b) + sqrt_tjs(b, m));
    if (def > 0.0) ++violations;
    if (def > worst) {
      worst = def;
      wp = a, wq = b, wr = m;
    }
  }
  c.results["search"] = {{"samples", c.o.samples},
                         {"violations", violations},
                         {"worst_deficiency", num(worst)},
                         {"worst_triple", {vec(wp), vec(wq), vec(wr)}}};
  c.summary << "search: " << violations << " violations, worst deficiency " << worst << "\n";
}

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    if (!key.empty()) kv[key] = strip(line.substr(eq + 1));
  }
  return kv;
}

// Flags given in a config file are appended unless the command line sets them.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  for (const auto& [key, value] : read_config(path)) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    if (present) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value != "false") {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Context ctx;
  Options& o = ctx.o;
  CLI::App app{"Total Jensen divergences: evaluation, centroids, robustness and clustering", "tjd"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto add_generator = [&](CLI::App* s) {
    s->add_option("--generator", o.generator, "shannon|burg|bit|squared-euclidean|squared-mahalanobis")->capture_default_str();
    s->add_option("--dim", o.dim, "dimension (inferred from the data when omitted)");
    s->add_option("--matrix", o.matrix, "CSV file with the Mahalanobis matrix");
  };
  auto add_alpha = [&](CLI::App* s) { s->add_option("--alpha", o.alpha, "skew parameter")->capture_default_str(); };
  auto add_seed = [&](CLI::App* s) {
    s->add_option_function<uint64_t>("--rng-seed", [&](const uint64_t& v) { o.rng_seed = v; }, "64-bit RNG seed");
  };
  auto add_data = [&](CLI::App* s) {
    s->add_option("--input", o.input, "CSV points, one per row")->required();
    s->add_option("--weights", o.weight_spec, "trailing column holds weights (optionally `--weights col`)")
        ->expected(0, 1)
        ->check(CLI::IsMember({"col", "last", "weight", "true"}));
    add_generator(s);
    add_alpha(s);
  };

  std::map<std::string, std::function<void(Context&)>> handlers;

  auto* div = app.add_subcommand("divergence", "evaluate one divergence");
  div->add_option("--kind", o.kind, "jensen-raw|jensen-scaled|bregman|total-bregman|total-jensen|total-jensen-raw|"
                                    "jensen-shannon|total-jensen-shannon|kl-gaussian")->required();
  add_generator(div);
  add_alpha(div);
  div->add_option("--p", o.p, "first point, comma separated")->required();
  div->add_option("--q", o.q, "second point, comma separated")->required();
  div->add_option("--sigma1", o.sigma1, "covariance CSV of the first Gaussian (kl-gaussian)");
  div->add_option("--sigma2", o.sigma2, "covariance CSV of the second Gaussian (kl-gaussian)");
  handlers["divergence"] = cmd_divergence;

  auto* proj = app.add_subcommand("project", "orthogonal projection onto the chord");
  add_generator(proj);
  add_alpha(proj);
  proj->add_option("--p", o.p)->required();
  proj->add_option("--q", o.q)->required();
  handlers["project"] = cmd_project;

  auto* cen = app.add_subcommand("centroid", "total Jensen centroid of a weighted point set");
  add_data(cen);
  cen->add_option("--side", o.side, "right|left")->capture_default_str();
  cen->add_option("--report", o.report, "also write the result JSON to this file");
  cen->add_option("--inner-iters", o.inner_iters)->capture_default_str();
  cen->add_option("--outer-tol", o.outer_tol)->capture_default_str();
  cen->add_option("--outer-max-iters", o.outer_max_iters)->capture_default_str();
  cen->add_flag("--no-correction", o.no_correction, "plain reweight/CCCP alternation");
  handlers["centroid"] = cmd_centroid;

  auto* inf = app.add_subcommand("influence", "influence function sweep");
  inf->add_option("--generator", o.generator)->capture_default_str();
  inf->add_option("--p", o.p, "inlier (default 1)");
  inf->add_option("--ymin", o.ymin, "first grid point (default p)");
  inf->add_option("--ymax", o.ymax)->capture_default_str();
  inf->add_option("--per-decade", o.per_decade)->capture_default_str();
  inf->add_flag("--empirical", o.empirical, "also solve the perturbed centroid");
  inf->add_option("--eps", o.eps, "outlier mass for --empirical")->capture_default_str();
  handlers["influence"] = cmd_influence;

  auto* sd = app.add_subcommand("seed", "total Jensen k-means++ seeding");
  add_data(sd);
  sd->add_option("--k", o.k)->capture_default_str();
  add_seed(sd);
  handlers["seed"] = cmd_seed;

  auto* cl = app.add_subcommand("cluster", "seeded Lloyd clustering");
  add_data(cl);
  cl->add_option("--k", o.k)->capture_default_str();
  cl->add_option("--max-rounds", o.max_rounds)->capture_default_str();
  cl->add_flag("--no-correction", o.no_correction);
  add_seed(cl);
  handlers["cluster"] = cmd_cluster;

  auto* be = app.add_subcommand("bound-experiment", "seeding potential versus the discrete optimum");
  add_data(be);
  be->add_option("--k", o.k)->capture_default_str();
  be->add_option("--trials", o.trials)->capture_default_str();
  be->add_option("--epsilon", o.epsilon, "free constant of U and V")->capture_default_str();
  be->add_option("--samples", o.samples, "closure samples for the constants")->capture_default_str();
  add_seed(be);
  handlers["bound-experiment"] = cmd_bound_experiment;

  auto* cs = app.add_subcommand("constants", "estimate K1, K2, rho extremes, U and V");
  add_data(cs);
  cs->add_option("--k", o.k)->capture_default_str();
  cs->add_option("--samples", o.samples)->capture_default_str();
  add_seed(cs);
  handlers["constants"] = cmd_constants;

  auto* mc = app.add_subcommand("metric-check", "triangle inequality of sqrt(total Jensen-Shannon)");
  mc->add_flag("--search", o.search, "hunt for more violations on random simplex triples");
  mc->add_option("--samples", o.samples)->capture_default_str();
  mc->add_option("--dim", o.dim, "simplex dimension for --search");
  add_seed(mc);
  handlers["metric-check"] = cmd_metric_check;

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  if (const CLI::Option* w = sub->get_option_no_throw("--weights")) o.weights = w->count() > 0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    handlers.at(sub->get_name())(ctx);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  json report;
  report["command"] = {{"name", sub->get_name()}, {"args", ctx.args}, {"version", kVersion}};
  report["results"] = ctx.results;
  report["timings"] = {{"total_ms", ms}};
  out << report.dump() << "\n";
  err << ctx.summary.str();
  return kExitOk;
}

}  // namespace tjd
