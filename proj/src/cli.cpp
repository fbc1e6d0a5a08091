#include "contest_forge/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "contest_forge/compstat.hpp"
#include "contest_forge/error.hpp"
#include "contest_forge/heterogeneous.hpp"
#include "contest_forge/homogeneous.hpp"
#include "contest_forge/io.hpp"

namespace contest_forge::cli {

namespace {

using io::Json;

struct Options {
  std::size_t n = 0;
  double prize = 0.0;
  double cost = 0.0;
  std::string dist;
  std::string contest;
  std::size_t m = 0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::string format;
  std::string out;
  double eps = 0.01;
  double vc_min = 0.0;
  double vc_max = 0.0;
  std::size_t steps = 0;
  double n_factor = kDefaultNFactor;
};

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const auto& c : cells) {
    if (!row.empty()) row += ",";
    row += c;
  }
  return row + "\n";
}

std::string emit(const Json& doc) { return io::dump(doc); }

EmpiricalTypes load_types(const std::string& path, std::size_t n, std::size_t m,
                          std::uint64_t seed) {
  auto doc = io::load_distribution(path);
  if (auto* emp = std::get_if<io::EmpiricalDocument>(&doc)) {
    return EmpiricalTypes(emp->points, n);
  }
  if (auto* jd = std::get_if<JointTypeDistribution>(&doc)) {
    return discretize(*jd, m, n, seed);
  }
  throw ContestError(ErrorCode::InvalidArgument,
                     path + ": expected a rect_mixture or empirical distribution");
}

std::string cmd_design(const Options& o) {
  std::optional<QualityDistribution> qd;
  if (!o.dist.empty()) {
    auto doc = io::load_distribution(o.dist);
    auto* q = std::get_if<QualityDistribution>(&doc);
    if (!q) {
      throw ContestError(ErrorCode::InvalidArgument,
                         o.dist + ": expected a uniform_quality or piecewise_cdf distribution");
    }
    qd = *q;
  }
  const DesignResult r = optimal_contest(o.n, o.prize, o.cost, qd);
  if (o.format == "csv") {
    return "j_star,p_star,lambda,theta,c_star\n" +
           csv_row({std::to_string(r.j_star), io::format12(r.equilibrium.p),
                    io::format12(r.equilibrium.lambda), io::format12(r.equilibrium.theta),
                    io::format12(r.c_star_at_p)});
  }
  return emit(io::to_json(r));
}

std::string cmd_compstat(const Options& o) {
  const BreakpointTable table = breakpoints(o.n, o.prize);
  if (o.format == "json") {
    Json rows = Json::array();
    for (const auto& e : table.entries) rows.push_back({{"j", e.j}, {"p", e.p}, {"cost", e.cost}});
    return emit(Json{{"n", table.n}, {"budget", table.budget}, {"breakpoints", rows}});
  }
  return io::breakpoints_csv(table);
}

std::string cmd_poisson(const Options& o) {
  const PoissonLimit r = poisson_limit(o.prize, o.cost);
  if (o.format == "csv") {
    return "lambda_star,j_star,value\n" + csv_row({io::format12(r.lambda_star),
                                                   std::to_string(r.j_star),
                                                   io::format12(r.value)});
  }
  return emit(io::to_json(r));
}

std::string cmd_scan(const Options& o) {
  if (o.steps < 1) throw ContestError(ErrorCode::InvalidArgument, "--steps must be at least 1");
  if (!(o.vc_max >= o.vc_min)) {
    throw ContestError(ErrorCode::InvalidArgument, "--vc-max must be at least --vc-min");
  }
  std::vector<double> vcs;
  for (std::size_t k = 0; k < o.steps; ++k) {
    if (o.steps == 1) {
      vcs.push_back(o.vc_min);
    } else {
      const double t = static_cast<double>(k) / static_cast<double>(o.steps - 1);
      vcs.push_back(o.vc_min * std::pow(o.vc_max / o.vc_min, t));
    }
  }
  const auto rows = asymptotic_scan(o.cost, vcs, o.n_factor);
  if (o.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back({{"vc", r.vc},
                     {"budget", r.budget},
                     {"n", r.n},
                     {"j_star", r.j_star},
                     {"lambda", r.lambda},
                     {"r_j", r.r_j},
                     {"r_lambda", r.r_lambda}});
    }
    return emit(Json{{"rows", arr}});
  }
  return io::scan_csv(rows);
}

std::string cmd_hetero_eq(const Options& o) {
  std::optional<std::size_t> n;
  if (o.n > 0) n = o.n;
  const PrizeVector contest = io::load_contest(o.contest, n);
  const EmpiricalTypes types = load_types(o.dist, contest.n(), o.m, o.seed);
  const EquilibriumBracket eq = equilibrium(contest, types);
  if (o.format == "csv") {
    std::string out = "index,q,c,w,lower,upper\n";
    for (std::size_t i = 0; i < types.size(); ++i) {
      out += csv_row({std::to_string(i), io::format12(types[i].q), io::format12(types[i].c),
                      io::format12(types[i].w), eq.lower.mask[i] ? "1" : "0",
                      eq.upper.mask[i] ? "1" : "0"});
    }
    return out;
  }
  Json doc{{"bracket", io::to_json(eq, types)},
           {"report",
            {{"contest", io::contest_to_json(contest)},
             {"participants", eq.selected().count()},
             {"participation_mass", 1.0 - output_cdf(types, eq.selected(), 0.0)},
             {"expected_max", exact_expected_max(types, eq.selected())},
             {"sub_equilibrium", is_sub_equilibrium(contest, types, eq.selected())}}}};
  return emit(doc);
}

std::string cmd_approx(const Options& o) {
  const EmpiricalTypes types = load_types(o.dist, o.n, o.m, o.seed);
  const ApproxReport r = wta_approx_experiment(types, o.prize, o.replicas, o.seed);
  if (o.format == "csv") {
    std::string out = "j,mean,std_error,participants,converged\n";
    for (const auto& c : r.contests) {
      out += csv_row({std::to_string(c.j), io::format12(c.estimate.mean),
                      io::format12(c.estimate.std_error), std::to_string(c.participants),
                      c.converged ? "1" : "0"});
    }
    return out;
  }
  return emit(io::to_json(r));
}

std::string cmd_example_obj(const Options& o) {
  const ExampleObjReport r = example_obj(o.prize, o.n, o.eps, o.seed, o.replicas, o.m);
  if (o.format == "csv") {
    std::string out = "contest,objective,mean,std_error\n";
    out += csv_row({"wta", "max", io::format12(r.wta_max.mean), io::format12(r.wta_max.std_error)});
    out += csv_row({"split", "sum", io::format12(r.split_sum.mean),
                    io::format12(r.split_sum.std_error)});
    for (std::size_t k = 0; k < r.top_heavy.size(); ++k) {
      out += csv_row({"top_heavy_" + std::to_string(k), "sum",
                      io::format12(r.top_heavy[k].sum.mean),
                      io::format12(r.top_heavy[k].sum.std_error)});
    }
    return out;
  }
  return emit(io::to_json(r));
}

void add_output(CLI::App* sub, Options& o, const std::string& default_format) {
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->default_str(default_format);
  sub->add_option("--out", o.out, "Write output to PATH instead of standard output");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-order contest design and equilibrium tools", "contest-forge"};
  app.require_subcommand(1);
  Options o;
  std::function<std::string()> action;

  // Per-subcommand defaults that differ from the shared struct's zeros.
  if (!args.empty()) {
    o.format = args[0] == "compstat" || args[0] == "scan" ? "csv" : "json";
    if (args[0] == "scan") o.cost = 1.0;
    if (args[0] == "hetero-eq") o.m = 200;
    if (args[0] == "approx") {
      o.m = 400;
      o.replicas = 1000;
    }
    if (args[0] == "example-obj") {
      o.prize = 400.0;
      o.n = 4000;
      o.replicas = 200;
    }
  }

  auto* design = app.add_subcommand("design", "Optimal contest for a common participation cost");
  design->add_option("--n", o.n, "Population size")->required();
  design->add_option("--prize", o.prize, "Prize budget V")->required();
  design->add_option("--cost", o.cost, "Participation cost c")->required();
  design->add_option("--dist", o.dist, "Quality distribution JSON (default Uniform(0,1))");
  add_output(design, o, "json");
  design->callback([&] { action = [&] { return cmd_design(o); }; });

  auto* compstat = app.add_subcommand("compstat", "Breakpoint costs of the simple contests");
  compstat->add_option("--n", o.n, "Population size")->required();
  compstat->add_option("--prize", o.prize, "Prize budget V")->required();
  add_output(compstat, o, "csv");
  compstat->callback([&] { action = [&] { return cmd_compstat(o); }; });

  auto* poisson = app.add_subcommand("poisson", "Large-population limit of the optimal design");
  poisson->add_option("--prize", o.prize, "Prize budget V")->required();
  poisson->add_option("--cost", o.cost, "Participation cost c")->required();
  add_output(poisson, o, "json");
  poisson->callback([&] { action = [&] { return cmd_poisson(o); }; });

  auto* scan = app.add_subcommand("scan", "Asymptotic gaps of j* and lambda* below V/c");
  scan->add_option("--cost", o.cost, "Participation cost c")->capture_default_str();
  scan->add_option("--vc-min", o.vc_min, "Smallest V/c")->required();
  scan->add_option("--vc-max", o.vc_max, "Largest V/c")->required();
  scan->add_option("--steps", o.steps, "Number of geometrically spaced scale values")
      ->required();
  scan->add_option("--n-factor", o.n_factor, "Population as a multiple of V/c")
      ->capture_default_str();
  add_output(scan, o, "csv");
  scan->callback([&] { action = [&] { return cmd_scan(o); }; });

  auto* hetero = app.add_subcommand("hetero-eq", "Equilibrium bracket for joint (q, c) types");
  hetero->add_option("--dist", o.dist, "Distribution JSON (rect_mixture or empirical)")
      ->required();
  hetero->add_option("--contest", o.contest, "Contest JSON")->required();
  hetero->add_option("--n", o.n, "Population size (default: number of listed prizes)");
  hetero->add_option("--m", o.m, "Discretization points for rect_mixture input");
  hetero->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  add_output(hetero, o, "json");
  hetero->callback([&] { action = [&] { return cmd_hetero_eq(o); }; });

  auto* approx = app.add_subcommand("approx", "Winner-take-all approximation experiment");
  approx->add_option("--dist", o.dist, "Distribution JSON (rect_mixture or empirical)")
      ->required();
  approx->add_option("--n", o.n, "Population size")->required();
  approx->add_option("--prize", o.prize, "Prize budget V")->required();
  approx->add_option("--m", o.m, "Discretization points")->capture_default_str();
  approx->add_option("--replicas", o.replicas, "Monte Carlo replicas")->capture_default_str();
  approx->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  add_output(approx, o, "json");
  approx->callback([&] { action = [&] { return cmd_approx(o); }; });

  auto* exobj = app.add_subcommand("example-obj", "Max versus sum objective counterexample");
  exobj->add_option("--prize", o.prize, "Prize budget V")->capture_default_str();
  exobj->add_option("--n", o.n, "Population size")->capture_default_str();
  exobj->add_option("--eps", o.eps, "Side length of the low-type square")->capture_default_str();
  exobj->add_option("--m", o.m, "Discretization points (default n)");
  exobj->add_option("--replicas", o.replicas, "Monte Carlo replicas")->capture_default_str();
  exobj->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  add_output(exobj, o, "json");
  exobj->callback([&] { action = [&] { return cmd_example_obj(o); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const std::string text = action();
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw ContestError(ErrorCode::Io, "cannot write " + o.out);
      file << text;
      if (!file) throw ContestError(ErrorCode::Io, "failed writing " + o.out);
    }
    return 0;
  } catch (const ContestError& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.code()) ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace contest_forge::cli
