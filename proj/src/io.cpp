#include "contest_forge/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "contest_forge/error.hpp"

namespace contest_forge::io {

namespace {

double number(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number()) {
    throw ContestError(ErrorCode::InvalidArgument,
                       std::string("expected numeric field \"") + key + "\"");
  }
  return doc.at(key).get<double>();
}

const Json& array(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw ContestError(ErrorCode::InvalidArgument,
                       std::string("expected array field \"") + key + "\"");
  }
  return doc.at(key);
}

Interval interval(const Json& pair, const char* what) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    throw ContestError(ErrorCode::InvalidArgument,
                       std::string(what) + " interval must be [lo, hi]");
  }
  return {pair[0].get<double>(), pair[1].get<double>()};
}

Json mask_json(const ParticipationProfile& profile) {
  Json out = Json::array();
  for (bool b : profile.mask) out.push_back(b ? 1 : 0);
  return out;
}

void round_numbers(Json& doc) {
  if (doc.is_number_float()) {
    doc = round12(doc.get<double>());
  } else if (doc.is_structured()) {
    for (auto& child : doc) round_numbers(child);
  }
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContestError(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static Json parse_text(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ContestError(ErrorCode::InvalidArgument, path + ": " + e.what());
  }
}

PrizeVector parse_contest(const Json& doc, std::optional<std::size_t> n) {
  const double budget = number(doc, "budget");
  std::vector<double> values;
  for (const auto& v : array(doc, "values")) {
    if (!v.is_number()) throw ContestError(ErrorCode::InvalidArgument, "prizes must be numbers");
    values.push_back(v.get<double>());
  }
  if (n) {
    if (*n < values.size()) {
      throw ContestError(ErrorCode::InvalidArgument,
                         "contest lists " + std::to_string(values.size()) +
                             " prizes but the population is " + std::to_string(*n));
    }
    values.resize(*n, 0.0);
  }
  if (values.empty()) throw ContestError(ErrorCode::InvalidArgument, "contest has no prizes");
  return validate_contest(std::move(values), budget);
}

PrizeVector load_contest(const std::string& path, std::optional<std::size_t> n) {
  return parse_contest(parse_text(read_file(path), path), n);
}

Json contest_to_json(const PrizeVector& contest) {
  return Json{{"budget", contest.budget()}, {"values", contest.values()}};
}

DistributionDocument parse_distribution(const Json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string()) {
    throw ContestError(ErrorCode::InvalidArgument, "distribution needs a \"kind\" string");
  }
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "rect_mixture") {
    std::vector<RectComponent> comps;
    for (const auto& c : array(doc, "components")) {
      if (!c.is_object()) throw ContestError(ErrorCode::InvalidArgument, "bad component");
      comps.push_back({interval(c.at("q"), "quality"), interval(c.at("c"), "cost"),
                       number(c, "weight")});
    }
    return JointTypeDistribution(std::move(comps));
  }
  if (kind == "uniform_quality") {
    return QualityDistribution::uniform(number(doc, "a"), number(doc, "b"));
  }
  if (kind == "piecewise_cdf") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : array(doc, "knots")) {
      const Interval pair = interval(k, "knot");
      knots.emplace_back(pair.lo, pair.hi);
    }
    return QualityDistribution::piecewise(std::move(knots));
  }
  if (kind == "empirical") {
    EmpiricalDocument out;
    double total = 0.0;
    for (const auto& p : array(doc, "points")) {
      if (!p.is_array() || p.size() != 3) {
        throw ContestError(ErrorCode::InvalidArgument, "empirical points are [q, c, w]");
      }
      const TypePoint pt{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
      if (!(pt.w > 0.0) || !std::isfinite(pt.w)) {
        throw ContestError(ErrorCode::NegativeWeight, "empirical weights must be positive",
                           out.points.size() + 1);
      }
      total += pt.w;
      out.points.push_back(pt);
    }
    if (out.points.empty()) throw ContestError(ErrorCode::InvalidArgument, "no points");
    for (auto& pt : out.points) pt.w /= total;
    return out;
  }
  throw ContestError(ErrorCode::InvalidArgument, "unknown distribution kind \"" + kind + "\"");
}

DistributionDocument load_distribution(const std::string& path) {
  return parse_distribution(parse_text(read_file(path), path));
}

Json to_json(const ObjectiveEstimate& e) {
  return Json{{"mean", e.mean},
              {"std_error", e.std_error},
              {"replicas", e.replicas},
              {"seed", e.seed}};
}

Json to_json(const DesignResult& r) {
  return Json{{"j_star", r.j_star},
              {"prizes", r.contest.values()},
              {"p_star", r.equilibrium.p},
              {"lambda", r.equilibrium.lambda},
              {"theta", r.equilibrium.theta},
              {"c_star", r.c_star_at_p}};
}

Json to_json(const PoissonLimit& r) {
  return Json{{"lambda_star", r.lambda_star}, {"j_star", r.j_star}, {"value", r.value}};
}

Json to_json(const EquilibriumBracket& b, const EmpiricalTypes& types) {
  Json out{{"converged", b.converged},
           {"iterations", b.iterations},
           {"selected", "upper"},
           {"support_size", types.size()},
           {"n", types.n()},
           {"lower_count", b.lower.count()},
           {"upper_count", b.upper.count()},
           {"lower", mask_json(b.lower)},
           {"upper", mask_json(b.upper)}};
  return out;
}

Json to_json(const ContestEstimate& c) {
  return Json{{"j", c.j},
              {"estimate", to_json(c.estimate)},
              {"converged", c.converged},
              {"participants", c.participants}};
}

Json to_json(const ApproxReport& r) {
  Json contests = Json::array();
  std::size_t unconverged = 0;
  for (const auto& c : r.contests) {
    contests.push_back(to_json(c));
    if (!c.converged) ++unconverged;
  }
  return Json{{"wta", to_json(r.wta)},
              {"contests", contests},
              {"best_j", r.best_j},
              {"best", r.best},
              {"ratio", r.ratio},
              {"checks",
               {{"three_approx", r.three_approx},
                {"margin", r.margin},
                {"z", one_sided_z99()},
                {"unconverged_brackets", unconverged}}}};
}

Json to_json(const ExampleObjReport& r) {
  Json top = Json::array();
  for (const auto& c : r.top_heavy) {
    top.push_back(Json{{"values_head",
                        std::vector<double>(c.values.begin(),
                                            c.values.begin() +
                                                static_cast<std::ptrdiff_t>(
                                                    std::min<std::size_t>(c.values.size(), 4)))},
                       {"nonzero_prizes",
                        std::count_if(c.values.begin(), c.values.end(),
                                      [](double v) { return v > 0.0; })},
                       {"sum", to_json(c.sum)},
                       {"below_quarter", c.below_quarter}});
  }
  return Json{{"budget", r.budget},
              {"n", r.n},
              {"eps", r.eps},
              {"wta_max", to_json(r.wta_max)},
              {"split_prizes", r.split_prizes},
              {"split_sum", to_json(r.split_sum)},
              {"split_high_participants", r.split_high_participants},
              {"top_heavy", top},
              {"checks",
               {{"wta_max_above_two", r.wta_max_above_two},
                {"split_sum_at_least_quarter", r.split_sum_at_least_quarter},
                {"split_no_high_types", r.split_high_participants == 0},
                {"top_heavy_below_quarter", r.top_heavy_all_below},
                {"all_passed", r.all_passed()}}}};
}

std::string dump(const Json& doc) {
  Json copy = doc;
  round_numbers(copy);
  return copy.dump(2) + "\n";
}

std::string breakpoints_csv(const BreakpointTable& table) {
  std::string out = "j,p,cost\n";
  for (const auto& e : table.entries) {
    out += std::to_string(e.j) + "," + format12(e.p) + "," + format12(e.cost) + "\n";
  }
  return out;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "vc,budget,n,j_star,lambda,r_j,r_lambda\n";
  for (const auto& r : rows) {
    out += format12(r.vc) + "," + format12(r.budget) + "," + std::to_string(r.n) + "," +
           std::to_string(r.j_star) + "," + format12(r.lambda) + "," + format12(r.r_j) + "," +
           format12(r.r_lambda) + "\n";
  }
  return out;
}

}  // namespace contest_forge::io
