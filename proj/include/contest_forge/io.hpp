#pragma once

// JSON and CSV documents read and written by the command-line tool.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "contest_forge/compstat.hpp"
#include "contest_forge/contest.hpp"
#include "contest_forge/distributions.hpp"
#include "contest_forge/heterogeneous.hpp"
#include "contest_forge/homogeneous.hpp"

namespace contest_forge::io {

using Json = nlohmann::ordered_json;

/// Value rounded to 12 significant digits.
double round12(double x);
/// "%.12g" rendering used by every CSV writer.
std::string format12(double x);

std::string read_file(const std::string& path);

/// {"budget": V, "values": [...]}. When n exceeds the listed ranks the
/// schedule is padded with zero prizes.
PrizeVector parse_contest(const Json& doc, std::optional<std::size_t> n = std::nullopt);
PrizeVector load_contest(const std::string& path, std::optional<std::size_t> n = std::nullopt);
Json contest_to_json(const PrizeVector& contest);

/// Any of the four distribution kinds: rect_mixture, uniform_quality,
/// piecewise_cdf, empirical ([[q, c, w], ...], weights renormalised).
struct EmpiricalDocument {
  std::vector<TypePoint> points;
};
using DistributionDocument =
    std::variant<JointTypeDistribution, QualityDistribution, EmpiricalDocument>;

DistributionDocument parse_distribution(const Json& doc);
DistributionDocument load_distribution(const std::string& path);

Json to_json(const ObjectiveEstimate& e);
Json to_json(const DesignResult& r);
Json to_json(const PoissonLimit& r);
Json to_json(const EquilibriumBracket& b, const EmpiricalTypes& types);
Json to_json(const ContestEstimate& c);
Json to_json(const ApproxReport& r);
Json to_json(const ExampleObjReport& r);

/// Pretty-printed dump with every number rounded to 12 significant digits.
std::string dump(const Json& doc);

std::string breakpoints_csv(const BreakpointTable& table);
std::string scan_csv(const std::vector<ScanRow>& rows);

}  // namespace contest_forge::io
