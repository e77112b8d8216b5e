#pragma once

#include "aim/chain/chain_gen.hpp"
#include "aim/eigen/eigen_solver.hpp"
#include "aim/engine/aim_engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aim::cli {

using numcore::BigScalar;
using numcore::Real;

/// Exact values as p/q (with a +b*i part when complex); floats with `digits`
/// significant digits, truncated.
std::string scalar_text(const BigScalar& z, int digits);
nlohmann::json complex_json(const BigScalar& z, int digits);
nlohmann::json coeff_list(const numcore::NumPoly& p, int digits);

/// n, Re(alpha), Im(alpha), Re(Delta), Im(Delta), metric; one row per level.
std::string diagnostics_csv(const engine::DiagnosticSeries& series, int nMax, int digits);

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

/// Minimal scatter plot: framed axes, extreme tick labels, one circle per point.
std::string scatter_svg(const std::string& title, const std::string& xLabel, const std::string& yLabel,
                        const std::vector<PlotSeries>& series);

nlohmann::json eigen_result_json(const eigen::EigenResult& r, int digits, bool timing);
std::string escalation_csv(const std::vector<eigen::EigenResult>& results, int digits);

nlohmann::json chain_link_json(const chain::ChainLink& link, const BigScalar& residual,
                               const std::optional<numcore::NumPoly>& polynomial, int digits);

/// Writes with LF line endings, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);
/// Two-space indented JSON with sorted keys and a trailing newline.
std::string json_text(const nlohmann::json& j);

}  // namespace aim::cli
