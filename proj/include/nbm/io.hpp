#ifndef NBM_IO_HPP
#define NBM_IO_HPP

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbm/algorithm.hpp"
#include "nbm/exact.hpp"
#include "nbm/points.hpp"
#include "nbm/verify.hpp"

namespace nbm {

using Json = nlohmann::ordered_json;

// Points as read from disk. `literals` keeps each coordinate's decimal text so
// exact mode can convert it without going through a double.
struct PointInput {
    Eigen::MatrixXd coordinates;
    std::vector<std::vector<std::string>> literals;
    std::optional<Eigen::VectorXd> tolerance;
};

// One point per row, comma separated; a first row that is not numeric is
// treated as a header. Blank lines and lines starting with '#' are skipped.
PointInput read_points_csv(std::istream& in);
// {"points": [[...], ...], "tolerance": [...]}; tolerance optional.
PointInput read_points_json(std::istream& in);
// Dispatches on the extension: ".json" is JSON, anything else CSV.
PointInput load_points(const std::filesystem::path& path);

// "0.15,0" (per coordinate) or "0.018" (uniform).
Eigen::VectorXd parse_tolerance(std::string_view text, Eigen::Index dimension);

RationalPointSet to_rational(const PointInput& input);

// Shortest decimal text that reads back to the same double.
std::string shortest_decimal(double value);

// Exact decimal when the denominator has only factors 2 and 5, else "p/q".
std::string to_display_string(const Rational& q);

// Report schema: ordering, dimension, order_ideal, polynomials, steps,
// diagnostics; field order is fixed.
Json to_json(const NbmResult& result, bool include_steps = true);
NbmResult nbm_result_from_json(const Json& report);

Json to_json(const ExactBasis& basis, const VariableNames& names);
Json to_json(const StabilityReport& report);
Json to_json(const P1Report& report, const VariableNames& names);
Json to_json(const P3Report& report, const VariableNames& names);
Json to_json(const ConvergenceReport& report);

// "x - 2.05 y + 1.06667". Coefficients are rounded to `digits` decimals with
// trailing zeros dropped; a unit coefficient is omitted before a non-constant
// term.
std::string format_polynomial(const std::vector<PowerProduct>& support,
                              const std::vector<double>& coefficients, const VariableNames& names,
                              int digits);
std::string format_polynomial(const ExactPolynomial& g, const VariableNames& names);
// "{1, y, y^2}"
std::string format_terms(const std::vector<PowerProduct>& terms, const VariableNames& names);

std::string format_text(const NbmResult& result, const VariableNames& names, int digits,
                        bool step_log);
std::string format_text(const ExactBasis& basis, const VariableNames& names);

}  // namespace nbm

#endif  // NBM_IO_HPP
