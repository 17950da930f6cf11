#include "nbm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nbm {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = line.find(sep);
        out.push_back(trim(line.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        line = line.substr(pos + 1);
    }
    return out;
}

std::optional<double> to_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

PointInput from_rows(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) throw std::invalid_argument("no points in input");
    const std::size_t n = rows.front().size();
    PointInput input;
    input.coordinates.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != n) {
            throw std::invalid_argument("row " + std::to_string(i + 1) + " has " +
                                        std::to_string(rows[i].size()) + " columns, expected " +
                                        std::to_string(n));
        }
        for (std::size_t k = 0; k < n; ++k) {
            const auto v = to_double(rows[i][k]);
            if (!v) throw std::invalid_argument("not a number: '" + rows[i][k] + "'");
            input.coordinates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = *v;
        }
    }
    input.literals = rows;
    return input;
}

std::vector<int> exponents_from_json(const Json& j) { return j.get<std::vector<int>>(); }

Json exponents_to_json(const PowerProduct& t) { return t.exponents(); }

std::vector<PowerProduct> terms_from_json(const Json& j) {
    std::vector<PowerProduct> out;
    for (const auto& e : j) out.emplace_back(exponents_from_json(e));
    return out;
}

Json terms_to_json(const std::vector<PowerProduct>& terms) {
    Json out = Json::array();
    for (const auto& t : terms) out.push_back(exponents_to_json(t));
    return out;
}

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string magnitude_text(double magnitude, int digits) {
    std::string s = fixed(magnitude, digits);
    if (s == "0" && magnitude != 0.0) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", std::max(digits, 1), magnitude);
        s = buf;
    }
    return s;
}

std::string short_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", value);
    return buf;
}

// Joins "(sign, magnitude, term)" pieces into "a - b y + c".
std::string join_terms(const std::vector<std::tuple<bool, std::string, std::string>>& pieces) {
    std::string out;
    for (const auto& [negative, magnitude, term] : pieces) {
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        if (term == "1") {
            out += magnitude;
        } else if (magnitude == "1") {
            out += term;
        } else {
            out += magnitude + " " + term;
        }
    }
    return out.empty() ? "0" : out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

// ---------------------------------------------------------------------------
// Input

PointInput read_points_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const auto content = trim(line);
        if (content.empty() || content.front() == '#') continue;
        std::vector<std::string> fields;
        bool numeric = true;
        for (auto f : split(content, ',')) {
            numeric = numeric && to_double(f).has_value();
            fields.emplace_back(f);
        }
        if (first && !numeric) {
            first = false;
            continue;  // header
        }
        first = false;
        rows.push_back(std::move(fields));
    }
    return from_rows(rows);
}

PointInput read_points_json(std::istream& in) {
    const Json doc = Json::parse(in);
    if (!doc.contains("points") || !doc["points"].is_array()) {
        throw std::invalid_argument("JSON input needs a \"points\" array");
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : doc["points"]) {
        if (!p.is_array()) throw std::invalid_argument("each point must be an array of numbers");
        std::vector<std::string> row;
        for (const auto& c : p) {
            if (c.is_string()) {
                row.push_back(c.get<std::string>());
            } else if (c.is_number()) {
                row.push_back(shortest_decimal(c.get<double>()));
            } else {
                throw std::invalid_argument("point coordinates must be numbers");
            }
        }
        rows.push_back(std::move(row));
    }
    PointInput input = from_rows(rows);
    if (doc.contains("tolerance")) {
        const auto tol = doc["tolerance"].get<std::vector<double>>();
        input.tolerance = Eigen::Map<const Eigen::VectorXd>(tol.data(), static_cast<Eigen::Index>(tol.size()));
    }
    return input;
}

PointInput load_points(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return path.extension() == ".json" ? read_points_json(in) : read_points_csv(in);
}

Eigen::VectorXd parse_tolerance(std::string_view text, Eigen::Index dimension) {
    const auto fields = split(trim(text), ',');
    std::vector<double> values;
    for (auto f : fields) {
        const auto v = to_double(f);
        if (!v || !std::isfinite(*v) || *v < 0.0) {
            throw std::invalid_argument("bad tolerance value '" + std::string(f) + "'");
        }
        values.push_back(*v);
    }
    if (values.size() == 1) return Eigen::VectorXd::Constant(dimension, values.front());
    if (static_cast<Eigen::Index>(values.size()) != dimension) {
        throw std::invalid_argument("tolerance needs 1 or " + std::to_string(dimension) + " values");
    }
    return Eigen::Map<const Eigen::VectorXd>(values.data(), dimension);
}

RationalPointSet to_rational(const PointInput& input) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : input.literals) {
        std::vector<Rational> row;
        for (const auto& c : r) row.push_back(parse_rational(c));
        rows.push_back(std::move(row));
    }
    return RationalPointSet(std::move(rows));
}

std::string shortest_decimal(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw std::runtime_error("cannot format number");
    return std::string(buf, ptr);
}

std::string to_display_string(const Rational& q) {
    mpz_class den = q.get_den();
    int twos = 0;
    int fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1) return to_string(q);
    const int places = std::max(twos, fives);
    if (places == 0) return q.get_num().get_str();

    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    const mpz_class scaled = abs(q.get_num()) * scale / q.get_den();
    std::string digits = scaled.get_str();
    if (digits.size() <= static_cast<std::size_t>(places)) {
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    return (q < 0 ? "-" : "") + digits;
}

// ---------------------------------------------------------------------------
// JSON

Json to_json(const NbmResult& result, bool include_steps) {
    const auto& ordering = result.order_ideal.ordering();
    const VariableNames names(ordering.dimension());
    Json j;
    j["ordering"] = to_string(ordering, names);
    j["dimension"] = ordering.dimension();
    j["order_ideal"] = terms_to_json(result.order_ideal.terms());
    Json polys = Json::array();
    for (const auto& g : result.polys) {
        Json p;
        p["leading_term"] = exponents_to_json(g.leading_term);
        p["support"] = terms_to_json(g.support);
        p["coefficients"] = g.coefficients;
        p["residual_norm"] = g.residual_norm;
        p["score"] = g.score;
        p["degree"] = g.degree;
        polys.push_back(std::move(p));
    }
    j["polynomials"] = std::move(polys);
    Json steps = Json::array();
    if (include_steps) {
        for (const auto& s : result.steps) {
            Json step;
            step["candidate"] = exponents_to_json(s.candidate);
            step["residual"] = s.residual;
            step["bound"] = s.bound;
            step["noise_floor"] = s.noise_floor;
            step["dependent"] = s.dependent;
            steps.push_back(std::move(step));
        }
    }
    j["steps"] = std::move(steps);
    const auto& d = result.diagnostics;
    j["diagnostics"] = {{"coordinates_in_unit_box", d.coordinates_in_unit_box},
                        {"well_separated", d.well_separated},
                        {"quotient_basis", d.quotient_basis},
                        {"warnings", d.warnings}};
    return j;
}

NbmResult nbm_result_from_json(const Json& report) {
    const auto n = report.at("dimension").get<std::size_t>();
    const VariableNames names(n);
    const TermOrdering ordering = parse_ordering(report.at("ordering").get<std::string>(), names);
    NbmResult result{OrderIdeal(terms_from_json(report.at("order_ideal")), ordering), {}, {}, {}};
    for (const auto& p : report.at("polynomials")) {
        AlmostVanishingPoly g;
        g.leading_term = PowerProduct(exponents_from_json(p.at("leading_term")));
        g.support = terms_from_json(p.at("support"));
        g.coefficients = p.at("coefficients").get<std::vector<double>>();
        g.residual_norm = p.at("residual_norm").get<double>();
        g.score = p.at("score").get<double>();
        g.degree = p.at("degree").get<int>();
        result.polys.push_back(std::move(g));
    }
    for (const auto& s : report.at("steps")) {
        result.steps.push_back({PowerProduct(exponents_from_json(s.at("candidate"))),
                                s.at("residual").get<std::vector<double>>(),
                                s.at("bound").get<std::vector<double>>(),
                                s.at("noise_floor").get<double>(), s.at("dependent").get<bool>()});
    }
    const auto& d = report.at("diagnostics");
    result.diagnostics.coordinates_in_unit_box = d.at("coordinates_in_unit_box").get<bool>();
    result.diagnostics.well_separated = d.at("well_separated").get<bool>();
    result.diagnostics.quotient_basis = d.at("quotient_basis").get<bool>();
    result.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
    return result;
}

Json to_json(const ExactBasis& basis, const VariableNames& names) {
    Json j;
    j["ordering"] = to_string(basis.order_ideal.ordering(), names);
    j["order_ideal"] = terms_to_json(basis.order_ideal.terms());
    Json polys = Json::array();
    for (const auto& g : basis.polys) {
        Json p;
        p["leading_term"] = exponents_to_json(g.leading_term);
        p["support"] = terms_to_json(g.support);
        Json coeffs = Json::array();
        for (const auto& c : g.coefficients) coeffs.push_back(to_string(c));
        p["coefficients"] = std::move(coeffs);
        p["text"] = format_polynomial(g, names);
        polys.push_back(std::move(p));
    }
    j["polynomials"] = std::move(polys);
    return j;
}

Json to_json(const StabilityReport& report) {
    Json decades = Json::array();
    for (const auto& [decade, count] : report.margins.acceptance_decades) {
        decades.push_back({{"decade", decade}, {"count", count}});
    }
    Json j;
    j["trials"] = report.trials;
    j["rank_failures"] = report.rank_failures;
    j["min_smallest_singular_value"] = report.min_smallest_singular_value;
    j["min_relative_singular_value"] = report.min_relative_singular_value;
    j["margins"] = {{"accepted", report.margins.accepted},
                    {"rejected", report.margins.rejected},
                    {"smallest_acceptance_margin", report.margins.smallest_acceptance_margin},
                    {"largest_rejection_margin", report.margins.largest_rejection_margin},
                    {"acceptance_decades", std::move(decades)}};
    return j;
}

Json to_json(const P1Report& report, const VariableNames& names) {
    Json j;
    j["skipped"] = report.skipped;
    if (report.skipped) j["notice"] = report.notice;
    j["passed"] = report.passed();
    Json entries = Json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"leading_term", to_string(e.leading_term, names)},
                           {"score", e.score},
                           {"bound", e.bound},
                           {"worst_perturbed_score", e.worst_perturbed_score},
                           {"perturbed_bound", e.perturbed_bound},
                           {"holds", e.holds}});
    }
    j["entries"] = std::move(entries);
    return j;
}

Json to_json(const P3Report& report, const VariableNames& names) {
    Json j;
    j["skipped"] = report.skipped;
    if (report.skipped) j["notice"] = report.notice;
    j["passed"] = report.passed();
    j["condition_number"] = report.condition_number;
    Json entries = Json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"leading_term", to_string(e.leading_term, names)},
                           {"relative_distance", e.relative_distance},
                           {"bound", e.bound},
                           {"holds", e.holds}});
    }
    j["entries"] = std::move(entries);
    return j;
}

Json to_json(const ConvergenceReport& report) {
    return {{"scales", report.scales},
            {"errors", report.errors},
            {"ratios", report.ratios},
            {"exact", report.exact},
            {"quadratic", report.quadratic}};
}

// ---------------------------------------------------------------------------
// Text

std::string format_polynomial(const std::vector<PowerProduct>& support,
                              const std::vector<double>& coefficients, const VariableNames& names,
                              int digits) {
    if (support.size() != coefficients.size()) {
        throw std::invalid_argument("support and coefficients differ in length");
    }
    std::vector<std::tuple<bool, std::string, std::string>> pieces;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const double c = coefficients[i];
        if (c == 0.0) continue;
        pieces.emplace_back(c < 0.0, magnitude_text(std::abs(c), digits), to_string(support[i], names));
    }
    return join_terms(pieces);
}

std::string format_polynomial(const ExactPolynomial& g, const VariableNames& names) {
    std::vector<std::tuple<bool, std::string, std::string>> pieces;
    for (std::size_t i = 0; i < g.support.size(); ++i) {
        const Rational& c = g.coefficients[i];
        if (c == 0) continue;
        pieces.emplace_back(c < 0, to_display_string(abs(c)), to_string(g.support[i], names));
    }
    return join_terms(pieces);
}

std::string format_terms(const std::vector<PowerProduct>& terms, const VariableNames& names) {
    std::string out = "{";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ", ";
        out += to_string(terms[i], names);
    }
    return out + "}";
}

std::string format_text(const NbmResult& result, const VariableNames& names, int digits,
                        bool step_log) {
    std::ostringstream out;
    out << "ordering: " << to_string(result.order_ideal.ordering(), names) << "\n";
    out << "O = " << format_terms(result.order_ideal.terms(), names) << "\n";
    out << "G:\n";
    for (std::size_t i = 0; i < result.polys.size(); ++i) {
        const auto& g = result.polys[i];
        out << "  g" << i + 1 << " = " << format_polynomial(g.support, g.coefficients, names, digits)
            << "    score = " << short_number(g.score) << "\n";
    }
    const auto& d = result.diagnostics;
    out << "diagnostics: coordinates in [-1,1]: " << yes_no(d.coordinates_in_unit_box)
        << "; well separated: " << yes_no(d.well_separated)
        << "; quotient basis (#O = s): " << yes_no(d.quotient_basis) << "\n";
    for (const auto& w : d.warnings) out << "warning: " << w << "\n";
    if (step_log) {
        out << "steps:\n";
        for (const auto& s : result.steps) {
            out << "  " << to_string(s.candidate, names) << ": "
                << (s.dependent ? "dependent" : "independent") << "\n    |rho|  =";
            for (double r : s.residual) out << " " << short_number(std::abs(r));
            out << "\n    bound  =";
            for (double b : s.bound) out << " " << short_number(b);
            out << "\n";
        }
    }
    return out.str();
}

std::string format_text(const ExactBasis& basis, const VariableNames& names) {
    std::ostringstream out;
    out << "ordering: " << to_string(basis.order_ideal.ordering(), names) << "\n";
    out << "O = " << format_terms(basis.order_ideal.terms(), names) << "\n";
    out << "GB:\n";
    for (const auto& g : basis.polys) out << "  " << format_polynomial(g, names) << "\n";
    return out.str();
}

}  // namespace nbm
