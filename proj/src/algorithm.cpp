#include "nbm/algorithm.hpp"

#include <algorithm>
#include <limits>

namespace nbm {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd coefficient_vector(const AlmostVanishingPoly& g) {
    return Eigen::Map<const Eigen::VectorXd>(g.coefficients.data(),
                                             static_cast<Eigen::Index>(g.coefficients.size()));
}

AlmostVanishingPoly make_poly(const PowerProduct& t, const OrderIdeal& ideal,
                              const LeastSquaresSolution& sol) {
    AlmostVanishingPoly g;
    g.leading_term = t;
    g.degree = t.degree();
    g.support.push_back(t);
    g.coefficients.push_back(1.0);
    // O is sigma-ascending; the support runs sigma-descending.
    for (Eigen::Index i = static_cast<Eigen::Index>(ideal.size()) - 1; i >= 0; --i) {
        const auto& term = ideal.terms()[static_cast<std::size_t>(i)];
        g.support.push_back(term);
        g.coefficients.push_back(-sol.alpha(i));
        g.degree = std::max(g.degree, term.degree());
    }
    g.residual_norm = sol.residual.norm();
    g.score = g.residual_norm / coefficient_vector(g).norm();
    return g;
}

}  // namespace

std::vector<PowerProduct> NbmResult::leading_terms() const {
    std::vector<PowerProduct> out;
    out.reserve(polys.size());
    for (const auto& g : polys) out.push_back(g.leading_term);
    return out;
}

double residual_noise_floor(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& alpha) {
    const double scale = b.norm() + (M.size() > 0 ? M.norm() * alpha.norm() : 0.0);
    return 10.0 * static_cast<double>(b.size()) * std::numeric_limits<double>::epsilon() * scale;
}

bool is_numerically_dependent(const Eigen::VectorXd& residual, const Eigen::VectorXd& bound,
                              double noise_floor) {
    if (residual.size() != bound.size()) {
        throw std::invalid_argument("residual and bound have different lengths");
    }
    if (residual.norm() <= noise_floor) return true;
    for (Eigen::Index i = 0; i < residual.size(); ++i) {
        const double r = std::abs(residual(i));
        if (r > bound(i) && r > noise_floor) return false;
    }
    return true;
}

NbmResult run_nbm(const EmpiricalPointSet& points, const TermOrdering& ordering,
                  const NbmOptions& options) {
    if (static_cast<Eigen::Index>(ordering.dimension()) != points.dimension()) {
        throw std::invalid_argument("term ordering dimension does not match point set");
    }

    NbmResult result{OrderIdeal(ordering), {}, {}, {}};
    auto& diag = result.diagnostics;
    diag.coordinates_in_unit_box = points.in_unit_box();
    const auto violations = points.separation_violations();
    diag.well_separated = violations.empty();
    if (!violations.empty()) {
        std::string msg = "points are not well separated:";
        for (const auto& [i, j] : violations) {
            msg += " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        }
        if (options.separation == SeparationPolicy::Error) throw std::invalid_argument(msg);
        diag.warnings.push_back(std::move(msg));
    }

    OrderIdeal& ideal = result.order_ideal;
    CandidateFrontier frontier(ordering);
    while (auto candidate = frontier.pop()) {
        const PowerProduct& t = *candidate;
        const EvaluationMatrix M = eval_matrix(ideal.terms(), points);
        const Eigen::VectorXd b = eval_vector(t, points);
        const LeastSquaresSolution sol = least_squares(M.entries, b);
        if (!sol.rank_ok) {
            throw NumericalFault("evaluation matrix of the order ideal lost full rank");
        }
        if (!sol.residual.allFinite() || !sol.alpha.allFinite()) {
            throw NumericalFault("non-finite least-squares solution");
        }
        const DependenceBound bound = dependence_bound(points, ideal, t, sol);
        if (!bound.bound.allFinite()) throw NumericalFault("non-finite dependence bound");

        const double floor = residual_noise_floor(M.entries, b, sol.alpha);
        const bool dependent = is_numerically_dependent(sol.residual, bound.bound, floor);
        result.steps.push_back({t, to_std(sol.residual), to_std(bound.bound), floor, dependent});

        if (dependent) {
            result.polys.push_back(make_poly(t, ideal, sol));
            frontier.rejected(t);
        } else {
            ideal.insert(t);
            frontier.accepted(t, ideal);
        }
    }

    diag.quotient_basis = static_cast<Eigen::Index>(ideal.size()) == points.size();
    return result;
}

Eigen::VectorXd evaluate(const AlmostVanishingPoly& g, const EmpiricalPointSet& points) {
    if (g.support.size() != g.coefficients.size()) {
        throw std::invalid_argument("support and coefficients differ in length");
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(points.size());
    for (std::size_t i = 0; i < g.support.size(); ++i) {
        v += g.coefficients[i] * eval_vector(g.support[i], points);
    }
    return v;
}

double score(const AlmostVanishingPoly& g, const EmpiricalPointSet& points) {
    const double norm_c = coefficient_vector(g).norm();
    if (norm_c == 0.0) throw std::invalid_argument("zero coefficient vector");
    return evaluate(g, points).norm() / norm_c;
}

}  // namespace nbm
