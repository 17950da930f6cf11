#include "nbm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "nbm/numerics.hpp"

namespace nbm {

namespace {

constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

double step_margin(const StepRecord& step) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < step.residual.size(); ++i) {
        m = std::max(m, std::abs(step.residual[i]) - step.bound[i]);
    }
    return m;
}

double relative_margin(const StepRecord& step) {
    double scale = 0.0;
    for (std::size_t i = 0; i < step.residual.size(); ++i) {
        scale = std::max({scale, std::abs(step.residual[i]), step.bound[i]});
    }
    return scale == 0.0 ? 0.0 : std::abs(step_margin(step)) / scale;
}

double smallest_relative_margin(std::span<const StepRecord> steps) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : steps) {
        // The unit step has no competitor and zero bound.
        if (s.candidate.is_one()) continue;
        m = std::min(m, relative_margin(s));
    }
    return m;
}

InvarianceReport compare_runs(const EmpiricalPointSet& original, const EmpiricalPointSet& transformed,
                              const TermOrdering& ordering) {
    const NbmResult a = run_nbm(original, ordering);
    const NbmResult b = run_nbm(transformed, ordering);
    InvarianceReport report{a.order_ideal.same_terms(b.order_ideal), a.order_ideal, b.order_ideal, 0.0};
    report.smallest_relative_margin =
        std::min(smallest_relative_margin(a.steps), smallest_relative_margin(b.steps));
    return report;
}

bool adds_exactly(const Eigen::VectorXd& column, double v) {
    for (Eigen::Index i = 0; i < column.size(); ++i) {
        const double moved = column(i) + v;
        if (moved - v != column(i) || moved - column(i) != v) return false;
    }
    return true;
}

double sum_tolerance(const EmpiricalPointSet& points) { return points.tolerance().sum(); }

Eigen::VectorXd solve_residual(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                               const PowerProduct& t, Eigen::VectorXd* alpha = nullptr) {
    const EvaluationMatrix M = eval_matrix(ideal.terms(), points);
    const LeastSquaresSolution sol = least_squares(M.entries, eval_vector(t, points));
    if (alpha) *alpha = sol.alpha;
    return sol.residual;
}

}  // namespace

// ---------------------------------------------------------------------------
// Invariance

bool is_power_of_two(double value) {
    if (value == 0.0 || !std::isfinite(value)) return false;
    int exponent = 0;
    return std::frexp(std::abs(value), &exponent) == 0.5;
}

InvarianceReport scaling_invariance(const EmpiricalPointSet& points, const Eigen::VectorXd& factors,
                                    const TermOrdering& ordering, InvarianceMode mode) {
    if (factors.size() != points.dimension()) throw std::invalid_argument("scale vector has wrong length");
    for (Eigen::Index k = 0; k < factors.size(); ++k) {
        if (factors(k) == 0.0) throw std::invalid_argument("scale factor must be nonzero");
        if (mode == InvarianceMode::Exact && !is_power_of_two(factors(k))) {
            throw std::invalid_argument("exact scaling requires power-of-two factors");
        }
    }
    return compare_runs(points, points.scaled(factors), ordering);
}

InvarianceReport translation_invariance(const EmpiricalPointSet& points, const Eigen::VectorXd& shift,
                                        const TermOrdering& ordering, InvarianceMode mode) {
    if (shift.size() != points.dimension()) throw std::invalid_argument("shift vector has wrong length");
    const EmpiricalPointSet moved = points.translated(shift);
    if (mode == InvarianceMode::Exact) {
        bool exact = true;
        for (Eigen::Index k = 0; k < shift.size(); ++k) exact = exact && adds_exactly(points.coordinates().col(k), shift(k));
        if (!exact) throw std::invalid_argument("translation is not exactly representable for these points");
    }
    return compare_runs(points, moved, ordering);
}

InvarianceSuiteReport invariance_suite(const EmpiricalPointSet& points, const TermOrdering& ordering,
                                       std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> exponent(-3, 3);
    std::uniform_int_distribution<int> numerator(-32, 32);
    std::uniform_int_distribution<int> denominator_bits(3, 8);
    const auto n = points.dimension();
    InvarianceSuiteReport report;
    report.smallest_relative_margin = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < count; ++i) {
        Eigen::VectorXd d(n);
        for (Eigen::Index k = 0; k < n; ++k) d(k) = std::ldexp(1.0, exponent(rng));
        const auto r = scaling_invariance(points, d, ordering);
        ++report.scalings;
        if (r.same_order_ideal) ++report.scalings_passed;
        report.smallest_relative_margin = std::min(report.smallest_relative_margin, r.smallest_relative_margin);
    }
    for (std::size_t i = 0; i < count; ++i) {
        Eigen::VectorXd v(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            // Redraw until this coordinate shifts exactly; 0 always does.
            const Eigen::VectorXd column = points.coordinates().col(k);
            for (int attempt = 0;; ++attempt) {
                v(k) = attempt < 1000 ? std::ldexp(numerator(rng), -denominator_bits(rng)) : 0.0;
                if (adds_exactly(column, v(k))) break;
            }
        }
        const auto r = translation_invariance(points, v, ordering);
        ++report.translations;
        if (!v.isZero()) ++report.nonzero_translations;
        if (r.same_order_ideal) ++report.translations_passed;
        report.smallest_relative_margin = std::min(report.smallest_relative_margin, r.smallest_relative_margin);
    }
    return report;
}

EmpiricalPointSet UnitBoxTransform::apply(const EmpiricalPointSet& points) const {
    return points.translated(shift).scaled(factors);
}

UnitBoxTransform unit_box_transform(const EmpiricalPointSet& points) {
    const auto n = points.dimension();
    UnitBoxTransform tr{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::VectorXd c = points.coordinates().col(k);
        const double lo = c.minCoeff();
        const double hi = c.maxCoeff();
        // Centre on a coarse dyadic near the midpoint; keep it only if every
        // coordinate shifts exactly.
        const double half = 0.5 * (hi - lo);
        if (half > 0.0) {
            const int e = std::ilogb(half) - 3;
            const double v = -std::ldexp(std::nearbyint(std::ldexp(0.5 * (lo + hi), -e)), e);
            if (adds_exactly(c, v)) tr.shift(k) = v + 0.0;
        }
        const double reach = (c.array() + tr.shift(k)).abs().maxCoeff();
        if (reach > 0.0) {
            int e = 0;
            std::frexp(reach, &e);  // reach in [2^(e-1), 2^e)
            tr.factors(k) = std::ldexp(1.0, -e);
        }
    }
    return tr;
}

bool check_scaling_invariance(const EmpiricalPointSet& points, const Eigen::VectorXd& factors,
                              const TermOrdering& ordering, InvarianceMode mode) {
    return scaling_invariance(points, factors, ordering, mode).same_order_ideal;
}

bool check_translation_invariance(const EmpiricalPointSet& points, const Eigen::VectorXd& shift,
                                  const TermOrdering& ordering, InvarianceMode mode) {
    return translation_invariance(points, shift, ordering, mode).same_order_ideal;
}

// ---------------------------------------------------------------------------
// Stability

MarginSummary summarize_margins(std::span<const StepRecord> steps) {
    MarginSummary out;
    out.smallest_acceptance_margin = std::numeric_limits<double>::infinity();
    out.largest_rejection_margin = -std::numeric_limits<double>::infinity();
    std::map<int, std::size_t> decades;
    for (const auto& s : steps) {
        const double m = step_margin(s);
        if (s.dependent) {
            ++out.rejected;
            out.largest_rejection_margin = std::max(out.largest_rejection_margin, m);
        } else {
            ++out.accepted;
            out.smallest_acceptance_margin = std::min(out.smallest_acceptance_margin, m);
            if (m > 0.0) ++decades[static_cast<int>(std::floor(std::log10(m)))];
        }
    }
    if (out.accepted == 0) out.smallest_acceptance_margin = 0.0;
    if (out.rejected == 0) out.largest_rejection_margin = 0.0;
    out.acceptance_decades.assign(decades.begin(), decades.end());
    return out;
}

StabilityReport monte_carlo_stability(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                      std::size_t trials, std::uint64_t seed,
                                      std::span<const StepRecord> steps) {
    if (trials == 0) throw std::invalid_argument("at least one trial is required");
    StabilityReport report;
    report.trials = trials;
    report.min_smallest_singular_value = std::numeric_limits<double>::infinity();
    report.min_relative_singular_value = std::numeric_limits<double>::infinity();
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const PerturbationSample sample = sample_admissible(points, seed + trial);
        const EmpiricalPointSet moved = perturb(points, sample);
        const Eigen::MatrixXd M = eval_matrix(ideal.terms(), moved).entries;
        if (M.cols() == 0) {
            report.min_smallest_singular_value = 0.0;
            report.min_relative_singular_value = 0.0;
            continue;
        }
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        const auto& sv = svd.singularValues();
        const double smallest = M.cols() > M.rows() ? 0.0 : sv(sv.size() - 1);
        if (M.cols() > M.rows() || !numerically_full_rank(smallest, sv(0), M.rows())) {
            ++report.rank_failures;
        }
        report.min_smallest_singular_value = std::min(report.min_smallest_singular_value, smallest);
        report.min_relative_singular_value =
            std::min(report.min_relative_singular_value, sv(0) > 0.0 ? smallest / sv(0) : 0.0);
    }
    report.margins = summarize_margins(steps);
    return report;
}

// ---------------------------------------------------------------------------
// P1 / P2 / P3

bool P1Report::passed() const {
    return skipped || std::all_of(entries.begin(), entries.end(), [](const P1Entry& e) { return e.holds; });
}

P1Report check_p1(const NbmResult& result, const EmpiricalPointSet& points,
                  std::size_t perturbed_trials, std::uint64_t seed) {
    P1Report report;
    if (!points.in_unit_box()) {
        report.skipped = true;
        report.notice = "P1 skipped: coordinates do not lie in [-1, 1]";
        return report;
    }
    const auto s = static_cast<double>(points.size());
    const double eps_sum = sum_tolerance(points);
    const double roundoff = 100.0 * s * kMachineEps;

    std::vector<EmpiricalPointSet> perturbed;
    for (std::size_t i = 0; i < perturbed_trials; ++i) {
        perturbed.push_back(perturb(points, sample_admissible(points, seed + i)));
    }
    for (const auto& g : result.polys) {
        P1Entry e{g.leading_term};
        const double deg = static_cast<double>(g.degree);
        e.score = score(g, points);
        e.bound = s * deg * eps_sum;
        e.perturbed_bound = 2.0 * s * deg * eps_sum + s * deg * eps_sum * eps_sum;
        e.holds = e.score < e.bound || e.score <= roundoff;
        for (const auto& moved : perturbed) {
            const double sc = score(g, moved);
            e.worst_perturbed_score = std::max(e.worst_perturbed_score, sc);
            if (!(sc < e.perturbed_bound || sc <= roundoff)) e.holds = false;
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

bool check_p2_on_zero_set(std::span<const AlmostVanishingPoly> polys,
                          const EmpiricalPointSet& claimed_zero_set, const EmpiricalPointSet& points,
                          double relative_tolerance) {
    if (claimed_zero_set.size() != points.size() || claimed_zero_set.dimension() != points.dimension()) {
        throw std::invalid_argument("claimed zero set does not match the point set in size");
    }
    const PerturbationSample offsets(claimed_zero_set.coordinates() - points.coordinates());
    if (!offsets.admissible_for(points)) return false;
    for (const auto& g : polys) {
        const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(
            g.coefficients.data(), static_cast<Eigen::Index>(g.coefficients.size()));
        const Eigen::VectorXd values = evaluate(g, claimed_zero_set);
        if (values.cwiseAbs().maxCoeff() > relative_tolerance * c.norm()) return false;
    }
    return true;
}

bool P3Report::passed() const {
    return skipped || std::all_of(entries.begin(), entries.end(), [](const P3Entry& e) { return e.holds; });
}

P3Report check_p3_border(const NbmResult& result, const EmpiricalPointSet& points) {
    P3Report report;
    const OrderIdeal& ideal = result.order_ideal;
    if (static_cast<Eigen::Index>(ideal.size()) != points.size()) {
        report.skipped = true;
        report.notice = "P3 skipped: #O differs from the number of points";
        return report;
    }
    const Eigen::MatrixXd M = eval_matrix(ideal.terms(), points).entries;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (!numerically_full_rank(sv(sv.size() - 1), sv(0), M.rows())) {
        throw RankDeficientError("M_O(X) is singular");
    }
    report.condition_number = sv(0) / sv(sv.size() - 1);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const double eps_sum = sum_tolerance(points);

    for (const auto& g : result.polys) {
        P3Entry e;
        e.leading_term = g.leading_term;
        const Eigen::VectorXd beta = lu.solve(eval_vector(g.leading_term, points));

        // Border polynomial t - sum beta_i t_i over all of O, sigma-descending.
        e.border_support.push_back(g.leading_term);
        e.border_coefficients.push_back(1.0);
        for (Eigen::Index i = beta.size() - 1; i >= 0; --i) {
            e.border_support.push_back(ideal.terms()[static_cast<std::size_t>(i)]);
            e.border_coefficients.push_back(-beta(i));
        }
        double diff2 = 0.0;
        double norm2 = 0.0;
        for (std::size_t j = 0; j < e.border_support.size(); ++j) {
            double c = 0.0;
            const auto it = std::find(g.support.begin(), g.support.end(), e.border_support[j]);
            if (it != g.support.end()) c = g.coefficients[static_cast<std::size_t>(it - g.support.begin())];
            diff2 += (e.border_coefficients[j] - c) * (e.border_coefficients[j] - c);
        }
        for (double c : g.coefficients) norm2 += c * c;
        e.relative_distance = std::sqrt(diff2 / norm2);
        e.bound = static_cast<double>(g.degree) * report.condition_number * eps_sum;
        e.holds = e.relative_distance <= e.bound ||
                  e.relative_distance <= 100.0 * report.condition_number * kMachineEps;
        report.entries.push_back(std::move(e));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Dependence oracle

OracleResult dependence_oracle(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                               const PowerProduct& t, std::size_t grid_density) {
    if (grid_density == 0) throw std::invalid_argument("grid density must be positive");
    // Free perturbation coordinates (i, k) with eps_k > 0.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> free;
    for (Eigen::Index k = 0; k < points.dimension(); ++k) {
        if (points.tolerance()(k) == 0.0) continue;
        for (Eigen::Index i = 0; i < points.size(); ++i) free.emplace_back(i, k);
    }
    if (free.size() > kOracleMaxDimensions) {
        throw std::invalid_argument("dependence oracle supports at most 8 perturbed coordinates");
    }

    OracleResult out{0.0, PerturbationSample::zero(points), 0};
    const auto objective = [&](const Eigen::MatrixXd& offsets) {
        ++out.evaluations;
        return solve_residual(shift_unchecked(points, PerturbationSample(offsets)), ideal, t).squaredNorm();
    };

    Eigen::MatrixXd best = Eigen::MatrixXd::Zero(points.size(), points.dimension());
    double best_value = objective(best);
    {
        // Already dependent up to roundoff at E = 0.
        Eigen::VectorXd alpha;
        solve_residual(points, ideal, t, &alpha);
        const double floor =
            residual_noise_floor(eval_matrix(ideal.terms(), points).entries, eval_vector(t, points), alpha);
        if (std::sqrt(best_value) <= floor) best_value = 0.0;
    }

    // Interior grid: cell midpoints eps * (-1 + (2j + 1) / g).
    const std::size_t dims = free.size();
    std::vector<std::size_t> index(dims, 0);
    Eigen::MatrixXd trial = best;
    while (dims > 0 && best_value > 0.0) {
        for (std::size_t d = 0; d < dims; ++d) {
            const auto [i, k] = free[d];
            const double eps = points.tolerance()(k);
            trial(i, k) = eps * (-1.0 + (2.0 * static_cast<double>(index[d]) + 1.0) /
                                            static_cast<double>(grid_density));
        }
        const double v = objective(trial);
        if (v < best_value) {
            best_value = v;
            best = trial;
        }
        std::size_t d = 0;
        while (d < dims && ++index[d] == grid_density) index[d++] = 0;
        if (d == dims) break;
    }

    // Coordinate-wise parabolic refinement inside the open box.
    double step = 1.0 / static_cast<double>(grid_density);
    for (int sweep = 0; sweep < 400 && best_value > 0.0 && step > 1e-13; ++sweep) {
        bool improved = false;
        for (const auto& [i, k] : free) {
            const double eps = points.tolerance()(k);
            const double limit = eps * (1.0 - 1e-9);
            const double h = step * eps;
            const double x0 = best(i, k);
            const auto clamp = [&](double x) { return std::clamp(x, -limit, limit); };
            const auto at = [&](double x) {
                Eigen::MatrixXd m = best;
                m(i, k) = x;
                return objective(m);
            };
            const double xm = clamp(x0 - h);
            const double xp = clamp(x0 + h);
            const double fm = at(xm);
            const double fp = at(xp);
            double x_best = fm < fp ? xm : xp;
            double f_best = std::min(fm, fp);
            const double curvature = fp - 2.0 * best_value + fm;
            if (curvature > 0.0) {
                const double xv = clamp(x0 - 0.5 * h * (fp - fm) / curvature);
                const double fv = at(xv);
                if (fv < f_best) {
                    x_best = xv;
                    f_best = fv;
                }
            }
            if (f_best < best_value) {
                best(i, k) = x_best;
                best_value = f_best;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }

    out.minimum_residual = std::sqrt(best_value);
    out.best = PerturbationSample(best);
    return out;
}

// ---------------------------------------------------------------------------
// First-order convergence

ConvergenceReport first_order_convergence(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                          const PowerProduct& t, std::uint64_t seed) {
    ConvergenceReport report;
    const EvaluationMatrix M = eval_matrix(ideal.terms(), points);
    const LeastSquaresSolution sol = least_squares(M.entries, eval_vector(t, points));
    const Eigen::VectorXd& rho = sol.residual;
    const Eigen::VectorXd& alpha = sol.alpha;

    const PerturbationSample direction = sample_admissible(points, seed);
    const double roundoff =
        1e3 * kMachineEps * (1.0 + rho.norm() + alpha.norm()) * (1.0 + M.entries.norm());

    bool all_tiny = true;
    for (double h : {1.0, 0.5, 0.25}) {
        const PerturbationSample sample = direction.scaled(h);
        Eigen::VectorXd alpha_moved;
        const Eigen::VectorXd rho_moved = solve_residual(perturb(points, sample), ideal, t, &alpha_moved);
        const FirstOrderDeltas predicted = first_order_deltas(points, ideal, t, sol, sample);
        const double err = std::max((rho_moved - rho - predicted.delta_rho).norm(),
                                    (alpha_moved - alpha - predicted.delta_alpha).norm());
        report.scales.push_back(h);
        report.errors.push_back(err);
        all_tiny = all_tiny && err <= roundoff;
    }
    report.exact = all_tiny;
    report.quadratic = !all_tiny;
    for (std::size_t i = 0; i + 1 < report.errors.size(); ++i) {
        const double r = report.errors[i + 1] > 0.0 ? report.errors[i] / report.errors[i + 1]
                                                     : std::numeric_limits<double>::infinity();
        report.ratios.push_back(r);
        report.quadratic = report.quadratic && r >= 3.0 && r <= 5.0;
    }
    return report;
}

}  // namespace nbm
