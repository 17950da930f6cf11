#include <doctest.h>

#include "fixtures.hpp"
#include "nbm/verify.hpp"

using namespace nbm;
using fixtures::rows;
using fixtures::vec;

namespace {

const TermOrdering kDeglex = TermOrdering::deglex(2);

OrderIdeal ideal(std::initializer_list<std::vector<int>> list) {
    std::vector<PowerProduct> t;
    for (const auto& e : list) t.emplace_back(e);
    return OrderIdeal(std::move(t), kDeglex);
}

}  // namespace

TEST_CASE("powers of two") {
    CHECK(is_power_of_two(1.0));
    CHECK(is_power_of_two(0.125));
    CHECK(is_power_of_two(-8.0));
    CHECK_FALSE(is_power_of_two(3.0));
    CHECK_FALSE(is_power_of_two(0.0));
    CHECK_FALSE(is_power_of_two(0.1));
}

TEST_CASE("scaling invariance on the golden examples") {
    CHECK(check_scaling_invariance(fixtures::nearly_aligned(), vec({1, 1}), kDeglex));
    const auto r = scaling_invariance(fixtures::nearly_aligned(), vec({2, 4}), kDeglex);
    CHECK(r.same_order_ideal);
    CHECK(r.transformed.same_terms(ideal({{0, 0}, {0, 1}, {0, 2}})));
    CHECK(check_scaling_invariance(fixtures::tilted_square(), vec({0.5, 0.5}), kDeglex));
    CHECK_THROWS(scaling_invariance(fixtures::nearly_aligned(), vec({3, 1}), kDeglex));
    CHECK_THROWS(scaling_invariance(fixtures::nearly_aligned(), vec({0, 1}), kDeglex, InvarianceMode::Fuzzy));
    CHECK(check_scaling_invariance(fixtures::nearly_aligned(), vec({3, 1.7}), kDeglex, InvarianceMode::Fuzzy));
}

TEST_CASE("translation invariance on the golden examples") {
    CHECK(check_translation_invariance(fixtures::nearly_aligned(), vec({0, 0}), kDeglex));
    const auto r = translation_invariance(fixtures::nearly_aligned(), vec({-3, -2}), kDeglex);
    CHECK(r.same_order_ideal);
    CHECK(r.transformed.same_terms(ideal({{0, 0}, {0, 1}, {0, 2}})));
    const auto r63 = translation_invariance(fixtures::hyperbola_circle(0.018), vec({1, 1}), kDeglex);
    CHECK(r63.same_order_ideal);
    CHECK(r63.transformed.same_terms(ideal({{0, 0}, {0, 1}, {1, 0}, {0, 2}, {0, 3}})));
    CHECK_THROWS(translation_invariance(fixtures::nearly_aligned(), vec({1e-17, 0}), kDeglex));
}

TEST_CASE("randomised invariance suite") {
    for (const auto& x : {fixtures::nearly_aligned(), fixtures::hyperbola_circle(0.018), fixtures::tilted_square()}) {
        const auto r = invariance_suite(x, kDeglex, 5, 3);
        CHECK(r.scalings == 5);
        CHECK(r.translations == 5);
        CHECK(r.nonzero_translations >= 3);
        CHECK(r.passed());
    }
}

TEST_CASE("unit box transform") {
    for (const auto& x : {fixtures::nearly_aligned(), fixtures::hyperbola_circle(0.001), fixtures::tilted_square(),
                          fixtures::circle()}) {
        const auto tr = unit_box_transform(x);
        const auto boxed = tr.apply(x);
        CHECK(boxed.in_unit_box());
        for (Eigen::Index k = 0; k < x.dimension(); ++k) CHECK(is_power_of_two(tr.factors(k)));
        // undo exactly
        const Eigen::MatrixXd back =
            (boxed.coordinates() * tr.factors.cwiseInverse().asDiagonal()).rowwise() - tr.shift.transpose();
        CHECK(back == x.coordinates());
        CHECK(run_nbm(boxed, kDeglex).order_ideal.same_terms(run_nbm(x, kDeglex).order_ideal));
    }
}

TEST_CASE("stability with zero tolerance is the unperturbed matrix") {
    const auto x = fixtures::nearly_aligned(0, 0);
    const auto o = ideal({{0, 0}, {0, 1}, {0, 2}});
    const auto r = monte_carlo_stability(x, o, 20, 1);
    CHECK(r.trials == 20);
    CHECK(r.rank_failures == 0);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(eval_matrix(o.terms(), x).entries);
    CHECK(r.min_smallest_singular_value == doctest::Approx(svd.singularValues().minCoeff()));
}

TEST_CASE("quotient basis of the nearly aligned points is stable in 10^4 trials") {
    const auto r = monte_carlo_stability(fixtures::nearly_aligned(), ideal({{0, 0}, {0, 1}, {0, 2}}), 10000, 7);
    CHECK(r.rank_failures == 0);
    CHECK(r.min_smallest_singular_value > 0.1);
}

TEST_CASE("basis {1, y, x} of the nearly aligned points approaches singularity") {
    // Moving 5.1 to 5 aligns the points; dense sampling gets close to it.
    const auto x = fixtures::nearly_aligned();
    const auto o = ideal({{0, 0}, {0, 1}, {1, 0}});
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(eval_matrix(o.terms(), x).entries);
    const double unperturbed = svd.singularValues().minCoeff();
    const auto r = monte_carlo_stability(x, o, 10000, 1);
    CHECK(r.min_smallest_singular_value < 0.05 * unperturbed);
}

TEST_CASE("margin summary from a step log") {
    const auto res = run_nbm(fixtures::nearly_aligned(), kDeglex);
    const auto m = summarize_margins(res.steps);
    CHECK(m.accepted == 3);
    CHECK(m.rejected == 2);
    CHECK(m.smallest_acceptance_margin == doctest::Approx(2.0 / 3.0));
    CHECK(m.largest_rejection_margin < 1e-12);
}

TEST_CASE("P1 is gated on the unit box") {
    const auto r = check_p1(run_nbm(fixtures::tilted_square(), kDeglex), fixtures::tilted_square());
    CHECK(r.skipped);
    CHECK_FALSE(r.notice.empty());
    CHECK(r.passed());
}

TEST_CASE("P1 on the halved tilted square and on the circle") {
    const auto half = fixtures::tilted_square().scaled(vec({0.5, 0.5}));
    CHECK(half.tolerance()(0) == doctest::Approx(0.06));
    const auto r = check_p1(run_nbm(half, kDeglex), half, 200, 3);
    CHECK_FALSE(r.skipped);
    CHECK(r.entries.size() == 2);
    CHECK(r.passed());
    const auto c = fixtures::circle();
    CHECK(check_p1(run_nbm(c, kDeglex), c, 50, 3).passed());
}

TEST_CASE("P2 on the aligned perturbation") {
    const auto x = fixtures::nearly_aligned();
    const auto g = run_nbm(x, kDeglex).polys;
    const EmpiricalPointSet hat(rows({{59.0 / 60.0, 1}, {91.0 / 30.0, 2}, {61.0 / 12.0, 3}}), x.tolerance());
    CHECK(check_p2_on_zero_set(g, hat, x));
    CHECK_FALSE(check_p2_on_zero_set(g, x, x));
    const EmpiricalPointSet far(rows({{0.8, 1}, {3.0333, 2}, {5.0833, 3}}), x.tolerance());
    CHECK_FALSE(check_p2_on_zero_set(g, far, x));
    CHECK_THROWS(check_p2_on_zero_set(g, EmpiricalPointSet(rows({{1, 1}}), x.tolerance()), x));
}

TEST_CASE("P2 on a three-digit zero set of the tilted square") {
    const auto x = fixtures::tilted_square();
    const auto g = run_nbm(x, kDeglex).polys;
    const EmpiricalPointSet bar(rows({{1.099, 1.099}, {0.899, -1.100}, {-0.899, 0.901}, {-1.099, -0.898}}),
                                x.tolerance());
    CHECK(check_p2_on_zero_set(g, bar, x, 1e-2));
    CHECK_FALSE(check_p2_on_zero_set(g, bar, x, 1e-10));
}

TEST_CASE("P3 distances") {
    const EmpiricalPointSet exact(rows({{0, 0}, {1, 0}, {0, 1}, {2, 3}}), vec({0, 0}));
    const auto r0 = check_p3_border(run_nbm(exact, kDeglex), exact);
    CHECK_FALSE(r0.skipped);
    for (const auto& e : r0.entries) CHECK(e.relative_distance < 1e-12);

    // g1 of the nearly aligned points against the interpolant of x on {1, y, y^2}.
    const auto x = fixtures::nearly_aligned();
    const auto res = run_nbm(x, kDeglex);
    const auto r = check_p3_border(res, x);
    REQUIRE(r.entries.size() == 2);
    const Eigen::MatrixXd V = rows({{1, 1, 1}, {1, 2, 4}, {1, 3, 9}});
    const Eigen::VectorXd beta = V.fullPivLu().solve(vec({1, 3, 5.1}));
    // c_b in sigma-descending order: x, y^2, y, 1
    const Eigen::VectorXd cb = vec({1, -beta(2), -beta(1), -beta(0)});
    const Eigen::VectorXd c = vec({1, 0, res.polys[0].coefficients[1], res.polys[0].coefficients[2]});
    CHECK(r.entries[0].relative_distance == doctest::Approx((cb - c).norm() / c.norm()).epsilon(1e-9));
    CHECK(r.passed());

    const auto x64 = fixtures::tilted_square();
    CHECK(check_p3_border(run_nbm(x64, kDeglex), x64).passed());
    const auto x63 = fixtures::hyperbola_circle(0.018);
    CHECK(check_p3_border(run_nbm(x63, kDeglex), x63).passed());
}

TEST_CASE("P3 is skipped when #O < s") {
    const auto c = fixtures::circle();
    auto res = run_nbm(c, kDeglex);
    if (res.order_ideal.size() < 20) CHECK(check_p3_border(res, c).skipped);
}

TEST_CASE("dependence oracle on the nearly aligned points") {
    const auto x = fixtures::nearly_aligned();
    const auto zero = dependence_oracle(x, ideal({{0, 0}, {0, 1}, {0, 2}}), PowerProduct({0, 3}), 5);
    CHECK(zero.minimum_residual < 1e-12);
    CHECK(zero.evaluations == 1);

    const auto dep = dependence_oracle(x, ideal({{0, 0}, {0, 1}}), PowerProduct({1, 0}), 9);
    CHECK(dep.minimum_residual < 1e-6);
    CHECK(dep.best.admissible_for(x));

    const auto indep = dependence_oracle(x, ideal({{0, 0}}), PowerProduct({0, 1}), 9);
    CHECK(indep.minimum_residual >= std::sqrt(2.0) - 1e-12);

    CHECK_THROWS(dependence_oracle(fixtures::circle(), ideal({{0, 0}}), PowerProduct({0, 1}), 3));
}

TEST_CASE("dependence oracle agrees with every NBM step") {
    const auto x = fixtures::nearly_aligned();
    const auto res = run_nbm(x, kDeglex);
    std::vector<PowerProduct> before;
    for (const auto& step : res.steps) {
        const OrderIdeal o(before, kDeglex);
        const auto r = dependence_oracle(x, o, step.candidate, 9);
        const double bound_scale = *std::max_element(step.bound.begin(), step.bound.end());
        if (step.dependent) {
            CHECK(r.minimum_residual <= bound_scale + 1e-12);
        } else {
            CHECK(r.minimum_residual > bound_scale);
            before.push_back(step.candidate);
        }
    }
}

TEST_CASE("first-order remainder decays quadratically for generic data") {
    const auto x = fixtures::nearly_aligned(0.15, 0.15);
    const auto o = ideal({{0, 0}, {0, 1}});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = first_order_convergence(x, o, PowerProduct({1, 0}), seed);
        CAPTURE(seed);
        CAPTURE(r.ratios[0]);
        CAPTURE(r.ratios[1]);
        CHECK_FALSE(r.exact);
        CHECK(r.quadratic);
    }
}

TEST_CASE("first-order predictor is exact when nothing moves") {
    const auto r = first_order_convergence(fixtures::nearly_aligned(0, 0), ideal({{0, 0}, {0, 1}}), PowerProduct({1, 0}), 1);
    CHECK(r.exact);
    CHECK_FALSE(r.quadratic);
    for (double e : r.errors) CHECK(e == 0.0);
}

TEST_CASE("first-order predictor is exact when only x moves") {
    // eps_y = 0 leaves M_O untouched and d/dx of {1, y} vanishes, so rho and
    // alpha are affine in the x-offsets and the remainder is identically 0.
    const auto r = first_order_convergence(fixtures::nearly_aligned(), ideal({{0, 0}, {0, 1}}), PowerProduct({1, 0}), 1);
    CHECK(r.exact);
}
