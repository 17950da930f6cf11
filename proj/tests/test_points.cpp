#include <doctest.h>

#include "fixtures.hpp"
#include "nbm/points.hpp"

using namespace nbm;
using fixtures::rows;
using fixtures::vec;

TEST_CASE("point set validation") {
    CHECK_THROWS(EmpiricalPointSet(Eigen::MatrixXd(0, 2), vec({0.1, 0.1})));
    CHECK_THROWS(EmpiricalPointSet(rows({{1, 2}}), vec({0.1})));
    CHECK_THROWS(EmpiricalPointSet(rows({{1, 2}}), vec({0.1, -0.1})));
    CHECK_THROWS(EmpiricalPointSet(rows({{1, NAN}}), vec({0.1, 0.1})));
    CHECK_NOTHROW(EmpiricalPointSet(rows({{1, 2}}), vec({0.0, 0.0})));
}

TEST_CASE("separation and unit box") {
    const EmpiricalPointSet close(rows({{0, 0}, {0.1, 0.1}, {1, 0}}), vec({0.06, 0.06}));
    CHECK(close.separation_violations() == std::vector<std::pair<Eigen::Index, Eigen::Index>>{{0, 1}});
    CHECK(fixtures::nearly_aligned().well_separated());
    CHECK_FALSE(fixtures::tilted_square().in_unit_box());
    CHECK(fixtures::tilted_square().scaled(vec({0.5, 0.5})).in_unit_box());
}

TEST_CASE("scaling and translation carry the tolerance") {
    const auto x = fixtures::nearly_aligned();
    const auto s = x.scaled(vec({2, -4}));
    CHECK(s.tolerance()(0) == doctest::Approx(0.30));
    CHECK(s.tolerance()(1) == 0.0);
    CHECK(s.coordinates()(2, 1) == -12.0);
    const auto t = x.translated(vec({-3, -2}));
    CHECK(t.coordinates()(0, 0) == -2.0);
    CHECK(t.tolerance() == x.tolerance());
}

TEST_CASE("evaluation matrix of the tilted square on {1, y, x}") {
    const std::vector<PowerProduct> terms{PowerProduct({0, 0}), PowerProduct({0, 1}), PowerProduct({1, 0})};
    const auto m = eval_matrix(terms, fixtures::tilted_square());
    const Eigen::MatrixXd expected =
        rows({{1, 1.1, 1.1}, {1, -1.1, 0.9}, {1, 0.9, -0.9}, {1, -0.9, -1.1}});
    CHECK(m.entries == expected);
    CHECK(m.column_terms == terms);
}

TEST_CASE("evaluation of power products and partials") {
    const auto x = fixtures::nearly_aligned();
    CHECK(eval_vector(PowerProduct({2, 1}), x) == vec({1, 18, 5.1 * 5.1 * 3}));
    CHECK(eval_vector(formal_partial(PowerProduct({2, 1}), 0), x) == vec({2, 12, 2 * 5.1 * 3}));
    CHECK(eval_vector(formal_partial(PowerProduct({0, 1}), 0), x) == vec({0, 0, 0}));
    const std::vector<PowerProduct> terms{PowerProduct({0, 0}), PowerProduct({0, 2})};
    CHECK(eval_partial_matrix(terms, 1, x) == rows({{0, 2}, {0, 4}, {0, 6}}));
    CHECK_THROWS(eval_vector(PowerProduct({1, 0, 0}), x));
}

TEST_CASE("admissibility is strict except for zero offsets") {
    const auto x = fixtures::nearly_aligned();
    PerturbationSample ok(rows({{0.149, 0}, {-0.1, 0}, {0, 0}}));
    CHECK(ok.admissible_for(x));
    PerturbationSample edge(rows({{0.15, 0}, {0, 0}, {0, 0}}));
    CHECK_FALSE(edge.admissible_for(x));
    PerturbationSample moves_y(rows({{0, 1e-12}, {0, 0}, {0, 0}}));
    CHECK_FALSE(moves_y.admissible_for(x));
    CHECK_THROWS(perturb(x, edge));
    CHECK(perturb(x, ok).coordinates()(0, 0) == doctest::Approx(1.149));
}

TEST_CASE("sampling is admissible and reproducible") {
    const auto x = fixtures::hyperbola_circle(0.018);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto e = sample_admissible(x, seed);
        CHECK(e.admissible_for(x));
    }
    CHECK(sample_admissible(x, 3).offsets() == sample_admissible(x, 3).offsets());
    CHECK(sample_admissible(x, 3).offsets() != sample_admissible(x, 4).offsets());
    CHECK(sample_admissible(fixtures::nearly_aligned(), 9).column(1).isZero());
}
