#ifndef NBM_TEST_FIXTURES_HPP
#define NBM_TEST_FIXTURES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nbm/points.hpp"

namespace fixtures {

inline Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : r) {
        Eigen::Index k = 0;
        for (double v : row) m(i, k++) = v;
        ++i;
    }
    return m;
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

inline nbm::EmpiricalPointSet nearly_aligned(double eps_x = 0.15, double eps_y = 0.0) {
    return {rows({{1, 1}, {3, 2}, {5.1, 3}}), vec({eps_x, eps_y})};
}

inline nbm::EmpiricalPointSet hyperbola_circle(double eps) {
    return {rows({{1, 6}, {2, 3}, {2.449, 2.449}, {3, 2}, {6, 1}}), vec({eps, eps})};
}

inline nbm::EmpiricalPointSet tilted_square(double eps = 0.12) {
    return {rows({{1.1, 1.1}, {0.9, -1.1}, {-0.9, 0.9}, {-1.1, -0.9}}), vec({eps, eps})};
}

// 20 points at angles 2 pi j / 20 on the unit circle, each coordinate moved by
// uniform noise in (-1e-4, 1e-4).
inline nbm::EmpiricalPointSet circle(std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-1e-4, 1e-4);
    Eigen::MatrixXd c(20, 2);
    for (int j = 0; j < 20; ++j) {
        const double a = 2.0 * std::numbers::pi * j / 20.0;
        c(j, 0) = std::cos(a) + noise(rng);
        c(j, 1) = std::sin(a) + noise(rng);
    }
    return {c, vec({1e-4, 1e-4})};
}

}  // namespace fixtures

#endif  // NBM_TEST_FIXTURES_HPP
