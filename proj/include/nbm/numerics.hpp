#ifndef NBM_NUMERICS_HPP
#define NBM_NUMERICS_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "nbm/monomials.hpp"
#include "nbm/points.hpp"

namespace nbm {

class RankDeficientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Solution of min ||b - M alpha||_2 with residual rho = b - M alpha.
struct LeastSquaresSolution {
    Eigen::VectorXd alpha;
    Eigen::VectorXd residual;
    bool rank_ok = true;
    double smallest_singular_value = 0.0;
    double largest_singular_value = 0.0;
};

// Numerical full column rank: sigma_min > rows * eps_mach * sigma_max.
bool numerically_full_rank(double smallest, double largest, Eigen::Index rows);

// Column-pivoted Householder QR; never forms the normal equations. An empty
// M (k = 0) gives alpha = {} and rho = b. rank_ok is false when M is
// numerically rank deficient, in which case alpha is a basic solution.
LeastSquaresSolution least_squares(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);

// I - M M^+ built from an orthonormal basis of range(M). Throws
// RankDeficientError if M is numerically rank deficient.
Eigen::MatrixXd projector_complement(const Eigen::MatrixXd& M);

// Right-hand side of the numerical dependence test for candidate t against O:
//   bound = |I - M M^+| * sum_k eps_k |d_k t(X) - M_{d_k O}(X) alpha|.
struct DependenceBound {
    Eigen::VectorXd bound;
    // eps_k |d_k t(X) - M_{d_k O}(X) alpha|, one entry per variable, before projection.
    std::vector<Eigen::VectorXd> per_variable_terms;
};

// sol must solve M_O(X) alpha = t(X) with the columns of M in O.terms() order.
DependenceBound dependence_bound(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                 const PowerProduct& t, const LeastSquaresSolution& sol);

// First-order changes of rho and alpha when X moves to X + E, with the
// O(eps^2) remainder dropped.
struct FirstOrderDeltas {
    Eigen::VectorXd delta_rho;
    Eigen::VectorXd delta_alpha;
};

FirstOrderDeltas first_order_deltas(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                    const PowerProduct& t, const LeastSquaresSolution& sol,
                                    const PerturbationSample& sample);

}  // namespace nbm

#endif  // NBM_NUMERICS_HPP
