#ifndef NBM_ALGORITHM_HPP
#define NBM_ALGORITHM_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "nbm/monomials.hpp"
#include "nbm/numerics.hpp"
#include "nbm/points.hpp"

namespace nbm {

// Raised when the loop meets a rank-deficient M_O(X) or non-finite arithmetic.
class NumericalFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// g = t - sum_i alpha_i t_i, monic in its leading term t.
struct AlmostVanishingPoly {
    PowerProduct leading_term;
    // {t} followed by O_t, sigma-descending.
    std::vector<PowerProduct> support;
    // Aligned with support: 1 for t, then -alpha_i.
    std::vector<double> coefficients;
    double residual_norm = 0.0;
    // ||g(X)||_2 / ||c||_2
    double score = 0.0;
    int degree = 0;

    friend bool operator==(const AlmostVanishingPoly&, const AlmostVanishingPoly&) = default;
};

// One processed candidate of the loop.
struct StepRecord {
    PowerProduct candidate;
    std::vector<double> residual;
    std::vector<double> bound;
    double noise_floor = 0.0;
    bool dependent = false;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct Diagnostics {
    bool coordinates_in_unit_box = false;
    bool well_separated = true;
    // #O = s
    bool quotient_basis = false;
    std::vector<std::string> warnings;

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct NbmResult {
    OrderIdeal order_ideal;
    std::vector<AlmostVanishingPoly> polys;
    std::vector<StepRecord> steps;
    Diagnostics diagnostics;

    std::vector<PowerProduct> leading_terms() const;

    friend bool operator==(const NbmResult& a, const NbmResult& b) {
        return a.order_ideal.terms() == b.order_ideal.terms() &&
               a.order_ideal.ordering() == b.order_ideal.ordering() && a.polys == b.polys &&
               a.steps == b.steps && a.diagnostics == b.diagnostics;
    }
};

enum class SeparationPolicy { Warn, Error };

struct NbmOptions {
    SeparationPolicy separation = SeparationPolicy::Warn;
};

// Floating-point noise floor for a residual of the problem M alpha = b:
// 10 * s * eps_mach * (||b|| + ||M||_F ||alpha||).
double residual_noise_floor(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& alpha);

// Independence needs some component with |rho_i| > bound_i and |rho_i| above
// the noise floor; a residual whose norm is within the floor is dependent.
bool is_numerically_dependent(const Eigen::VectorXd& residual, const Eigen::VectorXd& bound,
                              double noise_floor = 0.0);

// Numerical Buchberger-Moeller: returns an order ideal O and the almost
// vanishing polynomials whose leading terms are the corners of O.
NbmResult run_nbm(const EmpiricalPointSet& points, const TermOrdering& ordering,
                  const NbmOptions& options = {});

Eigen::VectorXd evaluate(const AlmostVanishingPoly& g, const EmpiricalPointSet& points);
double score(const AlmostVanishingPoly& g, const EmpiricalPointSet& points);

}  // namespace nbm

#endif  // NBM_ALGORITHM_HPP
