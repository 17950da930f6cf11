#ifndef NBM_POINTS_HPP
#define NBM_POINTS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nbm/monomials.hpp"

namespace nbm {

// s limited-precision points in R^n (one per row) sharing the componentwise
// tolerance epsilon.
class EmpiricalPointSet {
public:
    // Throws std::invalid_argument on empty input, non-finite coordinates, a
    // tolerance of the wrong length or a negative tolerance entry.
    EmpiricalPointSet(Eigen::MatrixXd coordinates, Eigen::VectorXd tolerance);

    Eigen::Index size() const { return coordinates_.rows(); }
    Eigen::Index dimension() const { return coordinates_.cols(); }
    const Eigen::MatrixXd& coordinates() const { return coordinates_; }
    const Eigen::VectorXd& tolerance() const { return tolerance_; }
    double eps_max() const { return tolerance_.maxCoeff(); }

    // Pairs (i, j), i < j, whose points differ by less than 2 eps_k in every
    // coordinate k; such points are perturbations of one another.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> separation_violations() const;
    bool well_separated() const { return separation_violations().empty(); }
    bool in_unit_box() const;

    // Coordinates multiplied by d_k, tolerance |d_k| eps_k.
    EmpiricalPointSet scaled(const Eigen::VectorXd& factors) const;
    // Coordinates shifted by v_k, tolerance unchanged.
    EmpiricalPointSet translated(const Eigen::VectorXd& shift) const;
    EmpiricalPointSet with_tolerance(Eigen::VectorXd tolerance) const;

private:
    Eigen::MatrixXd coordinates_;
    Eigen::VectorXd tolerance_;
};

// Offsets e_{i,k} of an admissible perturbation. Column k holds the diagonal
// of E_k.
class PerturbationSample {
public:
    explicit PerturbationSample(Eigen::MatrixXd offsets) : offsets_(std::move(offsets)) {}

    static PerturbationSample zero(const EmpiricalPointSet& points);

    const Eigen::MatrixXd& offsets() const { return offsets_; }
    // Diagonal of E_k.
    Eigen::VectorXd column(Eigen::Index k) const { return offsets_.col(k); }

    // |e_{i,k}| < eps_k, where a zero offset is always admissible.
    bool admissible_for(const EmpiricalPointSet& points) const;

    PerturbationSample scaled(double factor) const { return PerturbationSample(offsets_ * factor); }
    PerturbationSample operator-() const { return PerturbationSample(-offsets_); }

private:
    Eigen::MatrixXd offsets_;
};

struct EvaluationMatrix {
    Eigen::MatrixXd entries;
    std::vector<PowerProduct> column_terms;
};

Eigen::VectorXd eval_vector(const PowerProduct& t, const EmpiricalPointSet& points);
// coefficient * term(X), or the zero vector for the zero derivative.
Eigen::VectorXd eval_vector(const FormalPartial& d, const EmpiricalPointSet& points);
EvaluationMatrix eval_matrix(std::span<const PowerProduct> terms, const EmpiricalPointSet& points);
// Columns d/dx_k of each term, i.e. M_{d_k O}(X).
Eigen::MatrixXd eval_partial_matrix(std::span<const PowerProduct> terms, std::size_t k,
                                    const EmpiricalPointSet& points);

// Throws std::invalid_argument if the sample is not admissible.
EmpiricalPointSet perturb(const EmpiricalPointSet& points, const PerturbationSample& sample);
// Adds the offsets without the admissibility check (used to undo perturbations).
EmpiricalPointSet shift_unchecked(const EmpiricalPointSet& points, const PerturbationSample& sample);

// Offsets i.i.d. uniform on the open interval (-eps_k, eps_k); deterministic in seed.
PerturbationSample sample_admissible(const EmpiricalPointSet& points, std::uint64_t seed);

}  // namespace nbm

#endif  // NBM_POINTS_HPP
