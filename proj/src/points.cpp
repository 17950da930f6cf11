#include "nbm/points.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nbm {

namespace {

double power(double base, int exponent) {
    double r = 1.0;
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
}

void require_dimension(const PowerProduct& t, const EmpiricalPointSet& points) {
    if (static_cast<Eigen::Index>(t.dimension()) != points.dimension()) {
        throw std::invalid_argument("power product dimension does not match point set");
    }
}

}  // namespace

EmpiricalPointSet::EmpiricalPointSet(Eigen::MatrixXd coordinates, Eigen::VectorXd tolerance)
    : coordinates_(std::move(coordinates)), tolerance_(std::move(tolerance)) {
    if (coordinates_.rows() < 1 || coordinates_.cols() < 1) {
        throw std::invalid_argument("point set must contain at least one point in at least one dimension");
    }
    if (!coordinates_.allFinite()) throw std::invalid_argument("point coordinates must be finite");
    if (tolerance_.size() != coordinates_.cols()) {
        throw std::invalid_argument("tolerance length does not match point dimension");
    }
    if (!tolerance_.allFinite() || (tolerance_.array() < 0.0).any()) {
        throw std::invalid_argument("tolerance entries must be finite and non-negative");
    }
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> EmpiricalPointSet::separation_violations() const {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    for (Eigen::Index i = 0; i < size(); ++i) {
        for (Eigen::Index j = i + 1; j < size(); ++j) {
            const Eigen::ArrayXd gap = (coordinates_.row(i) - coordinates_.row(j)).array().abs().transpose();
            if ((gap < 2.0 * tolerance_.array()).all()) out.emplace_back(i, j);
        }
    }
    return out;
}

bool EmpiricalPointSet::in_unit_box() const { return coordinates_.cwiseAbs().maxCoeff() <= 1.0; }

EmpiricalPointSet EmpiricalPointSet::scaled(const Eigen::VectorXd& factors) const {
    if (factors.size() != dimension()) throw std::invalid_argument("scale vector has wrong length");
    return EmpiricalPointSet(coordinates_ * factors.asDiagonal(),
                             tolerance_.cwiseProduct(factors.cwiseAbs()));
}

EmpiricalPointSet EmpiricalPointSet::translated(const Eigen::VectorXd& shift) const {
    if (shift.size() != dimension()) throw std::invalid_argument("shift vector has wrong length");
    return EmpiricalPointSet(coordinates_.rowwise() + shift.transpose(), tolerance_);
}

EmpiricalPointSet EmpiricalPointSet::with_tolerance(Eigen::VectorXd tolerance) const {
    return EmpiricalPointSet(coordinates_, std::move(tolerance));
}

PerturbationSample PerturbationSample::zero(const EmpiricalPointSet& points) {
    return PerturbationSample(Eigen::MatrixXd::Zero(points.size(), points.dimension()));
}

bool PerturbationSample::admissible_for(const EmpiricalPointSet& points) const {
    if (offsets_.rows() != points.size() || offsets_.cols() != points.dimension()) return false;
    for (Eigen::Index k = 0; k < offsets_.cols(); ++k) {
        const double eps = points.tolerance()(k);
        for (Eigen::Index i = 0; i < offsets_.rows(); ++i) {
            const double e = offsets_(i, k);
            if (e != 0.0 && !(std::abs(e) < eps)) return false;
        }
    }
    return true;
}

Eigen::VectorXd eval_vector(const PowerProduct& t, const EmpiricalPointSet& points) {
    require_dimension(t, points);
    const auto& c = points.coordinates();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(points.size());
    for (Eigen::Index k = 0; k < points.dimension(); ++k) {
        const int e = t.exponent(static_cast<std::size_t>(k));
        if (e == 0) continue;
        for (Eigen::Index i = 0; i < points.size(); ++i) v(i) *= power(c(i, k), e);
    }
    return v;
}

Eigen::VectorXd eval_vector(const FormalPartial& d, const EmpiricalPointSet& points) {
    if (d.is_zero()) return Eigen::VectorXd::Zero(points.size());
    return static_cast<double>(d.coefficient) * eval_vector(*d.term, points);
}

EvaluationMatrix eval_matrix(std::span<const PowerProduct> terms, const EmpiricalPointSet& points) {
    EvaluationMatrix m{Eigen::MatrixXd(points.size(), static_cast<Eigen::Index>(terms.size())),
                       std::vector<PowerProduct>(terms.begin(), terms.end())};
    for (std::size_t j = 0; j < terms.size(); ++j) {
        m.entries.col(static_cast<Eigen::Index>(j)) = eval_vector(terms[j], points);
    }
    return m;
}

Eigen::MatrixXd eval_partial_matrix(std::span<const PowerProduct> terms, std::size_t k,
                                    const EmpiricalPointSet& points) {
    Eigen::MatrixXd m(points.size(), static_cast<Eigen::Index>(terms.size()));
    for (std::size_t j = 0; j < terms.size(); ++j) {
        require_dimension(terms[j], points);
        m.col(static_cast<Eigen::Index>(j)) = eval_vector(formal_partial(terms[j], k), points);
    }
    return m;
}

EmpiricalPointSet perturb(const EmpiricalPointSet& points, const PerturbationSample& sample) {
    if (!sample.admissible_for(points)) throw std::invalid_argument("perturbation is not admissible");
    return shift_unchecked(points, sample);
}

EmpiricalPointSet shift_unchecked(const EmpiricalPointSet& points, const PerturbationSample& sample) {
    if (sample.offsets().rows() != points.size() || sample.offsets().cols() != points.dimension()) {
        throw std::invalid_argument("perturbation shape does not match point set");
    }
    return EmpiricalPointSet(points.coordinates() + sample.offsets(), points.tolerance());
}

PerturbationSample sample_admissible(const EmpiricalPointSet& points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd offsets = Eigen::MatrixXd::Zero(points.size(), points.dimension());
    for (Eigen::Index k = 0; k < points.dimension(); ++k) {
        const double eps = points.tolerance()(k);
        if (eps == 0.0) continue;
        std::uniform_real_distribution<double> dist(-eps, eps);
        for (Eigen::Index i = 0; i < points.size(); ++i) {
            double e;
            do {
                e = dist(rng);
            } while (!(std::abs(e) < eps));
            offsets(i, k) = e;
        }
    }
    return PerturbationSample(std::move(offsets));
}

}  // namespace nbm
