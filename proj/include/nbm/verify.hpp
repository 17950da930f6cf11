#ifndef NBM_VERIFY_HPP
#define NBM_VERIFY_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nbm/algorithm.hpp"
#include "nbm/monomials.hpp"
#include "nbm/points.hpp"

namespace nbm {

// Exact: scale factors must be powers of two and translations must add
// exactly, so the transformed input is the true image of the original.
// Fuzzy: any nonzero factors / any shifts; compare and report margins.
enum class InvarianceMode { Exact, Fuzzy };

struct InvarianceReport {
    bool same_order_ideal = false;
    OrderIdeal original;
    OrderIdeal transformed;
    // Smallest decision margin over both runs, relative to the size of the
    // residual; values near 0 mark candidates that could flip.
    double smallest_relative_margin = 0.0;
};

InvarianceReport scaling_invariance(const EmpiricalPointSet& points, const Eigen::VectorXd& factors,
                                    const TermOrdering& ordering,
                                    InvarianceMode mode = InvarianceMode::Exact);
InvarianceReport translation_invariance(const EmpiricalPointSet& points, const Eigen::VectorXd& shift,
                                        const TermOrdering& ordering,
                                        InvarianceMode mode = InvarianceMode::Exact);

bool check_scaling_invariance(const EmpiricalPointSet& points, const Eigen::VectorXd& factors,
                              const TermOrdering& ordering,
                              InvarianceMode mode = InvarianceMode::Exact);
bool check_translation_invariance(const EmpiricalPointSet& points, const Eigen::VectorXd& shift,
                                  const TermOrdering& ordering,
                                  InvarianceMode mode = InvarianceMode::Exact);

bool is_power_of_two(double value);

// Randomised exact-mode invariance runs: `count` power-of-two scalings with
// factors in [2^-3, 2^3] and `count` translations by dyadics j / 2^m
// (|j| <= 32, 3 <= m <= 8) that add exactly to every coordinate.
struct InvarianceSuiteReport {
    std::size_t scalings = 0;
    std::size_t scalings_passed = 0;
    std::size_t translations = 0;
    std::size_t translations_passed = 0;
    // Translations with at least one nonzero entry.
    std::size_t nonzero_translations = 0;
    double smallest_relative_margin = 0.0;

    bool passed() const {
        return scalings_passed == scalings && translations_passed == translations;
    }
};

InvarianceSuiteReport invariance_suite(const EmpiricalPointSet& points, const TermOrdering& ordering,
                                       std::size_t count, std::uint64_t seed);

// x -> factors * (x + shift), with power-of-two factors and a dyadic shift
// that adds exactly, mapping every coordinate into [-1, 1].
struct UnitBoxTransform {
    Eigen::VectorXd shift;
    Eigen::VectorXd factors;

    EmpiricalPointSet apply(const EmpiricalPointSet& points) const;
};

UnitBoxTransform unit_box_transform(const EmpiricalPointSet& points);

// Decision margins max_i (|rho_i| - bound_i) taken from an NBM step log.
struct MarginSummary {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    // Smallest positive margin among candidates that joined O.
    double smallest_acceptance_margin = 0.0;
    // Largest margin among candidates that became leading terms (<= 0 unless
    // the noise floor decided).
    double largest_rejection_margin = 0.0;
    // (floor(log10(margin)), count) over accepted candidates with margin > 0.
    std::vector<std::pair<int, std::size_t>> acceptance_decades;
};

MarginSummary summarize_margins(std::span<const StepRecord> steps);

struct StabilityReport {
    std::size_t trials = 0;
    std::size_t rank_failures = 0;
    double min_smallest_singular_value = 0.0;
    // Smallest sigma_min / sigma_max seen.
    double min_relative_singular_value = 0.0;
    MarginSummary margins;
};

// Evaluates M_O at `trials` admissible perturbations and records the
// numerical rank and the smallest singular value. Stability is reported, not
// certified.
StabilityReport monte_carlo_stability(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                      std::size_t trials, std::uint64_t seed,
                                      std::span<const StepRecord> steps = {});

struct P1Entry {
    PowerProduct leading_term;
    double score = 0.0;
    double bound = 0.0;
    // Largest score seen over the perturbed trials, and its bound
    // 2 s deg(g) sum(eps) plus a second-order allowance.
    double worst_perturbed_score = 0.0;
    double perturbed_bound = 0.0;
    bool holds = false;
};

struct P1Report {
    bool skipped = false;
    std::string notice;
    std::vector<P1Entry> entries;
    bool passed() const;
};

// score(g, X) < s deg(g) sum_k eps_k for every g; with perturbed_trials > 0
// also checks the perturbed bound at random admissible perturbations.
// Skipped unless all coordinates lie in [-1, 1].
P1Report check_p1(const NbmResult& result, const EmpiricalPointSet& points,
                  std::size_t perturbed_trials = 0, std::uint64_t seed = 0);

// True iff every claimed zero is an admissible perturbation of the matching
// point of X and every g evaluates to at most relative_tolerance * ||c||
// there. Throws std::invalid_argument if the sizes differ.
bool check_p2_on_zero_set(std::span<const AlmostVanishingPoly> polys,
                          const EmpiricalPointSet& claimed_zero_set, const EmpiricalPointSet& points,
                          double relative_tolerance = 1e-10);

struct P3Entry {
    PowerProduct leading_term;
    std::vector<PowerProduct> border_support;
    std::vector<double> border_coefficients;
    double relative_distance = 0.0;
    double bound = 0.0;
    bool holds = false;
};

struct P3Report {
    bool skipped = false;
    std::string notice;
    double condition_number = 0.0;
    std::vector<P3Entry> entries;
    bool passed() const;
};

// For #O = s compares each g with the O-border polynomial sharing its
// leading term: ||c_b - [c, 0]|| / ||c|| <= deg(g) kappa_2(M_O(X)) sum eps_k.
P3Report check_p3_border(const NbmResult& result, const EmpiricalPointSet& points);

struct OracleResult {
    double minimum_residual = 0.0;
    PerturbationSample best;
    std::size_t evaluations = 0;
};

inline constexpr std::size_t kOracleMaxDimensions = 8;

// Brute-force search for an admissible perturbation making t(X~) depend on
// the columns of M_O(X~): grid search over the open tolerance box followed by
// coordinate-wise quadratic refinement. Throws std::invalid_argument when
// more than kOracleMaxDimensions coordinates carry a nonzero tolerance.
// A residual within the noise floor at E = 0 is reported as 0.
OracleResult dependence_oracle(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                               const PowerProduct& t, std::size_t grid_density);

struct ConvergenceReport {
    // h, h/2, h/4
    std::vector<double> scales;
    std::vector<double> errors;
    std::vector<double> ratios;
    // Errors are at roundoff level at every scale: the first-order predictor
    // is exact for this configuration and no decay rate can be observed.
    bool exact = false;
    // Every ratio lies in [3, 5].
    bool quadratic = false;
};

// Prediction error max(||drho - drho_pred||, ||dalpha - dalpha_pred||) along
// one admissible direction drawn from `seed`, at three halving scales.
ConvergenceReport first_order_convergence(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                          const PowerProduct& t, std::uint64_t seed);

}  // namespace nbm

#endif  // NBM_VERIFY_HPP
