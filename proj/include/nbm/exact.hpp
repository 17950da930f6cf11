#ifndef NBM_EXACT_HPP
#define NBM_EXACT_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

#include "nbm/monomials.hpp"

namespace nbm {

using Rational = mpq_class;

// Exact value of a decimal literal ("5.1", "-0.25", "1e-4", "2.5E+3") or a
// fraction ("59/60"). Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

// "51/10" style rendering, or an integer when the denominator is 1.
std::string to_string(const Rational& q);

// Distinct points with exact rational coordinates.
class RationalPointSet {
public:
    explicit RationalPointSet(std::vector<std::vector<Rational>> rows);

    std::size_t size() const { return rows_.size(); }
    std::size_t dimension() const { return rows_.front().size(); }
    const std::vector<Rational>& point(std::size_t i) const { return rows_.at(i); }

private:
    std::vector<std::vector<Rational>> rows_;
};

struct ExactPolynomial {
    PowerProduct leading_term;
    // {t} followed by O_t, sigma-descending.
    std::vector<PowerProduct> support;
    // 1 for t, then -c_i.
    std::vector<Rational> coefficients;
};

struct ExactBasis {
    // Quotient basis O_sigma; #O = s.
    OrderIdeal order_ideal;
    // The reduced sigma-Groebner basis of the vanishing ideal.
    std::vector<ExactPolynomial> polys;
};

// Buchberger-Moeller in exact rational arithmetic: a candidate joins O iff
// t(X) is linearly independent of the evaluation vectors of O.
ExactBasis exact_bm(const RationalPointSet& points, const TermOrdering& ordering);

std::vector<Rational> eval_exact(const PowerProduct& t, const RationalPointSet& points);

}  // namespace nbm

#endif  // NBM_EXACT_HPP
