#include "nbm/exact.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>

namespace nbm {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool all_digits(std::string_view s) {
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

mpz_class pow10(long exponent) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
    return r;
}

// Solves M c = b exactly for an s x k matrix M of full column rank. Returns
// nullopt when b is not in the column space.
std::optional<std::vector<Rational>> solve_exact(const std::vector<std::vector<Rational>>& columns,
                                                 const std::vector<Rational>& b) {
    const std::size_t s = b.size();
    const std::size_t k = columns.size();
    // Row-major augmented matrix [M | b].
    std::vector<std::vector<Rational>> a(s, std::vector<Rational>(k + 1));
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < k; ++j) a[i][j] = columns[j][i];
        a[i][k] = b[i];
    }

    std::size_t row = 0;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = row;
        while (pivot < s && a[pivot][col] == 0) ++pivot;
        if (pivot == s) throw std::logic_error("evaluation vectors of O are linearly dependent");
        std::swap(a[row], a[pivot]);
        const Rational inv = 1 / a[row][col];
        for (std::size_t j = col; j <= k; ++j) a[row][j] *= inv;
        for (std::size_t i = 0; i < s; ++i) {
            if (i == row || a[i][col] == 0) continue;
            const Rational f = a[i][col];
            for (std::size_t j = col; j <= k; ++j) a[i][j] -= f * a[row][j];
        }
        ++row;
    }
    for (std::size_t i = row; i < s; ++i) {
        if (a[i][k] != 0) return std::nullopt;
    }
    std::vector<Rational> c(k);
    for (std::size_t j = 0; j < k; ++j) c[j] = a[j][k];
    return c;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    text = trim(text);
    const auto fail = [&] { throw std::invalid_argument("not an exact number: '" + std::string(text) + "'"); };
    if (text.empty()) fail();

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) fail();
        Rational q = num / den;
        q.canonicalize();
        return q;
    }

    bool negative = false;
    std::string_view body = text;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    long exponent = 0;
    if (const auto e = body.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = body.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (exp_text.empty() || !all_digits(exp_text) || exp_text.size() > 6) fail();
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        body = body.substr(0, e);
    }
    std::string digits;
    if (const auto dot = body.find('.'); dot != std::string_view::npos) {
        const auto int_part = body.substr(0, dot);
        const auto frac_part = body.substr(dot + 1);
        if (!all_digits(int_part) || !all_digits(frac_part) || int_part.size() + frac_part.size() == 0) fail();
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (body.empty() || !all_digits(body)) fail();
        digits = std::string(body);
    }

    mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
    Rational q = exponent >= 0 ? Rational(mantissa * pow10(exponent)) : Rational(mantissa, pow10(-exponent));
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_str();
}

RationalPointSet::RationalPointSet(std::vector<std::vector<Rational>> rows) : rows_(std::move(rows)) {
    if (rows_.empty() || rows_.front().empty()) throw std::invalid_argument("empty rational point set");
    for (const auto& r : rows_) {
        if (r.size() != rows_.front().size()) throw std::invalid_argument("ragged rational point set");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (std::size_t j = i + 1; j < rows_.size(); ++j) {
            if (rows_[i] == rows_[j]) throw std::invalid_argument("rational point set has repeated points");
        }
    }
}

std::vector<Rational> eval_exact(const PowerProduct& t, const RationalPointSet& points) {
    if (t.dimension() != points.dimension()) throw std::invalid_argument("dimension mismatch");
    std::vector<Rational> v(points.size(), Rational(1));
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t k = 0; k < t.dimension(); ++k) {
            for (int e = 0; e < t.exponent(k); ++e) v[i] *= points.point(i)[k];
        }
    }
    return v;
}

ExactBasis exact_bm(const RationalPointSet& points, const TermOrdering& ordering) {
    if (ordering.dimension() != points.dimension()) {
        throw std::invalid_argument("term ordering dimension does not match point set");
    }
    ExactBasis basis{OrderIdeal(ordering), {}};
    std::vector<std::vector<Rational>> columns;  // t_i(X) for t_i in O, in insertion order
    std::vector<PowerProduct> column_terms;

    CandidateFrontier frontier(ordering);
    while (auto candidate = frontier.pop()) {
        const PowerProduct& t = *candidate;
        std::vector<Rational> b = eval_exact(t, points);
        auto c = columns.empty() ? std::optional<std::vector<Rational>>()
                                 : solve_exact(columns, b);
        const bool independent = columns.empty()
                                     ? std::any_of(b.begin(), b.end(), [](const Rational& v) { return v != 0; })
                                     : !c.has_value();
        if (independent) {
            basis.order_ideal.insert(t);
            columns.push_back(std::move(b));
            column_terms.push_back(t);
            frontier.accepted(t, basis.order_ideal);
            continue;
        }

        // Insertion order is sigma-ascending, so reversing it gives the support order.
        ExactPolynomial g{t, {t}, {Rational(1)}};
        for (std::size_t i = column_terms.size(); i-- > 0;) {
            g.support.push_back(column_terms[i]);
            g.coefficients.push_back(c ? Rational(-(*c)[i]) : Rational(0));
        }
        basis.polys.push_back(std::move(g));
        frontier.rejected(t);
    }
    return basis;
}

}  // namespace nbm
