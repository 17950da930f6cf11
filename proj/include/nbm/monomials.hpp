#ifndef NBM_MONOMIALS_HPP
#define NBM_MONOMIALS_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace nbm {

// A power product x_1^b_1 ... x_n^b_n, stored as its exponent vector.
class PowerProduct {
public:
    PowerProduct() = default;
    explicit PowerProduct(std::vector<int> exponents);

    // The power product 1 in n variables.
    static PowerProduct one(std::size_t n);
    // The variable x_k (0-based k) in n variables.
    static PowerProduct variable(std::size_t n, std::size_t k);

    std::size_t dimension() const { return exponents_.size(); }
    const std::vector<int>& exponents() const { return exponents_; }
    int exponent(std::size_t k) const { return exponents_.at(k); }
    int degree() const;
    bool is_one() const;

    // True if *this divides other.
    bool divides(const PowerProduct& other) const;
    PowerProduct times_variable(std::size_t k) const;
    // Requires exponent(k) > 0.
    PowerProduct divided_by_variable(std::size_t k) const;
    PowerProduct operator*(const PowerProduct& other) const;

    friend bool operator==(const PowerProduct&, const PowerProduct&) = default;
    // Lexicographic on raw exponent vectors; a storage order only, not a term ordering.
    friend auto operator<=>(const PowerProduct& a, const PowerProduct& b) {
        return a.exponents_ <=> b.exponents_;
    }

private:
    std::vector<int> exponents_;
};

enum class OrderScheme { DegLex, Lex };

// A term ordering sigma. variable_priority[0] is the index of the greatest
// variable, variable_priority[1] the next one, and so on.
class TermOrdering {
public:
    TermOrdering(OrderScheme scheme, std::vector<std::size_t> variable_priority);

    // DegLex with x_1 > x_2 > ... > x_n.
    static TermOrdering deglex(std::size_t n);
    static TermOrdering lex(std::size_t n);

    OrderScheme scheme() const { return scheme_; }
    const std::vector<std::size_t>& variable_priority() const { return priority_; }
    std::size_t dimension() const { return priority_.size(); }

    std::strong_ordering compare(const PowerProduct& a, const PowerProduct& b) const;
    bool less(const PowerProduct& a, const PowerProduct& b) const { return compare(a, b) < 0; }

    friend bool operator==(const TermOrdering&, const TermOrdering&) = default;

private:
    OrderScheme scheme_;
    std::vector<std::size_t> priority_;
};

// Strict-weak-order adaptor for sorted containers.
struct TermLess {
    TermOrdering ordering;
    bool operator()(const PowerProduct& a, const PowerProduct& b) const {
        return ordering.less(a, b);
    }
};

// Result of the formal partial derivative d/dx_k of a power product:
// coefficient * term, where an absent term is the zero polynomial.
struct FormalPartial {
    int coefficient = 0;
    std::optional<PowerProduct> term;

    bool is_zero() const { return !term.has_value(); }
};

FormalPartial formal_partial(const PowerProduct& t, std::size_t k);

// A factor-closed finite set of power products, kept sorted ascending by a
// term ordering.
class OrderIdeal {
public:
    explicit OrderIdeal(TermOrdering ordering);
    // Throws std::invalid_argument if `terms` is not factor-closed.
    OrderIdeal(std::vector<PowerProduct> terms, TermOrdering ordering);

    const std::vector<PowerProduct>& terms() const { return terms_; }
    const TermOrdering& ordering() const { return ordering_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    bool contains(const PowerProduct& t) const;

    // Adds a corner term. Throws if the result would not be factor-closed.
    void insert(const PowerProduct& t);

    // Set equality, independent of the orderings used to sort.
    bool same_terms(const OrderIdeal& other) const;

private:
    TermOrdering ordering_;
    std::vector<PowerProduct> terms_;
    std::set<PowerProduct> index_;
};

bool is_factor_closed(const std::vector<PowerProduct>& terms);

// Minimal power products outside O all of whose variable-quotients lie in O.
// Returned in storage order (sorted by raw exponents). The corner set of the
// empty ideal is {1}.
std::vector<PowerProduct> corner_set(const OrderIdeal& ideal, std::size_t dimension);

bool is_multiple_of_any(const PowerProduct& t, const std::vector<PowerProduct>& leading_terms);

// The sigma-smallest corner of O that is neither processed nor a multiple of a
// leading term; nullopt when the Buchberger-Moeller loop is finished.
std::optional<PowerProduct> next_candidate(const OrderIdeal& ideal,
                                           const std::vector<PowerProduct>& leading_terms,
                                           const std::vector<PowerProduct>& processed,
                                           const TermOrdering& ordering);

// Incremental candidate bookkeeping for the Buchberger-Moeller loop: a
// sigma-sorted frontier that always equals the set next_candidate draws from.
class CandidateFrontier {
public:
    explicit CandidateFrontier(const TermOrdering& ordering);

    bool empty() const { return frontier_.empty(); }
    std::optional<PowerProduct> pop();
    // t has just joined `ideal`; queue its eligible corners x_k * t.
    void accepted(const PowerProduct& t, const OrderIdeal& ideal);
    // t has become a leading term; drop its multiples.
    void rejected(const PowerProduct& t);
    const std::vector<PowerProduct>& leading_terms() const { return leading_; }

private:
    std::set<PowerProduct, TermLess> frontier_;
    std::vector<PowerProduct> leading_;
};

// Variable naming for rendering and parsing. Indexed names are "x[1]".."x[n]";
// for n <= 3 the aliases x, y, z are available.
class VariableNames {
public:
    explicit VariableNames(std::size_t n, bool use_aliases = true);

    std::size_t dimension() const { return n_; }
    const std::string& name(std::size_t k) const { return names_.at(k); }
    // Accepts both the alias and the indexed spelling. Throws on unknown names.
    std::size_t index_of(std::string_view name) const;

private:
    std::size_t n_;
    std::vector<std::string> names_;
};

// "1", "x", "x^2 y", "x[1]^2 x[3]". Factors appear in variable index order.
std::string to_string(const PowerProduct& t, const VariableNames& names);
// Parses the rendering above; "*" is accepted as a factor separator too.
PowerProduct parse_power_product(std::string_view text, const VariableNames& names);

// "deglex:x,y" or "lex:y,x" (greatest variable first). A bare scheme name uses
// the natural priority x_1 > ... > x_n.
TermOrdering parse_ordering(std::string_view text, const VariableNames& names);
std::string to_string(const TermOrdering& ordering, const VariableNames& names);

}  // namespace nbm

#endif  // NBM_MONOMIALS_HPP
