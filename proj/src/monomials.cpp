#include "nbm/monomials.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace nbm {

namespace {

void require_same_dimension(const PowerProduct& a, const PowerProduct& b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("power products have different dimensions");
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// PowerProduct

PowerProduct::PowerProduct(std::vector<int> exponents) : exponents_(std::move(exponents)) {
    if (std::any_of(exponents_.begin(), exponents_.end(), [](int e) { return e < 0; })) {
        throw std::invalid_argument("negative exponent in power product");
    }
}

PowerProduct PowerProduct::one(std::size_t n) { return PowerProduct(std::vector<int>(n, 0)); }

PowerProduct PowerProduct::variable(std::size_t n, std::size_t k) {
    if (k >= n) throw std::out_of_range("variable index out of range");
    std::vector<int> e(n, 0);
    e[k] = 1;
    return PowerProduct(std::move(e));
}

int PowerProduct::degree() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0); }

bool PowerProduct::is_one() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [](int e) { return e == 0; });
}

bool PowerProduct::divides(const PowerProduct& other) const {
    require_same_dimension(*this, other);
    for (std::size_t k = 0; k < exponents_.size(); ++k) {
        if (exponents_[k] > other.exponents_[k]) return false;
    }
    return true;
}

PowerProduct PowerProduct::times_variable(std::size_t k) const {
    PowerProduct r = *this;
    ++r.exponents_.at(k);
    return r;
}

PowerProduct PowerProduct::divided_by_variable(std::size_t k) const {
    if (exponents_.at(k) == 0) throw std::invalid_argument("variable does not divide power product");
    PowerProduct r = *this;
    --r.exponents_[k];
    return r;
}

PowerProduct PowerProduct::operator*(const PowerProduct& other) const {
    require_same_dimension(*this, other);
    PowerProduct r = *this;
    for (std::size_t k = 0; k < exponents_.size(); ++k) r.exponents_[k] += other.exponents_[k];
    return r;
}

// ---------------------------------------------------------------------------
// TermOrdering

TermOrdering::TermOrdering(OrderScheme scheme, std::vector<std::size_t> variable_priority)
    : scheme_(scheme), priority_(std::move(variable_priority)) {
    std::vector<std::size_t> sorted = priority_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] != i) throw std::invalid_argument("variable priority is not a permutation");
    }
}

TermOrdering TermOrdering::deglex(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return TermOrdering(OrderScheme::DegLex, std::move(p));
}

TermOrdering TermOrdering::lex(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return TermOrdering(OrderScheme::Lex, std::move(p));
}

std::strong_ordering TermOrdering::compare(const PowerProduct& a, const PowerProduct& b) const {
    if (a.dimension() != priority_.size() || b.dimension() != priority_.size()) {
        throw std::invalid_argument("power product dimension does not match term ordering");
    }
    if (scheme_ == OrderScheme::DegLex) {
        if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    }
    for (std::size_t k : priority_) {
        if (auto c = a.exponent(k) <=> b.exponent(k); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Derivatives

FormalPartial formal_partial(const PowerProduct& t, std::size_t k) {
    if (k >= t.dimension()) throw std::out_of_range("variable index out of range");
    const int beta = t.exponent(k);
    if (beta == 0) return {};
    return {beta, t.divided_by_variable(k)};
}

// ---------------------------------------------------------------------------
// Order ideals

bool is_factor_closed(const std::vector<PowerProduct>& terms) {
    const std::set<PowerProduct> members(terms.begin(), terms.end());
    for (const auto& t : terms) {
        for (std::size_t k = 0; k < t.dimension(); ++k) {
            if (t.exponent(k) > 0 && !members.contains(t.divided_by_variable(k))) return false;
        }
    }
    return true;
}

OrderIdeal::OrderIdeal(TermOrdering ordering) : ordering_(std::move(ordering)) {}

OrderIdeal::OrderIdeal(std::vector<PowerProduct> terms, TermOrdering ordering)
    : ordering_(std::move(ordering)), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (t.dimension() != ordering_.dimension()) {
            throw std::invalid_argument("order ideal term has wrong dimension");
        }
        if (!index_.insert(t).second) throw std::invalid_argument("duplicate term in order ideal");
    }
    if (!is_factor_closed(terms_)) throw std::invalid_argument("set of terms is not factor-closed");
    std::sort(terms_.begin(), terms_.end(), TermLess{ordering_});
}

bool OrderIdeal::contains(const PowerProduct& t) const { return index_.contains(t); }

void OrderIdeal::insert(const PowerProduct& t) {
    if (t.dimension() != ordering_.dimension()) {
        throw std::invalid_argument("order ideal term has wrong dimension");
    }
    if (contains(t)) return;
    for (std::size_t k = 0; k < t.dimension(); ++k) {
        if (t.exponent(k) > 0 && !contains(t.divided_by_variable(k))) {
            throw std::invalid_argument("inserting term would break factor-closedness");
        }
    }
    index_.insert(t);
    terms_.insert(std::upper_bound(terms_.begin(), terms_.end(), t, TermLess{ordering_}), t);
}

bool OrderIdeal::same_terms(const OrderIdeal& other) const { return index_ == other.index_; }

std::vector<PowerProduct> corner_set(const OrderIdeal& ideal, std::size_t dimension) {
    if (!is_factor_closed(ideal.terms())) throw std::invalid_argument("order ideal is not factor-closed");
    if (ideal.empty()) return {PowerProduct::one(dimension)};

    std::set<PowerProduct> corners;
    for (const auto& t : ideal.terms()) {
        for (std::size_t k = 0; k < dimension; ++k) {
            PowerProduct u = t.times_variable(k);
            if (ideal.contains(u)) continue;
            bool all_quotients_inside = true;
            for (std::size_t j = 0; j < dimension && all_quotients_inside; ++j) {
                if (u.exponent(j) > 0 && !ideal.contains(u.divided_by_variable(j))) {
                    all_quotients_inside = false;
                }
            }
            if (all_quotients_inside) corners.insert(std::move(u));
        }
    }
    return {corners.begin(), corners.end()};
}

bool is_multiple_of_any(const PowerProduct& t, const std::vector<PowerProduct>& leading_terms) {
    return std::any_of(leading_terms.begin(), leading_terms.end(),
                       [&](const PowerProduct& l) { return l.divides(t); });
}

std::optional<PowerProduct> next_candidate(const OrderIdeal& ideal,
                                           const std::vector<PowerProduct>& leading_terms,
                                           const std::vector<PowerProduct>& processed,
                                           const TermOrdering& ordering) {
    std::optional<PowerProduct> best;
    for (auto& c : corner_set(ideal, ordering.dimension())) {
        if (std::find(processed.begin(), processed.end(), c) != processed.end()) continue;
        if (is_multiple_of_any(c, leading_terms)) continue;
        if (!best || ordering.less(c, *best)) best = std::move(c);
    }
    return best;
}

// ---------------------------------------------------------------------------
// CandidateFrontier

CandidateFrontier::CandidateFrontier(const TermOrdering& ordering)
    : frontier_(TermLess{ordering}) {
    frontier_.insert(PowerProduct::one(ordering.dimension()));
}

std::optional<PowerProduct> CandidateFrontier::pop() {
    if (frontier_.empty()) return std::nullopt;
    auto node = frontier_.extract(frontier_.begin());
    return std::move(node.value());
}

void CandidateFrontier::accepted(const PowerProduct& t, const OrderIdeal& ideal) {
    for (std::size_t k = 0; k < t.dimension(); ++k) {
        PowerProduct u = t.times_variable(k);
        if (ideal.contains(u) || is_multiple_of_any(u, leading_)) continue;
        bool corner = true;
        for (std::size_t j = 0; j < u.dimension() && corner; ++j) {
            if (u.exponent(j) > 0 && !ideal.contains(u.divided_by_variable(j))) corner = false;
        }
        if (corner) frontier_.insert(std::move(u));
    }
}

void CandidateFrontier::rejected(const PowerProduct& t) {
    leading_.push_back(t);
    std::erase_if(frontier_, [&](const PowerProduct& u) { return t.divides(u); });
}

// ---------------------------------------------------------------------------
// Rendering and parsing

VariableNames::VariableNames(std::size_t n, bool use_aliases) : n_(n) {
    static const char* aliases[] = {"x", "y", "z"};
    for (std::size_t k = 0; k < n; ++k) {
        names_.push_back(use_aliases && n <= 3 ? std::string(aliases[k])
                                               : "x[" + std::to_string(k + 1) + "]");
    }
}

std::size_t VariableNames::index_of(std::string_view name) const {
    name = trim(name);
    for (std::size_t k = 0; k < n_; ++k) {
        if (names_[k] == name) return k;
    }
    if (n_ <= 3 && name.size() == 1) {
        static const std::string_view aliases = "xyz";
        const auto pos = aliases.find(name[0]);
        if (pos != std::string_view::npos && pos < n_) return pos;
    }
    if (name.size() > 3 && name.substr(0, 2) == "x[" && name.back() == ']') {
        std::size_t index = 0;
        const auto digits = name.substr(2, name.size() - 3);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && index >= 1 && index <= n_) {
            return index - 1;
        }
    }
    throw std::invalid_argument("unknown variable name '" + std::string(name) + "'");
}

std::string to_string(const PowerProduct& t, const VariableNames& names) {
    if (t.dimension() != names.dimension()) throw std::invalid_argument("dimension mismatch");
    std::string out;
    for (std::size_t k = 0; k < t.dimension(); ++k) {
        const int e = t.exponent(k);
        if (e == 0) continue;
        if (!out.empty()) out += ' ';
        out += names.name(k);
        if (e > 1) out += '^' + std::to_string(e);
    }
    return out.empty() ? "1" : out;
}

PowerProduct parse_power_product(std::string_view text, const VariableNames& names) {
    std::vector<int> exps(names.dimension(), 0);
    std::string normalized(trim(text));
    std::replace(normalized.begin(), normalized.end(), '*', ' ');
    if (normalized == "1") return PowerProduct(std::move(exps));
    if (normalized.empty()) throw std::invalid_argument("empty power product");

    std::string_view rest = normalized;
    while (!(rest = trim(rest)).empty()) {
        const auto end = rest.find(' ');
        std::string_view factor = rest.substr(0, end);
        rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);

        int power = 1;
        if (const auto caret = factor.find('^'); caret != std::string_view::npos) {
            const auto digits = factor.substr(caret + 1);
            const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), power);
            if (ec != std::errc() || ptr != digits.data() + digits.size() || power < 0) {
                throw std::invalid_argument("bad exponent in '" + std::string(factor) + "'");
            }
            factor = factor.substr(0, caret);
        }
        exps[names.index_of(factor)] += power;
    }
    return PowerProduct(std::move(exps));
}

TermOrdering parse_ordering(std::string_view text, const VariableNames& names) {
    text = trim(text);
    const auto colon = text.find(':');
    std::string scheme(trim(text.substr(0, colon)));
    std::transform(scheme.begin(), scheme.end(), scheme.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    OrderScheme kind;
    if (scheme == "deglex") {
        kind = OrderScheme::DegLex;
    } else if (scheme == "lex") {
        kind = OrderScheme::Lex;
    } else {
        throw std::invalid_argument("unknown term ordering '" + scheme + "'");
    }
    if (colon == std::string_view::npos) {
        return kind == OrderScheme::DegLex ? TermOrdering::deglex(names.dimension())
                                           : TermOrdering::lex(names.dimension());
    }

    std::vector<std::size_t> priority;
    std::string_view rest = text.substr(colon + 1);
    while (true) {
        const auto comma = rest.find(',');
        priority.push_back(names.index_of(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    if (priority.size() != names.dimension()) {
        throw std::invalid_argument("term ordering must list every variable exactly once");
    }
    return TermOrdering(kind, std::move(priority));
}

std::string to_string(const TermOrdering& ordering, const VariableNames& names) {
    std::string out = ordering.scheme() == OrderScheme::DegLex ? "deglex:" : "lex:";
    for (std::size_t i = 0; i < ordering.variable_priority().size(); ++i) {
        if (i) out += ',';
        out += names.name(ordering.variable_priority()[i]);
    }
    return out;
}

}  // namespace nbm
