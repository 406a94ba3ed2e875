#include "lgtrop/novikov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lgtrop {

NovikovConfig& novikov_config() {
    static NovikovConfig config;
    return config;
}

ScopedTau::ScopedTau(double tau) : saved_(novikov_config().tau) { novikov_config().tau = tau; }
ScopedTau::~ScopedTau() { novikov_config().tau = saved_; }

namespace {

std::optional<Rational> min_cutoff(const std::optional<Rational>& a, const std::optional<Rational>& b) {
    if (!a) return b;
    if (!b) return a;
    return *a < *b ? *a : *b;
}

}  // namespace

void NovikovScalar::prune_and_truncate() {
    const double tau = novikov_config().tau;
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const NovikovTerm& x, const NovikovTerm& y) { return x.exponent < y.exponent; });
    std::vector<NovikovTerm> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (cutoff_ && t.exponent >= *cutoff_) continue;
        if (!merged.empty() && merged.back().exponent == t.exponent) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(std::move(t));
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [tau](const NovikovTerm& t) { return std::abs(t.coeff) <= tau; }),
                 merged.end());
    terms_ = std::move(merged);
}

NovikovScalar NovikovScalar::constant(Complex c) { return monomial(c, Rational(0)); }

NovikovScalar NovikovScalar::monomial(Complex c, Rational exponent) {
    NovikovScalar s;
    s.terms_.push_back({std::move(exponent), c});
    s.prune_and_truncate();
    return s;
}

NovikovScalar NovikovScalar::from_terms(std::vector<NovikovTerm> terms, std::optional<Rational> cutoff) {
    NovikovScalar s;
    s.terms_ = std::move(terms);
    s.cutoff_ = std::move(cutoff);
    s.prune_and_truncate();
    return s;
}

std::optional<Rational> NovikovScalar::val() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().exponent;
}

Complex NovikovScalar::leading_coeff() const {
    if (terms_.empty()) throw NumericError("leading_coeff of zero scalar");
    return terms_.front().coeff;
}

Rational NovikovScalar::leading_exponent() const {
    if (terms_.empty()) throw NumericError("leading_exponent of zero scalar");
    return terms_.front().exponent;
}

Complex NovikovScalar::coeff_at(const Rational& exponent) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                               [](const NovikovTerm& t, const Rational& e) { return t.exponent < e; });
    if (it != terms_.end() && it->exponent == exponent) return it->coeff;
    return Complex(0.0, 0.0);
}

NovikovScalar NovikovScalar::with_cutoff(Rational cutoff) const {
    NovikovScalar s(*this);
    s.cutoff_ = min_cutoff(s.cutoff_, std::optional<Rational>(std::move(cutoff)));
    s.prune_and_truncate();
    return s;
}

NovikovScalar NovikovScalar::dropped_above(const Rational& cutoff) const {
    NovikovScalar s(*this);
    s.terms_.erase(std::remove_if(s.terms_.begin(), s.terms_.end(),
                                  [&](const NovikovTerm& t) { return t.exponent >= cutoff; }),
                   s.terms_.end());
    return s;
}

NovikovScalar NovikovScalar::operator-() const {
    NovikovScalar s(*this);
    for (auto& t : s.terms_) t.coeff = -t.coeff;
    return s;
}

NovikovScalar NovikovScalar::operator+(const NovikovScalar& rhs) const {
    NovikovScalar s;
    s.cutoff_ = min_cutoff(cutoff_, rhs.cutoff_);
    s.terms_.reserve(terms_.size() + rhs.terms_.size());
    s.terms_.insert(s.terms_.end(), terms_.begin(), terms_.end());
    s.terms_.insert(s.terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
    s.prune_and_truncate();
    return s;
}

NovikovScalar NovikovScalar::operator-(const NovikovScalar& rhs) const { return *this + (-rhs); }

NovikovScalar NovikovScalar::operator*(const NovikovScalar& rhs) const {
    // A factor known modulo T^C with valuation v contributes precision C + val(other)
    // to the product; an exact factor contributes none. A truncated zero is O(T^C).
    auto val_floor = [](const NovikovScalar& x) -> std::optional<Rational> {
        if (!x.terms_.empty()) return x.terms_.front().exponent;
        return x.cutoff_;
    };
    std::optional<Rational> lhs_limit, rhs_limit;
    if (cutoff_) {
        if (auto v = val_floor(rhs)) lhs_limit = *cutoff_ + *v;
    }
    if (rhs.cutoff_) {
        if (auto v = val_floor(*this)) rhs_limit = *rhs.cutoff_ + *v;
    }
    NovikovScalar s;
    s.cutoff_ = min_cutoff(lhs_limit, rhs_limit);
    s.terms_.reserve(terms_.size() * rhs.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : rhs.terms_) {
            Rational e = a.exponent + b.exponent;
            if (s.cutoff_ && e >= *s.cutoff_) continue;
            s.terms_.push_back({std::move(e), a.coeff * b.coeff});
        }
    }
    s.prune_and_truncate();
    return s;
}

NovikovScalar NovikovScalar::operator*(const Complex& rhs) const {
    NovikovScalar s(*this);
    for (auto& t : s.terms_) t.coeff *= rhs;
    s.prune_and_truncate();
    return s;
}

NovikovScalar operator*(const Complex& lhs, const NovikovScalar& rhs) { return rhs * lhs; }

NovikovScalar NovikovScalar::invert(std::optional<Rational> fallback_cutoff) const {
    if (terms_.empty()) throw NumericError("invert of zero scalar");
    const Rational r = terms_.front().exponent;
    const Complex c = terms_.front().coeff;
    // x = c T^r (1 + f), val(f) > 0; 1/x = c^{-1} T^{-r} sum_k (-f)^k.
    NovikovScalar unit_inv = monomial(1.0 / c, -r);
    if (terms_.size() == 1) {
        unit_inv.cutoff_ = cutoff_ ? std::optional<Rational>(*cutoff_ - 2 * r) : std::nullopt;
        unit_inv.prune_and_truncate();
        return unit_inv;
    }
    NovikovScalar f;
    f.cutoff_ = cutoff_ ? std::optional<Rational>(*cutoff_ - r) : std::nullopt;
    for (std::size_t i = 1; i < terms_.size(); ++i) {
        f.terms_.push_back({terms_[i].exponent - r, terms_[i].coeff / c});
    }
    f.prune_and_truncate();
    Rational gamma = f.terms_.front().exponent;  // > 0

    Rational expansion_cutoff;
    if (cutoff_) {
        expansion_cutoff = *cutoff_ - r;
    } else if (fallback_cutoff) {
        expansion_cutoff = *fallback_cutoff;
    } else {
        Rational spread = terms_.back().exponent - r;
        expansion_cutoff = 4 * (spread < 1 ? Rational(1) : spread);
    }

    NovikovScalar acc = constant(1.0).with_cutoff(expansion_cutoff);
    NovikovScalar power = acc;
    NovikovScalar neg_f = (-f).with_cutoff(expansion_cutoff);
    for (Rational reached = gamma; reached < expansion_cutoff; reached += gamma) {
        power = power * neg_f;
        if (power.is_zero()) break;
        acc = acc + power;
    }
    NovikovScalar result = unit_inv * acc;
    result.cutoff_ = min_cutoff(cutoff_ ? std::optional<Rational>(*cutoff_ - 2 * r) : std::nullopt,
                                std::optional<Rational>(expansion_cutoff - r));
    result.prune_and_truncate();
    return result;
}

NovikovScalar NovikovScalar::pow(long long n) const {
    if (n == 0) return constant(1.0);
    if (n < 0) return invert().pow(-n);
    NovikovScalar base(*this);
    NovikovScalar acc = constant(1.0);
    long long e = n;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

bool NovikovScalar::in_ring(NovikovRing ring) const {
    switch (ring) {
        case NovikovRing::lambda:
            return true;
        case NovikovRing::lambda0:
            return terms_.empty() || terms_.front().exponent >= 0;
        case NovikovRing::lambda_plus:
            return terms_.empty() || terms_.front().exponent > 0;
        case NovikovRing::lambda_u:
            return !terms_.empty() && terms_.front().exponent == 0;
    }
    return false;
}

bool NovikovScalar::operator==(const NovikovScalar& rhs) const {
    if (terms_.size() != rhs.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].exponent != rhs.terms_[i].exponent) return false;
        if (terms_[i].coeff != rhs.terms_[i].coeff) return false;
    }
    return true;
}

namespace {

void format_double(std::ostringstream& out, double x) {
    if (x == static_cast<long long>(x) && std::abs(x) < 1e15) {
        out << static_cast<long long>(x);
    } else {
        out.precision(17);
        out << x;
    }
}

void format_complex(std::ostringstream& out, const Complex& c) {
    if (c.imag() == 0.0) {
        format_double(out, c.real());
        return;
    }
    format_double(out, c.real());
    if (!std::signbit(c.imag())) out << "+";
    format_double(out, c.imag());
    out << "i";
}

// Parses "a", "bi", "a+bi", "a-bi" with decimal/scientific doubles.
Complex parse_complex(std::string_view text) {
    const std::string buf(text);
    const char* p = buf.c_str();
    char* end = nullptr;
    double first = std::strtod(p, &end);
    if (end == p) throw ParseError("bad coefficient: " + buf);
    if (*end == 'i') {
        if (*(end + 1) != '\0') throw ParseError("bad coefficient: " + buf);
        return Complex(0.0, first);
    }
    if (*end == '\0') return Complex(first, 0.0);
    const char* q = end;
    double second = std::strtod(q, &end);
    if (end == q || *end != 'i' || *(end + 1) != '\0') throw ParseError("bad coefficient: " + buf);
    return Complex(first, second);
}

}  // namespace

std::string NovikovScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) out << " + ";
        first = false;
        format_complex(out, t.coeff);
        out << "*T^(" << lgtrop::to_string(t.exponent) << ")";
    }
    return out.str();
}

NovikovScalar NovikovScalar::parse(std::string_view text) {
    auto trimmed = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    std::string_view s = trimmed(text);
    if (s == "0") return zero();
    std::vector<NovikovTerm> terms;
    std::size_t pos = 0;
    const std::string src(s);
    while (pos < src.size()) {
        std::size_t sep = src.find(" + ", pos);
        std::string_view term(src.data() + pos, (sep == std::string::npos ? src.size() : sep) - pos);
        term = trimmed(term);
        auto star = term.find("*T^(");
        if (star == std::string_view::npos || term.back() != ')') {
            throw ParseError("bad scalar term: " + std::string(term));
        }
        Complex c = parse_complex(term.substr(0, star));
        Rational e = parse_rational(term.substr(star + 4, term.size() - star - 5));
        terms.push_back({std::move(e), c});
        pos = sep == std::string::npos ? src.size() : sep + 3;
    }
    return from_terms(std::move(terms));
}

bool approx_equal(const NovikovScalar& a, const NovikovScalar& b, double tol) {
    NovikovScalar diff = a - b;
    for (const auto& t : diff.terms()) {
        if (std::abs(t.coeff) > tol) return false;
    }
    return true;
}

}  // namespace lgtrop
