#include "hopgdof/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace hopgdof {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

namespace {
bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}
}  // namespace

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("not an exact rational (expected p/q): " + std::string(text));
    mpz_class n{std::string(num)}, d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    mpq_class q(neg ? mpz_class(-n) : n, d);
    q.canonicalize();
    return Rational(q);
}

Rational Rational::approximate(double x, long max_den) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    bool neg = x < 0;
    double v = std::fabs(x);
    // best rational via continued fractions, bounded denominator
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = v;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        long ai = static_cast<long>(a);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double frac = r - a;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    if (q1 == 0) { p1 = static_cast<long>(std::llround(v)); q1 = 1; }
    return Rational(neg ? -p1 : p1, q1);
}

std::string Rational::str() const {
    if (is_integer()) return num_str();
    return num_str() + "/" + den_str();
}

Rational Rational::floor() const {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return Rational(mpq_class(f));
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.q_ == 0) throw std::domain_error("rational: division by zero");
    q_ /= o.q_;
    return *this;
}

Rational pow2(int k) {
    mpz_class z = 1;
    if (k >= 0) {
        z <<= k;
        return Rational(mpq_class(z));
    }
    z <<= -k;
    return Rational(mpq_class(mpz_class(1), z));
}

Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace hopgdof
