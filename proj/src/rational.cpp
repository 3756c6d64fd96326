#include "uac/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace uac {

Rational parse_rational(std::string_view s) {
    std::string t;
    for (char c : s)
        if (c != ' ') t.push_back(c);
    if (t.empty()) throw std::invalid_argument("empty rational");
    size_t slash = t.find('/');
    auto check_int = [&](const std::string& part) {
        size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size()) throw std::invalid_argument("malformed rational '" + std::string(s) + "'");
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9')
                throw std::invalid_argument("malformed rational '" + std::string(s) + "'");
    };
    std::string num = slash == std::string::npos ? t : t.substr(0, slash);
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    check_int(num);
    Rational r;
    if (slash == std::string::npos) {
        r = mpz_class(num);
    } else {
        std::string den = t.substr(slash + 1);
        check_int(den);
        mpz_class d(den);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
        r = Rational(mpz_class(num), d);
        r.canonicalize();
    }
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

bool is_zero(const Vec& v) {
    for (const auto& x : v)
        if (sgn(x) != 0) return false;
    return true;
}

Vec primitive(const Vec& v) {
    mpz_class l = 1;
    for (const auto& x : v)
        if (sgn(x) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<mpz_class> ints(v.size());
    mpz_class g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        ints[i] = v[i].get_num() * (l / v[i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
    }
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = g == 0 ? Rational(0) : Rational(ints[i] / g);
    return out;
}

Vec vec_from_ints(const std::vector<long>& xs) {
    Vec v;
    v.reserve(xs.size());
    for (long x : xs) v.emplace_back(x);
    return v;
}

std::vector<long> to_ints(const Vec& v) {
    std::vector<long> out;
    for (const auto& x : v) {
        if (x.get_den() != 1 || !x.get_num().fits_slong_p())
            throw std::domain_error("vector entry is not a machine integer");
        out.push_back(x.get_num().get_si());
    }
    return out;
}

std::string vec_str(const Vec& v) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
    os << ')';
    return os.str();
}

bool lex_less(const Vec& a, const Vec& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

} // namespace uac
