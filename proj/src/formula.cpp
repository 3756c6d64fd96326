#include "uac/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace uac {

void EntropyFunctional::add(Mask m, const Rational& c) {
    if (m == 0 || sgn(c) == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, c);
        return;
    }
    it->second += c;
    if (sgn(it->second) == 0) terms.erase(it);
}

Rational EntropyFunctional::coeff(Mask m) const {
    auto it = terms.find(m);
    return it == terms.end() ? Rational(0) : it->second;
}

EntropyFunctional EntropyFunctional::operator+(const EntropyFunctional& o) const {
    if (!(ground == o.ground)) throw std::invalid_argument("functionals on different grounds");
    EntropyFunctional r = *this;
    for (const auto& [m, c] : o.terms) r.add(m, c);
    return r;
}

EntropyFunctional EntropyFunctional::operator-(const EntropyFunctional& o) const { return *this + (-o); }

EntropyFunctional EntropyFunctional::operator*(const Rational& c) const {
    EntropyFunctional r(ground);
    if (sgn(c) == 0) return r;
    for (const auto& [m, v] : terms) r.terms.emplace(m, v * c);
    return r;
}

Rational EntropyFunctional::eval(const std::function<Rational(Mask)>& h) const {
    Rational s = 0;
    for (const auto& [m, c] : terms) s += c * h(m);
    return s;
}

Vec EntropyFunctional::dense() const {
    Vec v(size_t(1) << ground.size(), Rational(0));
    for (const auto& [m, c] : terms) v[m] = c;
    return v;
}

EntropyFunctional entropy_term(const Ground& g, Mask m, const Rational& c) {
    EntropyFunctional f(g);
    f.add(m, c);
    return f;
}

EntropyFunctional cmi(const Ground& g, Mask x, Mask y, Mask z) {
    EntropyFunctional f(g);
    f.add(x | z, 1);
    f.add(y | z, 1);
    f.add(x | y | z, -1);
    f.add(z, -1);
    return f;
}

EntropyFunctional cond_entropy(const Ground& g, Mask x, Mask z) {
    EntropyFunctional f(g);
    f.add(x | z, 1);
    f.add(z, -1);
    return f;
}

// ---------------------------------------------------------------- rendering

namespace {

bool shortlex_less(Mask a, Mask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    while (a && b) {
        int i = __builtin_ctz(a), j = __builtin_ctz(b);
        if (i != j) return i < j;
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

std::string coef_prefix(const Rational& k, bool leading) {
    std::string sign;
    Rational a = abs(k);
    if (sgn(k) < 0) sign = leading ? "-" : " - ";
    else if (!leading) sign = " + ";
    if (a == 1) return sign;
    if (a.get_den() == 1) return sign + a.get_str();
    return sign + a.get_str() + "*";
}

std::string atom_s(const Ground& g, Mask x, Mask z) {
    if (z == 0) return "S(" + g.name(x) + ")";
    return "S(" + g.name(x) + "|" + g.name(z) + ")";
}

std::string atom_i(const Ground& g, Mask x, Mask y, Mask z) {
    if (__builtin_ctz(y) < __builtin_ctz(x)) std::swap(x, y);
    std::string s = "I(" + g.name(x) + ":" + g.name(y);
    if (z) s += "|" + g.name(z);
    return s + ")";
}

// Recognizes k*S(Y|Z), k*I(X:Y) and k*I(X:Y|Z); returns false otherwise.
bool render_pattern(const EntropyFunctional& f, std::string& out) {
    std::vector<std::pair<Mask, Rational>> t(f.terms.begin(), f.terms.end());
    const Ground& g = f.ground;
    if (t.size() == 1) {
        out = coef_prefix(t[0].second, true) + atom_s(g, t[0].first, 0);
        return true;
    }
    if (t.size() == 2 && t[0].second == -t[1].second) {
        Mask p = t[0].first, q = t[1].first;
        Rational kq = t[1].second;
        if ((p & q) == q) {
            std::swap(p, q);
            kq = t[0].second;
        }
        if ((p & q) == p) {  // p strictly inside q
            out = coef_prefix(kq, true) + atom_s(g, q & ~p, p);
            return true;
        }
        return false;
    }
    if (t.size() == 3 || t.size() == 4) {
        for (size_t i = 0; i < t.size(); ++i)
            for (size_t j = i + 1; j < t.size(); ++j) {
                if (t[i].second != t[j].second) continue;
                const Rational& k = t[i].second;
                Mask p1 = t[i].first, p2 = t[j].first;
                std::vector<Mask> neg;
                bool ok = true;
                for (size_t r = 0; r < t.size(); ++r) {
                    if (r == i || r == j) continue;
                    if (t[r].second != -k) ok = false;
                    neg.push_back(t[r].first);
                }
                if (!ok) continue;
                Mask z = p1 & p2, u = p1 | p2, x = p1 & ~z, y = p2 & ~z;
                if (!x || !y) continue;
                bool match = t.size() == 3 ? (z == 0 && neg[0] == u)
                                           : (z != 0 && ((neg[0] == u && neg[1] == z) || (neg[0] == z && neg[1] == u)));
                if (!match) continue;
                out = coef_prefix(k, true) + atom_i(g, x, y, z);
                return true;
            }
    }
    return false;
}

} // namespace

std::string render(const EntropyFunctional& f) {
    if (f.terms.empty()) return "0";
    std::string out;
    if (render_pattern(f, out)) return out;
    std::vector<std::pair<Mask, Rational>> pos, neg;
    for (const auto& [m, c] : f.terms) (sgn(c) > 0 ? pos : neg).emplace_back(m, c);
    auto by_shortlex = [](const auto& a, const auto& b) { return shortlex_less(a.first, b.first); };
    std::sort(pos.begin(), pos.end(), by_shortlex);
    std::sort(neg.begin(), neg.end(), by_shortlex);
    bool leading = true;
    for (const auto* part : {&pos, &neg})
        for (const auto& [m, c] : *part) {
            out += coef_prefix(c, leading) + atom_s(f.ground, m, 0);
            leading = false;
        }
    return out;
}

// ------------------------------------------------------------------ parsing

namespace {

std::string normalize_minus(std::string_view s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i + 2 < s.size() + 0 && static_cast<unsigned char>(s[i]) == 0xE2 &&
            static_cast<unsigned char>(s[i + 1]) == 0x88 && static_cast<unsigned char>(s[i + 2]) == 0x92) {
            out.push_back('-');
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

struct Parser {
    const std::string& s;
    const Ground& g;
    size_t pos = 0;

    void ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos);
    }
    Mask set_until(const std::string& stops, bool allow_empty = false) {
        ws();
        size_t start = pos;
        while (pos < s.size() && stops.find(s[pos]) == std::string::npos) ++pos;
        if (pos >= s.size()) throw ParseError("unterminated term", pos);
        std::string body = s.substr(start, pos - start);
        body.erase(std::remove_if(body.begin(), body.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                   body.end());
        if (body.empty() && !allow_empty) throw ParseError("empty system set", start);
        try {
            return g.parse_set(body);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), start);
        }
    }
    Rational coefficient() {
        ws();
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
        if (start == pos) return 1;
        Rational c;
        try {
            c = parse_rational(s.substr(start, pos - start));
        } catch (const std::invalid_argument&) {
            throw ParseError("malformed coefficient", start);
        }
        eat('*');
        return c;
    }
    EntropyFunctional term() {
        Rational k = coefficient();
        ws();
        if (pos >= s.size()) throw ParseError("expected S( or I(", pos);
        char kind = s[pos];
        if (kind != 'S' && kind != 'I') throw ParseError("expected S( or I(", pos);
        ++pos;
        expect('(');
        EntropyFunctional f(g);
        if (kind == 'S') {
            Mask x = set_until("|)");
            Mask z = 0;
            if (eat('|')) z = set_until(")");
            expect(')');
            f = cond_entropy(g, x, z);
        } else {
            Mask x = set_until(":");
            expect(':');
            Mask y = set_until("|)");
            Mask z = 0;
            if (eat('|')) z = set_until(")");
            expect(')');
            f = cmi(g, x, y, z);
        }
        return f * k;
    }
    EntropyFunctional parse() {
        EntropyFunctional f(g);
        ws();
        if (s.substr(pos) == "0") return f;
        bool first = true;
        while (true) {
            ws();
            if (pos >= s.size()) {
                if (first) throw ParseError("empty formula", pos);
                break;
            }
            int sign = 1;
            if (s[pos] == '+' || s[pos] == '-') {
                sign = s[pos] == '-' ? -1 : 1;
                ++pos;
            } else if (!first) {
                throw ParseError("expected '+' or '-'", pos);
            }
            f = f + term() * Rational(sign);
            first = false;
        }
        return f;
    }
};

} // namespace

EntropyFunctional parse_functional(std::string_view text, const Ground& g) {
    std::string s = normalize_minus(text);
    Parser p{s, g};
    return p.parse();
}

EntropyFunctional purity_rewrite(const EntropyFunctional& f, const std::string& eliminate) {
    int x = f.ground.index_of(eliminate);
    if (x < 0) throw std::invalid_argument("label '" + eliminate + "' not in ground");
    Ground g;
    for (int i = 0; i < f.ground.size(); ++i)
        if (i != x) g.labels.push_back(f.ground.labels[i]);
    auto squeeze = [&](Mask m) {
        Mask lo = m & ((Mask(1) << x) - 1);
        Mask hi = (m >> (x + 1)) << x;
        return lo | hi;
    };
    g.ancillas = squeeze(f.ground.ancillas & ~(Mask(1) << x));
    EntropyFunctional r(g);
    for (const auto& [m, c] : f.terms) {
        Mask t = (m >> x & 1) ? (f.ground.full() ^ m) : m;
        r.add(squeeze(t), c);
    }
    return r;
}

// ------------------------------------------------------------- alpha vectors

AlphaVector::AlphaVector(int n, int m) : n_parties(n), n_ancillas(m) {
    if (n < 1 || n > 3 || m < 1 || m > 2) throw std::invalid_argument("unsupported alpha shape");
    coeffs.assign(sector_size() * sector_count(), Rational(0));
}

AlphaVector::AlphaVector(int n, int m, Vec c) : AlphaVector(n, m) {
    if (c.size() != coeffs.size()) throw std::invalid_argument("alpha vector has wrong length");
    coeffs = std::move(c);
}

size_t AlphaVector::sector_pos(Mask anc) const {
    if (anc == 0 || anc >= (Mask(1) << n_ancillas)) throw std::invalid_argument("bad ancilla sector");
    return static_cast<size_t>(shortlex_rank(anc, n_ancillas) - 1);
}

Rational& AlphaVector::at(Mask anc, Mask parties) {
    return coeffs[sector_pos(anc) * sector_size() + static_cast<size_t>(shortlex_rank(parties, n_parties))];
}

const Rational& AlphaVector::at(Mask anc, Mask parties) const {
    return coeffs[sector_pos(anc) * sector_size() + static_cast<size_t>(shortlex_rank(parties, n_parties))];
}

Vec AlphaVector::sector(Mask anc) const {
    size_t p = sector_pos(anc) * sector_size();
    return Vec(coeffs.begin() + static_cast<long>(p), coeffs.begin() + static_cast<long>(p + sector_size()));
}

void AlphaVector::set_sector(Mask anc, const Vec& v) {
    if (v.size() != sector_size()) throw std::invalid_argument("sector has wrong length");
    size_t p = sector_pos(anc) * sector_size();
    std::copy(v.begin(), v.end(), coeffs.begin() + static_cast<long>(p));
}

EntropyFunctional to_functional(const AlphaVector& a) {
    Ground g = a.ground();
    EntropyFunctional f(g);
    for (Mask anc = 1; anc < (Mask(1) << a.n_ancillas); ++anc)
        for (Mask p = 0; p < (Mask(1) << a.n_parties); ++p) f.add(p | (anc << a.n_parties), a.at(anc, p));
    return f;
}

AlphaVector to_alpha(const EntropyFunctional& f, int n, int m) {
    AlphaVector a(n, m);
    if (!(f.ground == a.ground())) throw std::invalid_argument("functional is not on the alpha ground");
    Mask pm = (Mask(1) << n) - 1;
    for (const auto& [mask, c] : f.terms) {
        Mask anc = mask >> n;
        if (anc == 0)
            throw std::invalid_argument("ancilla-free term S(" + f.ground.name(mask) + ") is not part of an alpha vector");
        a.at(anc, mask & pm) = c;
    }
    return a;
}

AlphaVector alpha_from_sectors(int n, const std::vector<Vec>& sectors) {
    int m = sectors.size() == 1 ? 1 : sectors.size() == 3 ? 2 : -1;
    if (m < 0) throw std::invalid_argument("alpha needs 1 or 3 sectors");
    AlphaVector a(n, m);
    for (size_t s = 0; s < sectors.size(); ++s) a.set_sector(shortlex_unrank(static_cast<int>(s) + 1, m), sectors[s]);
    return a;
}

std::string render(const AlphaVector& a) { return render(to_functional(a)); }

AlphaVector parse_alpha(std::string_view text, int n, int m) {
    EntropyFunctional f = parse_functional(text, alpha_ground(n, m));
    try {
        return to_alpha(f, n, m);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
}

bool is_balanced(const AlphaVector& a, const std::string& ancilla) {
    const auto& names = ancilla_labels();
    int k = -1;
    for (int i = 0; i < a.n_ancillas; ++i)
        if (names[i] == ancilla) k = i;
    if (k < 0) throw std::invalid_argument("alpha has no ancilla '" + ancilla + "'");
    Rational s = 0;
    for (Mask anc = 1; anc < (Mask(1) << a.n_ancillas); ++anc) {
        if (!(anc >> k & 1)) continue;
        for (const auto& c : a.sector(anc)) s += c;
    }
    return sgn(s) == 0;
}

bool is_balanced(const AlphaVector& a) {
    for (int i = 0; i < a.n_ancillas; ++i)
        if (!is_balanced(a, ancilla_labels()[i])) return false;
    return true;
}

nlohmann::json to_json(const AlphaVector& a) {
    nlohmann::json j;
    j["parties"] = a.n_parties;
    j["ancillas"] = std::vector<std::string>(ancilla_labels().begin(), ancilla_labels().begin() + a.n_ancillas);
    Ground g = a.ground();
    nlohmann::json coeffs = nlohmann::json::array();
    for (Mask anc : shortlex(a.n_ancillas)) {
        if (!anc) continue;
        for (Mask p : shortlex(a.n_parties))
            coeffs.push_back({g.name(p | (anc << a.n_parties)), a.at(anc, p).get_str()});
    }
    j["coeffs"] = coeffs;
    return j;
}

AlphaVector alpha_from_json(const nlohmann::json& j) {
    int n = j.at("parties").get<int>();
    int m = static_cast<int>(j.at("ancillas").size());
    AlphaVector a(n, m);
    Ground g = a.ground();
    for (const auto& entry : j.at("coeffs")) {
        Mask mask = g.parse_set(entry.at(0).get<std::string>());
        if ((mask >> n) == 0) throw std::invalid_argument("ancilla-free coefficient in alpha JSON");
        a.at(mask >> n, mask & ((Mask(1) << n) - 1)) = parse_rational(entry.at(1).get<std::string>());
    }
    return a;
}

nlohmann::json to_json(const EntropyFunctional& f) {
    nlohmann::json terms = nlohmann::json::array();
    std::vector<Mask> ms;
    for (const auto& [m, c] : f.terms) ms.push_back(m);
    std::sort(ms.begin(), ms.end(), shortlex_less);
    for (Mask m : ms) terms.push_back({f.ground.name(m), f.terms.at(m).get_str()});
    return {{"ground", f.ground.labels}, {"terms", terms}, {"text", render(f)}};
}

} // namespace uac
