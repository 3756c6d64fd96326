#include "uac/polycone.hpp"

#include "uac/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <stdexcept>

namespace uac {

namespace {

struct Bits {
    std::vector<uint64_t> w;
    explicit Bits(size_t n = 0) : w((n + 63) / 64, 0) {}
    void set(size_t i) { w[i / 64] |= uint64_t(1) << (i % 64); }
    bool test(size_t i) const { return w[i / 64] >> (i % 64) & 1; }
    size_t count() const {
        size_t c = 0;
        for (auto x : w) c += static_cast<size_t>(std::popcount(x));
        return c;
    }
    Bits operator&(const Bits& o) const {
        Bits r;
        r.w.resize(w.size());
        for (size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] & o.w[i];
        return r;
    }
    bool subset_of(const Bits& o) const {
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i] & ~o.w[i]) return false;
        return true;
    }
};

struct Ray {
    Vec v;
    Bits z;
};

void check_vectors(int dim, const std::vector<Vec>& vs, const char* what) {
    for (const auto& v : vs) {
        if (static_cast<int>(v.size()) != dim)
            throw std::invalid_argument(std::string("cone: ") + what + " has wrong dimension");
    }
}

void check_dim(int dim) {
    if (dim < 1) throw std::invalid_argument("cone: dimension must be positive");
    if (dim > kMaxConeDim) throw std::invalid_argument("cone: dimension exceeds " + std::to_string(kMaxConeDim));
}

bool shortlex_vec_less(const Vec& a, const Vec& b) {
    auto nz = [](const Vec& v) {
        return std::count_if(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; });
    };
    auto na = nz(a), nb = nz(b);
    if (na != nb) return na < nb;
    return lex_less(b, a);
}

Vec combine(const Vec& x, const Vec& y, const Rational& cx, const Rational& cy) {
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = cx * x[i] + cy * y[i];
    return out;
}

// Extreme rays of the pointed cone {y : A y >= 0} in R^d.
std::vector<Vec> dd_pointed(const std::vector<Vec>& A, size_t d) {
    const size_t m = A.size();
    std::vector<Vec> lin;
    for (size_t i = 0; i < d; ++i) {
        Vec e(d, Rational(0));
        e[i] = 1;
        lin.push_back(std::move(e));
    }
    std::vector<Ray> rays;
    for (size_t k = 0; k < m; ++k) {
        const Vec& a = A[k];
        size_t pick = lin.size();
        Rational al0;
        for (size_t i = 0; i < lin.size(); ++i) {
            al0 = dot(a, lin[i]);
            if (sgn(al0) != 0) {
                pick = i;
                break;
            }
        }
        if (pick < lin.size()) {
            Vec l0 = lin[pick];
            if (sgn(al0) < 0) {
                for (auto& x : l0) x = -x;
                al0 = -al0;
            }
            lin.erase(lin.begin() + static_cast<long>(pick));
            for (auto& l : lin) {
                Rational c = dot(a, l);
                if (sgn(c) != 0) l = primitive(combine(l, l0, al0, -c));
            }
            for (auto& r : rays) {
                Rational c = dot(a, r.v);
                if (sgn(c) != 0) r.v = primitive(combine(r.v, l0, al0, -c));
                r.z.set(k);
            }
            Ray nr{primitive(l0), Bits(m)};
            for (size_t j = 0; j < k; ++j) nr.z.set(j);
            rays.push_back(std::move(nr));
            continue;
        }
        std::vector<Rational> s(rays.size());
        std::vector<size_t> pos, neg;
        std::vector<Ray> next;
        for (size_t i = 0; i < rays.size(); ++i) {
            s[i] = dot(a, rays[i].v);
            int sg = sgn(s[i]);
            if (sg > 0) pos.push_back(i);
            else if (sg < 0) neg.push_back(i);
        }
        const long need = static_cast<long>(d) - static_cast<long>(lin.size()) - 2;
        for (size_t p : pos)
            for (size_t n : neg) {
                Bits common = rays[p].z & rays[n].z;
                if (static_cast<long>(common.count()) < need) continue;
                bool adjacent = true;
                for (size_t r = 0; r < rays.size() && adjacent; ++r)
                    if (r != p && r != n && common.subset_of(rays[r].z)) adjacent = false;
                if (!adjacent) continue;
                Ray nr{primitive(combine(rays[n].v, rays[p].v, s[p], -s[n])), common};
                nr.z.set(k);
                next.push_back(std::move(nr));
            }
        std::vector<Ray> kept;
        for (size_t i = 0; i < rays.size(); ++i) {
            int sg = sgn(s[i]);
            if (sg < 0) continue;
            if (sg == 0) rays[i].z.set(k);
            kept.push_back(std::move(rays[i]));
        }
        for (auto& r : next) kept.push_back(std::move(r));
        rays = std::move(kept);
    }
    if (!lin.empty()) throw std::logic_error("dualize: residual lineality in pointed frame");
    std::vector<Vec> out;
    for (auto& r : rays) out.push_back(std::move(r.v));
    return out;
}

} // namespace

std::vector<Vec> ConeV::generators() const {
    std::vector<Vec> g = rays;
    for (const auto& l : lineality) {
        g.push_back(l);
        Vec neg = l;
        for (auto& x : neg) x = -x;
        g.push_back(std::move(neg));
    }
    return g;
}

ConeV canonical(ConeV v) {
    v.lineality = canonical_span(v.lineality, static_cast<size_t>(v.dim));
    std::set<Vec, decltype(&lex_less)> seen(&lex_less);
    std::vector<Vec> rays;
    for (const auto& r : v.rays) {
        Vec c = reduce_mod(r, v.lineality);
        if (is_zero(c)) continue;
        if (seen.insert(c).second) rays.push_back(std::move(c));
    }
    std::sort(rays.begin(), rays.end(), shortlex_vec_less);
    v.rays = std::move(rays);
    return v;
}

ConeV dualize(const ConeH& h) {
    check_dim(h.dim);
    check_vectors(h.dim, h.ineqs, "inequality");
    check_vectors(h.dim, h.eqs, "equality");
    const size_t n = static_cast<size_t>(h.dim);

    std::set<Vec, decltype(&lex_less)> uniq(&lex_less);
    for (const auto& a : h.ineqs) {
        if (is_zero(a)) throw std::invalid_argument("cone: zero inequality");
        uniq.insert(primitive(a));
    }
    for (const auto& e : h.eqs)
        if (is_zero(e)) throw std::invalid_argument("cone: zero equality");
    std::vector<Vec> N(uniq.begin(), uniq.end());

    std::vector<Vec> NE = N;
    NE.insert(NE.end(), h.eqs.begin(), h.eqs.end());
    std::vector<Vec> L = nullspace(NE, n);
    std::vector<Vec> EL = h.eqs;
    EL.insert(EL.end(), L.begin(), L.end());
    std::vector<Vec> B = nullspace(EL, n);

    ConeV out;
    out.dim = h.dim;
    out.lineality = canonical_span(L, n);
    if (!B.empty()) {
        std::vector<Vec> A;
        for (const auto& a : N) {
            Vec row(B.size());
            for (size_t j = 0; j < B.size(); ++j) row[j] = dot(a, B[j]);
            A.push_back(primitive(row));
        }
        for (const auto& y : dd_pointed(A, B.size())) {
            Vec x(n, Rational(0));
            for (size_t j = 0; j < B.size(); ++j)
                if (sgn(y[j]) != 0)
                    for (size_t i = 0; i < n; ++i) x[i] += y[j] * B[j][i];
            out.rays.push_back(std::move(x));
        }
    }
    return canonical(std::move(out));
}

bool contains(const ConeH& h, const Vec& x) {
    if (static_cast<int>(x.size()) != h.dim) throw std::invalid_argument("contains: dimension mismatch");
    for (const auto& a : h.ineqs)
        if (sgn(dot(a, x)) < 0) return false;
    for (const auto& e : h.eqs)
        if (sgn(dot(e, x)) != 0) return false;
    return true;
}

ConeH to_h(const ConeV& v) {
    check_dim(v.dim);
    ConeH d;
    d.dim = v.dim;
    d.ineqs = v.rays;
    d.eqs = canonical_span(v.lineality, static_cast<size_t>(v.dim));
    ConeV facets = dualize(d);
    return ConeH{v.dim, facets.rays, facets.lineality};
}

bool contains(const ConeV& v, const Vec& x) {
    if (static_cast<int>(x.size()) != v.dim) throw std::invalid_argument("contains: dimension mismatch");
    return contains(to_h(v), x);
}

ConeV cone_from_generators(int dim, const std::vector<Vec>& gens) {
    check_dim(dim);
    check_vectors(dim, gens, "generator");
    ConeV raw{dim, {}, {}};
    for (const auto& g : gens)
        if (!is_zero(g)) raw.rays.push_back(g);
    if (raw.rays.empty()) return raw;
    return dualize(to_h(raw));
}

ConeH direct_sum(const std::vector<ConeH>& parts) {
    ConeH out;
    for (const auto& p : parts) out.dim += p.dim;
    size_t off = 0;
    auto embed = [&](const Vec& v) {
        Vec x(static_cast<size_t>(out.dim), Rational(0));
        std::copy(v.begin(), v.end(), x.begin() + static_cast<long>(off));
        return x;
    };
    for (const auto& p : parts) {
        for (const auto& a : p.ineqs) out.ineqs.push_back(embed(a));
        for (const auto& e : p.eqs) out.eqs.push_back(embed(e));
        off += static_cast<size_t>(p.dim);
    }
    return out;
}

ConeV direct_sum(const std::vector<ConeV>& parts) {
    ConeV out;
    for (const auto& p : parts) out.dim += p.dim;
    size_t off = 0;
    auto embed = [&](const Vec& v) {
        Vec x(static_cast<size_t>(out.dim), Rational(0));
        std::copy(v.begin(), v.end(), x.begin() + static_cast<long>(off));
        return x;
    };
    for (const auto& p : parts) {
        for (const auto& r : p.rays) out.rays.push_back(embed(r));
        for (const auto& l : p.lineality) out.lineality.push_back(embed(l));
        off += static_cast<size_t>(p.dim);
    }
    return canonical(std::move(out));
}

bool equal_cones(const ConeV& u, const ConeV& v) {
    if (u.dim != v.dim) return false;
    ConeV cu = canonical(u), cv = canonical(v);
    if (cu.lineality == cv.lineality && cu.rays == cv.rays) return true;
    ConeH hu = to_h(cu), hv = to_h(cv);
    for (const auto& g : cu.generators())
        if (!contains(hv, g)) return false;
    for (const auto& g : cv.generators())
        if (!contains(hu, g)) return false;
    return true;
}

std::vector<size_t> redundant_inequalities(const ConeH& h, const ConeV& v) {
    const size_t n = static_cast<size_t>(h.dim);
    std::vector<Vec> gens = v.generators();
    size_t cone_dim = rank(gens, n);
    std::vector<size_t> out;
    std::vector<std::vector<bool>> seen;
    for (size_t i = 0; i < h.ineqs.size(); ++i) {
        std::vector<Vec> tight = v.lineality;
        std::vector<bool> pattern;
        bool implicit_eq = true;
        for (const auto& r : v.rays) {
            bool t = sgn(dot(h.ineqs[i], r)) == 0;
            pattern.push_back(t);
            if (t) tight.push_back(r);
            else implicit_eq = false;
        }
        if (implicit_eq || cone_dim == 0 || rank(tight, n) + 1 != cone_dim ||
            std::find(seen.begin(), seen.end(), pattern) != seen.end()) {
            out.push_back(i);
            continue;
        }
        seen.push_back(pattern);
    }
    return out;
}

namespace {

nlohmann::json vecs_json(const std::vector<Vec>& vs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : vs) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : v) row.push_back(to_string(x));
        a.push_back(row);
    }
    return a;
}

std::vector<Vec> vecs_from_json(const nlohmann::json& j) {
    std::vector<Vec> out;
    for (const auto& row : j) {
        Vec v;
        for (const auto& x : row) v.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long>()));
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

nlohmann::json to_json(const ConeH& h) {
    return {{"dim", h.dim}, {"ineqs", vecs_json(h.ineqs)}, {"eqs", vecs_json(h.eqs)}};
}

nlohmann::json to_json(const ConeV& v) {
    return {{"dim", v.dim}, {"rays", vecs_json(v.rays)}, {"lineality", vecs_json(v.lineality)}};
}

ConeH cone_h_from_json(const nlohmann::json& j) {
    ConeH h;
    h.dim = j.at("dim").get<int>();
    h.ineqs = vecs_from_json(j.value("ineqs", nlohmann::json::array()));
    h.eqs = vecs_from_json(j.value("eqs", nlohmann::json::array()));
    check_vectors(h.dim, h.ineqs, "inequality");
    check_vectors(h.dim, h.eqs, "equality");
    return h;
}

ConeV cone_v_from_json(const nlohmann::json& j) {
    ConeV v;
    v.dim = j.at("dim").get<int>();
    v.rays = vecs_from_json(j.value("rays", nlohmann::json::array()));
    v.lineality = vecs_from_json(j.value("lineality", nlohmann::json::array()));
    check_vectors(v.dim, v.rays, "ray");
    check_vectors(v.dim, v.lineality, "lineality vector");
    return v;
}

} // namespace uac
