#include "uac/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace uac {

Rref rref(std::vector<Vec> m, size_t ncols) {
    Rref out;
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && sgn(m[p][c]) == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        Rational inv = 1 / m[r][c];
        for (size_t j = c; j < ncols; ++j)
            if (sgn(m[r][j]) != 0) m[r][j] *= inv;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c];
            for (size_t j = c; j < ncols; ++j)
                if (sgn(m[r][j]) != 0) m[i][j] -= f * m[r][j];
        }
        out.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

size_t rank(const std::vector<Vec>& m, size_t ncols) { return rref(m, ncols).pivots.size(); }

std::vector<Vec> nullspace(const std::vector<Vec>& m, size_t ncols) {
    Rref R = rref(m, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (size_t p : R.pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        Vec v(ncols, Rational(0));
        v[f] = 1;
        for (size_t i = 0; i < R.pivots.size(); ++i) v[R.pivots[i]] = -R.rows[i][f];
        basis.push_back(primitive(v));
    }
    return basis;
}

std::vector<Vec> canonical_span(const std::vector<Vec>& m, size_t ncols) {
    std::vector<Vec> out;
    for (auto& row : rref(m, ncols).rows) out.push_back(primitive(row));
    return out;
}

Vec reduce_mod(const Vec& x, const std::vector<Vec>& basis) {
    if (basis.empty()) return primitive(x);
    size_t n = x.size();
    std::vector<Vec> rev;
    for (const auto& b : basis) rev.emplace_back(b.rbegin(), b.rend());
    Rref R = rref(rev, n);
    Vec xr(x.rbegin(), x.rend());
    for (size_t i = 0; i < R.pivots.size(); ++i) {
        size_t p = R.pivots[i];
        if (sgn(xr[p]) == 0) continue;
        Rational f = xr[p];
        for (size_t j = 0; j < n; ++j)
            if (sgn(R.rows[i][j]) != 0) xr[j] -= f * R.rows[i][j];
    }
    return primitive(Vec(xr.rbegin(), xr.rend()));
}

bool same_span(const std::vector<Vec>& a, const std::vector<Vec>& b, size_t ncols) {
    size_t ra = rank(a, ncols), rb = rank(b, ncols);
    if (ra != rb) return false;
    std::vector<Vec> both = a;
    both.insert(both.end(), b.begin(), b.end());
    return rank(both, ncols) == ra;
}

} // namespace uac
