#include "uac/prover.hpp"

#include "uac/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace uac {

const char* kind_name(InequalityInstance::Kind k) { return k == InequalityInstance::Kind::Ssa ? "ssa" : "wm"; }

namespace {

std::string cond_text(const Ground& g, Mask x, Mask z) {
    return "S(" + g.name(x) + (z ? "|" + g.name(z) : "") + ")";
}

EntropyFunctional ssa_vector(const Ground& g, int i, int j, Mask K) {
    return cmi(g, Mask(1) << i, Mask(1) << j, K);
}

EntropyFunctional wm_vector(const Ground& g, int i, Mask K, Mask L) {
    Mask bi = Mask(1) << i;
    return cond_entropy(g, bi, K) + cond_entropy(g, bi, L);
}

} // namespace

std::string InequalityInstance::describe() const {
    const Ground& g = vector.ground;
    if (kind == Kind::Ssa)
        return "I(" + g.labels[static_cast<size_t>(i)] + ":" + g.labels[static_cast<size_t>(j)] +
               (K ? "|" + g.name(K) : "") + ") >= 0";
    Mask bi = Mask(1) << i;
    return cond_text(g, bi, K) + " + " + cond_text(g, bi, L) + " >= 0";
}

std::string EqualityInstance::describe() const {
    const Ground& g = vector.ground;
    return "S(" + g.name(J1 | J2) + ") - S(" + g.name(J1) + ") - S(" + g.name(J2) + ") = 0";
}

bool ProofCertificate::uses(InequalityInstance::Kind k) const {
    return std::any_of(lambdas.begin(), lambdas.end(), [&](const auto& p) { return p.first.kind == k; });
}

std::vector<InequalityInstance> instances(const Ground& g) {
    const int N = g.size();
    if (N > kMaxProverSystems)
        throw std::invalid_argument("instances: at most " + std::to_string(kMaxProverSystems) + " systems");
    if (N < 2) throw std::invalid_argument("instances: need at least two systems");
    const Mask full = g.full();
    const auto& order = shortlex(N);
    std::vector<InequalityInstance> out;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            Mask rest = full & ~(Mask(1) << i) & ~(Mask(1) << j);
            for (Mask K : order) {
                if (K & ~rest) continue;
                InequalityInstance in;
                in.kind = InequalityInstance::Kind::Ssa;
                in.i = i;
                in.j = j;
                in.K = K;
                in.vector = ssa_vector(g, i, j, K);
                out.push_back(std::move(in));
            }
        }
    for (int i = 0; i < N; ++i) {
        Mask rest = full & ~(Mask(1) << i);
        Mask first = rest & (~rest + 1);
        for (Mask K : order) {
            if ((K & ~rest) || !(K & first)) continue;
            InequalityInstance in;
            in.kind = InequalityInstance::Kind::Wm;
            in.i = i;
            in.K = K;
            in.L = rest & ~K;
            in.vector = wm_vector(g, i, in.K, in.L);
            out.push_back(std::move(in));
        }
    }
    return out;
}

std::vector<EqualityInstance> independence_equalities(const Ground& g) {
    std::vector<EqualityInstance> out;
    if (!g.copy1 || !g.copy2) return out;
    const auto& order = shortlex(g.size());
    for (Mask J1 : order) {
        if (!J1 || (J1 & ~g.copy1)) continue;
        for (Mask J2 : order) {
            if (!J2 || (J2 & ~g.copy2)) continue;
            EqualityInstance e;
            e.J1 = J1;
            e.J2 = J2;
            e.vector = entropy_term(g, J1 | J2) - entropy_term(g, J1) - entropy_term(g, J2);
            out.push_back(std::move(e));
        }
    }
    return out;
}

// ------------------------------------------------------------------ prover

Prover::Prover(const Ground& g) : Prover(g, independence_equalities(g)) {}

Prover::Prover(const Ground& g, std::vector<EqualityInstance> eqs)
    : ground_(g), ins_(instances(g)), eqs_(std::move(eqs)) {
    const Mask nm = Mask(1) << g.size();
    std::vector<bool> pivot(nm, false);
    for (const auto& e : eqs_) {
        if (!e.J1 || !e.J2 || (e.J1 & ~g.copy1) || (e.J2 & ~g.copy2))
            throw std::invalid_argument("equality must pair copy-1 and copy-2 party sets");
        if (pivot[e.J1 | e.J2]) throw std::invalid_argument("duplicate equality");
        pivot[e.J1 | e.J2] = true;
    }
    row_of_.assign(nm, -1);
    for (Mask m = 1; m < nm; ++m)
        if (!pivot[m]) {
            row_of_[m] = static_cast<int>(row_mask_.size());
            row_mask_.push_back(m);
        }
    std::map<std::vector<std::pair<int, long>>, size_t> seen;
    for (size_t k = 0; k < ins_.size(); ++k) {
        std::vector<Rational> p = project(ins_[k].vector);
        std::vector<std::pair<int, long>> col;
        for (size_t r = 0; r < p.size(); ++r)
            if (sgn(p[r]) != 0) col.emplace_back(static_cast<int>(r), p[r].get_num().get_si());
        if (col.empty() || seen.count(col)) continue;
        seen.emplace(col, k);
        cols_.push_back(std::move(col));
        col_instance_.push_back(k);
    }
}

std::vector<Rational> Prover::project(const EntropyFunctional& f) const {
    std::vector<Rational> out(row_mask_.size(), Rational(0));
    for (const auto& [m, c] : f.terms) {
        int r = row_of_[m];
        if (r >= 0) {
            out[static_cast<size_t>(r)] += c;
        } else {
            out[static_cast<size_t>(row_of_[m & ground_.copy1])] += c;
            out[static_cast<size_t>(row_of_[m & ground_.copy2])] += c;
        }
    }
    return out;
}

Vec Prover::lift(const std::vector<Rational>& y) const {
    Vec h(row_of_.size(), Rational(0));
    for (size_t r = 0; r < row_mask_.size(); ++r) h[row_mask_[r]] = y[r];
    for (const auto& e : eqs_) h[e.J1 | e.J2] = h[e.J1] + h[e.J2];
    return h;
}

std::optional<ProofCertificate> Prover::make_certificate(const std::vector<Rational>& lambda_cols,
                                                         const EntropyFunctional& target) const {
    ProofCertificate cert;
    EntropyFunctional residual = -target;
    for (size_t c = 0; c < lambda_cols.size(); ++c) {
        if (sgn(lambda_cols[c]) == 0) continue;
        if (sgn(lambda_cols[c]) < 0) return std::nullopt;
        const auto& in = ins_[col_instance_[c]];
        cert.lambdas.emplace_back(in, lambda_cols[c]);
        residual = residual - in.vector * lambda_cols[c];
    }
    for (const auto& e : eqs_) {
        Rational mu = residual.coeff(e.J1 | e.J2);
        if (sgn(mu) == 0) continue;
        cert.mus.emplace_back(e, mu);
    }
    if (!verify(cert, target)) return std::nullopt;
    return cert;
}

bool Prover::witness_ok(const std::vector<Rational>& y, const std::vector<Rational>& b) const {
    Rational yb = 0;
    for (size_t r = 0; r < b.size(); ++r) yb += y[r] * b[r];
    if (sgn(yb) >= 0) return false;
    for (const auto& col : cols_) {
        Rational s = 0;
        for (const auto& [r, v] : col) s += y[static_cast<size_t>(r)] * v;
        if (sgn(s) < 0) return false;
    }
    return true;
}

namespace {

Rational rationalize(double x) {
    if (!std::isfinite(x)) return 0;
    bool neg = x < 0;
    double a = std::fabs(x);
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = a;
    for (int it = 0; it < 40; ++it) {
        double fl = std::floor(r);
        if (fl > 1e12) break;
        long ai = static_cast<long>(fl);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > (1L << 24)) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if (std::fabs(a - static_cast<double>(p1) / static_cast<double>(q1)) < 1e-11 * std::max(1.0, a)) break;
        double frac = r - fl;
        if (frac < 1e-14) break;
        r = 1.0 / frac;
    }
    if (q1 == 0) return 0;
    Rational out(p1, q1);
    out.canonicalize();
    return neg ? Rational(-out) : out;
}

// Phase-one revised simplex on {A x = b, x >= 0} with rows pre-signed so b >= 0.
struct FloatResult {
    bool feasible = false;
    bool ok = false;
    std::vector<double> x;        // structural values
    std::vector<double> pi;       // phase-one duals of the signed system
    std::vector<size_t> basis;    // column indices, artificials offset by n
};

FloatResult float_phase1(const std::vector<std::vector<std::pair<int, long>>>& cols, const std::vector<int>& sign,
                         const std::vector<double>& b, size_t m) {
    const size_t n = cols.size();
    const long M = static_cast<long>(m);
    const double tol_rc = 1e-9, tol_piv = 1e-7, tol_x = 1e-10;
    std::vector<size_t> basis(m);
    std::vector<long> where(n + m, -1);
    for (size_t r = 0; r < m; ++r) {
        basis[r] = n + r;
        where[n + r] = static_cast<long>(r);
    }
    Eigen::MatrixXd Binv = Eigen::MatrixXd::Identity(M, M);
    Eigen::VectorXd bv(M), x(M), pi(M), d(M);

    auto refactor = [&] {
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(M, M);
        for (long c = 0; c < M; ++c) {
            size_t j = basis[static_cast<size_t>(c)];
            if (j < n) {
                for (const auto& [r, v] : cols[j]) B(r, c) = static_cast<double>(sign[static_cast<size_t>(r)] * v);
            } else {
                B(static_cast<long>(j - n), c) = 1.0;
            }
        }
        Binv = B.partialPivLu().inverse();
        x = Binv * bv;
        for (long r = 0; r < M; ++r)
            if (std::fabs(x(r)) < tol_x) x(r) = 0.0;
    };
    auto duals = [&] {
        pi.setZero();
        for (long r = 0; r < M; ++r)
            if (basis[static_cast<size_t>(r)] >= n) pi += Binv.row(r).transpose();
    };
    auto reduced = [&](size_t j) {
        double s = 0;
        for (const auto& [r, v] : cols[j]) s += pi(r) * static_cast<double>(sign[static_cast<size_t>(r)] * v);
        return -s;
    };

    // Returns true at a verified optimum for the current right-hand side.
    auto run = [&](int max_iter) {
        int degenerate = 0, since_refactor = 0;
        refactor();
        for (int it = 0; it < max_iter; ++it) {
            if (since_refactor >= 50) {
                refactor();
                since_refactor = 0;
            }
            duals();
            size_t enter = n;
            bool bland = degenerate > 50;
            double best = -tol_rc;
            for (size_t j = 0; j < n; ++j) {
                if (where[j] >= 0) continue;
                double rc = reduced(j);
                if (rc < best) {
                    enter = j;
                    if (bland) break;
                    best = rc;
                }
            }
            if (enter == n) {
                if (since_refactor == 0) return true;
                since_refactor = 50;
                continue;
            }
            d.setZero();
            for (const auto& [r, v] : cols[enter]) d += Binv.col(r) * static_cast<double>(sign[static_cast<size_t>(r)] * v);
            double theta_max = std::numeric_limits<double>::infinity();
            for (long r = 0; r < M; ++r)
                if (d(r) > tol_piv) theta_max = std::min(theta_max, (std::max(x(r), 0.0) + tol_x) / d(r));
            if (!std::isfinite(theta_max)) return false;
            long leave = -1;
            for (long r = 0; r < M; ++r) {
                if (d(r) <= tol_piv || std::max(x(r), 0.0) / d(r) > theta_max) continue;
                if (leave < 0 || (bland ? basis[static_cast<size_t>(r)] < basis[static_cast<size_t>(leave)]
                                        : d(r) > d(leave)))
                    leave = r;
            }
            if (leave < 0) return false;
            double theta = std::max(0.0, x(leave) / d(leave));
            degenerate = theta < 1e-12 ? degenerate + 1 : 0;
            x -= theta * d;
            x(leave) = theta;
            double piv = d(leave);
            Binv.row(leave) /= piv;
            for (long r = 0; r < M; ++r)
                if (r != leave && d(r) != 0.0) Binv.row(r) -= d(r) * Binv.row(leave);
            where[basis[static_cast<size_t>(leave)]] = -1;
            basis[static_cast<size_t>(leave)] = enter;
            where[enter] = leave;
            ++since_refactor;
        }
        return false;
    };

    double scale = 1.0;
    for (double v : b) scale = std::max(scale, v);
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> jitter(1e-6, 1e-5);
    for (long r = 0; r < M; ++r) bv(r) = b[static_cast<size_t>(r)] + scale * jitter(rng);
    run(20000);
    for (long r = 0; r < M; ++r) bv(r) = b[static_cast<size_t>(r)];
    FloatResult res;
    res.ok = run(20000);
    res.basis = basis;
    res.x.assign(n, 0.0);
    double obj = 0;
    for (long r = 0; r < M; ++r) {
        size_t j = basis[static_cast<size_t>(r)];
        if (j < n) res.x[j] = x(r);
        else obj += x(r);
    }
    res.pi.resize(m);
    for (long r = 0; r < M; ++r) res.pi[static_cast<size_t>(r)] = pi(r);
    res.feasible = res.ok && obj < 1e-9 * scale;
    return res;
}

struct ExactResult {
    bool feasible = false;
    std::vector<Rational> x;   // structural
    std::vector<Rational> pi;  // duals of the signed system
};

// Revised phase-one simplex in exact arithmetic with Bland's rule.
ExactResult exact_phase1(const std::vector<std::vector<std::pair<int, long>>>& cols, const std::vector<int>& sign,
                         const std::vector<Rational>& b, size_t m, const std::vector<size_t>& warm) {
    const size_t n = cols.size();
    auto column = [&](size_t j) {
        std::vector<Rational> c(m, Rational(0));
        if (j < n) {
            for (const auto& [r, v] : cols[j]) c[static_cast<size_t>(r)] = sign[static_cast<size_t>(r)] * v;
        } else {
            c[j - n] = 1;
        }
        return c;
    };
    std::vector<std::vector<Rational>> Binv(m, std::vector<Rational>(m, Rational(0)));
    std::vector<size_t> basis(m);
    std::vector<Rational> xb(m);
    auto cold = [&] {
        for (size_t r = 0; r < m; ++r) {
            std::fill(Binv[r].begin(), Binv[r].end(), Rational(0));
            Binv[r][r] = 1;
            basis[r] = n + r;
            xb[r] = b[r];
        }
    };
    bool warmed = false;
    if (warm.size() == m) {
        // Gauss-Jordan on [B | I]
        std::vector<std::vector<Rational>> M(m, std::vector<Rational>(2 * m, Rational(0)));
        for (size_t c = 0; c < m; ++c) {
            auto col = column(warm[c]);
            for (size_t r = 0; r < m; ++r) M[r][c] = col[r];
        }
        for (size_t r = 0; r < m; ++r) M[r][m + r] = 1;
        bool singular = false;
        for (size_t c = 0; c < m && !singular; ++c) {
            size_t p = c;
            while (p < m && sgn(M[p][c]) == 0) ++p;
            if (p == m) {
                singular = true;
                break;
            }
            std::swap(M[c], M[p]);
            Rational inv = 1 / M[c][c];
            for (size_t j = c; j < 2 * m; ++j)
                if (sgn(M[c][j]) != 0) M[c][j] *= inv;
            for (size_t r = 0; r < m; ++r) {
                if (r == c || sgn(M[r][c]) == 0) continue;
                Rational f = M[r][c];
                for (size_t j = c; j < 2 * m; ++j)
                    if (sgn(M[c][j]) != 0) M[r][j] -= f * M[c][j];
            }
        }
        if (!singular) {
            for (size_t r = 0; r < m; ++r) {
                Binv[r].assign(M[r].begin() + static_cast<long>(m), M[r].end());
                basis[r] = warm[r];
                xb[r] = 0;
                for (size_t k = 0; k < m; ++k)
                    if (sgn(Binv[r][k]) != 0) xb[r] += Binv[r][k] * b[k];
            }
            warmed = std::all_of(xb.begin(), xb.end(), [](const Rational& v) { return sgn(v) >= 0; });
        }
    }
    if (!warmed) cold();

    std::vector<Rational> pi(m);
    while (true) {
        for (size_t k = 0; k < m; ++k) {
            pi[k] = 0;
            for (size_t r = 0; r < m; ++r)
                if (basis[r] >= n && sgn(Binv[r][k]) != 0) pi[k] += Binv[r][k];
        }
        size_t enter = n;
        for (size_t j = 0; j < n && enter == n; ++j) {
            Rational s = 0;
            for (const auto& [r, v] : cols[j]) s += pi[static_cast<size_t>(r)] * (sign[static_cast<size_t>(r)] * v);
            if (sgn(s) > 0) enter = j;  // reduced cost 0 - s < 0
        }
        if (enter == n) break;
        std::vector<Rational> d(m, Rational(0));
        for (const auto& [r, v] : cols[enter]) {
            long sv = sign[static_cast<size_t>(r)] * v;
            for (size_t i = 0; i < m; ++i)
                if (sgn(Binv[i][static_cast<size_t>(r)]) != 0) d[i] += Binv[i][static_cast<size_t>(r)] * sv;
        }
        size_t leave = m;
        Rational best;
        for (size_t i = 0; i < m; ++i) {
            if (sgn(d[i]) <= 0) continue;
            Rational ratio = xb[i] / d[i];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == m) throw std::logic_error("phase-one simplex unbounded");
        Rational piv = d[leave];
        for (auto& v : Binv[leave])
            if (sgn(v) != 0) v /= piv;
        xb[leave] /= piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == leave || sgn(d[i]) == 0) continue;
            Rational f = d[i];
            for (size_t k = 0; k < m; ++k)
                if (sgn(Binv[leave][k]) != 0) Binv[i][k] -= f * Binv[leave][k];
            xb[i] -= f * xb[leave];
        }
        basis[leave] = enter;
    }
    ExactResult res;
    res.x.assign(n, Rational(0));
    Rational obj = 0;
    for (size_t r = 0; r < m; ++r) {
        if (basis[r] < n) res.x[basis[r]] = xb[r];
        else obj += xb[r];
    }
    res.feasible = sgn(obj) == 0;
    res.pi = pi;
    return res;
}

} // namespace

ProveResult Prover::prove(const EntropyFunctional& target) const {
    if (target.ground.labels != ground_.labels)
        throw std::invalid_argument("prove: target is not over the prover's ground set");
    ProveResult out;
    const std::vector<Rational> b = project(-target);
    const size_t m = b.size();
    if (std::all_of(b.begin(), b.end(), [](const Rational& v) { return sgn(v) == 0; })) {
        auto cert = make_certificate(std::vector<Rational>(cols_.size(), Rational(0)), target);
        if (cert) {
            out.proved = true;
            out.certificate = std::move(cert);
            return out;
        }
    }
    std::vector<int> sign(m);
    std::vector<double> bf(m);
    std::vector<Rational> bs(m);
    for (size_t r = 0; r < m; ++r) {
        sign[r] = sgn(b[r]) < 0 ? -1 : 1;
        bs[r] = b[r] * sign[r];
        bf[r] = bs[r].get_d();
    }
    FloatResult fr = float_phase1(cols_, sign, bf, m);

    auto witness_from_pi = [&](const std::vector<Rational>& pi) -> std::optional<DualWitness> {
        std::vector<Rational> y(m);
        for (size_t r = 0; r < m; ++r) y[r] = -pi[r] * sign[r];
        if (!witness_ok(y, b)) return std::nullopt;
        return DualWitness{lift(y)};
    };

    if (fr.ok && fr.feasible) {
        std::vector<Rational> lam(cols_.size(), Rational(0));
        for (size_t j = 0; j < fr.x.size(); ++j)
            if (fr.x[j] > 1e-12) lam[j] = rationalize(fr.x[j]);
        if (auto cert = make_certificate(lam, target)) {
            out.proved = true;
            out.certificate = std::move(cert);
            return out;
        }
        std::vector<size_t> support;
        for (size_t j = 0; j < fr.x.size(); ++j)
            if (fr.x[j] > 1e-9) support.push_back(j);
        std::vector<Vec> aug(m, Vec(support.size() + 1, Rational(0)));
        for (size_t s = 0; s < support.size(); ++s)
            for (const auto& [r, v] : cols_[support[s]]) aug[static_cast<size_t>(r)][s] = v;
        for (size_t r = 0; r < m; ++r) aug[r][support.size()] = b[r];
        Rref R = rref(aug, support.size() + 1);
        if (R.pivots.empty() || R.pivots.back() != support.size()) {
            std::fill(lam.begin(), lam.end(), Rational(0));
            for (size_t i = 0; i < R.pivots.size(); ++i) lam[support[R.pivots[i]]] = R.rows[i][support.size()];
            if (auto cert = make_certificate(lam, target)) {
                out.proved = true;
                out.certificate = std::move(cert);
                return out;
            }
        }
    } else if (fr.ok) {
        std::vector<Rational> pi(m);
        for (size_t r = 0; r < m; ++r) pi[r] = rationalize(fr.pi[r]);
        if (auto w = witness_from_pi(pi)) {
            out.witness = std::move(w);
            return out;
        }
    }

    ExactResult er = exact_phase1(cols_, sign, bs, m, fr.basis);
    if (er.feasible) {
        auto cert = make_certificate(er.x, target);
        if (!cert) throw std::logic_error("prove: exact solution failed verification");
        out.proved = true;
        out.certificate = std::move(cert);
    } else {
        auto w = witness_from_pi(er.pi);
        if (!w) throw std::logic_error("prove: exact dual witness failed verification");
        out.witness = std::move(w);
    }
    return out;
}

bool verify(const ProofCertificate& cert, const EntropyFunctional& target) {
    EntropyFunctional total = target;
    for (const auto& [in, lam] : cert.lambdas) {
        if (sgn(lam) < 0) return false;
        const Ground& g = in.vector.ground;
        if (g.labels != target.ground.labels) return false;
        EntropyFunctional expect = in.kind == InequalityInstance::Kind::Ssa ? ssa_vector(g, in.i, in.j, in.K)
                                                                            : wm_vector(g, in.i, in.K, in.L);
        if (!(expect == in.vector)) return false;
        total = total + in.vector * lam;
    }
    for (const auto& [e, mu] : cert.mus) {
        const Ground& g = e.vector.ground;
        if (g.labels != target.ground.labels) return false;
        if (!e.J1 || !e.J2 || (e.J1 & ~g.copy1) || (e.J2 & ~g.copy2)) return false;
        EntropyFunctional expect = entropy_term(g, e.J1 | e.J2) - entropy_term(g, e.J1) - entropy_term(g, e.J2);
        if (!(expect == e.vector)) return false;
        total = total + e.vector * mu;
    }
    return total.empty();
}

bool verify_witness(const DualWitness& w, const EntropyFunctional& target, const Prover& p) {
    if (w.h.size() != (size_t(1) << p.ground().size())) return false;
    auto h = [&](Mask m) { return w.h[m]; };
    for (const auto& in : p.inequality_instances())
        if (sgn(in.vector.eval(h)) < 0) return false;
    for (const auto& e : p.equality_instances())
        if (sgn(e.vector.eval(h)) != 0) return false;
    return sgn(target.eval(h)) > 0;
}

std::optional<LinearState> refute_classical(const EntropyFunctional& target, const Ground& g,
                                            const RefuteOptions& opt) {
    std::optional<LinearState> found;
    EnumOptions eo;
    eo.max_ancilla_rows = opt.max_ancilla_rows;
    eo.budget = opt.budget;
    std::vector<std::pair<Mask, Rational>> terms(target.terms.begin(), target.terms.end());
    enumerate_states(opt.q, opt.max_symbols, g, eo, [&](const LinearState& s) {
        Rational v = 0;
        for (const auto& [m, c] : terms) v += c * s.rank_of(m);
        if (sgn(v) > 0) {
            found = s;
            return false;
        }
        return true;
    });
    return found;
}

nlohmann::json to_json(const ProofCertificate& c) {
    nlohmann::json lam = nlohmann::json::array(), mus = nlohmann::json::array(), kinds = nlohmann::json::array();
    for (const auto& [in, v] : c.lambdas)
        lam.push_back({{"instance", in.describe()}, {"kind", kind_name(in.kind)}, {"coeff", to_string(v)}});
    for (const auto& [e, v] : c.mus) mus.push_back({{"equality", e.describe()}, {"coeff", to_string(v)}});
    for (auto k : {InequalityInstance::Kind::Ssa, InequalityInstance::Kind::Wm})
        if (c.uses(k)) kinds.push_back(kind_name(k));
    return {{"lambdas", lam}, {"mus", mus}, {"kinds_used", kinds}};
}

nlohmann::json to_json(const DualWitness& w, const Ground& g) {
    nlohmann::json h = nlohmann::json::object();
    for (Mask m : shortlex(g.size()))
        if (m) h[g.name(m)] = to_string(w.h[m]);
    return {{"h", h}};
}

} // namespace uac
