#include "uac/linear_state.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace uac {

namespace {

int inv_mod(int a, int q) {
    for (int x = 1; x < q; ++x)
        if (a * x % q == 1) return x;
    throw std::invalid_argument("non-invertible element");
}

void check_q(int q) {
    if (q != 2 && q != 3) throw std::invalid_argument("field size must be 2 or 3");
}

} // namespace

std::vector<GfRow> gf_rref(std::vector<GfRow> m, int q) {
    if (m.empty()) return m;
    size_t ncols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        int inv = inv_mod(m[r][c], q);
        for (size_t j = c; j < ncols; ++j) m[r][j] = m[r][j] * inv % q;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            int f = m[i][c];
            for (size_t j = c; j < ncols; ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % q + q) % q;
        }
        ++r;
    }
    m.resize(r);
    return m;
}

int gf_rank(std::vector<GfRow> m, int q) {
    if (m.empty()) return 0;
    size_t ncols = m[0].size();
    int r = 0;
    for (size_t c = 0; c < ncols && r < static_cast<int>(m.size()); ++c) {
        size_t p = static_cast<size_t>(r);
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[static_cast<size_t>(r)], m[p]);
        const GfRow& pr = m[static_cast<size_t>(r)];
        int inv = inv_mod(pr[c], q);
        for (size_t i = static_cast<size_t>(r) + 1; i < m.size(); ++i) {
            if (m[i][c] == 0) continue;
            int f = m[i][c] * inv % q;
            for (size_t j = c; j < ncols; ++j) m[i][j] = ((m[i][j] - f * pr[j]) % q + q) % q;
        }
        ++r;
    }
    return r;
}

int LinearState::rank_of(Mask vars) const {
    std::vector<GfRow> stack;
    for (int i = 0; i < ground.size(); ++i)
        if (vars >> i & 1)
            for (const auto& row : rows[static_cast<size_t>(i)]) stack.push_back(row);
    return gf_rank(std::move(stack), q);
}

std::vector<int> LinearState::entropy_vector() const {
    std::vector<int> h(size_t(1) << ground.size(), 0);
    for (Mask m = 1; m < h.size(); ++m) h[m] = rank_of(m);
    return h;
}

bool LinearState::product_ok() const {
    return rank_of(ground.copy1 | ground.copy2) == rank_of(ground.copy1) + rank_of(ground.copy2);
}

namespace {

std::string row_text(const GfRow& r, int q) {
    std::string s;
    for (size_t i = 0; i < r.size(); ++i) {
        if (r[i] == 0) continue;
        std::string sym = "s" + std::to_string(i + 1);
        if (r[i] == 1) s += (s.empty() ? "" : "+") + sym;
        else if (q == 3 && r[i] == 2) s += "-" + sym;
        else s += (s.empty() ? "" : "+") + std::to_string(r[i]) + sym;
    }
    return s.empty() ? "0" : s;
}

} // namespace

std::string LinearState::describe() const {
    std::vector<bool> done(rows.size(), false);
    std::vector<std::string> parts;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (done[i] || rows[i].empty()) continue;
        std::string names = ground.labels[i];
        for (size_t j = i + 1; j < rows.size(); ++j)
            if (!done[j] && rows[j] == rows[i]) {
                names += "=" + ground.labels[j];
                done[j] = true;
            }
        std::string rhs;
        if (rows[i].size() == 1) {
            rhs = row_text(rows[i][0], q);
        } else {
            rhs = "(";
            for (size_t r = 0; r < rows[i].size(); ++r) rhs += (r ? ", " : "") + row_text(rows[i][r], q);
            rhs += ")";
        }
        parts.push_back(names + "=" + rhs);
    }
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? "; " : "") + parts[i];
    return s;
}

Rational entropy(const LinearState& s, Mask vars) { return Rational(s.rank_of(vars)); }

// ------------------------------------------------------------------ parsing

namespace {

struct StateParser {
    std::string_view s;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("state spec: " + what + " at position " + std::to_string(pos));
    }
    void ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool at_minus() const {
        return pos < s.size() &&
               (s[pos] == '-' || (pos + 2 < s.size() && static_cast<unsigned char>(s[pos]) == 0xE2 &&
                                  static_cast<unsigned char>(s[pos + 1]) == 0x88 &&
                                  static_cast<unsigned char>(s[pos + 2]) == 0x92));
    }
    void skip_minus() { pos += s[pos] == '-' ? 1 : 3; }
    int number() {
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected a number");
        return std::stoi(std::string(s.substr(start, pos - start)));
    }
    // linear form: map symbol index -> integer coefficient
    std::map<int, long> form() {
        std::map<int, long> f;
        bool first = true;
        while (true) {
            ws();
            int sign = 1;
            if (pos < s.size() && s[pos] == '+') {
                ++pos;
            } else if (at_minus()) {
                skip_minus();
                sign = -1;
            } else if (!first) {
                break;
            }
            ws();
            long c = 1;
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                c = number();
                ws();
                if (pos < s.size() && s[pos] == '*') ++pos;
                ws();
            }
            if (pos >= s.size() || s[pos] != 's') {
                if (first && c == 0) { // literal 0
                    first = false;
                    continue;
                }
                fail("expected a symbol s<i>");
            }
            ++pos;
            int idx = number();
            if (idx < 1) fail("symbols are numbered from 1");
            f[idx] += sign * c;
            first = false;
        }
        return f;
    }
};

} // namespace

LinearState build_state(int q, std::string_view spec, const Ground& ground) {
    check_q(q);
    LinearState st;
    st.q = q;
    st.ground = ground;
    st.rows.assign(static_cast<size_t>(ground.size()), {});
    std::vector<std::vector<std::map<int, long>>> forms(static_cast<size_t>(ground.size()));
    std::vector<bool> assigned(static_cast<size_t>(ground.size()), false);
    int k = 0;

    StateParser p{spec};
    while (true) {
        p.ws();
        if (p.pos >= spec.size()) break;
        if (spec[p.pos] == ';' || spec[p.pos] == ',') {
            ++p.pos;
            continue;
        }
        // names up to the last '=' of the statement
        std::vector<int> targets;
        std::vector<std::map<int, long>> rhs;
        while (true) {
            p.ws();
            size_t start = p.pos;
            while (p.pos < spec.size() && (std::isalnum(static_cast<unsigned char>(spec[p.pos])))) ++p.pos;
            std::string name(spec.substr(start, p.pos - start));
            p.ws();
            bool is_var = p.pos < spec.size() && spec[p.pos] == '=' && !name.empty() && name[0] != 's';
            if (!is_var) {
                p.pos = start;
                break;
            }
            int idx = ground.index_of(name);
            if (idx < 0) p.fail("unknown variable '" + name + "'");
            targets.push_back(idx);
            ++p.pos;  // '='
        }
        if (targets.empty()) p.fail("expected 'X=...'");
        p.ws();
        if (p.pos < spec.size() && spec[p.pos] == '(') {
            ++p.pos;
            while (true) {
                rhs.push_back(p.form());
                p.ws();
                if (p.pos < spec.size() && spec[p.pos] == ',') {
                    ++p.pos;
                    continue;
                }
                if (p.pos < spec.size() && spec[p.pos] == ')') {
                    ++p.pos;
                    break;
                }
                p.fail("expected ',' or ')'");
            }
        } else {
            rhs.push_back(p.form());
        }
        p.ws();
        if (p.pos < spec.size() && spec[p.pos] != ';' && spec[p.pos] != ',') p.fail("expected ';'");
        for (const auto& f : rhs)
            for (const auto& [i, c] : f) k = std::max(k, i);
        for (int t : targets) {
            if (assigned[static_cast<size_t>(t)]) p.fail("variable '" + ground.labels[static_cast<size_t>(t)] + "' assigned twice");
            assigned[static_cast<size_t>(t)] = true;
            forms[static_cast<size_t>(t)] = rhs;
        }
    }
    st.k = k;
    for (size_t v = 0; v < forms.size(); ++v)
        for (const auto& f : forms[v]) {
            GfRow row(static_cast<size_t>(k), 0);
            for (const auto& [i, c] : f) row[static_cast<size_t>(i - 1)] = static_cast<int>(((c % q) + q) % q);
            if (std::any_of(row.begin(), row.end(), [](int x) { return x != 0; })) st.rows[v].push_back(row);
        }
    if (!st.product_ok())
        throw ConstraintViolation("state correlates copy 1 with copy 2: " + std::string(spec));
    return st;
}

// ----------------------------------------------------------- printed states

namespace {

struct StateList {
    int a, b;
    std::vector<std::pair<int, const char*>> states;
};

#define SIX "A1=s1; B1=s2; C1=s3; A2=s4; B2=s5; C2=s6; "

const std::vector<StateList>& state_table() {
    static const std::vector<StateList> t = {
        {0, 0,
         {{2, "A1=B1=C1=s1; A2=B2=C2=s2; V=s1+s2"},
          {2, "A1=B1=s1; A2=B2=s2; V=s1+s2"},
          {2, "A1=C1=s1; A2=C2=s2; V=s1+s2"},
          {2, "B1=C1=s1; B2=C2=s2; V=s1+s2"},
          {2, "A1=s1; B1=s2; C1=s1+s2; A2=s3; B2=s4; C2=s3+s4; V=s1+s3"},
          {2, "B1=s1; C1=s2; A1=s1+s2; B2=s3; C2=s4; A2=s3+s4; V=s1+s3"},
          {2, "C1=s1; A1=s2; B1=s1+s2; C2=s3; A2=s4; B2=s3+s4; V=s1+s3"},
          {3, "A1=s1; B1=s2; C1=s1+s2; A2=s3; B2=s4; C2=s3+s4; V=s1+s3-s2-s4"},
          {2, SIX "V=s1+s4"},
          {2, SIX "V=s2+s5"},
          {2, SIX "V=s3+s6"},
          {2, "A1=B1=s1; C1=s2; A2=B2=C2=s3; V=s1+s2+s3"},
          {2, "A1=C1=s1; B1=s2; A2=B2=C2=s3; V=s1+s2+s3"},
          {2, "B1=C1=s1; A1=s2; A2=B2=C2=s3; V=s1+s2+s3"},
          {2, SIX "V=s1+s2+s4+s5"},
          {2, SIX "V=s1+s3+s4+s6"},
          {2, SIX "V=s2+s3+s5+s6"},
          {2, SIX "V=s1+s2+s3+s4+s5+s6"}}},
        {7, 0,
         {{2, "A1=s1; A2=s2; B2=C2=s3; V=s1+s2+s3"},
          {2, "B1=s1; B2=s2; A2=C2=s3; V=s1+s2+s3"},
          {2, "C1=s1; C2=s2; A2=B2=s3; V=s1+s2+s3"},
          {2, "A1=s1; B1=s2; C2=s3; V=s1+s2+s3"},
          {2, "A1=s1; C1=s2; B2=s3; V=s1+s2+s3"},
          {2, "B1=s1; C1=s2; A2=s3; V=s1+s2+s3"}}},
        {1, 1,
         {{2, "B1=C1=s1; B2=C2=s2; V=s1+s2"},
          {2, "B1=s1; B2=s2; V=s1+s2"},
          {2, "C1=s1; C2=s2; V=s1+s2"},
          {2, "A1=s1; A2=s2; V=s1+s2"},
          {2, "C1=s1; B2=s2; V=s1+s2"},
          {2, "B1=s1; C1=s2; A2=s3; V=s1+s2+s3"},
          {2, "B1=s1; A2=C2=s2; V=s1+s2"},
          {2, "C1=s1; A2=B2=s2; V=s1+s2"}}},
        {1, 6,
         {{2, "A1=s1; B2=C2=s2; V=s1+s2"},
          {2, "B1=s1; C1=s2; A2=s3; V=s1+s2+s3"},
          {2, "C1=s1; A2=s2; B2=s3; V=s1+s2+s3"},
          {2, "B1=s1; A2=s2; C2=s3; V=s1+s2+s3"},
          {2, "A1=C1=s1; B2=s2; V=s1+s2"},
          {2, "A1=B1=s1; C2=s2; V=s1+s2"}}},
        {1, 0,
         {{2, "B1=C1=s1; B2=C2=s2; V=s1+s2"},
          {2, "C1=s1; C2=s2; V=s1+s2"},
          {2, "B1=s1; B2=s2; V=s1+s2"},
          {2, "C1=s1; B2=s2; V=s1+s2"},
          {2, "B1=s1; C1=s2; A2=s3; V=s1+s2+s3"},
          {2, "B1=s1; A2=C2=s2; V=s1+s2"},
          {2, "C1=s1; A2=B2=s2; V=s1+s2"}}},
        {4, 0,
         {{2, "C1=s1; C2=s2; V=s1+s2"},
          {2, "A1=s1; C1=s2; B2=s3; V=s1+s2+s3"},
          {2, "B1=s1; C1=s2; A2=s3; V=s1+s2+s3"},
          {2, "A1=s1; B2=C2=s2; V=s1+s2"},
          {2, "B1=s1; A2=C2=s2; V=s1+s2"},
          {2, "C1=s1; A2=B2=s2; V=s1+s2"}}},
        {1, 2,
         {{2, "A1=C1=s1; B2=C2=s2; V=s1+s2"},
          {2, "C1=s1; C2=s2; V=s1+s2"},
          {2, "B1=s1; A2=s2; V=s1+s2"},
          {2, "B1=s1; A2=s2; C2=s3; V=s1+s2+s3"},
          {2, "B1=s1; C1=s2; A2=s3; V=s1+s2+s3"},
          {2, "C1=s1; A2=B2=s2; V=s1+s2"}}},
        {1, 4,
         {{2, "C1=s1; C2=s2; V=s1+s2"},
          {2, "A1=s1; A2=s2; V=s1+s2"},
          {2, "B1=s1; A2=s2; C2=s3; V=s1+s2+s3"},
          {2, "B1=s1; C1=s2; A2=s3; V=s1+s2+s3"},
          {2, "A1=C1=s1; B2=s2; V=s1+s2"},
          {2, "C1=s1; A2=B2=s2; V=s1+s2"}}},
    };
    return t;
}

#undef SIX

} // namespace

bool has_paper_states(int a, int b) {
    for (const auto& e : state_table())
        if (e.a == a && e.b == b) return true;
    return false;
}

std::vector<LinearState> paper_states(int a, int b) {
    for (const auto& e : state_table()) {
        if (e.a != a || e.b != b) continue;
        std::vector<LinearState> out;
        Ground g = doubled_ground(3, 1);
        for (const auto& [q, spec] : e.states) out.push_back(build_state(q, spec, g));
        return out;
    }
    throw std::invalid_argument("no printed states for decoupling (" + std::to_string(a) + "," + std::to_string(b) + ")");
}

// -------------------------------------------------------------- enumeration

void enumerate_states(int q, int max_symbols, const Ground& ground, const EnumOptions& opt,
                      const std::function<bool(const LinearState&)>& visit) {
    check_q(q);
    if (max_symbols > opt.budget)
        throw BudgetExceeded("enumerate_states: " + std::to_string(max_symbols) + " symbols exceeds budget " +
                             std::to_string(opt.budget));
    if (opt.max_ancilla_rows < 1) throw std::invalid_argument("max_ancilla_rows must be positive");
    // coordinate -> system
    std::vector<int> owner;
    for (int i = 0; i < ground.size(); ++i) {
        int reps = (ground.ancillas >> i & 1) ? opt.max_ancilla_rows : 1;
        for (int r = 0; r < reps; ++r) owner.push_back(i);
    }
    const int C = static_cast<int>(owner.size());
    const int top = std::min(max_symbols, C);

    LinearState st;
    st.q = q;
    st.ground = ground;
    for (int r = 1; r <= top; ++r) {
        std::vector<int> piv(static_cast<size_t>(r));
        for (int i = 0; i < r; ++i) piv[static_cast<size_t>(i)] = i;
        while (true) {
            // free entries: row i, column c > piv[i], c not a pivot
            std::vector<std::pair<int, int>> free;
            std::vector<bool> is_piv(static_cast<size_t>(C), false);
            for (int p : piv) is_piv[static_cast<size_t>(p)] = true;
            for (int i = 0; i < r; ++i)
                for (int c = piv[static_cast<size_t>(i)] + 1; c < C; ++c)
                    if (!is_piv[static_cast<size_t>(c)]) free.emplace_back(i, c);
            std::vector<int> vals(free.size(), 0);
            while (true) {
                std::vector<GfRow> M(static_cast<size_t>(r), GfRow(static_cast<size_t>(C), 0));
                for (int i = 0; i < r; ++i) M[static_cast<size_t>(i)][static_cast<size_t>(piv[static_cast<size_t>(i)])] = 1;
                for (size_t f = 0; f < free.size(); ++f)
                    M[static_cast<size_t>(free[f].first)][static_cast<size_t>(free[f].second)] = vals[f];
                st.k = r;
                st.rows.assign(static_cast<size_t>(ground.size()), {});
                for (int c = 0; c < C; ++c) {
                    GfRow col(static_cast<size_t>(r));
                    bool nz = false;
                    for (int i = 0; i < r; ++i) {
                        col[static_cast<size_t>(i)] = M[static_cast<size_t>(i)][static_cast<size_t>(c)];
                        nz = nz || col[static_cast<size_t>(i)] != 0;
                    }
                    if (nz) st.rows[static_cast<size_t>(owner[static_cast<size_t>(c)])].push_back(std::move(col));
                }
                if (st.product_ok() && !visit(st)) return;
                size_t f = 0;
                while (f < vals.size() && ++vals[f] == q) vals[f++] = 0;
                if (f == vals.size()) break;
            }
            // next pivot combination
            int i = r - 1;
            while (i >= 0 && piv[static_cast<size_t>(i)] == C - r + i) --i;
            if (i < 0) break;
            ++piv[static_cast<size_t>(i)];
            for (int j = i + 1; j < r; ++j) piv[static_cast<size_t>(j)] = piv[static_cast<size_t>(j - 1)] + 1;
        }
    }
}

StateNormalForm normal_form(const LinearState& s) {
    StateNormalForm nf;
    std::vector<GfRow> cols;
    for (const auto& var : s.rows) {
        nf.shape.push_back(static_cast<int>(var.size()));
        for (const auto& r : var) cols.push_back(r);
    }
    std::vector<GfRow> M(static_cast<size_t>(s.k), GfRow(cols.size(), 0));
    for (size_t c = 0; c < cols.size(); ++c)
        for (int i = 0; i < s.k; ++i) M[static_cast<size_t>(i)][c] = cols[c][static_cast<size_t>(i)];
    nf.rref = gf_rref(M, s.q);
    return nf;
}

LinearState permute_systems(const LinearState& s, const std::vector<int>& perm) {
    if (perm.size() != s.rows.size()) throw std::invalid_argument("permute_systems: wrong permutation size");
    LinearState t = s;
    for (size_t i = 0; i < perm.size(); ++i) t.rows[i] = s.rows[static_cast<size_t>(perm[i])];
    return t;
}

nlohmann::json to_json(const LinearState& s) {
    nlohmann::json vars = nlohmann::json::object();
    for (size_t i = 0; i < s.rows.size(); ++i) vars[s.ground.labels[i]] = s.rows[i];
    return {{"q", s.q}, {"k", s.k}, {"vars", vars}, {"spec", s.describe()}};
}

} // namespace uac
