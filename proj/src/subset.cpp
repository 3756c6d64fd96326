#include "uac/subset.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <stdexcept>

namespace uac {

namespace {

constexpr int kMaxShortlex = 12;

struct ShortlexTables {
    std::array<std::vector<Mask>, kMaxShortlex + 1> order;
    std::array<std::vector<int>, kMaxShortlex + 1> rank;
    ShortlexTables() {
        for (int n = 0; n <= kMaxShortlex; ++n) {
            std::vector<Mask> v(Mask(1) << n);
            for (Mask m = 0; m < v.size(); ++m) v[m] = m;
            std::sort(v.begin(), v.end(), [](Mask a, Mask b) {
                if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
                // lexicographic on sorted element lists
                Mask x = a, y = b;
                while (x && y) {
                    int i = __builtin_ctz(x), j = __builtin_ctz(y);
                    if (i != j) return i < j;
                    x &= x - 1;
                    y &= y - 1;
                }
                return false;
            });
            rank[n].assign(v.size(), 0);
            for (size_t r = 0; r < v.size(); ++r) rank[n][v[r]] = static_cast<int>(r);
            order[n] = std::move(v);
        }
    }
};

const ShortlexTables& tables() {
    static const ShortlexTables t;
    return t;
}

void check_n(int n) {
    if (n < 0 || n > kMaxShortlex) throw std::invalid_argument("shortlex: unsupported ground size");
}

} // namespace

const std::vector<Mask>& shortlex(int n) {
    check_n(n);
    return tables().order[n];
}

int shortlex_rank(Mask m, int n) {
    check_n(n);
    if (m >= (Mask(1) << n)) throw std::invalid_argument("shortlex_rank: mask outside ground");
    return tables().rank[n][m];
}

Mask shortlex_unrank(int r, int n) {
    check_n(n);
    if (r < 0 || r >= (1 << n)) throw std::invalid_argument("shortlex_unrank: index out of range");
    return tables().order[n][r];
}

int Ground::index_of(std::string_view label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    return -1;
}

std::string Ground::name(Mask m) const {
    std::string s;
    for (int i = 0; i < size(); ++i)
        if (m >> i & 1) s += labels[i];
    return s;
}

Mask Ground::parse_set(std::string_view s) const {
    Mask m = 0;
    size_t pos = 0;
    while (pos < s.size()) {
        if (s[pos] == ' ') {
            ++pos;
            continue;
        }
        int best = -1;
        size_t best_len = 0;
        for (int i = 0; i < size(); ++i) {
            const auto& l = labels[i];
            if (l.size() > best_len && s.compare(pos, l.size(), l) == 0) {
                best = i;
                best_len = l.size();
            }
        }
        if (best < 0)
            throw std::invalid_argument("unknown system label at '" + std::string(s.substr(pos)) + "'");
        if (m >> best & 1)
            throw std::invalid_argument("repeated system label '" + labels[best] + "'");
        m |= Mask(1) << best;
        pos += best_len;
    }
    return m;
}

const std::vector<std::string>& ancilla_labels() {
    static const std::vector<std::string> v{"V", "W"};
    return v;
}

static void check_sizes(int n, int m) {
    if (n < 1 || n > 3) throw std::invalid_argument("party count must be 1..3");
    if (m < 0 || m > 2) throw std::invalid_argument("ancilla count must be 0..2");
}

Ground party_ground(int n) {
    check_sizes(n, 0);
    static const char* names[] = {"A", "B", "C"};
    Ground g;
    for (int i = 0; i < n; ++i) g.labels.emplace_back(names[i]);
    return g;
}

Ground alpha_ground(int n, int m) {
    check_sizes(n, m);
    Ground g = party_ground(n);
    for (int k = 0; k < m; ++k) {
        g.ancillas |= Mask(1) << g.size();
        g.labels.push_back(ancilla_labels()[k]);
    }
    return g;
}

Ground doubled_ground(int n, int m) {
    check_sizes(n, m);
    static const char* names[] = {"A", "B", "C"};
    Ground g;
    for (int c = 1; c <= 2; ++c)
        for (int i = 0; i < n; ++i) {
            (c == 1 ? g.copy1 : g.copy2) |= Mask(1) << g.size();
            g.labels.push_back(std::string(names[i]) + std::to_string(c));
        }
    for (int k = 0; k < m; ++k) {
        g.ancillas |= Mask(1) << g.size();
        g.labels.push_back(ancilla_labels()[k]);
    }
    return g;
}

Ground measure_ground() {
    Ground g;
    g.labels = {"A", "B", "C", "a", "b", "c"};
    g.ancillas = 0b111000;
    return g;
}

int subset_index(const std::vector<std::string>& labels, const Ground& parties) {
    Mask m = 0;
    for (const auto& l : labels) {
        int i = parties.index_of(l);
        if (i < 0) throw std::invalid_argument("unknown party label '" + l + "'");
        m |= Mask(1) << i;
    }
    return shortlex_rank(m, parties.size());
}

int index_union(int a, int b, int n) {
    return shortlex_rank(shortlex_unrank(a, n) | shortlex_unrank(b, n), n);
}

int index_complement(int a, int n) {
    return shortlex_rank(shortlex_unrank(a, n) ^ ((Mask(1) << n) - 1), n);
}

bool index_disjoint(int a, int b, int n) { return (shortlex_unrank(a, n) & shortlex_unrank(b, n)) == 0; }

Mask spread(Mask party_mask, Mask positions) {
    Mask out = 0;
    int i = 0;
    for (int p = 0; p < 32 && positions >> p; ++p) {
        if (!(positions >> p & 1)) continue;
        if (party_mask >> i & 1) out |= Mask(1) << p;
        ++i;
    }
    return out;
}

} // namespace uac
