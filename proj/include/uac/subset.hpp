#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace uac {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return __builtin_popcount(m); }

/// All masks over n elements in shortlex order: smaller subsets first, equal
/// sizes ordered lexicographically by their sorted element lists.
const std::vector<Mask>& shortlex(int n);
int shortlex_rank(Mask m, int n);
Mask shortlex_unrank(int r, int n);

/// An ordered list of system labels. Masks refer to positions in this list.
struct Ground {
    std::vector<std::string> labels;
    Mask copy1 = 0;     // positions of the copy-1 parties (doubled grounds)
    Mask copy2 = 0;     // positions of the copy-2 parties
    Mask ancillas = 0;  // positions of V, W (doubled and alpha grounds)

    int size() const { return static_cast<int>(labels.size()); }
    Mask full() const { return size() >= 32 ? ~Mask(0) : (Mask(1) << size()) - 1; }
    int index_of(std::string_view label) const;  // -1 if absent
    std::string name(Mask m) const;               // labels concatenated in ground order
    /// Greedy longest-match split of a label string such as "A1B2V".
    Mask parse_set(std::string_view s) const;
    bool operator==(const Ground& o) const { return labels == o.labels; }
};

/// {A,B,C} truncated to n parties.
Ground party_ground(int n);
/// Parties followed by the ancillas V[,W]: the ground of alpha vectors.
Ground alpha_ground(int n, int m);
/// Copy-1 parties A1.., copy-2 parties A2.., then ancillas V[,W].
Ground doubled_ground(int n, int m);
/// A, B, C, a, b, c: tripartite measures with three ancillas on a pure state.
Ground measure_ground();

const std::vector<std::string>& ancilla_labels();  // V, W

/// The index of a set of party labels under the shortlex encoding, so for
/// {A,B,C}: {} -> 0, {A,C} -> 5. Throws std::invalid_argument on unknown labels.
int subset_index(const std::vector<std::string>& labels, const Ground& parties);

struct SubsetIndex {
    Mask bits = 0;
    int n = 3;
    int index() const { return shortlex_rank(bits, n); }
    static SubsetIndex from_index(int i, int n) { return {shortlex_unrank(i, n), n}; }
    SubsetIndex complement() const { return {bits ^ ((Mask(1) << n) - 1), n}; }
    SubsetIndex operator|(SubsetIndex o) const { return {bits | o.bits, n}; }
    SubsetIndex operator&(SubsetIndex o) const { return {bits & o.bits, n}; }
    bool disjoint(SubsetIndex o) const { return (bits & o.bits) == 0; }
    bool operator==(const SubsetIndex& o) const { return bits == o.bits && n == o.n; }
};

/// Union of two subset indices (shortlex encoded) over n parties.
int index_union(int a, int b, int n);
int index_complement(int a, int n);
bool index_disjoint(int a, int b, int n);

/// Places the bits of a party mask at the given positions of a larger ground.
Mask spread(Mask party_mask, Mask positions);

} // namespace uac
