#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "ncrna/chacha20.hpp"
#include "ncrna/errors.hpp"
#include "ncrna/fold.hpp"

namespace ncrna {

// Per-position structural classification: paired positions are stems, unpaired
// positions are loops.
enum class Label : std::uint8_t { Stem = 0, Loop = 1 };

struct StructuralLabels {
    std::vector<Label> labels;

    std::size_t size() const { return labels.size(); }
};

inline StructuralLabels labels_of(const SecondaryStructure& st) {
    StructuralLabels out;
    out.labels.reserve(st.dot_bracket.size());
    for (char c : st.dot_bracket)
        out.labels.push_back(c == '.' ? Label::Loop : Label::Stem);
    return out;
}

// Index permutation in gather form: output position k takes input position map[k].
struct Permutation {
    std::vector<std::uint32_t> map;

    std::size_t size() const { return map.size(); }

    bool is_bijection() const {
        std::vector<bool> seen(map.size(), false);
        for (auto v : map) {
            if (v >= map.size() || seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }
};

// Stable two-class partition: stem positions in ascending order, then loop
// positions in ascending order. Relative order within a class never changes,
// so the permutation is fully determined by the label vector.
inline Permutation permutation_from_labels(const StructuralLabels& labels) {
    Permutation perm;
    perm.map.reserve(labels.size());
    for (std::uint32_t i = 0; i < labels.size(); ++i)
        if (labels.labels[i] == Label::Stem) perm.map.push_back(i);
    for (std::uint32_t i = 0; i < labels.size(); ++i)
        if (labels.labels[i] == Label::Loop) perm.map.push_back(i);
    return perm;
}

inline Permutation derive_permutation(const SecondaryStructure& st) {
    return permutation_from_labels(labels_of(st));
}

template <typename T>
inline std::vector<T> apply(const std::vector<T>& input, const Permutation& perm) {
    if (input.size() != perm.size())
        throw LengthMismatch("permutation length does not match input length");
    std::vector<T> out(input.size());
    for (std::size_t k = 0; k < input.size(); ++k) out[k] = input[perm.map[k]];
    return out;
}

inline Permutation invert(const Permutation& perm) {
    Permutation inv;
    inv.map.assign(perm.size(), 0);
    for (std::uint32_t k = 0; k < perm.size(); ++k) inv.map[perm.map[k]] = k;
    return inv;
}

// Flips exactly k distinct labels, selected by a partial Fisher-Yates shuffle
// over the seeded keystream sampler (same stream construction as the codon
// table shuffle).
inline StructuralLabels perturb_labels(const StructuralLabels& labels, std::size_t k,
                                       const Bytes& seed) {
    if (k > labels.size())
        throw InvalidPerturbation("cannot flip more labels than there are positions");
    StructuralLabels out = labels;
    if (k == 0) return out;
    std::vector<std::uint32_t> idx(labels.size());
    std::iota(idx.begin(), idx.end(), 0);
    KeystreamSampler sampler(seed);
    for (std::size_t t = 0; t < k; ++t) {
        std::uint32_t r = static_cast<std::uint32_t>(t) +
                          sampler.uniform(static_cast<std::uint32_t>(labels.size() - t));
        std::swap(idx[t], idx[r]);
        Label& l = out.labels[idx[t]];
        l = (l == Label::Stem) ? Label::Loop : Label::Stem;
    }
    return out;
}

// Fraction of output positions whose source index differs between two
// permutations of equal length.
inline double remap_fraction(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size())
        throw LengthMismatch("permutations must have equal length");
    if (a.size() == 0) return 0.0;
    std::size_t diff = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.map[k] != b.map[k]) ++diff;
    return static_cast<double>(diff) / static_cast<double>(a.size());
}

}  // namespace ncrna
