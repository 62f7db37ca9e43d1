#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ncrna/errors.hpp"

// QUBO instances for the hardness comparison: the folding-derived banded
// matrix against the block-sparse and diagonal reference profiles. Energies
// follow the objective x^T Q x + diag . x over bit vectors.

namespace ncrna {

enum class QuboProfile : std::uint8_t { BandedDense, BlockSparse, SparseDiagonal };

inline const char* profile_name(QuboProfile p) {
    switch (p) {
        case QuboProfile::BandedDense: return "banded_dense";
        case QuboProfile::BlockSparse: return "block_sparse";
        case QuboProfile::SparseDiagonal: return "sparse_diagonal";
    }
    throw InvalidProfile("unknown qubo profile");
}

// Symmetric coupling matrix plus separate linear terms. The full matrix is
// stored; the upper triangle is canonical and coupling(i, j) reads from it.
struct QuboMatrix {
    std::size_t n = 0;
    std::vector<double> q;     // n*n, row-major, q[i*n+j] = q[j*n+i]
    std::vector<double> diag;  // linear terms, one per variable
    QuboProfile profile = QuboProfile::BandedDense;

    double coupling(std::size_t i, std::size_t j) const {
        return i <= j ? q[i * n + j] : q[j * n + i];
    }

    void set_coupling(std::size_t i, std::size_t j, double v) {
        q[i * n + j] = v;
        q[j * n + i] = v;
    }
};

// Structural check of the declared sparsity pattern: banded allows couplings
// only at offsets 1 and 5, block-sparse only inside disjoint adjacent pairs,
// diagonal none at all.
inline bool matches_profile(const QuboMatrix& m) {
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = i + 1; j < m.n; ++j) {
            if (m.q[i * m.n + j] != m.q[j * m.n + i]) return false;
            if (m.coupling(i, j) == 0.0) continue;
            switch (m.profile) {
                case QuboProfile::BandedDense:
                    if (j - i != 1 && j - i != 5) return false;
                    break;
                case QuboProfile::BlockSparse:
                    if (j - i != 1 || i % 2 != 0) return false;
                    break;
                case QuboProfile::SparseDiagonal:
                    return false;
            }
        }
    }
    return true;
}

// Folding-derived instance: nearest-neighbour couplings of 88 along the
// chain, long-range couplings of 44 at offset 5, and a uniform -66 linear
// term that frustrates the positive bands into a nontrivial ground state.
inline QuboMatrix build_ncrna_qubo(std::size_t n) {
    if (n < 6) throw TooSmall("banded instance needs at least 6 variables");
    QuboMatrix m;
    m.n = n;
    m.q.assign(n * n, 0.0);
    m.diag.assign(n, -66.0);
    m.profile = QuboProfile::BandedDense;
    for (std::size_t i = 0; i + 1 < n; ++i) m.set_coupling(i, i + 1, 88.0);
    for (std::size_t i = 0; i + 5 < n; ++i) m.set_coupling(i, i + 5, 44.0);
    return m;
}

// Reference profiles standing in for the comparison ciphers: disjoint 2x2
// blocks of coupling 88 (odd n leaves the last variable free), or a bare
// -66 diagonal with no couplings.
inline QuboMatrix build_reference_qubo(QuboProfile profile, std::size_t n) {
    if (profile == QuboProfile::BandedDense) return build_ncrna_qubo(n);
    if (n < 4) throw TooSmall("reference instance needs at least 4 variables");
    QuboMatrix m;
    m.n = n;
    m.q.assign(n * n, 0.0);
    m.profile = profile;
    switch (profile) {
        case QuboProfile::BlockSparse:
            m.diag.assign(n, 0.0);
            for (std::size_t i = 0; i + 1 < n; i += 2) m.set_coupling(i, i + 1, 88.0);
            break;
        case QuboProfile::SparseDiagonal:
            m.diag.assign(n, -66.0);
            break;
        default:
            throw InvalidProfile("unknown qubo profile");
    }
    return m;
}

inline double energy(const QuboMatrix& m, const std::vector<int>& x) {
    if (x.size() != m.n) throw LengthMismatch("assignment length differs from variable count");
    double e = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        if (!x[i]) continue;
        e += m.diag[i];
        for (std::size_t j = i + 1; j < m.n; ++j) {
            if (x[j]) e += m.q[i * m.n + j];
        }
    }
    return e;
}

// Energy of the basis state whose bit i is bit i of the index. The QAOA
// phase layer and the ground-state enumeration both walk indices this way.
inline double energy_of_index(const QuboMatrix& m, std::uint32_t idx) {
    double e = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        if (!((idx >> i) & 1u)) continue;
        e += m.diag[i];
        for (std::size_t j = i + 1; j < m.n; ++j) {
            if ((idx >> j) & 1u) e += m.q[i * m.n + j];
        }
    }
    return e;
}

struct GroundTruth {
    double e_min = 0.0;
    std::uint32_t x_key = 0;       // lowest-index minimizer
    std::size_t degeneracy = 0;    // count of minimizers
};

// Exhaustive 2^n scan; the oracle every simulated attack is scored against.
inline GroundTruth enumerate_ground(const QuboMatrix& m) {
    if (m.n > 24) throw StateTooLarge("exhaustive enumeration is capped at 24 variables");
    GroundTruth g;
    g.e_min = energy_of_index(m, 0);
    g.x_key = 0;
    g.degeneracy = 1;
    for (std::uint32_t idx = 1; idx < (std::uint32_t{1} << m.n); ++idx) {
        double e = energy_of_index(m, idx);
        if (e < g.e_min) {
            g.e_min = e;
            g.x_key = idx;
            g.degeneracy = 1;
        } else if (e == g.e_min) {
            ++g.degeneracy;
        }
    }
    return g;
}

}  // namespace ncrna
