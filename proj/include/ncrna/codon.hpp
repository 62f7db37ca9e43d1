#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ncrna/bytes.hpp"
#include "ncrna/chacha20.hpp"
#include "ncrna/errors.hpp"

namespace ncrna {

// Nucleotide ordinals are fixed: A=0, U=1, C=2, G=3. All packing and table
// layouts below depend on this order.
enum class Nucleotide : std::uint8_t { A = 0, U = 1, C = 2, G = 3 };

inline char nucleotide_char(std::uint8_t base) {
    static const char names[4] = {'A', 'U', 'C', 'G'};
    return names[base & 3];
}

inline int nucleotide_ordinal(char c) {
    switch (c) {
        case 'A': case 'a': return 0;
        case 'U': case 'u': return 1;
        case 'C': case 'c': return 2;
        case 'G': case 'g': return 3;
        default: return -1;
    }
}

// Three bases = one codon = one 6-bit symbol.
using Codon = std::array<std::uint8_t, 3>;

inline std::uint8_t codon_rank(const Codon& c) {
    return static_cast<std::uint8_t>(c[0] * 16 + c[1] * 4 + c[2]);
}

inline Codon codon_from_rank(std::uint8_t rank) {
    return Codon{static_cast<std::uint8_t>((rank >> 4) & 3),
                 static_cast<std::uint8_t>((rank >> 2) & 3),
                 static_cast<std::uint8_t>(rank & 3)};
}

inline std::string codon_string(const Codon& c) {
    return std::string{nucleotide_char(c[0]), nucleotide_char(c[1]), nucleotide_char(c[2])};
}

// An RNA message: bases plus the exact bit length of the byte string it encodes.
// The final codon may carry padding, so origin_bit_length <= 2 * bases.size().
struct RnaSequence {
    std::vector<std::uint8_t> bases;  // values 0..3
    std::uint64_t origin_bit_length = 0;

    std::size_t size() const { return bases.size(); }

    std::string to_string() const {
        std::string s;
        s.reserve(bases.size());
        for (auto b : bases) s.push_back(nucleotide_char(b));
        return s;
    }

    static RnaSequence from_string(const std::string& s, std::uint64_t origin_bits) {
        RnaSequence seq;
        seq.bases.reserve(s.size());
        for (char c : s) {
            int v = nucleotide_ordinal(c);
            if (v < 0) throw MalformedSequence("invalid nucleotide character");
            seq.bases.push_back(static_cast<std::uint8_t>(v));
        }
        seq.origin_bit_length = origin_bits;
        return seq;
    }
};

// Bijective 6-bit-value -> codon table. The canonical table is the 64 codons in
// lexicographic order under A < U < C < G, so rank k maps to itself.
struct CodonSBox {
    std::array<Codon, 64> forward;
    std::array<std::uint8_t, 64> inverse;  // indexed by codon_rank

    void rebuild_inverse() {
        inverse.fill(0);
        for (std::size_t i = 0; i < 64; ++i) inverse[codon_rank(forward[i])] = static_cast<std::uint8_t>(i);
    }
};

inline CodonSBox canonical_sbox() {
    CodonSBox box;
    for (std::size_t i = 0; i < 64; ++i) box.forward[i] = codon_from_rank(static_cast<std::uint8_t>(i));
    box.rebuild_inverse();
    return box;
}

inline bool is_identity_seed(const Bytes& seed) {
    if (seed.size() != 32) return false;
    return std::all_of(seed.begin(), seed.end(), [](std::uint8_t b) { return b == 0; });
}

// Builds the substitution table for a seed. An all-zeros 32-byte seed is the
// reserved identity sentinel and yields the canonical table; any other seed
// shuffles it with Fisher-Yates draws from the seeded keystream sampler.
inline CodonSBox build_sbox(const Bytes& seed) {
    if (seed.empty()) throw InvalidSeed("substitution seed must be non-empty");
    CodonSBox box = canonical_sbox();
    if (!is_identity_seed(seed)) {
        KeystreamSampler sampler(seed);
        for (std::uint32_t i = 63; i >= 1; --i) {
            std::uint32_t j = sampler.uniform(i + 1);
            std::swap(box.forward[i], box.forward[j]);
        }
        box.rebuild_inverse();
    }
    return box;
}

inline Bytes seed_fingerprint(const Bytes& seed) {
    if (seed.empty()) throw InvalidSeed("substitution seed must be non-empty");
    return Sha256::digest(seed);
}

// Plaintext -> RNA: the byte string is read as bits most-significant-bit first,
// split into 6-bit chunks (the last one right-padded with zeros), and each chunk
// is substituted through the table. Output length is 3 * ceil(8n / 6) bases.
inline RnaSequence encode(const Bytes& plaintext, const CodonSBox& sbox) {
    RnaSequence seq;
    seq.origin_bit_length = static_cast<std::uint64_t>(plaintext.size()) * 8;
    std::uint64_t chunks = (seq.origin_bit_length + 5) / 6;
    seq.bases.reserve(static_cast<std::size_t>(chunks * 3));
    BitReader reader(plaintext.data(), static_cast<std::size_t>(seq.origin_bit_length));
    for (std::uint64_t i = 0; i < chunks; ++i) {
        std::uint32_t v = reader.get_bits_padded(6);
        const Codon& codon = sbox.forward[v];
        seq.bases.push_back(codon[0]);
        seq.bases.push_back(codon[1]);
        seq.bases.push_back(codon[2]);
    }
    return seq;
}

// Exact inverse of encode for any table built by build_sbox.
inline Bytes decode(const RnaSequence& seq, const CodonSBox& sbox) {
    if (seq.bases.size() % 3 != 0)
        throw MalformedSequence("base count must be divisible by 3");
    std::uint64_t chunks = seq.bases.size() / 3;
    if ((seq.origin_bit_length + 5) / 6 != chunks)
        throw MalformedSequence("origin bit length inconsistent with base count");
    if (seq.origin_bit_length % 8 != 0)
        throw MalformedSequence("origin bit length must be a whole number of bytes");
    for (auto b : seq.bases)
        if (b > 3) throw MalformedSequence("base ordinal out of range");

    BitWriter writer;
    for (std::uint64_t i = 0; i < chunks; ++i) {
        Codon codon{seq.bases[3 * i], seq.bases[3 * i + 1], seq.bases[3 * i + 2]};
        writer.put_bits(sbox.inverse[codon_rank(codon)], 6);
    }
    Bytes bytes = writer.take();
    bytes.resize(static_cast<std::size_t>(seq.origin_bit_length / 8));
    return bytes;
}

}  // namespace ncrna
