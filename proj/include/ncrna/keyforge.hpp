#pragma once

#include <array>
#include <cstdint>

#include "ncrna/codon.hpp"
#include "ncrna/errors.hpp"
#include "ncrna/fold.hpp"
#include "ncrna/sha256.hpp"

namespace ncrna {

constexpr std::size_t kSaltSize = 16;
constexpr std::uint32_t kKdfIterations = 10000;
constexpr std::size_t kSessionKeySize = 32;

// Bases packed four to a byte, first base in the top two bits.
inline Bytes pack_bases(const std::vector<std::uint8_t>& bases) {
    Bytes out((bases.size() + 3) / 4, 0);
    for (std::size_t i = 0; i < bases.size(); ++i)
        out[i / 4] = static_cast<std::uint8_t>(out[i / 4] | (bases[i] << (6 - 2 * (i % 4))));
    return out;
}

inline std::vector<std::uint8_t> unpack_bases(const std::uint8_t* data, std::size_t count) {
    std::vector<std::uint8_t> bases(count);
    for (std::size_t i = 0; i < count; ++i)
        bases[i] = (data[i / 4] >> (6 - 2 * (i % 4))) & 3;
    return bases;
}

// Structural key material distilled from a folded secret. bytes is the packed
// extraction; source_fingerprint identifies the (sequence, structure) pair
// without revealing either.
struct MasterSequence {
    Bytes bytes;
    Bytes source_fingerprint;
};

struct SessionKey {
    Bytes key;
    std::array<std::uint8_t, kSaltSize> salt{};
    std::uint32_t iterations = kKdfIterations;
};

// Folds the secret's RNA image (canonical codon table) and extracts the master
// material: bases at stem positions in ascending order, packed two bits each,
// followed by the dot-bracket text. Structures with fewer than 16 stem
// positions fall back to the full packed sequence so short secrets still yield
// non-degenerate material. Deriving a key from a candidate secret therefore
// always costs at least one fold.
inline MasterSequence extract_master(const Bytes& secret, const EnergyModel& model) {
    if (secret.empty()) throw InvalidSecret("secret must be non-empty");
    CodonSBox identity = canonical_sbox();
    RnaSequence rna = encode(secret, identity);
    SecondaryStructure st = fold(rna, model);

    std::vector<std::uint8_t> stem_bases;
    stem_bases.reserve(rna.size());
    for (std::size_t i = 0; i < st.dot_bracket.size(); ++i)
        if (st.dot_bracket[i] != '.') stem_bases.push_back(rna.bases[i]);

    MasterSequence master;
    const std::vector<std::uint8_t>& extracted =
        stem_bases.size() >= 16 ? stem_bases : rna.bases;
    master.bytes = pack_bases(extracted);
    master.bytes.insert(master.bytes.end(), st.dot_bracket.begin(), st.dot_bracket.end());

    Sha256 h;
    std::string letters = rna.to_string();
    h.update(reinterpret_cast<const std::uint8_t*>(letters.data()), letters.size());
    h.update(reinterpret_cast<const std::uint8_t*>(st.dot_bracket.data()),
             st.dot_bracket.size());
    master.source_fingerprint.resize(Sha256::kDigestSize);
    h.finish(master.source_fingerprint.data());
    return master;
}

inline MasterSequence extract_master(const Bytes& secret) {
    return extract_master(secret, EnergyModel::standard());
}

// PBKDF2-HMAC-SHA256 over the master material; 16-byte salt, 10^4 iterations,
// 32-byte key.
inline SessionKey derive_key(const MasterSequence& master, const Bytes& salt) {
    if (salt.size() != kSaltSize) throw InvalidSalt("salt must be exactly 16 bytes");
    SessionKey sk;
    sk.key = pbkdf2_hmac_sha256(master.bytes, salt, kKdfIterations, kSessionKeySize);
    std::copy(salt.begin(), salt.end(), sk.salt.begin());
    return sk;
}

}  // namespace ncrna
