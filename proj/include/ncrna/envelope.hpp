#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>

#include "ncrna/bytes.hpp"
#include "ncrna/chacha20.hpp"
#include "ncrna/codon.hpp"
#include "ncrna/errors.hpp"
#include "ncrna/fold.hpp"
#include "ncrna/keyforge.hpp"
#include "ncrna/pbox.hpp"
#include "ncrna/sha256.hpp"

namespace ncrna {

// Source of salts and nonces for encryption.
struct EntropySource {
    virtual ~EntropySource() = default;
    virtual void fill(std::uint8_t* out, std::size_t len) = 0;
};

// Reads the operating system's entropy pool.
class SystemEntropy : public EntropySource {
public:
    void fill(std::uint8_t* out, std::size_t len) override {
        std::FILE* f = std::fopen("/dev/urandom", "rb");
        if (f == nullptr) throw EntropyUnavailable("cannot open system entropy source");
        std::size_t got = std::fread(out, 1, len, f);
        std::fclose(f);
        if (got != len) throw EntropyUnavailable("short read from system entropy source");
    }
};

// Seeded entropy for reproducible tests and measurements.
class DeterministicEntropy : public EntropySource {
public:
    explicit DeterministicEntropy(const Bytes& seed) : sampler_(seed) {}

    void fill(std::uint8_t* out, std::size_t len) override {
        for (std::size_t i = 0; i < len; ++i) {
            if (pos_ == 4) {
                word_ = sampler_.next_u32();
                pos_ = 0;
            }
            out[i] = static_cast<std::uint8_t>(word_ >> (8 * pos_));
            ++pos_;
        }
    }

private:
    KeystreamSampler sampler_;
    std::uint32_t word_ = 0;
    std::size_t pos_ = 4;
};

constexpr std::array<std::uint8_t, 4> kEnvelopeMagic = {'N', 'C', 'R', '1'};
constexpr std::uint8_t kEnvelopeVersion = 0x01;
constexpr std::size_t kNonceSize = 12;
constexpr std::size_t kTagSize = 32;
constexpr std::size_t kHeaderSize = 4 + 1 + kSaltSize + kNonceSize + 8 + 8;

// Sealed message container. Layout, in order:
//   magic "NCR1" | version 0x01 | salt (16) | nonce (12) |
//   origin_bit_length (8, LE) | payload_len (8, LE) | ciphertext | tag (32)
// The tag is SHA-256 over the serialized permuted-sequence section of the
// plaintext payload and is checked before any plaintext is released.
struct Envelope {
    std::array<std::uint8_t, 4> magic = kEnvelopeMagic;
    std::uint8_t version = kEnvelopeVersion;
    std::array<std::uint8_t, kSaltSize> salt{};
    std::array<std::uint8_t, kNonceSize> nonce{};
    std::uint64_t origin_bit_length = 0;
    Bytes ciphertext;
    std::array<std::uint8_t, kTagSize> tag{};
};

inline Bytes serialize(const Envelope& env) {
    Bytes out;
    out.reserve(kHeaderSize + env.ciphertext.size() + kTagSize);
    out.insert(out.end(), env.magic.begin(), env.magic.end());
    out.push_back(env.version);
    out.insert(out.end(), env.salt.begin(), env.salt.end());
    out.insert(out.end(), env.nonce.begin(), env.nonce.end());
    append_le64(out, env.origin_bit_length);
    append_le64(out, env.ciphertext.size());
    out.insert(out.end(), env.ciphertext.begin(), env.ciphertext.end());
    out.insert(out.end(), env.tag.begin(), env.tag.end());
    return out;
}

inline Envelope parse(const Bytes& buf) {
    if (buf.size() < 5)
        throw UnsupportedFormat("buffer too short to carry a recognizable envelope");
    if (!std::equal(kEnvelopeMagic.begin(), kEnvelopeMagic.end(), buf.begin()))
        throw UnsupportedFormat("unrecognized envelope magic");
    if (buf[4] != kEnvelopeVersion)
        throw UnsupportedFormat("unsupported envelope version");
    if (buf.size() < kHeaderSize)
        throw MalformedPayload("truncated envelope header");
    Envelope env;
    std::size_t off = 5;
    std::copy(buf.begin() + off, buf.begin() + off + kSaltSize, env.salt.begin());
    off += kSaltSize;
    std::copy(buf.begin() + off, buf.begin() + off + kNonceSize, env.nonce.begin());
    off += kNonceSize;
    env.origin_bit_length = load_le64(buf.data() + off);
    off += 8;
    std::uint64_t payload_len = load_le64(buf.data() + off);
    off += 8;
    if (buf.size() < off + kTagSize || buf.size() - off - kTagSize != payload_len)
        throw MalformedPayload("envelope length does not match its payload length field");
    env.ciphertext.assign(buf.begin() + off, buf.begin() + off + payload_len);
    off += payload_len;
    std::copy(buf.begin() + off, buf.begin() + off + kTagSize, env.tag.begin());
    return env;
}

namespace detail {

// Fold window for bulk message folding. Long messages are folded in disjoint
// 15-base windows: per-window cost is constant, so the whole-message fold is
// linear in the message while keeping the same deterministic structure rule as
// Folder within each window. 15 = 5 codons, and windows never split a codon
// boundary's worth of bases unevenly across messages of equal length.
constexpr std::size_t kFoldWindow = 15;

// Allocation-free fixed-capacity folder producing stem/loop flags. Matches
// Folder's (energy, pairs, lexicographic dot-bracket) selection exactly; the
// unit suite checks the two against each other.
class WindowFolder {
public:
    static constexpr int kCap = 16;

    // flags_out[i] = 1 when position i is paired. len <= kCap.
    //
    // Each cell packs (energy, pair count) as v = 32*energy + pairs. A window
    // holds at most (kCap - min_hairpin)/2 pairs, so the pairs field never
    // reaches 32 and minimizing v is exactly the (energy, then fewer pairs)
    // order. Pairing (i,k) adds 32*score + 1, so candidates compose by plain
    // addition and the inner loop is one add and one compare per k.
    void fold_flags(const std::uint8_t* bases, int len, const EnergyModel& model,
                    std::uint8_t* flags_out) {
        s_ = bases;
        len_ = len;
        gap_ = model.min_hairpin + 1;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                int sc = model.score(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
                pv_[a][b] = sc == 0 ? kUnpairable : static_cast<std::int16_t>(32 * sc + 1);
            }
        }
        // Zeroing the whole table stands in for the j < i and short-span
        // cases, so the loops below index without guards.
        std::memset(v_, 0, sizeof(v_));
        for (int i = len - 1 - gap_; i >= 0; --i) {
            const std::int16_t* bonus = pv_[s_[i]];
            for (int j = i + gap_; j < len; ++j) {
                std::int16_t best = v_[i + 1][j];
                for (int k = i + gap_; k <= j; ++k) {
                    std::int16_t cand =
                        static_cast<std::int16_t>(bonus[s_[k]] + v_[i + 1][k - 1] + v_[k + 1][j]);
                    if (cand < best) best = cand;
                }
                v_[i][j] = best;
            }
        }
        std::memset(memo_set_, 0, sizeof(memo_set_));
        char buf[kCap];
        rebuild(0, len - 1, buf);
        for (int i = 0; i < len; ++i) flags_out[i] = buf[i] != '.';
    }

private:
    // Any real cell value is <= 0, so an unpairable bonus this large can never
    // win a min or match a cell during rebuild.
    static constexpr std::int16_t kUnpairable = 4096;

    // Same '(' < '.' < ')' order as db_less, over fixed-length char spans.
    static bool span_less(const char* a, const char* b, int len) {
        for (int i = 0; i < len; ++i) {
            int ra = db_rank(a[i]), rb = db_rank(b[i]);
            if (ra != rb) return ra < rb;
        }
        return false;
    }

    void rebuild(int i, int j, char* out) {
        if (j < i) return;
        if (memo_set_[i][j]) {
            std::memcpy(out, memo_[i][j], static_cast<std::size_t>(j - i + 1));
            return;
        }
        std::int16_t cell_v = v_[i][j];
        int span = j - i + 1;
        char best[kCap];
        bool have_pairing = false;
        char cand[kCap];
        for (int k = i + gap_; k <= j; ++k) {
            if (pv_[s_[i]][s_[k]] + v_[i + 1][k - 1] + v_[k + 1][j] != cell_v) continue;
            cand[0] = '(';
            rebuild(i + 1, k - 1, cand + 1);
            cand[k - i] = ')';
            rebuild(k + 1, j, cand + k - i + 1);
            if (!have_pairing || span_less(cand, best, span)) {
                std::memcpy(best, cand, static_cast<std::size_t>(span));
                have_pairing = true;
            }
        }
        if (!have_pairing) {
            best[0] = '.';
            rebuild(i + 1, j, best + 1);
        }
        std::memcpy(memo_[i][j], best, static_cast<std::size_t>(span));
        memo_set_[i][j] = true;
        std::memcpy(out, best, static_cast<std::size_t>(span));
    }

    const std::uint8_t* s_ = nullptr;
    int len_ = 0;
    int gap_ = 4;
    std::int16_t pv_[4][4];
    std::int16_t v_[kCap + 1][kCap];  // extra row: k + 1 may reach len == kCap
    char memo_[kCap][kCap][kCap];
    bool memo_set_[kCap][kCap];
};

inline void fold_labels_windowed(const std::uint8_t* bases, std::size_t n,
                                 const EnergyModel& model, std::vector<Label>& labels_out) {
    labels_out.resize(n);
    thread_local WindowFolder folder;
    std::uint8_t flags[WindowFolder::kCap];
    for (std::size_t w = 0; w < n; w += kFoldWindow) {
        int len = static_cast<int>(std::min(kFoldWindow, n - w));
        folder.fold_flags(bases + w, len, model, flags);
        for (int i = 0; i < len; ++i)
            labels_out[w + i] = flags[i] ? Label::Stem : Label::Loop;
    }
}

// Plaintext payload layout: permuted bases (4-byte LE base count, then bases
// packed four per byte) followed by the permutation (4-byte LE count, then one
// 4-byte LE source index per output position).
struct PayloadView {
    std::uint32_t base_count = 0;
    std::size_t packed_offset = 0;    // into payload bytes
    std::size_t sequence_section_len = 0;
    std::size_t perm_offset = 0;
};

inline std::size_t payload_size(std::size_t n) {
    return 4 + (n + 3) / 4 + 4 + 4 * n;
}

inline PayloadView parse_payload(const Bytes& payload) {
    PayloadView v;
    if (payload.size() < 8) throw MalformedPayload("payload too short for its prefixes");
    v.base_count = load_le32(payload.data());
    std::size_t packed_len = (static_cast<std::size_t>(v.base_count) + 3) / 4;
    if (payload.size() != payload_size(v.base_count))
        throw MalformedPayload("payload length inconsistent with base count");
    v.packed_offset = 4;
    v.sequence_section_len = 4 + packed_len;
    std::uint32_t perm_count = load_le32(payload.data() + v.sequence_section_len);
    if (perm_count != v.base_count)
        throw MalformedPayload("permutation count does not match base count");
    v.perm_offset = v.sequence_section_len + 4;
    return v;
}

// Per-message key: binds the session key to the structural digest and to the
// substitution table in use. Without the digest, equal-length messages under
// one (salt, nonce) would share keystream; without the table fingerprint, a
// wrong seed would decode silently into garbage instead of failing closed.
inline Bytes hmac_subkey(const Bytes& session_key, const std::array<std::uint8_t, kTagSize>& tag,
                         const Bytes& table_fingerprint) {
    HmacSha256 mac(session_key);
    mac.update(tag.data(), tag.size());
    mac.update(table_fingerprint.data(), table_fingerprint.size());
    Bytes out(HmacSha256::kDigestSize);
    mac.finish(out.data());
    return out;
}

inline Envelope encrypt_impl(const Bytes& plaintext, const Bytes& secret, const Bytes& seed,
                             const std::array<std::uint8_t, kSaltSize>& salt,
                             const std::array<std::uint8_t, kNonceSize>& nonce,
                             const EnergyModel& model) {
    CodonSBox sbox = build_sbox(seed);
    RnaSequence rna = encode(plaintext, sbox);
    const std::size_t n = rna.size();

    StructuralLabels labels;
    fold_labels_windowed(rna.bases.data(), n, model, labels.labels);
    Permutation perm = permutation_from_labels(labels);

    // Assemble the plaintext payload in place.
    Bytes payload(payload_size(n), 0);
    store_le32(payload.data(), static_cast<std::uint32_t>(n));
    std::uint8_t* packed = payload.data() + 4;
    for (std::size_t k = 0; k < n; ++k) {
        std::uint8_t base = rna.bases[perm.map[k]];
        packed[k / 4] = static_cast<std::uint8_t>(packed[k / 4] | (base << (6 - 2 * (k % 4))));
    }
    std::size_t seq_section = 4 + (n + 3) / 4;
    store_le32(payload.data() + seq_section, static_cast<std::uint32_t>(n));
    std::uint8_t* perm_bytes = payload.data() + seq_section + 4;
    for (std::size_t k = 0; k < n; ++k) store_le32(perm_bytes + 4 * k, perm.map[k]);

    Envelope env;
    env.salt = salt;
    env.nonce = nonce;
    env.origin_bit_length = rna.origin_bit_length;

    Sha256 h;
    h.update(payload.data(), seq_section);
    h.finish(env.tag.data());

    MasterSequence master = extract_master(secret, model);
    SessionKey session = derive_key(master, Bytes(salt.begin(), salt.end()));
    Bytes subkey = hmac_subkey(session.key, env.tag, seed_fingerprint(seed));

    env.ciphertext = std::move(payload);
    ChaCha20 cipher(subkey.data(), env.nonce.data(), 0);
    cipher.xor_stream(env.ciphertext.data(), env.ciphertext.data(), env.ciphertext.size());
    return env;
}

}  // namespace detail

// Seals plaintext under (secret, seed): substitute through the seeded codon
// table, fold, permute stems-first, then encrypt the permuted sequence and
// permutation under a per-message subkey. The subkey binds the PBKDF2 session
// key to the structural digest and the table fingerprint, so any change to the
// folded sequence or to the seed reshapes the whole keystream. Salt and nonce
// are drawn fresh from `entropy`.
inline Envelope encrypt(const Bytes& plaintext, const Bytes& secret, const Bytes& seed,
                        EntropySource& entropy,
                        const EnergyModel& model = EnergyModel::standard()) {
    std::array<std::uint8_t, kSaltSize> salt{};
    std::array<std::uint8_t, kNonceSize> nonce{};
    entropy.fill(salt.data(), salt.size());
    entropy.fill(nonce.data(), nonce.size());
    return detail::encrypt_impl(plaintext, secret, seed, salt, nonce, model);
}

inline Envelope encrypt(const Bytes& plaintext, const Bytes& secret, const Bytes& seed) {
    SystemEntropy entropy;
    return encrypt(plaintext, secret, seed, entropy);
}

// Diagnostic variant with caller-fixed salt and nonce. Reusing a (salt, nonce)
// pair reuses keystream, so this exists only for differential measurements
// (avalanche studies) and tests; it is not reachable from the encrypt CLI.
inline Envelope encrypt_deterministic(const Bytes& plaintext, const Bytes& secret,
                                      const Bytes& seed,
                                      const std::array<std::uint8_t, kSaltSize>& salt,
                                      const std::array<std::uint8_t, kNonceSize>& nonce,
                                      const EnergyModel& model = EnergyModel::standard()) {
    return detail::encrypt_impl(plaintext, secret, seed, salt, nonce, model);
}

// Opens an envelope. The structural digest is verified before any plaintext is
// reconstructed; a wrong secret, wrong seed, or tampered body all surface as
// IntegrityFailure and are indistinguishable by design.
inline Bytes decrypt(const Envelope& env, const Bytes& secret, const Bytes& seed,
                     const EnergyModel& model = EnergyModel::standard()) {
    if (env.magic != kEnvelopeMagic || env.version != kEnvelopeVersion)
        throw UnsupportedFormat("unrecognized envelope");
    CodonSBox sbox = build_sbox(seed);
    MasterSequence master = extract_master(secret, model);
    SessionKey session = derive_key(master, Bytes(env.salt.begin(), env.salt.end()));
    Bytes subkey = detail::hmac_subkey(session.key, env.tag, seed_fingerprint(seed));

    Bytes payload(env.ciphertext.size());
    ChaCha20 cipher(subkey.data(), env.nonce.data(), 0);
    cipher.xor_stream(payload.data(), env.ciphertext.data(), env.ciphertext.size());

    detail::PayloadView view;
    try {
        view = detail::parse_payload(payload);
    } catch (const MalformedPayload&) {
        // A garbled payload after decryption means the key stream was wrong or
        // the body was tampered with; never report it as a format problem.
        throw IntegrityFailure("payload integrity check failed");
    }
    const std::size_t n = view.base_count;

    std::array<std::uint8_t, kTagSize> expect{};
    Sha256 h;
    h.update(payload.data(), view.sequence_section_len);
    h.finish(expect.data());
    if (expect != env.tag) throw IntegrityFailure("structural digest mismatch");

    // Zero padding in the final packed byte is part of the canonical encoding.
    if (n % 4 != 0) {
        std::uint8_t last = payload[view.packed_offset + (n + 3) / 4 - 1];
        if ((last & ((1u << (8 - 2 * (n % 4))) - 1)) != 0)
            throw IntegrityFailure("nonzero padding in packed sequence");
    }

    Permutation perm;
    perm.map.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        perm.map[k] = load_le32(payload.data() + view.perm_offset + 4 * k);
    if (!perm.is_bijection()) throw IntegrityFailure("transmitted permutation is not a bijection");

    std::vector<std::uint8_t> folded = unpack_bases(payload.data() + view.packed_offset, n);
    std::vector<std::uint8_t> bases = ncrna::apply(folded, invert(perm));

    RnaSequence rna;
    rna.bases = std::move(bases);
    rna.origin_bit_length = env.origin_bit_length;
    try {
        return decode(rna, sbox);
    } catch (const MalformedSequence&) {
        throw IntegrityFailure("decoded sequence inconsistent with envelope header");
    }
}

}  // namespace ncrna
