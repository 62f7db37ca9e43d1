#pragma once

#include <array>
#include <cstdint>
#include <cstring>

#include "ncrna/bytes.hpp"
#include "ncrna/sha256.hpp"

namespace ncrna {

// ChaCha20 stream cipher (RFC 8439): 32-byte key, 12-byte nonce, 32-bit block counter.
// The block loop is branch-free in the data; only lengths steer control flow.
class ChaCha20 {
public:
    static constexpr std::size_t kKeySize = 32;
    static constexpr std::size_t kNonceSize = 12;
    static constexpr std::size_t kBlockSize = 64;

    ChaCha20(const std::uint8_t key[kKeySize], const std::uint8_t nonce[kNonceSize],
             std::uint32_t counter = 0) {
        state_[0] = 0x61707865u;
        state_[1] = 0x3320646eu;
        state_[2] = 0x79622d32u;
        state_[3] = 0x6b206574u;
        for (int i = 0; i < 8; ++i) state_[4 + i] = load_le32(key + 4 * i);
        state_[12] = counter;
        state_[13] = load_le32(nonce);
        state_[14] = load_le32(nonce + 4);
        state_[15] = load_le32(nonce + 8);
        available_ = 0;
    }

    ChaCha20(const Bytes& key, const Bytes& nonce, std::uint32_t counter = 0)
        : ChaCha20(key.data(), nonce.data(), counter) {}

    // out = in XOR keystream; in-place allowed.
    void xor_stream(std::uint8_t* out, const std::uint8_t* in, std::size_t len) {
        while (len != 0) {
            if (available_ == 0) refill();
            std::size_t take = available_ < len ? available_ : len;
            const std::uint8_t* ks = block_ + (kBlockSize - available_);
            for (std::size_t i = 0; i < take; ++i) out[i] = static_cast<std::uint8_t>(in[i] ^ ks[i]);
            out += take;
            in += take;
            len -= take;
            available_ -= take;
        }
    }

    void keystream(std::uint8_t* out, std::size_t len) {
        std::memset(out, 0, len);
        xor_stream(out, out, len);
    }

    Bytes keystream(std::size_t len) {
        Bytes out(len);
        keystream(out.data(), len);
        return out;
    }

    // One raw block for the given counter, without touching stream position.
    static void block(const std::uint8_t key[kKeySize], const std::uint8_t nonce[kNonceSize],
                      std::uint32_t counter, std::uint8_t out[kBlockSize]) {
        ChaCha20 c(key, nonce, counter);
        c.refill();
        std::memcpy(out, c.block_, kBlockSize);
    }

private:
    static std::uint32_t rotl(std::uint32_t v, int n) { return (v << n) | (v >> (32 - n)); }

    static void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c,
                              std::uint32_t& d) {
        a += b; d ^= a; d = rotl(d, 16);
        c += d; b ^= c; b = rotl(b, 12);
        a += b; d ^= a; d = rotl(d, 8);
        c += d; b ^= c; b = rotl(b, 7);
    }

    void refill() {
        std::uint32_t x[16];
        std::memcpy(x, state_, sizeof(x));
        for (int round = 0; round < 10; ++round) {
            quarter_round(x[0], x[4], x[8], x[12]);
            quarter_round(x[1], x[5], x[9], x[13]);
            quarter_round(x[2], x[6], x[10], x[14]);
            quarter_round(x[3], x[7], x[11], x[15]);
            quarter_round(x[0], x[5], x[10], x[15]);
            quarter_round(x[1], x[6], x[11], x[12]);
            quarter_round(x[2], x[7], x[8], x[13]);
            quarter_round(x[3], x[4], x[9], x[14]);
        }
        for (int i = 0; i < 16; ++i) store_le32(block_ + 4 * i, x[i] + state_[i]);
        state_[12] += 1;  // block counter
        available_ = kBlockSize;
    }

    std::uint32_t state_[16];
    std::uint8_t block_[kBlockSize];
    std::size_t available_;
};

// Deterministic integer sampler over a ChaCha20 keystream.
//
// Construction shared by every seeded shuffle in the library: the stream is keyed
// with SHA-256(seed) under an all-zero nonce and counter 0, and uniform draws use
// 4-byte little-endian words with rejection sampling, so no modulo bias and the
// same seed reproduces the same draws in any implementation of this rule.
class KeystreamSampler {
public:
    explicit KeystreamSampler(const Bytes& seed)
        : stream_(make_stream(seed)) {}

    // Uniform value in [0, bound); bound >= 1.
    std::uint32_t uniform(std::uint32_t bound) {
        if (bound <= 1) return 0;
        // largest multiple of bound that fits in 2^32; kept in 64 bits so a
        // power-of-two bound (limit exactly 2^32) accepts every word
        std::uint64_t limit = (std::uint64_t{1} << 32) - ((std::uint64_t{1} << 32) % bound);
        for (;;) {
            std::uint32_t v = next_u32();
            if (v < limit) return v % bound;
        }
    }

    std::uint32_t next_u32() {
        std::uint8_t w[4];
        stream_.keystream(w, 4);
        return load_le32(w);
    }

private:
    static ChaCha20 make_stream(const Bytes& seed) {
        Bytes key = Sha256::digest(seed);
        std::uint8_t nonce[ChaCha20::kNonceSize] = {0};
        return ChaCha20(key.data(), nonce, 0);
    }

    ChaCha20 stream_;
};

}  // namespace ncrna
