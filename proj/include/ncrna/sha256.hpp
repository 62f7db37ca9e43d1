#pragma once

#include <cstdint>
#include <cstring>

#include "ncrna/bytes.hpp"

namespace ncrna {

// SHA-256 (FIPS 180-4), incremental interface.
class Sha256 {
public:
    static constexpr std::size_t kDigestSize = 32;

    Sha256() { reset(); }

    void reset() {
        state_[0] = 0x6a09e667u; state_[1] = 0xbb67ae85u;
        state_[2] = 0x3c6ef372u; state_[3] = 0xa54ff53au;
        state_[4] = 0x510e527fu; state_[5] = 0x9b05688cu;
        state_[6] = 0x1f83d9abu; state_[7] = 0x5be0cd19u;
        total_ = 0;
        buffered_ = 0;
    }

    void update(const std::uint8_t* data, std::size_t len) {
        total_ += len;
        if (buffered_ != 0) {
            std::size_t take = 64 - buffered_;
            if (take > len) take = len;
            std::memcpy(buf_ + buffered_, data, take);
            buffered_ += take;
            data += take;
            len -= take;
            if (buffered_ == 64) {
                compress(buf_);
                buffered_ = 0;
            }
        }
        while (len >= 64) {
            compress(data);
            data += 64;
            len -= 64;
        }
        if (len != 0) {
            std::memcpy(buf_, data, len);
            buffered_ = len;
        }
    }

    void update(const Bytes& data) { update(data.data(), data.size()); }

    void finish(std::uint8_t out[kDigestSize]) {
        std::uint64_t bit_len = total_ * 8;
        std::uint8_t pad = 0x80;
        update(&pad, 1);
        std::uint8_t zero = 0;
        while (buffered_ != 56) update(&zero, 1);
        std::uint8_t len_be[8];
        for (int i = 0; i < 8; ++i) len_be[i] = static_cast<std::uint8_t>(bit_len >> (56 - 8 * i));
        update(len_be, 8);
        for (int i = 0; i < 8; ++i) {
            out[4 * i + 0] = static_cast<std::uint8_t>(state_[i] >> 24);
            out[4 * i + 1] = static_cast<std::uint8_t>(state_[i] >> 16);
            out[4 * i + 2] = static_cast<std::uint8_t>(state_[i] >> 8);
            out[4 * i + 3] = static_cast<std::uint8_t>(state_[i]);
        }
        reset();
    }

    static Bytes digest(const std::uint8_t* data, std::size_t len) {
        Sha256 h;
        h.update(data, len);
        Bytes out(kDigestSize);
        h.finish(out.data());
        return out;
    }

    static Bytes digest(const Bytes& data) { return digest(data.data(), data.size()); }

    // Chaining-state capture/restore at a 64-byte boundary. Lets HMAC compress
    // each key pad once and replay the result for every message.
    void snapshot(std::uint32_t out[8]) const { std::memcpy(out, state_, sizeof(state_)); }

    void seed(const std::uint32_t state[8], std::uint64_t bytes_done) {
        std::memcpy(state_, state, sizeof(state_));
        total_ = bytes_done;
        buffered_ = 0;
    }

private:
    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void compress(const std::uint8_t* block) {
        static const std::uint32_t K[64] = {
            0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu, 0x59f111f1u,
            0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u, 0x243185beu, 0x550c7dc3u,
            0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u, 0xc19bf174u, 0xe49b69c1u, 0xefbe4786u,
            0x0fc19dc6u, 0x240ca1ccu, 0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau,
            0x983e5152u, 0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
            0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu, 0x53380d13u,
            0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u, 0xa2bfe8a1u, 0xa81a664bu,
            0xc24b8b70u, 0xc76c51a3u, 0xd192e819u, 0xd6990624u, 0xf40e3585u, 0x106aa070u,
            0x19a4c116u, 0x1e376c08u, 0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au,
            0x5b9cca4fu, 0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
            0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u};

        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i) {
            w[i] = (static_cast<std::uint32_t>(block[4 * i]) << 24) |
                   (static_cast<std::uint32_t>(block[4 * i + 1]) << 16) |
                   (static_cast<std::uint32_t>(block[4 * i + 2]) << 8) |
                   static_cast<std::uint32_t>(block[4 * i + 3]);
        }
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }

        std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
        std::uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = h + s1 + ch + K[i] + w[i];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            h = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        state_[0] += a; state_[1] += b; state_[2] += c; state_[3] += d;
        state_[4] += e; state_[5] += f; state_[6] += g; state_[7] += h;
    }

    std::uint32_t state_[8];
    std::uint64_t total_ = 0;
    std::uint8_t buf_[64];
    std::size_t buffered_ = 0;
};

// HMAC-SHA256 (RFC 2104). Precomputes padded key states so PBKDF2 iteration is cheap.
class HmacSha256 {
public:
    static constexpr std::size_t kDigestSize = 32;

    HmacSha256(const std::uint8_t* key, std::size_t key_len) {
        std::uint8_t block[64] = {0};
        if (key_len > 64) {
            Sha256 h;
            h.update(key, key_len);
            h.finish(block);
        } else {
            std::memcpy(block, key, key_len);
        }
        // Compress each pad block once up front; reset/finish replay the
        // captured chaining states instead of re-hashing 64 pad bytes. PBKDF2
        // leans on this: it drops from four compressions per iteration to two.
        std::uint8_t pad[64];
        Sha256 h;
        for (int i = 0; i < 64; ++i) pad[i] = static_cast<std::uint8_t>(block[i] ^ 0x36);
        h.update(pad, 64);
        h.snapshot(inner_state_);
        h.reset();
        for (int i = 0; i < 64; ++i) pad[i] = static_cast<std::uint8_t>(block[i] ^ 0x5c);
        h.update(pad, 64);
        h.snapshot(outer_state_);
        reset();
    }

    explicit HmacSha256(const Bytes& key) : HmacSha256(key.data(), key.size()) {}

    void reset() { inner_.seed(inner_state_, 64); }

    void update(const std::uint8_t* data, std::size_t len) { inner_.update(data, len); }
    void update(const Bytes& data) { update(data.data(), data.size()); }

    void finish(std::uint8_t out[kDigestSize]) {
        std::uint8_t inner_digest[32];
        inner_.finish(inner_digest);
        Sha256 outer;
        outer.seed(outer_state_, 64);
        outer.update(inner_digest, 32);
        outer.finish(out);
        reset();
    }

    static Bytes mac(const Bytes& key, const Bytes& msg) {
        HmacSha256 m(key);
        m.update(msg);
        Bytes out(kDigestSize);
        m.finish(out.data());
        return out;
    }

private:
    Sha256 inner_;
    std::uint32_t inner_state_[8];
    std::uint32_t outer_state_[8];
};

// PBKDF2-HMAC-SHA256 (RFC 2898 / RFC 8018).
inline Bytes pbkdf2_hmac_sha256(const Bytes& password, const Bytes& salt,
                                std::uint32_t iterations, std::size_t dk_len) {
    Bytes out;
    out.reserve(dk_len);
    HmacSha256 prf(password);
    std::uint32_t block_index = 1;
    while (out.size() < dk_len) {
        std::uint8_t u[32];
        prf.update(salt);
        std::uint8_t be[4] = {static_cast<std::uint8_t>(block_index >> 24),
                              static_cast<std::uint8_t>(block_index >> 16),
                              static_cast<std::uint8_t>(block_index >> 8),
                              static_cast<std::uint8_t>(block_index)};
        prf.update(be, 4);
        prf.finish(u);
        std::uint8_t acc[32];
        std::memcpy(acc, u, 32);
        for (std::uint32_t iter = 1; iter < iterations; ++iter) {
            prf.update(u, 32);
            prf.finish(u);
            for (int i = 0; i < 32; ++i) acc[i] ^= u[i];
        }
        std::size_t take = dk_len - out.size();
        if (take > 32) take = 32;
        out.insert(out.end(), acc, acc + take);
        ++block_index;
    }
    return out;
}

}  // namespace ncrna
