#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncrna {

using Bytes = std::vector<std::uint8_t>;

inline std::string to_hex(const std::uint8_t* data, std::size_t len) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }

inline int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline Bytes from_hex(const std::string& s) {
    if (s.size() % 2 != 0) throw std::invalid_argument("hex string must have even length");
    Bytes out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(s[2 * i]);
        int lo = hex_nibble(s[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

inline std::uint32_t load_le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint64_t load_le64(const std::uint8_t* p) {
    return static_cast<std::uint64_t>(load_le32(p)) |
           (static_cast<std::uint64_t>(load_le32(p + 4)) << 32);
}

inline void store_le32(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

inline void store_le64(std::uint8_t* p, std::uint64_t v) {
    store_le32(p, static_cast<std::uint32_t>(v));
    store_le32(p + 4, static_cast<std::uint32_t>(v >> 32));
}

inline void append_le32(Bytes& b, std::uint32_t v) {
    std::uint8_t tmp[4];
    store_le32(tmp, v);
    b.insert(b.end(), tmp, tmp + 4);
}

inline void append_le64(Bytes& b, std::uint64_t v) {
    std::uint8_t tmp[8];
    store_le64(tmp, v);
    b.insert(b.end(), tmp, tmp + 8);
}

// Writes a bit stream most-significant-bit first into a growing byte buffer.
class BitWriter {
public:
    void put_bits(std::uint32_t value, unsigned count) {
        // value's low `count` bits, emitted high bit first
        for (unsigned i = count; i-- > 0;) put_bit((value >> i) & 1u);
    }

    void put_bit(std::uint32_t bit) {
        if (fill_ == 0) buf_.push_back(0);
        buf_.back() = static_cast<std::uint8_t>(buf_.back() | ((bit & 1u) << (7 - fill_)));
        fill_ = (fill_ + 1) % 8;
    }

    std::size_t bit_count() const { return buf_.size() * 8 - (fill_ == 0 ? 0 : 8 - fill_); }
    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
    unsigned fill_ = 0;
};

// Reads a byte buffer as a bit stream, most-significant-bit first.
class BitReader {
public:
    BitReader(const std::uint8_t* data, std::size_t bit_count)
        : data_(data), bit_count_(bit_count) {}

    std::size_t remaining() const { return bit_count_ - pos_; }

    // Reads up to `count` bits; missing bits beyond the stream are zero-padded on the right.
    std::uint32_t get_bits_padded(unsigned count) {
        std::uint32_t v = 0;
        for (unsigned i = 0; i < count; ++i) {
            v <<= 1;
            if (pos_ < bit_count_) {
                v |= (data_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
                ++pos_;
            }
        }
        return v;
    }

private:
    const std::uint8_t* data_;
    std::size_t bit_count_;
    std::size_t pos_ = 0;
};

}  // namespace ncrna
