#pragma once

#include <openssl/evp.h>
#include <openssl/rsa.h>

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncrna/envelope.hpp"
#include "ncrna/pbox.hpp"
#include "ncrna/sts.hpp"

// Throughput and avalanche measurement harness. The cipher under test is
// benchmarked against AES-256-CBC (PKCS7 padding) and chunked RSA-2048-OAEP
// behind one adapter interface, on a deterministic plaintext corpus so runs
// on the same host are comparable. Reports serialize to CSV and JSON with a
// stable column order and six significant digits.

namespace ncrna {

enum class BenchAlgorithm : std::uint8_t { Ncrna, Aes256Cbc, Rsa2048Oaep };
enum class BenchOp : std::uint8_t { Encrypt, Decrypt };

inline const char* algorithm_name(BenchAlgorithm a) {
    switch (a) {
        case BenchAlgorithm::Ncrna: return "NCRNA";
        case BenchAlgorithm::Aes256Cbc: return "AES256_CBC";
        case BenchAlgorithm::Rsa2048Oaep: return "RSA2048_OAEP";
    }
    throw UnsupportedFormat("unknown benchmark algorithm");
}

inline BenchAlgorithm algorithm_from_name(const std::string& s) {
    if (s == "NCRNA") return BenchAlgorithm::Ncrna;
    if (s == "AES256_CBC") return BenchAlgorithm::Aes256Cbc;
    if (s == "RSA2048_OAEP") return BenchAlgorithm::Rsa2048Oaep;
    throw UnsupportedFormat("unknown benchmark algorithm: " + s);
}

inline const char* op_name(BenchOp op) { return op == BenchOp::Encrypt ? "encrypt" : "decrypt"; }

inline BenchOp op_from_name(const std::string& s) {
    if (s == "encrypt") return BenchOp::Encrypt;
    if (s == "decrypt") return BenchOp::Decrypt;
    throw UnsupportedFormat("unknown benchmark op: " + s);
}

struct BenchRecord {
    BenchAlgorithm algorithm = BenchAlgorithm::Ncrna;
    BenchOp op = BenchOp::Encrypt;
    std::size_t size_bytes = 0;
    std::size_t trials = 0;
    double mean_seconds = 0.0;
    double throughput_kib_s = 0.0;
    // encrypt rows carry the ciphertext's byte entropy, decrypt rows the
    // round-trip success fraction; the other field stays NaN
    double entropy_bits = std::numeric_limits<double>::quiet_NaN();
    double reliability = std::numeric_limits<double>::quiet_NaN();
};

enum class AvalancheMode : std::uint8_t { PlaintextBitFlip, SeedFlip, LabelPerturb };

inline const char* mode_name(AvalancheMode m) {
    switch (m) {
        case AvalancheMode::PlaintextBitFlip: return "PLAINTEXT_BIT_FLIP";
        case AvalancheMode::SeedFlip: return "SEED_FLIP";
        case AvalancheMode::LabelPerturb: return "LABEL_PERTURB";
    }
    throw UnsupportedFormat("unknown avalanche mode");
}

inline AvalancheMode mode_from_name(const std::string& s) {
    if (s == "PLAINTEXT_BIT_FLIP") return AvalancheMode::PlaintextBitFlip;
    if (s == "SEED_FLIP") return AvalancheMode::SeedFlip;
    if (s == "LABEL_PERTURB") return AvalancheMode::LabelPerturb;
    throw UnsupportedFormat("unknown avalanche mode: " + s);
}

struct AvalancheRecord {
    AvalancheMode mode = AvalancheMode::PlaintextBitFlip;
    std::size_t perturb_k = 0;  // label mode only
    std::size_t samples = 0;
    double hamming_mean = std::numeric_limits<double>::quiet_NaN();
    double hamming_ci99 = std::numeric_limits<double>::quiet_NaN();
    double remap_mean = std::numeric_limits<double>::quiet_NaN();
};

// One cipher behind a byte-in byte-out interface; setup failures surface as
// BaselineUnavailable, failed decryptions as IntegrityFailure.
class CipherAdapter {
  public:
    virtual ~CipherAdapter() = default;
    virtual Bytes encrypt(const Bytes& plaintext) = 0;
    virtual Bytes decrypt(const Bytes& ciphertext) = 0;
};

namespace detail {

// Deterministic byte stream for corpora and fixtures: ChaCha20 keyed with the
// digest of the label under an all-zero nonce.
inline Bytes labeled_stream(const std::string& label, std::size_t len) {
    std::array<std::uint8_t, 32> key{};
    Sha256 h;
    h.update(reinterpret_cast<const std::uint8_t*>(label.data()), label.size());
    h.finish(key.data());
    std::array<std::uint8_t, 12> nonce{};
    ChaCha20 prng(key.data(), nonce.data(), 0);
    return prng.keystream(len);
}

inline double six_sig(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
}

}  // namespace detail

class NcrnaAdapter : public CipherAdapter {
  public:
    NcrnaAdapter()
        : secret_(detail::labeled_stream("bench ncrna secret", 32)),
          seed_(detail::labeled_stream("bench ncrna seed", 32)),
          entropy_(detail::labeled_stream("bench ncrna entropy", 32)) {}

    Bytes encrypt(const Bytes& plaintext) override {
        return serialize(ncrna::encrypt(plaintext, secret_, seed_, entropy_));
    }

    Bytes decrypt(const Bytes& ciphertext) override {
        return ncrna::decrypt(parse(ciphertext), secret_, seed_);
    }

  private:
    Bytes secret_;
    Bytes seed_;
    DeterministicEntropy entropy_;
};

class Aes256CbcAdapter : public CipherAdapter {
  public:
    Aes256CbcAdapter() {
        Bytes material = detail::labeled_stream("bench aes key iv", 48);
        std::copy_n(material.begin(), 32, key_.begin());
        std::copy_n(material.begin() + 32, 16, iv_.begin());
    }

    Aes256CbcAdapter(const std::array<std::uint8_t, 32>& key,
                     const std::array<std::uint8_t, 16>& iv)
        : key_(key), iv_(iv) {}

    Bytes encrypt(const Bytes& plaintext) override { return run(plaintext, true); }
    Bytes decrypt(const Bytes& ciphertext) override { return run(ciphertext, false); }

  private:
    Bytes run(const Bytes& in, bool enc) {
        struct CtxFree {
            void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
        };
        std::unique_ptr<EVP_CIPHER_CTX, CtxFree> ctx(EVP_CIPHER_CTX_new());
        if (!ctx) throw BaselineUnavailable("cannot allocate cipher context");
        if (EVP_CipherInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key_.data(), iv_.data(),
                              enc ? 1 : 0) != 1)
            throw BaselineUnavailable("AES-256-CBC is not available");
        Bytes out(in.size() + 16);
        int len1 = 0, len2 = 0;
        if (EVP_CipherUpdate(ctx.get(), out.data(), &len1, in.data(),
                             static_cast<int>(in.size())) != 1)
            throw BaselineUnavailable("AES-256-CBC update failed");
        if (EVP_CipherFinal_ex(ctx.get(), out.data() + len1, &len2) != 1) {
            if (enc) throw BaselineUnavailable("AES-256-CBC finalization failed");
            throw IntegrityFailure("AES-256-CBC padding check failed");
        }
        out.resize(static_cast<std::size_t>(len1) + static_cast<std::size_t>(len2));
        return out;
    }

    std::array<std::uint8_t, 32> key_{};
    std::array<std::uint8_t, 16> iv_{};
};

// RSA-2048 with OAEP(SHA-256). A 2048-bit modulus caps one OAEP payload at
// 256 - 2*32 - 2 = 190 bytes, so longer inputs travel as a sequence of
// 256-byte blocks, each encrypting the next 190-byte slice.
class Rsa2048OaepAdapter : public CipherAdapter {
  public:
    static constexpr std::size_t kChunk = 190;
    static constexpr std::size_t kBlock = 256;

    Rsa2048OaepAdapter() {
        EVP_PKEY_CTX* kctx = EVP_PKEY_CTX_new_id(EVP_PKEY_RSA, nullptr);
        if (!kctx) throw BaselineUnavailable("cannot allocate RSA keygen context");
        EVP_PKEY* key = nullptr;
        bool ok = EVP_PKEY_keygen_init(kctx) == 1 &&
                  EVP_PKEY_CTX_set_rsa_keygen_bits(kctx, 2048) == 1 &&
                  EVP_PKEY_keygen(kctx, &key) == 1;
        EVP_PKEY_CTX_free(kctx);
        if (!ok || !key) throw BaselineUnavailable("RSA-2048 key generation failed");
        key_.reset(key);
    }

    Bytes encrypt(const Bytes& plaintext) override {
        Bytes out;
        out.reserve(((plaintext.size() + kChunk - 1) / kChunk) * kBlock);
        std::size_t off = 0;
        do {
            std::size_t take = std::min(kChunk, plaintext.size() - off);
            Pctx ctx = oaep_context(true);
            std::size_t outlen = kBlock;
            Bytes block(kBlock);
            if (EVP_PKEY_encrypt(ctx.get(), block.data(), &outlen, plaintext.data() + off,
                                 take) != 1)
                throw BaselineUnavailable("RSA-OAEP encryption failed");
            block.resize(outlen);
            out.insert(out.end(), block.begin(), block.end());
            off += take;
        } while (off < plaintext.size());
        return out;
    }

    Bytes decrypt(const Bytes& ciphertext) override {
        if (ciphertext.empty() || ciphertext.size() % kBlock != 0)
            throw IntegrityFailure("RSA-OAEP ciphertext is not a block sequence");
        Bytes out;
        out.reserve((ciphertext.size() / kBlock) * kChunk);
        for (std::size_t off = 0; off < ciphertext.size(); off += kBlock) {
            Pctx ctx = oaep_context(false);
            std::size_t outlen = kBlock;
            Bytes chunk(kBlock);
            if (EVP_PKEY_decrypt(ctx.get(), chunk.data(), &outlen, ciphertext.data() + off,
                                 kBlock) != 1)
                throw IntegrityFailure("RSA-OAEP decryption failed");
            chunk.resize(outlen);
            out.insert(out.end(), chunk.begin(), chunk.end());
        }
        return out;
    }

  private:
    struct KeyFree {
        void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
    };
    struct PctxFree {
        void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
    };
    using Pctx = std::unique_ptr<EVP_PKEY_CTX, PctxFree>;

    Pctx oaep_context(bool enc) {
        Pctx ctx(EVP_PKEY_CTX_new(key_.get(), nullptr));
        if (!ctx) throw BaselineUnavailable("cannot allocate RSA context");
        int ok = enc ? EVP_PKEY_encrypt_init(ctx.get()) : EVP_PKEY_decrypt_init(ctx.get());
        if (ok != 1 || EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_OAEP_PADDING) != 1 ||
            EVP_PKEY_CTX_set_rsa_oaep_md(ctx.get(), EVP_sha256()) != 1 ||
            EVP_PKEY_CTX_set_rsa_mgf1_md(ctx.get(), EVP_sha256()) != 1)
            throw BaselineUnavailable("RSA-OAEP parameters rejected");
        return ctx;
    }

    std::unique_ptr<EVP_PKEY, KeyFree> key_;
};

inline std::unique_ptr<CipherAdapter> make_adapter(BenchAlgorithm a) {
    switch (a) {
        case BenchAlgorithm::Ncrna: return std::make_unique<NcrnaAdapter>();
        case BenchAlgorithm::Aes256Cbc: return std::make_unique<Aes256CbcAdapter>();
        case BenchAlgorithm::Rsa2048Oaep: return std::make_unique<Rsa2048OaepAdapter>();
    }
    throw UnsupportedFormat("unknown benchmark algorithm");
}

struct BenchConfig {
    std::vector<std::size_t> sizes{50, 1000, 10000, 100000, 1048576};
    std::vector<BenchAlgorithm> algorithms{BenchAlgorithm::Ncrna, BenchAlgorithm::Aes256Cbc,
                                           BenchAlgorithm::Rsa2048Oaep};
    std::size_t trials = 3;
    std::size_t warmup = 1;
    // Accepted so callers can declare intent, but timing cells always run one
    // at a time: sharing the host between cells would corrupt the clocks.
    bool parallel = false;
};

// Runs the size x algorithm matrix sequentially. Baselines are constructed
// lazily, so a matrix naming only the native cipher never touches OpenSSL;
// a requested baseline that cannot initialize raises BaselineUnavailable.
inline std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
    if (cfg.trials < 1) throw InsufficientSamples("need at least one timed trial");
    using clock = std::chrono::steady_clock;
    std::vector<BenchRecord> out;
    for (BenchAlgorithm alg : cfg.algorithms) {
        std::unique_ptr<CipherAdapter> cipher = make_adapter(alg);
        for (std::size_t size : cfg.sizes) {
            Bytes plaintext = detail::labeled_stream("bench corpus", size);
            for (std::size_t w = 0; w < cfg.warmup; ++w) {
                Bytes ct = cipher->encrypt(plaintext);
                (void)cipher->decrypt(ct);
            }

            Bytes ct;
            auto t0 = clock::now();
            for (std::size_t t = 0; t < cfg.trials; ++t) ct = cipher->encrypt(plaintext);
            auto t1 = clock::now();
            double enc_mean = std::chrono::duration<double>(t1 - t0).count() /
                              static_cast<double>(cfg.trials);

            std::size_t good = 0;
            auto t2 = clock::now();
            for (std::size_t t = 0; t < cfg.trials; ++t)
                if (cipher->decrypt(ct) == plaintext) ++good;
            auto t3 = clock::now();
            double dec_mean = std::chrono::duration<double>(t3 - t2).count() /
                              static_cast<double>(cfg.trials);

            BenchRecord enc;
            enc.algorithm = alg;
            enc.op = BenchOp::Encrypt;
            enc.size_bytes = size;
            enc.trials = cfg.trials;
            enc.mean_seconds = enc_mean;
            enc.throughput_kib_s = static_cast<double>(size) / (1024.0 * enc_mean);
            enc.entropy_bits = sts::shannon_entropy(ct);
            out.push_back(enc);

            BenchRecord dec = enc;
            dec.op = BenchOp::Decrypt;
            dec.mean_seconds = dec_mean;
            dec.throughput_kib_s = static_cast<double>(size) / (1024.0 * dec_mean);
            dec.entropy_bits = std::numeric_limits<double>::quiet_NaN();
            dec.reliability = static_cast<double>(good) / static_cast<double>(cfg.trials);
            out.push_back(dec);
        }
    }
    return out;
}

struct AvalancheConfig {
    AvalancheMode mode = AvalancheMode::PlaintextBitFlip;
    std::size_t samples = 200;
    std::size_t message_bytes = 1024;  // bit-flip modes
    std::size_t perturb_k = 1;         // label mode
    std::size_t label_length = 100;    // label mode
};

namespace detail {

inline double hamming_ratio(const Bytes& a, const Bytes& b) {
    if (a.size() != b.size()) throw LengthMismatch("ciphertext bodies differ in length");
    std::size_t bits = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        bits += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
    return static_cast<double>(bits) / (8.0 * static_cast<double>(a.size()));
}

struct MeanCi {
    double mean = 0.0;
    double ci99 = 0.0;
};

inline MeanCi mean_ci99(const std::vector<double>& xs) {
    // two-sided 99% normal quantile
    constexpr double kZ99 = 2.5758293035489004;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    return {mean, kZ99 * std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace detail

// Differential measurement under a pinned (salt, nonce): the bit-flip modes
// re-encrypt a one-bit variant of the same message (or the same message under
// a one-bit variant of the seed) and compare ciphertext bodies; the label
// mode flips k structural labels and reports how much of the permutation
// moves. Fresh per-message randomness would mask exactly the structural
// effect being measured, which is why this harness is the documented consumer
// of the deterministic encryption entry point.
inline AvalancheRecord run_avalanche(const AvalancheConfig& cfg) {
    if (cfg.samples < 30) throw InsufficientSamples("avalanche needs at least 30 samples");
    AvalancheRecord rec;
    rec.mode = cfg.mode;
    rec.samples = cfg.samples;
    rec.perturb_k = cfg.mode == AvalancheMode::LabelPerturb ? cfg.perturb_k : 0;

    if (cfg.mode == AvalancheMode::LabelPerturb) {
        Bytes bases_stream = detail::labeled_stream("avalanche labels", cfg.samples * cfg.label_length);
        Bytes seed_stream = detail::labeled_stream("avalanche label seeds", cfg.samples * 32);
        double total = 0.0;
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            std::vector<std::uint8_t> bases(cfg.label_length);
            for (std::size_t i = 0; i < cfg.label_length; ++i)
                bases[i] = bases_stream[s * cfg.label_length + i] & 3u;
            SecondaryStructure st = fold(bases.data(), bases.size(), EnergyModel::standard());
            StructuralLabels labels = labels_of(st);
            Bytes seed(seed_stream.begin() + static_cast<std::ptrdiff_t>(s * 32),
                       seed_stream.begin() + static_cast<std::ptrdiff_t>(s * 32 + 32));
            StructuralLabels flipped = perturb_labels(labels, cfg.perturb_k, seed);
            total += remap_fraction(permutation_from_labels(labels),
                                    permutation_from_labels(flipped));
        }
        rec.remap_mean = total / static_cast<double>(cfg.samples);
        return rec;
    }

    Bytes secret = detail::labeled_stream("avalanche secret", 32);
    Bytes seed = detail::labeled_stream("avalanche seed", 32);
    Bytes corpus = detail::labeled_stream("avalanche corpus", cfg.samples * cfg.message_bytes);
    Bytes fixtures = detail::labeled_stream("avalanche fixtures", cfg.samples * (16 + 12));
    KeystreamSampler positions(detail::labeled_stream("avalanche positions", 32));

    std::vector<double> ratios;
    ratios.reserve(cfg.samples);
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        Bytes msg(corpus.begin() + static_cast<std::ptrdiff_t>(s * cfg.message_bytes),
                  corpus.begin() + static_cast<std::ptrdiff_t>((s + 1) * cfg.message_bytes));
        std::array<std::uint8_t, kSaltSize> salt{};
        std::array<std::uint8_t, kNonceSize> nonce{};
        const std::uint8_t* fix = fixtures.data() + s * (16 + 12);
        std::copy_n(fix, 16, salt.begin());
        std::copy_n(fix + 16, 12, nonce.begin());

        Envelope base = encrypt_deterministic(msg, secret, seed, salt, nonce);
        Envelope other;
        if (cfg.mode == AvalancheMode::PlaintextBitFlip) {
            Bytes flipped = msg;
            std::uint32_t bit = positions.uniform(static_cast<std::uint32_t>(8 * msg.size()));
            flipped[bit >> 3] ^= static_cast<std::uint8_t>(1u << (bit & 7u));
            other = encrypt_deterministic(flipped, secret, seed, salt, nonce);
        } else {
            Bytes flipped_seed = seed;
            std::uint32_t bit = positions.uniform(256);
            flipped_seed[bit >> 3] ^= static_cast<std::uint8_t>(1u << (bit & 7u));
            other = encrypt_deterministic(msg, secret, flipped_seed, salt, nonce);
        }
        ratios.push_back(detail::hamming_ratio(base.ciphertext, other.ciphertext));
    }
    detail::MeanCi stats = detail::mean_ci99(ratios);
    rec.hamming_mean = stats.mean;
    rec.hamming_ci99 = stats.ci99;
    return rec;
}

// Reports: one row per record, stable column order, six significant digits,
// NaN as an empty CSV cell or JSON null.

inline std::string bench_csv(const std::vector<BenchRecord>& records) {
    std::string out = "algorithm,op,size_bytes,trials,mean_seconds,throughput_kib_s,entropy_bits,reliability\n";
    char buf[64];
    auto num = [&](double v) -> std::string {
        if (!std::isfinite(v)) return "";
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    };
    for (const BenchRecord& r : records) {
        out += algorithm_name(r.algorithm);
        out += ',';
        out += op_name(r.op);
        std::snprintf(buf, sizeof buf, ",%zu,%zu,", r.size_bytes, r.trials);
        out += buf;
        out += num(r.mean_seconds) + "," + num(r.throughput_kib_s) + "," + num(r.entropy_bits) +
               "," + num(r.reliability) + "\n";
    }
    return out;
}

inline std::string avalanche_csv(const std::vector<AvalancheRecord>& records) {
    std::string out = "mode,perturb_k,samples,hamming_mean,hamming_ci99,remap_mean\n";
    char buf[64];
    auto num = [&](double v) -> std::string {
        if (!std::isfinite(v)) return "";
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    };
    for (const AvalancheRecord& r : records) {
        out += mode_name(r.mode);
        std::snprintf(buf, sizeof buf, ",%zu,%zu,", r.perturb_k, r.samples);
        out += buf;
        out += num(r.hamming_mean) + "," + num(r.hamming_ci99) + "," + num(r.remap_mean) + "\n";
    }
    return out;
}

namespace detail {

inline nlohmann::json num_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return six_sig(v);
}

inline double null_or_num(const nlohmann::json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

}  // namespace detail

inline std::string bench_json(const std::vector<BenchRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const BenchRecord& r : records) {
        arr.push_back({{"algorithm", algorithm_name(r.algorithm)},
                       {"op", op_name(r.op)},
                       {"size_bytes", r.size_bytes},
                       {"trials", r.trials},
                       {"mean_seconds", detail::num_or_null(r.mean_seconds)},
                       {"throughput_kib_s", detail::num_or_null(r.throughput_kib_s)},
                       {"entropy_bits", detail::num_or_null(r.entropy_bits)},
                       {"reliability", detail::num_or_null(r.reliability)}});
    }
    return arr.dump(2) + "\n";
}

inline std::vector<BenchRecord> bench_from_json(const std::string& text) {
    nlohmann::json arr = nlohmann::json::parse(text);
    std::vector<BenchRecord> out;
    for (const nlohmann::json& j : arr) {
        BenchRecord r;
        r.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
        r.op = op_from_name(j.at("op").get<std::string>());
        r.size_bytes = j.at("size_bytes").get<std::size_t>();
        r.trials = j.at("trials").get<std::size_t>();
        r.mean_seconds = detail::null_or_num(j.at("mean_seconds"));
        r.throughput_kib_s = detail::null_or_num(j.at("throughput_kib_s"));
        r.entropy_bits = detail::null_or_num(j.at("entropy_bits"));
        r.reliability = detail::null_or_num(j.at("reliability"));
        out.push_back(r);
    }
    return out;
}

inline std::string avalanche_json(const std::vector<AvalancheRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const AvalancheRecord& r : records) {
        arr.push_back({{"mode", mode_name(r.mode)},
                       {"perturb_k", r.perturb_k},
                       {"samples", r.samples},
                       {"hamming_mean", detail::num_or_null(r.hamming_mean)},
                       {"hamming_ci99", detail::num_or_null(r.hamming_ci99)},
                       {"remap_mean", detail::num_or_null(r.remap_mean)}});
    }
    return arr.dump(2) + "\n";
}

inline std::vector<AvalancheRecord> avalanche_from_json(const std::string& text) {
    nlohmann::json arr = nlohmann::json::parse(text);
    std::vector<AvalancheRecord> out;
    for (const nlohmann::json& j : arr) {
        AvalancheRecord r;
        r.mode = mode_from_name(j.at("mode").get<std::string>());
        r.perturb_k = j.at("perturb_k").get<std::size_t>();
        r.samples = j.at("samples").get<std::size_t>();
        r.hamming_mean = detail::null_or_num(j.at("hamming_mean"));
        r.hamming_ci99 = detail::null_or_num(j.at("hamming_ci99"));
        r.remap_mean = detail::null_or_num(j.at("remap_mean"));
        out.push_back(r);
    }
    return out;
}

}  // namespace ncrna
