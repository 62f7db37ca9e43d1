#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ncrna/keyforge.hpp"

using namespace ncrna;

namespace {

Bytes ascii(const std::string& s) { return Bytes(s.begin(), s.end()); }

}  // namespace

TEST_CASE("base packing is two bits per base, high bits first", "[keyforge]") {
    CHECK(to_hex(pack_bases({0, 1, 2, 3})) == "1b");
    CHECK(to_hex(pack_bases({3})) == "c0");
    CHECK(pack_bases({}).empty());
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint8_t> bases(rng() % 200);
        for (auto& b : bases) b = static_cast<std::uint8_t>(rng() % 4);
        Bytes packed = pack_bases(bases);
        CHECK(packed.size() == (bases.size() + 3) / 4);
        CHECK(unpack_bases(packed.data(), bases.size()) == bases);
    }
}

TEST_CASE("a strongly pairing secret yields stem-only master material", "[keyforge]") {
    // 0xffffffaaaaaa maps to twelve G then twelve C; the optimal fold stacks
    // ten pairs, so twenty stem bases (>= 16) go into the master, packed,
    // followed by the structure text.
    MasterSequence master = extract_master(from_hex("ffffffaaaaaa"));
    std::string db = "((((((((((....))))))))))";
    Bytes expect = from_hex("fffffaaaaa");
    expect.insert(expect.end(), db.begin(), db.end());
    CHECK(master.bytes == expect);
    CHECK(to_hex(master.source_fingerprint) ==
          "0c25a324ebd3b1b3b6dc027736d8423894b75e62be844bd2505013d48e09a3ea");
}

TEST_CASE("a weakly pairing secret falls back to the full sequence", "[keyforge]") {
    // "AB" maps to UAAUUAACA, which folds with a single pair: two stem bases,
    // below the sixteen-base floor, so the whole sequence is used.
    MasterSequence master = extract_master(ascii("AB"));
    std::string db = "(.......)";
    Bytes expect = from_hex("414200");
    expect.insert(expect.end(), db.begin(), db.end());
    CHECK(master.bytes == expect);
    CHECK(to_hex(master.source_fingerprint) ==
          "e91afddf77ff0833ba9738c6d9d6649706b3dc9dbe3dbaf32f13dcf9df2c4827");

    // single zero byte: AAAAAA, no pairs at all
    MasterSequence flat = extract_master(Bytes(1, 0x00));
    Bytes expect_flat = from_hex("0000");
    expect_flat.insert(expect_flat.end(), 6, '.');
    CHECK(flat.bytes == expect_flat);
    CHECK(to_hex(flat.source_fingerprint) ==
          "efc8711d17c5bf19dbcf72280961c7c42453f57df2faf4d9669576361f788b41");
}

TEST_CASE("key derivation is deterministic and salt-sensitive", "[keyforge]") {
    MasterSequence master = extract_master(ascii("AB"));
    Bytes salt(kSaltSize, 0x01);
    SessionKey sk = derive_key(master, salt);
    CHECK(sk.key.size() == kSessionKeySize);
    CHECK(sk.iterations == kKdfIterations);
    CHECK(std::equal(salt.begin(), salt.end(), sk.salt.begin()));
    CHECK(to_hex(sk.key) == "25df00b2dca8290d96416c25d40a05d56b73162fd1a6e315f0a70f8ee5f2fe61");

    SessionKey again = derive_key(master, salt);
    CHECK(again.key == sk.key);
    Bytes other_salt(kSaltSize, 0x02);
    CHECK(derive_key(master, other_salt).key != sk.key);
}

TEST_CASE("bad inputs are rejected", "[keyforge]") {
    CHECK_THROWS_AS(extract_master(Bytes{}), InvalidSecret);
    MasterSequence master = extract_master(ascii("x"));
    CHECK_THROWS_AS(derive_key(master, Bytes(15, 0)), InvalidSalt);
    CHECK_THROWS_AS(derive_key(master, Bytes(17, 0)), InvalidSalt);
    CHECK_THROWS_AS(derive_key(master, Bytes{}), InvalidSalt);
}

TEST_CASE("every extraction pays for a full fold", "[keyforge]") {
    Bytes secret = ascii("cost accounting secret");
    std::uint64_t calls0 = FoldStats::fold_calls().load();
    std::uint64_t cells0 = FoldStats::dp_cells().load();
    extract_master(secret);
    std::uint64_t n = 3 * ((8 * secret.size() + 5) / 6);
    CHECK(FoldStats::fold_calls().load() == calls0 + 1);
    CHECK(FoldStats::dp_cells().load() == cells0 + n * (n + 1) / 2);
}

TEST_CASE("random master and salt pairs never collide on the derived key", "[keyforge]") {
    // Two routes. The full derive_key path is exercised at a count the 10^4
    // iteration cost allows; the same claim is then pushed to 10^4 pairs
    // through the raw KDF with the iteration count dialed down to 1, which
    // keeps the input-to-key mapping (and hence collision behavior) intact
    // while dropping the stretching work.
    std::mt19937_64 rng(0x2fd1);
    auto rand_bytes = [&rng](std::size_t n) {
        Bytes b(n);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng());
        return b;
    };

    std::set<std::string> keys;
    for (int i = 0; i < 300; ++i) {
        MasterSequence m = extract_master(rand_bytes(8 + static_cast<std::size_t>(rng() % 25)));
        keys.insert(to_hex(derive_key(m, rand_bytes(kSaltSize)).key));
    }
    CHECK(keys.size() == 300);

    std::set<std::string> raw;
    for (int i = 0; i < 10000; ++i) {
        raw.insert(to_hex(pbkdf2_hmac_sha256(rand_bytes(24), rand_bytes(kSaltSize), 1, 32)));
    }
    CHECK(raw.size() == 10000);
}

TEST_CASE("one-byte secret changes almost always move the master material", "[keyforge]") {
    // A changed byte whose codons land entirely in loops can leave the stem
    // set and the dot-bracket unchanged, so the master bytes alias at a low
    // rate by construction. The fingerprint hashes the full letter sequence
    // and never aliases. Measured alias rate at this generator: 29/1000.
    std::mt19937_64 rng(0x51ab);
    int master_differs = 0;
    for (int i = 0; i < 1000; ++i) {
        Bytes secret(32);
        for (auto& b : secret) b = static_cast<std::uint8_t>(rng());
        Bytes twin = secret;
        std::size_t pos = rng() % twin.size();
        std::uint8_t delta = static_cast<std::uint8_t>(1 + rng() % 255);
        twin[pos] = static_cast<std::uint8_t>(twin[pos] ^ delta);

        MasterSequence a = extract_master(secret);
        MasterSequence b = extract_master(twin);
        if (a.bytes != b.bytes) ++master_differs;
        REQUIRE(a.source_fingerprint != b.source_fingerprint);
    }
    CHECK(master_differs >= 950);
    INFO("master bytes differed in " << master_differs << "/1000 one-byte twins");
}

TEST_CASE("single-bit secret changes move the fingerprint", "[keyforge]") {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 100; ++trial) {
        Bytes secret(1 + rng() % 40);
        for (auto& b : secret) b = static_cast<std::uint8_t>(rng());
        Bytes flipped = secret;
        flipped[rng() % flipped.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
        if (flipped == secret) continue;
        CHECK(extract_master(secret).source_fingerprint !=
              extract_master(flipped).source_fingerprint);
    }
}
