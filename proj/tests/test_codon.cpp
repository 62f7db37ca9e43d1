#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ncrna/codon.hpp"

using namespace ncrna;

namespace {

Bytes ascii(const std::string& s) { return Bytes(s.begin(), s.end()); }

std::string codon_str(const Codon& c) {
    std::string s;
    for (auto b : c) s += nucleotide_char(b);
    return s;
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng());
    return out;
}

}  // namespace

TEST_CASE("canonical codon table enumerates lexicographically", "[codon]") {
    CodonSBox id = canonical_sbox();
    CHECK(codon_str(id.forward[0]) == "AAA");
    CHECK(codon_str(id.forward[1]) == "AAU");
    CHECK(codon_str(id.forward[2]) == "AAC");
    CHECK(codon_str(id.forward[3]) == "AAG");
    CHECK(codon_str(id.forward[4]) == "AUA");
    CHECK(codon_str(id.forward[63]) == "GGG");
    for (int v = 0; v < 64; ++v) {
        CHECK(codon_rank(id.forward[v]) == v);
        CHECK(id.inverse[codon_rank(id.forward[v])] == v);
    }
}

TEST_CASE("all-zero seed selects identity table", "[codon]") {
    Bytes zeros(32, 0x00);
    CodonSBox box = build_sbox(zeros);
    CodonSBox id = canonical_sbox();
    for (int v = 0; v < 64; ++v) CHECK(box.forward[v] == id.forward[v]);
    // 31 or 33 zero bytes are ordinary seeds, not the sentinel
    CHECK_FALSE(is_identity_seed(Bytes(31, 0x00)));
    CHECK_FALSE(is_identity_seed(Bytes(33, 0x00)));
}

TEST_CASE("empty seed is rejected", "[codon]") {
    CHECK_THROWS_AS(build_sbox(Bytes{}), InvalidSeed);
}

TEST_CASE("seeded tables are permutations and differ across seeds", "[codon]") {
    std::set<std::string> tables;
    for (int s = 0; s < 50; ++s) {
        Bytes seed = ascii("table-seed-" + std::to_string(s));
        CodonSBox box = build_sbox(seed);
        std::set<int> ranks;
        std::string flat;
        for (int v = 0; v < 64; ++v) {
            int r = codon_rank(box.forward[v]);
            ranks.insert(r);
            CHECK(box.inverse[r] == v);
            flat += codon_str(box.forward[v]);
        }
        CHECK(ranks.size() == 64);
        tables.insert(flat);
        // same seed rebuilds the same table
        CodonSBox again = build_sbox(seed);
        for (int v = 0; v < 64; ++v) CHECK(again.forward[v] == box.forward[v]);
    }
    CHECK(tables.size() == 50);
}

TEST_CASE("encoded length follows the chunk formula", "[codon]") {
    Bytes seed = ascii("length-check");
    CodonSBox box = build_sbox(seed);
    std::mt19937_64 rng(7);
    auto check_len = [&](std::size_t n) {
        Bytes pt = random_bytes(rng, n);
        RnaSequence rna = encode(pt, box);
        std::size_t chunks = (8 * n + 5) / 6;
        CHECK(rna.bases.size() == 3 * chunks);
        CHECK(rna.origin_bit_length == 8 * n);
    };
    for (std::size_t n = 0; n <= 300; ++n) check_len(n);
    for (std::size_t n = 301; n <= 100000; n += 97) check_len(n);
}

TEST_CASE("decode inverts encode over random messages and seeds", "[codon]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        Bytes seed = random_bytes(rng, 1 + rng() % 48);
        CodonSBox box = build_sbox(seed);
        std::size_t n = rng() % 512;
        Bytes pt = random_bytes(rng, n);
        RnaSequence rna = encode(pt, box);
        CHECK(decode(rna, box) == pt);
    }
}

TEST_CASE("kilobyte messages round-trip through fresh tables", "[codon]") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
        Bytes seed = random_bytes(rng, 32);
        if (is_identity_seed(seed)) seed[0] = 1;
        CodonSBox box = build_sbox(seed);
        Bytes pt = random_bytes(rng, 1024);
        RnaSequence rna = encode(pt, box);
        REQUIRE(decode(rna, box) == pt);
    }
}

TEST_CASE("decode rejects malformed sequences", "[codon]") {
    Bytes seed = ascii("strict");
    CodonSBox box = build_sbox(seed);
    Bytes pt = ascii("hello world");
    RnaSequence good = encode(pt, box);

    SECTION("length not divisible by three") {
        RnaSequence bad = good;
        bad.bases.push_back(0);
        CHECK_THROWS_AS(decode(bad, box), MalformedSequence);
    }
    SECTION("origin bit length disagrees with the base count") {
        RnaSequence bad = good;
        bad.origin_bit_length += 8;
        CHECK_THROWS_AS(decode(bad, box), MalformedSequence);
    }
    SECTION("origin bit length not a whole number of bytes") {
        RnaSequence bad = good;
        bad.origin_bit_length -= 3;
        CHECK_THROWS_AS(decode(bad, box), MalformedSequence);
    }
    SECTION("base value out of range") {
        RnaSequence bad = good;
        bad.bases[0] = 4;
        CHECK_THROWS_AS(decode(bad, box), MalformedSequence);
    }
    SECTION("empty sequence with nonzero origin") {
        RnaSequence bad;
        bad.origin_bit_length = 8;
        CHECK_THROWS_AS(decode(bad, box), MalformedSequence);
    }
}

TEST_CASE("nearby seeds produce unrelated tables", "[codon]") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 30; ++trial) {
        Bytes seed = random_bytes(rng, 32);
        if (is_identity_seed(seed)) seed[5] = 9;
        Bytes flipped = seed;
        flipped[trial % 32] ^= static_cast<std::uint8_t>(1u << (trial % 8));
        if (is_identity_seed(flipped)) continue;
        CodonSBox a = build_sbox(seed), b = build_sbox(flipped);
        int same = 0;
        for (int v = 0; v < 64; ++v)
            if (a.forward[v] == b.forward[v]) ++same;
        // a random pair of 64-element permutations agrees in ~1 slot
        CHECK(same <= 10);
    }
}

TEST_CASE("sequence text form round-trips", "[codon]") {
    RnaSequence rna;
    rna.bases = {0, 1, 2, 3, 3, 2, 1, 0};
    rna.origin_bit_length = 16;
    std::string s = rna.to_string();
    CHECK(s == "AUCGGCUA");
    RnaSequence back = RnaSequence::from_string(s, 16);
    CHECK(back.bases == rna.bases);
    CHECK_THROWS_AS(RnaSequence::from_string("AUXG", 8), MalformedSequence);
}
