#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ncrna/chacha20.hpp"
#include "ncrna/sha256.hpp"
#include "ncrna/sts.hpp"

using namespace ncrna;
using sts::BitStream;
using sts::TestResult;
using sts::Verdict;

// Reference p-values were produced by an independent Python implementation
// (scipy for igamc/erfc, numpy FFT) and cross-checked against the worked
// examples in NIST SP 800-22 rev 1a; agreement with every published figure
// is 1e-4 or better except where a comment says the publication's own
// arithmetic carries a larger rounding.

namespace {

// Owns the packed bytes a BitStream views.
struct PackedBits {
    Bytes bytes;
    std::size_t n = 0;

    explicit PackedBits(const std::string& bits) : bytes((bits.size() + 7) / 8, 0), n(bits.size()) {
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE((bits[i] == '0' || bits[i] == '1'));
            if (bits[i] == '1') bytes[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
        }
    }

    BitStream view() const { return BitStream(bytes.data(), n); }
};

// 10^6 bits of the binary expansion of pi or e (integer part included),
// packed MSB-first. 125000 bytes each.
Bytes load_million(const char* name) {
    std::ifstream in(std::string(NCRNA_TEST_DATA_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(data.size() == 125000);
    return data;
}

const Bytes& pi_bits() {
    static const Bytes data = load_million("pi_1m.bin");
    return data;
}

const Bytes& e_bits() {
    static const Bytes data = load_million("e_1m.bin");
    return data;
}

auto near(double x, double tol = 1e-6) { return Catch::Matchers::WithinAbs(x, tol); }

const TestResult& by_name(const std::vector<TestResult>& rs, const std::string& name) {
    for (const TestResult& r : rs) {
        if (r.name == name) return r;
    }
    FAIL("no result named " << name);
    return rs.front();
}

}  // namespace

TEST_CASE("bit streams view packed bytes most significant bit first", "[sts]") {
    Bytes one{0xC9};
    BitStream s(one.data(), 8);
    int expect[8] = {1, 1, 0, 0, 1, 0, 0, 1};
    for (int i = 0; i < 8; ++i) CHECK(s.bit(i) == expect[i]);

    CHECK(BitStream(one, 5).size() == 5);
    CHECK_THROWS_AS(BitStream(one, 9), InsufficientData);

    // the data file starts with the binary expansion of pi, integer part first
    const char* lead =
        "1100100100001111110110101010001000100001011010001100001000110100"
        "110001001100011001100010100010111000";
    BitStream pi(pi_bits().data(), 100);
    for (int i = 0; i < 100; ++i) CHECK(pi.bit(i) == lead[i] - '0');
}

TEST_CASE("regularized incomplete gamma matches an independent implementation", "[sts]") {
    // scipy.special.gammaincc anchors, one per internal branch; the large-a
    // pair sits where the serial test lands at m = 16
    CHECK_THAT(sts::detail::igamc(2.5, 1.7), near(0.6385699231037951, 1e-12));
    CHECK_THAT(sts::detail::igamc(0.5, 3.2), near(0.01141203638600166, 1e-12));
    CHECK_THAT(sts::detail::igamc(16384.0, 16250.0), near(0.8524817495258924, 1e-9));
    CHECK(sts::detail::igamc(3.0, 0.0) == 1.0);
}

TEST_CASE("frequency tests reproduce the published worked examples", "[sts]") {
    BitStream pi100(pi_bits().data(), 100);

    // the 10-bit illustration sits below the 100-bit floor, so its published
    // 0.527089 is pinned by the formula directly; the 100-bit example runs
    // through the API
    CHECK_THAT(std::erfc((2.0 / std::sqrt(10.0)) / std::sqrt(2.0)), near(0.5270892568655381));
    CHECK_THAT(sts::monobit(pi100).p_values[0], near(0.109598583399116));

    Bytes alternating(13, 0x55);
    CHECK(sts::monobit(BitStream(alternating, 100)).p_values[0] == 1.0);
    Bytes ones(13, 0xFF);
    TestResult skew = sts::monobit(BitStream(ones, 100));
    CHECK(skew.p_values[0] < 1e-20);
    CHECK(skew.verdict == Verdict::Fail);
    CHECK_THROWS_AS(sts::monobit(BitStream(ones, 99)), InsufficientData);

    PackedBits blk("0110011010");
    CHECK_THAT(sts::block_frequency(blk.view(), 3).p_values[0], near(0.8012519569012009));
    CHECK_THAT(sts::block_frequency(pi100, 10).p_values[0], near(0.7064384496412808));
}

TEST_CASE("runs and longest run reproduce the published worked examples", "[sts]") {
    BitStream pi100(pi_bits().data(), 100);

    PackedBits small("1001101011");
    CHECK_THAT(sts::runs(small.view()).p_values[0], near(0.14723225536366571));
    CHECK_THAT(sts::runs(pi100).p_values[0], near(0.5007979178870903));

    // frequency prerequisite: a stream at 90% ones scores zero outright
    std::string biased(90, '1');
    biased += std::string(10, '0');
    PackedBits heavy(biased);
    TestResult gated = sts::runs(heavy.view());
    CHECK(gated.p_values[0] == 0.0);
    CHECK(gated.verdict == Verdict::Fail);

    PackedBits lr(
        "1100110000010101011011000100110011100000000000100100110101010001"
        "000100111101011010000000110101111100"
        "1100111001101101100010110010");
    REQUIRE(lr.n == 128);
    // publication prints 0.180609; its chi-squared is quoted at 4 digits,
    // full precision lands 1.1e-5 away
    CHECK_THAT(sts::longest_run(lr.view()).p_values[0], near(0.18059797678555792));
    CHECK(sts::longest_run(BitStream(pi_bits(), 100)).verdict == Verdict::NotApplicable);
}

TEST_CASE("matrix rank scores with exact rank probabilities", "[sts]") {
    // first 10^5 bits of e, the publication's full-size example
    CHECK_THAT(sts::binary_matrix_rank(BitStream(e_bits(), 100000)).p_values[0],
               near(0.5320686208924519));

    // the 20-bit illustration splits into two 3x3 matrices of ranks 3 and 2.
    // With the exact 3x3 rank distribution (0.328125 / 0.57421875 / 0.09765625)
    // the p-value is 0.820962. The publication instead reuses its 32x32
    // asymptotic constants for the tiny example; replaying chi-squared under
    // those constants reproduces its printed 0.741948 exactly.
    PackedBits mini("01011001001010101101");
    CHECK_THAT(sts::binary_matrix_rank(mini.view(), 3, 3, 1).p_values[0],
               near(0.8209616256861869));
    double chi_doc = (1 - 2 * 0.2888) * (1 - 2 * 0.2888) / (2 * 0.2888) +
                     (1 - 2 * 0.5776) * (1 - 2 * 0.5776) / (2 * 0.5776) +
                     (0 - 2 * 0.1336) * (0 - 2 * 0.1336) / (2 * 0.1336);
    CHECK_THAT(sts::detail::igamc(1.0, chi_doc / 2.0), near(0.7419477513283346));

    CHECK(sts::binary_matrix_rank(BitStream(pi_bits(), 1000)).verdict == Verdict::NotApplicable);
}

TEST_CASE("spectral test counts harmonics below the threshold", "[sts]") {
    // published example: T = 5.4733, 4 of the harmonics 1..4 stay below it
    PackedBits small("1001010011");
    CHECK_THAT(sts::dft(small.view()).p_values[0], near(0.02952321594993795));

    Bytes tiny{0x90};
    CHECK(sts::dft(BitStream(tiny, 4)).verdict == Verdict::NotApplicable);
}

TEST_CASE("fft agrees with the direct transform off the power-of-two path", "[sts]") {
    auto direct = [](const std::vector<sts::detail::cplx>& x) {
        std::size_t n = x.size();
        std::vector<sts::detail::cplx> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            sts::detail::cplx acc(0.0, 0.0);
            for (std::size_t t = 0; t < n; ++t) {
                double ang = -2.0 * sts::detail::kPi * static_cast<double>(k) *
                             static_cast<double>(t) / static_cast<double>(n);
                acc += x[t] * sts::detail::cplx(std::cos(ang), std::sin(ang));
            }
            out[k] = acc;
        }
        return out;
    };

    std::mt19937_64 rng(0xd3f7);
    // 64 exercises radix-2, 1100 the Bluestein chirp route
    for (std::size_t n : {std::size_t{64}, std::size_t{1100}}) {
        std::vector<sts::detail::cplx> x(n);
        for (auto& v : x) v = sts::detail::cplx((rng() & 1) ? 1.0 : -1.0, 0.0);
        std::vector<sts::detail::cplx> fast = sts::detail::dft_any(x);
        std::vector<sts::detail::cplx> slow = direct(x);
        REQUIRE(fast.size() == n);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("template tests reproduce the published worked examples", "[sts]") {
    PackedBits small("10100100101110010110");
    CHECK_THAT(sts::non_overlapping_template(small.view(), "001", 2).p_values[0],
               near(0.3441537868654125));
    CHECK_THROWS_AS(sts::non_overlapping_template(small.view(), "0", 2), InsufficientData);
    CHECK_THROWS_AS(sts::non_overlapping_template(small.view(), "0x1", 2), InsufficientData);

    PackedBits fifty("10111011110010110100011100101110111110000101101001");
    CHECK_THAT(sts::overlapping_template(fifty.view(), 2, 10).p_values[0],
               near(0.40963462458096445));

    // full-size example on e; the publication uses the asymptotic Pr(u, eta)
    // bins, reproduced by turning the exact defaults off
    BitStream e1m(e_bits());
    CHECK_THAT(sts::overlapping_template(e1m, 9, 1032, false).p_values[0],
               near(0.11043368541387684));
    CHECK_THAT(sts::overlapping_template(e1m).p_values[0], near(0.15902702828625045));
}

TEST_CASE("overlapping template default bins match the exact distribution", "[sts]") {
    // occurrence-count distribution of the all-ones 9-template in a 1032-bit
    // block, by dynamic programming over (trailing ones, occurrences so far)
    constexpr int m = 9, M = 1032, K = 5;
    std::vector<double> dp((m + 1) * (K + 1), 0.0);
    std::vector<double> nx(dp.size());
    auto at = [](std::vector<double>& v, int st, int c) -> double& { return v[st * (K + 1) + c]; };
    at(dp, 0, 0) = 1.0;
    for (int step = 0; step < M; ++step) {
        std::fill(nx.begin(), nx.end(), 0.0);
        for (int st = 0; st <= m; ++st) {
            for (int c = 0; c <= K; ++c) {
                double p = at(dp, st, c);
                if (p == 0.0) continue;
                at(nx, 0, c) += 0.5 * p;
                int s2 = std::min(st + 1, m);
                int c2 = (s2 == m) ? std::min(c + 1, K) : c;
                at(nx, s2, c2) += 0.5 * p;
            }
        }
        dp.swap(nx);
    }
    double bins[K + 1] = {};
    for (int st = 0; st <= m; ++st)
        for (int c = 0; c <= K; ++c) bins[c] += at(dp, st, c);

    const double shipped[K + 1] = {0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865};
    for (int c = 0; c <= K; ++c) CHECK_THAT(shipped[c], near(bins[c]));
}

TEST_CASE("universal statistic and Maurer's test", "[sts]") {
    PackedBits small("01011010011101010111");
    sts::UniversalStat st = sts::universal_statistic(small.view(), 2, 4);
    CHECK(st.K == 6);
    CHECK_THAT(st.fn, near(1.1949875002403854, 1e-9));

    // the publication's illustration stops at sigma = sqrt(variance); its
    // printed 0.767189 follows from fn directly
    double simple = std::erfc(std::fabs(st.fn - 1.5374383) / (std::sqrt(2.0) * std::sqrt(1.338)));
    CHECK_THAT(simple, near(0.7671892618646717));

    // the full statistic applies the c(L, K) correction before erfc
    CHECK_THAT(sts::maurer_universal(small.view(), 2, 4).p_values[0], near(0.0634535024151588));

    TestResult full = sts::maurer_universal(BitStream(e_bits()));
    CHECK(full.note == "L=7 Q=1280");
    CHECK_THAT(full.p_values[0], near(0.282567947825744));

    CHECK(sts::maurer_universal(BitStream(pi_bits(), 100000)).verdict == Verdict::NotApplicable);
    CHECK_THROWS_AS(sts::universal_statistic(small.view(), 1, 2), InsufficientData);
    CHECK_THROWS_AS(sts::universal_statistic(small.view(), 17, 2), InsufficientData);
}

TEST_CASE("berlekamp massey finds the shortest recurrence", "[sts]") {
    auto lc_of = [](const std::string& bits) {
        std::vector<std::uint8_t> s(bits.size()), c, b, t;
        for (std::size_t i = 0; i < bits.size(); ++i) s[i] = static_cast<std::uint8_t>(bits[i] - '0');
        return sts::detail::berlekamp_massey(s.data(), static_cast<int>(s.size()), c, b, t);
    };
    CHECK(lc_of("1101011110001") == 4);
    CHECK(lc_of("10101010101010101010") == 2);
    CHECK(lc_of("0000000001") == 10);
    CHECK(lc_of("0000000000") == 0);
}

TEST_CASE("linear complexity reproduces the published block counts on e", "[sts]") {
    BitStream e1m(e_bits());
    // M = 1000 is the publication's configuration; its printed block counts
    // (11, 31, 116, 501, 258, 57, 26) land exactly on this p-value
    CHECK_THAT(sts::linear_complexity(e1m, 1000).p_values[0], near(0.8447206463007337));
    CHECK_THAT(sts::linear_complexity(e1m, 500).p_values[0], near(0.8261940040813963));
    CHECK_THAT(sts::linear_complexity(BitStream(pi_bits()), 500).p_values[0],
               near(0.2468565661750253));
}

TEST_CASE("serial and approximate entropy reproduce the published examples", "[sts]") {
    PackedBits ser("0011011101");
    TestResult r = sts::serial(ser.view(), 3);
    REQUIRE(r.p_values.size() == 2);
    CHECK_THAT(r.p_values[0], near(0.8087921354109989));
    CHECK_THAT(r.p_values[1], near(0.6703200460356398));

    TestResult re = sts::serial(BitStream(e_bits()), 2);
    CHECK_THAT(re.p_values[0], near(0.8437643749537471));
    CHECK_THAT(re.p_values[1], near(0.5619146178478054));

    CHECK_THROWS_AS(sts::serial(ser.view(), 1), InsufficientData);

    PackedBits ap("0100110101");
    CHECK_THAT(sts::approximate_entropy(ap.view(), 3).p_values[0], near(0.2619611048816654));
    CHECK_THAT(sts::approximate_entropy(BitStream(pi_bits(), 100), 2).p_values[0],
               near(0.23530074585897948));
}

TEST_CASE("cumulative sums reproduce the published examples", "[sts]") {
    PackedBits small("1011010111");
    TestResult r = sts::cumulative_sums(small.view());
    REQUIRE(r.p_values.size() == 2);
    // the publication prints 0.4116588 from 4-digit normal-cdf terms; exact
    // evaluation of the same sum gives 0.4115847
    CHECK_THAT(r.p_values[0], near(0.4115847182525979));
    CHECK_THAT(r.p_values[1], near(0.4115847182525979));

    TestResult pr = sts::cumulative_sums(BitStream(pi_bits(), 100));
    CHECK_THAT(pr.p_values[0], near(0.21919399348562668));
    CHECK_THAT(pr.p_values[1], near(0.11486621530252171));
}

TEST_CASE("random excursions reproduce the published examples", "[sts]") {
    // the 10-bit illustration has J = 3 cycles, far below the production
    // floor; min_cycles = 1 lets the arithmetic run
    PackedBits mini("0110110101");
    TestResult re = sts::random_excursions(mini.view(), 1);
    REQUIRE(re.p_values.size() == 8);
    CHECK(re.note == "J=3");
    // states ordered -4..-1, +1..+4
    CHECK_THAT(re.p_values[4], near(0.502487515435573));
    CHECK_THAT(re.p_values[3], near(0.9625657732472964));

    TestResult rv = sts::random_excursions_variant(mini.view(), 1);
    REQUIRE(rv.p_values.size() == 18);
    CHECK(rv.note == "J=3");
    // states ordered -9..-1, +1..+9; x = +2 is visited exactly J times, so
    // its p-value is exactly 1
    CHECK_THAT(rv.p_values[9], near(0.6830913983096087));
    CHECK(rv.p_values[10] == 1.0);

    CHECK(sts::random_excursions(mini.view()).verdict == Verdict::NotApplicable);
    CHECK(sts::random_excursions_variant(mini.view()).verdict == Verdict::NotApplicable);
}

TEST_CASE("battery over the first million binary digits of pi", "[sts][battery]") {
    std::vector<TestResult> rs = sts::run_all(BitStream(pi_bits()));
    REQUIRE(rs.size() == 15);

    const char* order[15] = {"monobit",
                             "block_frequency",
                             "runs",
                             "longest_run",
                             "binary_matrix_rank",
                             "dft",
                             "non_overlapping_template",
                             "overlapping_template",
                             "maurer_universal",
                             "linear_complexity",
                             "serial",
                             "approximate_entropy",
                             "cumulative_sums",
                             "random_excursions",
                             "random_excursions_variant"};
    for (int i = 0; i < 15; ++i) CHECK(rs[i].name == order[i]);

    for (const TestResult& r : rs) {
        INFO(r.name);
        CHECK(r.verdict == Verdict::Pass);
        for (double p : r.p_values) {
            CHECK(std::isfinite(p));
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
    CHECK(sts::all_pass(rs));

    CHECK_THAT(by_name(rs, "monobit").p_values[0], near(0.5782108547724232));
    CHECK(by_name(rs, "block_frequency").note == "M=10102");
    CHECK_THAT(by_name(rs, "block_frequency").p_values[0], near(0.5425082946044567));
    CHECK_THAT(by_name(rs, "runs").p_values[0], near(0.41926842044315493));
    CHECK_THAT(by_name(rs, "longest_run").p_values[0], near(0.024389698533896585));
    CHECK_THAT(by_name(rs, "binary_matrix_rank").p_values[0], near(0.08355314410059077));
    CHECK_THAT(by_name(rs, "dft").p_values[0], near(0.010458798304060806));
    CHECK_THAT(by_name(rs, "non_overlapping_template").p_values[0], near(0.1657574574552243));
    CHECK_THAT(by_name(rs, "overlapping_template").p_values[0], near(0.26070006641653487));
    CHECK(by_name(rs, "maurer_universal").note == "L=7 Q=1280");
    CHECK_THAT(by_name(rs, "maurer_universal").p_values[0], near(0.669012438062546));
    CHECK_THAT(by_name(rs, "linear_complexity").p_values[0], near(0.2468565661750253));
    CHECK_THAT(by_name(rs, "serial").p_values[0], near(0.143005239581641));
    CHECK_THAT(by_name(rs, "serial").p_values[1], near(0.034353591982495095));
    CHECK_THAT(by_name(rs, "approximate_entropy").p_values[0], near(0.3615949304642397));
    CHECK_THAT(by_name(rs, "cumulative_sums").p_values[0], near(0.6283080853765903));
    CHECK_THAT(by_name(rs, "cumulative_sums").p_values[1], near(0.6633686090204554));
    CHECK(by_name(rs, "random_excursions").note == "J=778");
    CHECK_THAT(by_name(rs, "random_excursions").min_p(), near(0.26842759098071967));
    CHECK_THAT(by_name(rs, "random_excursions_variant").min_p(), near(0.5098147553515731));
}

TEST_CASE("battery flags the excursion anomaly in e", "[sts][battery]") {
    // e's random walk revisits state -1 rarely enough to fail at alpha 0.01
    // while the other fourteen tests pass; a useful single-fail fixture
    std::vector<TestResult> rs = sts::run_all(BitStream(e_bits()));
    REQUIRE(rs.size() == 15);
    CHECK_FALSE(sts::all_pass(rs));

    int fails = 0;
    for (const TestResult& r : rs) {
        if (r.verdict == Verdict::Fail) {
            ++fails;
            CHECK(r.name == "random_excursions");
        } else {
            INFO(r.name);
            CHECK(r.verdict == Verdict::Pass);
        }
    }
    CHECK(fails == 1);

    const TestResult& re = by_name(rs, "random_excursions");
    CHECK(re.note == "J=1490");
    CHECK_THAT(re.min_p(), near(0.007778723096466819));
}

TEST_CASE("battery marks tests below their minimum stream length", "[sts][battery]") {
    // 2^17 bits: long enough for most tests, short of the 10^6-bit floors
    // and of Maurer's 387840 and serial's 2^19
    std::vector<TestResult> rs = sts::run_all(BitStream(pi_bits(), std::size_t{1} << 17));
    REQUIRE(rs.size() == 15);
    for (const char* name :
         {"overlapping_template", "maurer_universal", "linear_complexity", "serial"}) {
        CHECK(by_name(rs, name).verdict == Verdict::NotApplicable);
    }
    for (const char* name : {"monobit", "block_frequency", "runs", "longest_run",
                             "binary_matrix_rank", "dft", "non_overlapping_template",
                             "approximate_entropy", "cumulative_sums"}) {
        CHECK(by_name(rs, name).verdict != Verdict::NotApplicable);
    }
    // NotApplicable entries never drag the battery verdict down
    CHECK(sts::all_pass(rs) == (std::none_of(rs.begin(), rs.end(), [](const TestResult& r) {
              return r.verdict == Verdict::Fail;
          })));

    Bytes few(13, 0xAB);
    CHECK_THROWS_AS(sts::run_all(BitStream(few, 99)), InsufficientData);
}

TEST_CASE("byte entropy anchors", "[sts]") {
    CHECK(sts::shannon_entropy(Bytes(4096, 0x41)) == 0.0);

    Bytes ramp(1024);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<std::uint8_t>(i & 0xFF);
    CHECK(sts::shannon_entropy(ramp) == 8.0);

    Bytes half(512, 0x00);
    std::fill(half.begin() + 256, half.end(), std::uint8_t{0xFF});
    CHECK_THAT(sts::shannon_entropy(half), near(1.0, 1e-12));

    CHECK_THROWS_AS(sts::shannon_entropy(Bytes{}), InsufficientData);
}

TEST_CASE("keystream corpus passes each statistic at the expected rate", "[sts][sweep]") {
    // 100 deterministic ChaCha20 keystreams, 2^20 bits each. Every statistic
    // is tracked as its own binomial at alpha = 0.01: over n applicable
    // samples the allowance is mean + 3.1 sigma, which at n = 100 is the
    // familiar 96-of-100 bar. The excursion tests are the reason n can drop
    // below 100: the cycle count of a random walk is half-normal, so J >= 500
    // holds in only about 63% of million-bit streams and the publication
    // marks the rest not applicable.
    constexpr int kSamples = 100;
    constexpr std::size_t kBytes = std::size_t{1} << 17;

    // one p-value slot of one test; multi-statistic tests are tracked per
    // slot so a weak slot cannot hide behind its siblings
    std::map<std::string, std::pair<int, int>> tally;  // name/slot -> {applicable, failed}

    for (int i = 0; i < kSamples; ++i) {
        std::string label = "keystream corpus " + std::to_string(i);
        Bytes key = Sha256::digest(Bytes(label.begin(), label.end()));
        Bytes nonce(12, 0);
        ChaCha20 prng(key, nonce);
        Bytes buf = prng.keystream(kBytes);

        std::vector<TestResult> rs = sts::run_all(BitStream(buf));
        REQUIRE(rs.size() == 15);
        for (const TestResult& r : rs) {
            if (r.verdict == Verdict::NotApplicable) {
                // only the excursion pair may sit out, and only for want of
                // cycles
                CHECK((r.name == "random_excursions" || r.name == "random_excursions_variant"));
                continue;
            }
            for (std::size_t k = 0; k < r.p_values.size(); ++k) {
                auto& cell = tally[r.name + "/" + std::to_string(k)];
                ++cell.first;
                if (r.p_values[k] < sts::kAlpha) ++cell.second;
            }
        }
    }

    // 1 + 1 + 1 + 1 + 1 + 1 + 1 + 1 + 1 + 1 + 2 + 1 + 2 + 8 + 18 slots
    CHECK(tally.size() == 41);
    for (const auto& [slot, counts] : tally) {
        double n = static_cast<double>(counts.first);
        int allowed = static_cast<int>(0.01 * n + 3.1 * std::sqrt(0.01 * 0.99 * n));
        INFO(slot << ": " << counts.second << " failed of " << counts.first << ", allowance "
                  << allowed);
        CHECK(counts.first >= 40);
        CHECK(counts.second <= allowed);
    }
    // the thirteen always-applicable tests saw every sample
    CHECK(tally.at("monobit/0").first == kSamples);
    CHECK(tally.at("serial/1").first == kSamples);
    CHECK(tally.at("cumulative_sums/1").first == kSamples);
}
