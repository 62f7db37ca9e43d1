#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ncrna/codon.hpp"
#include "ncrna/errors.hpp"

namespace ncrna {

// Pairing thermodynamics for the fold. Scores are per closed pair, in whole
// energy units (negative = stabilizing); a zero score means the bases cannot
// pair. min_hairpin is the smallest number of unpaired bases a loop may close.
struct EnergyModel {
    int pair_score[4][4] = {};
    int min_hairpin = 3;

    static EnergyModel standard() {
        EnergyModel m;
        auto set = [&m](Nucleotide a, Nucleotide b, int score) {
            m.pair_score[static_cast<int>(a)][static_cast<int>(b)] = score;
            m.pair_score[static_cast<int>(b)][static_cast<int>(a)] = score;
        };
        set(Nucleotide::G, Nucleotide::C, -3);
        set(Nucleotide::A, Nucleotide::U, -2);
        return m;
    }

    int score(std::uint8_t a, std::uint8_t b) const { return pair_score[a][b]; }
};

// Non-crossing secondary structure. pairs holds (open, close) index pairs
// ordered by opening position; dot_bracket is the same structure as text.
struct SecondaryStructure {
    std::string dot_bracket;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    int mfe = 0;
};

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_from_dot_bracket(
    const std::string& db) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t i = 0; i < db.size(); ++i) {
        if (db[i] == '(') {
            stack.push_back(i);
        } else if (db[i] == ')') {
            if (stack.empty()) throw MalformedSequence("unbalanced dot-bracket");
            pairs.emplace_back(stack.back(), i);
            stack.pop_back();
        } else if (db[i] != '.') {
            throw MalformedSequence("invalid dot-bracket character");
        }
    }
    if (!stack.empty()) throw MalformedSequence("unbalanced dot-bracket");
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

namespace detail {

// Tie-break order over dot-bracket strings: '(' < '.' < ')' charwise. This is
// not ASCII order (')' < '.'), so all optimum comparisons must go through here.
inline int db_rank(char c) { return c == '(' ? 0 : (c == '.' ? 1 : 2); }

inline bool db_less(const std::string& a, const std::string& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int ra = db_rank(a[i]), rb = db_rank(b[i]);
        if (ra != rb) return ra < rb;
    }
    return a.size() < b.size();
}

}  // namespace detail

// Cost accounting for fold work, used to check that key derivation really pays
// for a fold per guess. Counters are process-wide and monotonically increasing.
struct FoldStats {
    static std::atomic<std::uint64_t>& fold_calls() {
        static std::atomic<std::uint64_t> v{0};
        return v;
    }
    static std::atomic<std::uint64_t>& dp_cells() {
        static std::atomic<std::uint64_t> v{0};
        return v;
    }
};

// Interval DP folder with reusable buffers. A fold is O(N^3) time, O(N^2) space.
//
// Optimum selection is deterministic: minimize energy, then pair count, then the
// dot-bracket string in lexicographic order with '(' < '.' < ')'. The same order
// is applied by the exhaustive oracle below, so the two routes are comparable
// structure-for-structure.
class Folder {
public:
    SecondaryStructure fold(const std::uint8_t* bases, std::size_t n, const EnergyModel& model) {
        if (n == 0) throw MalformedSequence("cannot fold an empty sequence");
        s_ = bases;
        n_ = n;
        model_ = &model;
        fill_tables();
        FoldStats::fold_calls().fetch_add(1, std::memory_order_relaxed);
        FoldStats::dp_cells().fetch_add(static_cast<std::uint64_t>(n) * (n + 1) / 2,
                                        std::memory_order_relaxed);
        memo_.clear();
        SecondaryStructure st;
        st.dot_bracket = rebuild(0, static_cast<int>(n) - 1);
        st.pairs = pairs_from_dot_bracket(st.dot_bracket);
        st.mfe = energy_at(0, static_cast<int>(n) - 1);
        return st;
    }

private:
    int energy_at(int i, int j) const { return j < i ? 0 : e_[static_cast<std::size_t>(i) * n_ + j]; }
    int pairs_at(int i, int j) const { return j < i ? 0 : p_[static_cast<std::size_t>(i) * n_ + j]; }

    void fill_tables() {
        e_.assign(n_ * n_, 0);
        p_.assign(n_ * n_, 0);
        const int n = static_cast<int>(n_);
        const int gap = model_->min_hairpin + 1;
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + gap; j < n; ++j) {
                int best_e = energy_at(i + 1, j);
                int best_p = pairs_at(i + 1, j);
                for (int k = i + gap; k <= j; ++k) {
                    int sc = model_->score(s_[i], s_[k]);
                    if (sc == 0) continue;
                    int cand_e = sc + energy_at(i + 1, k - 1) + energy_at(k + 1, j);
                    if (cand_e > best_e) continue;
                    int cand_p = 1 + pairs_at(i + 1, k - 1) + pairs_at(k + 1, j);
                    if (cand_e < best_e || cand_p < best_p) {
                        best_e = cand_e;
                        best_p = cand_p;
                    }
                }
                e_[static_cast<std::size_t>(i) * n_ + j] = best_e;
                p_[static_cast<std::size_t>(i) * n_ + j] = best_p;
            }
        }
    }

    // Lexicographically smallest dot-bracket among structures achieving the
    // cell's (energy, pairs) optimum. A pairing at i always beats leaving i
    // unpaired because '(' sorts lowest; ties between pairings compare the
    // completed candidate strings.
    std::string rebuild(int i, int j) {
        if (j < i) return {};
        std::uint64_t key = static_cast<std::uint64_t>(i) * n_ + static_cast<std::uint64_t>(j);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        const int gap = model_->min_hairpin + 1;
        int cell_e = energy_at(i, j);
        int cell_p = pairs_at(i, j);
        std::string best;
        bool have_pairing = false;
        for (int k = i + gap; k <= j; ++k) {
            int sc = model_->score(s_[i], s_[k]);
            if (sc == 0) continue;
            if (sc + energy_at(i + 1, k - 1) + energy_at(k + 1, j) != cell_e) continue;
            if (1 + pairs_at(i + 1, k - 1) + pairs_at(k + 1, j) != cell_p) continue;
            std::string cand;
            cand.reserve(static_cast<std::size_t>(j - i + 1));
            cand.push_back('(');
            cand += rebuild(i + 1, k - 1);
            cand.push_back(')');
            cand += rebuild(k + 1, j);
            if (!have_pairing || detail::db_less(cand, best)) {
                best = std::move(cand);
                have_pairing = true;
            }
        }
        if (!have_pairing) {
            best.reserve(static_cast<std::size_t>(j - i + 1));
            best.push_back('.');
            best += rebuild(i + 1, j);
        }
        memo_.emplace(key, best);
        return best;
    }

    const std::uint8_t* s_ = nullptr;
    std::size_t n_ = 0;
    const EnergyModel* model_ = nullptr;
    std::vector<int> e_, p_;
    std::unordered_map<std::uint64_t, std::string> memo_;
};

inline SecondaryStructure fold(const std::uint8_t* bases, std::size_t n,
                               const EnergyModel& model) {
    thread_local Folder folder;
    return folder.fold(bases, n, model);
}

inline SecondaryStructure fold(const RnaSequence& seq, const EnergyModel& model) {
    return fold(seq.bases.data(), seq.bases.size(), model);
}

inline SecondaryStructure fold(const std::string& letters, const EnergyModel& model) {
    RnaSequence seq = RnaSequence::from_string(letters, 0);
    return fold(seq.bases.data(), seq.bases.size(), model);
}

namespace detail {

struct OracleBest {
    bool set = false;
    int energy = 0;
    int pairs = 0;
    std::string dot_bracket;

    void offer(int e, int p, const std::string& db) {
        if (!set || e < energy || (e == energy && p < pairs) ||
            (e == energy && p == pairs && db_less(db, dot_bracket))) {
            set = true;
            energy = e;
            pairs = p;
            dot_bracket = db;
        }
    }
};

// Visits every non-crossing structure exactly once by expanding a work list of
// open intervals; buf accumulates the full dot-bracket.
inline void oracle_enumerate(const std::uint8_t* s, const EnergyModel& m,
                             std::vector<std::pair<int, int>>& todo, std::string& buf,
                             OracleBest& best) {
    if (todo.empty()) {
        int e = 0, p = 0;
        std::vector<int> stack;
        for (std::size_t i = 0; i < buf.size(); ++i) {
            if (buf[i] == '(') {
                stack.push_back(static_cast<int>(i));
            } else if (buf[i] == ')') {
                e += m.score(s[stack.back()], s[i]);
                ++p;
                stack.pop_back();
            }
        }
        best.offer(e, p, buf);
        return;
    }
    auto [i, j] = todo.back();
    todo.pop_back();
    if (i > j) {
        oracle_enumerate(s, m, todo, buf, best);
    } else {
        buf[static_cast<std::size_t>(i)] = '.';
        todo.emplace_back(i + 1, j);
        oracle_enumerate(s, m, todo, buf, best);
        todo.pop_back();

        const int gap = m.min_hairpin + 1;
        for (int k = i + gap; k <= j; ++k) {
            if (m.score(s[i], s[k]) == 0) continue;
            buf[static_cast<std::size_t>(i)] = '(';
            buf[static_cast<std::size_t>(k)] = ')';
            todo.emplace_back(k + 1, j);
            todo.emplace_back(i + 1, k - 1);
            oracle_enumerate(s, m, todo, buf, best);
            todo.pop_back();
            todo.pop_back();
        }
    }
    todo.emplace_back(i, j);
}

}  // namespace detail

// Brute-force reference: enumerates every admissible structure and picks the
// optimum under the same deterministic order as fold(). Exponential; refuses
// sequences longer than 20 bases.
inline SecondaryStructure enumerate_min(const std::uint8_t* bases, std::size_t n,
                                        const EnergyModel& model) {
    if (n == 0) throw MalformedSequence("cannot fold an empty sequence");
    if (n > 20) throw OracleTooLarge("exhaustive enumeration is capped at 20 bases");
    detail::OracleBest best;
    std::vector<std::pair<int, int>> todo;
    std::string buf(n, '.');
    todo.emplace_back(0, static_cast<int>(n) - 1);
    detail::oracle_enumerate(bases, model, todo, buf, best);
    SecondaryStructure st;
    st.dot_bracket = best.dot_bracket;
    st.pairs = pairs_from_dot_bracket(st.dot_bracket);
    st.mfe = best.energy;
    return st;
}

inline SecondaryStructure enumerate_min(const RnaSequence& seq, const EnergyModel& model) {
    return enumerate_min(seq.bases.data(), seq.bases.size(), model);
}

inline SecondaryStructure enumerate_min(const std::string& letters, const EnergyModel& model) {
    RnaSequence seq = RnaSequence::from_string(letters, 0);
    return enumerate_min(seq.bases.data(), seq.bases.size(), model);
}

}  // namespace ncrna
