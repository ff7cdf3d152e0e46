#pragma once

// Enumeration of the playable-sequence families S_m on the starting list
// (1, 2): exactly m wins and 2m losses, every proper prefix keeping the list
// non-empty. Includes the extremal LLW-block sequence, exhaustive
// verification that it maximizes the first-element values, and an exhaustive
// search for the maximal bet over all completed games of a given length.

#include "labouchere/engine.hpp"
#include "labouchere/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace labouchere {

struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NoGamesOfThisLength : std::runtime_error {
    explicit NoGamesOfThisLength(std::size_t n)
        : std::runtime_error("no completed games of stopping time " + std::to_string(n) +
                             " exist from the list (1, 2)") {}
};

// |S_8| is about 1.2e5; the raw {W,L}^24 space is 3^24, hence the caps.
inline constexpr std::size_t kDefaultFamilyCap = 8;    // max m for enumeration
inline constexpr std::size_t kDefaultExtremalCap = 25; // max n for the bet search

// m concatenated LLW blocks.
inline PlaySequence star_sequence(std::size_t m) {
    PlaySequence seq;
    seq.reserve(3 * m);
    for (std::size_t i = 0; i < m; ++i) {
        seq.push_back(Outcome::Loss);
        seq.push_back(Outcome::Loss);
        seq.push_back(Outcome::Win);
    }
    return seq;
}

// First-element values of the star sequence, by actually playing it out on
// (1, 2). Each LLW block maps (x, y) to (y, x + y), so the result must equal
// F_2, ..., F_{m+2}; tests pin that down.
inline std::vector<BigInt> star_first_elements(std::size_t m) {
    BettingList<BigInt> start(std::vector<BigInt>{1, 2});
    return first_element_trajectory(start, star_sequence(m));
}

// |S_m| = C(3m+1, m) / (m+1), the path-count coefficient from the start-2
// stopping-time pmf.
inline BigInt family_count_formula(std::size_t m) {
    return binomial(3 * m + 1, m) / BigInt(m + 1);
}

// Streams every member of S_m exactly once, in lexicographic order with
// L < W. Depth-first with an incremental playability prune on the running
// list length; never materializes the 3^(3m) raw space.
template <typename Visitor>
void for_each_family_member(std::size_t m, Visitor&& visit,
                            std::size_t cap = kDefaultFamilyCap) {
    if (m > cap) {
        throw CapExceeded("family enumeration capped at m <= " + std::to_string(cap));
    }
    const std::size_t length = 3 * m;
    PlaySequence seq(length, Outcome::Loss);

    // height = 2 + losses - 2 * wins for the current prefix; every proper
    // prefix must keep it positive (the complete sequence always ends at 2).
    std::function<void(std::size_t, std::size_t, std::size_t, long long)> descend =
        [&](std::size_t pos, std::size_t wins, std::size_t losses, long long height) {
            if (pos == length) {
                visit(std::as_const(seq));
                return;
            }
            if (losses < 2 * m && height + 1 > 0) {
                seq[pos] = Outcome::Loss;
                descend(pos + 1, wins, losses + 1, height + 1);
            }
            if (wins < m && height - 2 > 0) {
                seq[pos] = Outcome::Win;
                descend(pos + 1, wins + 1, losses, height - 2);
            }
        };
    descend(0, 0, 0, 2);
}

inline std::vector<PlaySequence> enumerate_family(std::size_t m,
                                                  std::size_t cap = kDefaultFamilyCap) {
    std::vector<PlaySequence> members;
    for_each_family_member(m, [&](const PlaySequence& s) { members.push_back(s); }, cap);
    return members;
}

struct MaximalityReport {
    bool ok = true;
    std::uint64_t sequences_checked = 0;
    // first violating (sequence, t) in enumeration order, if any
    std::optional<std::pair<PlaySequence, std::size_t>> counterexample;
};

// Exhaustive check that f_t(s) <= f_t(s*_m) = F_{t+2} for every s in S_m and
// 0 <= t <= m. Amounts fit comfortably in 64 bits at desk scale.
inline MaximalityReport verify_maximality(std::size_t m, std::size_t cap = kDefaultFamilyCap) {
    MaximalityReport report;
    FibCache fib;
    std::vector<long long> fib_bound(m + 1);
    for (std::size_t t = 0; t <= m; ++t) {
        fib_bound[t] = fib(t + 2).convert_to<long long>();
    }
    BettingList<long long> start(std::vector<long long>{1, 2});
    for_each_family_member(
        m,
        [&](const PlaySequence& s) {
            ++report.sequences_checked;
            if (!report.ok) return;
            std::vector<long long> firsts = first_element_trajectory(start, s);
            for (std::size_t t = 0; t < firsts.size(); ++t) {
                if (firsts[t] > fib_bound[t]) {
                    report.ok = false;
                    report.counterexample = {s, t};
                    return;
                }
            }
        },
        cap);
    return report;
}

struct ExtremalResult {
    BigInt max_bet;
    std::uint64_t game_count = 0;
    PlaySequence argmax;  // lexicographically first game attaining the maximum
};

// Exact maximum of the maximal bet over all completed games of stopping time
// n from (1, 2), by depth-first enumeration of the length process with undo.
// Completed games exist exactly for n = 3m and n = 3m + 1 (n = 1, 3, 4, 6,
// 7, ...).
inline ExtremalResult extremal_max_bet(std::size_t n, std::size_t cap = kDefaultExtremalCap) {
    if (n == 0 || n % 3 == 2) throw NoGamesOfThisLength(n);
    if (n > cap) {
        throw CapExceeded("extremal search capped at n <= " + std::to_string(cap));
    }

    ExtremalResult result;
    result.max_bet = -1;

    std::vector<long long> buffer = {1, 2};
    std::size_t head = 0;
    PlaySequence seq(n, Outcome::Loss);
    std::vector<long long> best_so_far(n + 1, 0);  // running max bet per depth

    auto list_size = [&] { return buffer.size() - head; };
    auto current_bet = [&]() -> long long {
        std::size_t size = list_size();
        if (size == 0) return 0;
        if (size == 1) return buffer[head];
        return buffer[head] + buffer.back();
    };

    std::function<void(std::size_t)> descend = [&](std::size_t depth) {
        std::size_t size = list_size();
        if (depth == n) {
            if (size != 0) return;
            ++result.game_count;
            if (best_so_far[depth] > result.max_bet) {
                result.max_bet = best_so_far[depth];
                result.argmax = seq;
            }
            return;
        }
        if (size == 0) return;
        std::size_t remaining = n - depth;
        // absorption needs at most 2 units of height per remaining step, and
        // (height + remaining) % 3 == 1 is unreachable
        if (size > 2 * remaining) return;
        if ((size + remaining) % 3 == 1) return;

        long long stake = current_bet();
        best_so_far[depth + 1] = std::max(best_so_far[depth], stake);

        // L < W order keeps argmax deterministic
        seq[depth] = Outcome::Loss;
        buffer.push_back(stake);
        descend(depth + 1);
        buffer.pop_back();

        seq[depth] = Outcome::Win;
        if (size <= 2) {
            head += size;
            descend(depth + 1);
            head -= size;
        } else {
            // the erased front entry stays parked at buffer[head - 1]
            long long back_value = buffer.back();
            ++head;
            buffer.pop_back();
            descend(depth + 1);
            buffer.push_back(back_value);
            --head;
        }
    };
    descend(0);

    if (result.game_count == 0) throw NoGamesOfThisLength(n);
    return result;
}

}  // namespace labouchere
