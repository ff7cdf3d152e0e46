#pragma once

// The Labouchere list state machine. A betting list is an ordered sequence
// of positive amounts; each turn bets the sum of the first and last entries,
// erases both on a win and appends the bet on a loss. The game ends when the
// list becomes empty.
//
// All operations are pure functions over immutable values and are safe to
// call from concurrent workers.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace labouchere {

enum class Outcome : char { Win = 'W', Loss = 'L' };

using PlaySequence = std::vector<Outcome>;

struct StepOnEmptyList : std::logic_error {
    StepOnEmptyList() : std::logic_error("step on empty list: the game already ended") {}
};

struct NotPlayable : std::runtime_error {
    explicit NotPlayable(const std::string& what) : std::runtime_error(what) {}
};

inline PlaySequence parse_sequence(std::string_view text) {
    PlaySequence seq;
    seq.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
            case 'W': case 'w': seq.push_back(Outcome::Win); break;
            case 'L': case 'l': seq.push_back(Outcome::Loss); break;
            default:
                throw std::invalid_argument(std::string("invalid outcome character '") + ch +
                                            "' (expected W or L)");
        }
    }
    return seq;
}

inline std::string to_string(const PlaySequence& seq) {
    std::string text;
    text.reserve(seq.size());
    for (Outcome o : seq) text.push_back(static_cast<char>(o));
    return text;
}

// Ordered list of strictly positive amounts. The empty list is the absorbing
// terminal state.
template <typename T>
class BettingList {
public:
    BettingList() = default;

    explicit BettingList(std::vector<T> entries) : entries_(std::move(entries)) {
        for (const T& entry : entries_) {
            if (!(entry > T(0))) {
                throw std::invalid_argument("betting list entries must be strictly positive");
            }
        }
    }

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<T>& entries() const { return entries_; }
    const T& front() const { return entries_.front(); }
    const T& back() const { return entries_.back(); }

    T sum() const {
        T total(0);
        for (const T& entry : entries_) total += entry;
        return total;
    }

    friend bool operator==(const BettingList& a, const BettingList& b) {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<T> entries_;
};

// b(L): 0 on the empty list, the single entry on a length-1 list, first plus
// last otherwise.
template <typename T>
T bet(const BettingList<T>& list) {
    if (list.empty()) return T(0);
    if (list.size() == 1) return list.front();
    return list.front() + list.back();
}

// One turn. Win erases first and last entry (emptying lists of length <= 2);
// loss appends b(L). Stepping the empty list throws: in a real game the
// process already stopped, so reaching this is a harness bug.
template <typename T>
BettingList<T> step(const BettingList<T>& list, Outcome outcome) {
    if (list.empty()) throw StepOnEmptyList();
    const auto& entries = list.entries();
    std::vector<T> next;
    if (outcome == Outcome::Win) {
        if (entries.size() > 2) {
            next.assign(entries.begin() + 1, entries.end() - 1);
        }
    } else {
        next = entries;
        next.push_back(bet(list));
    }
    return BettingList<T>(std::move(next));
}

// Full record of one played game (possibly partial or truncated).
template <typename T>
struct GameTrace {
    BettingList<T> initial_list;
    PlaySequence outcomes;
    std::vector<T> bets;                       // bets[k] = bet placed on turn k+1
    std::vector<std::size_t> lengths;          // lengths[k] = list length after k turns
    std::vector<T> profit;                     // cumulative winnings, profit[0] = 0
    std::optional<std::size_t> stopping_time;  // set iff the final list is empty
    bool truncated = false;                    // set by simulation when step_cap was hit
    T max_bet{};                               // maximum over placed bets, 0 if none
    T max_deficit{};                           // min over the profit path, <= 0
    T total_bets{};
    BettingList<T> final_list;
};

// Plays s from the starting list, recording every bet, length and profit
// value. s must not continue past absorption.
template <typename T>
GameTrace<T> play(const BettingList<T>& start, const PlaySequence& seq) {
    GameTrace<T> trace;
    trace.initial_list = start;
    trace.outcomes = seq;
    trace.lengths.reserve(seq.size() + 1);
    trace.profit.reserve(seq.size() + 1);
    trace.bets.reserve(seq.size());
    trace.lengths.push_back(start.size());
    trace.profit.push_back(T(0));

    BettingList<T> current = start;
    T profit(0);
    for (Outcome outcome : seq) {
        if (current.empty()) throw StepOnEmptyList();
        T stake = bet(current);
        if (outcome == Outcome::Win) {
            profit += stake;
        } else {
            profit -= stake;
        }
        current = step(current, outcome);
        if (stake > trace.max_bet) trace.max_bet = stake;
        if (profit < trace.max_deficit) trace.max_deficit = profit;
        trace.total_bets += stake;
        trace.bets.push_back(std::move(stake));
        trace.lengths.push_back(current.size());
        trace.profit.push_back(profit);
    }
    if (current.empty()) trace.stopping_time = seq.size();
    trace.final_list = std::move(current);
    return trace;
}

// Definition 3.2 check on list lengths alone: every proper prefix must keep
// j + #losses - 2 * #wins positive.
inline bool is_playable(std::size_t start_length, const PlaySequence& seq) {
    if (start_length == 0) throw std::invalid_argument("is_playable requires a non-empty start");
    long long height = static_cast<long long>(start_length);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        height += (seq[i] == Outcome::Loss) ? 1 : -2;
        if (height <= 0) return false;
    }
    return true;
}

// First-element values f_0, f_1, ..., where f_0 is the first entry of the
// starting list and f_t is the first entry right after the t-th winning turn.
// Wins that empty the list contribute no entry.
template <typename T>
std::vector<T> first_element_trajectory(const BettingList<T>& start, const PlaySequence& seq) {
    if (start.empty()) throw NotPlayable("starting list is empty");
    if (!is_playable(start.size(), seq)) {
        throw NotPlayable("sequence is not playable on a list of length " +
                          std::to_string(start.size()));
    }
    std::vector<T> firsts;
    firsts.push_back(start.front());
    BettingList<T> current = start;
    for (Outcome outcome : seq) {
        current = step(current, outcome);
        if (outcome == Outcome::Win && !current.empty()) {
            firsts.push_back(current.front());
        }
    }
    return firsts;
}

}  // namespace labouchere
