#pragma once

// Seeded, reproducible Monte Carlo simulation of Labouchere games. Every
// game owns a substream derived by a counter-based construction from
// (master_seed, stream_index), and estimates are accumulated over
// fixed-size chunks merged in chunk order, so results are bit-identical for
// any worker count.

#include "labouchere/engine.hpp"
#include "labouchere/numeric.hpp"
#include "labouchere/walks.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace labouchere {

// splitmix64 finalizer: a bijective scramble of 64-bit state.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-game random stream. Construction is O(1) in the stream index, so
// workers can jump to any game without replaying the generator.
class GameRng {
public:
    GameRng(std::uint64_t master_seed, std::uint64_t stream_index)
        : state_(mix64(mix64(master_seed) ^ (stream_index + 0x632BE59BD9B4E019ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

enum class Statistic { stopping_time, max_bet, total_bets, max_deficit };

inline const char* statistic_name(Statistic s) {
    switch (s) {
        case Statistic::stopping_time: return "N";
        case Statistic::max_bet: return "M";
        case Statistic::total_bets: return "total_bets";
        case Statistic::max_deficit: return "max_deficit";
    }
    return "?";
}

inline Statistic parse_statistic(const std::string& name) {
    if (name == "N") return Statistic::stopping_time;
    if (name == "M") return Statistic::max_bet;
    if (name == "total_bets") return Statistic::total_bets;
    if (name == "max_deficit") return Statistic::max_deficit;
    throw std::invalid_argument("unknown statistic '" + name +
                                "' (expected N, M, total_bets or max_deficit)");
}

// T selects the list arithmetic: double for throughput, Rational for exact
// conservation checks. Outcomes are always sampled as Bernoulli(p) in double
// precision.
template <typename T>
struct RunConfig {
    WinProb<double> p;
    BettingList<T> initial_list;
    std::uint64_t samples = 1;
    std::uint64_t step_cap = 1'000'000;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
};

// Lean per-game result; amounts are reported as doubles even in exact mode.
struct GameStats {
    std::uint64_t steps = 0;
    bool truncated = false;
    double max_bet = 0;
    double total_bets = 0;
    double max_deficit = 0;
};

// Full trace of the game at the given stream index; plays i.i.d. outcomes
// until the list empties or step_cap turns elapse (then flagged truncated).
template <typename T>
GameTrace<T> simulate_game(const RunConfig<T>& cfg, std::uint64_t stream_index) {
    GameRng rng(cfg.master_seed, stream_index);
    BettingList<T> current = cfg.initial_list;
    PlaySequence outcomes;
    std::uint64_t steps = 0;
    while (!current.empty() && steps < cfg.step_cap) {
        outcomes.push_back(rng.next_unit() < cfg.p.p ? Outcome::Win : Outcome::Loss);
        current = step(current, outcomes.back());
        ++steps;
    }
    GameTrace<T> trace = play(cfg.initial_list, outcomes);
    trace.truncated = !trace.stopping_time.has_value();
    return trace;
}

// Same sampling path as simulate_game, without materializing the trace.
template <typename T>
GameStats simulate_game_stats(const RunConfig<T>& cfg, std::uint64_t stream_index) {
    GameRng rng(cfg.master_seed, stream_index);
    GameStats stats;

    // list kept as buffer[head..] so both ends move in O(1)
    std::vector<T> buffer(cfg.initial_list.entries());
    std::size_t head = 0;
    T profit(0);
    T min_profit(0);
    T max_bet(0);
    T total(0);

    while (head < buffer.size() && stats.steps < cfg.step_cap) {
        T stake = (buffer.size() - head == 1) ? buffer[head] : buffer[head] + buffer.back();
        bool win = rng.next_unit() < cfg.p.p;
        if (win) {
            std::size_t size = buffer.size() - head;
            if (size <= 2) {
                head += size;
            } else {
                ++head;
                buffer.pop_back();
            }
            profit += stake;
        } else {
            buffer.push_back(stake);
            profit -= stake;
            if (profit < min_profit) min_profit = profit;
        }
        if (stake > max_bet) max_bet = stake;
        total += stake;
        ++stats.steps;
    }
    stats.truncated = (head < buffer.size());
    stats.max_bet = to_double(max_bet);
    stats.total_bets = to_double(total);
    stats.max_deficit = to_double(min_profit);
    return stats;
}

// Mergeable streaming moments (Welford / Chan combine). count covers the
// games contributing to the moments; truncated games are excluded from them
// and only counted in truncated_count.
struct EstimateSummary {
    Statistic statistic = Statistic::stopping_time;
    std::uint64_t count = 0;
    double mean = 0;
    double m2 = 0;  // sum of squared deviations
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::uint64_t truncated_count = 0;
    std::string config_digest;

    void add(double x) {
        ++count;
        double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
        if (x < min) min = x;
        if (x > max) max = x;
    }

    double standard_error() const {
        if (count < 2) return 0;
        return std::sqrt(m2 / (static_cast<double>(count) * static_cast<double>(count - 1)));
    }

    static EstimateSummary merge(const EstimateSummary& a, const EstimateSummary& b) {
        if (a.statistic != b.statistic || a.config_digest != b.config_digest) {
            throw std::logic_error("cannot merge summaries from different runs");
        }
        EstimateSummary out = a;
        out.truncated_count = a.truncated_count + b.truncated_count;
        out.min = std::min(a.min, b.min);
        out.max = std::max(a.max, b.max);
        out.count = a.count + b.count;
        if (b.count == 0) return out;
        if (a.count == 0) {
            out.mean = b.mean;
            out.m2 = b.m2;
            return out;
        }
        double na = static_cast<double>(a.count);
        double nb = static_cast<double>(b.count);
        double delta = b.mean - a.mean;
        out.mean = a.mean + delta * nb / (na + nb);
        out.m2 = a.m2 + b.m2 + delta * delta * na * nb / (na + nb);
        return out;
    }
};

namespace detail {

inline void digest_append(std::uint64_t& h, const std::string& text) {
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;  // FNV-1a
    }
}

template <typename T>
std::string amount_digest_token(const T& value) {
    if constexpr (std::is_floating_point_v<T>) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(value));
        return buf;
    } else {
        return numerator(value).str() + "/" + denominator(value).str();
    }
}

template <typename T>
std::string config_digest(const RunConfig<T>& cfg, Statistic stat) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "p=%.17g;", cfg.p.p);
    digest_append(h, buf);
    digest_append(h, std::is_floating_point_v<T> ? "mode=floating;" : "mode=exact;");
    digest_append(h, "list=");
    for (const T& entry : cfg.initial_list.entries()) {
        digest_append(h, amount_digest_token(entry));
        digest_append(h, ",");
    }
    std::snprintf(buf, sizeof(buf), ";samples=%llu;cap=%llu;seed=%llu;stat=%s",
                  static_cast<unsigned long long>(cfg.samples),
                  static_cast<unsigned long long>(cfg.step_cap),
                  static_cast<unsigned long long>(cfg.master_seed), statistic_name(stat));
    digest_append(h, buf);
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline double pick_statistic(const GameStats& stats, Statistic stat) {
    switch (stat) {
        case Statistic::stopping_time: return static_cast<double>(stats.steps);
        case Statistic::max_bet: return stats.max_bet;
        case Statistic::total_bets: return stats.total_bets;
        case Statistic::max_deficit: return stats.max_deficit;
    }
    return 0;
}

// chunk granularity for the deterministic parallel schedule
inline constexpr std::uint64_t kChunkSize = 4096;

template <typename Accumulator>
void run_chunked(std::uint64_t samples, unsigned workers, Accumulator&& accumulate_chunk) {
    std::uint64_t chunk_count = (samples + kChunkSize - 1) / kChunkSize;
    unsigned thread_count = std::max(1u, workers);
    thread_count = static_cast<unsigned>(
        std::min<std::uint64_t>(thread_count, std::max<std::uint64_t>(chunk_count, 1)));
    if (thread_count <= 1) {
        for (std::uint64_t c = 0; c < chunk_count; ++c) {
            accumulate_chunk(c, c * kChunkSize, std::min(samples, (c + 1) * kChunkSize));
        }
        return;
    }
    std::atomic<std::uint64_t> next_chunk{0};
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::uint64_t c = next_chunk.fetch_add(1, std::memory_order_relaxed);
                if (c >= chunk_count) return;
                accumulate_chunk(c, c * kChunkSize, std::min(samples, (c + 1) * kChunkSize));
            }
        });
    }
    for (auto& worker : pool) worker.join();
}

}  // namespace detail

// Moments over the stream index range [first, last); building block for
// estimate() and for merge tests. Single-threaded.
template <typename T>
EstimateSummary accumulate_range(const RunConfig<T>& cfg, Statistic stat, std::uint64_t first,
                                 std::uint64_t last) {
    EstimateSummary summary;
    summary.statistic = stat;
    summary.config_digest = detail::config_digest(cfg, stat);
    for (std::uint64_t i = first; i < last; ++i) {
        GameStats stats = simulate_game_stats(cfg, i);
        if (stats.truncated) {
            ++summary.truncated_count;
            continue;
        }
        summary.add(detail::pick_statistic(stats, stat));
    }
    return summary;
}

// Summary over exactly cfg.samples games. Chunks are accumulated
// independently and merged in chunk order, so the result does not depend on
// the worker count.
template <typename T>
EstimateSummary estimate(const RunConfig<T>& cfg, Statistic stat) {
    if (cfg.samples == 0 || cfg.step_cap == 0) {
        throw std::invalid_argument("samples and step_cap must be positive");
    }
    std::uint64_t chunk_count = (cfg.samples + detail::kChunkSize - 1) / detail::kChunkSize;
    std::vector<EstimateSummary> partials(chunk_count);
    detail::run_chunked(cfg.samples, cfg.workers,
                        [&](std::uint64_t c, std::uint64_t first, std::uint64_t last) {
                            partials[c] = accumulate_range(cfg, stat, first, last);
                        });
    EstimateSummary total = partials[0];
    for (std::uint64_t c = 1; c < chunk_count; ++c) {
        total = EstimateSummary::merge(total, partials[c]);
    }
    return total;
}

// Histogram of the maximal bet with geometric buckets of ratio 2 starting at
// 1; values below 1 land in a dedicated bucket, and values at or above 2^53
// (where doubles stop representing integers exactly) in the overflow bucket.
struct TailHistogram {
    static constexpr int kBucketCount = 53;
    std::uint64_t below_one = 0;
    std::array<std::uint64_t, kBucketCount> buckets{};  // bucket k: [2^k, 2^(k+1))
    std::uint64_t overflow = 0;
    std::uint64_t truncated_count = 0;

    void add(double max_bet) {
        if (!std::isfinite(max_bet) || max_bet >= 9007199254740992.0) {
            ++overflow;
        } else if (max_bet < 1.0) {
            ++below_one;
        } else {
            int exponent = std::ilogb(max_bet);
            if (exponent >= kBucketCount) {
                ++overflow;
            } else {
                ++buckets[static_cast<std::size_t>(exponent)];
            }
        }
    }

    std::uint64_t total() const {
        std::uint64_t sum = below_one + overflow;
        for (std::uint64_t b : buckets) sum += b;
        return sum;
    }
};

template <typename T>
TailHistogram tail_histogram(const RunConfig<T>& cfg) {
    if (cfg.samples == 0 || cfg.step_cap == 0) {
        throw std::invalid_argument("samples and step_cap must be positive");
    }
    std::uint64_t chunk_count = (cfg.samples + detail::kChunkSize - 1) / detail::kChunkSize;
    std::vector<TailHistogram> partials(chunk_count);
    detail::run_chunked(cfg.samples, cfg.workers,
                        [&](std::uint64_t c, std::uint64_t first, std::uint64_t last) {
                            TailHistogram& h = partials[c];
                            for (std::uint64_t i = first; i < last; ++i) {
                                GameStats stats = simulate_game_stats(cfg, i);
                                h.add(stats.max_bet);
                                if (stats.truncated) ++h.truncated_count;
                            }
                        });
    TailHistogram total;
    for (const TailHistogram& partial : partials) {
        total.below_one += partial.below_one;
        total.overflow += partial.overflow;
        total.truncated_count += partial.truncated_count;
        for (int k = 0; k < TailHistogram::kBucketCount; ++k) {
            total.buckets[static_cast<std::size_t>(k)] += partial.buckets[static_cast<std::size_t>(k)];
        }
    }
    return total;
}

}  // namespace labouchere
