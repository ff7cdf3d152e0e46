#pragma once

// The list-length process as a random walk on Z+ with absorbing state 0:
// from h >= 1 the walk moves to max(h-2, 0) with probability p and to h+1
// with probability q = 1 - p. Closed-form stopping-time pmfs are available
// for starts 1 and 2; an independent dynamic-programming oracle covers any
// start. Instantiate with T = Rational for exact arithmetic or T = double
// for log-gamma evaluation of large terms.

#include "labouchere/numeric.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace labouchere {

template <typename T>
struct WinProb {
    T p;
    T q;  // 1 - p

    explicit WinProb(T win_probability) : p(std::move(win_probability)), q(T(1) - p) {
        if (p < T(1) / T(3) || p > T(1)) {
            throw std::invalid_argument("win probability must lie in [1/3, 1]");
        }
    }
};

// Transition kernel at height h >= 1: {(max(h-2,0), p), (h+1, q)}.
template <typename T>
std::array<std::pair<std::uint64_t, T>, 2> kernel(std::uint64_t h, const WinProb<T>& wp) {
    if (h == 0) throw std::invalid_argument("kernel is defined for h >= 1");
    std::uint64_t down = (h >= 2) ? h - 2 : 0;
    return {{{down, wp.p}, {h + 1, wp.q}}};
}

namespace detail {

// (1/d) * C(n, k) * p^pe * q^qe, exact or via log-gamma depending on T.
template <typename T>
T pmf_term(std::size_t n, std::size_t k, std::size_t d, const WinProb<T>& wp,
           std::size_t p_exp, std::size_t q_exp) {
    if constexpr (std::is_floating_point_v<T>) {
        if (wp.q == 0 && q_exp > 0) return T(0);
        double log_term = log_binomial(n, k) - std::log(static_cast<double>(d)) +
                          static_cast<double>(p_exp) * std::log(wp.p);
        if (q_exp > 0) log_term += static_cast<double>(q_exp) * std::log(wp.q);
        return std::exp(log_term);
    } else {
        return T(binomial(n, k), BigInt(d)) * int_pow(wp.p, p_exp) * int_pow(wp.q, q_exp);
    }
}

}  // namespace detail

// Theorem of Ethier for walks started at 1:
//   P1(N = 3m+1) = 1/(2m+1) C(3m, m)   p^(m+1) q^(2m)
//   P1(N = 3m+2) = 1/(m+1)  C(3m+1, m) p^(m+1) q^(2m+1)
// and P1(N = 3m) = 0 for m >= 1.
template <typename T>
std::pair<T, T> pmf_start1(std::size_t m, const WinProb<T>& wp) {
    T at_3m1 = detail::pmf_term(3 * m, m, 2 * m + 1, wp, m + 1, 2 * m);
    T at_3m2 = detail::pmf_term(3 * m + 1, m, m + 1, wp, m + 1, 2 * m + 1);
    return {at_3m1, at_3m2};
}

// Start 2, by the shift "absorbed after n steps from 2" <-> "absorbed after
// n+1 steps from 1":
//   P2(N = 3m)   = 1/(2m+1) C(3m, m)   p^(m+1) q^(2m-1)   for m >= 1
//   P2(N = 3m+1) = 1/(m+1)  C(3m+1, m) p^(m+1) q^(2m)     for m >= 0
// and P2(N = 3m+2) = 0. The first component is 0 at m = 0 (N = 0 is
// impossible from a non-empty start).
template <typename T>
std::pair<T, T> pmf_start2(std::size_t m, const WinProb<T>& wp) {
    T at_3m = (m == 0) ? T(0) : detail::pmf_term(3 * m, m, 2 * m + 1, wp, m + 1, 2 * m - 1);
    T at_3m1 = detail::pmf_term(3 * m + 1, m, m + 1, wp, m + 1, 2 * m);
    return {at_3m, at_3m1};
}

// Closed-form P_j(N = n) for j in {1, 2}; zero off the support pattern.
template <typename T>
T pmf_closed_form(std::size_t start, std::size_t n, const WinProb<T>& wp) {
    if (start != 1 && start != 2) {
        throw std::invalid_argument("closed forms exist only for starts 1 and 2");
    }
    if (n == 0) return T(0);
    std::size_t m = n / 3;
    std::size_t r = n % 3;
    if (start == 1) {
        if (r == 0) return T(0);
        auto [at_3m1, at_3m2] = pmf_start1(m, wp);
        return (r == 1) ? at_3m1 : at_3m2;
    }
    if (r == 2) return T(0);
    auto [at_3m, at_3m1] = pmf_start2(m, wp);
    return (r == 0) ? at_3m : at_3m1;
}

// Independent oracle: probability that the walk started at j is absorbed at
// 0 exactly at step n, by dynamic programming over (step, height). Heights
// never exceed j + n; mass reaching 0 is not propagated.
template <typename T>
T pmf_oracle(std::size_t start, std::size_t n, const WinProb<T>& wp) {
    if (start == 0 || n == 0) throw std::invalid_argument("pmf_oracle requires j >= 1, n >= 1");
    std::vector<T> alive(start + n + 1, T(0));
    alive[start] = T(1);
    T absorbed_now(0);
    for (std::size_t step_index = 1; step_index <= n; ++step_index) {
        std::vector<T> next(alive.size(), T(0));
        absorbed_now = T(0);
        for (std::size_t h = 1; h < alive.size(); ++h) {
            if (alive[h] == T(0)) continue;
            if (h <= 2) {
                absorbed_now += alive[h] * wp.p;
            } else {
                next[h - 2] += alive[h] * wp.p;
            }
            if (h + 1 < next.size()) next[h + 1] += alive[h] * wp.q;
        }
        alive.swap(next);
    }
    return absorbed_now;
}

// P_j(N <= n_max). Uses the closed forms for j in {1, 2} and a single DP
// sweep otherwise.
template <typename T>
T partial_cdf(std::size_t start, std::size_t n_max, const WinProb<T>& wp) {
    if (start == 0 || n_max == 0) throw std::invalid_argument("partial_cdf requires j >= 1, n_max >= 1");
    T total(0);
    if (start == 1 || start == 2) {
        for (std::size_t n = 1; n <= n_max; ++n) total += pmf_closed_form(start, n, wp);
        return total;
    }
    std::vector<T> alive(start + n_max + 1, T(0));
    alive[start] = T(1);
    for (std::size_t step_index = 1; step_index <= n_max; ++step_index) {
        std::vector<T> next(alive.size(), T(0));
        for (std::size_t h = 1; h < alive.size(); ++h) {
            if (alive[h] == T(0)) continue;
            if (h <= 2) {
                total += alive[h] * wp.p;
            } else {
                next[h - 2] += alive[h] * wp.p;
            }
            if (h + 1 < next.size()) next[h + 1] += alive[h] * wp.q;
        }
        alive.swap(next);
    }
    return total;
}

// Stopping-time pmf table for n = 1..n_max.
template <typename T>
struct StoppingPmf {
    std::size_t start = 1;
    std::map<std::size_t, T> terms;

    T partial_sum() const {
        T total(0);
        for (const auto& [n, prob] : terms) total += prob;
        return total;
    }
};

template <typename T>
StoppingPmf<T> stopping_pmf(std::size_t start, std::size_t n_max, const WinProb<T>& wp,
                            bool use_oracle = false) {
    StoppingPmf<T> pmf;
    pmf.start = start;
    for (std::size_t n = 1; n <= n_max; ++n) {
        pmf.terms[n] = use_oracle || (start != 1 && start != 2)
                           ? pmf_oracle(start, n, wp)
                           : pmf_closed_form(start, n, wp);
    }
    return pmf;
}

// Truncated series value of E[N] for starts 1 and 2; the terms decay
// geometrically for p > 1/3, so truncation when increments drop below
// tail_tol is safe. Used as the oracle for Monte Carlo means.
inline double series_mean_stopping_time(std::size_t start, const WinProb<double>& wp,
                                        double tail_tol = 1e-12) {
    if (start != 1 && start != 2) {
        throw std::invalid_argument("series mean is available for starts 1 and 2");
    }
    double mean = 0.0;
    for (std::size_t m = 0; m <= 100000; ++m) {
        double added = 0.0;
        if (start == 1) {
            auto [a, b] = pmf_start1(m, wp);
            added = a * (3.0 * m + 1.0) + b * (3.0 * m + 2.0);
        } else {
            auto [a, b] = pmf_start2(m, wp);
            added = a * (3.0 * m) + b * (3.0 * m + 1.0);
        }
        mean += added;
        if (m > 4 && added < tail_tol) break;
    }
    return mean;
}

}  // namespace labouchere
