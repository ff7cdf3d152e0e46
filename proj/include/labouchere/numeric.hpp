#pragma once

// Exact arithmetic building blocks: arbitrary-precision integers and
// rationals, binomial coefficients in both exact and log-space form, and a
// Fibonacci table.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace labouchere {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const BigInt& x) { return x.convert_to<double>(); }

// C(n, k) as an exact integer. C(3m, m) overflows 64 bits near m = 20, so
// everything downstream works with BigInt.
inline BigInt binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (std::size_t i = 0; i < k; ++i) {
        result *= static_cast<unsigned long long>(n - i);
        result /= static_cast<unsigned long long>(i + 1);
    }
    return result;
}

// log C(n, k), for floating evaluation of large-m pmf terms.
inline double log_binomial(std::size_t n, std::size_t k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// x^e by repeated squaring; exponents here stay small (at most a few hundred).
template <typename T>
T int_pow(T base, std::size_t exponent) {
    T result(1);
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        exponent >>= 1;
        if (exponent > 0) base *= base;
    }
    return result;
}

// Fibonacci numbers with F_1 = F_2 = 1. Grows the table on demand; intended
// to be owned per worker (no internal locking).
class FibCache {
public:
    FibCache() : table_{0, 1, 1} {}

    const BigInt& operator()(std::size_t k) {
        if (k == 0) throw std::invalid_argument("Fibonacci index starts at 1");
        while (table_.size() <= k) {
            table_.push_back(table_[table_.size() - 1] + table_[table_.size() - 2]);
        }
        return table_[k];
    }

private:
    std::vector<BigInt> table_;
};

inline BigInt fibonacci(std::size_t k) {
    FibCache cache;
    return cache(k);
}

}  // namespace labouchere
