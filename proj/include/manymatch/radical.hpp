#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace manymatch {

// s = k^2 * q with q squarefree.
std::pair<std::int64_t, std::int64_t> split_square(std::int64_t s);

// Exact real number sum_i c_i * sqrt(q_i) with integer c_i and distinct
// squarefree q_i. The representation is canonical, so == is exact; the order
// is decided by a certified floating estimate with an MPFR fallback.
class RadicalSum {
public:
    struct Term {
        std::int64_t kernel;  // squarefree, 1 for the rational part
        std::int64_t coef;    // never zero
        friend bool operator==(const Term&, const Term&) = default;
    };

    RadicalSum() = default;
    RadicalSum(std::int64_t v);  // NOLINT: implicit integer embedding is intended
    static RadicalSum sqrt(std::int64_t s);

    RadicalSum& operator+=(const RadicalSum& o);
    RadicalSum& operator-=(const RadicalSum& o);
    RadicalSum& operator*=(std::int64_t k);
    friend RadicalSum operator+(RadicalSum a, const RadicalSum& b) { return a += b; }
    friend RadicalSum operator-(RadicalSum a, const RadicalSum& b) { return a -= b; }
    friend RadicalSum operator*(RadicalSum a, std::int64_t k) { return a *= k; }
    friend RadicalSum operator*(std::int64_t k, RadicalSum a) { return a *= k; }
    RadicalSum operator-() const;

    friend bool operator==(const RadicalSum&, const RadicalSum&) = default;
    friend std::strong_ordering operator<=>(const RadicalSum& a, const RadicalSum& b);

    int sign() const;
    // Sign of (this - m * 2^e).
    int compare_dyadic(const mpz_class& m, long e) const;
    bool is_zero() const { return terms_.empty(); }
    double to_double() const;
    // Plain decimal with `digits` significant digits.
    std::string to_decimal(int digits = 64) const;
    // Exact symbolic form, e.g. "3 + 2*sqrt(2)".
    std::string str() const;
    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;  // sorted by kernel
};

}  // namespace manymatch
