#include "manymatch/radical.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <mpfr.h>

namespace manymatch {

std::pair<std::int64_t, std::int64_t> split_square(std::int64_t s) {
    if (s < 0) throw std::invalid_argument("split_square: negative radicand");
    if (s < 2) return {1, s};
    thread_local std::unordered_map<std::int64_t, std::pair<std::int64_t, std::int64_t>> cache;
    if (auto it = cache.find(s); it != cache.end()) return it->second;
    std::int64_t k = 1, q = 1, rest = s;
    for (std::int64_t p = 2; p * p <= rest; ++p) {
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        for (int i = 0; i + 1 < e; i += 2) k *= p;
        if (e % 2 == 1) q *= p;
    }
    q *= rest;
    if (cache.size() > (1u << 20)) cache.clear();
    cache.emplace(s, std::make_pair(k, q));
    return {k, q};
}

static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("RadicalSum coefficient overflow");
    return r;
}

static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("RadicalSum coefficient overflow");
    return r;
}

RadicalSum::RadicalSum(std::int64_t v) {
    if (v != 0) terms_.push_back({1, v});
}

RadicalSum RadicalSum::sqrt(std::int64_t s) {
    RadicalSum r;
    if (s == 0) return r;
    const auto [k, q] = split_square(s);
    r.terms_.push_back({q, k});
    return r;
}

static void merge_into(std::vector<RadicalSum::Term>& out, const std::vector<RadicalSum::Term>& a,
                       const std::vector<RadicalSum::Term>& b, int sign_b) {
    out.clear();
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].kernel < b[j].kernel)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].kernel < a[i].kernel) {
            out.push_back({b[j].kernel, sign_b > 0 ? b[j].coef : checked_mul(b[j].coef, -1)});
            ++j;
        } else {
            const std::int64_t c =
                checked_add(a[i].coef, sign_b > 0 ? b[j].coef : checked_mul(b[j].coef, -1));
            if (c != 0) out.push_back({a[i].kernel, c});
            ++i;
            ++j;
        }
    }
}

RadicalSum& RadicalSum::operator+=(const RadicalSum& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) return *this = o;
    std::vector<Term> out;
    merge_into(out, terms_, o.terms_, +1);
    terms_ = std::move(out);
    return *this;
}

RadicalSum& RadicalSum::operator-=(const RadicalSum& o) {
    if (o.terms_.empty()) return *this;
    std::vector<Term> out;
    merge_into(out, terms_, o.terms_, -1);
    terms_ = std::move(out);
    return *this;
}

RadicalSum& RadicalSum::operator*=(std::int64_t k) {
    if (k == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coef = checked_mul(t.coef, k);
    return *this;
}

RadicalSum RadicalSum::operator-() const {
    RadicalSum r = *this;
    r *= -1;
    return r;
}

static int mpfr_sign_at(const std::vector<RadicalSum::Term>& terms, mpfr_prec_t prec) {
    mpfr_t sum, mag, term, root;
    mpfr_inits2(prec, sum, mag, term, root, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(sum, 1);
    mpfr_set_zero(mag, 1);
    for (const auto& t : terms) {
        mpfr_set_si(root, t.kernel, MPFR_RNDN);
        mpfr_sqrt(root, root, MPFR_RNDN);
        mpfr_mul_si(term, root, t.coef, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        mpfr_abs(term, term, MPFR_RNDN);
        mpfr_add(mag, mag, term, MPFR_RNDN);
    }
    // Each rounded operation contributes at most 2^-prec relative error of
    // the running magnitude; (k + 4) covers sqrt, mul and the additions.
    mpfr_mul_ui(mag, mag, terms.size() + 4, MPFR_RNDU);
    mpfr_mul_2si(mag, mag, 1 - static_cast<long>(prec), MPFR_RNDU);
    mpfr_abs(term, sum, MPFR_RNDN);
    int result = 0;
    if (mpfr_cmp(term, mag) > 0) result = mpfr_sgn(sum);
    mpfr_clears(sum, mag, term, root, static_cast<mpfr_ptr>(nullptr));
    return result;
}

int RadicalSum::sign() const {
    if (terms_.empty()) return 0;
    if (terms_.size() == 1) return terms_[0].coef > 0 ? 1 : -1;
    double sum = 0, mag = 0;
    for (const auto& t : terms_) {
        const double v = static_cast<double>(t.coef) * std::sqrt(static_cast<double>(t.kernel));
        sum += v;
        mag += std::fabs(v);
    }
    const double bound = mag * static_cast<double>(terms_.size() + 4) * 0x1p-51;
    if (std::fabs(sum) > bound) return sum > 0 ? 1 : -1;
    // Distinct squarefree radicals are linearly independent over Q, so a
    // non-empty sum is non-zero and some precision decides it.
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        if (const int s = mpfr_sign_at(terms_, prec); s != 0) return s;
        if (prec > (mpfr_prec_t{1} << 24)) throw std::runtime_error("RadicalSum::sign did not converge");
    }
}

int RadicalSum::compare_dyadic(const mpz_class& m, long e) const {
    const bool rational = terms_.empty() || (terms_.size() == 1 && terms_[0].kernel == 1);
    if (rational) {
        mpz_class lhs = terms_.empty() ? 0 : terms_[0].coef;
        mpz_class rhs = m;
        if (e >= 0) rhs <<= static_cast<mp_bitcnt_t>(e);
        else lhs <<= static_cast<mp_bitcnt_t>(-e);
        const int c = cmp(lhs, rhs);
        return (c > 0) - (c < 0);
    }
    // An irrational value never equals a dyadic rational.
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        mpfr_t sum, term, mag;
        mpfr_inits2(prec, sum, term, mag, static_cast<mpfr_ptr>(nullptr));
        mpfr_set_z(sum, m.get_mpz_t(), MPFR_RNDN);
        mpfr_mul_2si(sum, sum, e, MPFR_RNDN);
        mpfr_neg(sum, sum, MPFR_RNDN);
        mpfr_abs(mag, sum, MPFR_RNDN);
        for (const auto& t : terms_) {
            mpfr_set_si(term, t.kernel, MPFR_RNDN);
            mpfr_sqrt(term, term, MPFR_RNDN);
            mpfr_mul_si(term, term, t.coef, MPFR_RNDN);
            mpfr_add(sum, sum, term, MPFR_RNDN);
            mpfr_abs(term, term, MPFR_RNDN);
            mpfr_add(mag, mag, term, MPFR_RNDN);
        }
        mpfr_mul_ui(mag, mag, terms_.size() + 5, MPFR_RNDU);
        mpfr_mul_2si(mag, mag, 1 - static_cast<long>(prec), MPFR_RNDU);
        mpfr_abs(term, sum, MPFR_RNDN);
        const int s = mpfr_cmp(term, mag) > 0 ? mpfr_sgn(sum) : 0;
        mpfr_clears(sum, term, mag, static_cast<mpfr_ptr>(nullptr));
        if (s != 0) return s;
        if (prec > (mpfr_prec_t{1} << 24)) throw std::runtime_error("compare_dyadic did not converge");
    }
}

std::strong_ordering operator<=>(const RadicalSum& a, const RadicalSum& b) {
    if (a.terms_ == b.terms_) return std::strong_ordering::equal;
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

double RadicalSum::to_double() const {
    double sum = 0;
    for (const auto& t : terms_) sum += static_cast<double>(t.coef) * std::sqrt(static_cast<double>(t.kernel));
    return sum;
}

std::string RadicalSum::to_decimal(int digits) const {
    if (digits < 1) digits = 1;
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits) * 4 + 128;
    mpfr_t sum, term;
    mpfr_inits2(prec, sum, term, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(sum, 1);
    for (const auto& t : terms_) {
        mpfr_set_si(term, t.kernel, MPFR_RNDN);
        mpfr_sqrt(term, term, MPFR_RNDN);
        mpfr_mul_si(term, term, t.coef, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
    }
    std::string out;
    if (mpfr_zero_p(sum)) {
        out = "0." + std::string(static_cast<std::size_t>(digits - 1 > 0 ? digits - 1 : 1), '0');
    } else {
        mpfr_exp_t exp = 0;
        char* raw = mpfr_get_str(nullptr, &exp, 10, static_cast<std::size_t>(digits), sum, MPFR_RNDN);
        std::string mant(raw);
        mpfr_free_str(raw);
        if (mant[0] == '-') {
            out = "-";
            mant.erase(0, 1);
        }
        // value = 0.mant * 10^exp
        if (exp <= 0) {
            out += "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
        } else if (static_cast<std::size_t>(exp) >= mant.size()) {
            out += mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
        } else {
            out += mant.substr(0, static_cast<std::size_t>(exp)) + "." + mant.substr(static_cast<std::size_t>(exp));
        }
    }
    mpfr_clears(sum, term, static_cast<mpfr_ptr>(nullptr));
    return out;
}

std::string RadicalSum::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        std::int64_t c = t.coef;
        if (!first) {
            os << (c < 0 ? " - " : " + ");
            c = c < 0 ? -c : c;
        }
        first = false;
        if (t.kernel == 1) {
            os << c;
        } else {
            if (c == -1) os << "-";
            else if (c != 1) os << c << "*";
            os << "sqrt(" << t.kernel << ")";
        }
    }
    return os.str();
}

}  // namespace manymatch
