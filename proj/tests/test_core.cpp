#include <doctest.h>

#include <random>

#include <mpfr.h>

#include "manymatch/core.hpp"

using namespace manymatch;

TEST_CASE("dist2") {
    CHECK(dist2({1, 1}, {4, 5}) == 25);
    CHECK(dist2({2, 2}, {2, 2}) == 0);
    CHECK(dist2({1, 1}, {1, 2}) == 1);
}

TEST_CASE("cmp_root small cases") {
    CHECK(cmp_root({7, 0, 0}, {0, 5, 2}) == std::strong_ordering::less);
    CHECK(cmp_root({0, 2, 4}, {4, 0, 0}) == std::strong_ordering::equal);
    CHECK(cmp_root({0, 3, 2}, {0, 2, 5}) == std::strong_ordering::less);
    CHECK(cmp_root({0, 2, 5}, {0, 3, 2}) == std::strong_ordering::greater);
}

TEST_CASE("cmp_root negative combinations") {
    // -3 + sqrt(2) = -1.586 vs -2 + 0 = -2
    CHECK(cmp_root({-3, 1, 2}, {-2, 0, 0}) == std::strong_ordering::greater);
    // 1 + sqrt(2) = 2.414 vs sqrt(6) = 2.449
    CHECK(cmp_root({1, 1, 2}, {0, 1, 6}) == std::strong_ordering::less);
    // 3 - sqrt(8) is positive
    CHECK(cmp_root({3, -1, 8}, {0, 0, 0}) == std::strong_ordering::greater);
    CHECK(cmp_root({0, 0, 0}, {0, 0, 0}) == std::strong_ordering::equal);
}

TEST_CASE("cmp_root agrees with 4096-bit evaluation") {
    std::mt19937_64 rng(7);
    mpfr_t x, y, r;
    mpfr_inits2(4096, x, y, r, static_cast<mpfr_ptr>(nullptr));
    auto big = [&](bool nonneg) {
        BigInt v = 0;
        for (int i = 0; i < 4; ++i) {
            v <<= 64;
            v += static_cast<unsigned long>(rng());
        }
        v >>= static_cast<mp_bitcnt_t>(rng() % 256);
        if (!nonneg && (rng() & 1)) v = -v;
        return v;
    };
    auto eval = [&](mpfr_t out, const RootExpr& e) {
        mpfr_set_si(r, e.s, MPFR_RNDN);
        mpfr_sqrt(r, r, MPFR_RNDN);
        mpfr_mul_z(r, r, e.b.get_mpz_t(), MPFR_RNDN);
        mpfr_add_z(out, r, e.a.get_mpz_t(), MPFR_RNDN);
    };
    int decided = 0;
    for (int it = 0; it < 20000; ++it) {
        RootExpr l{big(false), big(true), static_cast<std::int64_t>(rng() % 65536)};
        RootExpr g{big(false), big(true), static_cast<std::int64_t>(rng() % 65536)};
        if (it % 5 == 0) g.a = l.a;  // near ties
        eval(x, l);
        eval(y, g);
        mpfr_sub(x, x, y, MPFR_RNDN);
        if (mpfr_zero_p(x) || mpfr_get_exp(x) < -3500) continue;
        const int expect = mpfr_sgn(x);
        const auto got = cmp_root(l, g);
        CHECK((expect < 0 ? got == std::strong_ordering::less : got == std::strong_ordering::greater));
        ++decided;
    }
    mpfr_clears(x, y, r, static_cast<mpfr_ptr>(nullptr));
    CHECK(decided > 19000);
}

TEST_CASE("ceil_sqrt_scaled") {
    CHECK(ceil_sqrt_scaled(2, 1) == 3);
    CHECK(ceil_sqrt_scaled(4, 0) == 2);
    CHECK(ceil_sqrt_scaled(0, 5) == 0);
    CHECK(ceil_sqrt_scaled(2, -1) == 1);   // sqrt(2)/2 = 0.707
    CHECK(ceil_sqrt_scaled(25, -2) == 2);  // 5/4
    CHECK(ceil_sqrt_scaled(16, -2) == 1);  // 4/4 exactly
    for (std::int64_t s = 1; s < 300; ++s) {
        for (long t = -4; t < 12; ++t) {
            const BigInt k = ceil_sqrt_scaled(s, t);
            // k is the answer iff (k-1)^2 < s 4^t <= k^2, scaled to integers.
            BigInt lhs = s, k2 = k * k, km = (k - 1) * (k - 1);
            if (t >= 0) {
                lhs <<= static_cast<mp_bitcnt_t>(2 * t);
            } else {
                k2 <<= static_cast<mp_bitcnt_t>(-2 * t);
                km <<= static_cast<mp_bitcnt_t>(-2 * t);
            }
            CHECK(k2 >= lhs);
            CHECK((k == 0 || km < lhs));
        }
    }
}

TEST_CASE("orientation") {
    CHECK(orientation({1, 1}, {2, 1}, {2, 2}) == 1);
    CHECK(orientation({1, 1}, {2, 2}, {3, 3}) == 0);
    CHECK(orientation({1, 1}, {3, 1}, {2, 1}) == 0);
    CHECK(orientation({1, 1}, {2, 1}, {2, 0}) == -1);
    std::mt19937 rng(3);
    for (int i = 0; i < 1000; ++i) {
        GridPoint p{static_cast<int>(rng() % 50), static_cast<int>(rng() % 50)};
        GridPoint q{static_cast<int>(rng() % 50), static_cast<int>(rng() % 50)};
        GridPoint r{static_cast<int>(rng() % 50), static_cast<int>(rng() % 50)};
        CHECK(orientation(p, q, r) == -orientation(p, r, q));
        GridPoint t{static_cast<int>(rng() % 9) - 4, static_cast<int>(rng() % 9) - 4};
        auto sh = [&](GridPoint a) { return GridPoint{a.x + t.x, a.y + t.y}; };
        CHECK(orientation(p, q, r) == orientation(sh(p), sh(q), sh(r)));
    }
}

TEST_CASE("segments_properly_cross") {
    CHECK(segments_properly_cross({{1, 1}, {3, 3}}, {{1, 3}, {3, 1}}));
    CHECK_FALSE(segments_properly_cross({{1, 1}, {2, 2}}, {{3, 3}, {4, 4}}));
    CHECK_FALSE(segments_properly_cross({{1, 1}, {4, 4}}, {{2, 2}, {3, 3}}));
    // shared endpoint only
    CHECK_FALSE(segments_properly_cross({{1, 1}, {4, 4}}, {{4, 4}, {5, 1}}));
    // T-junction: endpoint strictly inside the other segment
    CHECK(segments_properly_cross({{1, 1}, {5, 1}}, {{3, 1}, {3, 4}}));
    CHECK_FALSE(segments_properly_cross({{1, 1}, {2, 1}}, {{3, 2}, {3, 4}}));
    std::mt19937 rng(5);
    for (int i = 0; i < 2000; ++i) {
        auto pt = [&] { return GridPoint{static_cast<int>(rng() % 6), static_cast<int>(rng() % 6)}; };
        Segment a{pt(), pt()}, b{pt(), pt()};
        if (a.a == a.b || b.a == b.b) continue;
        const bool x = segments_properly_cross(a, b);
        CHECK(x == segments_properly_cross(b, a));
        CHECK(x == segments_properly_cross({a.b, a.a}, {b.b, b.a}));
    }
}

TEST_CASE("line_key") {
    CHECK(line_key({1, 1}, {3, 3}) == line_key({2, 2}, {4, 4}));
    CHECK(line_key({1, 1}, {3, 3}) == line_key({3, 3}, {1, 1}));
    const auto v = line_key({1, 1}, {1, 5});
    CHECK(v.dx == 0);
    CHECK(v.dy == 1);
    CHECK(line_key({1, 1}, {3, 2}) == line_key({1, 1}, {5, 3}));  // (4,2) is a multiple of (2,1)
    CHECK(line_key({1, 1}, {3, 2}) != line_key({1, 1}, {4, 2}));
    CHECK(line_key({1, 1}, {3, 2}) != line_key({1, 2}, {3, 3}));
    const auto k = line_key({2, 7}, {8, 3});
    CHECK(k.contains({5, 5}));
    CHECK(k.param({8, 3}) - k.param({2, 7}) == 2);
    CHECK(k.at(k.param({5, 5})) == GridPoint{5, 5});
    std::mt19937 rng(11);
    for (int i = 0; i < 500; ++i) {
        GridPoint p{static_cast<int>(rng() % 40), static_cast<int>(rng() % 40)};
        GridPoint d{static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 7) - 3};
        if (d.x == 0 && d.y == 0) continue;
        const int a = static_cast<int>(rng() % 5) - 2, b = a + 1 + static_cast<int>(rng() % 3);
        CHECK(line_key({p.x + a * d.x, p.y + a * d.y}, {p.x + b * d.x, p.y + b * d.y}) ==
              line_key(p, {p.x + d.x, p.y + d.y}));
    }
}

TEST_CASE("validate") {
    Instance ok{4, {{1, 1}}, {{2, 2}}};
    CHECK_NOTHROW(validate(ok));
    CHECK_THROWS_AS(validate(Instance{4, {{1, 1}}, {{1, 1}}}), InputError);
    CHECK_THROWS_AS(validate(Instance{4, {{1, 1}}, {}}), InputError);
    CHECK_THROWS_AS(validate(Instance{4, {{0, 1}}, {{2, 2}}}), InputError);
    CHECK_THROWS_AS(validate(Instance{4, {{1, 1}, {1, 1}}, {{2, 2}}}), InputError);
}
