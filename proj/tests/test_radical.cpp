#include <doctest.h>

#include <cmath>
#include <random>

#include "manymatch/radical.hpp"

using namespace manymatch;

TEST_CASE("split_square") {
    CHECK(split_square(0) == std::pair<std::int64_t, std::int64_t>{1, 0});
    CHECK(split_square(1) == std::pair<std::int64_t, std::int64_t>{1, 1});
    CHECK(split_square(8) == std::pair<std::int64_t, std::int64_t>{2, 2});
    CHECK(split_square(72) == std::pair<std::int64_t, std::int64_t>{6, 2});
    CHECK(split_square(49) == std::pair<std::int64_t, std::int64_t>{7, 1});
    CHECK(split_square(1000003) == std::pair<std::int64_t, std::int64_t>{1, 1000003});
    for (std::int64_t s = 1; s < 3000; ++s) {
        const auto [k, q] = split_square(s);
        CHECK(k * k * q == s);
        for (std::int64_t p = 2; p * p <= q; ++p) CHECK(q % (p * p) != 0);
    }
}

TEST_CASE("canonical equality") {
    CHECK(RadicalSum::sqrt(8) == RadicalSum::sqrt(2) + RadicalSum::sqrt(2));
    CHECK(RadicalSum::sqrt(9) == RadicalSum(3));
    CHECK((RadicalSum::sqrt(2) - RadicalSum::sqrt(2)).is_zero());
    CHECK(RadicalSum::sqrt(2) * 3 == RadicalSum::sqrt(18));
    CHECK(RadicalSum::sqrt(5) + RadicalSum(1) != RadicalSum::sqrt(5));
    CHECK(-RadicalSum::sqrt(3) + RadicalSum::sqrt(3) == RadicalSum{});
}

TEST_CASE("ordering") {
    CHECK(RadicalSum::sqrt(2) < RadicalSum::sqrt(3));
    CHECK(RadicalSum::sqrt(7) + RadicalSum(1) > RadicalSum::sqrt(13));
}

TEST_CASE("ordering near ties") {
    // sqrt(2)+sqrt(3) = 3.1462..., sqrt(10) = 3.1623...
    CHECK(RadicalSum::sqrt(2) + RadicalSum::sqrt(3) < RadicalSum::sqrt(10));
    // sqrt(1000002000000) = 1000000.9999995...
    const RadicalSum a = RadicalSum(1000001) - RadicalSum::sqrt(1000002000000);
    CHECK(a.sign() == 1);
    // sqrt(s) + sqrt(s+2) vs 2 sqrt(s+1): concavity gives a tiny negative gap
    for (std::int64_t s : {3, 1000, 999999, 123456789}) {
        const RadicalSum d = RadicalSum::sqrt(s) + RadicalSum::sqrt(s + 2) - RadicalSum::sqrt(s + 1) * 2;
        CHECK(d.sign() == -1);
    }
    // A sum of many radicals that nearly cancels.
    RadicalSum x;
    for (std::int64_t s = 2; s < 60; ++s) x += RadicalSum::sqrt(s) * ((s % 2) ? 1 : -1);
    const double approx = x.to_double();
    CHECK(x.sign() == (approx > 0 ? 1 : -1));
}

TEST_CASE("random sign agrees with long double when far from zero") {
    std::mt19937_64 rng(1);
    for (int it = 0; it < 2000; ++it) {
        RadicalSum x;
        long double ref = 0;
        for (int k = 0; k < 6; ++k) {
            const auto s = static_cast<std::int64_t>(rng() % 500);
            const auto c = static_cast<std::int64_t>(rng() % 41) - 20;
            x += RadicalSum::sqrt(s) * c;
            ref += static_cast<long double>(c) * std::sqrt(static_cast<long double>(s));
        }
        if (std::fabs(static_cast<double>(ref)) < 1e-9) continue;
        CHECK(x.sign() == (ref > 0 ? 1 : -1));
    }
}

TEST_CASE("decimal output") {
    CHECK(RadicalSum(3).to_decimal(5) == "3.0000");
    CHECK(RadicalSum::sqrt(2).to_decimal(12) == "1.41421356237");
    CHECK(RadicalSum{}.to_decimal(4) == "0.000");
    CHECK((RadicalSum(-1) * 25).to_decimal(4) == "-25.00");
    CHECK(RadicalSum(12345).to_decimal(3) == "12300");
    CHECK((RadicalSum::sqrt(2) - RadicalSum(2)).to_decimal(6) == "-0.585786");
    CHECK(RadicalSum::sqrt(2).to_decimal(64).size() == 65);
}

TEST_CASE("symbolic form") {
    CHECK((RadicalSum(3) + RadicalSum::sqrt(8)).str() == "3 + 2*sqrt(2)");
    CHECK((RadicalSum::sqrt(5) - RadicalSum::sqrt(3)).str() == "-sqrt(3) + sqrt(5)");
}
