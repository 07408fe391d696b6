#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace manymatch {

using BigInt = mpz_class;

enum class Color : std::uint8_t { Red, Blue };

inline Color opposite(Color c) { return c == Color::Red ? Color::Blue : Color::Red; }

// Thrown for malformed or infeasible user input (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an internal invariant does not hold.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// True when MANYMATCH_DEBUG=1 is set; read once per process.
bool debug_enabled();

inline void require(bool cond, const char* what) {
    if (!cond) throw InvariantError(what);
}
inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvariantError(what);
}

struct GridPoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

struct Instance {
    std::int64_t delta = 0;
    std::vector<GridPoint> red;
    std::vector<GridPoint> blue;

    std::size_t n() const { return red.size() + blue.size(); }
    // Global point id: reds first, then blues.
    const GridPoint& point(std::size_t id) const {
        return id < red.size() ? red[id] : blue[id - red.size()];
    }
    Color color(std::size_t id) const { return id < red.size() ? Color::Red : Color::Blue; }
};

// Throws InputError naming the first violated constraint.
void validate(const Instance& inst);

// The real number a + b*sqrt(s).
struct RootExpr {
    BigInt a = 0;
    BigInt b = 0;
    std::int64_t s = 0;

    static RootExpr integer(BigInt v) { return {std::move(v), 0, 0}; }
    static RootExpr root(std::int64_t s) { return {0, 1, s}; }
    double approx() const;
};

std::int64_t dist2(const GridPoint& p, const GridPoint& q);

std::strong_ordering cmp_root(const RootExpr& lhs, const RootExpr& rhs);

// Sign of a + b*sqrt(p) for p >= 0, integer only.
int sign_root(const BigInt& a, const BigInt& b, const BigInt& p);

// Smallest integer k with k >= sqrt(s) * 2^t.
BigInt ceil_sqrt_scaled(std::int64_t s, long t);

int orientation(const GridPoint& p, const GridPoint& q, const GridPoint& r);

struct Segment {
    GridPoint a;
    GridPoint b;
};

// Closed segments meet, their endpoints are not all collinear, and the
// contact is more than one shared endpoint.
bool segments_properly_cross(const Segment& s1, const Segment& s2);

struct LineKey {
    std::int64_t dx = 0;  // primitive direction, dx > 0 or (dx == 0 and dy > 0)
    std::int64_t dy = 0;
    std::int64_t ax = 0;  // the lattice point p on the line with 0 <= p.d < |d|^2
    std::int64_t ay = 0;

    friend auto operator<=>(const LineKey&, const LineKey&) = default;
    // Lattice parameter of a point on this line: p = anchor + t*d.
    std::int64_t param(const GridPoint& p) const;
    GridPoint at(std::int64_t t) const { return {ax + t * dx, ay + t * dy}; }
    std::int64_t step2() const { return dx * dx + dy * dy; }
    bool contains(const GridPoint& p) const;
    std::string str() const;
};

LineKey line_key(const GridPoint& p, const GridPoint& q);

}  // namespace manymatch
