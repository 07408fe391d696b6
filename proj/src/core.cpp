#include "manymatch/core.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

namespace manymatch {

bool debug_enabled() {
    static const bool on = [] {
        const char* v = std::getenv("MANYMATCH_DEBUG");
        return v != nullptr && std::string(v) == "1";
    }();
    return on;
}

void validate(const Instance& inst) {
    if (inst.delta < 1) throw InputError("delta must be a positive integer");
    if (inst.red.empty()) throw InputError("red set is empty");
    if (inst.blue.empty()) throw InputError("blue set is empty");
    std::set<GridPoint> seen;
    auto check = [&](const std::vector<GridPoint>& pts, const char* name) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& p = pts[i];
            if (p.x < 1 || p.x > inst.delta || p.y < 1 || p.y > inst.delta) {
                std::ostringstream os;
                os << name << "[" << i << "] = (" << p.x << "," << p.y << ") outside [1," << inst.delta
                   << "]^2";
                throw InputError(os.str());
            }
            if (!seen.insert(p).second) {
                std::ostringstream os;
                os << name << "[" << i << "] = (" << p.x << "," << p.y << ") is a duplicate point";
                throw InputError(os.str());
            }
        }
    };
    check(inst.red, "red");
    check(inst.blue, "blue");
}

double RootExpr::approx() const { return a.get_d() + b.get_d() * std::sqrt(static_cast<double>(s)); }

std::int64_t dist2(const GridPoint& p, const GridPoint& q) {
    const std::int64_t dx = p.x - q.x;
    const std::int64_t dy = p.y - q.y;
    return dx * dx + dy * dy;
}


int sign_root(const BigInt& a, const BigInt& b, const BigInt& p) {
    const int sa = sgn(a);
    const int sb = (p == 0) ? 0 : sgn(b);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // Opposite signs: compare a^2 with b^2 p.
    const BigInt lhs = a * a;
    const BigInt rhs = b * b * p;
    const int c = cmp(lhs, rhs);
    return c == 0 ? 0 : (c > 0 ? sa : sb);
}

std::strong_ordering cmp_root(const RootExpr& lhs, const RootExpr& rhs) {
    // Decide c + sqrt(P) vs sqrt(Q) with c = a1 - a2, P = b1^2 s1, Q = b2^2 s2.
    const BigInt c = lhs.a - rhs.a;
    const BigInt P = lhs.b * lhs.b * lhs.s;
    const BigInt Q = rhs.b * rhs.b * rhs.s;
    const int sx = sign_root(c, 1, P);
    if (sx < 0) return std::strong_ordering::less;
    if (sx == 0) return Q == 0 ? std::strong_ordering::equal : std::strong_ordering::less;
    // Both sides non-negative: compare squares, (c^2 + P - Q) + 2c sqrt(P) vs 0.
    const BigInt d = c * c + P - Q;
    const BigInt f = 2 * c;
    const int s = sign_root(d, f, P);
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

BigInt ceil_sqrt_scaled(std::int64_t s, long t) {
    if (s == 0) return 0;
    BigInt n = s;
    if (t >= 0) {
        n <<= static_cast<mp_bitcnt_t>(2 * t);
        BigInt r = sqrt(n);
        if (r * r < n) r += 1;
        return r;
    }
    BigInt r = sqrt(n);
    if (r * r < n) r += 1;
    BigInt q;
    mpz_cdiv_q_2exp(q.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(-t));
    return q;
}

int orientation(const GridPoint& p, const GridPoint& q, const GridPoint& r) {
    const __int128 v = static_cast<__int128>(q.x - p.x) * (r.y - p.y) -
                       static_cast<__int128>(q.y - p.y) * (r.x - p.x);
    return (v > 0) - (v < 0);
}

static bool on_segment(const GridPoint& a, const GridPoint& b, const GridPoint& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_properly_cross(const Segment& s1, const Segment& s2) {
    const auto &a = s1.a, &b = s1.b, &c = s2.a, &d = s2.b;
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0) return false;
    if (a == c || a == d || b == c || b == d) return false;
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

LineKey line_key(const GridPoint& p, const GridPoint& q) {
    if (p == q) throw std::invalid_argument("line_key: coincident points");
    std::int64_t dx = q.x - p.x;
    std::int64_t dy = q.y - p.y;
    const std::int64_t g = std::gcd(dx < 0 ? -dx : dx, dy < 0 ? -dy : dy);
    dx /= g;
    dy /= g;
    if (dx < 0 || (dx == 0 && dy < 0)) {
        dx = -dx;
        dy = -dy;
    }
    const std::int64_t len2 = dx * dx + dy * dy;
    const std::int64_t t = floor_div(p.x * dx + p.y * dy, len2);
    return LineKey{dx, dy, p.x - t * dx, p.y - t * dy};
}

std::int64_t LineKey::param(const GridPoint& p) const {
    return ((p.x - ax) * dx + (p.y - ay) * dy) / step2();
}

bool LineKey::contains(const GridPoint& p) const { return (p.x - ax) * dy - (p.y - ay) * dx == 0; }

std::string LineKey::str() const {
    std::ostringstream os;
    os << "d=(" << dx << "," << dy << ")@(" << ax << "," << ay << ")";
    return os.str();
}

}  // namespace manymatch
