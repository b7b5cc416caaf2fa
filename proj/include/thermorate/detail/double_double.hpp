#ifndef THERMORATE_DETAIL_DOUBLE_DOUBLE_HPP
#define THERMORATE_DETAIL_DOUBLE_DOUBLE_HPP

#include <cmath>

namespace thermorate::detail {

// Unevaluated sum of two doubles (Dekker/Bailey double-double).  Gives
// roughly 32 significant digits, which is what the alternating series and
// the divergent-series transforms need to survive their cancellation.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
    // Accurate (Dekker) addition: survives full cancellation of the high
    // parts, unlike the sloppy single-two_sum variant.
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    double lo = s.lo + t.hi;
    dd r = quick_two_sum(s.hi, lo);
    lo = r.lo + t.lo;
    return quick_two_sum(r.hi, lo);
}

inline dd operator+(dd a, double b) { return a + dd(b); }
inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }
inline dd operator-(dd a, double b) { return a + dd(-b); }

inline dd operator*(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline dd operator*(dd a, double b) { return a * dd(b); }
inline dd operator*(double a, dd b) { return dd(a) * b; }

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * q1;
    double q2 = r.hi / b.hi;
    r = r - b * q2;
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return q + q3;
}

inline dd operator/(dd a, double b) { return a / dd(b); }

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator+=(dd& a, double b) { a = a + dd(b); return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }

inline double abs(dd a) { return std::abs(static_cast<double>(a)); }

inline dd pow_int(dd base, int e) {
    dd acc(1.0);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace thermorate::detail

#endif
