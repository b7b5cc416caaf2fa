#ifndef THERMORATE_DETAIL_ADAPTIVE_HPP
#define THERMORATE_DETAIL_ADAPTIVE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace thermorate::detail {

// Nested-in-spirit Gauss-Legendre pair: the 15-point value is the estimate,
// |GL15 - GL7| the local error.  Nodes/weights to full double precision.
inline constexpr double kGL7X[7] = {
    -9.49107912342758486e-01, -7.41531185599394460e-01,
    -4.05845151377397184e-01, 0.0,
    4.05845151377397184e-01,  7.41531185599394460e-01,
    9.49107912342758486e-01};
inline constexpr double kGL7W[7] = {
    1.29484966168870647e-01, 2.79705391489276589e-01,
    3.81830050505118312e-01, 4.17959183673468959e-01,
    3.81830050505118312e-01, 2.79705391489276589e-01,
    1.29484966168870647e-01};
inline constexpr double kGL15X[15] = {
    -9.87992518020485377e-01, -9.37273392400705951e-01,
    -8.48206583410427206e-01, -7.24417731360170070e-01,
    -5.70972172608538830e-01, -3.94151347077563385e-01,
    -2.01194093997434514e-01, 0.0,
    2.01194093997434514e-01,  3.94151347077563385e-01,
    5.70972172608538830e-01,  7.24417731360170070e-01,
    8.48206583410427206e-01,  9.37273392400705951e-01,
    9.87992518020485377e-01};
inline constexpr double kGL15W[15] = {
    3.07532419961186465e-02, 7.03660474881080689e-02,
    1.07159220467171773e-01, 1.39570677926153908e-01,
    1.66269205816993781e-01, 1.86161000015561878e-01,
    1.98431485327111246e-01, 2.02578241925560898e-01,
    1.98431485327111246e-01, 1.86161000015561878e-01,
    1.66269205816993781e-01, 1.39570677926153908e-01,
    1.07159220467171773e-01, 7.03660474881080689e-02,
    3.07532419961186465e-02};

struct PanelResult {
    double value = 0.0;
    double error = 0.0;
};

template <class F>
PanelResult integrate_panel(const F& f, double a, double b) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double coarse = 0.0;
    for (int i = 0; i < 7; ++i) coarse += kGL7W[i] * f(mid + half * kGL7X[i]);
    double fine = 0.0;
    for (int i = 0; i < 15; ++i) fine += kGL15W[i] * f(mid + half * kGL15X[i]);
    coarse *= half;
    fine *= half;
    return {fine, std::abs(fine - coarse)};
}

struct AdaptiveResult {
    double value = 0.0;
    double abs_err = 0.0;
    long evaluations = 0;
    bool converged = false;
};

struct Segment {
    std::function<double(double)> f;
    double a;
    double b;
};

// Globally adaptive bisection over a list of segments: always split the
// panel with the largest error estimate.  Deterministic tie-breaking via
// insertion order.
inline AdaptiveResult adaptive_integrate(const std::vector<Segment>& segments,
                                         double rel_tol, double abs_tol,
                                         long max_evals) {
    struct Panel {
        double value, error, a, b;
        std::size_t seg;
        std::uint64_t id;
        bool operator<(const Panel& o) const {
            if (error != o.error) return error < o.error;
            return id > o.id;
        }
    };

    AdaptiveResult out;
    std::priority_queue<Panel> heap;
    std::uint64_t next_id = 0;
    double total = 0.0, total_err = 0.0;

    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& seg = segments[s];
        PanelResult p = integrate_panel(seg.f, seg.a, seg.b);
        out.evaluations += 22;
        heap.push({p.value, p.error, seg.a, seg.b, s, next_id++});
        total += p.value;
        total_err += p.error;
    }

    while (total_err > rel_tol * std::abs(total) + abs_tol &&
           out.evaluations + 44 <= max_evals) {
        Panel worst = heap.top();
        if (worst.error <= 0.0) break;
        heap.pop();
        total -= worst.value;
        total_err -= worst.error;
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; accept as is.
            total += worst.value;
            heap.push(worst);
            break;
        }
        const auto& f = segments[worst.seg].f;
        PanelResult left = integrate_panel(f, worst.a, mid);
        PanelResult right = integrate_panel(f, mid, worst.b);
        out.evaluations += 44;
        heap.push({left.value, left.error, worst.a, mid, worst.seg, next_id++});
        heap.push({right.value, right.error, mid, worst.b, worst.seg, next_id++});
        total += left.value + right.value;
        total_err += left.error + right.error;
    }

    // Final pass: re-accumulate from the surviving panels in a fixed order
    // so the result does not carry the drift of the running totals.
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) {
        if (x.seg != y.seg) return x.seg < y.seg;
        return x.a < y.a;
    });
    double value = 0.0, err = 0.0;
    for (const Panel& p : panels) {
        value += p.value;
        err += p.error;
    }
    out.value = value;
    out.abs_err = err;
    out.converged = err <= rel_tol * std::abs(value) + abs_tol;
    return out;
}

}  // namespace thermorate::detail

#endif
