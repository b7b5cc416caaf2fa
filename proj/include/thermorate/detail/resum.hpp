#ifndef THERMORATE_DETAIL_RESUM_HPP
#define THERMORATE_DETAIL_RESUM_HPP

#include <cmath>
#include <vector>

#include "thermorate/detail/double_double.hpp"

namespace thermorate::detail {

// Nonlinear sequence transformations for alternating (asymptotically
// divergent) series, computed in double-double arithmetic.  Both take the
// raw terms a_k and return the order-k estimates X_k of the limit.
//
// Weniger's S transformation with the delta remainder (omega_n = a_{n+1});
// recursion coefficients follow the standard factorial-series derivation.
inline std::vector<dd> weniger_delta(const std::vector<dd>& terms,
                                     double beta = 1.0) {
    int nmax = int(terms.size()) - 2;
    if (nmax < 1) return {};
    std::vector<dd> sums(nmax + 2);
    dd s(0.0);
    for (int n = 0; n <= nmax + 1; ++n) {
        s += terms[n];
        sums[n] = s;
    }
    std::vector<dd> num(nmax + 1), den(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        num[n] = sums[n] / terms[n + 1];
        den[n] = dd(1.0) / terms[n + 1];
    }
    std::vector<dd> out;
    for (int k = 1; k <= nmax; ++k) {
        for (int n = 0; n <= nmax - k; ++n) {
            // exact small-integer products; division carried in dd
            double a = (beta + n + k - 1) * (beta + n + k - 2);
            double b = (beta + n + 2 * k - 2) * (beta + n + 2 * k - 3);
            dd c = b != 0.0 ? dd(a) / dd(b) : dd(1.0);
            num[n] = num[n + 1] - c * num[n];
            den[n] = den[n + 1] - c * den[n];
        }
        out.push_back(den[0].hi != 0.0 || den[0].lo != 0.0
                          ? num[0] / den[0]
                          : dd(std::nan("")));
    }
    return out;
}

// Levin's u transformation (omega_n = (beta+n) a_n).
inline std::vector<dd> levin_u(const std::vector<dd>& terms,
                               double beta = 1.0) {
    int nmax = int(terms.size()) - 1;
    if (nmax < 1) return {};
    std::vector<dd> sums(nmax + 1);
    dd s(0.0);
    for (int n = 0; n <= nmax; ++n) {
        s += terms[n];
        sums[n] = s;
    }
    std::vector<dd> num(nmax + 1), den(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        dd w = dd(beta + n) * terms[n];
        num[n] = sums[n] / w;
        den[n] = dd(1.0) / w;
    }
    std::vector<dd> out;
    for (int k = 1; k <= nmax; ++k) {
        for (int n = 0; n <= nmax - k; ++n) {
            // c = (beta+n)(beta+n+k-1)^{k-2} / (beta+n+k)^{k-1}, in dd: the
            // transforms are sensitive to coefficient noise at high order
            dd c(1.0);
            if (k >= 2) {
                c = dd(double(beta + n)) * pow_int(dd(double(beta + n + k - 1)), k - 2) /
                    pow_int(dd(double(beta + n + k)), k - 1);
            }
            num[n] = num[n + 1] - c * num[n];
            den[n] = den[n + 1] - c * den[n];
        }
        out.push_back(den[0].hi != 0.0 || den[0].lo != 0.0
                          ? num[0] / den[0]
                          : dd(std::nan("")));
    }
    return out;
}

struct ResummedValue {
    double value = 0.0;
    double abs_err = 0.0;
    int order = 0;
};

// Cross-validated estimate: for each transform order the score is the
// stabilization gap |X_k - X_{k-1}| plus the disagreement between the two
// transforms at the same order; the best-scoring entry wins.
inline ResummedValue resum_alternating(const std::vector<dd>& terms) {
    auto w = weniger_delta(terms);
    auto u = levin_u(terms);
    ResummedValue best;
    best.abs_err = std::numeric_limits<double>::infinity();
    std::size_t m = std::min(w.size(), u.size());
    for (std::size_t k = 2; k < m; ++k) {
        const std::vector<dd>* seqs[2] = {&w, &u};
        for (int which = 0; which < 2; ++which) {
            const auto& x = *seqs[which];
            const auto& y = *seqs[1 - which];
            double gap = abs(x[k] - x[k - 1]);
            double cross = abs(x[k] - y[k]);
            double score = gap + cross;
            if (std::isnan(score)) continue;
            if (score < best.abs_err) {
                best.abs_err = score;
                best.value = double(x[k]);
                best.order = int(k);
            }
        }
    }
    return best;
}

}  // namespace thermorate::detail

#endif
