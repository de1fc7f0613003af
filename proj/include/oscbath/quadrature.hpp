// quadrature.hpp — adaptive Gauss-Kronrod 7/15 integrator with forced
// initial breakpoints (for integrands with known narrow features)
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "oscbath/errors.hpp"

namespace oscbath::quad {

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    int max_segments = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0; // summed per-segment error estimate
    int segments = 0;
};

namespace detail {

// QUADPACK dqk15 abscissae/weights, positive half of [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void kronrod15(const F& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    value = resk * h;
    error = std::abs((resk - resg) * h);
}

} // namespace detail

// Integrates f over [a, b]. Breakpoints strictly inside (a, b) seed the
// initial segment list; the worst segment is bisected until the summed
// error estimate meets max(abs_tol, rel_tol*|integral|).
template <class F>
Result integrate(const F& f, double a, double b,
                 std::span<const double> breakpoints = {},
                 const Options& opt = {}) {
    if (!(b > a)) throw QuadratureError("integrate: interval must satisfy a < b");

    struct Seg {
        double a, b, value, error;
    };

    std::vector<double> edges;
    edges.push_back(a);
    for (double p : breakpoints)
        if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::vector<Seg> segs;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i + 1] > edges[i])) continue;
        Seg s{edges[i], edges[i + 1], 0.0, 0.0};
        detail::kronrod15(f, s.a, s.b, s.value, s.error);
        total += s.value;
        err += s.error;
        segs.push_back(s);
    }

    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (static_cast<int>(segs.size()) >= opt.max_segments)
            throw QuadratureError("integrate: tolerance not reached within segment budget");
        auto worst = std::max_element(segs.begin(), segs.end(),
                                      [](const Seg& x, const Seg& y) { return x.error < y.error; });
        const Seg old = *worst;
        const double mid = 0.5 * (old.a + old.b);
        if (!(mid > old.a && mid < old.b))
            throw QuadratureError("integrate: segment collapsed below machine resolution");
        Seg left{old.a, mid, 0.0, 0.0};
        Seg right{mid, old.b, 0.0, 0.0};
        detail::kronrod15(f, left.a, left.b, left.value, left.error);
        detail::kronrod15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - old.value;
        err += left.error + right.error - old.error;
        *worst = left;
        segs.push_back(right);
    }
    return {total, err, static_cast<int>(segs.size())};
}

} // namespace oscbath::quad
