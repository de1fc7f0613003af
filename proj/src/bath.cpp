#include "oscbath/bath.hpp"

#include <cmath>

#include "oscbath/spectral.hpp"

namespace oscbath::bath {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void gauss_legendre(Eigen::Index n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    nodes.resize(n);
    weights.resize(n);
    const Eigen::Index m = (n + 1) / 2;
    for (Eigen::Index i = 0; i < m; ++i) {
        // Tricomi-style initial guess, then Newton on P_n
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (Eigen::Index j = 2; j <= n; ++j) {
                const double pj = ((2.0 * static_cast<double>(j) - 1.0) * x * p1 -
                                   (static_cast<double>(j) - 1.0) * p0) /
                                  static_cast<double>(j);
                p0 = p1;
                p1 = pj;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        nodes[i] = -x; // ascending order
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

DiscretizedBath discretize(const OhmicSpectrum& spec, Eigen::Index n, Scheme scheme) {
    if (n < 1) throw InvalidParam("discretize: n must be >= 1");
    spec.validate();

    DiscretizedBath out;
    out.omegas.resize(n);
    out.alphas.resize(n);
    if (scheme == Scheme::Midpoint) {
        const double d = spec.cutoff / static_cast<double>(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = (static_cast<double>(k) + 0.5) * d;
            out.omegas[k] = w;
            out.alphas[k] = std::sqrt((2.0 / kPi) * spectral::j_value(spec, w) * w * d);
        }
    } else {
        Eigen::VectorXd x, wts;
        gauss_legendre(n, x, wts);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = 0.5 * spec.cutoff * (x[k] + 1.0);
            const double wk = 0.5 * spec.cutoff * wts[k];
            out.omegas[k] = w;
            out.alphas[k] = std::sqrt((2.0 / kPi) * spectral::j_value(spec, w) * w * wk);
        }
    }
    return out;
}

DiscretizedBath uncoupled(double cutoff, Eigen::Index n) {
    if (n < 1) throw InvalidParam("uncoupled: n must be >= 1");
    if (!(cutoff > 0.0)) throw InvalidParam("uncoupled: cutoff must be > 0");
    DiscretizedBath out;
    const double d = cutoff / static_cast<double>(n);
    out.omegas = Eigen::VectorXd::LinSpaced(n, 0.5 * d, (static_cast<double>(n) - 0.5) * d);
    out.alphas = Eigen::VectorXd::Zero(n);
    return out;
}

double bare_frequency_squared(const SystemParams& sys, const DiscretizedBath& bath) {
    double acc = sys.omega0 * sys.omega0;
    for (Eigen::Index k = 0; k < bath.n(); ++k) {
        const double r = bath.alphas[k] / bath.omegas[k];
        acc += r * r;
    }
    return acc;
}

double recurrence_estimate(const DiscretizedBath& bath) {
    if (bath.n() < 2) throw InvalidParam("recurrence_estimate: need at least 2 modes");
    double gap = bath.omegas[1] - bath.omegas[0];
    for (Eigen::Index k = 1; k + 1 < bath.n(); ++k)
        gap = std::min(gap, bath.omegas[k + 1] - bath.omegas[k]);
    return 2.0 * kPi / gap;
}

} // namespace oscbath::bath
