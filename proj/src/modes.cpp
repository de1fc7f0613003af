#include "oscbath/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace oscbath::modes {

namespace {

struct Poles {
    Eigen::VectorXd psq; // Omega_k^2, k = 0..N-1
    double pole(Eigen::Index anchor) const {
        return anchor == 0 ? 0.0 : psq[anchor - 1];
    }
};

void check_bath(const bath::DiscretizedBath& b) {
    if (b.n() < 1) throw InvalidParam("modes: bath must contain at least one mode");
    if (b.alphas.size() != b.omegas.size())
        throw InvalidParam("modes: omegas/alphas length mismatch");
    for (Eigen::Index k = 0; k < b.n(); ++k)
        if (!(b.omegas[k] > 0.0)) throw InvalidParam("modes: bath frequencies must be > 0");
}

// f(pole(a) + delta) with the distance to the anchoring pole entering
// exactly as delta; all other pole distances are well separated.
double secular_anchored(const SystemParams& sys, const bath::DiscretizedBath& b,
                        const Poles& p, Eigen::Index a, double delta) {
    const double pa = p.pole(a);
    double acc = pa + delta - sys.omega0 * sys.omega0;
    for (Eigen::Index k = 0; k < b.n(); ++k) {
        const double pk = p.psq[k];
        const double d = (pa - pk) + delta; // == delta when k + 1 == a
        const double a2 = b.alphas[k] * b.alphas[k];
        acc -= a2 * (1.0 / d + 1.0 / pk);
    }
    return acc;
}

// Bisection on a monotone-increasing bracket [lo, hi] in anchored-offset
// space with F(lo) < 0 <= F(hi). Runs until the bracket collapses to
// adjacent doubles, so the offset is exact to its own ulp (well past the
// 1e-13 relative tolerance the downstream formulas need).
double bisect_anchored(const SystemParams& sys, const bath::DiscretizedBath& b,
                       const Poles& p, Eigen::Index a, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi)) break;
        const double fm = secular_anchored(sys, b, p, a, mid);
        if (fm < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double g_inverse_discrete(const SystemParams& sys, const bath::DiscretizedBath& bath, double z2) {
    check_bath(bath);
    double acc = z2 - sys.omega0 * sys.omega0;
    for (Eigen::Index k = 0; k < bath.n(); ++k) {
        const double pk = bath.omegas[k] * bath.omegas[k];
        const double d = z2 - pk;
        if (std::abs(d) <= 4.0 * std::numeric_limits<double>::epsilon() * pk)
            throw PoleError("g_inverse_discrete: z^2 coincides with a bath pole");
        const double a2 = bath.alphas[k] * bath.alphas[k];
        acc -= a2 * (1.0 / d + 1.0 / pk);
    }
    return acc;
}

std::complex<double> g_inverse_discrete(const SystemParams& sys, const bath::DiscretizedBath& bath,
                                        std::complex<double> z2) {
    check_bath(bath);
    std::complex<double> acc = z2 - sys.omega0 * sys.omega0;
    for (Eigen::Index k = 0; k < bath.n(); ++k) {
        const double pk = bath.omegas[k] * bath.omegas[k];
        const std::complex<double> d = z2 - pk;
        if (std::abs(d) <= 4.0 * std::numeric_limits<double>::epsilon() * pk)
            throw PoleError("g_inverse_discrete: z^2 coincides with a bath pole");
        const double a2 = bath.alphas[k] * bath.alphas[k];
        acc -= a2 * (1.0 / d + 1.0 / pk);
    }
    return acc;
}

double g_inverse_derivative_over_2z(const SystemParams& sys, const bath::DiscretizedBath& bath,
                                    double z2) {
    (void)sys;
    double acc = 1.0;
    for (Eigen::Index k = 0; k < bath.n(); ++k) {
        const double d = z2 - bath.omegas[k] * bath.omegas[k];
        const double r = bath.alphas[k] / d;
        acc += r * r;
    }
    return acc;
}

SecularRoots solve_modes(const SystemParams& sys, const bath::DiscretizedBath& bath) {
    sys.validate();
    check_bath(bath);
    const Eigen::Index n = bath.n();

    const bool all_zero = (bath.alphas.array() == 0.0).all();
    const bool any_zero = (bath.alphas.array() == 0.0).any();
    if (any_zero && !all_zero)
        throw RootCountError("solve_modes: zero coupling on a strict subset of modes");

    Poles p;
    p.psq = bath.omegas.array().square();
    for (Eigen::Index k = 0; k + 1 < n; ++k)
        if (!(p.psq[k + 1] > p.psq[k] * (1.0 + 8.0 * std::numeric_limits<double>::epsilon())))
            throw RootCountError("solve_modes: bath frequencies not strictly increasing");

    SecularRoots out;
    out.values.resize(n + 1);
    out.anchor.resize(n + 1);
    out.offset.resize(n + 1);

    if (all_zero) {
        // Exact uncoupled spectrum: {omega0^2} merged into the bath comb.
        const double w0sq = sys.omega0 * sys.omega0;
        Eigen::Index pos = 0;
        while (pos < n && p.psq[pos] < w0sq) ++pos;
        for (Eigen::Index v = 0; v <= n; ++v) {
            if (v < pos) {
                out.anchor[v] = v + 1;
                out.offset[v] = 0.0;
                out.values[v] = p.psq[v];
            } else if (v == pos) {
                out.anchor[v] = 0;
                out.offset[v] = w0sq;
                out.values[v] = w0sq;
            } else {
                out.anchor[v] = v;
                out.offset[v] = 0.0;
                out.values[v] = p.psq[v - 1];
            }
        }
        return out;
    }

    // Upper bound for the top root: f > 0 at psq[n-1] + bare^2 + sum a^2/p.
    double coupling_sum = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
        coupling_sum += bath.alphas[k] * bath.alphas[k] / p.psq[k];
    const double top_bound = sys.omega0 * sys.omega0 + 2.0 * coupling_sum;

    for (Eigen::Index v = 0; v <= n; ++v) {
        const double left = (v == 0) ? 0.0 : p.psq[v - 1];
        const double gap = (v == n) ? top_bound : p.psq[v] - left;

        // Locate the root's half of the bracket, then anchor at the nearer
        // pole so the offset carries full relative precision.
        const double f_mid = secular_anchored(sys, bath, p, v, 0.5 * gap);

        Eigen::Index a;
        double lo, hi;
        if (f_mid >= 0.0 || v == n) {
            // root in the left half (or top bracket): anchor left pole
            a = v;
            if (f_mid >= 0.0) {
                hi = 0.5 * gap;
                lo = (v == 0) ? 0.0 : hi;
                if (v != 0) {
                    // walk toward the pole until the secular function is negative
                    bool found = false;
                    for (int j = 0; j < 400; ++j) {
                        lo *= 0.125;
                        if (secular_anchored(sys, bath, p, a, lo) < 0.0) {
                            found = true;
                            break;
                        }
                        hi = lo;
                    }
                    if (!found)
                        throw RootCountError("solve_modes: no sign change above a bath pole");
                } else if (!(secular_anchored(sys, bath, p, a, lo) < 0.0)) {
                    throw RootCountError("solve_modes: secular function not negative at x = 0");
                }
            } else {
                // top bracket with f(mid) < 0: expand upward to the bound
                lo = 0.5 * gap;
                hi = gap;
                bool found = false;
                for (int j = 0; j < 60; ++j) {
                    if (secular_anchored(sys, bath, p, a, hi) >= 0.0) {
                        found = true;
                        break;
                    }
                    lo = hi;
                    hi *= 2.0;
                }
                if (!found)
                    throw RootCountError("solve_modes: top root not bracketed");
            }
        } else {
            // root in the right half: anchor right pole, negative offsets
            a = v + 1;
            lo = -0.5 * gap;
            hi = lo;
            bool found = false;
            for (int j = 0; j < 400; ++j) {
                hi *= 0.125;
                if (secular_anchored(sys, bath, p, a, hi) >= 0.0) {
                    found = true;
                    break;
                }
                lo = hi;
            }
            if (!found) throw RootCountError("solve_modes: no sign change below a bath pole");
        }

        const double delta = bisect_anchored(sys, bath, p, a, lo, hi);
        out.anchor[v] = a;
        out.offset[v] = delta;
        out.values[v] = p.pole(a) + delta;
    }

    for (Eigen::Index v = 0; v + 1 <= n; ++v)
        if (!(out.values[v + 1] > out.values[v]))
            throw RootCountError("solve_modes: roots not strictly increasing");
    return out;
}

namespace {

// Distances x_v - Omega_k^2 for all k, using the anchored representation.
void pole_distances(const Poles& p, const SecularRoots& roots, Eigen::Index v,
                    Eigen::VectorXd& d) {
    const double pa = p.pole(roots.anchor[v]);
    const double delta = roots.offset[v];
    const Eigen::Index n = p.psq.size();
    d.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) d[k] = (pa - p.psq[k]) + delta;
}

NormalModes uncoupled_matrix(const SystemParams& sys, const bath::DiscretizedBath& bath,
                             const SecularRoots& roots) {
    const Eigen::Index m = bath.n() + 1;
    NormalModes nm;
    nm.freqs_sq = roots.values;
    nm.freqs = roots.values.array().sqrt();
    nm.X = Eigen::MatrixXd::Zero(m, m);
    // anchor 0 is the system root, anchor k >= 1 the bath oscillator k
    for (Eigen::Index v = 0; v < m; ++v) nm.X(roots.anchor[v], v) = 1.0;
    (void)sys;
    return nm;
}

} // namespace

Eigen::VectorXd mode_weights(const SystemParams& sys, const bath::DiscretizedBath& bath,
                             const SecularRoots& roots) {
    check_bath(bath);
    const Eigen::Index n = bath.n();
    if (roots.count() != n + 1) throw InvalidParam("mode_weights: root count mismatch");
    Poles p;
    p.psq = bath.omegas.array().square();

    Eigen::VectorXd w0(n + 1), d;
    const bool all_zero = (bath.alphas.array() == 0.0).all();
    for (Eigen::Index v = 0; v <= n; ++v) {
        if (all_zero) {
            w0[v] = (roots.anchor[v] == 0) ? 1.0 : 0.0;
            continue;
        }
        pole_distances(p, roots, v, d);
        double s = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double r = bath.alphas[k] / d[k];
            s += r * r;
        }
        w0[v] = 1.0 / std::sqrt(s);
    }
    (void)sys;
    return w0;
}

NormalModes mode_matrix(const SystemParams& sys, const bath::DiscretizedBath& bath,
                        const SecularRoots& roots) {
    check_bath(bath);
    const Eigen::Index n = bath.n();
    if (roots.count() != n + 1) throw InvalidParam("mode_matrix: root count mismatch");
    if ((bath.alphas.array() == 0.0).all()) return uncoupled_matrix(sys, bath, roots);

    Poles p;
    p.psq = bath.omegas.array().square();

    NormalModes nm;
    nm.freqs_sq = roots.values;
    nm.freqs = roots.values.array().sqrt();
    nm.X.resize(n + 1, n + 1);

    Eigen::VectorXd d;
    for (Eigen::Index v = 0; v <= n; ++v) {
        pole_distances(p, roots, v, d);
        double s = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (d[k] == 0.0)
                throw DegenerateModeError("mode_matrix: root coincides with a bath pole");
            const double r = bath.alphas[k] / d[k];
            s += r * r;
        }
        const double x0 = 1.0 / std::sqrt(s);
        if (!std::isfinite(x0) || x0 == 0.0)
            throw DegenerateModeError("mode_matrix: mode weight underflow");

        // Independent route to the same weight: (1/(2z)) dg^{-1}/dz at the root.
        double deriv = 1.0;
        for (Eigen::Index k = n; k-- > 0;) {
            const double r = bath.alphas[k] / d[k];
            deriv += r * r;
        }
        const double x0_alt = 1.0 / std::sqrt(deriv);
        if (std::abs(x0 - x0_alt) > 1e-10 * x0)
            throw DegenerateModeError("mode_matrix: derivative-form weight cross-check failed");

        nm.X(0, v) = x0;
        for (Eigen::Index k = 0; k < n; ++k) nm.X(k + 1, v) = bath.alphas[k] / d[k] * x0;
    }
    return nm;
}

NormalModes eig_oracle(const SystemParams& sys, const bath::DiscretizedBath& bath) {
    sys.validate();
    check_bath(bath);
    const Eigen::Index n = bath.n();
    // Extended precision: the spectrum spans ~10 decades for wide combs and
    // a double eigensolver's eps*||V|| backward error would dominate the
    // relative accuracy of the smallest eigenvalues.
    using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    MatrixXld V = MatrixXld::Zero(n + 1, n + 1);
    V(0, 0) = static_cast<long double>(bath::bare_frequency_squared(sys, bath));
    for (Eigen::Index k = 0; k < n; ++k) {
        V(0, k + 1) = bath.alphas[k];
        V(k + 1, 0) = bath.alphas[k];
        V(k + 1, k + 1) = static_cast<long double>(bath.omegas[k]) * bath.omegas[k];
    }
    Eigen::SelfAdjointEigenSolver<MatrixXld> es(V);
    if (es.info() != Eigen::Success)
        throw DegenerateModeError("eig_oracle: eigensolver failed to converge");

    NormalModes nm;
    nm.freqs_sq = es.eigenvalues().cast<double>();
    nm.freqs = nm.freqs_sq.array().max(0.0).sqrt();
    nm.X = es.eigenvectors().cast<double>();
    for (Eigen::Index v = 0; v <= n; ++v) {
        double pivot = nm.X(0, v);
        if (std::abs(pivot) < 1e-300) {
            Eigen::Index imax;
            nm.X.col(v).cwiseAbs().maxCoeff(&imax);
            pivot = nm.X(imax, v);
        }
        if (pivot < 0.0) nm.X.col(v) = -nm.X.col(v);
    }
    return nm;
}

bool IdentityReport::pass(double orth_tol, double trace_tol, double det_tol) const {
    return orthogonality_defect < orth_tol && completeness_defect < orth_tol &&
           row_completeness < orth_tol && row0_identity < orth_tol &&
           trace_residual < trace_tol && det_ratio_residual < det_tol;
}

std::vector<std::complex<double>> default_probe_points(const SystemParams& sys,
                                                       const bath::DiscretizedBath& bath) {
    const double s = sys.omega0 * sys.omega0;
    const double c = bath.omegas[bath.n() - 1];
    const double csq = c * c;
    using cd = std::complex<double>;
    return {cd{-1.0, 0.0},       cd{-s, 0.0},          cd{-0.25 * s, 0.0},
            cd{-25.0 * s, 0.0},  cd{-csq, 0.0},        cd{s, 2.0 * s},
            cd{-s, s},           cd{3.0 * s, 4.0 * s}, cd{0.5 * csq, 0.5 * csq},
            cd{0.37 * csq, s}};
}

IdentityReport verify_identities(const NormalModes& nm, const SystemParams& sys,
                                 const bath::DiscretizedBath& bath,
                                 std::span<const std::complex<double>> probes) {
    check_bath(bath);
    const Eigen::Index m = nm.X.rows();
    if (m != bath.n() + 1 || nm.X.cols() != m || nm.freqs_sq.size() != m)
        throw InvalidParam("verify_identities: inconsistent NormalModes");

    IdentityReport rep;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);
    rep.orthogonality_defect = (nm.X.transpose() * nm.X - eye).cwiseAbs().maxCoeff();
    rep.completeness_defect = (nm.X * nm.X.transpose() - eye).cwiseAbs().maxCoeff();
    rep.row_completeness = (nm.X.array().square().rowwise().sum() - 1.0).abs().maxCoeff();

    Eigen::VectorXd r0 = nm.X * nm.X.row(0).transpose();
    r0[0] -= 1.0;
    rep.row0_identity = r0.cwiseAbs().maxCoeff();

    const double trace_ref =
        bath::bare_frequency_squared(sys, bath) + bath.omegas.array().square().sum();
    rep.trace_residual = std::abs(nm.freqs_sq.sum() - trace_ref) / trace_ref;

    // Determinant identity in ratio form: log prod_k (x - Omega_k^2)
    // - log prod_v (x - omega_v^2) + log g^{-1}(x) should vanish mod 2*pi*i.
    double worst = 0.0;
    for (const std::complex<double>& x : probes) {
        std::complex<double> acc = std::log(g_inverse_discrete(sys, bath, x));
        for (Eigen::Index k = 0; k < bath.n(); ++k)
            acc += std::log(x - std::complex<double>(bath.omegas[k] * bath.omegas[k], 0.0));
        for (Eigen::Index v = 0; v < m; ++v)
            acc -= std::log(x - std::complex<double>(nm.freqs_sq[v], 0.0));
        worst = std::max(worst, std::abs(std::exp(acc) - 1.0));
    }
    rep.det_ratio_residual = worst;
    rep.probes = static_cast<int>(probes.size());
    return rep;
}

IdentityReport verify_identities(const NormalModes& nm, const SystemParams& sys,
                                 const bath::DiscretizedBath& bath) {
    const auto probes = default_probe_points(sys, bath);
    return verify_identities(nm, sys, bath, probes);
}

} // namespace oscbath::modes
