#include "oscbath/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace oscbath::analysis {

namespace {

const Eigen::VectorXd& channel_data(const dynamics::CovarianceTrajectory& traj, Channel c) {
    return c == Channel::P2 ? traj.p2 : traj.q2;
}

double channel_target(const EquilibriumMoments& eq, Channel c) {
    return c == Channel::P2 ? eq.p2 : eq.q2;
}

// Local maxima of r over the index range [i0, i1], using neighbors outside
// the range when available so window edges do not fabricate peaks.
std::vector<EnvelopePoint> local_maxima(const Eigen::VectorXd& t, const Eigen::VectorXd& r,
                                        Eigen::Index i0, Eigen::Index i1) {
    std::vector<EnvelopePoint> peaks;
    for (Eigen::Index i = std::max<Eigen::Index>(i0, 1); i <= std::min(i1, r.size() - 2); ++i) {
        if (r[i] >= r[i - 1] && r[i] >= r[i + 1] && (r[i] > r[i - 1] || r[i] > r[i + 1]))
            peaks.push_back({t[i], r[i]});
    }
    return peaks;
}

} // namespace

std::vector<EnvelopePoint> residual_envelope(const dynamics::CovarianceTrajectory& traj,
                                             double eq_value, Channel channel,
                                             const Window& window) {
    const Eigen::VectorXd& y = channel_data(traj, channel);
    const Eigen::VectorXd r = (y.array() - eq_value).abs();
    Eigen::Index i0 = 0, i1 = traj.times.size() - 1;
    while (i0 < traj.times.size() && traj.times[i0] < window.lo) ++i0;
    while (i1 >= 0 && traj.times[i1] > window.hi) --i1;
    if (i0 > i1) return {};
    return local_maxima(traj.times, r, i0, i1);
}

DecayFit fit_decay_rate(const dynamics::CovarianceTrajectory& traj, const EquilibriumMoments& eq,
                        Channel channel, const Window& window, const SystemParams& sys,
                        const OhmicSpectrum& spec, double noise_floor) {
    if (spec.eta >= 2.0 * sys.omega0)
        throw OverdampedError("fit_decay_rate: eta >= 2*omega0, no underdamped rate to extract");
    if (traj.times.size() < 3) throw WindowError("fit_decay_rate: trajectory too short");
    if (!(window.lo < window.hi) || window.lo < traj.times[0] ||
        window.hi > traj.times[traj.times.size() - 1])
        throw WindowError("fit_decay_rate: window outside trajectory range");

    const double eqv = channel_target(eq, channel);
    const double floor = std::max(noise_floor, 1e-13 * std::abs(eqv));

    // A window whose residual never rises above the floor has nothing to fit
    // (zero-coupling control runs land here).
    const Eigen::VectorXd& y = channel_data(traj, channel);
    double rmax = 0.0;
    for (Eigen::Index i = 0; i < traj.times.size(); ++i)
        if (traj.times[i] >= window.lo && traj.times[i] <= window.hi)
            rmax = std::max(rmax, std::abs(y[i] - eqv));
    if (rmax < 10.0 * floor)
        throw UnderflowError("fit_decay_rate: residual below the numerical floor in the window");

    const auto peaks = residual_envelope(traj, eqv, channel, window);
    if (peaks.size() < 3) throw WindowError("fit_decay_rate: fewer than 3 envelope maxima");

    for (const auto& p : peaks)
        if (p.r < 10.0 * floor)
            throw UnderflowError("fit_decay_rate: envelope reaches the numerical floor");

    // OLS on (t, ln r)
    const auto n = static_cast<double>(peaks.size());
    double st = 0.0, sy = 0.0;
    for (const auto& p : peaks) {
        st += p.t;
        sy += std::log(p.r);
    }
    const double tbar = st / n, ybar = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : peaks) {
        const double dt = p.t - tbar;
        sxx += dt * dt;
        sxy += dt * (std::log(p.r) - ybar);
    }
    if (!(sxx > 0.0)) throw WindowError("fit_decay_rate: degenerate envelope abscissae");
    const double slope = sxy / sxx;
    double ssr = 0.0;
    for (const auto& p : peaks) {
        const double resid = std::log(p.r) - ybar - slope * (p.t - tbar);
        ssr += resid * resid;
    }
    const double sigma2 = peaks.size() > 2 ? ssr / (n - 2.0) : 0.0;

    DecayFit fit;
    fit.rate = -slope;
    fit.rate_stderr = std::sqrt(sigma2 / sxx);
    fit.window = window;
    fit.target = eq;
    fit.n_peaks = static_cast<int>(peaks.size());
    return fit;
}

std::optional<double> equilibration_time(const dynamics::CovarianceTrajectory& traj,
                                         const EquilibriumMoments& eq, double rel_tol) {
    if (!(rel_tol > 0.0)) throw InvalidParam("equilibration_time: rel_tol must be > 0");
    if (!(eq.p2 > 0.0) || !(eq.q2 > 0.0))
        throw InvalidParam("equilibration_time: target moments must be positive");
    const Eigen::Index nt = traj.times.size();
    Eigen::Index first_bad_from_end = nt; // index after the last violation
    for (Eigen::Index i = nt - 1; i >= 0; --i) {
        const bool ok = std::abs(traj.p2[i] - eq.p2) / eq.p2 < rel_tol &&
                        std::abs(traj.q2[i] - eq.q2) / eq.q2 < rel_tol;
        if (!ok) break;
        first_bad_from_end = i;
    }
    if (first_bad_from_end == nt) return std::nullopt;
    return traj.times[first_bad_from_end];
}

std::optional<double> detect_recurrence(const dynamics::CovarianceTrajectory& traj,
                                        const EquilibriumMoments& eq) {
    const Eigen::Index nt = traj.times.size();
    if (nt < 8) return std::nullopt;
    const Eigen::VectorXd rc = ((traj.p2.array() - eq.p2).abs() / eq.p2)
                                   .max((traj.q2.array() - eq.q2).abs() / eq.q2);
    const auto peaks = local_maxima(traj.times, rc, 0, nt - 1);
    if (peaks.size() < 4) return std::nullopt;

    // Find where the envelope has decayed by 10x from its initial scale.
    const double r0 = peaks.front().r;
    std::size_t i0 = 0;
    while (i0 < peaks.size() && peaks[i0].r >= 0.1 * r0) ++i0;
    if (i0 >= peaks.size()) return std::nullopt; // never equilibrated

    // Plateau level: lower quartile of the post-decay envelope (robust
    // against the revival itself inflating the estimate).
    std::vector<double> sorted;
    for (std::size_t j = i0; j < peaks.size(); ++j) sorted.push_back(peaks[j].r);
    std::sort(sorted.begin(), sorted.end());
    const double plateau = sorted[sorted.size() / 4];
    const double threshold = 3.0 * plateau;

    // Scan only after a settled stretch of the envelope: the tail of the
    // decaying transient straddles the threshold and must not count.
    constexpr std::size_t kSettled = 12;
    std::size_t run = 0, istart = peaks.size();
    for (std::size_t j = i0; j < peaks.size(); ++j) {
        run = peaks[j].r <= threshold ? run + 1 : 0;
        if (run >= kSettled) {
            istart = j;
            break;
        }
    }
    for (std::size_t j = istart + 1; j < peaks.size(); ++j)
        if (peaks[j].r > threshold) return peaks[j].t;
    return std::nullopt;
}

} // namespace oscbath::analysis
