#include "oscbath/dynamics.hpp"

#include <cmath>

#include "oscbath/spectral.hpp"

namespace oscbath::dynamics {

namespace {

double occ_p(double w, double beta, Occupation model) {
    return model == Occupation::Quantum ? 0.5 * w * coth(0.5 * beta * w) : 1.0 / beta;
}

double occ_q(double w, double beta, Occupation model) {
    return model == Occupation::Quantum ? coth(0.5 * beta * w) / (2.0 * w) : 1.0 / (beta * w * w);
}

void check_grid(const Eigen::VectorXd& t) {
    if (t.size() == 0) throw GridError("trajectory: empty time grid");
    if (!(t[0] >= 0.0)) throw GridError("trajectory: grid must start at t >= 0");
    for (Eigen::Index i = 0; i + 1 < t.size(); ++i)
        if (!(t[i + 1] > t[i])) throw GridError("trajectory: grid must be strictly increasing");
}

// Mode-space coefficient vectors for one block of time points:
// columns c_v = X_0v cos(w_v t), s_v = X_0v sin(w_v t)/w_v, sb_v = X_0v w_v sin.
void fill_mode_columns(const modes::NormalModes& nm, const Eigen::VectorXd& t, Eigen::Index j0,
                       Eigen::Index cols, Eigen::MatrixXd& C, Eigen::MatrixXd& S,
                       Eigen::MatrixXd& Sb) {
    const Eigen::ArrayXd w0 = nm.X.row(0).transpose().array();
    const Eigen::ArrayXd w = nm.freqs.array();
    for (Eigen::Index j = 0; j < cols; ++j) {
        const Eigen::ArrayXd phase = w * t[j0 + j];
        const Eigen::ArrayXd cs = phase.cos();
        const Eigen::ArrayXd sn = phase.sin();
        C.col(j) = (w0 * cs).matrix();
        S.col(j) = (w0 * sn / w).matrix();
        Sb.col(j) = (w0 * sn * w).matrix();
    }
}

} // namespace

ThermalOccupations thermal_occupations(const SystemParams& sys, const bath::DiscretizedBath& bath,
                                       Occupation model) {
    sys.validate();
    ThermalOccupations occ;
    const Eigen::Index n = bath.n();
    occ.p2.resize(n + 1);
    occ.q2.resize(n + 1);
    occ.p2[0] = occ_p(sys.omega0, sys.beta, model);
    occ.q2[0] = occ_q(sys.omega0, sys.beta, model);
    for (Eigen::Index k = 0; k < n; ++k) {
        occ.p2[k + 1] = occ_p(bath.omegas[k], sys.beta, model);
        occ.q2[k + 1] = occ_q(bath.omegas[k], sys.beta, model);
    }
    return occ;
}

PropagatorCoefficients propagator_coefficients(const modes::NormalModes& nm, double t) {
    if (!(t >= 0.0)) throw GridError("propagator_coefficients: t must be >= 0");
    const Eigen::ArrayXd w0 = nm.X.row(0).transpose().array();
    const Eigen::ArrayXd w = nm.freqs.array();
    const Eigen::ArrayXd phase = w * t;
    const Eigen::ArrayXd cs = phase.cos();
    const Eigen::ArrayXd sn = phase.sin();

    PropagatorCoefficients out;
    out.t = t;
    out.xc = nm.X * (w0 * cs).matrix();
    out.xs = nm.X * (w0 * sn / w).matrix();
    out.xbars = nm.X * (w0 * sn * w).matrix();
    return out;
}

CovariancePoint evolved_covariance(const modes::NormalModes& nm, const ThermalOccupations& occ,
                                   double t) {
    const PropagatorCoefficients pc = propagator_coefficients(nm, t);
    const Eigen::ArrayXd xc = pc.xc.array(), xs = pc.xs.array(), xb = pc.xbars.array();
    const Eigen::ArrayXd wp = occ.p2.array(), wq = occ.q2.array();

    CovariancePoint out;
    out.p2 = (xc.square() * wp + xb.square() * wq).sum();
    out.q2 = (xc.square() * wq + xs.square() * wp).sum();
    out.pq = (xc * xs * wp - xb * xc * wq).sum();
    out.comm = (xc.square() + xb * xs).sum();
    return out;
}

CovarianceTrajectory trajectory(const modes::NormalModes& nm, const ThermalOccupations& occ,
                                const Eigen::VectorXd& t_grid, const TrajectoryOptions& opt) {
    check_grid(t_grid);
    const Eigen::Index m = nm.X.rows();
    if (occ.p2.size() != m || occ.q2.size() != m)
        throw InvalidParam("trajectory: occupation arrays do not match mode count");

    const Eigen::Index nt = t_grid.size();
    CovarianceTrajectory out;
    out.times = t_grid;
    out.p2.resize(nt);
    out.q2.resize(nt);
    out.pq.resize(nt);
    out.comm.resize(nt);
    out.recurrence_warning = t_grid[nt - 1] >= opt.recurrence_horizon;

    const bool gram = opt.engine == Engine::Gram ||
                      (opt.engine == Engine::Auto && m > 401);
    const Eigen::Index block = std::max<Eigen::Index>(1, opt.block);

    Eigen::MatrixXd Mp, Mq, Mi;
    if (gram) {
        Mp = nm.X.transpose() * occ.p2.asDiagonal() * nm.X;
        Mq = nm.X.transpose() * occ.q2.asDiagonal() * nm.X;
        Mi = nm.X.transpose() * nm.X;
    }

    Eigen::MatrixXd C(m, block), S(m, block), Sb(m, block);
    for (Eigen::Index j0 = 0; j0 < nt; j0 += block) {
        const Eigen::Index cols = std::min(block, nt - j0);
        fill_mode_columns(nm, t_grid, j0, cols, C, S, Sb);
        const auto Cb = C.leftCols(cols).array();
        const auto Sc = S.leftCols(cols).array();
        const auto Sbb = Sb.leftCols(cols).array();

        if (gram) {
            const Eigen::MatrixXd MpC = Mp * C.leftCols(cols);
            const Eigen::MatrixXd MpS = Mp * S.leftCols(cols);
            const Eigen::MatrixXd MqC = Mq * C.leftCols(cols);
            const Eigen::MatrixXd MqSb = Mq * Sb.leftCols(cols);
            const Eigen::MatrixXd MiC = Mi * C.leftCols(cols);
            const Eigen::MatrixXd MiS = Mi * S.leftCols(cols);
            out.p2.segment(j0, cols) = ((Cb * MpC.array()).colwise().sum() +
                                        (Sbb * MqSb.array()).colwise().sum())
                                           .matrix()
                                           .transpose();
            out.q2.segment(j0, cols) = ((Cb * MqC.array()).colwise().sum() +
                                        (Sc * MpS.array()).colwise().sum())
                                           .matrix()
                                           .transpose();
            out.pq.segment(j0, cols) = ((Cb * MpS.array()).colwise().sum() -
                                        (Sbb * MqC.array()).colwise().sum())
                                           .matrix()
                                           .transpose();
            out.comm.segment(j0, cols) = ((Cb * MiC.array()).colwise().sum() +
                                          (Sbb * MiS.array()).colwise().sum())
                                             .matrix()
                                             .transpose();
        } else {
            const Eigen::MatrixXd XC = nm.X * C.leftCols(cols);
            const Eigen::MatrixXd XS = nm.X * S.leftCols(cols);
            const Eigen::MatrixXd XSb = nm.X * Sb.leftCols(cols);
            const auto xc = XC.array();
            const auto xs = XS.array();
            const auto xb = XSb.array();
            const Eigen::ArrayXd wp = occ.p2.array(), wq = occ.q2.array();
            out.p2.segment(j0, cols) = ((xc.square().colwise() * wp).colwise().sum() +
                                        (xb.square().colwise() * wq).colwise().sum())
                                           .matrix()
                                           .transpose();
            out.q2.segment(j0, cols) = ((xc.square().colwise() * wq).colwise().sum() +
                                        (xs.square().colwise() * wp).colwise().sum())
                                           .matrix()
                                           .transpose();
            out.pq.segment(j0, cols) = (((xc * xs).colwise() * wp).colwise().sum() -
                                        ((xb * xc).colwise() * wq).colwise().sum())
                                           .matrix()
                                           .transpose();
            out.comm.segment(j0, cols) =
                (xc.square().colwise().sum() + (xb * xs).colwise().sum()).matrix().transpose();
        }
    }
    return out;
}

std::pair<double, double> asymptotic_coefficients(const SystemParams& sys,
                                                  const OhmicSpectrum& spec,
                                                  const bath::DiscretizedBath& bath,
                                                  Eigen::Index k, double t) {
    if (k < 1 || k > bath.n()) throw IndexError("asymptotic_coefficients: k out of range");
    const double wk = bath.omegas[k - 1];
    const double ak = bath.alphas[k - 1];
    const std::complex<double> g = spectral::g_boundary(sys, spec, wk);
    const double c = std::cos(wk * t), s = std::sin(wk * t);
    const double xc = ak * (g.real() * c - g.imag() * s);
    const double xbars = ak * wk * (g.real() * s + g.imag() * c);
    return {xc, xbars};
}

double stationary_p2(const SystemParams& sys, const OhmicSpectrum& spec,
                     const bath::DiscretizedBath& bath, StationaryForm form,
                     const quad::Options& opt) {
    if (form == StationaryForm::Integral) return spectral::equilibrium_moments(sys, spec, opt).p2;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < bath.n(); ++k) {
        const double wk = bath.omegas[k];
        const std::complex<double> g = spectral::g_boundary(sys, spec, wk);
        acc += bath.alphas[k] * bath.alphas[k] * 0.5 * wk * coth(0.5 * sys.beta * wk) *
               std::norm(g);
    }
    return acc;
}

EquilibriumMoments finite_bath_moments(const SystemParams& sys, const bath::DiscretizedBath& bath,
                                       const modes::SecularRoots& roots, Occupation model) {
    const Eigen::VectorXd w0 = modes::mode_weights(sys, bath, roots);
    EquilibriumMoments out;
    for (Eigen::Index v = 0; v < roots.count(); ++v) {
        const double w = std::sqrt(roots.values[v]);
        const double x2 = w0[v] * w0[v];
        out.p2 += x2 * occ_p(w, sys.beta, model);
        out.q2 += x2 * occ_q(w, sys.beta, model);
    }
    return out;
}

EquilibriumMoments mode_thermal_moments(const modes::NormalModes& nm, double beta,
                                        Occupation model) {
    if (!(beta > 0.0)) throw InvalidParam("mode_thermal_moments: beta must be > 0");
    EquilibriumMoments out;
    for (Eigen::Index v = 0; v < nm.freqs.size(); ++v) {
        const double x2 = nm.X(0, v) * nm.X(0, v);
        out.p2 += x2 * occ_p(nm.freqs[v], beta, model);
        out.q2 += x2 * occ_q(nm.freqs[v], beta, model);
    }
    return out;
}

} // namespace oscbath::dynamics
