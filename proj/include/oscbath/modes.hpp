// modes.hpp — normal-mode problem for the star-coupled oscillator system:
// interlaced secular roots, orthogonal mode matrix, algebraic identities
#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "oscbath/bath.hpp"
#include "oscbath/params.hpp"

namespace oscbath::modes {

// Squared normal-mode frequencies as interlaced roots of the secular
// function. Each root is stored relative to an anchoring pole so that the
// distance to its nearest bath frequency keeps full relative precision
// (needed for the mode-vector denominators):
//   value[v] = pole_value(anchor[v]) + offset[v]
// anchor 0 denotes the origin x = 0; anchor k in [1, N] denotes Omega_k^2.
struct SecularRoots {
    Eigen::VectorXd values;           // omega_v^2, strictly increasing, length N+1
    std::vector<Eigen::Index> anchor; // anchoring pole per root
    Eigen::VectorXd offset;           // value - anchor pole

    Eigen::Index count() const { return values.size(); }
};

// Secular function of x = z^2:
//   f(x) = x - omega0^2 - sum_k alpha_k^2 (1/(x - Omega_k^2) + 1/Omega_k^2)
// Throws PoleError when x coincides with a bath pole to machine tolerance.
double g_inverse_discrete(const SystemParams& sys, const bath::DiscretizedBath& bath, double z2);
std::complex<double> g_inverse_discrete(const SystemParams& sys, const bath::DiscretizedBath& bath,
                                        std::complex<double> z2);

// d g^{-1}/dz = 2z (1 + sum_k alpha_k^2/(z^2 - Omega_k^2)^2), as a function
// of x = z^2 with the 2z factor stripped: returns (1/(2z)) dg^{-1}/dz.
double g_inverse_derivative_over_2z(const SystemParams& sys, const bath::DiscretizedBath& bath,
                                    double z2);

// All N+1 roots of the secular function: one in (0, Omega_1^2), one in each
// (Omega_k^2, Omega_{k+1}^2), one above Omega_N^2 (bounded via the trace).
// Bisection on guaranteed sign changes, refined to 1e-13 relative in the
// anchored offset. All-zero couplings return the exact uncoupled spectrum;
// a zero coupling on a strict subset (or duplicate bath frequencies) throws
// RootCountError.
SecularRoots solve_modes(const SystemParams& sys, const bath::DiscretizedBath& bath);

struct NormalModes {
    Eigen::VectorXd freqs_sq; // omega_v^2, ascending
    Eigen::VectorXd freqs;    // omega_v
    Eigen::MatrixXd X;        // (N+1)x(N+1); rows: oscillator i (0 = system), cols: mode v
};

// Mode weights X_{0v} only (row 0 of X), O(N^2) time and O(N) memory.
Eigen::VectorXd mode_weights(const SystemParams& sys, const bath::DiscretizedBath& bath,
                             const SecularRoots& roots);

// Full orthogonal matrix from the root set:
//   X_{0v} = 1/sqrt(1 + sum_k alpha_k^2/(Omega_k^2 - omega_v^2)^2),
//   X_{kv} = alpha_k/(omega_v^2 - Omega_k^2) X_{0v},
// sign convention X_{0v} > 0. Cross-checks X_{0v} against the derivative
// form ((1/(2z)) dg^{-1}/dz)^{-1/2} at z = omega_v to 1e-10.
NormalModes mode_matrix(const SystemParams& sys, const bath::DiscretizedBath& bath,
                        const SecularRoots& roots);

// Independent oracle: dense symmetric eigensolve of the arrowhead dynamical
// matrix V (V00 = bare frequency^2, V0k = alpha_k, Vkk = Omega_k^2).
NormalModes eig_oracle(const SystemParams& sys, const bath::DiscretizedBath& bath);

struct IdentityReport {
    double orthogonality_defect = 0.0;  // max |X^T X - I|
    double completeness_defect = 0.0;   // max |X X^T - I|
    double row_completeness = 0.0;      // max_k |sum_v X_kv^2 - 1|
    double row0_identity = 0.0;         // max_i |sum_v X_0v X_iv - delta_i0|
    double trace_residual = 0.0;        // relative defect of sum omega_v^2
    double det_ratio_residual = 0.0;    // max over probes of |prod-form * sum-form - 1|
    int probes = 0;

    bool pass(double orth_tol = 1e-8, double trace_tol = 1e-10, double det_tol = 1e-10) const;
};

// Checks orthogonality/completeness, the row-0 delta identity, the trace
// identity, and the determinant identity in ratio form (product
// representation vs 1/secular-sum, compared in log space) at probe points
// off the real spectrum.
IdentityReport verify_identities(const NormalModes& nm, const SystemParams& sys,
                                 const bath::DiscretizedBath& bath,
                                 std::span<const std::complex<double>> probes);
IdentityReport verify_identities(const NormalModes& nm, const SystemParams& sys,
                                 const bath::DiscretizedBath& bath);

// The default 10 probe points (negative real and complex), scaled to the
// problem's frequency range.
std::vector<std::complex<double>> default_probe_points(const SystemParams& sys,
                                                       const bath::DiscretizedBath& bath);

} // namespace oscbath::modes
