// io.hpp — CSV serialization (full double precision, byte-deterministic)
#pragma once

#include <filesystem>
#include <string>

#include "oscbath/bath.hpp"
#include "oscbath/dynamics.hpp"
#include "oscbath/modes.hpp"

namespace oscbath::io {

// Shortest exact decimal for reproducibility: %.17g.
std::string format_full(double x);

// Columns: k, omega_k, alpha_k (k is 1-based).
void write_bath_csv(const std::filesystem::path& path, const bath::DiscretizedBath& bath);
bath::DiscretizedBath read_bath_csv(const std::filesystem::path& path);

// Columns: nu, omega_nu, x0_nu (mode frequency and system weight).
void write_modes_csv(const std::filesystem::path& path, const modes::NormalModes& nm);

// Header t,p2,q2,pq,comm; one row per grid point.
void write_trajectory_csv(const std::filesystem::path& path,
                          const dynamics::CovarianceTrajectory& traj);

} // namespace oscbath::io
