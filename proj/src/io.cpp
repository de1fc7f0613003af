#include "oscbath/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "oscbath/errors.hpp"

namespace oscbath::io {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

} // namespace

void write_bath_csv(const std::filesystem::path& path, const bath::DiscretizedBath& bath) {
    auto out = open_out(path);
    out << "k,omega_k,alpha_k\n";
    for (Eigen::Index k = 0; k < bath.n(); ++k)
        out << (k + 1) << ',' << format_full(bath.omegas[k]) << ','
            << format_full(bath.alphas[k]) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

bath::DiscretizedBath read_bath_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty bath CSV: " + path.string());

    std::vector<double> om, al;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        double vals[3];
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(row, field, c < 2 ? ',' : '\n'))
                throw IoError("malformed bath CSV row: " + line);
            try {
                vals[c] = std::stod(field);
            } catch (const std::exception&) {
                throw IoError("malformed bath CSV value: " + field);
            }
        }
        om.push_back(vals[1]);
        al.push_back(vals[2]);
    }
    if (om.empty()) throw IoError("bath CSV has no rows: " + path.string());

    bath::DiscretizedBath out;
    out.omegas = Eigen::Map<Eigen::VectorXd>(om.data(), static_cast<Eigen::Index>(om.size()));
    out.alphas = Eigen::Map<Eigen::VectorXd>(al.data(), static_cast<Eigen::Index>(al.size()));
    return out;
}

void write_modes_csv(const std::filesystem::path& path, const modes::NormalModes& nm) {
    auto out = open_out(path);
    out << "nu,omega_nu,x0_nu\n";
    for (Eigen::Index v = 0; v < nm.freqs.size(); ++v)
        out << (v + 1) << ',' << format_full(nm.freqs[v]) << ',' << format_full(nm.X(0, v))
            << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const dynamics::CovarianceTrajectory& traj) {
    auto out = open_out(path);
    out << "t,p2,q2,pq,comm\n";
    for (Eigen::Index i = 0; i < traj.times.size(); ++i)
        out << format_full(traj.times[i]) << ',' << format_full(traj.p2[i]) << ','
            << format_full(traj.q2[i]) << ',' << format_full(traj.pq[i]) << ','
            << format_full(traj.comm[i]) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace oscbath::io
