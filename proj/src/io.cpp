#include "gso/io.hpp"

#include "gso/error.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gso::io {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error("write failed: " + path);
}

std::string envelope_csv(const EnvelopeTrajectory& traj) {
    std::ostringstream os;
    os << "t,re_eps,im_eps,re_eps_dot,im_eps_dot,omega_sq,wronskian_residual\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << fmt17(traj.times[i]) << ',' << fmt17(traj.eps[i].real()) << ',' << fmt17(traj.eps[i].imag()) << ','
           << fmt17(traj.eps_dot[i].real()) << ',' << fmt17(traj.eps_dot[i].imag()) << ',' << fmt17(traj.omega_sq[i]) << ','
           << fmt17(traj.wronskian_residual[i]) << '\n';
    }
    return os.str();
}

std::string wavefunction_csv(const GridWavefunction& psi) {
    std::ostringstream os;
    os << "x,re_psi,im_psi,abs2\n";
    for (std::size_t k = 0; k < psi.values.size(); ++k) {
        const cplx v = psi.values[k];
        os << fmt17(psi.grid.x(k)) << ',' << fmt17(v.real()) << ',' << fmt17(v.imag()) << ',' << fmt17(std::norm(v))
           << '\n';
    }
    return os.str();
}

std::string green_csv(const std::vector<GreenSample>& rows) {
    std::ostringstream os;
    os << "x1,x2,re_G,im_G\n";
    for (const auto& r : rows)
        os << fmt17(r.x1) << ',' << fmt17(r.x2) << ',' << fmt17(r.value.real()) << ',' << fmt17(r.value.imag())
           << '\n';
    return os.str();
}

nlohmann::json to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json state_json(const FockState& s) {
    nlohmann::json j;
    j["kappa"] = s.kappa;
    if (s.params) {
        j["params"] = {{"z", to_json(s.params->z)},
                       {"u", to_json(s.params->u)},
                       {"v", to_json(s.params->v)},
                       {"w", to_json(s.params->w)}};
    } else {
        j["params"] = nullptr;
    }
    nlohmann::json c = nlohmann::json::array();
    for (const cplx& a : s.coeffs) c.push_back(to_json(a));
    j["coeffs"] = c;
    j["tail_bound"] = s.tail_bound;
    if (s.eigenvalue) j["eigenvalue"] = to_json(*s.eigenvalue);
    return j;
}

nlohmann::json matrix_json(const Mat3& m) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& row : m) a.push_back({row[0], row[1], row[2]});
    return a;
}

nlohmann::json report_json(const UncertaintyReport& r) {
    nlohmann::json j;
    j["kappa"] = r.kappa;
    j["means"] = {r.means[0], r.means[1], r.means[2]};
    j["sigma"] = matrix_json(r.sigma);
    j["commutator"] = matrix_json(r.commutator);
    j["det_sigma"] = r.det_sigma;
    j["det_C"] = r.det_C;
    j["schrodinger_residuals"] = {r.schrodinger_residuals[0], r.schrodinger_residuals[1], r.schrodinger_residuals[2]};
    j["squeezing"] = {r.squeezing[0], r.squeezing[1], r.squeezing[2]};
    return j;
}

}  // namespace gso::io
