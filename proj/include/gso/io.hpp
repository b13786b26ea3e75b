#pragma once

#include "gso/moments.hpp"
#include "gso/states.hpp"
#include "gso/wavefunctions.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gso::io {

/// Fixed 17-significant-digit rendering used by every CSV writer.
std::string fmt17(double v);

/// Writes `content` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& content);

/// t,re_eps,im_eps,re_eps_dot,im_eps_dot,omega_sq,wronskian_residual
std::string envelope_csv(const EnvelopeTrajectory& traj);

/// x,re_psi,im_psi,abs2
std::string wavefunction_csv(const GridWavefunction& psi);

struct GreenSample {
    double x1 = 0.0, x2 = 0.0;
    cplx value;
};
/// x1,x2,re_G,im_G
std::string green_csv(const std::vector<GreenSample>& rows);

nlohmann::json to_json(cplx z);
/// {kappa, params:{z,u,v,w}, coeffs:[[re,im],...], tail_bound}
nlohmann::json state_json(const FockState& s);
nlohmann::json report_json(const UncertaintyReport& r);
nlohmann::json matrix_json(const Mat3& m);

}  // namespace gso::io
