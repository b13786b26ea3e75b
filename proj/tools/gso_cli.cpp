// Command-line front end: envelope, state, moments, verify, green, sweep.
#include "gso/algebra.hpp"
#include "gso/envelope.hpp"
#include "gso/error.hpp"
#include "gso/io.hpp"
#include "gso/moments.hpp"
#include "gso/quadrature.hpp"
#include "gso/scenario.hpp"
#include "gso/states.hpp"
#include "gso/verify.hpp"
#include "gso/wavefunctions.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace gso;
using nlohmann::json;

namespace {

/// Invalid command-line usage (exit 1).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ tolerances

/// Defaults of every tolerance flag; a scenario's `tolerances` object and
/// then --tol-<name> override them.
const std::map<std::string, double> kDefaultTolerances = {
    {"wronskian", 1e-9},     ///< max |ε*ε̇ − εε̇* − 2i|
    {"eigen", 1e-8},         ///< ladder eigen-residual
    {"analytic", 1e-7},      ///< closed-form normalization / overlap / ⟨I_3⟩ vs sums
    {"intelligence", 1e-9},  ///< Robertson / Schrödinger equality
    {"propagation", 1e-4},   ///< L² distance after Crank–Nicolson propagation
    {"invariant", 1e-4},     ///< relative spread of ⟨I_j⟩ along propagation
    {"green", 1e-4},         ///< propagation identity through the Green function
    {"abel", 1e-9},          ///< Green function vs damped spectral sum
    {"unity", 1e-3},         ///< resolution-of-unity deviation
};

struct Globals {
    std::string scenario_path;
    std::string out = "out";
    std::map<std::string, double> tol_flags;
    unsigned threads = 0;
    bool allow_kappa_quarter = false;
    bool strict = false;
};

/// Accepts "re", "re,im" or "re+imi"/"re-imi".
cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ' && ch != '(' && ch != ')') s += ch;
    if (s.empty()) throw UsageError("empty complex number");
    try {
        std::size_t used = 0;
        if (const auto comma = s.find(','); comma != std::string::npos) {
            const double re = std::stod(s.substr(0, comma), &used);
            if (used != comma) throw UsageError("bad complex number '" + text + "'");
            const std::string rest = s.substr(comma + 1);
            const double im = std::stod(rest, &used);
            if (used != rest.size()) throw UsageError("bad complex number '" + text + "'");
            return {re, im};
        }
        if (s.back() == 'i' || s.back() == 'j') {
            const std::string body = s.substr(0, s.size() - 1);
            // split at the last sign that is not an exponent sign or the leading one
            std::size_t split = std::string::npos;
            for (std::size_t k = body.size(); k-- > 1;)
                if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                    split = k;
                    break;
                }
            if (split == std::string::npos) {
                const std::string im_text = (body.empty() || body == "+" || body == "-") ? body + "1" : body;
                const double im = std::stod(im_text, &used);
                if (used != im_text.size()) throw UsageError("bad complex number '" + text + "'");
                return {0.0, im};
            }
            const std::string re_text = body.substr(0, split);
            std::string im_text = body.substr(split);
            if (im_text == "+" || im_text == "-") im_text += "1";
            const double re = std::stod(re_text, &used);
            if (used != re_text.size()) throw UsageError("bad complex number '" + text + "'");
            const double im = std::stod(im_text, &used);
            if (used != im_text.size()) throw UsageError("bad complex number '" + text + "'");
            return {re, im};
        }
        const double re = std::stod(s, &used);
        if (used != s.size()) throw UsageError("bad complex number '" + text + "'");
        return {re, 0.0};
    } catch (const std::invalid_argument&) {
        throw UsageError("bad complex number '" + text + "'");
    } catch (const std::out_of_range&) {
        throw UsageError("complex number out of range '" + text + "'");
    }
}

// ------------------------------------------------------------ run context

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
    bool gating = true;  ///< informational checks are reported but never fail a run
};

class Run {
public:
    Run(std::string command, const Globals& g) : command_(std::move(command)), g_(g) {
        if (!g_.scenario_path.empty()) scenario_ = load_scenario_file(g_.scenario_path, g_.strict);
        for (const auto& [k, v] : kDefaultTolerances) {
            double t = v;
            if (scenario_) {
                if (auto it = scenario_->tolerances.find(k); it != scenario_->tolerances.end()) t = it->second;
            }
            if (auto it = g_.tol_flags.find(k); it != g_.tol_flags.end()) t = it->second;
            tol_[k] = t;
        }
    }

    const Scenario& scenario() const {
        if (!scenario_) throw UsageError(command_ + ": --scenario is required");
        return *scenario_;
    }
    bool has_scenario() const { return scenario_.has_value(); }
    double tol(const std::string& k) const { return tol_.at(k); }
    unsigned threads() const {
        if (g_.threads > 0) return g_.threads;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    const EnvelopeTrajectory& trajectory() {
        if (!traj_) traj_ = integrate_envelope(scenario());
        return *traj_;
    }

    double kappa(std::optional<double> requested) const {
        if (requested) {
            const double k = *requested;
            const bool quarter = std::abs(k - 0.25) <= 1e-15;
            if (!(k > 0.25) && !(quarter && g_.allow_kappa_quarter))
                throw ValidationError("kappa must exceed 1/4 (κ = 1/4 needs --allow-kappa-quarter)");
            return k;
        }
        if (!scenario_) throw UsageError(command_ + ": give --kappa or --scenario");
        return kappa_from_c(scenario_->c, KappaBranch::Principal, g_.allow_kappa_quarter).kappa;
    }

    void param(const std::string& k, json v) { params_[k] = std::move(v); }
    void check(Check c) { checks_.push_back(std::move(c)); }
    bool all_pass() const {
        return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass || !c.gating; });
    }

    void write(const std::string& name, const std::string& content) {
        io::write_text(g_.out + "/" + name, content);
        outputs_.push_back(name);
    }

    /// Writes manifest.json. Timings go to stderr only, so that identical
    /// inputs give byte-identical manifests.
    void finish() {
        json m;
        m["command"] = command_;
        if (scenario_) {
            m["scenario"] = {{"path", g_.scenario_path}, {"hash", scenario_hash(*scenario_)}};
        } else {
            m["scenario"] = nullptr;
        }
        m["parameters"] = params_;
        m["tolerances"] = tol_;
        json checks = json::array();
        for (const Check& c : checks_) {
            json j = {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}};
            if (!c.note.empty()) j["note"] = c.note;
            if (!c.gating) j["gating"] = false;
            checks.push_back(j);
        }
        m["checks"] = checks;
        outputs_.push_back("manifest.json");
        m["outputs"] = outputs_;
        io::write_text(g_.out + "/manifest.json", m.dump(2) + "\n");
        for (const Check& c : checks_)
            std::cout << (!c.gating ? "INFO " : c.pass ? "PASS " : "FAIL ") << c.name << "  value " << io::fmt17(c.value) << "  tol "
                      << io::fmt17(c.tolerance) << (c.note.empty() ? "" : "  (" + c.note + ")") << "\n";
        std::cerr << command_ << ": " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count()
                  << " s\n";
    }

private:
    std::string command_;
    const Globals& g_;
    std::optional<Scenario> scenario_;
    std::optional<EnvelopeTrajectory> traj_;
    std::map<std::string, double> tol_;
    json params_ = json::object();
    std::vector<Check> checks_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Check make_check(std::string name, double value, double tol, std::string note = {}) {
    return {std::move(name), value, tol, value <= tol, std::move(note)};
}

// ------------------------------------------------------------ state selection

struct StateOptions {
    std::string z = "0", u = "1", v = "0", w = "0";
    std::optional<std::string> xi, bg_z;
    bool u0 = false;
    unsigned m = 0;
    std::optional<double> kappa;

    void add(CLI::App* sub) {
        sub->add_option("--z", z, "eigenvalue z (re, re,im or re+imi)");
        sub->add_option("--u", u, "coefficient of I_-");
        sub->add_option("--v", v, "coefficient of I_+");
        sub->add_option("--w", w, "coefficient of I_3");
        sub->add_option("--xi", xi, "Perelomov state with parameter xi, |xi| < 1");
        sub->add_option("--bg-z", bg_z, "Barut-Girardello state, eigenvalue of I_-");
        sub->add_flag("--u0", u0, "u = 0 branch: eigenstate of v I_+ + w I_3 with eigenvalue w(kappa+m)");
        sub->add_option("-m,--m", m, "level m of the u = 0 branch");
        sub->add_option("--kappa", kappa, "Bargmann index (default: from the scenario's c)");
    }

    FockState build(Run& run) const {
        const double k = run.kappa(kappa);
        run.param("kappa", k);
        const int chosen = (xi ? 1 : 0) + (bg_z ? 1 : 0) + (u0 ? 1 : 0);
        if (chosen > 1) throw UsageError("choose at most one of --xi, --bg-z, --u0");
        if (xi) {
            const cplx x = parse_complex(*xi);
            run.param("family", "perelomov");
            run.param("xi", io::to_json(x));
            return perelomov(x, k);
        }
        if (bg_z) {
            const cplx zz = parse_complex(*bg_z);
            run.param("family", "barut_girardello");
            run.param("z", io::to_json(zz));
            return barut_girardello(zz, k);
        }
        if (u0) {
            const cplx vv = parse_complex(v), ww = parse_complex(w);
            run.param("family", "u0");
            run.param("m", m);
            run.param("v", io::to_json(vv));
            run.param("w", io::to_json(ww));
            return build_state_u0(m, vv, ww, k);
        }
        const StateParams p = params(k);
        run.param("family", "zuvw");
        run.param("z", io::to_json(p.z));
        run.param("u", io::to_json(p.u));
        run.param("v", io::to_json(p.v));
        run.param("w", io::to_json(p.w));
        return build_state(p);
    }

    StateParams params(double k) const {
        return {parse_complex(z), parse_complex(u), parse_complex(v), parse_complex(w), k};
    }
};

json intelligence_json(const IntelligenceDiagnosis& d) {
    return {{"robertson_equality", d.robertson_equality},
            {"schrodinger_equality", d.schrodinger_equality},
            {"robertson_gap", d.robertson_gap},
            {"schrodinger_gap", d.schrodinger_gap}};
}

json moments_document(const FockState& st, double intelligence_tol) {
    const UncertaintyReport r = moments_from_state(st);
    json j = io::report_json(r);
    j["intelligence"] = intelligence_json(check_intelligence(r, intelligence_tol));
    if (st.params && st.params->u != cplx(0.0, 0.0)) {
        const StateParams& p = *st.params;
        try {
            j["analytic_mean_I3"] = analytic_I3_powers(p, 1);
        } catch (const Error& e) {
            j["analytic_mean_I3"] = nullptr;
            j["analytic_mean_I3_error"] = e.what();
        }
        if (p.w == cplx(0.0, 0.0)) {
            const W0Moments w = w0_second_moments(p);
            j["w0_closed_form"] = {{"var1", w.var1},       {"var2", w.var2},     {"cov12", w.cov12},
                                   {"cov13", w.cov13},     {"cov23", w.cov23},   {"mean_I3", w.mean_I3},
                                   {"mean_I3_source", w.mean_I3_source}};
        }
    }
    return j;
}

// ------------------------------------------------------------ commands

int cmd_envelope(Run& run) {
    const EnvelopeTrajectory& tr = run.trajectory();
    run.write("envelope.csv", io::envelope_csv(tr));
    run.param("samples", tr.times.size());
    run.check(make_check("wronskian", tr.max_wronskian_residual(), run.tol("wronskian")));
    run.finish();
    return run.all_pass() ? 0 : 2;
}

int cmd_state(Run& run, const StateOptions& so, std::optional<double> time, std::size_t npoints, bool with_wave) {
    const FockState st = so.build(run);
    run.write("state.json", io::state_json(st).dump(2) + "\n");
    run.write("moments.json", moments_document(st, run.tol("intelligence")).dump(2) + "\n");
    if (with_wave && run.has_scenario()) {
        const Scenario& s = run.scenario();
        const EnvelopeTrajectory& tr = run.trajectory();
        GridSpec g = s.grid;
        if (npoints) g.npoints = npoints;
        const GridSpec grid = resolve_grid(tr, s, g);
        const double t = time.value_or(s.t0);
        if (t < tr.t_begin() || t > tr.t_end()) throw ValidationError("--time lies outside the scenario span");
        run.param("time", t);
        run.param("grid", {{"x_max", grid.x_max}, {"npoints", grid.npoints}});
        const GridWavefunction psi = sample(make_state_wavefunction(tr, st), grid, t);
        run.write("wavefunction.csv", io::wavefunction_csv(psi));
        run.check(make_check("boundary_density", boundary_density(psi), 1e-10));
    }
    run.finish();
    return run.all_pass() ? 0 : 2;
}

// ---- verify suites

void suite_envelope(Run& run) {
    const EnvelopeTrajectory& tr = run.trajectory();
    run.check(make_check("envelope.wronskian", tr.max_wronskian_residual(), run.tol("wronskian")));
}

double eigen_residual(const FockState& st, cplx u, cplx v, cplx w, cplx z) {
    const std::size_t dim = st.size() + 1;
    const LadderMatrices lm = ladder_matrices(st.kappa, dim);
    std::vector<cplx> psi = st.coeffs;
    psi.resize(dim, 0.0);
    const auto r = apply_combination(lm, u, v, w, psi);
    double s = 0.0;
    for (std::size_t n = 0; n < dim; ++n) s += std::norm(r[n] - z * psi[n]);
    return std::sqrt(s);
}

/// Family parameters with both roots of u r² + w r + v inside radius `rmax`.
StateParams draw_params(std::mt19937_64& rng, double rmax) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto disk = [&](double r) { return std::polar(r * std::sqrt(uni(rng)), 2 * std::numbers::pi * uni(rng)); };
    StateParams p;
    p.u = std::polar(0.5 + 1.5 * uni(rng), 2 * std::numbers::pi * uni(rng));
    const cplx r1 = disk(rmax), r2 = disk(rmax);
    p.w = -p.u * (r1 + r2);
    p.v = p.u * r1 * r2;
    p.z = disk(2.0);
    p.kappa = 0.3 + 2.2 * uni(rng);
    return p;
}

void suite_states(Run& run) {
    std::mt19937_64 rng(1);
    double worst = 0.0, worst_overlap = 0.0;
    for (int i = 0; i < 100; ++i) {
        const StateParams p = draw_params(rng, 0.8);
        worst = std::max(worst, eigen_residual(build_state(p), p.u, p.v, p.w, p.z));
    }
    for (int i = 0; i < 50; ++i) {
        const StateParams a = draw_params(rng, std::sqrt(0.7));
        StateParams b = draw_params(rng, std::sqrt(0.7));
        b.kappa = a.kappa;
        const cplx num = inner_product(build_state(a), build_state(b));
        worst_overlap = std::max(worst_overlap, std::abs(inner_product_analytic(a, b) - num) / std::max(1.0, std::abs(num)));
    }
    run.check(make_check("states.eigen_residual", worst, run.tol("eigen"), "100 draws"));
    run.check(make_check("states.analytic_overlap", worst_overlap, run.tol("analytic"), "50 pairs"));
}

void suite_moments(Run& run) {
    std::mt19937_64 rng(2);
    double worst_violation = 0.0;
    for (int i = 0; i < 200; ++i) {
        const StateParams p = draw_params(rng, 0.8);
        const UncertaintyReport r = moments_from_state(build_state(p));
        const double scale = std::max(1.0, r.means[2] * r.means[2] * r.means[2]);
        // Robertson det σ ≥ det C and the three pairwise Schrödinger inequalities
        worst_violation = std::max(worst_violation, (r.det_C - r.det_sigma) / scale);
        for (double res : r.schrodinger_residuals)
            worst_violation = std::max(worst_violation, -res / std::max(1.0, r.means[2] * r.means[2]));
    }
    run.check(make_check("moments.inequality_violation", std::max(0.0, worst_violation), 1e-12, "200 draws"));
    double worst_gap = 0.0;
    for (int i = 1; i <= 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const cplx xi = std::polar(0.08 * i, 2.0 * std::numbers::pi * j / 10.0);
            const IntelligenceDiagnosis d = check_intelligence(moments_from_state(perelomov(xi, 1.25)));
            worst_gap = std::max({worst_gap, d.schrodinger_gap[0], d.schrodinger_gap[1], d.schrodinger_gap[2]});
        }
    run.check(make_check("moments.perelomov_schrodinger_gap", worst_gap, run.tol("intelligence"), "10x10 disk, kappa 1.25"));
}

double relative_spread(const std::vector<Vec3>& means) {
    double worst = 0.0, scale = 0.0;
    for (const Vec3& m : means) scale = std::max({scale, std::abs(m[0]), std::abs(m[1]), std::abs(m[2])});
    for (int j = 0; j < 3; ++j) {
        double lo = means.front()[j], hi = lo;
        for (const Vec3& m : means) {
            lo = std::min(lo, m[j]);
            hi = std::max(hi, m[j]);
        }
        worst = std::max(worst, (hi - lo) / scale);
    }
    return worst;
}

void suite_propagation(Run& run) {
    const Scenario& s = run.scenario();
    const EnvelopeTrajectory& tr = run.trajectory();
    const double kappa = run.kappa(std::nullopt);
    const GridSpec grid = resolve_grid(tr, s, s.grid);
    const double t_final = std::min(2.0, tr.t_end() - tr.t_begin());
    const double t0 = tr.t_begin();
    const GridWavefunction psi0 = wavefunction_psi_n(tr, kappa, 0, t0, grid);
    const PropagationRun r = propagate(s, psi0, t_final, 1e-4, 2000, &tr);
    const GridWavefunction exact = wavefunction_psi_n(tr, kappa, 0, t0 + t_final, grid);
    run.check(make_check("propagation.ground_state_l2", l2_distance(r.snapshots.back(), exact), run.tol("propagation")));
    run.check(make_check("propagation.invariant_spread", relative_spread(r.invariant_means), run.tol("invariant")));
    run.check(make_check("propagation.norm_drift", r.norm_drift.back(), 1e-8 * t_final));
}

void suite_green(Run& run) {
    const EnvelopeTrajectory& tr = run.trajectory();
    const double kappa = run.kappa(std::nullopt);
    const double t1 = tr.t_begin() + 0.25 * (tr.t_end() - tr.t_begin());
    const double t2 = t1 + 0.8;
    double worst_abel = 0.0, worst_plain = 0.0;
    for (double x1 : {0.4, 1.3})
        for (double x2 : {0.7, 2.1}) {
            const cplx S = green_spectral_sum(tr, kappa, x2, t2, x1, t1, 120, 0.3);
            worst_abel = std::max(worst_abel, std::abs(green_function(tr, kappa, x2, t2, x1, t1, 0.3) - S) /
                                                  std::max(1.0, std::abs(S)));
            worst_plain = std::max(worst_plain, std::abs(green_function(tr, kappa, x2, t2, x1, t1) -
                                                         green_spectral_sum(tr, kappa, x2, t2, x1, t1, 60)));
        }
    run.check(make_check("green.damped_spectral_sum", worst_abel, run.tol("abel"), "eta 0.3, 120 terms"));
    // the undamped truncated sum does not converge pointwise; reported, never gating
    Check info{"green.undamped_spectral_sum_60", worst_plain, 0.0, false, "no pointwise limit", false};
    run.check(info);

    const double x_max = std::min(default_x_max(tr, run.scenario()), 12.0);
    const QuadratureRule q1 = composite_gauss_legendre(90, 12, 0.0, x_max);
    const QuadratureRule q2 = composite_gauss_legendre(30, 8, 0.0, x_max);
    const GreenKernel G = make_green_kernel(tr, kappa, t2, t1);
    double worst = 0.0;
    for (unsigned n : {0u, 2u}) {
        const WaveFunction f = make_psi_n(tr, kappa, n);
        std::vector<cplx> in(q1.nodes.size());
        for (std::size_t k = 0; k < in.size(); ++k) in[k] = q1.weights[k] * f(q1.nodes[k], t1);
        double err = 0.0;
        for (std::size_t i = 0; i < q2.nodes.size(); ++i) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < in.size(); ++k) acc += G(q2.nodes[i], q1.nodes[k]) * in[k];
            err += q2.weights[i] * std::norm(acc - f(q2.nodes[i], t2));
        }
        worst = std::max(worst, std::sqrt(err));
    }
    run.check(make_check("green.propagation_identity_l2", worst, run.tol("green")));
}

void suite_unity(Run& run, std::optional<double> kappa_opt) {
    const double kappa = run.has_scenario() || kappa_opt ? run.kappa(kappa_opt) : 1.0;
    const UnityQuadrature q;
    if (kappa > 0.5) {
        const UnityReport r = resolution_of_unity_check(CoherentFamily::Perelomov, kappa, q);
        run.check(make_check("unity.perelomov", r.max_deviation, run.tol("unity")));
    }
    const UnityReport r = resolution_of_unity_check(CoherentFamily::BarutGirardello, kappa, q);
    run.check(make_check("unity.barut_girardello", r.max_deviation, run.tol("unity")));
}

int cmd_verify(Run& run, const std::string& suite, std::optional<double> kappa) {
    run.param("suite", suite);
    const bool all = suite == "all";
    if (all || suite == "envelope") suite_envelope(run);
    if (all || suite == "states") suite_states(run);
    if (all || suite == "moments") suite_moments(run);
    if (all || suite == "propagation") suite_propagation(run);
    if (all || suite == "green") suite_green(run);
    if (all || suite == "unity") suite_unity(run, kappa);
    run.finish();
    return run.all_pass() ? 0 : 2;
}

int cmd_green(Run& run, double t1, double t2, std::size_t points, double x_max, double eta) {
    const Scenario& s = run.scenario();
    const EnvelopeTrajectory& tr = run.trajectory();
    const double kappa = run.kappa(std::nullopt);
    if (points == 0) throw UsageError("green: --points must be positive");
    if (x_max <= 0.0) x_max = resolve_grid(tr, s, s.grid).x_max;
    run.param("t1", t1);
    run.param("t2", t2);
    run.param("points", points);
    run.param("x_max", x_max);
    run.param("eta", eta);
    const GreenKernel G = make_green_kernel(tr, kappa, t2, t1, eta);
    std::vector<io::GreenSample> rows;
    for (std::size_t i = 1; i <= points; ++i)
        for (std::size_t j = 1; j <= points; ++j) {
            const double x1 = x_max * static_cast<double>(i) / static_cast<double>(points);
            const double x2 = x_max * static_cast<double>(j) / static_cast<double>(points);
            rows.push_back({x1, x2, G(x2, x1)});
        }
    run.write("green.csv", io::green_csv(rows));
    run.finish();
    return 0;
}

// ---- sweep

struct SweepPoint {
    std::vector<double> coords;
    StateParams params;
    std::optional<cplx> xi;
};

std::vector<double> parse_range(const std::string& spec) {
    std::vector<double> out;
    auto number = [&](const std::string& t) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw UsageError("sweep: bad number '" + t + "'");
        }
        if (used != t.size()) throw UsageError("sweep: bad number '" + t + "'");
        return v;
    };
    auto split = [](const std::string& s, char d) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, d)) parts.push_back(item);
        return parts;
    };
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw UsageError("sweep: range is start:stop:count");
        const double a = number(parts[0]), b = number(parts[1]);
        const double count = number(parts[2]);
        if (count < 0 || count != std::floor(count)) throw UsageError("sweep: count must be a non-negative integer");
        const auto n = static_cast<std::size_t>(count);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    } else if (!spec.empty()) {
        for (const std::string& t : split(spec, ',')) out.push_back(number(t));
    }
    return out;
}

double observable(const std::string& name, const SweepPoint& pt, double intelligence_tol) {
    const StateParams& p = pt.params;
    const bool w0 = !pt.xi && p.w == cplx(0.0, 0.0) && p.u != cplx(0.0, 0.0);
    // the w = 0 closed forms reach v → u where the coefficient expansion is too long
    if (w0 && (name == "var_I1" || name == "var_I2" || name == "cov12" || name == "mean_I3")) {
        const W0Moments m = w0_second_moments(p);
        if (name == "var_I1") return m.var1;
        if (name == "var_I2") return m.var2;
        if (name == "cov12") return m.cov12;
        return m.mean_I3;
    }
    const FockState st = pt.xi ? perelomov(*pt.xi, p.kappa) : build_state(p);
    const UncertaintyReport r = moments_from_state(st);
    if (name == "var_I1") return r.sigma[0][0];
    if (name == "var_I2") return r.sigma[1][1];
    if (name == "var_I3") return r.sigma[2][2];
    if (name == "cov12") return r.sigma[0][1];
    if (name == "cov13") return r.sigma[0][2];
    if (name == "cov23") return r.sigma[1][2];
    if (name == "mean_I1") return r.means[0];
    if (name == "mean_I2") return r.means[1];
    if (name == "mean_I3") return r.means[2];
    if (name == "det_sigma") return r.det_sigma;
    if (name == "det_C") return r.det_C;
    if (name == "robertson_gap") return check_intelligence(r, intelligence_tol).robertson_gap;
    throw UsageError("sweep: unknown observable '" + name + "'");
}

const std::vector<std::string> kObservables = {"var_I1", "var_I2", "var_I3", "cov12", "cov13", "cov23", "mean_I1",
                                               "mean_I2", "mean_I3", "det_sigma", "det_C", "robertson_gap"};

int cmd_sweep(Run& run, const StateOptions& so, const std::string& vary, const std::string& obs,
              const std::string& out_csv) {
    if (std::find(kObservables.begin(), kObservables.end(), obs) == kObservables.end())
        throw UsageError("sweep: unknown observable '" + obs + "'");
    const auto eq = vary.find('=');
    if (eq == std::string::npos) throw UsageError("sweep: --vary takes key=range");
    const std::string key = vary.substr(0, eq), spec = vary.substr(eq + 1);
    const double kappa = run.kappa(so.kappa);
    const StateParams base = so.params(kappa);
    run.param("vary", vary);
    run.param("observable", obs);
    run.param("kappa", kappa);
    run.param("base", {{"z", io::to_json(base.z)}, {"u", io::to_json(base.u)}, {"v", io::to_json(base.v)},
                       {"w", io::to_json(base.w)}});

    std::vector<SweepPoint> points;
    std::vector<std::string> columns;
    if (key == "xi") {
        // xi=disk:rmax:nr:ntheta, radii rmax·i/nr (i = 1..nr), equally spaced angles
        std::stringstream ss(spec);
        std::string head, a, b, c;
        std::getline(ss, head, ':');
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c, ':');
        if (head != "disk" || c.empty()) throw UsageError("sweep: xi takes disk:rmax:nr:ntheta");
        const double rmax = parse_range(a).at(0);
        const double nr = parse_range(b).at(0), nt = parse_range(c).at(0);
        if (!(rmax > 0.0 && rmax < 1.0)) throw UsageError("sweep: disk radius must lie in (0, 1)");
        for (int i = 1; i <= static_cast<int>(nr); ++i)
            for (int j = 0; j < static_cast<int>(nt); ++j) {
                const cplx xi = std::polar(rmax * i / nr, 2.0 * std::numbers::pi * j / nt);
                points.push_back({{xi.real(), xi.imag()}, base, xi});
            }
        columns = {"xi_re", "xi_im"};
    } else {
        const std::vector<double> values = parse_range(spec);
        for (double x : values) {
            StateParams p = base;
            if (key == "z" || key == "z_re") p.z.real(x);
            else if (key == "z_im") p.z.imag(x);
            else if (key == "u" || key == "u_re") p.u.real(x);
            else if (key == "u_im") p.u.imag(x);
            else if (key == "v" || key == "v_re") p.v.real(x);
            else if (key == "v_im") p.v.imag(x);
            else if (key == "w" || key == "w_re") p.w.real(x);
            else if (key == "w_im") p.w.imag(x);
            else if (key == "kappa") p.kappa = x;
            else throw UsageError("sweep: unknown key '" + key + "'");
            points.push_back({{x}, p, std::nullopt});
        }
        columns = {key};
    }
    if (points.empty()) throw UsageError("sweep: empty range");

    std::vector<double> values(points.size());
    std::vector<std::string> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < points.size();) {
            try {
                values[i] = observable(obs, points[i], run.tol("intelligence"));
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned nthreads = std::min<unsigned>(run.threads(), static_cast<unsigned>(points.size()));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nthreads; ++k) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!errors[i].empty()) throw ValidationError("sweep point " + std::to_string(i) + ": " + errors[i]);

    std::ostringstream csv;
    csv << "index";
    for (const std::string& c : columns) csv << ',' << c;
    csv << ',' << obs << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        csv << i;
        for (double c : points[i].coords) csv << ',' << io::fmt17(c);
        csv << ',' << io::fmt17(values[i]) << '\n';
    }
    run.write(out_csv, csv.str());
    run.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized singular oscillator laboratory"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--scenario", g.scenario_path, "scenario JSON file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for sweeps (0: hardware)");
    app.add_flag("--allow-kappa-quarter", g.allow_kappa_quarter, "accept the boundary value kappa = 1/4");
    app.add_flag("--strict", g.strict, "reject unknown scenario keys");
    std::map<std::string, std::optional<double>> tol_opts;
    for (const auto& [name, def] : kDefaultTolerances) {
        tol_opts[name];
        std::ostringstream help;
        help << "tolerance '" << name << "' (default " << def << ")";
        app.add_option("--tol-" + name, tol_opts[name], help.str());
    }
    app.fallthrough();

    auto* env = app.add_subcommand("envelope", "integrate the envelope and write its trajectory");

    StateOptions state_opts;
    std::optional<double> time;
    std::size_t npoints = 0;
    auto* state = app.add_subcommand("state", "build a family member; write coefficients, moments, wavefunction");
    state_opts.add(state);
    state->add_option("--time", time, "time of the wavefunction snapshot (default t0)");
    state->add_option("--npoints", npoints, "grid points (default from the scenario)");

    StateOptions moment_opts;
    auto* moments = app.add_subcommand("moments", "moments and intelligence report of a family member");
    moment_opts.add(moments);

    std::string suite = "all";
    std::optional<double> verify_kappa;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "suite")
        ->check(CLI::IsMember({"envelope", "states", "moments", "propagation", "green", "unity", "all"}))
        ->capture_default_str();
    verify->add_option("--kappa", verify_kappa, "Bargmann index for the unity suite");

    double t1 = 0.0, t2 = 1.0, x_max = 0.0, eta = 0.0;
    std::size_t points = 32;
    auto* green = app.add_subcommand("green", "tabulate G(x2,t2; x1,t1)");
    green->add_option("--t1", t1, "initial time")->required();
    green->add_option("--t2", t2, "final time")->required();
    green->add_option("--points", points, "points per axis")->capture_default_str();
    green->add_option("--x-max", x_max, "largest x (default: scenario grid)");
    green->add_option("--eta", eta, "Abel damping, gamma -> gamma - i eta")->capture_default_str();

    StateOptions sweep_opts;
    std::string vary, obs, out_csv = "sweep.csv";
    auto* sweep = app.add_subcommand("sweep", "parameter sweep of one observable");
    sweep_opts.add(sweep);
    sweep->add_option("--vary", vary, "key=v1,v2,... | key=start:stop:count | xi=disk:rmax:nr:ntheta")->required();
    sweep->add_option("--observable", obs, "observable column")->required();
    sweep->add_option("--out-csv", out_csv, "CSV file name inside --out")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    for (const auto& [name, v] : tol_opts)
        if (v) g.tol_flags[name] = *v;

    try {
        if (env->parsed()) {
            Run run("envelope", g);
            return cmd_envelope(run);
        }
        if (state->parsed()) {
            Run run("state", g);
            return cmd_state(run, state_opts, time, npoints, true);
        }
        if (moments->parsed()) {
            Run run("moments", g);
            return cmd_state(run, moment_opts, std::nullopt, 0, false);
        }
        if (verify->parsed()) {
            Run run("verify", g);
            return cmd_verify(run, suite, verify_kappa);
        }
        if (green->parsed()) {
            Run run("green", g);
            return cmd_green(run, t1, t2, points, x_max, eta);
        }
        if (sweep->parsed()) {
            Run run("sweep", g);
            return cmd_sweep(run, sweep_opts, vary, obs, out_csv);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
