#include "gso/scenario.hpp"

#include "gso/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace gso {

using nlohmann::json;

ExpressionFunction::ExpressionFunction(Expression e)
    : f_(std::move(e)), df_(differentiate(f_)), ddf_(differentiate(df_)) {}

SplineFunction::SplineFunction(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
    const std::size_t n = t_.size();
    if (n < 3 || y_.size() != n) throw ValidationError("m_table: need at least 3 samples of equal length");
    for (std::size_t i = 1; i < n; ++i)
        if (!(t_[i] > t_[i - 1])) throw ValidationError("m_table: times must be strictly increasing");
    // Natural spline: tridiagonal system for the knot second derivatives.
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = t_[i] - t_[i - 1], h1 = t_[i + 1] - t_[i];
        const double lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        // forward elimination against row i-1
        const double f = lower / diag[i - 1];
        diag[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    for (std::size_t i = n - 1; i-- > 1;) m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
}

std::size_t SplineFunction::interval(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    return std::min(i, t_.size() - 2);
}

double SplineFunction::value(double t) const {
    const std::size_t i = interval(t);
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - t) / h, b = (t - t_[i]) / h;
    return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double SplineFunction::d1(double t) const {
    const std::size_t i = interval(t);
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - t) / h, b = (t - t_[i]) / h;
    return (y_[i + 1] - y_[i]) / h + ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

double SplineFunction::d2(double t) const {
    const std::size_t i = interval(t);
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - t) / h, b = (t - t_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

std::string SplineFunction::describe() const {
    return "cubic spline through " + std::to_string(t_.size()) + " samples";
}

void validate_scenario(const Scenario& s) {
    if (!s.m || !s.omega || !s.b) throw ValidationError("scenario: m, omega and b must all be defined");
    if (1.0 + 4.0 * s.c < 0.0)
        throw ValidationError("scenario: collapse condition violated, 1+4c = " + format_double(1.0 + 4.0 * s.c) +
                              " < 0");
    if (!(s.m0 > 0.0) || !(s.omega0 > 0.0) || !(s.hbar > 0.0))
        throw ValidationError("scenario: m0, omega0 and hbar must be positive");
    if (!(s.dt > 0.0) || !(s.t1 > s.t0)) throw ValidationError("scenario: need dt > 0 and t1 > t0");
    if (s.grid.npoints < 16) throw ValidationError("scenario: grid.npoints must be at least 16");
    const auto steps = static_cast<std::size_t>(std::ceil((s.t1 - s.t0) / s.dt));
    const std::size_t stride = std::max<std::size_t>(1, steps / 20000);
    for (std::size_t i = 0; i <= steps; i += stride) {
        const double t = std::min(s.t1, s.t0 + static_cast<double>(i) * s.dt);
        const double mt = s.mass(t);
        if (!(mt > 0.0))
            throw ValidationError("scenario: mass must stay positive, m(" + format_double(t) +
                                  ") = " + format_double(mt));
        if (!std::isfinite(s.freq(t)) || !std::isfinite(s.squeeze(t)))
            throw ValidationError("scenario: omega or b undefined at t = " + format_double(t));
    }
    if (s.canonical_start) {
        const double t = s.t0;
        auto check = [&](double v, const char* what) {
            if (std::abs(v) > 1e-10)
                throw ValidationError(std::string("scenario: canonical start requires ") + what +
                                      " = 0 at t0, found " + format_double(v));
        };
        check(s.squeeze(t), "b");
        check(s.squeeze_dot(t), "db/dt");
        check(s.mass_dot(t), "dm/dt");
    }
}

Scenario make_scenario(const std::string& m, const std::string& omega, const std::string& b, double c,
                       double t1, double dt, bool canonical_start) {
    json doc = {{"m", m},   {"omega", omega}, {"b", b},
                {"c", c},   {"t1", t1},       {"dt", dt},
                {"canonical_start", canonical_start}};
    return load_scenario(doc.dump(), true);
}

namespace {

std::shared_ptr<const TimeFunction> expression_key(const json& doc, const char* key, const char* fallback) {
    std::string text = fallback ? fallback : "";
    if (doc.contains(key)) {
        const auto& v = doc.at(key);
        if (v.is_string()) text = v.get<std::string>();
        else if (v.is_number()) text = format_double(v.get<double>());
        else throw ValidationError(std::string("scenario: key '") + key + "' must be a string or number");
    } else if (!fallback) {
        throw ValidationError(std::string("scenario: missing required key '") + key + "'");
    }
    return std::make_shared<ExpressionFunction>(parse_expression(text));
}

double number_key(const json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ValidationError(std::string("scenario: key '") + key + "' must be a number");
    return v.get<double>();
}

}  // namespace

Scenario load_scenario(const std::string& text, bool strict) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("scenario: document must be a JSON object");

    static const std::set<std::string> known = {"m",  "omega", "b",  "c",  "m0",  "omega0",          "hbar",
                                                "t0", "t1",    "dt", "grid", "tolerances", "canonical_start",
                                                "m_table", "description"};
    if (strict)
        for (const auto& item : doc.items())
            if (!known.count(item.key())) throw ValidationError("scenario: unknown key '" + item.key() + "'");

    Scenario s;
    if (doc.contains("m") && doc.contains("m_table"))
        throw ValidationError("scenario: give either 'm' or 'm_table', not both");
    if (doc.contains("m_table")) {
        const auto& tab = doc.at("m_table");
        if (!tab.is_object() || !tab.contains("t") || !tab.contains("m"))
            throw ValidationError("scenario: m_table needs arrays 't' and 'm'");
        s.m = std::make_shared<SplineFunction>(tab.at("t").get<std::vector<double>>(),
                                               tab.at("m").get<std::vector<double>>());
    } else {
        s.m = expression_key(doc, "m", nullptr);
    }
    s.omega = expression_key(doc, "omega", nullptr);
    s.b = expression_key(doc, "b", "0");
    if (!doc.contains("c")) throw ValidationError("scenario: missing required key 'c'");
    s.c = number_key(doc, "c", 0.0);
    s.m0 = number_key(doc, "m0", 1.0);
    s.omega0 = number_key(doc, "omega0", 1.0);
    s.hbar = number_key(doc, "hbar", 1.0);
    s.t0 = number_key(doc, "t0", 0.0);
    s.t1 = number_key(doc, "t1", 10.0);
    s.dt = number_key(doc, "dt", 1e-3);
    if (doc.contains("canonical_start")) {
        if (!doc.at("canonical_start").is_boolean())
            throw ValidationError("scenario: canonical_start must be a boolean");
        s.canonical_start = doc.at("canonical_start").get<bool>();
    }
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        if (!g.is_object()) throw ValidationError("scenario: grid must be an object");
        for (const auto& item : g.items())
            if (strict && item.key() != "x_max" && item.key() != "npoints")
                throw ValidationError("scenario: unknown key 'grid." + item.key() + "'");
        s.grid.x_max = number_key(g, "x_max", 0.0);
        const double np = number_key(g, "npoints", 2048.0);
        if (np < 16.0 || np != std::floor(np)) throw ValidationError("scenario: grid.npoints must be an integer >= 16");
        s.grid.npoints = static_cast<std::size_t>(np);
    }
    if (doc.contains("tolerances")) {
        const auto& tol = doc.at("tolerances");
        if (!tol.is_object()) throw ValidationError("scenario: tolerances must be an object");
        for (const auto& item : tol.items()) {
            if (!item.value().is_number())
                throw ValidationError("scenario: tolerance '" + item.key() + "' must be a number");
            s.tolerances[item.key()] = item.value().get<double>();
        }
    }
    s.source = doc.dump();
    validate_scenario(s);
    return s;
}

Scenario load_scenario_file(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw ValidationError("scenario: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str(), strict);
}

std::string scenario_hash(const Scenario& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : s.source) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gso
