#pragma once

#include "gso/expression.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gso {

/// A smooth real function of time with its first two derivatives.
class TimeFunction {
public:
    virtual ~TimeFunction() = default;
    virtual double value(double t) const = 0;
    virtual double d1(double t) const = 0;
    virtual double d2(double t) const = 0;
    virtual std::string describe() const = 0;
};

/// Expression-backed function; derivatives are symbolic.
class ExpressionFunction final : public TimeFunction {
public:
    explicit ExpressionFunction(Expression e);
    double value(double t) const override { return f_.evaluate(t); }
    double d1(double t) const override { return df_.evaluate(t); }
    double d2(double t) const override { return ddf_.evaluate(t); }
    std::string describe() const override { return f_.to_string(); }

    const Expression& expression() const { return f_; }

private:
    Expression f_, df_, ddf_;
};

/// Natural cubic spline through tabulated samples (the `m_table` key).
/// Outside the table the end cubic pieces are extrapolated.
class SplineFunction final : public TimeFunction {
public:
    SplineFunction(std::vector<double> t, std::vector<double> y);
    double value(double t) const override;
    double d1(double t) const override;
    double d2(double t) const override;
    std::string describe() const override;

private:
    std::size_t interval(double t) const;
    std::vector<double> t_, y_, m_;  // m_: second derivatives at knots
};

/// Uniform half-line grid x_k = k·x_max/(npoints-1). x_max ≤ 0 requests the
/// automatic choice 12·sqrt(ħ·max|ε|²/min m).
struct GridSpec {
    double x_max = 0.0;
    std::size_t npoints = 2048;

    double spacing() const { return x_max / static_cast<double>(npoints - 1); }
    double x(std::size_t k) const { return static_cast<double>(k) * spacing(); }
};

/// Coefficients of the Hamiltonian
///   H = p²/(2m) + b(px+xp) + mω²x²/2 + g/x²,   g = cħ²/(2m),
/// together with reference scales and numerical controls.
struct Scenario {
    std::shared_ptr<const TimeFunction> m, omega, b;
    double c = 0.0;
    double m0 = 1.0;
    double omega0 = 1.0;
    double hbar = 1.0;
    double t0 = 0.0;
    double t1 = 10.0;
    double dt = 1e-3;
    bool canonical_start = true;
    GridSpec grid;
    std::map<std::string, double> tolerances;
    std::string source;  ///< canonical text used for the scenario hash

    double mass(double t) const { return m->value(t); }
    double mass_dot(double t) const { return m->d1(t); }
    double mass_ddot(double t) const { return m->d2(t); }
    double freq(double t) const { return omega->value(t); }
    double squeeze(double t) const { return b->value(t); }
    double squeeze_dot(double t) const { return b->d1(t); }
    /// Coupling of the inverse-square term.
    double g(double t) const { return c * hbar * hbar / (2.0 * mass(t)); }
};

/// Builds a scenario from expression strings with the remaining fields at
/// their defaults, then validates it.
Scenario make_scenario(const std::string& m, const std::string& omega, const std::string& b, double c,
                       double t1 = 10.0, double dt = 1e-3, bool canonical_start = true);

/// Checks: m > 0 on the span, 1+4c ≥ 0, positive scales and step, and for a
/// canonical start b(t0) = ḃ(t0) = ṁ(t0) = 0 within 1e-10.
void validate_scenario(const Scenario& s);

/// Parses a JSON scenario document. `strict` rejects unknown keys.
Scenario load_scenario(const std::string& text, bool strict = false);
Scenario load_scenario_file(const std::string& path, bool strict = false);

/// FNV-1a 64-bit hash of the scenario's canonical text, hex encoded.
std::string scenario_hash(const Scenario& s);

}  // namespace gso
