#pragma once

#include "fanopair/core.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fanopair {

/// Physical constants of the two-atom model in hbar = 1 units.
///
/// Energies are absolute; the rotating frame subtracts E_L everywhere.
/// Couplings to a continuum (mut_*, V_*, J_a, J_b) carry energy^{1/2},
/// the discrete-discrete coupling J_ab carries energy.
struct RawParams {
    double E_a0 = 1.0;
    double E_b0 = 1.0;
    double E_L = 1.0;
    Complex mu_a{0.0};
    Complex mu_b{0.0};
    Complex mut_a{0.0};
    Complex mut_b{0.0};
    Complex V_a{0.0};
    Complex V_b{0.0};
    Complex J_a{0.0};
    Complex J_b{0.0};
    Complex J_ab{0.0};
    Complex alpha_L{1.0};

    double dE_a0() const { return E_a0 - E_L; }
    double dE_b0() const { return E_b0 - E_L; }

    Complex mu(Atom j) const { return j == Atom::A ? mu_a : mu_b; }
    Complex mut(Atom j) const { return j == Atom::A ? mut_a : mut_b; }
    Complex V(Atom j) const { return j == Atom::A ? V_a : V_b; }
    Complex J(Atom j) const { return j == Atom::A ? J_a : J_b; }
    double E0(Atom j) const { return j == Atom::A ? E_a0 : E_b0; }

    /// True when all three dipole-dipole constants vanish.
    bool uncoupled() const;
};

/// Fano-style parametrization of a RawParams set.
///
/// Fields that need a vanishing coupling in a denominator are left empty
/// rather than propagated as NaN. J_ab and E_L pass through unchanged.
struct FanoParams {
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double gammabar_a = 0.0;
    double gammabar_b = 0.0;
    std::optional<Complex> q_a;
    std::optional<Complex> q_b;
    std::optional<Complex> qbar_a;
    std::optional<Complex> qbar_b;
    double Gamma_a = 0.0;
    double Gamma_b = 0.0;
    std::optional<Complex> Q_a;
    std::optional<Complex> Q_b;
    std::optional<Complex> Omega_a;
    std::optional<Complex> Omega_b;
    std::optional<Complex> m;
    std::optional<Complex> Omega;
    double dE_a0 = 0.0;
    double dE_b0 = 0.0;
    Complex J_ab{0.0};
    double E_L = 1.0;

    double gamma(Atom j) const { return j == Atom::A ? gamma_a : gamma_b; }
    double gammabar(Atom j) const { return j == Atom::A ? gammabar_a : gammabar_b; }
    double Gamma(Atom j) const { return j == Atom::A ? Gamma_a : Gamma_b; }
    const std::optional<Complex>& q(Atom j) const { return j == Atom::A ? q_a : q_b; }
};

/// Returns the value of an optional Fano field or throws DivisionByZeroCoupling.
Complex required(const std::optional<Complex>& field, std::string_view name);

/// Caption-level description of a parameter set: identical to the inputs
/// a figure caption gives (rates, asymmetry, pump, dipole ratio, detunings).
struct FanoSpec {
    double gamma_a = 1.0;
    double gamma_b = 1.0;
    double gammabar_a = 0.0;
    double gammabar_b = 0.0;
    Complex q_a{1.0};
    Complex q_b{1.0};
    Complex m{1.0};
    double Omega = 1.0;
    double dE_a0 = 0.0;
    double dE_b0 = 0.0;
    Complex J_ab{0.0};
    double E_L = 1.0;
};

/// Knobs of the Fano -> raw inversion that the parametrization leaves open.
struct ScaleHints {
    /// Pump amplitude; the dipole moments absorb 1/alpha_L.
    double alpha_L = 1.0;
    /// mut_b / mut_a, needed only when m cannot fix it (q_a or q_b zero).
    std::optional<double> mut_ratio;
};

FanoParams derive_fano(const RawParams& raw);

/// Inverts derive_fano with V_j, J_j, mut_j, alpha_L real and nonnegative.
///
/// Reads gamma, gammabar, q, m, |Omega|, detunings, J_ab and E_L from
/// `fano`; the remaining derived fields are recomputed, not trusted.
RawParams realize_raw(const FanoParams& fano, const ScaleHints& hints = {});
RawParams realize_raw(const FanoSpec& spec, const ScaleHints& hints = {});

FanoParams to_fano_params(const FanoSpec& spec);

struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
};

ValidationReport validate(const RawParams& raw);

// Key-value configuration files: one `key = value` per line, `#` comments,
// complex numbers written as `re,im`.

using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap load_config_file(const std::string& path);

/// True when the map holds Fano-style keys (gamma_a, q_a, Omega, ...).
bool is_fano_config(const ConfigMap& cfg);

/// Applies recognised keys on top of `base`; unknown keys throw ConfigError.
RawParams raw_from_config(const ConfigMap& cfg, RawParams base = {});
FanoSpec fano_spec_from_config(const ConfigMap& cfg, FanoSpec base = {});

/// Resolves a config map to raw parameters, realizing Fano-style input.
RawParams params_from_config(const ConfigMap& cfg, const RawParams& base = {});

void write_config(std::ostream& out, const RawParams& raw);

Complex parse_complex(std::string_view text);
std::string format_complex(Complex value);

}  // namespace fanopair
