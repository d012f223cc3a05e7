#include "fanopair/params.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fanopair {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DivisionByZeroCoupling: return "DivisionByZeroCoupling";
        case ErrorCode::InfeasibleParams: return "InfeasibleParams";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::DegenerateEigenvalues: return "DegenerateEigenvalues";
        case ErrorCode::NearDefectiveMatrix: return "NearDefectiveMatrix";
        case ErrorCode::GridTooNarrow: return "GridTooNarrow";
        case ErrorCode::GridTooLarge: return "GridTooLarge";
        case ErrorCode::ZeroSecondMoment: return "ZeroSecondMoment";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::NonzeroCoupling: return "NonzeroCoupling";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::RecurrenceBound: return "RecurrenceBound";
        case ErrorCode::ZeroDipole: return "ZeroDipole";
        case ErrorCode::ComplexCoupling: return "ComplexCoupling";
        case ErrorCode::UnknownPreset: return "UnknownPreset";
        case ErrorCode::UnknownParameter: return "UnknownParameter";
        case ErrorCode::ToleranceFail: return "ToleranceFail";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Error";
}

bool RawParams::uncoupled() const {
    return J_a == 0.0 && J_b == 0.0 && J_ab == 0.0;
}

Complex required(const std::optional<Complex>& field, std::string_view name) {
    if (!field)
        throw Error(ErrorCode::DivisionByZeroCoupling,
                    std::string(name) + " is undefined: its denominator coupling is zero");
    return *field;
}

namespace {

std::optional<Complex> ratio(Complex num, Complex den) {
    if (den == 0.0) return std::nullopt;
    return num / den;
}

// Q_j = (gamma q + gammabar qbar) / Gamma with 0 * undefined treated as 0.
std::optional<Complex> weighted_asymmetry(double gamma, const std::optional<Complex>& q,
                                          double gammabar, const std::optional<Complex>& qbar,
                                          double Gamma) {
    if (Gamma <= 0.0) return std::nullopt;
    Complex acc{0.0};
    if (gamma > 0.0) {
        if (!q) return std::nullopt;
        acc += gamma * *q;
    }
    if (gammabar > 0.0) {
        if (!qbar) return std::nullopt;
        acc += gammabar * *qbar;
    }
    return acc / Gamma;
}

std::optional<Complex> pump_parameter(double Gamma, const std::optional<Complex>& Q,
                                      Complex mut_alpha) {
    if (Gamma <= 0.0) return Complex{0.0};
    if (!Q) return std::nullopt;
    return std::sqrt(4.0 * kPi * Gamma) * (*Q + kI) * mut_alpha;
}

}  // namespace

FanoParams derive_fano(const RawParams& raw) {
    FanoParams f;
    f.gamma_a = kPi * std::norm(raw.V_a);
    f.gamma_b = kPi * std::norm(raw.V_b);
    f.gammabar_a = kPi * std::norm(raw.J_a);
    f.gammabar_b = kPi * std::norm(raw.J_b);
    f.q_a = ratio(raw.mu_a, kPi * raw.mut_a * std::conj(raw.V_a));
    f.q_b = ratio(raw.mu_b, kPi * raw.mut_b * std::conj(raw.V_b));
    f.qbar_a = ratio(raw.mu_b, kPi * raw.mut_a * std::conj(raw.J_a));
    f.qbar_b = ratio(raw.mu_a, kPi * raw.mut_b * std::conj(raw.J_b));
    f.Gamma_a = f.gamma_a + f.gammabar_a;
    f.Gamma_b = f.gamma_b + f.gammabar_b;
    f.Q_a = weighted_asymmetry(f.gamma_a, f.q_a, f.gammabar_a, f.qbar_a, f.Gamma_a);
    f.Q_b = weighted_asymmetry(f.gamma_b, f.q_b, f.gammabar_b, f.qbar_b, f.Gamma_b);
    f.Omega_a = pump_parameter(f.Gamma_a, f.Q_a, raw.mut_a * raw.alpha_L);
    f.Omega_b = pump_parameter(f.Gamma_b, f.Q_b, raw.mut_b * raw.alpha_L);
    f.m = ratio(raw.mu_b, raw.mu_a);
    if (f.Omega_a && f.Omega_b) f.Omega = 0.5 * (*f.Omega_a + *f.Omega_b);
    f.dE_a0 = raw.dE_a0();
    f.dE_b0 = raw.dE_b0();
    f.J_ab = raw.J_ab;
    f.E_L = raw.E_L;
    return f;
}

FanoParams to_fano_params(const FanoSpec& spec) {
    FanoParams f;
    f.gamma_a = spec.gamma_a;
    f.gamma_b = spec.gamma_b;
    f.gammabar_a = spec.gammabar_a;
    f.gammabar_b = spec.gammabar_b;
    f.q_a = spec.q_a;
    f.q_b = spec.q_b;
    f.m = spec.m;
    f.Omega = Complex{spec.Omega};
    f.Gamma_a = spec.gamma_a + spec.gammabar_a;
    f.Gamma_b = spec.gamma_b + spec.gammabar_b;
    f.dE_a0 = spec.dE_a0;
    f.dE_b0 = spec.dE_b0;
    f.J_ab = spec.J_ab;
    f.E_L = spec.E_L;
    return f;
}

RawParams realize_raw(const FanoSpec& spec, const ScaleHints& hints) {
    return realize_raw(to_fano_params(spec), hints);
}

RawParams realize_raw(const FanoParams& fano, const ScaleHints& hints) {
    auto infeasible = [](const std::string& why) { return Error(ErrorCode::InfeasibleParams, why); };

    for (Atom j : {Atom::A, Atom::B}) {
        const std::string tag = atom_name(j);
        if (!(fano.gamma(j) >= 0.0) || !(fano.gammabar(j) >= 0.0))
            throw infeasible("damping rates of atom " + tag + " must be nonnegative");
        if (!(fano.gamma(j) > 0.0))
            throw infeasible("gamma_" + tag + " must be positive to fix mu_" + tag + " from q_" + tag);
        if (!fano.q(j)) throw infeasible("q_" + tag + " is required");
    }
    if (!fano.Omega) throw infeasible("Omega is required");
    if (!(hints.alpha_L > 0.0)) throw infeasible("alpha_L must be positive");
    if (!(fano.E_L > 0.0)) throw infeasible("E_L must be positive");

    const Complex q_a = *fano.q_a;
    const Complex q_b = *fano.q_b;
    const double V_a = std::sqrt(fano.gamma_a / kPi);
    const double V_b = std::sqrt(fano.gamma_b / kPi);
    const double J_a = std::sqrt(fano.gammabar_a / kPi);
    const double J_b = std::sqrt(fano.gammabar_b / kPi);

    // kappa = mut_b / mut_a, fixed by m = mu_b / mu_a = q_b mut_b V_b / (q_a mut_a V_a).
    double kappa = 1.0;
    if (q_a != 0.0 && q_b != 0.0) {
        if (!fano.m) throw infeasible("m is required when both q_a and q_b are nonzero");
        const Complex k = *fano.m * q_a * V_a / (q_b * V_b);
        if (std::abs(k.imag()) > 1e-12 * std::abs(k) || !(k.real() > 0.0))
            throw infeasible("m * q_a / q_b must be real and positive under the real-coupling convention");
        kappa = k.real();
        if (hints.mut_ratio && std::abs(*hints.mut_ratio - kappa) > 1e-12 * kappa)
            throw infeasible("mut_ratio hint contradicts m");
    } else if (hints.mut_ratio) {
        if (!(*hints.mut_ratio > 0.0)) throw infeasible("mut_ratio must be positive");
        kappa = *hints.mut_ratio;
    }

    const double Gamma_a = fano.gamma_a + fano.gammabar_a;
    const double Gamma_b = fano.gamma_b + fano.gammabar_b;
    // Ratios below are independent of the overall scale x = mut_a * alpha_L.
    const Complex qbar_a = J_a > 0.0 ? q_b * kappa * V_b / J_a : Complex{0.0};
    const Complex qbar_b = J_b > 0.0 ? q_a * V_a / (kappa * J_b) : Complex{0.0};
    const Complex Q_a = (fano.gamma_a * q_a + fano.gammabar_a * qbar_a) / Gamma_a;
    const Complex Q_b = (fano.gamma_b * q_b + fano.gammabar_b * qbar_b) / Gamma_b;
    const Complex bracket = 0.5 * (std::sqrt(4.0 * kPi * Gamma_a) * (Q_a + kI) +
                                   kappa * std::sqrt(4.0 * kPi * Gamma_b) * (Q_b + kI));
    const double target = std::abs(*fano.Omega);
    if (std::abs(bracket) == 0.0) throw infeasible("Omega cannot be reached: pump bracket vanishes");
    const double x = target / std::abs(bracket);

    RawParams raw;
    raw.E_L = fano.E_L;
    raw.E_a0 = fano.E_L + fano.dE_a0;
    raw.E_b0 = fano.E_L + fano.dE_b0;
    raw.alpha_L = hints.alpha_L;
    raw.V_a = V_a;
    raw.V_b = V_b;
    raw.J_a = J_a;
    raw.J_b = J_b;
    raw.J_ab = fano.J_ab;
    raw.mut_a = x / hints.alpha_L;
    raw.mut_b = kappa * x / hints.alpha_L;
    raw.mu_a = kPi * q_a * raw.mut_a * V_a;
    raw.mu_b = kPi * q_b * raw.mut_b * V_b;
    return raw;
}

ValidationReport validate(const RawParams& raw) {
    ValidationReport report;
    auto finite = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    const std::pair<const char*, Complex> fields[] = {
        {"E_a0", raw.E_a0}, {"E_b0", raw.E_b0},   {"E_L", raw.E_L},     {"mu_a", raw.mu_a},
        {"mu_b", raw.mu_b}, {"mut_a", raw.mut_a}, {"mut_b", raw.mut_b}, {"V_a", raw.V_a},
        {"V_b", raw.V_b},   {"J_a", raw.J_a},     {"J_b", raw.J_b},     {"J_ab", raw.J_ab},
        {"alpha_L", raw.alpha_L}};
    for (const auto& [name, value] : fields)
        if (!finite(value)) report.issues.push_back(std::string(name) + " is not finite");
    if (!report.ok()) return report;

    if (!(raw.E_L > 0.0)) report.issues.push_back("E_L must be positive");

    const bool no_continuum = raw.V_a == 0.0 && raw.V_b == 0.0 && raw.mut_a == 0.0 &&
                              raw.mut_b == 0.0 && raw.J_a == 0.0 && raw.J_b == 0.0;
    const bool no_pump = raw.alpha_L == 0.0 ||
                         (raw.mu_a == 0.0 && raw.mu_b == 0.0 && raw.mut_a == 0.0 && raw.mut_b == 0.0);
    if (no_continuum || no_pump) {
        report.issues.push_back("model never ionizes");
        return report;
    }
    for (Atom j : {Atom::A, Atom::B}) {
        // Each electron reaches its continuum through mut_j, V_j or the
        // partner-induced J_j; with all three zero the long-time limit does not exist.
        if (raw.mut(j) == 0.0 && raw.V(j) == 0.0 && raw.J(j) == 0.0)
            report.issues.push_back(std::string("atom ") + atom_name(j) +
                                    " has no coupling to its continuum");
    }
    return report;
}

// ---------------------------------------------------------------------------
// configuration files

Complex parse_complex(std::string_view text) {
    std::string s(text);
    const auto comma = s.find(',');
    auto to_double = [&](const std::string& part) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigError, "cannot parse number '" + part + "'");
        }
        while (used < part.size() && std::isspace(static_cast<unsigned char>(part[used]))) ++used;
        if (used != part.size()) throw Error(ErrorCode::ConfigError, "trailing text in '" + part + "'");
        return v;
    };
    if (comma == std::string::npos) return {to_double(s), 0.0};
    return {to_double(s.substr(0, comma)), to_double(s.substr(comma + 1))};
}

std::string format_complex(Complex value) {
    std::ostringstream os;
    os << std::setprecision(17) << value.real();
    if (value.imag() != 0.0) os << ',' << value.imag();
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double real_value(const std::string& key, const std::string& text) {
    const Complex z = parse_complex(text);
    if (z.imag() != 0.0) throw Error(ErrorCode::ConfigError, key + " must be real");
    return z.real();
}

}  // namespace

ConfigMap parse_config(std::istream& in) {
    ConfigMap cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
        cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + path);
    return parse_config(in);
}

bool is_fano_config(const ConfigMap& cfg) {
    for (const char* key : {"gamma_a", "gamma_b", "gammabar_a", "gammabar_b", "q_a", "q_b", "m",
                            "Omega", "dE_a0", "dE_b0"})
        if (cfg.count(key)) return true;
    return false;
}

RawParams raw_from_config(const ConfigMap& cfg, RawParams raw) {
    for (const auto& [key, text] : cfg) {
        if (key == "E_a0") raw.E_a0 = real_value(key, text);
        else if (key == "E_b0") raw.E_b0 = real_value(key, text);
        else if (key == "E_L") raw.E_L = real_value(key, text);
        else if (key == "mu_a") raw.mu_a = parse_complex(text);
        else if (key == "mu_b") raw.mu_b = parse_complex(text);
        else if (key == "mut_a") raw.mut_a = parse_complex(text);
        else if (key == "mut_b") raw.mut_b = parse_complex(text);
        else if (key == "V_a") raw.V_a = parse_complex(text);
        else if (key == "V_b") raw.V_b = parse_complex(text);
        else if (key == "J_a") raw.J_a = parse_complex(text);
        else if (key == "J_b") raw.J_b = parse_complex(text);
        else if (key == "J_ab") raw.J_ab = parse_complex(text);
        else if (key == "alpha_L") raw.alpha_L = parse_complex(text);
        else throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
    }
    return raw;
}

FanoSpec fano_spec_from_config(const ConfigMap& cfg, FanoSpec spec) {
    for (const auto& [key, text] : cfg) {
        if (key == "gamma_a") spec.gamma_a = real_value(key, text);
        else if (key == "gamma_b") spec.gamma_b = real_value(key, text);
        else if (key == "gammabar_a") spec.gammabar_a = real_value(key, text);
        else if (key == "gammabar_b") spec.gammabar_b = real_value(key, text);
        else if (key == "q_a") spec.q_a = parse_complex(text);
        else if (key == "q_b") spec.q_b = parse_complex(text);
        else if (key == "m") spec.m = parse_complex(text);
        else if (key == "Omega") spec.Omega = std::abs(parse_complex(text));
        else if (key == "dE_a0") spec.dE_a0 = real_value(key, text);
        else if (key == "dE_b0") spec.dE_b0 = real_value(key, text);
        else if (key == "J_ab") spec.J_ab = parse_complex(text);
        else if (key == "E_L") spec.E_L = real_value(key, text);
        else if (key == "alpha_L") continue;  // scale hint, read by params_from_config
        else throw Error(ErrorCode::ConfigError, "unknown Fano key '" + key + "'");
    }
    return spec;
}

RawParams params_from_config(const ConfigMap& cfg, const RawParams& base) {
    if (!is_fano_config(cfg)) return raw_from_config(cfg, base);
    ScaleHints hints;
    if (auto it = cfg.find("alpha_L"); it != cfg.end()) hints.alpha_L = real_value("alpha_L", it->second);
    return realize_raw(fano_spec_from_config(cfg), hints);
}

void write_config(std::ostream& out, const RawParams& raw) {
    out << "E_a0 = " << format_complex(raw.E_a0) << '\n'
        << "E_b0 = " << format_complex(raw.E_b0) << '\n'
        << "E_L = " << format_complex(raw.E_L) << '\n'
        << "mu_a = " << format_complex(raw.mu_a) << '\n'
        << "mu_b = " << format_complex(raw.mu_b) << '\n'
        << "mut_a = " << format_complex(raw.mut_a) << '\n'
        << "mut_b = " << format_complex(raw.mut_b) << '\n'
        << "V_a = " << format_complex(raw.V_a) << '\n'
        << "V_b = " << format_complex(raw.V_b) << '\n'
        << "J_a = " << format_complex(raw.J_a) << '\n'
        << "J_b = " << format_complex(raw.J_b) << '\n'
        << "J_ab = " << format_complex(raw.J_ab) << '\n'
        << "alpha_L = " << format_complex(raw.alpha_L) << '\n';
}

}  // namespace fanopair
