#include "support.hpp"
#include "fanopair/fano.hpp"

#include <doctest.h>

#include <sstream>

using namespace fanopair;
using fanopair::testing::fig2;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("derive_fano: gamma from V") {
    RawParams r;
    r.V_a = 1.0 / std::sqrt(kPi);
    r.mut_a = 0.3;
    r.mu_a = 0.2;
    const FanoParams f = derive_fano(r);
    CHECK(f.gamma_a == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("derive_fano: no dipole-dipole coupling leaves qbar undefined") {
    const FanoParams f = derive_fano(fig2());
    CHECK(f.gammabar_a == 0.0);
    CHECK(f.gammabar_b == 0.0);
    CHECK_FALSE(f.qbar_a.has_value());
    CHECK_FALSE(f.qbar_b.has_value());
    CHECK_THROWS_AS(required(f.qbar_a, "qbar_a"), Error);
}

TEST_CASE("derive_fano: q = 1 from mu = sqrt(pi) mut") {
    RawParams r;
    r.V_a = r.V_b = 1.0 / std::sqrt(kPi);
    r.mut_a = r.mut_b = 0.7;
    r.mu_a = r.mu_b = std::sqrt(kPi) * 0.7;
    const FanoParams f = derive_fano(r);
    REQUIRE(f.q_a.has_value());
    CHECK(rel(*f.q_a, 1.0) < 1e-14);
}

TEST_CASE("realize_raw: Fig. 2 caption set") {
    const RawParams r = fig2();
    const double mut_alpha = 1.0 / std::sqrt(8.0 * kPi);
    CHECK(std::abs(r.V_a - 1.0 / std::sqrt(kPi)) < 1e-15);
    CHECK(std::abs(r.mut_a * r.alpha_L - mut_alpha) < 1e-15);
    CHECK(std::abs(r.mu_a * r.alpha_L - std::sqrt(kPi) * mut_alpha) < 1e-15);
    CHECK(r.J_a == 0.0);
}

TEST_CASE("realize_raw: gammabar = 1 gives J = pi^-1/2") {
    const RawParams r = fig2(1.0);
    CHECK(std::abs(r.J_a - 1.0 / std::sqrt(kPi)) < 1e-15);
    CHECK(std::abs(r.J_b - 1.0 / std::sqrt(kPi)) < 1e-15);
}

TEST_CASE("realize_raw: Fig. 4 balance case satisfies the simplified balance") {
    const RawParams r = fig2(1.0, 2.0);
    CHECK(std::abs(balance_residual(r)) < 1e-12);
}

TEST_CASE("round trip derive_fano(realize_raw(f)) over random caption sets") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 2.0), d(-1.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        FanoSpec s;
        s.gamma_a = u(rng);
        s.gamma_b = u(rng);
        s.gammabar_a = u(rng) - 0.1;
        s.gammabar_b = u(rng) - 0.1;
        s.q_a = 3.0 * u(rng);
        s.q_b = 3.0 * u(rng);
        s.m = u(rng);
        s.Omega = u(rng);
        s.dE_a0 = d(rng);
        s.dE_b0 = d(rng);
        s.J_ab = d(rng);
        const RawParams raw = realize_raw(s);
        const FanoParams f = derive_fano(raw);
        CHECK(rel(f.gamma_a, s.gamma_a) < 1e-12);
        CHECK(rel(f.gamma_b, s.gamma_b) < 1e-12);
        CHECK(rel(f.gammabar_a, s.gammabar_a) < 1e-12);
        CHECK(rel(f.gammabar_b, s.gammabar_b) < 1e-12);
        CHECK(rel(*f.q_a, s.q_a) < 1e-12);
        CHECK(rel(*f.q_b, s.q_b) < 1e-12);
        CHECK(rel(*f.m, s.m) < 1e-12);
        CHECK(rel(std::abs(*f.Omega), s.Omega) < 1e-12);
        CHECK(std::abs(f.dE_a0 - s.dE_a0) < 1e-12);
        // identities of the parametrization
        CHECK(f.Gamma_a == doctest::Approx(f.gamma_a + f.gammabar_a).epsilon(1e-15));
        if (f.qbar_a && f.Gamma_a > 0.0)
            CHECK(rel(*f.Q_a, (f.gamma_a * *f.q_a + f.gammabar_a * *f.qbar_a) / f.Gamma_a) < 1e-13);
        // conventions: real nonnegative V, J, mut alpha
        for (Complex z : {raw.V_a, raw.V_b, raw.J_a, raw.J_b, raw.mut_a * raw.alpha_L, raw.mut_b * raw.alpha_L}) {
            CHECK(z.imag() == 0.0);
            CHECK(z.real() >= 0.0);
        }
    }
}

TEST_CASE("realize_raw: infeasible inputs") {
    FanoSpec s;
    s.gamma_a = -1.0;
    CHECK_THROWS_AS(realize_raw(s), Error);
    try {
        realize_raw(s);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfeasibleParams);
    }
}

TEST_CASE("validate") {
    RawParams dead;
    dead.mu_a = dead.mu_b = 0.3;
    auto rep = validate(dead);
    REQUIRE_FALSE(rep.ok());
    bool never = false;
    for (const auto& s : rep.issues) never = never || s.find("never ionizes") != std::string::npos;
    CHECK(never);

    RawParams bad = fig2();
    bad.E_L = 0.0;
    CHECK_FALSE(validate(bad).ok());

    CHECK(validate(fig2()).ok());
}

TEST_CASE("config files: parse, precedence and errors") {
    std::istringstream in("# caption values\n gamma_a = 1\ngamma_b=1\nq_a = 1\nq_b = 1\nOmega = 1\nm = 1\n"
                          "gammabar_a = 1 \ngammabar_b = 1\n");
    const ConfigMap cfg = parse_config(in);
    CHECK(is_fano_config(cfg));
    const RawParams r = params_from_config(cfg);
    CHECK(std::abs(r.J_a - 1.0 / std::sqrt(kPi)) < 1e-15);

    std::istringstream raw_in("V_a = 0.5,0.25\nJ_ab = 2\n");
    const RawParams q = params_from_config(parse_config(raw_in));
    CHECK(q.V_a == Complex(0.5, 0.25));
    CHECK(q.J_ab == Complex(2.0, 0.0));

    std::istringstream unknown("nonsense = 1\n");
    CHECK_THROWS_AS(params_from_config(parse_config(unknown)), Error);

    std::ostringstream out;
    write_config(out, q);
    std::istringstream back(out.str());
    const RawParams q2 = params_from_config(parse_config(back));
    CHECK(q2.V_a == q.V_a);
    CHECK(q2.J_ab == q.J_ab);
}

TEST_CASE("complex text format round-trips") {
    for (Complex z : {Complex(1.0, 0.0), Complex(-0.1, 3e-17), Complex(0.0, -2.5)})
        CHECK(parse_complex(format_complex(z)) == z);
}
