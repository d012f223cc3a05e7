#include "support.hpp"
#include "fanopair/oracle.hpp"

#include <doctest.h>

using namespace fanopair;
using namespace fanopair::testing;

TEST_CASE("single atom: initial state, Fano zero, norm") {
    const RawParams r = fig2();
    for (Atom j : {Atom::A, Atom::B}) {
        const SingleAtom s = single_atom(r, j);
        CHECK((s.c(0.0) - Vec2(1.0, 0.0)).norm() < 1e-14);
        CHECK(std::abs(s.d(0.7, 0.0)) < 1e-14);
        CHECK(std::abs(s.longtime_norm() - 1.0) < 1e-10);
        CHECK(std::abs(s.total_norm(3.0) - 1.0) < 2e-3);
        // q = 1, gamma = 1: zero one width below E0 = 1
        const double peak = std::norm(s.d_longtime(1.0 + 0.5));
        CHECK(std::norm(s.d_longtime(0.0)) < 1e-20 * std::max(1.0, peak));
    }
}

TEST_CASE("product reference reproduces the full model for uncoupled atoms") {
    for (const RawParams& r : {fig2(), fig2(0.0, 0.0, 100.0, 3.0)}) {
        const Model m = make_model(r);
        const EnergyGrid g = make_grid(m, {GridKind::Adapted, 64, 12.0});
        const JointSpectrum full = sample_joint(m, g);
        const JointSpectrum ref = product_reference(r, g);
        CHECK((full.intensity - ref.intensity).cwiseAbs().maxCoeff() < 1e-8 * full.intensity.maxCoeff());

        // marginals of the product are the single-atom spectra up to the partner norm
        const MarginalSpectrum ma = marginal(ref, Atom::A);
        const SingleAtom sb = single_atom(r, Atom::B);
        const SingleAtom sa = single_atom(r, Atom::A);
        double nb = 0.0;
        for (std::size_t j = 0; j < g.axis_b.size(); ++j) nb += g.weights_b[j] * std::norm(sb.d_longtime(g.axis_b[j]));
        for (std::size_t i = 0; i < ma.energies.size(); i += 7)
            CHECK(std::abs(ma.intensity[i] - nb * std::norm(sa.d_longtime(ma.energies[i]))) <
                  1e-10 * std::max(1.0, ma.intensity[i]));
    }
    CHECK_THROWS_AS(product_reference(fig2(1.0), uniform_grid(1.0, 2.0, 8)), Error);
    CHECK_THROWS_AS(product_reference(fig2(0.0, 0.5), uniform_grid(1.0, 2.0, 8)), Error);
}

TEST_CASE("cross terms vanish without dipole-dipole coupling and appear with it") {
    const RawParams free = fig2();
    const auto s0 = default_crossterm_samples(free);
    CHECK(crossterm_residual(free, s0, Atom::A) < 1e-8);
    CHECK(crossterm_residual(free, s0, Atom::B) < 1e-8);
    for (const auto& s : s0) CHECK(crossterm_integral(free, s) < 1e-12);

    const RawParams coupled = fig2(0.0, 1.0);
    const auto s1 = default_crossterm_samples(coupled);
    const double ra = crossterm_residual(coupled, s1, Atom::A);
    const double rb = crossterm_residual(coupled, s1, Atom::B);
    CHECK(ra > 1e-3);
    CHECK(std::abs(ra - rb) < 1e-8 * std::max(1.0, ra));  // identical atoms
}

TEST_CASE("direct propagation: trivial step, norm, guards") {
    const RawParams r = fig2(1.0);
    const PropagationResult z = propagate_full(r, 16, 4.0, 0.0, 0.5);
    CHECK((z.c - Vec4(1.0, 0.0, 0.0, 0.0)).norm() < 1e-15);
    CHECK(z.d.norm() < 1e-15);

    const PropagationResult p = propagate_full(r, 16, 4.0, 6.0, 0.5);
    CHECK(std::abs(p.norm - 1.0) < 1e-8);

    CHECK_THROWS_AS(propagate_full(r, 65, 4.0, 1.0, 0.5), Error);
    CHECK_THROWS_AS(propagate_full(r, 16, 4.0, 1.01 * recurrence_time(16, 4.0), 0.5), Error);
    try {
        propagate_full(r, 16, 4.0, 2.0 * recurrence_time(16, 4.0), 0.5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RecurrenceBound);
    }
}

TEST_CASE("direct propagation converges to the pole expansion as the comb refines") {
    for (double gb : {0.0, 1.0}) {
        const RawParams r = fig2(gb);
        const Model m = make_model(r);
        std::vector<double> dev;
        // fixed spacing ~0.5, so the recurrence time and the sampled time stay fixed
        for (int G : {16, 32, 64}) {
            const double W = 0.25 * (G - 1);
            const double T = 0.9 * recurrence_time(G, W);
            dev.push_back(propagation_deviation(m, propagate_full(r, G, W, T, 0.5)));
        }
        CHECK(dev[1] < dev[0]);
        CHECK(dev[2] < dev[1]);
        CHECK(dev[2] < 0.03);
    }
}
