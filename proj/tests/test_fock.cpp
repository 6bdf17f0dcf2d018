#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qjump/analytics.hpp"
#include "qjump/fock.hpp"
#include "qjump/special.hpp"

using namespace qjump;
using namespace qjump::fock;

namespace {

StateVector embed_ground_atom(const StateVector& field) {
    StateVector psi(Basis::AtomFock, field.l_max);
    for (int n = 0; n <= field.l_max; ++n) psi.amp[2 * n] = field.amp[n];
    return psi;
}

}  // namespace

TEST_CASE("coherent kets") {
    SUBCASE("vacuum") {
        StateVector v = coherent_ket(cx{0.0, 0.0}, 10);
        CHECK(v.amp[0] == cx{1.0, 0.0});
        for (int n = 1; n <= 10; ++n) CHECK(std::abs(v.amp[n]) == 0.0);
    }
    SUBCASE("mean photon number") {
        StateVector a = coherent_ket(cx{2.0, 0.0}, 30);
        CHECK(expectation(OpTag::PhotonNumber, a).real() == doctest::Approx(4.0).epsilon(1e-8));
    }
    SUBCASE("large amplitude") {
        // |alpha|^2 = 29.4125; truncation leakage at l_max = 60 is ~8e-6,
        // converged well below 1e-6 by l_max = 70
        StateVector a60 = coherent_ket(cx{1.7, -5.15}, 60);
        CHECK(expectation(OpTag::PhotonNumber, a60).real() ==
              doctest::Approx(29.4125).epsilon(1e-6));
        StateVector a70 = coherent_ket(cx{1.7, -5.15}, 70);
        CHECK(std::abs(expectation(OpTag::PhotonNumber, a70).real() - 29.4125) < 1e-6);
    }
    SUBCASE("unsafe truncation warns, non-finite rejects") {
        int warnings = 0;
        set_warning_sink([&](const std::string&) { ++warnings; });
        coherent_ket(cx{3.0, 0.0}, 10);  // |alpha|^2 = 9 > 5
        CHECK(warnings == 1);
        set_warning_sink(nullptr);
        CHECK_THROWS_AS(coherent_ket(cx{std::nan(""), 0.0}, 10), ValidationError);
    }
    SUBCASE("normalize is idempotent") {
        StateVector a = coherent_ket(cx{1.0, -0.5}, 40);
        a.normalize();
        CHECK(a.norm2() == doctest::Approx(1.0).epsilon(1e-12));
        a.normalize();
        CHECK(a.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("superposition kets") {
    SUBCASE("equal amplitudes give the coherent state back") {
        StateVector s = superposition_ket(cx{1.2, 0.3}, cx{1.2, 0.3}, 30);
        StateVector c = coherent_ket(cx{1.2, 0.3}, 30);
        c.normalize();
        for (int n = 0; n <= 30; ++n) CHECK(std::abs(s.amp[n] - c.amp[n]) < 1e-12);
    }
    SUBCASE("even cat has no odd amplitudes") {
        StateVector s = superposition_ket(cx{2.0, 0.0}, cx{-2.0, 0.0}, 40);
        for (int n = 1; n <= 40; n += 2) CHECK(std::abs(s.amp[n]) < 1e-12);
        CHECK(expectation(OpTag::PhotonNumber, s).real() ==
              doctest::Approx(4.0 * std::tanh(4.0)).epsilon(1e-9));
    }
    SUBCASE("photon number matches the closed form") {
        analytics::SuperpositionSpec spec{cx{1.7, -5.15}, cx{-2.25, -0.2}};
        StateVector s = superposition_ket(spec.alpha1, spec.alpha2, 120);
        CHECK(std::abs(expectation(OpTag::PhotonNumber, s).real() -
                       analytics::initial_superposition_photon(spec)) < 1e-9);
    }
}

TEST_CASE("Q function") {
    SUBCASE("vacuum") {
        DensityMatrix rho = projector(coherent_ket(cx{0.0, 0.0}, 10));
        PhaseGridSpec spec{-2, 2, -2, 2, 41, 41};
        PhaseGrid q = q_function(rho, spec);
        CHECK(q.at(20, 20) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
        CHECK(q.at(20, 30) == doctest::Approx(std::exp(-1.0) / M_PI).epsilon(1e-10));
    }
    SUBCASE("coherent state peaks at alpha with height 1/pi") {
        DensityMatrix rho = projector(coherent_ket(cx{1.0, 1.0}, 40));
        std::vector<cx> scratch;
        CHECK(q_function_point(rho, cx{1.0, 1.0}, scratch) ==
              doctest::Approx(1.0 / M_PI).epsilon(1e-9));
        CHECK(q_function_point(rho, cx{1.1, 1.0}, scratch) < 1.0 / M_PI);
    }
    SUBCASE("positivity and normalization") {
        StateVector s = superposition_ket(cx{1.5, 0.5}, cx{-1.0, -0.4}, 40);
        DensityMatrix rho = projector(s);
        PhaseGrid q = q_function(rho, PhaseGridSpec{-6, 6, -6, 6, 121, 121});
        double mn = 1e300;
        for (double v : q.values) mn = std::min(mn, v);
        CHECK(mn >= -1e-14);
        double mass = q.sum_times_area();
        CHECK(mass > 0.98);
        CHECK(mass < 1.001);
    }
}

TEST_CASE("Wigner function") {
    SUBCASE("vacuum") {
        DensityMatrix rho = projector(coherent_ket(cx{0.0, 0.0}, 10));
        std::vector<double> scratch;
        CHECK(wigner_point(rho, cx{0.0, 0.0}, scratch) ==
              doctest::Approx(2.0 / M_PI).epsilon(1e-12));
        CHECK(wigner_point(rho, cx{0.7, -0.3}, scratch) ==
              doctest::Approx(2.0 / M_PI * std::exp(-2.0 * 0.58)).epsilon(1e-10));
    }
    SUBCASE("one-photon Fock state is negative at the origin") {
        DensityMatrix rho(Basis::FockOnly, 5);
        rho.el(1, 1) = 1.0;
        std::vector<double> scratch;
        CHECK(wigner_point(rho, cx{0.0, 0.0}, scratch) ==
              doctest::Approx(-2.0 / M_PI).epsilon(1e-12));
    }
    SUBCASE("marginal reproduces the quadrature distribution") {
        // brute-force oracle: P(x) = sqrt(2) sum_mn rho_mn psi_m(sqrt2 x) psi_n(sqrt2 x)
        const int L = 10;
        StateVector s1 = superposition_ket(cx{1.0, 0.2}, cx{-0.8, 0.1}, L);
        StateVector s2 = coherent_ket(cx{0.3, -0.9}, L);
        DensityMatrix rho(Basis::FockOnly, L);
        DensityMatrix r1 = projector(s1), r2 = projector(s2);
        for (size_t i = 0; i < rho.el.size(); ++i)
            rho.el.data()[i] = 0.6 * r1.el.data()[i] + 0.4 * r2.el.data()[i];

        auto hermite_psi = [&](int nmax, double q, std::vector<double>& out) {
            out.resize(nmax + 1);
            double h0 = 1.0, h1 = 2.0 * q;
            for (int n = 0; n <= nmax; ++n) {
                double h = (n == 0) ? h0 : (n == 1) ? h1 : 0.0;
                if (n >= 2) {
                    h = 2.0 * q * h1 - 2.0 * (n - 1) * h0;
                    h0 = h1;
                    h1 = h;
                }
                out[n] = std::pow(M_PI, -0.25) *
                         std::exp(-0.5 * q * q - 0.5 * special::log_factorial(n) -
                                  0.5 * n * std::log(2.0)) *
                         h;
            }
        };
        PhaseGridSpec spec{-4, 4, -6, 6, 81, 601};
        PhaseGrid w = wigner_function(rho, spec);
        double dy = (spec.y_max - spec.y_min) / (spec.ny - 1);
        std::vector<double> psi_vals;
        double sup = 0.0;
        for (int ix = 0; ix < spec.nx; ++ix) {
            double x = w.x_at(ix);
            double marg = 0.0;
            for (int iy = 0; iy < spec.ny; ++iy) marg += w.at(iy, ix) * dy;
            hermite_psi(L, std::sqrt(2.0) * x, psi_vals);
            double px = 0.0;
            for (int m = 0; m <= L; ++m)
                for (int n = 0; n <= L; ++n)
                    px += (rho.el(m, n) * psi_vals[m] * psi_vals[n]).real();
            px *= std::sqrt(2.0);
            sup = std::max(sup, std::fabs(marg - px));
        }
        CHECK(sup < 1e-3);
    }
}

TEST_CASE("partial trace over the atom") {
    SUBCASE("product state") {
        StateVector field = coherent_ket(cx{1.3, -0.4}, 20);
        StateVector psi = embed_ground_atom(field);
        DensityMatrix rc = partial_trace_atom(projector(psi));
        DensityMatrix want = projector(field);
        for (int m = 0; m <= 20; ++m)
            for (int n = 0; n <= 20; ++n)
                CHECK(std::abs(rc.el(m, n) - want.el(m, n)) < 1e-14);
    }
    SUBCASE("maximally entangled") {
        StateVector psi(Basis::AtomFock, 5);
        psi.amp[2 * 0 + 0] = 1.0 / std::sqrt(2.0);  // |0,->
        psi.amp[2 * 1 + 1] = 1.0 / std::sqrt(2.0);  // |1,+>
        DensityMatrix rc = partial_trace_atom(projector(psi));
        CHECK(rc.el(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(rc.el(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(std::abs(rc.el(0, 1)) < 1e-14);
    }
    SUBCASE("trace preserved, basis checked") {
        StateVector psi(Basis::AtomFock, 8);
        for (int i = 0; i < psi.dim(); ++i) psi.amp[i] = cx{std::sin(i + 1.0), std::cos(2.0 * i)};
        psi.normalize();
        DensityMatrix full = projector(psi);
        DensityMatrix rc = partial_trace_atom(full);
        CHECK(rc.trace_real() == doctest::Approx(full.trace_real()).epsilon(1e-12));
        CHECK_THROWS_AS(partial_trace_atom(rc), ValidationError);
    }
}

TEST_CASE("expectation values") {
    StateVector a = coherent_ket(cx{1.5, -0.7}, 40);
    CHECK(expectation(OpTag::PhotonNumber, a).real() ==
          doctest::Approx(std::norm(cx{1.5, -0.7})).epsilon(1e-10));
    cx amp = expectation(OpTag::FieldAmplitude, a);
    CHECK(std::abs(amp - cx{1.5, -0.7}) < 1e-9);

    StateVector fock3(Basis::FockOnly, 10);
    fock3.amp[3] = 1.0;
    CHECK(std::abs(expectation(OpTag::FieldAmplitude, fock3)) == 0.0);
    CHECK(expectation(OpTag::PhotonNumber, fock3).real() == doctest::Approx(3.0));

    StateVector ground(Basis::AtomFock, 5);
    ground.amp[0] = 1.0;
    CHECK(expectation(OpTag::AtomicInversion, ground).real() == doctest::Approx(-1.0));
    CHECK(std::abs(expectation(OpTag::AtomicPolarization, ground)) == 0.0);

    // density-matrix overloads agree with the pure-state path
    DensityMatrix rho = projector(a);
    CHECK(expectation(OpTag::PhotonNumber, rho).real() ==
          doctest::Approx(expectation(OpTag::PhotonNumber, a).real()).epsilon(1e-12));
    CHECK(std::abs(expectation(OpTag::FieldAmplitude, rho) - amp) < 1e-12);
}

TEST_CASE("phase grid csv") {
    DensityMatrix rho = projector(coherent_ket(cx{0.0, 0.0}, 4));
    PhaseGrid q = q_function(rho, PhaseGridSpec{-1, 1, -1, 1, 3, 3});
    q.write_csv("test_grid.csv");
    std::ifstream in("test_grid.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,value");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 9);
    std::remove("test_grid.csv");
}
