#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "qjump/mcwf.hpp"
#include "qjump/steady.hpp"

using namespace qjump;
using namespace qjump::steady;

namespace {

models::ModelParams jc(double g, double eps, double dw, double gamma = 0.0) {
    models::ModelParams p;
    p.kind = models::ModelKind::JC;
    p.g = g;
    p.epsilon = eps;
    p.delta_omega = dw;
    p.gamma = gamma;
    return p;
}

models::ModelParams kerr(double kap, double eps, double dw) {
    models::ModelParams p;
    p.kind = models::ModelKind::Kerr;
    p.kappa = kap;
    p.chi = 1.0;
    p.epsilon = eps;
    p.delta_omega = dw;
    return p;
}

double min_eigenvalue(const fock::DensityMatrix& rho) {
    Eigen::MatrixXcd m(rho.dim(), rho.dim());
    for (int i = 0; i < rho.dim(); ++i)
        for (int j = 0; j < rho.dim(); ++j) m(i, j) = rho.el(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("coherent steady state of the linear cavity") {
    SteadyOptions opt;
    opt.tol = 1e-10;
    SteadyReport rep = steady_state(jc(0, 2, 0), 24, opt);
    CHECK(rep.photon_number == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(rep.g2_zero == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.residual < 1e-10);
}

TEST_CASE("low-amplitude bistability steady state") {
    SteadyOptions opt;
    opt.tol = 1e-9;
    SteadyReport rep = steady_state(jc(25, 5.3, -8), 25, opt);
    // paper values 2.46 and 1.75; sparse-LU oracle 2.4606836 / 1.7498954
    CHECK(rep.photon_number == doctest::Approx(2.4606836).epsilon(2e-4));
    CHECK(rep.g2_zero == doctest::Approx(1.7498954).epsilon(2e-4));
    CHECK(rep.residual < 1e-9);

    // state invariants
    CHECK(rep.rho_ss.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.rho_ss.hermiticity_residual() < 1e-12);
    CHECK(min_eigenvalue(rep.rho_ss) > -1e-8);

    // bimodal Q function: dim peak near the origin, bright peak in the
    // fourth quadrant at the oracle location (0.85, -1.90)
    fock::DensityMatrix rc = fock::partial_trace_atom(rep.rho_ss);
    auto peaks = mcwf::find_q_peaks(rc, fock::PhaseGridSpec{-3, 3, -4, 2, 121, 121});
    REQUIRE(peaks.size() >= 2);
    bool found_dim = false, found_bright = false;
    for (const auto& pk : peaks) {
        if (std::abs(pk.alpha - cx{0.0, 0.1}) < 0.3) found_dim = true;
        if (std::abs(pk.alpha - cx{0.85, -1.90}) < 0.3) found_bright = true;
    }
    CHECK(found_dim);
    CHECK(found_bright);
}

TEST_CASE("multiphoton resonance benchmarks") {
    SteadyOptions opt;
    opt.tol = 1e-9;
    SteadyReport a = multiphoton_reference(jc(50, 5.3, 36.10), 20, opt);
    CHECK(a.photon_number == doctest::Approx(0.56).epsilon(0.02));
    CHECK(a.g2_zero == doctest::Approx(0.85).epsilon(0.02));
    CHECK(a.photon_number == doctest::Approx(0.5638422).epsilon(1e-3));
    CHECK(a.g2_zero == doctest::Approx(0.8497142).epsilon(1e-3));

    SteadyReport b = multiphoton_reference(jc(50, 5.3, 29.35), 20, opt);
    CHECK(b.photon_number == doctest::Approx(0.3908064).epsilon(1e-3));
    CHECK(b.g2_zero == doctest::Approx(2.3066390).epsilon(1e-3));

    SteadyReport c = steady_state(jc(0, 1.0, 0.7), 12, opt);
    CHECK(c.g2_zero == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kerr analytic wigner function") {
    SUBCASE("normalization and positivity") {
        fock::PhaseGrid w =
            kerr_wigner_analytic(kerr(2, 16.5, 20), fock::PhaseGridSpec{-6, 6, -6, 6, 241, 241});
        CHECK(w.sum_times_area() == doctest::Approx(1.0).epsilon(1e-3));
        double mn = 1e300;
        for (double v : w.values) mn = std::min(mn, v);
        CHECK(mn >= -1e-12);
        // moment identity: <a^dag a> = int W (x^2+y^2) - 1/2, caption value 8.11
        double m2 = 0.0;
        for (int iy = 0; iy < w.spec.ny; ++iy)
            for (int ix = 0; ix < w.spec.nx; ++ix) {
                double x = w.x_at(ix), y = w.y_at(iy);
                m2 += w.at(iy, ix) * (x * x + y * y);
            }
        m2 = m2 * w.cell_area() - 0.5;
        CHECK(m2 == doctest::Approx(8.11).epsilon(0.01));
        CHECK(m2 == doctest::Approx(8.1139045).epsilon(1e-3));
    }
    SUBCASE("series budget error fires for extreme arguments") {
        CHECK_THROWS_AS(kerr_wigner_analytic_point(6.0, -6.0, kerr(2, 2.0e5, 20)),
                        NumericalError);
    }
    SUBCASE("master-equation cross-validation at a fast-relaxing point") {
        models::ModelParams p = kerr(2, 5, 6);
        SteadyOptions opt;
        opt.tol = 1e-10;
        SteadyReport rep = steady_state(p, 40, opt);
        CHECK(rep.photon_number == doctest::Approx(3.0851099).epsilon(2e-4));
        fock::PhaseGridSpec spec{-4, 4, -4, 4, 81, 81};
        fock::PhaseGrid wa = kerr_wigner_analytic(p, spec);
        fock::PhaseGrid wn = fock::wigner_function(rep.rho_ss, spec);
        double maxdiff = 0.0;
        for (size_t i = 0; i < wa.values.size(); ++i)
            maxdiff = std::max(maxdiff, std::fabs(wa.values[i] - wn.values[i]));
        CHECK(maxdiff < 1e-3);
    }
}

TEST_CASE("steady-state error paths") {
    SUBCASE("non-convergence reports the residual") {
        SteadyOptions opt;
        opt.tol = 1e-9;
        opt.max_time = 0.5;  // far too short
        opt.accelerate = false;
        CHECK_THROWS_AS(steady_state(jc(25, 5.3, -8), 25, opt), NumericalError);
    }
}
