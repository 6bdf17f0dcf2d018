#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "qjump/analytics.hpp"
#include "qjump/semiclassical.hpp"

using namespace qjump;
using namespace qjump::analytics;

namespace {
const SuperpositionSpec kFig2{cx{1.7, -5.15}, cx{-2.25, -0.2}};
}

TEST_CASE("initial superposition photon number") {
    SUBCASE("degenerate amplitudes") {
        SuperpositionSpec s{cx{1.3, -0.8}, cx{1.3, -0.8}};
        CHECK(initial_superposition_photon(s) ==
              doctest::Approx(std::norm(cx{1.3, -0.8})).epsilon(1e-14));
    }
    SUBCASE("even cat") {
        SuperpositionSpec s{cx{2.0, 0.0}, cx{-2.0, 0.0}};
        CHECK(initial_superposition_photon(s) ==
              doctest::Approx(4.0 * std::tanh(4.0)).epsilon(1e-14));
    }
    SUBCASE("frozen value for the figure-2 amplitudes") {
        CHECK(initial_superposition_photon(kFig2) ==
              doctest::Approx(17.2575).epsilon(1e-5));
    }
}

TEST_CASE("null-record photon number") {
    SUBCASE("single damped coherent state") {
        SuperpositionSpec s{cx{2.1, -0.3}, cx{2.1, -0.3}};
        for (double t : {0.0, 0.1, 0.5, 2.0})
            CHECK(null_record_photon_exact(s, t) ==
                  doctest::Approx(std::norm(cx{2.1, -0.3}) * std::exp(-2.0 * t)).epsilon(1e-12));
    }
    SUBCASE("t = 0 equals the initial photon number") {
        CHECK(null_record_photon_exact(kFig2, 0.0) ==
              doctest::Approx(initial_superposition_photon(kFig2)).epsilon(1e-14));
    }
    SUBCASE("reaches the unstable-state excitation at the intersection time") {
        CHECK(null_record_photon_exact(kFig2, 0.0743) == doctest::Approx(5.1025).epsilon(0.0098));
    }
    SUBCASE("approximation is tight for well-separated amplitudes") {
        double sup = 0.0;
        for (int k = 0; k <= 300; ++k) {
            double t = 0.3 * k / 300.0;
            sup = std::max(sup, std::fabs(null_record_photon_exact(kFig2, t) -
                                          null_record_photon_approx(kFig2, t)));
        }
        CHECK(sup < 1e-6);
        // doubling both amplitudes strictly tightens it
        SuperpositionSpec s2{2.0 * kFig2.alpha1, 2.0 * kFig2.alpha2};
        double sup2 = 0.0;
        for (int k = 0; k <= 300; ++k) {
            double t = 0.3 * k / 300.0;
            sup2 = std::max(sup2, std::fabs(null_record_photon_exact(s2, t) -
                                            null_record_photon_approx(s2, t)));
        }
        CHECK(sup2 < sup);
    }
    SUBCASE("approximation decays to zero") {
        CHECK(null_record_photon_approx(kFig2, 50.0) < 1e-10);
    }
    SUBCASE("monotone decay for |alpha1| > |alpha2|") {
        for (const auto& s :
             {kFig2, SuperpositionSpec{cx{1.8, -5.45}, cx{-1.8, 0.0}},
              SuperpositionSpec{cx{0.3, -2.38}, cx{-0.175, -0.53}}}) {
            double prev = null_record_photon_exact(s, 0.0);
            for (int k = 1; k <= 1000; ++k) {
                double cur = null_record_photon_exact(s, 2.0 * k / 1000.0);
                CHECK(cur <= prev + 1e-12);
                prev = cur;
            }
        }
    }
    SUBCASE("survival factor identities") {
        for (double x : {0.0, 0.7, 3.0, 29.4125}) {
            CHECK(semiclassical::null_survival(x, 0.0) == 1.0);
            CHECK(semiclassical::null_survival(x, 1e9) ==
                  doctest::Approx(std::exp(-x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("null-record density matrix") {
    const int L = 120;
    SUBCASE("t = 0 is the initial superposition") {
        fock::DensityMatrix rho = null_record_density_matrix(kFig2, 0.0, L);
        fock::DensityMatrix want =
            fock::projector(fock::superposition_ket(kFig2.alpha1, kFig2.alpha2, L));
        double mx = 0.0;
        for (size_t i = 0; i < rho.el.size(); ++i)
            mx = std::max(mx, std::abs(rho.el.data()[i] - want.el.data()[i]));
        CHECK(mx < 1e-12);
    }
    SUBCASE("unit trace and internal consistency at all times") {
        for (double t : {0.0, 0.02, 0.0743, 0.2, 1.0}) {
            fock::DensityMatrix rho = null_record_density_matrix(kFig2, t, L);
            CHECK(rho.trace_real() == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(fock::expectation(fock::OpTag::PhotonNumber, rho).real() ==
                  doctest::Approx(null_record_photon_exact(kFig2, t)).epsilon(1e-9));
        }
    }
    SUBCASE("stays positive semidefinite") {
        for (double t : {0.0, 0.05, 0.3}) {
            fock::DensityMatrix rho = null_record_density_matrix(kFig2, t, 80);
            Eigen::MatrixXcd m(rho.dim(), rho.dim());
            for (int i = 0; i < rho.dim(); ++i)
                for (int j = 0; j < rho.dim(); ++j) m(i, j) = rho.el(i, j);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
            CHECK(es.eigenvalues().minCoeff() > -1e-9);
        }
    }
    SUBCASE("coherence blocks peak near (|a1|^2, |a2|^2)") {
        fock::DensityMatrix rho = null_record_density_matrix(kFig2, 0.0, L);
        // search the upper off-diagonal block m > n + 5
        int bm = 0, bn = 0;
        double best = 0.0;
        for (int m = 0; m <= L; ++m)
            for (int n = 0; n + 5 < m; ++n)
                if (std::abs(rho.el(m, n)) > best) {
                    best = std::abs(rho.el(m, n));
                    bm = m;
                    bn = n;
                }
        CHECK(std::abs(bm - std::norm(kFig2.alpha1)) <= 2.0);
        CHECK(std::abs(bn - std::norm(kFig2.alpha2)) <= 2.0);
    }
}

TEST_CASE("poisson counting distribution") {
    SUBCASE("null probability matches the survival factor") {
        for (double t : {0.1, 0.5, 3.0})
            CHECK(poisson_count_prob(cx{2.0, 0.0}, t, 0) ==
                  doctest::Approx(semiclassical::null_survival(4.0, t)).epsilon(1e-14));
    }
    SUBCASE("normalized") {
        double sum = 0.0;
        for (int n = 0; n <= 40; ++n) sum += poisson_count_prob(cx{2.0, 0.0}, 1.3, n);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("long-time limit") {
        CHECK(poisson_count_prob(cx{2.0, 0.0}, 100.0, 4) ==
              doctest::Approx(256.0 * std::exp(-4.0) / 24.0).epsilon(1e-12));
        CHECK(poisson_count_prob(cx{2.0, 0.0}, 100.0, 4) ==
              doctest::Approx(0.19537).epsilon(1e-4));
    }
}

TEST_CASE("jump overlay") {
    SUBCASE("self-consistent on a synthetic record") {
        // record generated by the formula itself, shifted to t_mid = 2.0
        RecordSamples rec;
        double n0 = initial_superposition_photon(kFig2);
        for (int k = 0; k <= 4000; ++k) {
            double t = 4.0 * k / 4000.0;
            double n = t < 2.0 ? 2.0 * n0 - null_record_photon_exact(kFig2, 2.0 - t)
                               : null_record_photon_exact(kFig2, t - 2.0);
            rec.t.push_back(t);
            rec.n.push_back(n);
        }
        JumpOverlay ov = build_jump_overlay(rec, kFig2, 1.5, 2.5);
        CHECK(ov.t_mid == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(ov.n_mid == doctest::Approx(n0).epsilon(1e-12));
        // forward branch matches the record exactly
        double sup = 0.0;
        for (size_t i = 0; i + 1 < ov.forward_curve.t.size(); ++i) {  // last point is off-grid
            double t = ov.forward_curve.t[i];
            size_t k = static_cast<size_t>(std::lround(t / (4.0 / 4000.0)));
            if (k < rec.t.size())
                sup = std::max(sup, std::fabs(ov.forward_curve.n[i] - rec.n[k]));
        }
        CHECK(sup < 1e-6);
        // point symmetry about (t_mid, n_mid), endpoints included
        CHECK(ov.inverted_curve.n.front() + ov.forward_curve.n.back() ==
              doctest::Approx(2.0 * ov.n_mid).epsilon(1e-12));
        CHECK(ov.forward_curve.n.front() == doctest::Approx(ov.n_mid).epsilon(1e-12));
        CHECK(ov.inverted_curve.n.back() == doctest::Approx(ov.n_mid).epsilon(1e-12));
    }
    SUBCASE("missing crossing is reported with the window") {
        RecordSamples rec;
        for (int k = 0; k <= 100; ++k) {
            rec.t.push_back(0.01 * k);
            rec.n.push_back(1.0);  // never crosses n_mid ~ 17
        }
        CHECK_THROWS_WITH_AS(build_jump_overlay(rec, kFig2, 0.2, 0.8),
                             doctest::Contains("window"), ValidationError);
    }
}
