#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "qjump/models.hpp"

using namespace qjump;
using namespace qjump::models;

namespace {

Eigen::MatrixXcd to_eigen(const CMat& m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

double hermiticity_residual(const CMat& m) {
    double r = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
    return r;
}

ModelParams jc(double g, double eps, double dw, double gamma = 0.0) {
    ModelParams p;
    p.kind = ModelKind::JC;
    p.g = g;
    p.epsilon = eps;
    p.delta_omega = dw;
    p.gamma = gamma;
    return p;
}

ModelParams kerr(double kap, double eps, double dw) {
    ModelParams p;
    p.kind = ModelKind::Kerr;
    p.kappa = kap;
    p.chi = 1.0;
    p.epsilon = eps;
    p.delta_omega = dw;
    return p;
}

fock::DensityMatrix random_hermitian_state(int l_max, fock::Basis basis, unsigned seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    fock::DensityMatrix rho(basis, l_max);
    int D = rho.dim();
    CMat A(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) A(i, j) = cx{d(eng), d(eng)};
    // rho = A A^dag / tr, positive by construction
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            cx s{0.0, 0.0};
            for (int k = 0; k < D; ++k) s += A(i, k) * std::conj(A(j, k));
            rho.el(i, j) = s;
        }
    rho.normalize();
    return rho;
}

}  // namespace

TEST_CASE("jc hamiltonian structure") {
    SUBCASE("decoupled limit is diagonal") {
        CMat H = jc_hamiltonian(jc(0, 0, -8), 6);
        for (int n = 0; n <= 6; ++n)
            for (int s = 0; s < 2; ++s)
                CHECK(H(2 * n + s, 2 * n + s) == cx{8.0 * (n + s), 0.0});
        for (int i = 0; i < H.rows(); ++i)
            for (int j = 0; j < H.cols(); ++j)
                if (i != j) CHECK(std::abs(H(i, j)) == 0.0);
    }
    SUBCASE("dressed-state splitting at resonance") {
        CMat H = jc_hamiltonian(jc(25, 0, 0), 10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(H));
        auto ev = es.eigenvalues();
        std::vector<double> vals(ev.data(), ev.data() + ev.size());
        std::sort(vals.begin(), vals.end(), [](double a, double b) { return a < b; });
        // eigenvalues come in pairs +-g sqrt(n); check n = 1, 2
        auto has = [&](double want) {
            for (double v : vals)
                if (std::fabs(v - want) < 1e-9) return true;
            return false;
        };
        CHECK(has(25.0));
        CHECK(has(-25.0));
        CHECK(has(25.0 * std::sqrt(2.0)));
        CHECK(has(-25.0 * std::sqrt(2.0)));
    }
    SUBCASE("figure-1 parameters: hermitian, right dimensions") {
        CMat H = jc_hamiltonian(jc(25, 5.3, -8), 25);
        CHECK(H.rows() == 52);
        CHECK(H.cols() == 52);
        CHECK(hermiticity_residual(H) < 1e-12);
    }
    SUBCASE("commutes with total excitation when undriven") {
        CMat H = jc_hamiltonian(jc(25, 0, -8), 12);
        int D = H.rows();
        Eigen::MatrixXcd Hm = to_eigen(H);
        Eigen::VectorXd N(D);
        for (int n = 0; n <= 12; ++n)
            for (int s = 0; s < 2; ++s) N(2 * n + s) = n + s;
        Eigen::MatrixXcd C = Hm * N.asDiagonal().toDenseMatrix().cast<cx>() -
                             N.asDiagonal().toDenseMatrix().cast<cx>() * Hm;
        CHECK(C.cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("mode mismatch rejected") {
        CHECK_THROWS_AS(jc_hamiltonian(kerr(2, 1, 1), 5), ValidationError);
    }
}

TEST_CASE("effective hamiltonian") {
    SUBCASE("anti-hermitian part") {
        CMat H = jc_effective_hamiltonian(jc(25, 5.3, -8), 10);
        // (H - H^dag)/2 = -i kappa n
        for (int n = 0; n <= 10; ++n)
            for (int s = 0; s < 2; ++s) {
                cx anti = 0.5 * (H(2 * n + s, 2 * n + s) -
                                 std::conj(H(2 * n + s, 2 * n + s)));
                CHECK(std::abs(anti - cx{0.0, -1.0 * n}) < 1e-12);
            }
    }
    SUBCASE("vacuum is a null vector of the anti-hermitian part") {
        CMat H = jc_effective_hamiltonian(jc(25, 5.3, -8, 0.0), 10);
        CHECK(std::abs(H(0, 0).imag()) == 0.0);
    }
    SUBCASE("trace of the anti-hermitian part") {
        double gamma = 3.0;
        int L = 9;
        CMat H = jc_effective_hamiltonian(jc(10, 2, -3, gamma), L);
        cx tr{0.0, 0.0};
        for (int i = 0; i < H.rows(); ++i) tr += 0.5 * (H(i, i) - std::conj(H(i, i)));
        // -i kappa sum_n 2n - i (gamma/2)(L+1)
        double want = -(2.0 * (L * (L + 1) / 2.0) + 0.5 * gamma * (L + 1));
        CHECK(tr.real() == doctest::Approx(0.0));
        CHECK(tr.imag() == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("jc lindblad right-hand side") {
    SUBCASE("vacuum is dark when undriven") {
        fock::DensityMatrix rho(fock::Basis::AtomFock, 8);
        rho.el(0, 0) = 1.0;
        fock::DensityMatrix d = jc_lindblad_rhs(rho, jc(25, 0, -8));
        double mx = 0.0;
        for (size_t i = 0; i < d.el.size(); ++i) mx = std::max(mx, std::abs(d.el.data()[i]));
        CHECK(mx < 1e-14);
    }
    SUBCASE("trace-free and hermiticity-preserving on random states") {
        for (unsigned s = 0; s < 100; ++s) {
            fock::DensityMatrix rho = random_hermitian_state(6, fock::Basis::AtomFock, s);
            fock::DensityMatrix d = jc_lindblad_rhs(rho, jc(12, 3, -5, 1.7));
            double tr = 0.0;
            for (int i = 0; i < d.dim(); ++i) tr += d.el(i, i).real();
            CHECK(std::fabs(tr) < 1e-12);
            CHECK(hermiticity_residual(d.el) < 1e-12);
        }
    }
    SUBCASE("damped cavity amplitude decay") {
        // g = eps = gamma = 0: d<a>/dt = -kappa <a>
        fock::StateVector field = fock::coherent_ket(cx{1.2, -0.5}, 25);
        fock::StateVector psi(fock::Basis::AtomFock, 25);
        for (int n = 0; n <= 25; ++n) psi.amp[2 * n] = field.amp[n];
        fock::DensityMatrix rho = fock::projector(psi);
        fock::DensityMatrix d = jc_lindblad_rhs(rho, jc(0, 0, 0));
        // d<a>/dt = Tr[a drho]
        cx da{0.0, 0.0};
        for (int n = 0; n + 1 <= 25; ++n) {
            double r = std::sqrt(n + 1.0);
            da += r * (d.el(2 * (n + 1), 2 * n) + d.el(2 * (n + 1) + 1, 2 * n + 1));
        }
        CHECK(std::abs(da - (-cx{1.2, -0.5})) < 1e-10);
    }
}

TEST_CASE("kerr lindblad right-hand side") {
    SUBCASE("vacuum dark state") {
        fock::DensityMatrix rho(fock::Basis::FockOnly, 8);
        rho.el(0, 0) = 1.0;
        fock::DensityMatrix d = kerr_lindblad_rhs(rho, kerr(2, 0, 20));
        double mx = 0.0;
        for (size_t i = 0; i < d.el.size(); ++i) mx = std::max(mx, std::abs(d.el.data()[i]));
        CHECK(mx < 1e-14);
    }
    SUBCASE("trace preserved on random states") {
        for (unsigned s = 0; s < 50; ++s) {
            fock::DensityMatrix rho = random_hermitian_state(9, fock::Basis::FockOnly, 1000 + s);
            fock::DensityMatrix d = kerr_lindblad_rhs(rho, kerr(2, 16.5, 20));
            double tr = 0.0;
            for (int i = 0; i < d.dim(); ++i) tr += d.el(i, i).real();
            CHECK(std::fabs(tr) < 1e-12);
            CHECK(hermiticity_residual(d.el) < 1e-12);
        }
    }
}

TEST_CASE("model params validation and ramp") {
    ModelParams p = jc(25, 5.3, -8);
    p.eta = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.eta = 1.0;
    p.chi = 1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);

    ModelParams r = jc(50, 13.0, -8);
    r.has_ramp = true;
    r.ramp_start = 0.0;
    r.ramp_stop = 13.0;
    r.ramp_duration = 800.0;
    CHECK(r.epsilon_at(0.0) == 0.0);
    CHECK(r.epsilon_at(400.0) == doctest::Approx(6.5));
    CHECK(r.epsilon_at(900.0) == 13.0);
}
