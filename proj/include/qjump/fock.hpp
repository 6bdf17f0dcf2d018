#pragma once

#include <string>
#include <vector>

#include "qjump/core.hpp"

namespace qjump::fock {

// Truncated bases. AtomFock indexes |n,s> as i = 2n + s with s = 0 the lower
// and s = 1 the upper atomic state, n = 0..l_max.
enum class Basis { FockOnly, AtomFock };

inline int dim_of(Basis b, int l_max) {
    return b == Basis::FockOnly ? l_max + 1 : 2 * (l_max + 1);
}

struct StateVector {
    Basis basis = Basis::FockOnly;
    int l_max = 0;
    std::vector<cx> amp;

    StateVector() = default;
    StateVector(Basis b, int l) : basis(b), l_max(l), amp(dim_of(b, l), cx{0.0, 0.0}) {}

    int dim() const { return static_cast<int>(amp.size()); }
    double norm2() const;
    double norm() const;
    void normalize();
};

struct DensityMatrix {
    Basis basis = Basis::FockOnly;
    int l_max = 0;
    CMat el;

    DensityMatrix() = default;
    DensityMatrix(Basis b, int l) : basis(b), l_max(l), el(dim_of(b, l), dim_of(b, l)) {
        el.set_zero();
    }

    int dim() const { return el.rows(); }
    double trace_real() const;
    void normalize();          // divide by trace
    void hermitize();          // (rho + rho^dag)/2
    double hermiticity_residual() const;  // max |rho - rho^dag|
};

DensityMatrix projector(const StateVector& psi);

struct PhaseGridSpec {
    double x_min, x_max, y_min, y_max;
    int nx = 121, ny = 121;
};

// 121x121 over [-1.5 m, 1.5 m]^2 with m = max component modulus.
PhaseGridSpec default_grid(double max_abs_alpha);

struct PhaseGrid {
    PhaseGridSpec spec{};
    std::vector<double> values;  // row-major, y outer then x

    double x_at(int ix) const;
    double y_at(int iy) const;
    double cell_area() const;
    double& at(int iy, int ix) { return values[static_cast<size_t>(iy) * spec.nx + ix]; }
    double at(int iy, int ix) const { return values[static_cast<size_t>(iy) * spec.nx + ix]; }
    double sum_times_area() const;

    // header `x,y,value`, y outer then x, 9 significant digits
    void write_csv(const std::string& path) const;
};

// |alpha> in the truncated Fock basis, amplitudes built in log space.
// Warns (does not fail) when |alpha|^2 > l_max/2.
StateVector coherent_ket(cx alpha, int l_max);

// Normalized |alpha1> + |alpha2>.
StateVector superposition_ket(cx alpha1, cx alpha2, int l_max);

// Q(x+iy) = <alpha|rho|alpha>/pi on the grid; rho must be Fock-only.
PhaseGrid q_function(const DensityMatrix& rho_cav, const PhaseGridSpec& spec);
double q_function_point(const DensityMatrix& rho_cav, cx alpha, std::vector<cx>& scratch);

// Wigner function from the Fock/Laguerre series.
PhaseGrid wigner_function(const DensityMatrix& rho_cav, const PhaseGridSpec& spec);
double wigner_point(const DensityMatrix& rho_cav, cx alpha, std::vector<double>& scratch);

// (rho_cav)_mn = sum_s <m,s|rho|n,s>
DensityMatrix partial_trace_atom(const DensityMatrix& rho_full);

enum class OpTag { PhotonNumber, FieldAmplitude, AtomicInversion, AtomicPolarization };

cx expectation(OpTag tag, const StateVector& psi);
cx expectation(OpTag tag, const DensityMatrix& rho);

}  // namespace qjump::fock
