#pragma once

#include <complex>
#include <vector>

namespace qjump::special {

using cx = std::complex<double>;

// ln(n!) table, extended on demand (thread-safe for the precomputed range).
double log_factorial(int n);

// Fill out[m] = L_m^{(k)}(x) for m = 0..m_max by upward recurrence.
void laguerre_column(int m_max, int k, double x, double* out);

// ln Gamma(z) for complex z (Lanczos, reflection for Re z < 0.5).
cx log_gamma(cx z);

// Regularized incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a), a > 0, x >= 0.
double gamma_q(double a, double x);

// Survival function of the chi-squared distribution with k d.o.f.
inline double chi2_sf(double x, double k) { return gamma_q(0.5 * k, 0.5 * x); }

// Kolmogorov-Smirnov asymptotic survival function Q_KS(lambda).
double ks_sf(double lambda);

}  // namespace qjump::special
