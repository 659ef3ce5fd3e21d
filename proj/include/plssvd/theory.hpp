#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

// Closed-form asymptotic predictions for the squared singular values of the
// normalized cross-covariance S_XY = (1/sqrt(pq)) X^T Y: bulk law, detection
// threshold, spike locations, singular-vector alignments and the PCA baseline.

namespace plssvd::theory {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

struct AspectRatios {
    double beta_p;  // n/p
    double beta_q;  // n/q

    double beta() const { return std::max(beta_p, beta_q); }
    void validate() const;
};

// Roots of a real cubic a3 x^3 + a2 x^2 + a1 x + a0, via the companion
// matrix of the monic polynomial. Robust near double roots.
std::vector<Complex> cubic_roots(double a3, double a2, double a1, double a0);
std::vector<Complex> cubic_roots(Complex a3, Complex a2, Complex a1, Complex a0);

// Solution of the bulk Stieltjes-transform cubic
//   -bp*bq*x^2 m^3 + (bp+bq-2*bp*bq)*x m^2 + [x-(1-bp)(1-bq)] m + 1 = 0
// at real x > 0. Inside the support the root with positive imaginary part is
// returned; outside, the real branch selected by analytic continuation from
// the upper half-plane (m < 0 above the support, m > 0 below it).
Complex solve_mbar(double x, const AspectRatios& ratios);

struct BulkLaw {
    AspectRatios ratios;
    double x_minus = 0.0;
    double x_plus = 0.0;
    double atom0 = 0.0;  // mass at zero, 1 - beta when beta < 1

    // Density of the limiting squared-singular-value distribution,
    // f(x) = (beta/pi) Im mbar(x) on (x_minus, x_plus), 0 elsewhere.
    double density(double x) const;
    // CDF of the continuous part plus the atom, by adaptive quadrature.
    double cdf(double x) const;
    // Total mass of the continuous part (should be 1 - atom0).
    double continuous_mass() const;
    // Discriminant of the y = x*mbar cubic; negative strictly inside the
    // support, positive outside.
    double discriminant(double x) const;
};

BulkLaw bulk_law(const AspectRatios& ratios);

// Detection threshold tau: largest positive root of
//   t^3 - t(bp*bq + bp + bq) - 2*bp*bq = 0, in trigonometric closed form.
double threshold_tau(const AspectRatios& ratios);

// Numerator shared by the threshold polynomial and alignment formulas.
double threshold_polynomial(double lambda, const AspectRatios& ratios);

// Asymptotic location xi = (l+1)(l+bp)(l+bq)/l^2 of the isolated squared
// singular value mapped to signal strength lambda. Empty when lambda <= tau.
std::optional<double> spike_location(double lambda, const AspectRatios& ratios);

enum class Side { M, N };

// Alignment zeta between the spike singular vector and the generating
// component direction (M-side: left vectors, N-side: right vectors).
double align_specific(double lambda, Side side, const AspectRatios& ratios);

struct CommonKernel {
    Matrix K_P;        // r x r, (1/p) P^T P
    Matrix K_R;        // r x r, (1/q) R^T R
    Matrix K_T;        // K_P + (I+K_P)^{1/2} K_R (I+K_P)^{1/2}
    Matrix K_T_tilde;  // roles of P and R swapped
    Vector lambda_T;   // shared spectrum, non-increasing
    Matrix u_tilde;    // eigenvectors of K_T_tilde, columns matching lambda_T
    Matrix v_tilde;    // eigenvectors of K_T

    int rank() const { return static_cast<int>(lambda_T.size()); }
    // lambda_tilde_R[k] = u_tilde_k^T K_R u_tilde_k, lambda_tilde_P likewise.
    double lambda_tilde_R(int k) const;
    double lambda_tilde_P(int k) const;
};

CommonKernel build_common_kernel(const Matrix& K_P, const Matrix& K_R);

// (zeta_P, zeta_R) for the k-th common spike (0-based), both 0 below tau.
std::pair<double, double> align_common(const CommonKernel& kernel, int k,
                                       const AspectRatios& ratios);

enum class VectorSide { Left, Right };

// Deterministic limit direction of the k-th spike singular vector for the
// common component; not a singular vector of P R^T unless K_P and K_R
// commute. P is p x r, R is q x r. Requires invertible K_P and K_R.
Vector skewed_direction(const Matrix& P, const Matrix& R,
                        const CommonKernel& kernel, int k, VectorSide side);

// Real branch of z m^2 - (beta-1-z) m + 1 = 0 outside the Marcenko-Pastur
// bulk [(sqrt(beta)-1)^2, (sqrt(beta)+1)^2]; throws inside.
double mp_stieltjes(double x, double beta);

struct StieltjesSolution {
    Complex z;
    Complex m;        // Stieltjes transform of the spectral law of K
    Complex m_tilde;  // (bp/bq) m - (1 - bp/bq)/z
    double residual;  // defining-cubic residual at m
};

// Solves the m(z) cubic of the resolvent equivalents; z must lie off the
// support (real z only above x_plus or in (0, x_minus)).
StieltjesSolution stieltjes_m(Complex z, const AspectRatios& ratios);

// Ground-truth factors needed to assemble the deterministic equivalents.
struct SignalFactors {
    Matrix P;  // p x r
    Matrix R;  // q x r
    Matrix M;  // n x p
    Matrix N;  // n x q
};

// Deterministic-equivalent bilinear form a^T Qbar(z) b. Side selects the
// resolvent: Right -> Qbar of K (a, b in R^q), Left -> Qbar of K_tilde
// (a, b in R^p). z must be real and above the bulk, away from spikes.
double det_equiv_bilinear(const SignalFactors& factors, double z,
                          const Vector& a, const Vector& b,
                          const AspectRatios& ratios, VectorSide side);

// PCA alignment 1 - (l+beta)/(l(l+1)) above the PCA threshold sqrt(beta).
double pca_alignment(double lambda, double beta);

struct DominanceMargin {
    double m_bound;  // sqrt(bp) + sqrt(bq) + sqrt(bp*bq)
    double tau;
    double margin;  // m_bound - tau, strictly positive
};

DominanceMargin dominance_margin(const AspectRatios& ratios);

}  // namespace plssvd::theory
