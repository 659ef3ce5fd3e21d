#include "plssvd/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plssvd::theory {

namespace {

constexpr double kImagTol = 1e-9;

// Residual of p(m) = a3 m^3 + a2 m^2 + a1 m + a0.
template <typename Scalar>
Scalar poly_eval(Scalar a3, Scalar a2, Scalar a1, Scalar a0, Scalar m) {
    return ((a3 * m + a2) * m + a1) * m + a0;
}

// One-dimensional Newton polish on the real cubic; keeps the companion-matrix
// root but drives the residual to machine precision.
double polish_real_root(double a3, double a2, double a1, double a0, double m) {
    for (int it = 0; it < 8; ++it) {
        const double f = poly_eval(a3, a2, a1, a0, m);
        const double df = (3.0 * a3 * m + 2.0 * a2) * m + a1;
        if (df == 0.0) break;
        const double step = f / df;
        m -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(m))) break;
    }
    return m;
}

}  // namespace

void AspectRatios::validate() const {
    if (!(beta_p > 0.0) || !(beta_q > 0.0) || !std::isfinite(beta_p) ||
        !std::isfinite(beta_q)) {
        throw std::invalid_argument("aspect ratios must be finite and positive");
    }
}

std::vector<Complex> cubic_roots(Complex a3, Complex a2, Complex a1, Complex a0) {
    if (std::abs(a3) == 0.0) throw std::invalid_argument("degenerate cubic");
    // Cardano in complex arithmetic; unlike a companion-matrix eigensolve it
    // keeps full relative accuracy when all roots are tiny (the cube-root
    // scale x^(1/3) that appears near a support edge at zero).
    const Complex b = a2 / a3, c = a1 / a3, d = a0 / a3;
    const Complex p = c - b * b / 3.0;
    const Complex q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const Complex S = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    Complex u3 = -q / 2.0 + S;
    if (std::abs(-q / 2.0 - S) > std::abs(u3)) u3 = -q / 2.0 - S;
    std::vector<Complex> roots(3);
    if (std::abs(u3) == 0.0) {
        const Complex t = std::pow(-q, 1.0 / 3.0);
        const Complex w(-0.5, std::sqrt(3.0) / 2.0);
        roots = {t, t * w, t * std::conj(w)};
    } else {
        const Complex u = std::pow(u3, 1.0 / 3.0);
        const Complex v = -p / (3.0 * u);
        const Complex w(-0.5, std::sqrt(3.0) / 2.0);
        roots = {u + v, u * w + v * std::conj(w), u * std::conj(w) + v * w};
    }
    for (auto& t : roots) {
        Complex z = t - b / 3.0;
        // Newton polish on the monic cubic.
        for (int it = 0; it < 3; ++it) {
            const Complex f = ((z + b) * z + c) * z + d;
            const Complex df = (3.0 * z + 2.0 * b) * z + c;
            if (std::abs(df) == 0.0) break;
            z -= f / df;
        }
        t = z;
    }
    return roots;
}

std::vector<Complex> cubic_roots(double a3, double a2, double a1, double a0) {
    return cubic_roots(Complex(a3), Complex(a2), Complex(a1), Complex(a0));
}

namespace {

// Coefficients of the mbar cubic at real x.
struct MbarCubic {
    double a3, a2, a1, a0;
};

MbarCubic mbar_coeffs(double x, const AspectRatios& r) {
    return {-r.beta_p * r.beta_q * x * x,
            (r.beta_p + r.beta_q - 2.0 * r.beta_p * r.beta_q) * x,
            x - (1.0 - r.beta_p) * (1.0 - r.beta_q), 1.0};
}

}  // namespace

Complex solve_mbar(double x, const AspectRatios& ratios) {
    ratios.validate();
    if (!(x > 0.0)) throw std::invalid_argument("solve_mbar requires x > 0");
    // Solve for w = x*m instead of m: the w-cubic has O(1) coefficients, so
    // the companion matrix stays well balanced as x approaches zero.
    const double bp = ratios.beta_p, bq = ratios.beta_q;
    const double w3 = -bp * bq;
    const double w2 = bp + bq - 2.0 * bp * bq;
    const double w1 = x - (1.0 - bp) * (1.0 - bq);
    auto roots = cubic_roots(w3, w2, w1, x);
    for (auto& w : roots) w /= x;

    // Inside the support: unique root with positive imaginary part.
    const Complex* best = nullptr;
    for (const auto& m : roots) {
        if (m.imag() > kImagTol && (!best || m.imag() > best->imag())) best = &m;
    }
    if (best) return *best;

    // Real axis outside the support: continue analytically from Im z > 0.
    // The valid branch is the limit of the root with Im m > 0 at z = x + i*eps.
    const double eps = 1e-8 * std::max(1.0, std::abs(x));
    const Complex zc(x, eps);
    auto croots = cubic_roots(Complex(w3), Complex(w2),
                              zc - (1.0 - bp) * (1.0 - bq), zc);
    for (auto& w : croots) w /= zc;
    const Complex* upper = nullptr;
    for (const auto& m : croots) {
        if (m.imag() > 0.0 && (!upper || m.imag() < upper->imag())) upper = &m;
    }
    const MbarCubic c = mbar_coeffs(x, ratios);
    double m_real = upper ? upper->real() : roots.front().real();
    m_real = polish_real_root(c.a3, c.a2, c.a1, c.a0, m_real);
    return Complex(m_real, 0.0);
}

double BulkLaw::discriminant(double x) const {
    const double bp = ratios.beta_p, bq = ratios.beta_q;
    const double at = 4.0 * bp * bq;
    const double bt = bp * bp * bq * bq - 10.0 * bp * bp * bq + bp * bp -
                      10.0 * bp * bq * bq - 10.0 * bp * bq + bq * bq;
    const double ct =
        -2.0 * (bp * bp * bp * (bq * bq - 4.0 * bq + 1.0) +
                bp * bp * (bq * bq * bq + 2.0 * bq * bq + 2.0 * bq + 1.0) +
                2.0 * bp * bq * (-2.0 * bq * bq + bq - 2.0) +
                bq * bq * (bq + 1.0));
    const double dt = (bp - 1.0) * (bp - 1.0) * (bq - 1.0) * (bq - 1.0) *
                      (bp - bq) * (bp - bq);
    return ((at * x + bt) * x + ct) * x + dt;
}

double BulkLaw::density(double x) const {
    if (!(x > x_minus) || !(x < x_plus)) return 0.0;
    return ratios.beta() / M_PI * solve_mbar(x, ratios).imag();
}

namespace {

// Adaptive Simpson on [a, b] with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) < 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    return adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 24);
}

}  // namespace

double BulkLaw::cdf(double x) const {
    if (x < 0.0) return 0.0;
    double mass = atom0;
    if (x <= x_minus) return mass;
    const double hi = std::min(x, x_plus);
    double lo = x_minus;
    // When the support touches zero the density can blow up like x^{-2/3};
    // a cube-root substitution x = u^3 makes that piece smooth.
    if (x_minus <= 1e-12) {
        const double x_cut = std::min(hi, 0.1 * x_plus);
        const double u_hi = std::cbrt(x_cut);
        auto cube = [&](double u) {
            return density(u * u * u) * 3.0 * u * u;
        };
        // Start just above zero: the integrand tends to a finite limit there
        // but evaluates to 0 at u = 0 exactly, which would bias Simpson.
        mass += integrate(cube, 1e-8, u_hi, 1e-9);
        lo = x_cut;
        if (hi <= x_cut) return std::min(mass, 1.0);
    }
    // theta-substitution x = mid - half*cos(theta) flattens the square-root
    // edge behavior of the density.
    const double mid = 0.5 * (x_minus + x_plus);
    const double half = 0.5 * (x_plus - x_minus);
    const double theta_hi = std::acos(std::clamp((mid - hi) / half, -1.0, 1.0));
    const double theta_lo =
        std::acos(std::clamp((mid - lo) / half, -1.0, 1.0));
    auto integrand = [&](double theta) {
        const double xx = mid - half * std::cos(theta);
        return density(xx) * half * std::sin(theta);
    };
    mass += integrate(integrand, std::max(theta_lo, 1e-9), theta_hi, 1e-9);
    return std::min(mass, 1.0);
}

double BulkLaw::continuous_mass() const { return cdf(x_plus) - atom0; }

BulkLaw bulk_law(const AspectRatios& ratios) {
    ratios.validate();
    BulkLaw law;
    law.ratios = ratios;
    law.atom0 = ratios.beta() < 1.0 ? 1.0 - ratios.beta() : 0.0;

    const double bp = ratios.beta_p, bq = ratios.beta_q;
    const double at = 4.0 * bp * bq;
    const double bt = bp * bp * bq * bq - 10.0 * bp * bp * bq + bp * bp -
                      10.0 * bp * bq * bq - 10.0 * bp * bq + bq * bq;
    const double ct =
        -2.0 * (bp * bp * bp * (bq * bq - 4.0 * bq + 1.0) +
                bp * bp * (bq * bq * bq + 2.0 * bq * bq + 2.0 * bq + 1.0) +
                2.0 * bp * bq * (-2.0 * bq * bq + bq - 2.0) +
                bq * bq * (bq + 1.0));
    const double dt = (bp - 1.0) * (bp - 1.0) * (bq - 1.0) * (bq - 1.0) *
                      (bp - bq) * (bp - bq);

    auto roots = cubic_roots(at, bt, ct, dt);
    std::vector<double> real_nonneg;
    const double scale = std::max({std::abs(at), std::abs(bt), std::abs(ct),
                                   std::abs(dt)});
    for (const auto& z : roots) {
        if (std::abs(z.imag()) < 1e-7 * std::max(1.0, std::abs(z)) &&
            z.real() > -1e-9 * scale) {
            real_nonneg.push_back(std::max(z.real(), 0.0));
        }
    }
    std::sort(real_nonneg.begin(), real_nonneg.end());
    // Merge numerically split multiple roots (e.g. the double root at zero
    // when beta_p = beta_q = 1) so they cannot form a spurious bracket.
    std::vector<double> merged;
    const double span = std::max(1.0, real_nonneg.back());
    for (double r : real_nonneg) {
        if (merged.empty() || r - merged.back() > 1e-6 * span) {
            merged.push_back(r);
        }
    }
    real_nonneg.swap(merged);
    if (real_nonneg.size() < 2) {
        throw std::runtime_error("support-edge cubic has fewer than two real "
                                 "nonnegative roots");
    }
    // Pick the consecutive pair bracketing the region where the discriminant
    // is negative (i.e. where the density lives).
    law.x_minus = real_nonneg.front();
    law.x_plus = real_nonneg.back();
    for (std::size_t i = 0; i + 1 < real_nonneg.size(); ++i) {
        const double mid = 0.5 * (real_nonneg[i] + real_nonneg[i + 1]);
        if (real_nonneg[i + 1] > real_nonneg[i] + 1e-12 &&
            law.discriminant(mid) < 0.0) {
            law.x_minus = real_nonneg[i];
            law.x_plus = real_nonneg[i + 1];
            break;
        }
    }
    return law;
}

double threshold_polynomial(double lambda, const AspectRatios& r) {
    return lambda * lambda * lambda -
           lambda * (r.beta_p * r.beta_q + r.beta_p + r.beta_q) -
           2.0 * r.beta_p * r.beta_q;
}

double threshold_tau(const AspectRatios& ratios) {
    ratios.validate();
    const double s = (ratios.beta_p * ratios.beta_q + ratios.beta_p +
                      ratios.beta_q) / 3.0;
    const double arg =
        std::clamp(ratios.beta_p * ratios.beta_q * std::pow(s, -1.5), -1.0, 1.0);
    return 2.0 * std::sqrt(s) * std::cos(std::acos(arg) / 3.0);
}

std::optional<double> spike_location(double lambda, const AspectRatios& ratios) {
    ratios.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("spike_location: lambda <= 0");
    if (lambda <= threshold_tau(ratios)) return std::nullopt;
    return (lambda + 1.0) * (lambda + ratios.beta_p) * (lambda + ratios.beta_q) /
           (lambda * lambda);
}

double align_specific(double lambda, Side side, const AspectRatios& ratios) {
    ratios.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("align_specific: lambda <= 0");
    if (lambda <= threshold_tau(ratios)) return 0.0;
    const double num = threshold_polynomial(lambda, ratios);
    const double cross = side == Side::M ? ratios.beta_q : ratios.beta_p;
    const double den = lambda * (lambda + 1.0) * (lambda + cross);
    return std::clamp(num / den, 0.0, 1.0);
}

namespace {

Matrix psd_sqrt(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

void check_symmetric_psd(const Matrix& A, const char* name) {
    if (A.rows() != A.cols()) throw std::invalid_argument("kernel not square");
    if ((A - A.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument(std::string(name) + " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <
        -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) {
        throw std::invalid_argument(std::string(name) + " is not PSD");
    }
}

// Eigenpairs sorted by non-increasing eigenvalue.
std::pair<Vector, Matrix> eig_desc(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    const int r = static_cast<int>(A.rows());
    Vector vals(r);
    Matrix vecs(r, r);
    for (int i = 0; i < r; ++i) {
        vals(i) = es.eigenvalues()(r - 1 - i);
        vecs.col(i) = es.eigenvectors().col(r - 1 - i);
    }
    return {vals, vecs};
}

}  // namespace

double CommonKernel::lambda_tilde_R(int k) const {
    return u_tilde.col(k).dot(K_R * u_tilde.col(k));
}

double CommonKernel::lambda_tilde_P(int k) const {
    return v_tilde.col(k).dot(K_P * v_tilde.col(k));
}

CommonKernel build_common_kernel(const Matrix& K_P, const Matrix& K_R) {
    check_symmetric_psd(K_P, "K_P");
    check_symmetric_psd(K_R, "K_R");
    if (K_P.rows() != K_R.rows()) throw std::invalid_argument("kernel size mismatch");
    const int r = static_cast<int>(K_P.rows());
    CommonKernel ck;
    ck.K_P = 0.5 * (K_P + K_P.transpose());
    ck.K_R = 0.5 * (K_R + K_R.transpose());
    const Matrix sp = psd_sqrt(Matrix(Matrix::Identity(r, r) + ck.K_P));
    const Matrix sr = psd_sqrt(Matrix(Matrix::Identity(r, r) + ck.K_R));
    ck.K_T = ck.K_P + sp * ck.K_R * sp;
    ck.K_T_tilde = ck.K_R + sr * ck.K_P * sr;
    auto [vals, vecs] = eig_desc(ck.K_T);
    auto [tvals, tvecs] = eig_desc(ck.K_T_tilde);
    ck.lambda_T = vals;
    ck.v_tilde = vecs;
    ck.u_tilde = tvecs;
    return ck;
}

std::pair<double, double> align_common(const CommonKernel& kernel, int k,
                                       const AspectRatios& ratios) {
    ratios.validate();
    if (k < 0 || k >= kernel.rank()) throw std::out_of_range("component index");
    const double lt = kernel.lambda_T(k);
    if (lt <= threshold_tau(ratios)) return {0.0, 0.0};
    const double num = threshold_polynomial(lt, ratios);
    const double zeta_p = (lt - kernel.lambda_tilde_R(k)) * num /
                          (lt * lt * (lt + 1.0) * (lt + ratios.beta_q));
    const double zeta_r = (lt - kernel.lambda_tilde_P(k)) * num /
                          (lt * lt * (lt + 1.0) * (lt + ratios.beta_p));
    return {std::clamp(zeta_p, 0.0, 1.0), std::clamp(zeta_r, 0.0, 1.0)};
}

Vector skewed_direction(const Matrix& P, const Matrix& R,
                        const CommonKernel& kernel, int k, VectorSide side) {
    if (k < 0 || k >= kernel.rank()) throw std::out_of_range("component index");
    const int r = kernel.rank();
    const Matrix I = Matrix::Identity(r, r);

    // Left vectors use the R-kernel sandwich around P; right vectors swap.
    const Matrix& K_self = side == VectorSide::Left ? kernel.K_R : kernel.K_P;
    const Matrix& loadings = side == VectorSide::Left ? P : R;
    const Matrix& K_other = side == VectorSide::Left ? kernel.K_P : kernel.K_R;
    const Vector guide = side == VectorSide::Left
                             ? Vector(kernel.u_tilde.col(k))
                             : Vector(kernel.v_tilde.col(k));

    Eigen::SelfAdjointEigenSolver<Matrix> es(K_self);
    if (es.eigenvalues().minCoeff() < 1e-12) {
        throw std::invalid_argument("skewed_direction: singular kernel");
    }
    const Matrix ks_half = psd_sqrt(K_self);
    const Matrix inner = ks_half * K_other * ks_half;
    const Matrix inner_inv = inner.ldlt().solve(I);
    // (I + K^{-1})^{-1/2} = K^{1/2} (I + K)^{-1/2}
    Eigen::SelfAdjointEigenSolver<Matrix> esip(Matrix(I + K_self));
    const Matrix ipk_invhalf = esip.eigenvectors() *
                               esip.eigenvalues().cwiseSqrt().cwiseInverse()
                                   .asDiagonal() *
                               esip.eigenvectors().transpose();
    const Matrix shrink = ks_half * ipk_invhalf;

    const double scale = 1.0 / std::sqrt(static_cast<double>(loadings.rows()));
    Vector dir = scale * loadings *
                 (ks_half * inner_inv *
                  ((kernel.lambda_T(k) * I - K_self) * (shrink * guide)));
    const double nrm = dir.norm();
    if (nrm == 0.0) throw std::runtime_error("skewed_direction: zero limit vector");
    return dir / nrm;
}

double mp_stieltjes(double x, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("mp_stieltjes: beta <= 0");
    const double lo = (std::sqrt(beta) - 1.0) * (std::sqrt(beta) - 1.0);
    const double hi = (std::sqrt(beta) + 1.0) * (std::sqrt(beta) + 1.0);
    // The closed exterior is allowed: the transform extends continuously to
    // the bulk edges.
    const double slack = 1e-9 * std::max(1.0, hi);
    if (x > lo + slack && x < hi - slack) {
        throw std::invalid_argument("mp_stieltjes: x inside the bulk");
    }
    if (std::abs(x - hi) <= slack || std::abs(x - lo) <= slack) {
        // Double root of the defining quadratic at the edge.
        return (beta - 1.0 - x) / (2.0 * x);
    }
    // Analytic continuation from Im z > 0 picks the valid branch.
    const Complex z(x, 1e-9 * std::max(1.0, std::abs(x)));
    const Complex disc = (beta - 1.0 - z) * (beta - 1.0 - z) - 4.0 * z;
    Complex sq = std::sqrt(disc);
    const Complex m1 = ((beta - 1.0 - z) + sq) / (2.0 * z);
    const Complex m2 = ((beta - 1.0 - z) - sq) / (2.0 * z);
    double m = (m1.imag() > 0.0 ? m1 : m2).real();
    // Newton polish on the real quadratic.
    for (int it = 0; it < 4; ++it) {
        const double f = x * m * m - (beta - 1.0 - x) * m + 1.0;
        const double df = 2.0 * x * m - (beta - 1.0 - x);
        if (df == 0.0) break;
        m -= f / df;
    }
    return m;
}

StieltjesSolution stieltjes_m(Complex z, const AspectRatios& ratios) {
    ratios.validate();
    const double ratio_pq = ratios.beta_p / ratios.beta_q;  // = q/p
    const Complex a3 = -ratio_pq * z * z;
    const Complex a2 = (1.0 + ratios.beta_p - 2.0 * ratio_pq) * z;
    const Complex a1 = z - (1.0 - ratios.beta_q) * (ratio_pq - 1.0);
    const Complex a0 = 1.0;

    const bool on_real_axis = std::abs(z.imag()) < kImagTol;
    Complex zeval = z;
    if (on_real_axis) {
        const BulkLaw law = bulk_law(ratios);
        const double x = z.real();
        if (x >= law.x_minus - 1e-12 && x <= law.x_plus + 1e-12) {
            throw std::invalid_argument("stieltjes_m: real z on the support");
        }
        zeval = Complex(x, 1e-9 * std::max(1.0, std::abs(x)));
    }
    auto roots = cubic_roots(-ratio_pq * zeval * zeval,
                             (1.0 + ratios.beta_p - 2.0 * ratio_pq) * zeval,
                             zeval - (1.0 - ratios.beta_q) * (ratio_pq - 1.0),
                             Complex(1.0));
    // Valid ensemble: Im m and Im z share the same sign.
    const double want = zeval.imag() > 0.0 ? 1.0 : -1.0;
    const Complex* pick = nullptr;
    for (const auto& m : roots) {
        if (want * m.imag() > 0.0 &&
            (!pick || (on_real_axis ? want * m.imag() < want * pick->imag()
                                    : want * m.imag() > want * pick->imag()))) {
            pick = &m;
        }
    }
    if (!pick) pick = &roots.front();
    Complex m = *pick;
    if (on_real_axis) m = Complex(m.real(), 0.0);
    // Newton polish at the requested z.
    for (int it = 0; it < 8; ++it) {
        const Complex f = poly_eval(a3, a2, a1, a0, m);
        const Complex df = (3.0 * a3 * m + 2.0 * a2) * m + a1;
        if (std::abs(df) == 0.0) break;
        m -= f / df;
    }

    StieltjesSolution sol;
    sol.z = z;
    sol.m = m;
    sol.m_tilde = ratio_pq * m - (1.0 - ratio_pq) / z;
    sol.residual = std::abs(poly_eval(a3, a2, a1, a0, m));
    return sol;
}

namespace {

// a^T QbarY(w)^{-1}-style evaluation: assembles the q x q (or p x p) matrix
// of Theorem-style equivalents and solves for the probe vectors. The inner
// p x p (or q x q) inverse is collapsed onto the r x r kernel.
double bar_q_bilinear(const Matrix& loadings_self, const Matrix& loadings_other,
                      const Matrix& individual, double w, double beta_self,
                      const Vector& a, const Vector& b) {
    const double m = mp_stieltjes(w, beta_self);
    const long dim = loadings_self.rows();
    const long other_dim = loadings_other.rows();
    const int r = static_cast<int>(loadings_self.cols());
    const double c = (1.0 + m) / m;

    Matrix A = (1.0 / m) * Matrix::Identity(dim, dim);
    A += (1.0 / (1.0 + m)) *
         ((individual.transpose() * individual +
           loadings_self * loadings_self.transpose()) /
          static_cast<double>(dim));
    if (r > 0) {
        const Matrix G = loadings_other.transpose() * loadings_other /
                         static_cast<double>(other_dim);
        const Matrix core =
            G * (c * Matrix::Identity(r, r) + G).ldlt().solve(
                    Matrix(Matrix::Identity(r, r)));
        A += (1.0 / ((1.0 + m) * m)) *
             (loadings_self * core * loadings_self.transpose()) /
             static_cast<double>(dim);
    }
    return a.dot(A.ldlt().solve(b));
}

}  // namespace

double det_equiv_bilinear(const SignalFactors& factors, double z,
                          const Vector& a, const Vector& b,
                          const AspectRatios& ratios, VectorSide side) {
    ratios.validate();
    const BulkLaw law = bulk_law(ratios);
    if (!(z > law.x_plus)) {
        throw std::invalid_argument("det_equiv_bilinear: z must exceed x_plus");
    }
    const StieltjesSolution sol = stieltjes_m(Complex(z, 0.0), ratios);
    if (side == VectorSide::Right) {
        const double mt = sol.m_tilde.real();
        const double w = -1.0 / mt;
        return -1.0 / (z * mt) *
               bar_q_bilinear(factors.R, factors.P, factors.N, w, ratios.beta_q,
                              a, b);
    }
    const double mz = sol.m.real();
    const double w = -1.0 / mz;
    return -1.0 / (z * mz) *
           bar_q_bilinear(factors.P, factors.R, factors.M, w, ratios.beta_p, a,
                          b);
}

double pca_alignment(double lambda, double beta) {
    if (!(lambda > 0.0)) throw std::invalid_argument("pca_alignment: lambda <= 0");
    if (lambda <= std::sqrt(beta)) return 0.0;
    return std::clamp(1.0 - (lambda + beta) / (lambda * (lambda + 1.0)), 0.0,
                      1.0);
}

DominanceMargin dominance_margin(const AspectRatios& ratios) {
    ratios.validate();
    DominanceMargin d;
    d.m_bound = std::sqrt(ratios.beta_p) + std::sqrt(ratios.beta_q) +
                std::sqrt(ratios.beta_p * ratios.beta_q);
    d.tau = threshold_tau(ratios);
    d.margin = d.m_bound - d.tau;
    return d;
}

}  // namespace plssvd::theory
