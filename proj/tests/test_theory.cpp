#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "plssvd/theory.hpp"

using namespace plssvd::theory;

namespace {

double mbar_residual(double x, Complex m, const AspectRatios& r) {
    const Complex mc = m;
    const Complex res = -r.beta_p * r.beta_q * x * x * mc * mc * mc +
                        (r.beta_p + r.beta_q - 2.0 * r.beta_p * r.beta_q) * x *
                            mc * mc +
                        (x - (1.0 - r.beta_p) * (1.0 - r.beta_q)) * mc + 1.0;
    return std::abs(res);
}

}  // namespace

TEST_CASE("threshold closed forms") {
    CHECK(threshold_tau({1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(threshold_tau({4.0, 4.0}) ==
          doctest::Approx(2.0 + 2.0 * std::sqrt(3.0)).epsilon(1e-9));
    CHECK(threshold_tau({10.0, 2.0}) ==
          doctest::Approx(6.200863971620759).epsilon(1e-9));
    // tau is a root of the threshold polynomial.
    for (auto r : {AspectRatios{1.0, 1.0}, AspectRatios{10.0, 2.0},
                   AspectRatios{0.5, 0.4}, AspectRatios{7.3, 0.8}}) {
        const double tau = threshold_tau(r);
        CHECK(std::abs(threshold_polynomial(tau, r)) < 1e-8 * tau * tau * tau);
    }
}

TEST_CASE("support edges and zero atom") {
    auto law = bulk_law({1.0, 1.0});
    CHECK(law.x_minus == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(law.x_plus == doctest::Approx(27.0 / 4.0).epsilon(1e-8));
    CHECK(law.atom0 == 0.0);

    auto thin = bulk_law({1.0 / 6.0, 0.5});
    CHECK(thin.atom0 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(thin.x_minus > 0.0);
    CHECK(thin.x_plus > thin.x_minus);

    // The upper edge is the spike location evaluated at the threshold.
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> ub(0.3, 8.0);
    for (int i = 0; i < 20; ++i) {
        AspectRatios r{ub(gen), ub(gen)};
        const double tau = threshold_tau(r);
        const double xi_tau =
            (tau + 1.0) * (tau + r.beta_p) * (tau + r.beta_q) / (tau * tau);
        CHECK(bulk_law(r).x_plus == doctest::Approx(xi_tau).epsilon(1e-6));
    }
}

TEST_CASE("mbar root residuals on random draws") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> ub(0.2, 9.0), uu(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        AspectRatios r{ub(gen), ub(gen)};
        const auto law = bulk_law(r);
        const double x =
            law.x_minus + (law.x_plus - law.x_minus) * (0.02 + 0.96 * uu(gen));
        const Complex m = solve_mbar(x, r);
        CHECK(mbar_residual(x, m, r) < 1e-10);
        CHECK(m.imag() >= 0.0);
    }
}

TEST_CASE("density integrates to one with the atom") {
    const AspectRatios cases[] = {
        {1.0, 1.0}, {10.0, 2.0}, {1.0 / 6.0, 0.5}, {4.0, 4.0}, {0.5, 0.4}};
    for (const auto& r : cases) {
        const auto law = bulk_law(r);
        CHECK(law.continuous_mass() + law.atom0 ==
              doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("density positive inside support, discriminant signs") {
    const auto law = bulk_law({10.0, 2.0});
    const double mid = 0.5 * (law.x_minus + law.x_plus);
    CHECK(law.density(mid) > 0.0);
    CHECK(law.discriminant(mid) < 0.0);
    CHECK(law.discriminant(law.x_plus * 1.3) > 0.0);
    CHECK(law.density(law.x_plus * 1.3) == 0.0);
}

TEST_CASE("spike locations") {
    const AspectRatios r{10.0, 2.0};
    CHECK(spike_location(54.0, r).value() ==
          doctest::Approx(55.0 * 64.0 * 56.0 / 2916.0).epsilon(1e-12));
    CHECK(spike_location(25.0, r).value() ==
          doctest::Approx(39.312).epsilon(1e-12));
    CHECK_FALSE(spike_location(threshold_tau(r), r).has_value());
    CHECK_FALSE(spike_location(1.0, r).has_value());

    // Strictly increasing above the threshold.
    double prev = 0.0;
    for (double l = threshold_tau(r) + 0.05; l < 80.0; l += 0.5) {
        const double xi = spike_location(l, r).value();
        CHECK(xi > prev);
        prev = xi;
    }
    // The spike emerges from the bulk edge.
    const auto law = bulk_law(r);
    CHECK(spike_location(threshold_tau(r) + 1e-6, r).value() ==
          doctest::Approx(law.x_plus).epsilon(1e-4));
}

TEST_CASE("specific alignments") {
    const AspectRatios r{10.0, 2.0};
    CHECK(align_specific(25.0, Side::M, r) ==
          doctest::Approx(14785.0 / 17550.0).epsilon(1e-12));
    CHECK(align_specific(35.0, Side::N, r) ==
          doctest::Approx(41715.0 / 56700.0).epsilon(1e-12));
    CHECK(align_specific(threshold_tau(r), Side::M, r) == 0.0);
    CHECK(align_specific(1e7, Side::M, r) == doctest::Approx(1.0).epsilon(1e-5));
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> ub(0.3, 8.0);
    for (int i = 0; i < 200; ++i) {
        AspectRatios rr{ub(gen), ub(gen)};
        const double l = threshold_tau(rr) * (1.0 + 3.0 * (i % 17) / 16.0) + 0.01;
        for (auto s : {Side::M, Side::N}) {
            const double z = align_specific(l, s, rr);
            CHECK(z >= 0.0);
            CHECK(z <= 1.0);
        }
    }
}

TEST_CASE("common kernel, diagonal case") {
    Eigen::MatrixXd KP(1, 1), KR(1, 1);
    KP << 10.0;
    KR << 4.0;
    const auto kernel = build_common_kernel(KP, KR);
    CHECK(kernel.lambda_T(0) == doctest::Approx(54.0).epsilon(1e-12));
    const AspectRatios r{10.0, 2.0};
    auto [zp, zr] = align_common(kernel, 0, r);
    CHECK(zp == doctest::Approx(50.0 * 155696.0 / 8981280.0).epsilon(1e-12));
    CHECK(zr == doctest::Approx(44.0 * 155696.0 / 10264320.0).epsilon(1e-12));
}

TEST_CASE("common kernel spectra agree between the two orderings") {
    std::mt19937 gen(19);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 100; ++i) {
        const int r = 1 + (i % 4);
        Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(
            r, r, [&](Eigen::Index, Eigen::Index) { return nd(gen); });
        Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(
            r, r, [&](Eigen::Index, Eigen::Index) { return nd(gen); });
        const auto kernel =
            build_common_kernel(A * A.transpose(), B * B.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(kernel.K_T),
            e2(kernel.K_T_tilde);
        for (int k = 0; k < r; ++k) {
            CHECK(e1.eigenvalues()(k) ==
                  doctest::Approx(e2.eigenvalues()(k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("skewed direction, diagonal case reduces to the loading frame") {
    // With diagonal kernels the skewed direction is collinear with the
    // orthonormal frame column of the dominant loading.
    const int p = 40, q = 50;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(p, 2),
                    R = Eigen::MatrixXd::Zero(q, 2);
    P(0, 0) = std::sqrt(10.0 * p);
    P(1, 1) = std::sqrt(2.0 * p);
    R(0, 0) = std::sqrt(4.0 * q);
    R(1, 1) = std::sqrt(1.0 * q);
    const auto kernel = build_common_kernel(
        P.transpose() * P / static_cast<double>(p),
        R.transpose() * R / static_cast<double>(q));
    for (auto side : {VectorSide::Left, VectorSide::Right}) {
        const auto v = skewed_direction(P, R, kernel, 0, side);
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(v(0)) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("Marchenko-Pastur branch values") {
    CHECK(mp_stieltjes(7.5, 2.0) == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(mp_stieltjes(4.0, 1.0) == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK_THROWS(mp_stieltjes(2.0, 1.0));  // inside the bulk
    // Defining-quadratic residual and Stieltjes sign above the bulk.
    for (double beta : {0.3, 1.0, 2.5, 9.0}) {
        const double edge = std::pow(std::sqrt(beta) + 1.0, 2.0);
        for (double x = edge * 1.05; x < edge * 3.0; x += edge * 0.35) {
            const double m = mp_stieltjes(x, beta);
            CHECK(std::abs(x * m * m - (beta - 1.0 - x) * m + 1.0) < 1e-9);
            CHECK(m < 0.0);
        }
    }
}

TEST_CASE("resolvent Stieltjes transform m(z)") {
    const AspectRatios r{10.0, 2.0};
    const auto law = bulk_law(r);
    const auto sol = stieltjes_m({law.x_plus + 1.0, 0.0}, r);
    CHECK(sol.residual < 1e-10);
    CHECK(sol.m.real() < 0.0);
    CHECK(std::abs(sol.m.imag()) < 1e-6);
    // Conjugate symmetry off the real axis.
    const Complex z{law.x_plus * 0.5, 0.7};
    const auto up = stieltjes_m(z, r);
    const auto dn = stieltjes_m(std::conj(z), r);
    CHECK(up.m.real() == doctest::Approx(dn.m.real()).epsilon(1e-8));
    CHECK(up.m.imag() == doctest::Approx(-dn.m.imag()).epsilon(1e-8));
    CHECK(up.m.imag() > 0.0);
    CHECK_THROWS(stieltjes_m({law.x_plus * 0.5, 0.0}, r));
}

TEST_CASE("PCA alignment and dominance") {
    CHECK(pca_alignment(10.0, 10.0) ==
          doctest::Approx(9.0 / 11.0).epsilon(1e-12));
    CHECK(pca_alignment(std::sqrt(10.0), 10.0) == 0.0);
    CHECK(pca_alignment(0.5, 10.0) == 0.0);
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> ub(-1.0, 2.0);
    for (int i = 0; i < 400; ++i) {
        AspectRatios r{std::pow(10.0, ub(gen)), std::pow(10.0, ub(gen))};
        const auto dm = dominance_margin(r);
        CHECK(dm.margin > 0.0);
        CHECK(dm.m_bound == doctest::Approx(std::sqrt(r.beta_p) +
                                            std::sqrt(r.beta_q) +
                                            std::sqrt(r.beta_p * r.beta_q))
                                .epsilon(1e-12));
    }
}
