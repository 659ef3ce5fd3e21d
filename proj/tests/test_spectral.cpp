#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "plssvd/spectral.hpp"

using namespace plssvd::spectral;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    return Eigen::MatrixXd::NullaryExpr(
        rows, cols, [&](Eigen::Index, Eigen::Index) { return nd(gen); });
}

}  // namespace

TEST_CASE("cross covariance equals the naive triple loop") {
    const int n = 17, p = 5, q = 9;
    const auto X = random_matrix(n, p, 1);
    const auto Y = random_matrix(n, q, 2);
    const auto S = cross_covariance(X, Y);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p) * q);
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b < q; ++b) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += X(i, a) * Y(i, b);
            CHECK(std::abs(S.S_XY(a, b) - scale * acc) < 1e-12);
        }
    }
}

TEST_CASE("rank-one spectrum is exact") {
    const int n = 30, p = 8, q = 12;
    Eigen::VectorXd t = random_matrix(n, 1, 3);
    t.normalize();
    Eigen::VectorXd u = random_matrix(p, 1, 4);
    u.normalize();
    Eigen::VectorXd v = random_matrix(q, 1, 5);
    v.normalize();
    const Eigen::MatrixXd X = 3.0 * t * u.transpose();
    const Eigen::MatrixXd Y = 2.0 * t * v.transpose();
    const auto report = squared_singular_spectrum(cross_covariance(X, Y), 1);
    const double expect = 36.0 / (static_cast<double>(p) * q);
    CHECK(report.squared_singular_values(0) ==
          doctest::Approx(expect).epsilon(1e-12));
    for (int i = 1; i < report.squared_singular_values.size(); ++i) {
        CHECK(report.squared_singular_values(i) < 1e-20);
    }
    CHECK(alignment_measure(report.left_vectors.col(0), u) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(alignment_measure(report.right_vectors.col(0), v) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spectrum matches both kernel orderings") {
    const int n = 40, p = 7, q = 11;
    const auto X = random_matrix(n, p, 6);
    const auto Y = random_matrix(n, q, 7);
    const auto S = cross_covariance(X, Y);
    const auto report = squared_singular_spectrum(S, 1);
    const Eigen::MatrixXd K = S.S_XY.transpose() * S.S_XY;      // q x q
    const Eigen::MatrixXd Kt = S.S_XY * S.S_XY.transpose();     // p x p
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ek(K), ekt(Kt);
    const int d = std::min(p, q);
    for (int i = 0; i < d; ++i) {
        const double v = report.squared_singular_values(i);
        CHECK(v == doctest::Approx(ek.eigenvalues()(q - 1 - i)).epsilon(1e-9));
        CHECK(v == doctest::Approx(ekt.eigenvalues()(p - 1 - i)).epsilon(1e-9));
    }
}

TEST_CASE("histogram integrates to one over nonzero values") {
    const auto X = random_matrix(200, 50, 8);
    const auto Y = random_matrix(200, 80, 9);
    const auto report = squared_singular_spectrum(cross_covariance(X, Y), 1);
    const auto& h = report.histogram;
    double area = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        area += h.counts[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
    }
    CHECK(area == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spike extraction applies the margin rule") {
    SpectrumReport report;
    report.squared_singular_values = Eigen::VectorXd(5);
    report.squared_singular_values << 10.0, 5.2, 5.05, 4.0, 1.0;
    const auto spikes = extract_spikes(report, 5.0, 0.05);
    REQUIRE(spikes.size() == 1);  // buffered edge 5.25 stops at 5.2
    CHECK(spikes[0].second == 10.0);
    const auto narrow = extract_spikes(report, 5.0, 0.03);
    CHECK(narrow.size() == 2);  // buffered edge 5.15 admits 5.2
    const auto bare = extract_spikes(report, 5.0, 0.0);
    CHECK(bare.size() == 3);
}

TEST_CASE("alignment measure clips and matches the inner product") {
    Eigen::VectorXd a(2), b(2);
    a << 1.0, 0.0;
    b << std::sqrt(0.5), std::sqrt(0.5);
    CHECK(alignment_measure(a, b) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(alignment_measure(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(alignment_measure(2.0 * a, b));  // not unit norm
}

TEST_CASE("mean direction sign-fixes against the reference") {
    Eigen::VectorXd ref(2);
    ref << 1.0, 0.0;
    Eigen::VectorXd v1(2), v2(2);
    v1 << 0.8, 0.6;
    v2 << -0.8, 0.6;  // flipped copy modulo the second coordinate sign
    const auto mean = mean_direction({v1, v2}, ref);
    // v2 is sign-flipped to (0.8, -0.6); the mean is (0.8, 0).
    CHECK(mean(0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(mean(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pca baseline eigenvalues match direct eigendecomposition") {
    plssvd::model::ModelSpec spec;
    spec.dims = {120, 40, 30};
    spec.seed = 9;
    const auto pair = plssvd::model::sample_pair(spec);
    const auto pca = pca_top(pair, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(
        pair.X.transpose() * pair.X / spec.dims.p);
    CHECK(pca.x_eigvals(0) ==
          doctest::Approx(ex.eigenvalues()(spec.dims.p - 1)).epsilon(1e-9));
    CHECK(alignment_measure(pca.x_eigvecs.col(0),
                            ex.eigenvectors().col(spec.dims.p - 1)) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("report serialization emits headers and rows") {
    const auto X = random_matrix(30, 6, 10);
    const auto Y = random_matrix(30, 9, 11);
    const auto report = squared_singular_spectrum(cross_covariance(X, Y), 2);
    const auto csv = report_to_csv(report);
    CHECK(csv.find("index") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 7);
    const auto json_text = report_to_json(report);
    CHECK(json_text.find("squared_singular_values") != std::string::npos);
}
