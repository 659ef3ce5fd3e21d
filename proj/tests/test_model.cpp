#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "plssvd/model.hpp"

using namespace plssvd::model;

namespace {

ModelSpec demo_spec() {
    ModelSpec spec;
    spec.dims = {300, 60, 120};
    spec.spectrum.r = 2;
    spec.spectrum.lambdas_P = {5.0, 2.0};
    spec.spectrum.lambdas_R = {3.0, 1.0};
    spec.spectrum.r_M = 1;
    spec.spectrum.lambdas_M = {7.0};
    spec.spectrum.r_N = 2;
    spec.spectrum.lambdas_N = {6.0, 4.0};
    spec.seed = 42;
    return spec;
}

}  // namespace

TEST_CASE("orthogonality invariants hold exactly by construction") {
    const auto spec = demo_spec();
    const auto pair = sample_pair(spec);
    const auto& f = pair.factors;
    const int r = spec.spectrum.r;
    const double tol = 1e-9 * spec.dims.n;
    CHECK((f.T.transpose() * f.T - Eigen::MatrixXd::Identity(r, r))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK((f.M.transpose() * f.T).cwiseAbs().maxCoeff() < tol);
    CHECK((f.N.transpose() * f.T).cwiseAbs().maxCoeff() < tol);
    CHECK((f.M.transpose() * f.N).cwiseAbs().maxCoeff() < tol);
}

TEST_CASE("kernel spectra match the requested eigenvalues") {
    const auto spec = demo_spec();
    const auto f = build_signal_factors(spec);
    auto eigs = [](const Eigen::MatrixXd& A, int keep) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        std::vector<double> out;
        const int n = static_cast<int>(A.rows());
        for (int i = 0; i < keep; ++i) out.push_back(es.eigenvalues()(n - 1 - i));
        return out;
    };
    const auto kp = eigs(f.P.transpose() * f.P / spec.dims.p, 2);
    CHECK(kp[0] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(kp[1] == doctest::Approx(2.0).epsilon(1e-9));
    const auto kr = eigs(f.R.transpose() * f.R / spec.dims.q, 2);
    CHECK(kr[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(kr[1] == doctest::Approx(1.0).epsilon(1e-9));
    const auto km = eigs(f.M.transpose() * f.M / spec.dims.p, 1);
    CHECK(km[0] == doctest::Approx(7.0).epsilon(1e-9));
    const auto kn = eigs(f.N.transpose() * f.N / spec.dims.q, 2);
    CHECK(kn[0] == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(kn[1] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto spec = demo_spec();
    const auto a = sample_pair(spec);
    const auto b = sample_pair(spec);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.Y - b.Y).cwiseAbs().maxCoeff() == 0.0);

    auto other = spec;
    other.seed = 43;
    const auto c = sample_pair(other);
    CHECK((a.X - c.X).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("noise reseeding keeps the signal factors fixed") {
    const auto spec = demo_spec();
    const auto a = sample_pair(spec, 1001);
    const auto b = sample_pair(spec, 1002);
    CHECK((a.factors.T - b.factors.T).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.factors.P - b.factors.P).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.factors.N - b.factors.N).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() > 1e-3);

    // X decomposes as signal plus noise; noise moments are near standard.
    const Eigen::MatrixXd E =
        a.X - a.factors.T * a.factors.P.transpose() - a.factors.M;
    const double n_entries = static_cast<double>(E.size());
    CHECK(std::abs(E.mean()) < 4.0 / std::sqrt(n_entries));
    CHECK(E.array().square().mean() ==
          doctest::Approx(1.0).epsilon(5.0 / std::sqrt(n_entries)));
}

TEST_CASE("model spec JSON round trip") {
    auto spec = demo_spec();
    spec.spectrum.rotation_P = Eigen::MatrixXd(2, 2);
    spec.spectrum.rotation_P << std::cos(0.3), -std::sin(0.3), std::sin(0.3),
        std::cos(0.3);
    const auto back = spec_from_json(to_json(spec));
    CHECK(back.dims.n == spec.dims.n);
    CHECK(back.dims.p == spec.dims.p);
    CHECK(back.dims.q == spec.dims.q);
    CHECK(back.seed == spec.seed);
    CHECK(back.spectrum.lambdas_N == spec.spectrum.lambdas_N);
    CHECK((back.spectrum.rotation_P - spec.spectrum.rotation_P)
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    const auto a = sample_pair(spec);
    const auto b = sample_pair(back);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("validation rejects malformed specs") {
    auto spec = demo_spec();
    spec.dims.n = 0;
    CHECK_THROWS(spec.validate());
    spec = demo_spec();
    spec.spectrum.lambdas_P = {5.0};  // size != r
    CHECK_THROWS(spec.validate());
    spec = demo_spec();
    spec.spectrum.lambdas_M = {-1.0};
    CHECK_THROWS(spec.validate());
}

TEST_CASE("retained frames are the kernel eigenvectors") {
    const auto spec = demo_spec();
    const auto pair = sample_pair(spec);
    const auto& f = pair.factors;
    // (1/p) M^T M applied to each retained frame column gives lambda * column.
    const Eigen::MatrixXd KM = f.M.transpose() * f.M / spec.dims.p;
    for (int k = 0; k < spec.spectrum.r_M; ++k) {
        const Eigen::VectorXd w = pair.M_directions.col(k);
        CHECK((KM * w - spec.spectrum.lambdas_M[k] * w).norm() < 1e-8);
        CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
}
