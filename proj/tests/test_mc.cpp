#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "plssvd/mc.hpp"

using namespace plssvd::mc;

namespace {

plssvd::model::ModelSpec small_spec() {
    plssvd::model::ModelSpec spec;
    spec.dims = {400, 40, 200};  // beta_p = 10, beta_q = 2
    spec.spectrum.r_M = 2;
    spec.spectrum.lambdas_M = {25.0, 10.0};
    spec.spectrum.r_N = 2;
    spec.spectrum.lambdas_N = {35.0, 15.0};
    spec.seed = 17;
    return spec;
}

}  // namespace

TEST_CASE("spike predictions are sorted and labelled") {
    const auto preds = predict_spikes(small_spec());
    REQUIRE(preds.size() == 4);
    CHECK(preds[0].label == "N1");
    CHECK(preds[1].label == "M1");
    CHECK(preds[2].label == "N2");
    CHECK(preds[3].label == "M2");
    for (std::size_t i = 1; i < preds.size(); ++i) {
        CHECK(preds[i - 1].xi > preds[i].xi);
    }
    CHECK(preds[1].xi == doctest::Approx(39.312).epsilon(1e-12));
    CHECK(preds[1].zeta_left ==
          doctest::Approx(14785.0 / 17550.0).epsilon(1e-12));
    CHECK(preds[0].zeta_right ==
          doctest::Approx(41715.0 / 56700.0).epsilon(1e-12));
}

TEST_CASE("sub-threshold components are dropped") {
    auto spec = small_spec();
    spec.spectrum.lambdas_M = {25.0, 1.0};  // 1.0 < tau(10,2)
    const auto preds = predict_spikes(spec);
    CHECK(preds.size() == 3);
    for (const auto& p : preds) CHECK(p.lambda > 6.2);
}

TEST_CASE("trial sampling is deterministic and trial-dependent") {
    const auto spec = small_spec();
    const auto a = sample_trial(spec, 3);
    const auto b = sample_trial(spec, 3);
    const auto c = sample_trial(spec, 4);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.X - c.X).cwiseAbs().maxCoeff() > 1e-3);
    CHECK((a.factors.N - c.factors.N).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("experiment reports are independent of thread count") {
    ExperimentConfig cfg;
    cfg.model = small_spec();
    cfg.trials = 4;
    cfg.threads = 1;
    const auto seq = run_experiment(cfg);
    cfg.threads = 3;
    const auto par = run_experiment(cfg);
    REQUIRE(seq.spikes.size() == par.spikes.size());
    for (std::size_t i = 0; i < seq.spikes.size(); ++i) {
        CHECK(seq.spikes[i].empirical_mean == par.spikes[i].empirical_mean);
    }
    CHECK(seq.ks_distance == par.ks_distance);
    CHECK(seq.largest_value_mean == par.largest_value_mean);
}

TEST_CASE("standard error shrinks with more trials") {
    ExperimentConfig cfg;
    cfg.model = small_spec();
    cfg.trials = 4;
    const auto few = run_experiment(cfg);
    cfg.trials = 16;
    const auto many = run_experiment(cfg);
    REQUIRE(!few.spikes.empty());
    REQUIRE(!many.spikes.empty());
    CHECK(many.spikes[0].std_error < few.spikes[0].std_error);
}

TEST_CASE("noise-only experiment reports confinement") {
    plssvd::model::ModelSpec spec;
    spec.dims = {200, 100, 50};
    spec.seed = 5;
    ExperimentConfig cfg;
    cfg.model = spec;
    cfg.trials = 5;
    const auto rep = run_experiment(cfg);
    CHECK(rep.spikes.empty());
    CHECK(rep.confinement_rate >= 0.0);
    CHECK(rep.ks_distance >= 0.0);
    CHECK(rep.ks_distance < 0.25);  // loose at this tiny size
}

TEST_CASE("pls vs pca grid dominance properties") {
    plssvd::theory::AspectRatios ratios{4.0, 4.0};
    std::vector<double> grid;
    for (int i = 0; i < 12; ++i) grid.push_back(0.2 * std::pow(1.6, i));
    const auto g = pls_vs_pca_grid(ratios, grid, grid);
    CHECK(g.tau == doctest::Approx(2.0 + 2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(g.pca_threshold_p == doctest::Approx(2.0).epsilon(1e-12));
    int positive = 0;
    for (const auto& cell : g.cells) {
        if (cell.pca_detects) CHECK(cell.difference >= -1e-12);
        if (cell.difference > 0.0) ++positive;
        const bool one_weak = (cell.lambda_p <= g.pca_threshold_p) !=
                              (cell.lambda_r <= g.pca_threshold_q);
        if (one_weak && cell.pls_detects) CHECK(cell.difference > 0.0);
    }
    CHECK(positive > 0);
    const auto csv = grid_to_csv(g);
    CHECK(csv.find("lambda_P") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          static_cast<long>(g.cells.size()) + 1);
}

TEST_CASE("report serialization and file writing") {
    ExperimentConfig cfg;
    cfg.model = small_spec();
    cfg.trials = 2;
    const auto rep = run_experiment(cfg);
    const auto j = report_to_json(rep);
    CHECK(j.find("ks_distance") != std::string::npos);
    CHECK(j.find("spikes") != std::string::npos);
    const auto stem = write_report(rep, cfg, "/tmp/plssvd_test_out");
    CHECK(stem.find("seed17") != std::string::npos);
    std::ifstream f("/tmp/plssvd_test_out/" + stem + "_report.json");
    CHECK(f.good());
}
