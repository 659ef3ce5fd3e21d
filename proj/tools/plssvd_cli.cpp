// Command-line front end: theory evaluation, one-shot simulation,
// Monte-Carlo experiments, PLS-vs-PCA comparison and figure reproduction.
// Every run writes a manifest.json describing inputs, seed and outputs.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plssvd/mc.hpp"
#include "plssvd/model.hpp"
#include "plssvd/spectral.hpp"
#include "plssvd/svg.hpp"
#include "plssvd/theory.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using plssvd::theory::AspectRatios;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunContext {
    std::string subcommand;
    std::string out_dir;
    json inputs = json::object();
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();

    void note(const std::string& path) { outputs.push_back(path); }

    std::string path(const std::string& name) {
        fs::create_directories(out_dir);
        std::string full = (fs::path(out_dir) / name).string();
        note(full);
        return full;
    }

    void write_manifest() {
        fs::create_directories(out_dir);
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        json m;
        m["tool"] = "plssvd";
        m["version"] = kVersion;
        m["subcommand"] = subcommand;
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        m["wall_time_seconds"] = secs;
        std::ofstream((fs::path(out_dir) / "manifest.json").string())
            << m.dump(2) << "\n";
    }
};

void write_text(RunContext& ctx, const std::string& name,
                const std::string& content) {
    std::ofstream(ctx.path(name)) << content;
}

plssvd::model::ModelSpec load_spec(const std::string& config_path,
                                   std::optional<std::uint64_t> seed) {
    auto spec = plssvd::model::spec_from_file(config_path);
    if (seed) spec.seed = *seed;
    return spec;
}

plssvd::svg::Series density_curve(const plssvd::theory::BulkLaw& law,
                                  int points = 400) {
    plssvd::svg::Series s;
    s.label = "theory";
    for (int i = 0; i <= points; ++i) {
        double x = law.x_minus +
                   (law.x_plus - law.x_minus) * i / static_cast<double>(points);
        s.x.push_back(x);
        s.y.push_back(law.density(x));
    }
    return s;
}

std::string density_csv(const plssvd::theory::BulkLaw& law, int points) {
    std::ostringstream os;
    os << "x,density,cdf\n";
    os.precision(12);
    for (int i = 0; i <= points; ++i) {
        double x = law.x_minus +
                   (law.x_plus - law.x_minus) * i / static_cast<double>(points);
        os << x << "," << law.density(x) << "," << law.cdf(x) << "\n";
    }
    return os.str();
}

// One data draw: spectrum CSV/JSON plus a histogram SVG with the theoretical
// density and predicted spike markers.
void simulate_once(RunContext& ctx, const plssvd::model::ModelSpec& spec,
                   const std::string& stem, double margin = 0.05) {
    auto law = plssvd::theory::bulk_law(spec.dims.ratios());
    auto preds = plssvd::mc::predict_spikes(spec);
    auto pair = plssvd::model::sample_pair(spec);
    auto S = plssvd::spectral::cross_covariance(pair);
    auto report = plssvd::spectral::squared_singular_spectrum(
        S, std::max<int>(1, static_cast<int>(preds.size())), 100, law.x_minus,
        law.x_plus);

    write_text(ctx, stem + "_spectrum.csv",
               plssvd::spectral::report_to_csv(report));
    write_text(ctx, stem + "_spectrum.json",
               plssvd::spectral::report_to_json(report));

    plssvd::svg::HistogramPlot plot;
    plot.bin_edges = report.histogram.bin_edges;
    plot.counts = report.histogram.counts;
    plot.curves.push_back(density_curve(law));
    plssvd::svg::Markers mk;
    for (const auto& pr : preds) mk.x.push_back(pr.xi);
    if (!mk.x.empty()) plot.markers.push_back(mk);
    std::ostringstream title;
    title.precision(4);
    title << "squared singular values, beta_p=" << spec.dims.beta_p()
          << " beta_q=" << spec.dims.beta_q();
    plot.title = title.str();
    write_text(ctx, stem + ".svg", plssvd::svg::render_histogram(plot));

    auto spikes = plssvd::spectral::extract_spikes(report, law.x_plus, margin);
    json j;
    j["x_minus"] = law.x_minus;
    j["x_plus"] = law.x_plus;
    j["atom0"] = law.atom0;
    j["empirical_spikes"] = json::array();
    for (auto& [idx, v] : spikes) j["empirical_spikes"].push_back(v);
    j["predicted_spikes"] = json::array();
    for (const auto& pr : preds) {
        j["predicted_spikes"].push_back(
            {{"label", pr.label}, {"xi", pr.xi}, {"lambda", pr.lambda}});
    }
    write_text(ctx, stem + "_summary.json", j.dump(2));
}

void run_experiment_files(RunContext& ctx, plssvd::mc::ExperimentConfig cfg,
                          const std::string& note_key = "") {
    auto report = plssvd::mc::run_experiment(cfg);
    std::string stem = plssvd::mc::write_report(report, cfg, ctx.out_dir);
    for (const auto& suffix :
         {"_report.json", "_spikes.csv", "_alignments.csv"}) {
        ctx.note((fs::path(ctx.out_dir) / (stem + suffix)).string());
    }
    if (!note_key.empty()) ctx.inputs[note_key] = stem;
}

plssvd::model::ModelSpec make_spec(int n, double beta_p, double beta_q,
                                   std::uint64_t seed) {
    plssvd::model::ModelSpec spec;
    spec.dims.n = n;
    spec.dims.p = static_cast<int>(std::lround(n / beta_p));
    spec.dims.q = static_cast<int>(std::lround(n / beta_q));
    spec.seed = seed;
    return spec;
}

Eigen::MatrixXd rotation2(double angle) {
    Eigen::MatrixXd rot(2, 2);
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return rot;
}

struct FigureScale {
    bool desk;
    int n(int full_n) const { return desk ? full_n / 2 : full_n; }
    int trials(int full_trials) const {
        return desk ? std::max(1, full_trials / 10) : full_trials;
    }
};

void reproduce_fig1(RunContext& ctx, FigureScale sc, std::uint64_t seed) {
    struct Panel {
        double beta_p, beta_q;
        const char* name;
    };
    const Panel panels[] = {{1.0 / 6.0, 0.5, "fig1_panel_a"},
                            {50.0, 2.0, "fig1_panel_b"},
                            {10.0 / 3.0, 4.0, "fig1_panel_c"}};
    const int full_n = 1200;
    for (const auto& pn : panels) {
        auto spec = make_spec(sc.n(full_n), pn.beta_p, pn.beta_q, seed);
        simulate_once(ctx, spec, pn.name);
        auto law = plssvd::theory::bulk_law(spec.dims.ratios());
        write_text(ctx, std::string(pn.name) + "_density.csv",
                   density_csv(law, 400));
    }
}

plssvd::model::ModelSpec fig2_spec(int n, std::uint64_t seed) {
    auto spec = make_spec(n, 10.0, 2.0, seed);
    spec.spectrum.r_M = 2;
    spec.spectrum.lambdas_M = {25.0, 10.0};
    spec.spectrum.r_N = 2;
    spec.spectrum.lambdas_N = {35.0, 15.0};
    return spec;
}

void reproduce_fig2(RunContext& ctx, FigureScale sc, std::uint64_t seed,
                    int threads) {
    auto spec = fig2_spec(sc.n(8000), seed);
    simulate_once(ctx, spec, "fig2");
    plssvd::mc::ExperimentConfig cfg;
    cfg.model = spec;
    cfg.trials = sc.trials(100);
    cfg.threads = threads;
    run_experiment_files(ctx, cfg, "fig2_experiment");
}

// Empirical mean of the left singular vector paired with the strongest
// N-side spike; its norm collapses because the left vector carries no
// deterministic component.
void reproduce_fig3(RunContext& ctx, FigureScale sc, std::uint64_t seed,
                    int threads) {
    auto spec = fig2_spec(sc.n(2000), seed);
    plssvd::mc::ExperimentConfig cfg;
    cfg.model = spec;
    cfg.trials = sc.trials(1000);
    cfg.threads = threads;
    cfg.quantities = {plssvd::mc::Quantity::Spikes,
                      plssvd::mc::Quantity::Alignments,
                      plssvd::mc::Quantity::MeanDirections};
    auto report = plssvd::mc::run_experiment(cfg);
    std::string stem = plssvd::mc::write_report(report, cfg, ctx.out_dir);
    ctx.note((fs::path(ctx.out_dir) / (stem + "_report.json")).string());
    json j;
    for (const auto& row : report.mean_directions) {
        j[row.label] = {{"mean_norm", row.norm},
                        {"cos2_with_reference", row.cos2_with_reference}};
    }
    j["note"] =
        "left vectors attached to N-only spikes have vanishing mean norm";
    write_text(ctx, "fig3_summary.json", j.dump(2));
}

void reproduce_fig4(RunContext& ctx, FigureScale sc, std::uint64_t seed,
                    int threads) {
    auto spec = make_spec(sc.n(8000), 10.0, 2.0, seed);
    spec.spectrum.r = 2;
    spec.spectrum.lambdas_P = {10.0, 5.0};
    spec.spectrum.lambdas_R = {4.0, 2.0};
    spec.spectrum.rotation_R = rotation2(M_PI / 5.0);
    simulate_once(ctx, spec, "fig4");
    plssvd::mc::ExperimentConfig cfg;
    cfg.model = spec;
    cfg.trials = sc.trials(100);
    cfg.threads = threads;
    run_experiment_files(ctx, cfg, "fig4_experiment");
}

void reproduce_fig5(RunContext& ctx, FigureScale sc, std::uint64_t seed,
                    int threads) {
    auto spec = make_spec(sc.n(8000), 10.0, 2.0, seed);
    spec.spectrum.r = 1;
    spec.spectrum.lambdas_P = {10.0};
    spec.spectrum.lambdas_R = {4.0};
    spec.spectrum.r_M = 1;
    spec.spectrum.lambdas_M = {20.0};
    simulate_once(ctx, spec, "fig5");
    plssvd::mc::ExperimentConfig cfg;
    cfg.model = spec;
    cfg.trials = sc.trials(100);
    cfg.threads = threads;
    run_experiment_files(ctx, cfg, "fig5_experiment");
}

void reproduce_fig6(RunContext& ctx, FigureScale sc, std::uint64_t seed,
                    int threads) {
    auto spec = make_spec(sc.n(400), 0.5, 0.4, seed);
    spec.spectrum.r = 2;
    spec.spectrum.lambdas_P = {10.0, 1.0};
    spec.spectrum.lambdas_R = {10.0, 1.0};
    spec.spectrum.rotation_R = rotation2(M_PI / 6.0);

    plssvd::mc::ExperimentConfig cfg;
    cfg.model = spec;
    cfg.trials = sc.trials(1000);
    cfg.threads = threads;
    cfg.quantities = {plssvd::mc::Quantity::Spikes,
                      plssvd::mc::Quantity::Alignments,
                      plssvd::mc::Quantity::MeanDirections};
    auto report = plssvd::mc::run_experiment(cfg);
    std::string stem = plssvd::mc::write_report(report, cfg, ctx.out_dir);
    ctx.note((fs::path(ctx.out_dir) / (stem + "_report.json")).string());

    // Stem plot: Monte-Carlo mean of v-hat_1 against the skewed prediction.
    auto factors = plssvd::model::build_signal_factors(spec);
    auto kernel = plssvd::theory::build_common_kernel(
        factors.P.transpose() * factors.P / spec.dims.p,
        factors.R.transpose() * factors.R / spec.dims.q);
    auto pred = plssvd::theory::skewed_direction(
        factors.P, factors.R, kernel, 0, plssvd::theory::VectorSide::Right);

    std::vector<Eigen::VectorXd> vs;
    for (int t = 0; t < cfg.trials; ++t) {
        auto pair = plssvd::mc::sample_trial(spec, t);
        auto S = plssvd::spectral::cross_covariance(pair);
        auto rep = plssvd::spectral::squared_singular_spectrum(S, 1);
        vs.push_back(rep.right_vectors.col(0));
    }
    auto mean = plssvd::spectral::mean_direction(vs, pred);
    plssvd::svg::StemPlot stems;
    stems.title = "mean of v-hat_1 (stems) vs skewed prediction (line)";
    for (int i = 0; i < mean.size(); ++i) {
        stems.values.push_back(mean(i));
        stems.reference.push_back(pred(i));
    }
    write_text(ctx, "fig6_mean_direction.svg",
               plssvd::svg::render_stems(stems));
    std::ostringstream csv;
    csv << "coordinate,empirical_mean,skewed_prediction\n";
    csv.precision(12);
    for (int i = 0; i < mean.size(); ++i)
        csv << i << "," << mean(i) << "," << pred(i) << "\n";
    write_text(ctx, "fig6_mean_direction.csv", csv.str());
}

void reproduce_fig7(RunContext& ctx) {
    AspectRatios ratios{4.0, 4.0};
    std::vector<double> grid;
    const int cells = 40;
    for (int i = 0; i < cells; ++i) {
        grid.push_back(std::pow(10.0, -1.0 + 2.3 * i / (cells - 1.0)));
    }
    auto result = plssvd::mc::pls_vs_pca_grid(ratios, grid, grid);
    write_text(ctx, "fig7_grid.csv", plssvd::mc::grid_to_csv(result));

    auto render = [&](const std::string& name, auto value,
                      const std::string& title, double vmax) {
        plssvd::svg::HeatmapPlot hm;
        for (double g : grid) {
            hm.x_grid.push_back(std::log10(g));
            hm.y_grid.push_back(std::log10(g));
        }
        for (const auto& cell : result.cells) hm.values.push_back(value(cell));
        hm.v_min = vmax == 1.0 ? 0.0 : -vmax;
        hm.v_max = vmax;
        hm.title = title;
        hm.x_label = "log10 lambda_R";
        hm.y_label = "log10 lambda_P";
        // Threshold contours: PLS detection lambda_T = tau and the PCA
        // per-side thresholds sqrt(beta).
        plssvd::svg::Series pls;
        pls.color = "#111";
        pls.label = "pls threshold";
        for (double lp : grid) {
            double lr = (result.tau - lp) / (1.0 + lp);
            if (lr > 0) {
                pls.x.push_back(std::log10(lp));
                pls.y.push_back(std::log10(lr));
            }
        }
        hm.contours.push_back(pls);
        plssvd::svg::Series pca_v, pca_h;
        pca_v.color = "#0a7d32";
        pca_h.color = "#0a7d32";
        double lo = std::log10(grid.front()), hi = std::log10(grid.back());
        pca_v.x = {std::log10(result.pca_threshold_p),
                   std::log10(result.pca_threshold_p)};
        pca_v.y = {lo, hi};
        pca_h.x = {lo, hi};
        pca_h.y = {std::log10(result.pca_threshold_q),
                   std::log10(result.pca_threshold_q)};
        hm.contours.push_back(pca_v);
        hm.contours.push_back(pca_h);
        write_text(ctx, name, plssvd::svg::render_heatmap(hm));
    };
    render("fig7_pls.svg", [](const auto& c) { return c.pls_product; },
           "PLS alignment product, beta_p=beta_q=4", 1.0);
    render("fig7_pca.svg", [](const auto& c) { return c.pca_product; },
           "PCA alignment product, beta_p=beta_q=4", 1.0);
    render("fig7_difference.svg", [](const auto& c) { return c.difference; },
           "PLS - PCA alignment product", 0.5);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-matrix characterization of high-dimensional PLS-SVD"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = "out";
    std::string config_path;
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    int threads = 0;
    std::string scale = "desk";
    double beta_p = 1.0, beta_q = 1.0;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (0 = all cores)");
    auto seed_opt = app.add_option("--seed", seed_flag, "base RNG seed");

    auto add_ratios = [&](CLI::App* cmd) {
        cmd->add_option("--beta-p", beta_p, "aspect ratio n/p")->required();
        cmd->add_option("--beta-q", beta_q, "aspect ratio n/q")->required();
    };

    auto* bulk = app.add_subcommand("theory-bulk",
                                    "bulk density, edges and zero atom");
    int bulk_points = 400;
    add_ratios(bulk);
    bulk->add_option("--points", bulk_points, "density sample count");

    auto* thresh = app.add_subcommand("theory-threshold",
                                      "detection threshold and PCA margin");
    add_ratios(thresh);

    auto* spikes_cmd = app.add_subcommand("theory-spikes",
                                          "spike locations for strengths");
    std::vector<double> lambdas;
    add_ratios(spikes_cmd);
    spikes_cmd->add_option("--lambda", lambdas, "signal strengths")->required();

    auto* align_cmd = app.add_subcommand("theory-align",
                                         "alignment for a specific component");
    std::string side = "m";
    add_ratios(align_cmd);
    align_cmd->add_option("--lambda", lambdas, "signal strengths")->required();
    align_cmd->add_option("--side", side, "m or n")
        ->check(CLI::IsMember({"m", "n"}));

    auto* sim = app.add_subcommand("simulate", "one data draw and its spectrum");
    sim->add_option("--config", config_path, "ModelSpec JSON")->required();

    auto* exp = app.add_subcommand("experiment", "Monte-Carlo experiment");
    int trials = 20;
    double margin = 0.05;
    exp->add_option("--config", config_path, "ModelSpec JSON")->required();
    exp->add_option("--trials", trials, "Monte-Carlo trials");
    exp->add_option("--margin", margin, "spike extraction margin");

    auto* cmp = app.add_subcommand("compare-pca", "PLS vs PCA alignment grid");
    int grid_cells = 20;
    double lambda_lo = 0.1, lambda_hi = 20.0;
    add_ratios(cmp);
    cmp->add_option("--cells", grid_cells, "grid cells per axis");
    cmp->add_option("--lambda-min", lambda_lo, "grid lower end");
    cmp->add_option("--lambda-max", lambda_hi, "grid upper end");

    auto* rep = app.add_subcommand("reproduce", "figure reproduction");
    std::string figure;
    rep->add_option("--figure", figure, "fig1..fig7")
        ->required()
        ->check(CLI::IsMember(
            {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}));
    rep->add_option("--scale", scale, "full or desk")
        ->check(CLI::IsMember({"full", "desk"}));

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;
    const std::uint64_t seed = seed_set ? seed_flag : 12345;

    RunContext ctx;
    ctx.out_dir = out_dir;
    ctx.inputs["seed"] = seed;
    ctx.inputs["threads"] = threads;

    try {
        if (bulk->parsed()) {
            ctx.subcommand = "theory-bulk";
            ctx.inputs["beta_p"] = beta_p;
            ctx.inputs["beta_q"] = beta_q;
            auto law = plssvd::theory::bulk_law({beta_p, beta_q});
            json j{{"beta_p", beta_p},
                   {"beta_q", beta_q},
                   {"x_minus", law.x_minus},
                   {"x_plus", law.x_plus},
                   {"atom0", law.atom0}};
            std::cout << j.dump(2) << "\n";
            write_text(ctx, "bulk.json", j.dump(2));
            write_text(ctx, "bulk_density.csv", density_csv(law, bulk_points));
            plssvd::svg::HistogramPlot plot;
            plot.bin_edges = {law.x_minus, law.x_plus};
            plot.counts = {0.0};
            plot.curves.push_back(density_curve(law, bulk_points));
            plot.title = "limiting density of squared singular values";
            write_text(ctx, "bulk_density.svg",
                       plssvd::svg::render_histogram(plot));
        } else if (thresh->parsed()) {
            ctx.subcommand = "theory-threshold";
            ctx.inputs["beta_p"] = beta_p;
            ctx.inputs["beta_q"] = beta_q;
            AspectRatios ratios{beta_p, beta_q};
            auto dm = plssvd::theory::dominance_margin(ratios);
            json j{{"beta_p", beta_p},
                   {"beta_q", beta_q},
                   {"tau", dm.tau},
                   {"pca_bound", dm.m_bound},
                   {"margin", dm.margin}};
            std::cout << j.dump(2) << "\n";
            write_text(ctx, "threshold.json", j.dump(2));
        } else if (spikes_cmd->parsed() || align_cmd->parsed()) {
            const bool spikes_only = spikes_cmd->parsed();
            ctx.subcommand = spikes_only ? "theory-spikes" : "theory-align";
            ctx.inputs["beta_p"] = beta_p;
            ctx.inputs["beta_q"] = beta_q;
            ctx.inputs["lambda"] = lambdas;
            AspectRatios ratios{beta_p, beta_q};
            json arr = json::array();
            for (double l : lambdas) {
                auto xi = plssvd::theory::spike_location(l, ratios);
                json row{{"lambda", l},
                         {"detectable", xi.has_value()},
                         {"xi", xi ? json(*xi) : json()}};
                if (!spikes_only) {
                    auto s = side == "m" ? plssvd::theory::Side::M
                                         : plssvd::theory::Side::N;
                    row["zeta"] = plssvd::theory::align_specific(l, s, ratios);
                    row["side"] = side;
                }
                arr.push_back(row);
            }
            std::cout << arr.dump(2) << "\n";
            write_text(ctx,
                       spikes_only ? "spikes.json" : "alignments.json",
                       arr.dump(2));
        } else if (sim->parsed()) {
            ctx.subcommand = "simulate";
            ctx.inputs["config"] = config_path;
            auto spec = load_spec(
                config_path,
                seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt);
            simulate_once(ctx, spec, "simulate");
        } else if (exp->parsed()) {
            ctx.subcommand = "experiment";
            ctx.inputs["config"] = config_path;
            ctx.inputs["trials"] = trials;
            plssvd::mc::ExperimentConfig cfg;
            cfg.model = load_spec(
                config_path,
                seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt);
            cfg.trials = trials;
            cfg.spike_margin = margin;
            cfg.threads = threads;
            cfg.quantities = {plssvd::mc::Quantity::Density,
                              plssvd::mc::Quantity::Spikes,
                              plssvd::mc::Quantity::Alignments,
                              plssvd::mc::Quantity::MeanDirections};
            run_experiment_files(ctx, cfg, "report_stem");
        } else if (cmp->parsed()) {
            ctx.subcommand = "compare-pca";
            ctx.inputs["beta_p"] = beta_p;
            ctx.inputs["beta_q"] = beta_q;
            std::vector<double> grid;
            for (int i = 0; i < grid_cells; ++i) {
                double t = i / std::max(1.0, grid_cells - 1.0);
                grid.push_back(lambda_lo *
                               std::pow(lambda_hi / lambda_lo, t));
            }
            auto result =
                plssvd::mc::pls_vs_pca_grid({beta_p, beta_q}, grid, grid);
            write_text(ctx, "pls_vs_pca.csv", plssvd::mc::grid_to_csv(result));
            json j{{"tau", result.tau},
                   {"pca_threshold_p", result.pca_threshold_p},
                   {"pca_threshold_q", result.pca_threshold_q}};
            std::cout << j.dump(2) << "\n";
            write_text(ctx, "pls_vs_pca_summary.json", j.dump(2));
        } else if (rep->parsed()) {
            ctx.subcommand = "reproduce";
            ctx.inputs["figure"] = figure;
            ctx.inputs["scale"] = scale;
            FigureScale sc{scale == "desk"};
            if (figure == "fig1") reproduce_fig1(ctx, sc, seed);
            else if (figure == "fig2") reproduce_fig2(ctx, sc, seed, threads);
            else if (figure == "fig3") reproduce_fig3(ctx, sc, seed, threads);
            else if (figure == "fig4") reproduce_fig4(ctx, sc, seed, threads);
            else if (figure == "fig5") reproduce_fig5(ctx, sc, seed, threads);
            else if (figure == "fig6") reproduce_fig6(ctx, sc, seed, threads);
            else reproduce_fig7(ctx);
        }
        ctx.write_manifest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
