#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plssvd/model.hpp"
#include "plssvd/spectral.hpp"
#include "plssvd/theory.hpp"

// Monte-Carlo orchestration: repeated sampling of the model, empirical
// spectra/spikes/alignments, and comparison against the closed-form
// predictions. Trials are independent work units with per-trial RNG derived
// from (base seed, trial index); aggregation reduces in trial order so the
// report does not depend on scheduling.

namespace plssvd::mc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Quantity { Density, Spikes, Alignments, MeanDirections, Resolvent, Pca };

struct ExperimentConfig {
    model::ModelSpec model;
    int trials = 1;
    double spike_margin = 0.05;
    std::set<Quantity> quantities = {Quantity::Density, Quantity::Spikes,
                                     Quantity::Alignments};
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

// Sample with the signal factors pinned to the base seed and only the noise
// re-keyed per trial, so Monte-Carlo means of singular vectors are taken
// against fixed ground-truth directions.
model::DataPair sample_trial(const model::ModelSpec& spec, int trial);

struct SpikePrediction {
    enum class Kind { M, N, Common };
    Kind kind;
    int component;         // index within its kind, 0-based
    double lambda;         // signal strength (lambda_M / lambda_N / lambda_T)
    double xi;             // predicted spike location
    double zeta_left;      // left-vector alignment (M-side / zeta_P); 0 if n/a
    double zeta_right;     // right-vector alignment (N-side / zeta_R); 0 if n/a
    std::string label;
};

// All predicted spikes for the spec's signal spectrum, sorted by decreasing
// xi; components below the threshold are omitted.
std::vector<SpikePrediction> predict_spikes(const model::ModelSpec& spec);

struct SpikeRow {
    std::string label;
    double predicted_xi;
    double empirical_mean;
    double std_error;
    double rel_error;
};

struct AlignmentRow {
    std::string label;
    double predicted;
    double empirical_mean;
    double std_error;
    double deviation;  // |empirical - predicted|
};

struct MeanDirectionRow {
    std::string label;
    double norm;                 // norm of the sign-fixed empirical mean
    double cos2_with_reference;  // squared cosine against the target direction
};

struct AggregateReport {
    int trials = 0;
    std::vector<std::uint64_t> seeds;
    double x_plus = 0.0;
    double ks_distance = -1.0;          // pooled nonzero spectrum vs theory CDF
    double largest_value_mean = 0.0;
    double confinement_rate = -1.0;     // fraction of trials with no spikes
    double spike_mismatch_rate = 0.0;   // trials whose spike count != predicted
    std::vector<SpikeRow> spikes;
    std::vector<AlignmentRow> alignments;
    std::vector<MeanDirectionRow> mean_directions;
    double resolvent_trace_dev = -1.0;  // |(1/q) Tr Q(z) - m(z)| at z = x_+ + 1
    double bilinear_dev = -1.0;         // deterministic-equivalent deviation
    std::vector<AlignmentRow> pca;
};

AggregateReport run_experiment(const ExperimentConfig& config);

std::string report_to_json(const AggregateReport& report);
// Writes <dir>/<stem>_report.json plus per-table CSVs; the stem embeds a
// hash of the config and the base seed. Returns the stem used.
std::string write_report(const AggregateReport& report,
                         const ExperimentConfig& config, const std::string& dir);

struct GridCell {
    double lambda_p;
    double lambda_r;
    double lambda_t;
    double pls_product;   // zeta_P * zeta_R via the commuting-case formulas
    double pca_product;   // zeta_PCA_P * zeta_PCA_R
    double difference;
    bool pls_detects;
    bool pca_detects;
};

struct PlsVsPcaGrid {
    theory::AspectRatios ratios;
    double tau;
    double pca_threshold_p;  // sqrt(beta_p)
    double pca_threshold_q;
    std::vector<double> lambda_p_grid;
    std::vector<double> lambda_r_grid;
    std::vector<GridCell> cells;  // row-major over (lambda_p, lambda_r)
};

PlsVsPcaGrid pls_vs_pca_grid(const theory::AspectRatios& ratios,
                             const std::vector<double>& lambda_p_grid,
                             const std::vector<double>& lambda_r_grid);

std::string grid_to_csv(const PlsVsPcaGrid& grid);

}  // namespace plssvd::mc
