#include "plssvd/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "plssvd/rng.hpp"

namespace plssvd::mc {

namespace {

using theory::AspectRatios;

struct TrialResult {
    std::vector<double> nonzero_values;
    double largest = 0.0;
    std::vector<double> spike_values;       // rank-paired with predictions
    bool mismatch = false;
    bool no_spikes = false;
    // Per prediction: squared inner products against the fixed references.
    std::vector<double> align_left;   // -1 when not applicable
    std::vector<double> align_right;
    std::vector<Vector> vectors_left;   // tracked for mean directions
    std::vector<Vector> vectors_right;
    double resolvent_trace = 0.0;
    double bilinear = 0.0;
    std::vector<double> pca_align;
};

// Tabulated CDF of the continuous bulk: cumulative trapezoid on the
// theta-substituted density, cheap to query per sample point.
class CdfTable {
  public:
    CdfTable() = default;
    CdfTable(const theory::BulkLaw& law, int points = 1500) {
        const double mid = 0.5 * (law.x_minus + law.x_plus);
        const double half = 0.5 * (law.x_plus - law.x_minus);
        xs_.resize(points + 1);
        cum_.resize(points + 1);
        double acc = 0.0;
        double prev_g = 0.0, prev_x = law.x_minus;
        xs_[0] = law.x_minus;
        cum_[0] = 0.0;
        for (int i = 1; i <= points; ++i) {
            const double theta = M_PI * i / points;
            const double x = mid - half * std::cos(theta);
            const double g = law.density(x) * half * std::sin(theta);
            acc += 0.5 * (g + prev_g) * (M_PI / points);
            xs_[i] = x;
            cum_[i] = acc;
            prev_g = g;
            prev_x = x;
        }
        (void)prev_x;
        total_ = acc;
    }

    // CDF of the continuous part conditioned on the bulk (normalized to 1).
    double operator()(double x) const {
        if (xs_.empty() || x <= xs_.front()) return 0.0;
        if (x >= xs_.back()) return 1.0;
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
        return (cum_[i - 1] + t * (cum_[i] - cum_[i - 1])) / total_;
    }

  private:
    std::vector<double> xs_;
    std::vector<double> cum_;
    double total_ = 1.0;
};

std::string kind_tag(SpikePrediction::Kind kind) {
    switch (kind) {
        case SpikePrediction::Kind::M: return "M";
        case SpikePrediction::Kind::N: return "N";
        default: return "T";
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    model.validate();
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (spike_margin < 0.0) throw std::invalid_argument("negative spike margin");
}

model::DataPair sample_trial(const model::ModelSpec& spec, int trial) {
    return model::sample_pair(spec,
                              spec.seed ^ static_cast<std::uint64_t>(trial));
}

std::vector<SpikePrediction> predict_spikes(const model::ModelSpec& spec) {
    const AspectRatios ratios = spec.dims.ratios();
    const double tau = theory::threshold_tau(ratios);
    std::vector<SpikePrediction> preds;

    auto add_specific = [&](SpikePrediction::Kind kind,
                            const std::vector<double>& lambdas) {
        for (std::size_t k = 0; k < lambdas.size(); ++k) {
            const double lambda = lambdas[k];
            if (lambda <= tau) continue;
            SpikePrediction p;
            p.kind = kind;
            p.component = static_cast<int>(k);
            p.lambda = lambda;
            p.xi = *theory::spike_location(lambda, ratios);
            const bool is_m = kind == SpikePrediction::Kind::M;
            p.zeta_left = is_m ? theory::align_specific(lambda, theory::Side::M,
                                                        ratios)
                               : 0.0;
            p.zeta_right = is_m ? 0.0
                                : theory::align_specific(
                                      lambda, theory::Side::N, ratios);
            p.label = kind_tag(kind) + std::to_string(k + 1);
            preds.push_back(p);
        }
    };
    add_specific(SpikePrediction::Kind::M, spec.spectrum.lambdas_M);
    add_specific(SpikePrediction::Kind::N, spec.spectrum.lambdas_N);

    if (spec.spectrum.r > 0) {
        const auto kernel = theory::build_common_kernel(
            spec.spectrum.kernel_P(), spec.spectrum.kernel_R());
        for (int k = 0; k < kernel.rank(); ++k) {
            const double lt = kernel.lambda_T(k);
            if (lt <= tau) continue;
            SpikePrediction p;
            p.kind = SpikePrediction::Kind::Common;
            p.component = k;
            p.lambda = lt;
            p.xi = *theory::spike_location(lt, ratios);
            std::tie(p.zeta_left, p.zeta_right) =
                theory::align_common(kernel, k, ratios);
            p.label = "T" + std::to_string(k + 1);
            preds.push_back(p);
        }
    }
    std::sort(preds.begin(), preds.end(),
              [](const auto& a, const auto& b) { return a.xi > b.xi; });
    return preds;
}

AggregateReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto& spec = config.model;
    const AspectRatios ratios = spec.dims.ratios();
    const theory::BulkLaw law = theory::bulk_law(ratios);
    const auto preds = predict_spikes(spec);
    const int npred = static_cast<int>(preds.size());
    const auto want = [&](Quantity quant) {
        return config.quantities.count(quant) > 0;
    };

    // Fixed ground-truth references shared by every trial.
    const auto factors = model::build_signal_factors(spec);
    std::optional<theory::CommonKernel> kernel;
    if (spec.spectrum.r > 0) {
        const int p = spec.dims.p, q = spec.dims.q;
        kernel = theory::build_common_kernel(
            factors.P.transpose() * factors.P / static_cast<double>(p),
            factors.R.transpose() * factors.R / static_cast<double>(q));
    }
    std::vector<std::optional<Vector>> ref_left(npred), ref_right(npred);
    for (int j = 0; j < npred; ++j) {
        const auto& pr = preds[j];
        switch (pr.kind) {
            case SpikePrediction::Kind::M:
                ref_left[j] = factors.W_M.col(pr.component);
                break;
            case SpikePrediction::Kind::N:
                ref_right[j] = factors.W_N.col(pr.component);
                break;
            case SpikePrediction::Kind::Common:
                ref_left[j] = theory::skewed_direction(
                    factors.P, factors.R, *kernel, pr.component,
                    theory::VectorSide::Left);
                ref_right[j] = theory::skewed_direction(
                    factors.P, factors.R, *kernel, pr.component,
                    theory::VectorSide::Right);
                break;
        }
    }

    CdfTable cdf;
    if (want(Quantity::Density)) cdf = CdfTable(law);

    // Resolvent probe setup: z just above the bulk, a deterministic unit probe.
    const double z_res = law.x_plus + 1.0;
    double m_of_z = 0.0, bilinear_pred = 0.0;
    Vector probe;
    if (want(Quantity::Resolvent)) {
        m_of_z = theory::stieltjes_m({z_res, 0.0}, ratios).m.real();
        for (int j = 0; j < npred; ++j) {
            if (ref_right[j]) {
                probe = *ref_right[j];
                break;
            }
        }
        if (probe.size() == 0) {
            probe = Vector(spec.dims.q);
            for (int i = 0; i < spec.dims.q; ++i) {
                probe(i) = rng::normal(0x9d2c5680u, 1001, i);
            }
            probe.normalize();
        }
        theory::SignalFactors tf{factors.P, factors.R, factors.M, factors.N};
        bilinear_pred = theory::det_equiv_bilinear(tf, z_res, probe, probe,
                                                   ratios,
                                                   theory::VectorSide::Right);
    }

    const int pca_rank = spec.spectrum.r;

    std::vector<TrialResult> results(config.trials);
    auto run_trial = [&](int t) {
        TrialResult res;
        const auto pair = sample_trial(spec, t);
        const auto S = spectral::cross_covariance(pair);
        const int top_k = std::min(npred + 1, spec.dims.d());
        auto report = spectral::squared_singular_spectrum(S, top_k, 100,
                                                          law.x_minus,
                                                          law.x_plus);
        res.largest = report.squared_singular_values.size() > 0
                          ? report.squared_singular_values(0)
                          : 0.0;
        if (want(Quantity::Density)) {
            for (int i = 0; i < report.squared_singular_values.size(); ++i) {
                const double v = report.squared_singular_values(i);
                if (v > 1e-12) res.nonzero_values.push_back(v);
            }
        }
        const auto spikes =
            spectral::extract_spikes(report, law.x_plus, config.spike_margin);
        res.no_spikes = spikes.empty();
        res.mismatch = static_cast<int>(spikes.size()) != npred;
        res.spike_values.assign(npred, -1.0);
        res.align_left.assign(npred, -1.0);
        res.align_right.assign(npred, -1.0);
        res.vectors_left.resize(npred);
        res.vectors_right.resize(npred);
        const int matched = std::min<int>(npred, static_cast<int>(spikes.size()));
        for (int j = 0; j < matched; ++j) {
            res.spike_values[j] = spikes[j].second;
            const Vector u = report.left_vectors.col(j);
            const Vector v = report.right_vectors.col(j);
            if (want(Quantity::Alignments)) {
                if (ref_left[j]) {
                    res.align_left[j] = spectral::alignment_measure(u, *ref_left[j]);
                }
                if (ref_right[j]) {
                    res.align_right[j] =
                        spectral::alignment_measure(v, *ref_right[j]);
                }
            }
            if (want(Quantity::MeanDirections)) {
                res.vectors_left[j] = u;
                res.vectors_right[j] = v;
            }
        }
        if (want(Quantity::Resolvent)) {
            const auto& vals = report.squared_singular_values;
            double trace = 0.0;
            for (int i = 0; i < vals.size(); ++i) trace += 1.0 / (vals(i) - z_res);
            trace += (spec.dims.q - vals.size()) * (1.0 / (0.0 - z_res));
            res.resolvent_trace = trace / spec.dims.q;
            const Matrix K = S.S_XY.transpose() * S.S_XY;
            const Matrix shifted =
                K - z_res * Matrix::Identity(K.rows(), K.cols());
            res.bilinear = probe.dot(shifted.ldlt().solve(probe));
        }
        if (want(Quantity::Pca) && pca_rank > 0) {
            const auto pca = spectral::pca_top(pair, pca_rank);
            res.pca_align.resize(2 * pca_rank);
            for (int k = 0; k < pca_rank; ++k) {
                res.pca_align[2 * k] = spectral::alignment_measure(
                    Vector(pca.x_eigvecs.col(k)), Vector(factors.W_P.col(k)));
                res.pca_align[2 * k + 1] = spectral::alignment_measure(
                    Vector(pca.y_eigvecs.col(k)), Vector(factors.W_R.col(k)));
            }
        }
        results[t] = std::move(res);
    };

    int nthreads = config.threads > 0
                       ? config.threads
                       : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min(nthreads, config.trials));
    if (nthreads == 1) {
        for (int t = 0; t < config.trials; ++t) run_trial(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&] {
                for (int t = next.fetch_add(1); t < config.trials;
                     t = next.fetch_add(1)) {
                    run_trial(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction in trial order.
    AggregateReport agg;
    agg.trials = config.trials;
    agg.x_plus = law.x_plus;
    for (int t = 0; t < config.trials; ++t) {
        agg.seeds.push_back(spec.seed ^ static_cast<std::uint64_t>(t));
    }

    double largest_sum = 0.0;
    int mismatches = 0, empty = 0;
    std::vector<double> pooled;
    for (const auto& res : results) {
        largest_sum += res.largest;
        mismatches += res.mismatch ? 1 : 0;
        empty += res.no_spikes ? 1 : 0;
        pooled.insert(pooled.end(), res.nonzero_values.begin(),
                      res.nonzero_values.end());
    }
    agg.largest_value_mean = largest_sum / config.trials;
    agg.spike_mismatch_rate = static_cast<double>(mismatches) / config.trials;
    agg.confinement_rate = static_cast<double>(empty) / config.trials;

    if (want(Quantity::Density) && !pooled.empty()) {
        std::sort(pooled.begin(), pooled.end());
        const double n = static_cast<double>(pooled.size());
        double ks = 0.0;
        for (std::size_t i = 0; i < pooled.size(); ++i) {
            const double F = cdf(pooled[i]);
            ks = std::max(ks, std::abs((i + 1) / n - F));
            ks = std::max(ks, std::abs(i / n - F));
        }
        agg.ks_distance = ks;
    }

    auto mean_stderr = [](const std::vector<double>& xs) {
        const double n = static_cast<double>(xs.size());
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= n;
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var = xs.size() > 1 ? var / (n - 1.0) : 0.0;
        return std::make_pair(mean, std::sqrt(var / n));
    };

    for (int j = 0; j < npred; ++j) {
        std::vector<double> vals, lefts, rights;
        for (const auto& res : results) {
            if (res.spike_values[j] >= 0.0) vals.push_back(res.spike_values[j]);
            if (res.align_left[j] >= 0.0) lefts.push_back(res.align_left[j]);
            if (res.align_right[j] >= 0.0) rights.push_back(res.align_right[j]);
        }
        if (!vals.empty()) {
            auto [mean, se] = mean_stderr(vals);
            agg.spikes.push_back({preds[j].label, preds[j].xi, mean, se,
                                  std::abs(mean - preds[j].xi) / preds[j].xi});
        }
        auto push_align = [&](const std::string& side_label, double predicted,
                              const std::vector<double>& xs) {
            if (xs.empty()) return;
            auto [mean, se] = mean_stderr(xs);
            agg.alignments.push_back({side_label, predicted, mean, se,
                                      std::abs(mean - predicted)});
        };
        const bool common = preds[j].kind == SpikePrediction::Kind::Common;
        if (ref_left[j]) {
            push_align(common ? "zeta_P[" + preds[j].label + "]"
                              : "zeta_" + preds[j].label,
                       preds[j].zeta_left, lefts);
        }
        if (ref_right[j]) {
            push_align(common ? "zeta_R[" + preds[j].label + "]"
                              : "zeta_" + preds[j].label,
                       preds[j].zeta_right, rights);
        }
    }

    if (want(Quantity::MeanDirections)) {
        for (int j = 0; j < npred; ++j) {
            auto collect = [&](bool left) {
                std::vector<Vector> vecs;
                for (const auto& res : results) {
                    const Vector& v =
                        left ? res.vectors_left[j] : res.vectors_right[j];
                    if (v.size() > 0) vecs.push_back(v);
                }
                return vecs;
            };
            auto emit = [&](bool left, const char* side) {
                auto vecs = collect(left);
                if (vecs.empty()) return;
                const auto& ref = left ? ref_left[j] : ref_right[j];
                const Vector sign_ref = ref ? *ref : vecs.front();
                const Vector mean = spectral::mean_direction(vecs, sign_ref);
                MeanDirectionRow row;
                row.label = std::string(side) + "[" + preds[j].label + "]";
                row.norm = mean.norm();
                const double denom = mean.norm() * sign_ref.norm();
                row.cos2_with_reference =
                    denom > 1e-12 ? std::pow(mean.dot(sign_ref) / denom, 2.0)
                                  : 0.0;
                agg.mean_directions.push_back(row);
            };
            emit(true, "u");
            emit(false, "v");
        }
    }

    if (want(Quantity::Resolvent)) {
        double trace_mean = 0.0, bilinear_mean = 0.0;
        for (const auto& res : results) {
            trace_mean += res.resolvent_trace;
            bilinear_mean += res.bilinear;
        }
        trace_mean /= config.trials;
        bilinear_mean /= config.trials;
        agg.resolvent_trace_dev = std::abs(trace_mean - m_of_z);
        agg.bilinear_dev = std::abs(bilinear_mean - bilinear_pred);
    }

    if (want(Quantity::Pca) && pca_rank > 0) {
        for (int k = 0; k < pca_rank; ++k) {
            std::vector<double> xs, ys;
            for (const auto& res : results) {
                if (!res.pca_align.empty()) {
                    xs.push_back(res.pca_align[2 * k]);
                    ys.push_back(res.pca_align[2 * k + 1]);
                }
            }
            if (xs.empty()) continue;
            const double pred_x = theory::pca_alignment(
                spec.spectrum.lambdas_P[k], ratios.beta_p);
            const double pred_y = theory::pca_alignment(
                spec.spectrum.lambdas_R[k], ratios.beta_q);
            auto [mx, sx] = mean_stderr(xs);
            auto [my, sy] = mean_stderr(ys);
            agg.pca.push_back({"pca_P[" + std::to_string(k + 1) + "]", pred_x,
                               mx, sx, std::abs(mx - pred_x)});
            agg.pca.push_back({"pca_R[" + std::to_string(k + 1) + "]", pred_y,
                               my, sy, std::abs(my - pred_y)});
        }
    }
    return agg;
}

namespace {

nlohmann::json rows_to_json(const std::vector<AlignmentRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"label", r.label},
                       {"predicted", r.predicted},
                       {"empirical_mean", r.empirical_mean},
                       {"std_error", r.std_error},
                       {"deviation", r.deviation}});
    }
    return arr;
}

}  // namespace

std::string report_to_json(const AggregateReport& report) {
    nlohmann::json j;
    j["trials"] = report.trials;
    j["seeds"] = report.seeds;
    j["x_plus"] = report.x_plus;
    if (report.ks_distance >= 0.0) j["ks_distance"] = report.ks_distance;
    j["largest_value_mean"] = report.largest_value_mean;
    j["confinement_rate"] = report.confinement_rate;
    j["spike_mismatch_rate"] = report.spike_mismatch_rate;
    nlohmann::json spikes = nlohmann::json::array();
    for (const auto& s : report.spikes) {
        spikes.push_back({{"label", s.label},
                          {"predicted_xi", s.predicted_xi},
                          {"empirical_mean", s.empirical_mean},
                          {"std_error", s.std_error},
                          {"rel_error", s.rel_error}});
    }
    j["spikes"] = spikes;
    j["alignments"] = rows_to_json(report.alignments);
    nlohmann::json dirs = nlohmann::json::array();
    for (const auto& d : report.mean_directions) {
        dirs.push_back({{"label", d.label},
                        {"norm", d.norm},
                        {"cos2_with_reference", d.cos2_with_reference}});
    }
    j["mean_directions"] = dirs;
    if (report.resolvent_trace_dev >= 0.0) {
        j["resolvent_trace_dev"] = report.resolvent_trace_dev;
        j["bilinear_dev"] = report.bilinear_dev;
    }
    j["pca"] = rows_to_json(report.pca);
    return j.dump(2);
}

std::string write_report(const AggregateReport& report,
                         const ExperimentConfig& config,
                         const std::string& dir) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (char c : model::to_json(config.model)) {
        hash = (hash ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    }
    std::ostringstream stem;
    stem << "experiment_" << std::hex << (hash & 0xffffffffULL) << "_seed"
         << std::dec << config.model.seed;
    std::filesystem::create_directories(dir);
    const std::string base = dir + "/" + stem.str();
    std::ofstream(base + "_report.json") << report_to_json(report);
    {
        std::ofstream csv(base + "_spikes.csv");
        csv << "label,predicted_xi,empirical_mean,std_error,rel_error\n";
        csv.precision(17);
        for (const auto& s : report.spikes) {
            csv << s.label << ',' << s.predicted_xi << ',' << s.empirical_mean
                << ',' << s.std_error << ',' << s.rel_error << '\n';
        }
    }
    {
        std::ofstream csv(base + "_alignments.csv");
        csv << "label,predicted,empirical_mean,std_error,deviation\n";
        csv.precision(17);
        for (const auto& a : report.alignments) {
            csv << a.label << ',' << a.predicted << ',' << a.empirical_mean
                << ',' << a.std_error << ',' << a.deviation << '\n';
        }
    }
    return stem.str();
}

PlsVsPcaGrid pls_vs_pca_grid(const theory::AspectRatios& ratios,
                             const std::vector<double>& lambda_p_grid,
                             const std::vector<double>& lambda_r_grid) {
    ratios.validate();
    PlsVsPcaGrid grid;
    grid.ratios = ratios;
    grid.tau = theory::threshold_tau(ratios);
    grid.pca_threshold_p = std::sqrt(ratios.beta_p);
    grid.pca_threshold_q = std::sqrt(ratios.beta_q);
    grid.lambda_p_grid = lambda_p_grid;
    grid.lambda_r_grid = lambda_r_grid;
    for (double lp : lambda_p_grid) {
        for (double lr : lambda_r_grid) {
            GridCell cell;
            cell.lambda_p = lp;
            cell.lambda_r = lr;
            cell.lambda_t = lp + lr + lp * lr;
            cell.pls_detects = cell.lambda_t > grid.tau;
            cell.pca_detects =
                lp > grid.pca_threshold_p && lr > grid.pca_threshold_q;
            if (cell.pls_detects) {
                const double lt = cell.lambda_t;
                const double num = theory::threshold_polynomial(lt, ratios);
                const double zp = (lt - lr) * num /
                                  (lt * lt * (lt + 1.0) * (lt + ratios.beta_q));
                const double zr = (lt - lp) * num /
                                  (lt * lt * (lt + 1.0) * (lt + ratios.beta_p));
                cell.pls_product = std::clamp(zp, 0.0, 1.0) *
                                   std::clamp(zr, 0.0, 1.0);
            } else {
                cell.pls_product = 0.0;
            }
            cell.pca_product = theory::pca_alignment(lp, ratios.beta_p) *
                               theory::pca_alignment(lr, ratios.beta_q);
            cell.difference = cell.pls_product - cell.pca_product;
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

std::string grid_to_csv(const PlsVsPcaGrid& grid) {
    std::ostringstream out;
    out.precision(17);
    out << "lambda_P,lambda_R,lambda_T,pls_product,pca_product,difference,"
           "pls_detects,pca_detects\n";
    for (const auto& c : grid.cells) {
        out << c.lambda_p << ',' << c.lambda_r << ',' << c.lambda_t << ','
            << c.pls_product << ',' << c.pca_product << ',' << c.difference
            << ',' << (c.pls_detects ? 1 : 0) << ',' << (c.pca_detects ? 1 : 0)
            << '\n';
    }
    return out.str();
}

}  // namespace plssvd::mc
