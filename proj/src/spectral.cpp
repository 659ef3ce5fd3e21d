#include "plssvd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace plssvd::spectral {

CrossCovariance cross_covariance(const Matrix& X, const Matrix& Y) {
    if (X.rows() != Y.rows()) {
        throw std::invalid_argument("X and Y must share the sample dimension");
    }
    const double scale =
        1.0 / std::sqrt(static_cast<double>(X.cols()) * Y.cols());
    return {scale * (X.transpose() * Y)};
}

CrossCovariance cross_covariance(const model::DataPair& pair) {
    return cross_covariance(pair.X, pair.Y);
}

SpectrumReport squared_singular_spectrum(const CrossCovariance& S, int top_k,
                                         int histogram_bins, double edge_lo,
                                         double edge_hi) {
    const int d = static_cast<int>(std::min(S.S_XY.rows(), S.S_XY.cols()));
    if (top_k > d) throw std::invalid_argument("top_k exceeds min(p, q)");

    Eigen::BDCSVD<Matrix> svd(S.S_XY,
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw std::runtime_error("SVD failed to converge on S_XY");
    }
    SpectrumReport report;
    report.squared_singular_values = svd.singularValues().cwiseAbs2();
    report.left_vectors = svd.matrixU().leftCols(top_k);
    report.right_vectors = svd.matrixV().leftCols(top_k);

    // Default span [0.9*edge_lo (or 0), 1.1*max(edge_hi, max value)].
    const double vmax =
        d > 0 ? report.squared_singular_values.maxCoeff() : 1.0;
    double lo = edge_lo > 0.0 ? 0.9 * edge_lo : 0.0;
    double hi = 1.1 * std::max(edge_hi, vmax);
    if (hi <= lo) hi = lo + 1.0;
    report.histogram.bin_edges.resize(histogram_bins + 1);
    report.histogram.counts.assign(histogram_bins, 0.0);
    const double width = (hi - lo) / histogram_bins;
    for (int i = 0; i <= histogram_bins; ++i) {
        report.histogram.bin_edges[i] = lo + width * i;
    }
    int nonzero = 0;
    for (int i = 0; i < d; ++i) {
        const double v = report.squared_singular_values(i);
        if (v <= 1e-12) continue;
        ++nonzero;
        const int bin = std::clamp(static_cast<int>((v - lo) / width), 0,
                                   histogram_bins - 1);
        report.histogram.counts[bin] += 1.0;
    }
    if (nonzero > 0) {
        for (double& c : report.histogram.counts) c /= nonzero * width;
    }
    return report;
}

std::vector<std::pair<int, double>> extract_spikes(const SpectrumReport& report,
                                                   double edge_hi,
                                                   double margin) {
    if (margin < 0.0) throw std::invalid_argument("margin must be nonnegative");
    std::vector<std::pair<int, double>> spikes;
    const double cut = edge_hi * (1.0 + margin);
    for (int i = 0; i < report.squared_singular_values.size(); ++i) {
        const double v = report.squared_singular_values(i);
        if (v > cut) {
            spikes.emplace_back(i, v);
        } else {
            break;  // sorted non-increasing; output is a prefix
        }
    }
    return spikes;
}

double alignment_measure(const Vector& v_hat, const Vector& v_ref) {
    const double nh = v_hat.norm(), nr = v_ref.norm();
    if (nh < 1e-12 || nr < 1e-12) {
        throw std::invalid_argument("alignment_measure: zero-norm input");
    }
    if (std::abs(nh - 1.0) > 1e-8 || std::abs(nr - 1.0) > 1e-8) {
        throw std::invalid_argument("alignment_measure: inputs must be unit norm");
    }
    const double ip = v_hat.dot(v_ref);
    return std::clamp(ip * ip, 0.0, 1.0);
}

Vector mean_direction(const std::vector<Vector>& vectors,
                      const Vector& reference) {
    if (vectors.empty()) {
        throw std::invalid_argument("mean_direction: empty vector list");
    }
    Vector acc = Vector::Zero(reference.size());
    for (const auto& v : vectors) {
        acc += v.dot(reference) >= 0.0 ? v : Vector(-v);
    }
    return acc / static_cast<double>(vectors.size());
}

PcaBaseline pca_top(const model::DataPair& pair, int k) {
    const int p = static_cast<int>(pair.X.cols());
    const int q = static_cast<int>(pair.Y.cols());
    if (k > std::min(p, q)) throw std::invalid_argument("pca_top: k too large");
    PcaBaseline out;
    out.x_eigvecs = Matrix(p, k);
    out.y_eigvecs = Matrix(q, k);
    out.x_eigvals = Vector(k);
    out.y_eigvals = Vector(k);
    if (k == 0) return out;

    // SVD of the data matrix doubles as the eigendecomposition of the
    // sample covariance, avoiding the p x p product.
    auto top = [&](const Matrix& Z, Matrix& vecs, Vector& vals) {
        Eigen::BDCSVD<Matrix> svd(Z, Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success) {
            throw std::runtime_error("SVD failed to converge in pca_top");
        }
        const double dim = static_cast<double>(Z.cols());
        for (int i = 0; i < k; ++i) {
            vecs.col(i) = svd.matrixV().col(i);
            vals(i) = svd.singularValues()(i) * svd.singularValues()(i) / dim;
        }
    };
    top(pair.X, out.x_eigvecs, out.x_eigvals);
    top(pair.Y, out.y_eigvecs, out.y_eigvals);
    return out;
}

std::string report_to_csv(const SpectrumReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "index,squared_singular_value\n";
    for (int i = 0; i < report.squared_singular_values.size(); ++i) {
        out << i << ',' << report.squared_singular_values(i) << '\n';
    }
    return out.str();
}

std::string report_to_json(const SpectrumReport& report) {
    nlohmann::json j;
    j["squared_singular_values"] = std::vector<double>(
        report.squared_singular_values.data(),
        report.squared_singular_values.data() +
            report.squared_singular_values.size());
    j["histogram"]["bin_edges"] = report.histogram.bin_edges;
    j["histogram"]["density"] = report.histogram.counts;
    auto cols = [](const Matrix& m) {
        std::vector<std::vector<double>> out;
        for (int c = 0; c < m.cols(); ++c) {
            out.emplace_back(m.col(c).data(), m.col(c).data() + m.rows());
        }
        return out;
    };
    j["left_vectors"] = cols(report.left_vectors);
    j["right_vectors"] = cols(report.right_vectors);
    return j.dump(2);
}

}  // namespace plssvd::spectral
