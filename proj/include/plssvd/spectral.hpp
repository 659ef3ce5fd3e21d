#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "plssvd/model.hpp"

// Empirical side: cross-covariance spectra, spike extraction, alignment and
// the separate-PCA baseline on realized data.

namespace plssvd::spectral {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct CrossCovariance {
    Matrix S_XY;  // p x q, (1/sqrt(pq)) X^T Y
};

CrossCovariance cross_covariance(const model::DataPair& pair);
CrossCovariance cross_covariance(const Matrix& X, const Matrix& Y);

struct Histogram {
    std::vector<double> bin_edges;  // size bins + 1
    std::vector<double> counts;     // normalized to unit area over nonzeros
};

struct SpectrumReport {
    Vector squared_singular_values;  // length d = min(p, q), non-increasing
    Matrix left_vectors;             // p x top_k
    Matrix right_vectors;            // q x top_k
    Histogram histogram;
};

// Full squared singular spectrum of S_XY plus the top_k singular vector
// pairs, via SVD of S_XY (not eigendecomposition of the kernels).
SpectrumReport squared_singular_spectrum(const CrossCovariance& S, int top_k,
                                         int histogram_bins = 100,
                                         double edge_lo = -1.0,
                                         double edge_hi = -1.0);

// Squared singular values above edge_hi * (1 + margin), largest first,
// with their indices into the sorted spectrum.
std::vector<std::pair<int, double>> extract_spikes(const SpectrumReport& report,
                                                   double edge_hi,
                                                   double margin = 0.05);

// Squared inner product of two unit vectors, clipped into [0, 1].
double alignment_measure(const Vector& v_hat, const Vector& v_ref);

// Sign-fixes each vector against the reference and averages without
// renormalizing; a short output means no deterministic alignment.
Vector mean_direction(const std::vector<Vector>& vectors, const Vector& reference);

struct PcaBaseline {
    Matrix x_eigvecs;  // p x k, top eigenvectors of (1/p) X^T X
    Matrix y_eigvecs;  // q x k
    Vector x_eigvals;
    Vector y_eigvals;
};

PcaBaseline pca_top(const model::DataPair& pair, int k);

// One row per squared singular value.
std::string report_to_csv(const SpectrumReport& report);
std::string report_to_json(const SpectrumReport& report);

}  // namespace plssvd::spectral
