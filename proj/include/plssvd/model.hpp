#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "plssvd/theory.hpp"

// Synthetic signal-plus-noise model X = T P^T + M + E, Y = T R^T + N + F
// with the orthogonality constraints T^T T = I, M^T T = N^T T = M^T N = 0
// enforced exactly by construction.

namespace plssvd::model {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Dimensions {
    int n = 0;
    int p = 0;
    int q = 0;

    int d() const { return std::min(p, q); }
    double beta_p() const { return static_cast<double>(n) / p; }
    double beta_q() const { return static_cast<double>(n) / q; }
    double beta() const { return std::max(beta_p(), beta_q()); }
    theory::AspectRatios ratios() const { return {beta_p(), beta_q()}; }
    void validate() const;
};

struct SignalSpectrum {
    int r = 0;
    int r_M = 0;
    int r_N = 0;
    std::vector<double> lambdas_P;  // size r, non-increasing, >= 0
    std::vector<double> lambdas_R;  // size r
    std::vector<double> lambdas_M;  // size r_M, > 0
    std::vector<double> lambdas_N;  // size r_N, > 0
    Matrix rotation_P;  // r x r orthogonal, eigenbasis of K_P; identity default
    Matrix rotation_R;

    Matrix kernel_P() const;  // rotation_P * diag(lambdas_P) * rotation_P^T
    Matrix kernel_R() const;
    void validate() const;
};

struct ModelSpec {
    Dimensions dims;
    SignalSpectrum spectrum;
    std::uint64_t seed = 0;

    void validate() const;
};

// Round-trip serialization; keys are exactly n, p, q, r, r_M, r_N,
// lambdas_P, lambdas_R, lambdas_M, lambdas_N, rotation_P, rotation_R
// (row-major, optional), seed.
std::string to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const std::string& text);
ModelSpec spec_from_file(const std::string& path);

struct SignalFactors {
    Matrix T;    // n x r, orthonormal columns
    Matrix P;    // p x r
    Matrix R;    // q x r
    Matrix M;    // n x p
    Matrix N;    // n x q
    Matrix W_P;  // p x r orthonormal frame of P
    Matrix W_R;  // q x r orthonormal frame of R
    Matrix W_M;  // p x r_M, eigenvectors of (1/p) M^T M
    Matrix W_N;  // q x r_N, eigenvectors of (1/q) N^T N
};

struct DataPair {
    Matrix X;
    Matrix Y;
    SignalFactors factors;
    // Eigenvectors of the individual kernels (1/p) M^T M and (1/q) N^T N,
    // retained as alignment references.
    Matrix M_directions;  // p x r_M
    Matrix N_directions;  // q x r_N
};

SignalFactors build_signal_factors(const ModelSpec& spec);
DataPair sample_pair(const ModelSpec& spec);
// Same signal factors (keyed by spec.seed), noise keyed by noise_seed.
DataPair sample_pair(const ModelSpec& spec, std::uint64_t noise_seed);

}  // namespace plssvd::model
