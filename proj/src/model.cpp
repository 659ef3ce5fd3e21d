#include "plssvd/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "plssvd/rng.hpp"

namespace plssvd::model {

namespace {

enum Stream : std::uint64_t {
    kFrame = 0,
    kLoadP = 1,
    kLoadR = 2,
    kLoadM = 3,
    kLoadN = 4,
    kNoiseE = 5,
    kNoiseF = 6,
};

Matrix gaussian_matrix(std::uint64_t seed, std::uint64_t stream, int rows,
                       int cols) {
    Matrix out(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            out(i, j) = rng::normal(seed, stream,
                                    static_cast<std::uint64_t>(j) * rows + i);
        }
    }
    return out;
}

// Orthonormal columns via Householder QR, with the sign convention that the
// triangular factor has a nonnegative diagonal (determinism).
Matrix orthonormalize(const Matrix& A) {
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix Q = qr.householderQ() * Matrix::Identity(A.rows(), A.cols());
    const Matrix Rfac = qr.matrixQR()
                            .topLeftCorner(A.cols(), A.cols())
                            .triangularView<Eigen::Upper>();
    for (int j = 0; j < A.cols(); ++j) {
        if (Rfac(j, j) < 0.0) Q.col(j) = -Q.col(j);
    }
    return Q;
}

void check_sorted_desc(const std::vector<double>& v, const char* name) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1] + 1e-12) {
            throw std::invalid_argument(std::string(name) +
                                        " must be non-increasing");
        }
    }
}

void check_orthogonal(const Matrix& rot, const char* name) {
    const int r = static_cast<int>(rot.rows());
    if (rot.cols() != r) throw std::invalid_argument(std::string(name) + " not square");
    const double dev =
        (rot.transpose() * rot - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
    if (dev > 1e-10) {
        throw std::invalid_argument(std::string(name) + " is not orthogonal");
    }
}

Matrix kernel_from(const std::vector<double>& lambdas, const Matrix& rot) {
    const int r = static_cast<int>(lambdas.size());
    Vector d(r);
    for (int i = 0; i < r; ++i) d(i) = lambdas[i];
    if (rot.size() == 0) return Matrix(d.asDiagonal());
    return rot * d.asDiagonal() * rot.transpose();
}

}  // namespace

void Dimensions::validate() const {
    if (n < 1 || p < 1 || q < 1) {
        throw std::invalid_argument("dimensions must be positive");
    }
}

Matrix SignalSpectrum::kernel_P() const { return kernel_from(lambdas_P, rotation_P); }
Matrix SignalSpectrum::kernel_R() const { return kernel_from(lambdas_R, rotation_R); }

void SignalSpectrum::validate() const {
    if (r < 0 || r_M < 0 || r_N < 0) throw std::invalid_argument("negative rank");
    if (static_cast<int>(lambdas_P.size()) != r ||
        static_cast<int>(lambdas_R.size()) != r) {
        throw std::invalid_argument("lambdas_P/lambdas_R must have length r");
    }
    if (static_cast<int>(lambdas_M.size()) != r_M ||
        static_cast<int>(lambdas_N.size()) != r_N) {
        throw std::invalid_argument("lambdas_M/lambdas_N length mismatch");
    }
    for (double v : lambdas_P)
        if (v < 0.0) throw std::invalid_argument("negative entry in lambdas_P");
    for (double v : lambdas_R)
        if (v < 0.0) throw std::invalid_argument("negative entry in lambdas_R");
    for (double v : lambdas_M)
        if (v <= 0.0) throw std::invalid_argument("lambdas_M must be positive");
    for (double v : lambdas_N)
        if (v <= 0.0) throw std::invalid_argument("lambdas_N must be positive");
    check_sorted_desc(lambdas_P, "lambdas_P");
    check_sorted_desc(lambdas_R, "lambdas_R");
    check_sorted_desc(lambdas_M, "lambdas_M");
    check_sorted_desc(lambdas_N, "lambdas_N");
    if (rotation_P.size() != 0) check_orthogonal(rotation_P, "rotation_P");
    if (rotation_R.size() != 0) check_orthogonal(rotation_R, "rotation_R");
}

void ModelSpec::validate() const {
    dims.validate();
    spectrum.validate();
    if (spectrum.r + spectrum.r_M + spectrum.r_N > dims.n) {
        throw std::invalid_argument("rank overflow: r + r_M + r_N > n");
    }
    if (spectrum.r > dims.d()) {
        throw std::invalid_argument("common rank exceeds min(p, q)");
    }
    if (spectrum.r_M > dims.p || spectrum.r_N > dims.q) {
        throw std::invalid_argument("individual rank exceeds variable count");
    }
}

SignalFactors build_signal_factors(const ModelSpec& spec) {
    spec.validate();
    const int n = spec.dims.n, p = spec.dims.p, q = spec.dims.q;
    const auto& sp = spec.spectrum;
    const int total = sp.r + sp.r_M + sp.r_N;

    SignalFactors f;
    Matrix frame;
    if (total > 0) {
        frame = orthonormalize(gaussian_matrix(spec.seed, kFrame, n, total));
    }
    f.T = total > 0 ? Matrix(frame.leftCols(sp.r)) : Matrix(n, 0);
    const Matrix Mbar = total > 0 ? Matrix(frame.middleCols(sp.r, sp.r_M))
                                  : Matrix(n, 0);
    const Matrix Nbar = total > 0 ? Matrix(frame.rightCols(sp.r_N)) : Matrix(n, 0);

    auto loading = [&](std::uint64_t stream, int dim, int rank,
                       const std::vector<double>& lambdas, const Matrix& rot,
                       Matrix& frame_out) -> Matrix {
        if (rank == 0) {
            frame_out = Matrix(dim, 0);
            return Matrix(dim, 0);
        }
        const Matrix W = orthonormalize(gaussian_matrix(spec.seed, stream, dim, rank));
        frame_out = W;
        Vector s(rank);
        for (int i = 0; i < rank; ++i) s(i) = std::sqrt(lambdas[i]);
        Matrix L = std::sqrt(static_cast<double>(dim)) * W * s.asDiagonal();
        if (rot.size() != 0) L = L * rot.transpose();
        return L;
    };

    Matrix WM, WN;
    f.P = loading(kLoadP, p, sp.r, sp.lambdas_P, sp.rotation_P, f.W_P);
    f.R = loading(kLoadR, q, sp.r, sp.lambdas_R, sp.rotation_R, f.W_R);
    const Matrix BM = loading(kLoadM, p, sp.r_M, sp.lambdas_M, Matrix(), WM);
    const Matrix BN = loading(kLoadN, q, sp.r_N, sp.lambdas_N, Matrix(), WN);
    f.M = sp.r_M > 0 ? Matrix(Mbar * BM.transpose()) : Matrix::Zero(n, p);
    f.N = sp.r_N > 0 ? Matrix(Nbar * BN.transpose()) : Matrix::Zero(n, q);
    f.W_M = WM;
    f.W_N = WN;
    return f;
}

DataPair sample_pair(const ModelSpec& spec) {
    return sample_pair(spec, spec.seed);
}

DataPair sample_pair(const ModelSpec& spec, std::uint64_t noise_seed) {
    DataPair pair;
    pair.factors = build_signal_factors(spec);
    const auto& sp = spec.spectrum;
    const int n = spec.dims.n, p = spec.dims.p, q = spec.dims.q;

    pair.X = gaussian_matrix(noise_seed, kNoiseE, n, p);
    pair.Y = gaussian_matrix(noise_seed, kNoiseF, n, q);
    if (sp.r > 0) {
        pair.X += pair.factors.T * pair.factors.P.transpose();
        pair.Y += pair.factors.T * pair.factors.R.transpose();
    }
    if (sp.r_M > 0) pair.X += pair.factors.M;
    if (sp.r_N > 0) pair.Y += pair.factors.N;

    // Alignment references: eigenvectors of the individual kernels. By
    // construction these are the orthonormal loading frames of M and N.
    pair.M_directions = pair.factors.W_M;
    pair.N_directions = pair.factors.W_N;
    return pair;
}

std::string to_json(const ModelSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.dims.n;
    j["p"] = spec.dims.p;
    j["q"] = spec.dims.q;
    j["r"] = spec.spectrum.r;
    j["r_M"] = spec.spectrum.r_M;
    j["r_N"] = spec.spectrum.r_N;
    j["lambdas_P"] = spec.spectrum.lambdas_P;
    j["lambdas_R"] = spec.spectrum.lambdas_R;
    j["lambdas_M"] = spec.spectrum.lambdas_M;
    j["lambdas_N"] = spec.spectrum.lambdas_N;
    auto rot_to_json = [](const Matrix& rot) {
        std::vector<double> flat;
        for (int i = 0; i < rot.rows(); ++i) {
            for (int jc = 0; jc < rot.cols(); ++jc) flat.push_back(rot(i, jc));
        }
        return flat;
    };
    if (spec.spectrum.rotation_P.size() != 0) {
        j["rotation_P"] = rot_to_json(spec.spectrum.rotation_P);
    }
    if (spec.spectrum.rotation_R.size() != 0) {
        j["rotation_R"] = rot_to_json(spec.spectrum.rotation_R);
    }
    j["seed"] = spec.seed;
    return j.dump(2);
}

ModelSpec spec_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ModelSpec spec;
    spec.dims.n = j.at("n").get<int>();
    spec.dims.p = j.at("p").get<int>();
    spec.dims.q = j.at("q").get<int>();
    spec.spectrum.r = j.at("r").get<int>();
    spec.spectrum.r_M = j.at("r_M").get<int>();
    spec.spectrum.r_N = j.at("r_N").get<int>();
    spec.spectrum.lambdas_P = j.at("lambdas_P").get<std::vector<double>>();
    spec.spectrum.lambdas_R = j.at("lambdas_R").get<std::vector<double>>();
    spec.spectrum.lambdas_M = j.at("lambdas_M").get<std::vector<double>>();
    spec.spectrum.lambdas_N = j.at("lambdas_N").get<std::vector<double>>();
    auto rot_from_json = [](const nlohmann::json& arr, int r) {
        const auto flat = arr.get<std::vector<double>>();
        if (static_cast<int>(flat.size()) != r * r) {
            throw std::invalid_argument("rotation must be r*r row-major values");
        }
        Matrix rot(r, r);
        for (int i = 0; i < r; ++i) {
            for (int jc = 0; jc < r; ++jc) rot(i, jc) = flat[i * r + jc];
        }
        return rot;
    };
    if (j.contains("rotation_P")) {
        spec.spectrum.rotation_P = rot_from_json(j["rotation_P"], spec.spectrum.r);
    }
    if (j.contains("rotation_R")) {
        spec.spectrum.rotation_R = rot_from_json(j["rotation_R"], spec.spectrum.r);
    }
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.validate();
    return spec;
}

ModelSpec spec_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return spec_from_json(ss.str());
}

}  // namespace plssvd::model
