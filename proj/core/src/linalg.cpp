#include "pradius/linalg.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pradius {

namespace {

std::atomic<int>& cap_storage() {
    static std::atomic<int> cap{4096};
    return cap;
}

}  // namespace

int dimension_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_dimension_cap(int cap) {
    if (cap < 1) throw std::invalid_argument("dimension cap must be positive");
    cap_storage().store(cap, std::memory_order_relaxed);
}

bool entries_finite(const Matrix& a) { return a.allFinite(); }

Matrix kron(const Matrix& a, const Matrix& b) {
    const long long rows = static_cast<long long>(a.rows()) * b.rows();
    const long long cols = static_cast<long long>(a.cols()) * b.cols();
    const long long cap = dimension_cap();
    if (rows > cap || cols > cap) {
        throw DimensionCapError("kron result " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " exceeds dimension cap " +
                                std::to_string(cap));
    }
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix kron_power(const Matrix& a, int p) {
    if (p < 1) throw std::invalid_argument("kron_power: p must be >= 1");
    Matrix out = a;
    for (int i = 1; i < p; ++i) out = kron(out, a);
    return out;
}

namespace {

double radius_2x2(double a, double b, double c, double d) {
    const double tr = a + d;
    const double det = a * d - b * c;
    const double disc = 0.25 * tr * tr - det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return std::max(std::abs(0.5 * tr + s), std::abs(0.5 * tr - s));
    }
    return std::sqrt(det);
}

// Max eigenvalue modulus from a real quasi-triangular Schur factor.
double radius_from_quasi_triangular(const Eigen::MatrixXd& t) {
    const Eigen::Index n = t.rows();
    double best = 0.0;
    Eigen::Index i = 0;
    while (i < n) {
        if (i + 1 < n && t(i + 1, i) != 0.0) {
            best = std::max(best, radius_2x2(t(i, i), t(i, i + 1), t(i + 1, i), t(i + 1, i + 1)));
            i += 2;
        } else {
            best = std::max(best, std::abs(t(i, i)));
            i += 1;
        }
    }
    return best;
}

}  // namespace

double spectral_radius(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("spectral_radius: matrix is not square");
    if (a.rows() == 0) throw std::invalid_argument("spectral_radius: empty matrix");
    const Eigen::Index n = a.rows();
    if (n == 1) return std::abs(a(0, 0));
    if (n == 2) return radius_2x2(a(0, 0), a(0, 1), a(1, 0), a(1, 1));

    Eigen::RealSchur<Eigen::MatrixXd> schur(Eigen::MatrixXd(a), /*computeU=*/false);
    if (schur.info() == Eigen::Success) return radius_from_quasi_triangular(schur.matrixT());

    // The Francis iteration can stall on exactly symmetric spectra (e.g.
    // averages of rotation Kronecker products); the complex-shift variant
    // handles those.
    Eigen::ComplexSchur<Eigen::MatrixXcd> cschur;
    cschur.setMaxIterations(100 * static_cast<int>(n));
    cschur.compute(Eigen::MatrixXcd(Eigen::MatrixXd(a)), /*computeU=*/false);
    if (cschur.info() == Eigen::Success) {
        return cschur.matrixT().diagonal().cwiseAbs().maxCoeff();
    }
    throw std::runtime_error("spectral_radius: eigenvalue iteration failed to converge");
}

double operator_norm(const Matrix& a) {
    if (a.size() == 0) throw std::invalid_argument("operator_norm: empty matrix");
    if (a.rows() == 1 || a.cols() == 1) return a.norm();
    if (a.rows() == 2 && a.cols() == 2) {
        // sigma_max = q + r with q, r built from sums of squares; stable
        // even when the singular values coincide (orthogonal matrices).
        const double e = 0.5 * (a(0, 0) + a(1, 1));
        const double h = 0.5 * (a(1, 0) - a(0, 1));
        const double f = 0.5 * (a(0, 0) - a(1, 1));
        const double g = 0.5 * (a(1, 0) + a(0, 1));
        return std::hypot(e, h) + std::hypot(f, g);
    }
    if (std::max(a.rows(), a.cols()) <= 64) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(a)};
        return svd.singularValues()(0);
    }
    // Large lifted products: largest eigenvalue of the smaller Gram matrix.
    Eigen::MatrixXd gram;
    if (a.rows() <= a.cols()) {
        gram.noalias() = Eigen::MatrixXd(a) * Eigen::MatrixXd(a).transpose();
    } else {
        gram.noalias() = Eigen::MatrixXd(a).transpose() * Eigen::MatrixXd(a);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

Matrix block_matrix(const std::vector<std::vector<Matrix>>& blocks) {
    if (blocks.empty() || blocks.front().empty()) {
        throw std::invalid_argument("block_matrix: empty grid");
    }
    const std::size_t grid_cols = blocks.front().size();
    std::vector<Eigen::Index> row_heights(blocks.size());
    std::vector<Eigen::Index> col_widths(grid_cols);
    for (std::size_t r = 0; r < blocks.size(); ++r) {
        if (blocks[r].size() != grid_cols) {
            throw std::invalid_argument("block_matrix: ragged grid at row " + std::to_string(r));
        }
        row_heights[r] = blocks[r].front().rows();
    }
    for (std::size_t c = 0; c < grid_cols; ++c) col_widths[c] = blocks.front()[c].cols();

    long long total_rows = 0, total_cols = 0;
    for (auto h : row_heights) total_rows += h;
    for (auto w : col_widths) total_cols += w;
    const long long cap = dimension_cap();
    if (total_rows > cap || total_cols > cap) {
        throw DimensionCapError("block_matrix result " + std::to_string(total_rows) + "x" +
                                std::to_string(total_cols) + " exceeds dimension cap " +
                                std::to_string(cap));
    }

    Matrix out(total_rows, total_cols);
    Eigen::Index row0 = 0;
    for (std::size_t r = 0; r < blocks.size(); ++r) {
        Eigen::Index col0 = 0;
        for (std::size_t c = 0; c < grid_cols; ++c) {
            const Matrix& blk = blocks[r][c];
            if (blk.rows() != row_heights[r] || blk.cols() != col_widths[c]) {
                throw std::invalid_argument("block_matrix: inconsistent block dimensions at (" +
                                            std::to_string(r) + "," + std::to_string(c) + ")");
            }
            out.block(row0, col0, blk.rows(), blk.cols()) = blk;
            col0 += col_widths[c];
        }
        row0 += row_heights[r];
    }
    return out;
}

}  // namespace pradius
