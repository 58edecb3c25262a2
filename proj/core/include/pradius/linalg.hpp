#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pradius/errors.hpp"

namespace pradius {

/// Dense real matrix, row-major entry order.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Relative tolerance of the dense eigenvalue / singular-value routines.
/// Bound values are reported alongside this tolerance; nothing is rounded
/// in the library layer.
inline constexpr double kSpectralTol = 1e-10;

/// Cap on the row/column count of any lifted product (default 4096).
int dimension_cap();
void set_dimension_cap(int cap);

bool entries_finite(const Matrix& a);

/// Kronecker product a (x) b. Throws DimensionCapError if the result
/// would exceed the dimension cap.
Matrix kron(const Matrix& a, const Matrix& b);

/// p-fold Kronecker power a (x) a (x) ... (x) a.
Matrix kron_power(const Matrix& a, int p);

/// Largest eigenvalue modulus. Complex pairs are handled exactly
/// (closed form for 2x2, Schur-based solver otherwise).
double spectral_radius(const Matrix& a);

/// Largest singular value.
double operator_norm(const Matrix& a);

/// Assembles a rectangular grid of blocks into one matrix. Block heights
/// must be consistent per grid row and widths per grid column.
Matrix block_matrix(const std::vector<std::vector<Matrix>>& blocks);

}  // namespace pradius
