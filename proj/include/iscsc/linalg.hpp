#pragma once

#include "iscsc/types.hpp"

namespace iscsc::linalg {

inline constexpr double kPsdTolerance = 1e-8;

CMat hermitian_part(const CMat& m);

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const CMat& m);
double min_eigenvalue(const Mat& m);

/// Hermitian square root via eigendecomposition. Eigenvalues in
/// [-tol, 0) are clamped to zero; anything below -tol throws DomainError.
CMat psd_sqrt(const CMat& m, double tol = kPsdTolerance);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped).
CMat project_psd(const CMat& m);

/// 2-norm condition number of a real square matrix.
double condition_number(const Mat& m);

bool all_finite(const Mat& m);

}  // namespace iscsc::linalg
