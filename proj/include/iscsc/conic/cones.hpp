#pragma once

#include "iscsc/conic/program.hpp"

#include <vector>

namespace iscsc::conic {

/// Block offsets of a ConeDims layout.
struct ConeLayout {
  explicit ConeLayout(const ConeDims& dims);

  ConeDims dims;
  std::vector<int> soc_offset;
  std::vector<int> psd_offset;
  int rows = 0;
};

Vec cone_identity(const ConeLayout& layout);

/// Smallest Jordan eigenvalue of x over all blocks (x in int K iff > 0).
double min_cone_eigenvalue(const ConeLayout& layout, const Vec& x);

/// Largest alpha >= 0 with x + alpha dx in K, for x in int K (may be +inf).
double max_step(const ConeLayout& layout, const Vec& x, const Vec& dx);

Vec jordan_product(const ConeLayout& layout, const Vec& u, const Vec& v);

/// Solves lambda o x = r where every PSD block of lambda is diagonal
/// (true for a Nesterov-Todd scaled point).
Vec jordan_divide(const ConeLayout& layout, const Vec& lambda, const Vec& r);

/// Nesterov-Todd scaling W with W z = W^{-T} s = lambda.
///   nonneg: W = diag(sqrt(s / z))
///   SOC:    W = beta (2 v v^T - J)
///   PSD:    W(X) = r^T X r
class NtScaling {
 public:
  NtScaling(const ConeLayout& layout, const Vec& s, const Vec& z);

  const Vec& lambda() const { return lambda_; }

  Vec apply(const Vec& u) const;               // W u
  Vec apply_transpose(const Vec& u) const;     // W^T u
  Vec apply_inverse(const Vec& u) const;       // W^{-1} u
  Vec apply_inverse_transpose(const Vec& u) const;  // W^{-T} u

  /// In-place W^{-T} on the rows of one block of a column-major matrix.
  void inverse_transpose_block(int block, Eigen::Ref<Mat> rows) const;
  int block_count() const;
  int block_offset(int block) const;
  int block_size(int block) const;

 private:
  enum class Op { W, Wt, Winv, Winvt };
  Vec apply_op(const Vec& u, Op op) const;

  const ConeLayout* layout_;
  Vec d_;                        // nonneg scaling
  std::vector<double> soc_beta_;
  std::vector<Vec> soc_v_;
  std::vector<Mat> psd_r_, psd_rinv_;
  Vec lambda_;
};

}  // namespace iscsc::conic
