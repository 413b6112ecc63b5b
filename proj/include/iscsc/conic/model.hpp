#pragma once

#include "iscsc/conic/program.hpp"

#include <map>
#include <vector>

namespace iscsc::conic {

/// Real affine form  constant + sum_i coef_i x_i.
struct ScalarExpr {
  std::map<int, double> terms;
  double constant = 0.0;

  ScalarExpr() = default;
  ScalarExpr(double c) : constant(c) {}  // NOLINT: implicit constants are convenient

  static ScalarExpr variable(int index, double coef = 1.0);

  ScalarExpr& operator+=(const ScalarExpr& o);
  ScalarExpr& operator-=(const ScalarExpr& o);
  ScalarExpr& operator*=(double s);
  double value(const Vec& x) const;
};

ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b);
ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b);
ScalarExpr operator*(double s, ScalarExpr a);
ScalarExpr operator-(ScalarExpr a);

/// Complex affine vector  constant + sum_i x_i term_i.
struct CVecExpr {
  CVec constant;
  std::map<int, CVec> terms;
  CVec value(const Vec& x) const;
};

/// Hermitian affine matrix  constant + sum_i x_i term_i (every term Hermitian).
struct HermExpr {
  CMat constant;
  std::map<int, CMat> terms;

  explicit HermExpr(Eigen::Index n = 0) : constant(CMat::Zero(n, n)) {}
  static HermExpr scaled(const ScalarExpr& e, const CMat& m);

  Eigen::Index size() const { return constant.rows(); }
  HermExpr& operator+=(const HermExpr& o);
  HermExpr& operator-=(const HermExpr& o);
  HermExpr& operator*=(double s);

  /// M X M^H.
  HermExpr congruence(const CMat& m) const;
  /// Re Tr(A X) for Hermitian A.
  ScalarExpr trace_with(const CMat& a) const;
  ScalarExpr trace() const;
  /// v^H X v.
  ScalarExpr quadratic_form(const CVec& v) const;
  /// X v.
  CVecExpr times(const CVec& v) const;
  CMat value(const Vec& x) const;
};

HermExpr operator+(HermExpr a, const HermExpr& b);
HermExpr operator-(HermExpr a, const HermExpr& b);
HermExpr operator*(double s, HermExpr a);

/// Real symmetric affine matrix.
struct SymExpr {
  Mat constant;
  std::map<int, Mat> terms;

  explicit SymExpr(Eigen::Index n = 0) : constant(Mat::Zero(n, n)) {}
  /// Builds from a symmetric grid of scalar expressions (upper triangle ignored).
  static SymExpr from_entries(const std::vector<std::vector<ScalarExpr>>& grid);
  /// Real embedding [[Re X, -Im X], [Im X, Re X]] of a Hermitian expression.
  static SymExpr real_embedding(const HermExpr& h);

  Eigen::Index size() const { return constant.rows(); }
  Mat value(const Vec& x) const;
};

struct ConstraintCounts {
  int nonneg = 0;
  int equality = 0;
  int soc = 0;
  int psd = 0;
};

/// Collects variables and cone constraints, then emits a ConicProgram
/// (all nonneg rows first, then SOC blocks, then PSD blocks).
class ProblemBuilder {
 public:
  ScalarExpr add_scalar();
  /// Hermitian n x n variable parameterized by n^2 reals (no PSD constraint).
  HermExpr add_hermitian(int n);

  void add_nonneg(const ScalarExpr& e);        // e >= 0
  void add_equality(const ScalarExpr& e);      // e == 0
  void add_soc(const std::vector<ScalarExpr>& e);  // e[0] >= ||e[1..]||
  void add_psd(const SymExpr& e);
  void add_psd(const HermExpr& e);             // through the real embedding
  void minimize(const ScalarExpr& objective);

  int num_variables() const { return num_vars_; }
  ConstraintCounts counts() const;
  ConicProgram build() const;

 private:
  struct Row {
    std::map<int, double> terms;
    double constant;
  };
  int num_vars_ = 0;
  std::vector<Row> nonneg_, equality_;
  std::vector<std::vector<Row>> soc_;
  std::vector<SymExpr> psd_;
  ScalarExpr objective_;
};

}  // namespace iscsc::conic
