#include "iscsc/conic/cones.hpp"

#include "iscsc/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace iscsc::conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// J u for an SOC block: flips the sign of the tail.
Vec reflect(const Eigen::Ref<const Vec>& u) {
  Vec out = -u;
  out(0) = u(0);
  return out;
}

double soc_jdot(const Eigen::Ref<const Vec>& u, const Eigen::Ref<const Vec>& v) {
  return u(0) * v(0) - u.tail(u.size() - 1).dot(v.tail(v.size() - 1));
}

// Smallest positive root of a t^2 + 2 b t + c (c > 0), or +inf.
double first_positive_root(double a, double b, double c) {
  double best = kInf;
  auto consider = [&](double t) {
    if (t > 0.0 && t < best) best = t;
  };
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  if (std::abs(a) <= 1e-14 * scale) {
    if (b < 0.0) consider(-c / (2.0 * b));
    return best;
  }
  const double disc = b * b - a * c;
  if (disc < 0.0) return best;
  const double q = -(b + std::copysign(std::sqrt(disc), b));
  if (q != 0.0) {
    consider(q / a);
    consider(c / q);
  } else {
    consider(-b / a);
  }
  return best;
}

}  // namespace

int ConeDims::rows() const {
  int r = nonneg;
  for (int d : soc) r += d;
  for (int n : psd) r += svec_size(n);
  return r;
}

int ConeDims::degree() const {
  int deg = nonneg + static_cast<int>(soc.size());
  for (int n : psd) deg += n;
  return deg;
}

Vec svec(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Vec v(svec_size(n));
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i)
      v(k++) = (i == j) ? m(i, j) : std::sqrt(2.0) * 0.5 * (m(i, j) + m(j, i));
  return v;
}

Mat smat(const Eigen::Ref<const Vec>& v, int n) {
  Mat m(n, n);
  int k = 0;
  const double inv = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) {
      if (i == j) {
        m(i, i) = v(k++);
      } else {
        m(i, j) = m(j, i) = v(k++) * inv;
      }
    }
  return m;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void ConicProgram::validate() const {
  const Eigen::Index n = c.size();
  const Eigen::Index m = dims.rows();
  if (G.rows() != m || G.cols() != n || h.size() != m)
    throw DomainError("conic program: G/h do not match the cone layout");
  if (A.cols() != n && A.rows() > 0) throw DomainError("conic program: A has wrong column count");
  if (A.rows() != b.size()) throw DomainError("conic program: A/b row mismatch");
  if (dims.nonneg < 0) throw DomainError("conic program: negative nonneg count");
  for (int d : dims.soc)
    if (d < 1) throw DomainError("conic program: SOC dimension must be >= 1");
  for (int d : dims.psd)
    if (d < 1) throw DomainError("conic program: PSD order must be >= 1");
  if (!c.allFinite() || !G.allFinite() || !h.allFinite() || !A.allFinite() || !b.allFinite())
    throw DomainError("conic program: non-finite data");
}

ConeLayout::ConeLayout(const ConeDims& d) : dims(d) {
  int off = d.nonneg;
  for (int s : d.soc) {
    soc_offset.push_back(off);
    off += s;
  }
  for (int n : d.psd) {
    psd_offset.push_back(off);
    off += svec_size(n);
  }
  rows = off;
}

Vec cone_identity(const ConeLayout& layout) {
  Vec e = Vec::Zero(layout.rows);
  e.head(layout.dims.nonneg).setOnes();
  for (int off : layout.soc_offset) e(off) = 1.0;
  for (std::size_t b = 0; b < layout.dims.psd.size(); ++b) {
    const int n = layout.dims.psd[b];
    e.segment(layout.psd_offset[b], svec_size(n)) = svec(Mat::Identity(n, n));
  }
  return e;
}

double min_cone_eigenvalue(const ConeLayout& layout, const Vec& x) {
  double lo = kInf;
  if (layout.dims.nonneg > 0) lo = x.head(layout.dims.nonneg).minCoeff();
  for (std::size_t b = 0; b < layout.dims.soc.size(); ++b) {
    const int d = layout.dims.soc[b];
    const auto seg = x.segment(layout.soc_offset[b], d);
    lo = std::min(lo, seg(0) - seg.tail(d - 1).norm());
  }
  for (std::size_t b = 0; b < layout.dims.psd.size(); ++b) {
    const int n = layout.dims.psd[b];
    Eigen::SelfAdjointEigenSolver<Mat> es(smat(x.segment(layout.psd_offset[b], svec_size(n)), n),
                                          Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
  }
  return lo;
}

double max_step(const ConeLayout& layout, const Vec& x, const Vec& dx) {
  double alpha = kInf;
  for (int i = 0; i < layout.dims.nonneg; ++i)
    if (dx(i) < 0.0) alpha = std::min(alpha, -x(i) / dx(i));
  for (std::size_t b = 0; b < layout.dims.soc.size(); ++b) {
    const int d = layout.dims.soc[b];
    const auto xs = x.segment(layout.soc_offset[b], d);
    const auto ds = dx.segment(layout.soc_offset[b], d);
    alpha = std::min(alpha, first_positive_root(soc_jdot(ds, ds), soc_jdot(xs, ds), soc_jdot(xs, xs)));
  }
  for (std::size_t b = 0; b < layout.dims.psd.size(); ++b) {
    const int n = layout.dims.psd[b];
    const Mat X = smat(x.segment(layout.psd_offset[b], svec_size(n)), n);
    const Mat D = smat(dx.segment(layout.psd_offset[b], svec_size(n)), n);
    Eigen::LLT<Mat> llt(X);
    if (llt.info() != Eigen::Success) return 0.0;
    const Mat L = llt.matrixL();
    Mat T = L.triangularView<Eigen::Lower>().solve(D);
    T = L.triangularView<Eigen::Lower>().solve(T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (T + T.transpose()), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

Vec jordan_product(const ConeLayout& layout, const Vec& u, const Vec& v) {
  Vec out(layout.rows);
  const int nn = layout.dims.nonneg;
  out.head(nn) = u.head(nn).cwiseProduct(v.head(nn));
  for (std::size_t b = 0; b < layout.dims.soc.size(); ++b) {
    const int d = layout.dims.soc[b];
    const int off = layout.soc_offset[b];
    const auto us = u.segment(off, d);
    const auto vs = v.segment(off, d);
    out(off) = us.dot(vs);
    out.segment(off + 1, d - 1) = us(0) * vs.tail(d - 1) + vs(0) * us.tail(d - 1);
  }
  for (std::size_t b = 0; b < layout.dims.psd.size(); ++b) {
    const int n = layout.dims.psd[b];
    const int off = layout.psd_offset[b];
    const Mat U = smat(u.segment(off, svec_size(n)), n);
    const Mat V = smat(v.segment(off, svec_size(n)), n);
    out.segment(off, svec_size(n)) = svec(0.5 * (U * V + V * U));
  }
  return out;
}

Vec jordan_divide(const ConeLayout& layout, const Vec& lambda, const Vec& r) {
  Vec out(layout.rows);
  const int nn = layout.dims.nonneg;
  out.head(nn) = r.head(nn).cwiseQuotient(lambda.head(nn));
  for (std::size_t b = 0; b < layout.dims.soc.size(); ++b) {
    const int d = layout.dims.soc[b];
    const int off = layout.soc_offset[b];
    const auto l = lambda.segment(off, d);
    const auto rs = r.segment(off, d);
    const double l0 = l(0);
    const double det = soc_jdot(l, l);
    const double x0 = (l0 * rs(0) - l.tail(d - 1).dot(rs.tail(d - 1))) / det;
    out(off) = x0;
    out.segment(off + 1, d - 1) = (rs.tail(d - 1) - x0 * l.tail(d - 1)) / l0;
  }
  for (std::size_t b = 0; b < layout.dims.psd.size(); ++b) {
    const int n = layout.dims.psd[b];
    const int off = layout.psd_offset[b];
    const Mat L = smat(lambda.segment(off, svec_size(n)), n);
    Mat R = smat(r.segment(off, svec_size(n)), n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) R(i, j) *= 2.0 / (L(i, i) + L(j, j));
    out.segment(off, svec_size(n)) = svec(R);
  }
  return out;
}

NtScaling::NtScaling(const ConeLayout& layout, const Vec& s, const Vec& z) : layout_(&layout) {
  const int nn = layout.dims.nonneg;
  lambda_.resize(layout.rows);
  d_ = (s.head(nn).cwiseQuotient(z.head(nn))).cwiseSqrt();
  lambda_.head(nn) = s.head(nn).cwiseProduct(z.head(nn)).cwiseSqrt();

  for (std::size_t b = 0; b < layout.dims.soc.size(); ++b) {
    const int d = layout.dims.soc[b];
    const int off = layout.soc_offset[b];
    const Vec sb = s.segment(off, d);
    const Vec zb = z.segment(off, d);
    const double sn2 = soc_jdot(sb, sb);
    const double zn2 = soc_jdot(zb, zb);
    if (!(sn2 > 0.0) || !(zn2 > 0.0))
      throw NumericalError("NT scaling: point left the second-order cone interior");
    const double sn = std::sqrt(sn2);
    const double zn = std::sqrt(zn2);
    const Vec sbar = sb / sn;
    const Vec zbar = zb / zn;
    const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
    const Vec wbar = (sbar + reflect(zbar)) / (2.0 * gamma);
    Vec v = wbar;
    v(0) += 1.0;
    v /= std::sqrt(2.0 * (wbar(0) + 1.0));
    const double beta = std::sqrt(sn / zn);
    soc_beta_.push_back(beta);
    soc_v_.push_back(v);
    lambda_.segment(off, d) = beta * (2.0 * v * v.dot(zb) - reflect(zb));
  }

  for (std::size_t b = 0; b < layout.dims.psd.size(); ++b) {
    const int n = layout.dims.psd[b];
    const int off = layout.psd_offset[b];
    Eigen::LLT<Mat> ls(smat(s.segment(off, svec_size(n)), n));
    Eigen::LLT<Mat> lz(smat(z.segment(off, svec_size(n)), n));
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success)
      throw NumericalError("NT scaling: point left the PSD cone interior");
    const Mat L = ls.matrixL();
    const Mat Lz = lz.matrixL();
    Eigen::JacobiSVD<Mat> svd(Lz.transpose() * L, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec sig = svd.singularValues();
    if (!(sig.minCoeff() > 0.0)) throw NumericalError("NT scaling: singular PSD block");
    const Vec isq = sig.cwiseSqrt().cwiseInverse();
    const Mat r = L * svd.matrixV() * isq.asDiagonal();
    // r^{-1} = Sigma^{1/2} V^T L^{-1} = Sigma^{-1/2} U^T Lz^T
    const Mat rinv = isq.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
    psd_r_.push_back(r);
    psd_rinv_.push_back(rinv);
    lambda_.segment(off, svec_size(n)) = svec(Mat(sig.asDiagonal()));
  }
}

Vec NtScaling::apply_op(const Vec& u, Op op) const {
  const ConeLayout& layout = *layout_;
  Vec out(u.size());
  const int nn = layout.dims.nonneg;
  if (op == Op::W || op == Op::Wt)
    out.head(nn) = u.head(nn).cwiseProduct(d_);
  else
    out.head(nn) = u.head(nn).cwiseQuotient(d_);

  for (std::size_t b = 0; b < layout.dims.soc.size(); ++b) {
    const int d = layout.dims.soc[b];
    const int off = layout.soc_offset[b];
    const Vec ub = u.segment(off, d);
    const Vec& v = soc_v_[b];
    const double beta = soc_beta_[b];
    if (op == Op::W || op == Op::Wt) {
      out.segment(off, d) = beta * (2.0 * v * v.dot(ub) - reflect(ub));
    } else {
      const Vec jv = reflect(v);
      out.segment(off, d) = (2.0 * jv * jv.dot(ub) - reflect(ub)) / beta;
    }
  }

  for (std::size_t b = 0; b < layout.dims.psd.size(); ++b) {
    const int n = layout.dims.psd[b];
    const int off = layout.psd_offset[b];
    const Mat X = smat(u.segment(off, svec_size(n)), n);
    const Mat& r = psd_r_[b];
    const Mat& ri = psd_rinv_[b];
    Mat Y;
    switch (op) {
      case Op::W: Y = r.transpose() * X * r; break;
      case Op::Wt: Y = r * X * r.transpose(); break;
      case Op::Winv: Y = ri.transpose() * X * ri; break;
      case Op::Winvt: Y = ri * X * ri.transpose(); break;
    }
    out.segment(off, svec_size(n)) = svec(Y);
  }
  return out;
}

Vec NtScaling::apply(const Vec& u) const { return apply_op(u, Op::W); }
Vec NtScaling::apply_transpose(const Vec& u) const { return apply_op(u, Op::Wt); }
Vec NtScaling::apply_inverse(const Vec& u) const { return apply_op(u, Op::Winv); }
Vec NtScaling::apply_inverse_transpose(const Vec& u) const { return apply_op(u, Op::Winvt); }

int NtScaling::block_count() const {
  return (layout_->dims.nonneg > 0 ? 1 : 0) + static_cast<int>(layout_->dims.soc.size()) +
         static_cast<int>(layout_->dims.psd.size());
}

int NtScaling::block_offset(int block) const {
  const bool has_nn = layout_->dims.nonneg > 0;
  if (has_nn && block == 0) return 0;
  int k = block - (has_nn ? 1 : 0);
  const int nsoc = static_cast<int>(layout_->dims.soc.size());
  if (k < nsoc) return layout_->soc_offset[k];
  return layout_->psd_offset[k - nsoc];
}

int NtScaling::block_size(int block) const {
  const bool has_nn = layout_->dims.nonneg > 0;
  if (has_nn && block == 0) return layout_->dims.nonneg;
  int k = block - (has_nn ? 1 : 0);
  const int nsoc = static_cast<int>(layout_->dims.soc.size());
  if (k < nsoc) return layout_->dims.soc[k];
  return svec_size(layout_->dims.psd[k - nsoc]);
}

void NtScaling::inverse_transpose_block(int block, Eigen::Ref<Mat> rows) const {
  const bool has_nn = layout_->dims.nonneg > 0;
  if (has_nn && block == 0) {
    rows = d_.cwiseInverse().asDiagonal() * rows;
    return;
  }
  int k = block - (has_nn ? 1 : 0);
  const int nsoc = static_cast<int>(layout_->dims.soc.size());
  if (k < nsoc) {
    const Vec jv = reflect(soc_v_[k]);
    const double beta = soc_beta_[k];
    const Vec proj = jv.transpose() * rows;
    rows.row(0) *= -1.0;  // -J u: flip the leading entry only
    rows += 2.0 * jv * proj.transpose();
    rows /= beta;
    return;
  }
  k -= nsoc;
  const int n = layout_->dims.psd[k];
  const Mat& ri = psd_rinv_[k];
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const Mat X = smat(rows.col(j), n);
    rows.col(j) = svec(ri * X * ri.transpose());
  }
}

}  // namespace iscsc::conic
