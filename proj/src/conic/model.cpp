#include "iscsc/conic/model.hpp"

#include "iscsc/errors.hpp"

#include <cmath>

namespace iscsc::conic {

ScalarExpr ScalarExpr::variable(int index, double coef) {
  ScalarExpr e;
  e.terms[index] = coef;
  return e;
}

ScalarExpr& ScalarExpr::operator+=(const ScalarExpr& o) {
  for (const auto& [i, c] : o.terms) terms[i] += c;
  constant += o.constant;
  return *this;
}

ScalarExpr& ScalarExpr::operator-=(const ScalarExpr& o) {
  for (const auto& [i, c] : o.terms) terms[i] -= c;
  constant -= o.constant;
  return *this;
}

ScalarExpr& ScalarExpr::operator*=(double s) {
  for (auto& [i, c] : terms) c *= s;
  constant *= s;
  return *this;
}

double ScalarExpr::value(const Vec& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x(i);
  return v;
}

ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }
ScalarExpr operator*(double s, ScalarExpr a) { return a *= s; }
ScalarExpr operator-(ScalarExpr a) { return a *= -1.0; }

CVec CVecExpr::value(const Vec& x) const {
  CVec v = constant;
  for (const auto& [i, t] : terms) v += x(i) * t;
  return v;
}

HermExpr HermExpr::scaled(const ScalarExpr& e, const CMat& m) {
  HermExpr h(m.rows());
  h.constant = e.constant * m;
  for (const auto& [i, c] : e.terms) h.terms[i] = c * m;
  return h;
}

HermExpr& HermExpr::operator+=(const HermExpr& o) {
  if (o.size() != size()) throw DomainError("HermExpr size mismatch");
  constant += o.constant;
  for (const auto& [i, t] : o.terms) {
    auto it = terms.find(i);
    if (it == terms.end()) terms.emplace(i, t);
    else it->second += t;
  }
  return *this;
}

HermExpr& HermExpr::operator-=(const HermExpr& o) {
  HermExpr neg = o;
  neg *= -1.0;
  return *this += neg;
}

HermExpr& HermExpr::operator*=(double s) {
  constant *= s;
  for (auto& [i, t] : terms) t *= s;
  return *this;
}

HermExpr HermExpr::congruence(const CMat& m) const {
  HermExpr out(m.rows());
  out.constant = m * constant * m.adjoint();
  for (const auto& [i, t] : terms) out.terms[i] = m * t * m.adjoint();
  return out;
}

ScalarExpr HermExpr::trace_with(const CMat& a) const {
  ScalarExpr e;
  e.constant = (a * constant).trace().real();
  for (const auto& [i, t] : terms) e.terms[i] = (a * t).trace().real();
  return e;
}

ScalarExpr HermExpr::trace() const {
  ScalarExpr e;
  e.constant = constant.trace().real();
  for (const auto& [i, t] : terms) e.terms[i] = t.trace().real();
  return e;
}

ScalarExpr HermExpr::quadratic_form(const CVec& v) const {
  ScalarExpr e;
  e.constant = v.dot(constant * v).real();
  for (const auto& [i, t] : terms) e.terms[i] = v.dot(t * v).real();
  return e;
}

CVecExpr HermExpr::times(const CVec& v) const {
  CVecExpr out;
  out.constant = constant * v;
  for (const auto& [i, t] : terms) out.terms[i] = t * v;
  return out;
}

CMat HermExpr::value(const Vec& x) const {
  CMat v = constant;
  for (const auto& [i, t] : terms) v += x(i) * t;
  return v;
}

HermExpr operator+(HermExpr a, const HermExpr& b) { return a += b; }
HermExpr operator-(HermExpr a, const HermExpr& b) { return a -= b; }
HermExpr operator*(double s, HermExpr a) { return a *= s; }

SymExpr SymExpr::from_entries(const std::vector<std::vector<ScalarExpr>>& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  SymExpr out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(grid[i].size()) != n) throw DomainError("SymExpr grid is not square");
    for (Eigen::Index j = 0; j <= i; ++j) {
      const ScalarExpr& e = grid[i][j];
      out.constant(i, j) = out.constant(j, i) = e.constant;
      for (const auto& [v, c] : e.terms) {
        auto it = out.terms.find(v);
        if (it == out.terms.end()) it = out.terms.emplace(v, Mat::Zero(n, n)).first;
        it->second(i, j) = it->second(j, i) = c;
      }
    }
  }
  return out;
}

namespace {

Mat embed(const CMat& m) {
  const Eigen::Index n = m.rows();
  Mat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = m.real();
  return out;
}

}  // namespace

SymExpr SymExpr::real_embedding(const HermExpr& h) {
  SymExpr out(2 * h.size());
  out.constant = embed(h.constant);
  for (const auto& [i, t] : h.terms) out.terms[i] = embed(t);
  return out;
}

Mat SymExpr::value(const Vec& x) const {
  Mat v = constant;
  for (const auto& [i, t] : terms) v += x(i) * t;
  return v;
}

ScalarExpr ProblemBuilder::add_scalar() { return ScalarExpr::variable(num_vars_++); }

HermExpr ProblemBuilder::add_hermitian(int n) {
  if (n < 1) throw DomainError("Hermitian variable order must be >= 1");
  HermExpr h(n);
  for (int i = 0; i < n; ++i) {
    CMat e = CMat::Zero(n, n);
    e(i, i) = 1.0;
    h.terms.emplace(num_vars_++, e);
  }
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) {
      CMat re = CMat::Zero(n, n);
      re(i, j) = re(j, i) = 1.0;
      h.terms.emplace(num_vars_++, re);
      CMat im = CMat::Zero(n, n);
      im(i, j) = cplx(0.0, 1.0);
      im(j, i) = cplx(0.0, -1.0);
      h.terms.emplace(num_vars_++, im);
    }
  return h;
}

void ProblemBuilder::add_nonneg(const ScalarExpr& e) { nonneg_.push_back({e.terms, e.constant}); }

void ProblemBuilder::add_equality(const ScalarExpr& e) { equality_.push_back({e.terms, e.constant}); }

void ProblemBuilder::add_soc(const std::vector<ScalarExpr>& e) {
  if (e.empty()) throw DomainError("empty second-order cone");
  std::vector<Row> rows;
  rows.reserve(e.size());
  for (const auto& x : e) rows.push_back({x.terms, x.constant});
  soc_.push_back(std::move(rows));
}

void ProblemBuilder::add_psd(const SymExpr& e) { psd_.push_back(e); }

void ProblemBuilder::add_psd(const HermExpr& e) { psd_.push_back(SymExpr::real_embedding(e)); }

void ProblemBuilder::minimize(const ScalarExpr& objective) { objective_ = objective; }

ConstraintCounts ProblemBuilder::counts() const {
  return {static_cast<int>(nonneg_.size()), static_cast<int>(equality_.size()),
          static_cast<int>(soc_.size()), static_cast<int>(psd_.size())};
}

ConicProgram ProblemBuilder::build() const {
  ConicProgram p;
  const int n = num_vars_;
  p.dims.nonneg = static_cast<int>(nonneg_.size());
  for (const auto& s : soc_) p.dims.soc.push_back(static_cast<int>(s.size()));
  for (const auto& s : psd_) p.dims.psd.push_back(static_cast<int>(s.size()));
  const int m = p.dims.rows();

  p.c = Vec::Zero(n);
  for (const auto& [i, c] : objective_.terms) p.c(i) += c;
  p.G = Mat::Zero(m, n);
  p.h = Vec::Zero(m);

  // s = h - G x must equal the expression value: G = -coef, h = constant.
  int row = 0;
  auto put = [&](const Row& r) {
    for (const auto& [i, c] : r.terms) p.G(row, i) -= c;
    p.h(row) = r.constant;
    ++row;
  };
  for (const auto& r : nonneg_) put(r);
  for (const auto& s : soc_)
    for (const auto& r : s) put(r);
  for (const auto& s : psd_) {
    const int k = static_cast<int>(s.size());
    const int len = svec_size(k);
    p.h.segment(row, len) = svec(s.constant);
    for (const auto& [i, t] : s.terms) p.G.block(row, i, len, 1) -= svec(t);
    row += len;
  }

  p.A = Mat::Zero(static_cast<Eigen::Index>(equality_.size()), n);
  p.b = Vec::Zero(static_cast<Eigen::Index>(equality_.size()));
  for (std::size_t r = 0; r < equality_.size(); ++r) {
    for (const auto& [i, c] : equality_[r].terms) p.A(r, i) += c;
    p.b(r) = -equality_[r].constant;
  }
  return p;
}

}  // namespace iscsc::conic
