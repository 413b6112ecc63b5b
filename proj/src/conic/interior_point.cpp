#include "iscsc/conic/interior_point.hpp"

#include "iscsc/conic/cones.hpp"
#include "iscsc/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace iscsc::conic {

namespace {

// Reduced KKT system
//   [0   A^T  G^T   ] [ux]   [bx]
//   [A   0    0     ] [uy] = [by]
//   [G   0   -W^T W ] [uz]   [bz]
// eliminated to (G^T W^{-1} W^{-T} G) ux + A^T uy = bx + G^T W^{-1} W^{-T} bz.
class KktSystem {
 public:
  KktSystem(const ConicProgram& p, const NtScaling& w, const std::vector<std::vector<int>>& cols)
      : p_(p), w_(w) {
    const Eigen::Index n = p.c.size();
    Mat H = Mat::Zero(n, n);
    for (int b = 0; b < w.block_count(); ++b) {
      const auto& cb = cols[b];
      if (cb.empty()) continue;
      const int off = w.block_offset(b);
      const int sz = w.block_size(b);
      Mat gb(sz, cb.size());
      for (std::size_t j = 0; j < cb.size(); ++j) gb.col(j) = p.G.block(off, cb[j], sz, 1);
      w.inverse_transpose_block(b, gb);
      const Mat hb = gb.transpose() * gb;
      for (std::size_t j = 0; j < cb.size(); ++j)
        for (std::size_t i = 0; i < cb.size(); ++i) H(cb[i], cb[j]) += hb(i, j);
    }
    H = 0.5 * (H + H.transpose()).eval();

    llt_.compute(H);
    if (llt_.info() != Eigen::Success && p.A.rows() > 0) {
      augmented_ = true;
      llt_.compute(H + p.A.transpose() * p.A);
    }
    if (llt_.info() != Eigen::Success) {
      const Mat base = augmented_ ? Mat(H + p.A.transpose() * p.A) : H;
      double delta = 1e-12 * std::max(1.0, base.diagonal().cwiseAbs().maxCoeff());
      for (int attempt = 0; attempt < 8 && llt_.info() != Eigen::Success; ++attempt) {
        llt_.compute(base + delta * Mat::Identity(n, n));
        delta *= 100.0;
      }
      if (llt_.info() != Eigen::Success) throw NumericalError("KKT factorization failed");
    }
    if (p.A.rows() > 0) {
      hinv_at_ = llt_.solve(p.A.transpose());
      schur_.compute(p.A * hinv_at_);
    }
  }

  void solve(const Vec& bx, const Vec& by, const Vec& bz, Vec& ux, Vec& uy, Vec& uz) const {
    solve_once(bx, by, bz, ux, uy, uz);
    for (int it = 0; it < 3; ++it) {
      Vec rx, ry, rz;
      multiply(ux, uy, uz, rx, ry, rz);
      rx = bx - rx;
      ry = by - ry;
      rz = bz - rz;
      const double err = std::max({rx.cwiseAbs().maxCoeff(), ry.size() ? ry.cwiseAbs().maxCoeff() : 0.0,
                                   rz.cwiseAbs().maxCoeff()});
      const double ref = std::max({1.0, bx.cwiseAbs().maxCoeff(), bz.cwiseAbs().maxCoeff()});
      if (err <= 1e-13 * ref) break;
      Vec dx, dy, dz;
      solve_once(rx, ry, rz, dx, dy, dz);
      ux += dx;
      uy += dy;
      uz += dz;
    }
  }

 private:
  Vec wtw_inverse(const Vec& v) const { return w_.apply_inverse(w_.apply_inverse_transpose(v)); }

  void multiply(const Vec& ux, const Vec& uy, const Vec& uz, Vec& ox, Vec& oy, Vec& oz) const {
    ox = p_.G.transpose() * uz;
    if (p_.A.rows() > 0) ox += p_.A.transpose() * uy;
    oy = p_.A.rows() > 0 ? Vec(p_.A * ux) : Vec(0);
    oz = p_.G * ux - w_.apply_transpose(w_.apply(uz));
  }

  void solve_once(const Vec& bx, const Vec& by, const Vec& bz, Vec& ux, Vec& uy, Vec& uz) const {
    Vec rhs = bx + p_.G.transpose() * wtw_inverse(bz);
    if (p_.A.rows() > 0) {
      if (augmented_) rhs += p_.A.transpose() * by;
      const Vec hr = llt_.solve(rhs);
      uy = schur_.solve(p_.A * hr - by);
      ux = hr - hinv_at_ * uy;
    } else {
      uy = Vec(0);
      ux = llt_.solve(rhs);
    }
    uz = wtw_inverse(p_.G * ux - bz);
  }

  const ConicProgram& p_;
  const NtScaling& w_;
  Eigen::LLT<Mat> llt_;
  Eigen::LDLT<Mat> schur_;
  Mat hinv_at_;
  bool augmented_ = false;
};

std::vector<std::vector<int>> block_columns(const ConicProgram& p, const NtScaling& w) {
  std::vector<std::vector<int>> cols(w.block_count());
  for (int b = 0; b < w.block_count(); ++b) {
    const int off = w.block_offset(b);
    const int sz = w.block_size(b);
    for (Eigen::Index j = 0; j < p.G.cols(); ++j)
      if (p.G.block(off, j, sz, 1).cwiseAbs().maxCoeff() > 0.0) cols[b].push_back(static_cast<int>(j));
  }
  return cols;
}

void shift_into_cone(const ConeLayout& layout, Vec& v) {
  const double t = -min_cone_eigenvalue(layout, v);
  if (t >= -1e-8 * std::max(1.0, v.norm())) v += (1.0 + t) * cone_identity(layout);
}

struct Residuals {
  double pres, dres, gap, pcost, dcost;
  std::optional<double> relgap, pinfres, dinfres;
  double hz_by;  // h^T z + b^T y
  double cx;
};

}  // namespace

ConicSolution InteriorPointSolver::solve(const ConicProgram& p) const {
  p.validate();
  const ConeLayout layout(p.dims);
  const int deg = p.dims.degree();
  const Eigen::Index n = p.c.size();
  const Eigen::Index m = layout.rows;
  const Eigen::Index neq = p.A.rows();
  const Mat A = neq > 0 ? p.A : Mat(0, n);
  const Vec e = cone_identity(layout);

  const double resx0 = std::max(1.0, p.c.norm());
  const double resy0 = std::max(1.0, p.b.norm());
  const double resz0 = std::max(1.0, p.h.norm());

  ConicSolution out;
  Vec x, y, z, s;
  double tau = 1.0, kappa = 1.0;

  const Vec ones_s = e;
  std::vector<std::vector<int>> cols;
  {
    NtScaling ident(layout, ones_s, ones_s);
    cols = block_columns(p, ident);
    KktSystem kkt(p, ident, cols);
    Vec ux, uy, uz;
    kkt.solve(Vec::Zero(n), p.b, p.h, ux, uy, uz);
    x = ux;
    s = -uz;
    kkt.solve(-p.c, Vec::Zero(neq), Vec::Zero(m), ux, uy, uz);
    y = uy;
    z = uz;
  }
  shift_into_cone(layout, s);
  shift_into_cone(layout, z);

  auto finish = [&](SolveStatus status, bool inaccurate) {
    out.status = status;
    out.inaccurate = inaccurate;
    if (status == SolveStatus::Optimal || status == SolveStatus::NumericalFailure) {
      out.x = x / tau;
      out.s = s / tau;
      out.y = y / tau;
      out.z = z / tau;
    } else if (status == SolveStatus::Infeasible) {
      const double scale = -(p.h.dot(z) + p.b.dot(y));
      out.x = Vec();
      out.s = Vec();
      out.y = y / scale;
      out.z = z / scale;
    } else {
      const double scale = -p.c.dot(x);
      out.x = x / scale;
      out.s = s / scale;
      out.y = Vec();
      out.z = Vec();
    }
    return out;
  };

  auto evaluate = [&]() {
    Residuals r{};
    Vec hrx = -(A.transpose() * y) - p.G.transpose() * z;
    Vec hry = A * x;
    Vec hrz = s + p.G * x;
    const double resx = (hrx - p.c * tau).norm() / tau;
    const double resy = (hry - p.b * tau).norm() / tau;
    const double resz = (hrz - p.h * tau).norm() / tau;
    r.cx = p.c.dot(x);
    r.hz_by = p.h.dot(z) + p.b.dot(y);
    r.pcost = r.cx / tau;
    r.dcost = -r.hz_by / tau;
    r.gap = s.dot(z) / (tau * tau);
    if (r.pcost < 0.0) r.relgap = r.gap / -r.pcost;
    else if (r.dcost > 0.0) r.relgap = r.gap / r.dcost;
    r.pres = std::max(resy / resy0, resz / resz0);
    r.dres = resx / resx0;
    if (r.hz_by < 0.0) r.pinfres = hrx.norm() / resx0 / -r.hz_by;
    if (r.cx < 0.0) r.dinfres = std::max(hry.norm() / resy0, hrz.norm() / resz0) / -r.cx;
    out.primal_objective = r.pcost;
    out.dual_objective = r.dcost;
    out.primal_residual = r.pres;
    out.dual_residual = r.dres;
    out.gap = r.gap;
    return r;
  };

  auto converged = [&](const Residuals& r, double tol, double abstol, double reltol) {
    return r.pres <= tol && r.dres <= tol && (r.gap <= abstol || (r.relgap && *r.relgap <= reltol));
  };

  auto fallback = [&](const Residuals& r) {
    const double acc = settings_.accept_tol;
    if (converged(r, acc, acc, acc)) return finish(SolveStatus::Optimal, true);
    if (r.pinfres && *r.pinfres <= acc) return finish(SolveStatus::Infeasible, true);
    if (r.dinfres && *r.dinfres <= acc) return finish(SolveStatus::Unbounded, true);
    return finish(SolveStatus::NumericalFailure, true);
  };

  const SolverSettings& cfg = settings_;
  for (int iter = 0; iter <= cfg.max_iterations; ++iter) {
    out.iterations = iter;
    const Residuals r = evaluate();
    if (converged(r, cfg.feastol, cfg.abstol, cfg.reltol)) return finish(SolveStatus::Optimal, false);
    if (r.pinfres && *r.pinfres <= cfg.feastol) return finish(SolveStatus::Infeasible, false);
    if (r.dinfres && *r.dinfres <= cfg.feastol) return finish(SolveStatus::Unbounded, false);
    if (iter == cfg.max_iterations) break;

    try {
      NtScaling w(layout, s, z);
      const Vec& lam = w.lambda();
      const Vec lamsq = jordan_product(layout, lam, lam);
      const double mu = (s.dot(z) + tau * kappa) / (deg + 1);

      const Vec F1 = A.transpose() * y + p.G.transpose() * z + p.c * tau;
      const Vec F2 = -(A * x) + p.b * tau;
      const Vec F3 = s + p.G * x - p.h * tau;
      const double F4 = kappa + p.c.dot(x) + p.b.dot(y) + p.h.dot(z);

      KktSystem kkt(p, w, cols);
      Vec x1, y1, z1;
      kkt.solve(-p.c, p.b, p.h, x1, y1, z1);
      const double denom_base = p.c.dot(x1) + p.b.dot(y1) + p.h.dot(z1);

      struct Direction {
        Vec dx, dy, dz, ds;
        double dtau, dkappa;
      };
      auto direction = [&](double eta, const Vec& rc, double rt) {
        Direction d;
        const Vec q = jordan_divide(layout, lam, rc);
        Vec x0, y0, z0;
        kkt.solve(-(1.0 - eta) * F1, (1.0 - eta) * F2, -(1.0 - eta) * F3 - w.apply_transpose(q), x0, y0, z0);
        const double num = -(1.0 - eta) * F4 - rt / tau - (p.c.dot(x0) + p.b.dot(y0) + p.h.dot(z0));
        const double den = -kappa / tau + denom_base;
        d.dtau = num / den;
        d.dx = x0 + d.dtau * x1;
        d.dy = y0 + d.dtau * y1;
        d.dz = z0 + d.dtau * z1;
        d.ds = w.apply_transpose(q - w.apply(d.dz));
        d.dkappa = (rt - kappa * d.dtau) / tau;
        return d;
      };
      auto step_length = [&](const Direction& d, Vec* sdir, Vec* zdir) {
        const Vec ds_s = w.apply_inverse_transpose(d.ds);
        const Vec dz_s = w.apply(d.dz);
        double a = std::min(max_step(layout, lam, ds_s), max_step(layout, lam, dz_s));
        if (d.dtau < 0.0) a = std::min(a, -tau / d.dtau);
        if (d.dkappa < 0.0) a = std::min(a, -kappa / d.dkappa);
        if (sdir) *sdir = ds_s;
        if (zdir) *zdir = dz_s;
        return a;
      };

      // predictor
      const Direction aff = direction(0.0, -lamsq, -tau * kappa);
      Vec ds_aff, dz_aff;
      const double a_aff = std::min(1.0, step_length(aff, &ds_aff, &dz_aff));
      const double sigma = std::pow(1.0 - a_aff, 3.0);

      // corrector
      const Vec rc = -lamsq + sigma * mu * e - jordan_product(layout, ds_aff, dz_aff);
      const double rt = -tau * kappa + sigma * mu - aff.dtau * aff.dkappa;
      const Direction dir = direction(sigma, rc, rt);
      const double a_max = step_length(dir, nullptr, nullptr);
      const double alpha = std::min(1.0, 0.99 * a_max);
      if (!(alpha > 1e-10)) return fallback(r);

      x += alpha * dir.dx;
      y += alpha * dir.dy;
      z += alpha * dir.dz;
      s += alpha * dir.ds;
      tau += alpha * dir.dtau;
      kappa += alpha * dir.dkappa;
      if (!(tau > 0.0) || !(kappa > 0.0) || !x.allFinite() || !z.allFinite() || !s.allFinite())
        return fallback(r);
    } catch (const NumericalError&) {
      return fallback(r);
    }
  }
  return fallback(evaluate());
}

}  // namespace iscsc::conic
