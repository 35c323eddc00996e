// Copyright 2026 The srsik Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "srsik/trajopt.hpp"

#include "json_util.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <vector>

namespace srsik {
namespace {

using Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;

constexpr double kFractionToBoundary = 0.995;
constexpr double kGrowth = 1.5;

double inf_norm(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Active-set refinement of an interior-point solution. Bounds with z > s
// start fixed; each pass solves the equality-constrained QP exactly, fixes
// violated bounds and frees bounds with negative multipliers. The refined
// point replaces (x, y, z) only once it is primal and dual feasible.
void polish(const SparseMat& A, const VectorXd& b, const VectorXd& H, const VectorXd& lo,
            const VectorXd& hi, VectorXd& x, VectorXd& y, VectorXd& zl, VectorXd& zu) {
  constexpr int kPasses = 8;
  constexpr double kSlack = 1e-12;
  const auto nx = x.size();
  const auto m = A.rows();
  std::vector<int> state(static_cast<std::size_t>(nx), 0);  // -1 lower, +1 upper
  for (Eigen::Index j = 0; j < nx; ++j) {
    if (zl[j] > x[j] - lo[j]) state[static_cast<std::size_t>(j)] = -1;
    if (zu[j] > hi[j] - x[j]) state[static_cast<std::size_t>(j)] = 1;
  }
  Eigen::SparseLU<SparseMat> lu;
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> col(static_cast<std::size_t>(nx));
  for (int pass = 0; pass < kPasses; ++pass) {
    int nf = 0;
    for (std::size_t j = 0; j < state.size(); ++j) col[j] = state[j] == 0 ? nf++ : -1;
    // [H_F A_F^T; A_F 0] [x_F; -y] = [0; b - A_B x_B]
    trip.clear();
    VectorXd rhs = VectorXd::Zero(nf + m);
    rhs.tail(m) = b;
    for (Eigen::Index j = 0; j < nx; ++j) {
      const int c = col[static_cast<std::size_t>(j)];
      if (c >= 0 && H[j] != 0.0) trip.emplace_back(c, c, H[j]);
    }
    for (int k = 0; k < A.outerSize(); ++k) {
      for (SparseMat::InnerIterator it(A, k); it; ++it) {
        const auto sj = static_cast<std::size_t>(it.col());
        if (col[sj] >= 0) {
          trip.emplace_back(nf + it.row(), col[sj], it.value());
          trip.emplace_back(col[sj], nf + it.row(), it.value());
        } else {
          rhs[nf + it.row()] -= it.value() * (state[sj] < 0 ? lo[it.col()] : hi[it.col()]);
        }
      }
    }
    SparseMat K(nf + m, nf + m);
    K.setFromTriplets(trip.begin(), trip.end());
    lu.compute(K);
    if (lu.info() != Eigen::Success) return;
    const VectorXd sol = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !sol.allFinite()) return;

    VectorXd xn(nx);
    for (Eigen::Index j = 0; j < nx; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      xn[j] = col[sj] >= 0 ? sol[col[sj]] : (state[sj] < 0 ? lo[j] : hi[j]);
    }
    const VectorXd yn = -sol.tail(m);
    const VectorXd grad = H.cwiseProduct(xn) - A.transpose() * yn;
    bool changed = false;
    for (Eigen::Index j = 0; j < nx; ++j) {
      int& st = state[static_cast<std::size_t>(j)];
      if (st == 0 && xn[j] < lo[j] - kSlack) {
        st = -1;
        changed = true;
      } else if (st == 0 && xn[j] > hi[j] + kSlack) {
        st = 1;
        changed = true;
      } else if ((st < 0 && grad[j] < -kSlack) || (st > 0 && grad[j] > kSlack)) {
        st = 0;
        changed = true;
      }
    }
    if (changed) continue;
    x = xn.cwiseMax(lo).cwiseMin(hi);
    y = yn;
    for (Eigen::Index j = 0; j < nx; ++j) {
      const int st = state[static_cast<std::size_t>(j)];
      zl[j] = st < 0 ? std::max(grad[j], 0.0) : 0.0;
      zu[j] = st > 0 ? std::max(-grad[j], 0.0) : 0.0;
    }
    return;
  }
}

struct QpSolution {
  bool ok = false;
  int iterations = 0;
  VectorXd q, v, u;  // N + 1 node values
  VectorXd y;        // defect multipliers
  double value = 0.0;
  double dvalue_dh = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

// One joint at fixed h: min 1/2 h r sum u_k^2 over the free node values
// x = [u_0, (q_k, v_k, u_k) for k = 1..N-1, u_N] subject to the 2N defects
// A x = b and box bounds.
class JointQp {
 public:
  JointQp(const TrajProblem& p, int joint)
      : n_(p.intervals), q_start_(p.q0[joint]), q_end_(p.q_goal[joint]),
        q_max_(p.q_max[joint]), v_max_(p.qd_max[joint]), u_max_(p.u_max[joint]),
        r_(p.r_weight[joint]) {}

  [[nodiscard]] bool stationary() const { return q_start_ == q_end_; }
  [[nodiscard]] double start() const { return q_start_; }

  [[nodiscard]] QpSolution solve(double h, double tol, int max_iters) const;

 private:
  [[nodiscard]] int size() const { return 3 * n_ - 1; }
  [[nodiscard]] int iq(int k) const { return (k == 0 || k == n_) ? -1 : 3 * k - 2; }
  [[nodiscard]] int iv(int k) const { return (k == 0 || k == n_) ? -1 : 3 * k - 1; }
  [[nodiscard]] int iu(int k) const { return k == 0 ? 0 : (k == n_ ? 3 * n_ - 2 : 3 * k); }

  int n_;
  double q_start_, q_end_, q_max_, v_max_, u_max_, r_;
};

QpSolution JointQp::solve(double h, double tol, int max_iters) const {
  const int nx = size();
  const int m = 2 * n_;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(8 * n_);
  VectorXd b = VectorXd::Zero(m);

  auto add_q = [&](int row, int k, double c) {
    if (const int j = iq(k); j >= 0) {
      trip.emplace_back(row, j, c);
    } else {
      b[row] -= c * (k == 0 ? q_start_ : q_end_);
    }
  };
  auto add_v = [&](int row, int k, double c) {
    if (const int j = iv(k); j >= 0) trip.emplace_back(row, j, c);
  };
  for (int k = 0; k < n_; ++k) {
    add_q(2 * k, k + 1, 1.0);
    add_q(2 * k, k, -1.0);
    add_v(2 * k, k, -0.5 * h);
    add_v(2 * k, k + 1, -0.5 * h);
    add_v(2 * k + 1, k + 1, 1.0);
    add_v(2 * k + 1, k, -1.0);
    trip.emplace_back(2 * k + 1, iu(k), -0.5 * h);
    trip.emplace_back(2 * k + 1, iu(k + 1), -0.5 * h);
  }
  SparseMat A(m, nx);
  A.setFromTriplets(trip.begin(), trip.end());
  const SparseMat At = A.transpose();

  VectorXd H = VectorXd::Zero(nx);
  VectorXd lo(nx), hi(nx), x(nx);
  for (int k = 0; k <= n_; ++k) {
    H[iu(k)] = h * r_;
    lo[iu(k)] = -u_max_;
    hi[iu(k)] = u_max_;
    x[iu(k)] = 0.0;
    if (iq(k) >= 0) {
      lo[iq(k)] = -q_max_;
      hi[iq(k)] = q_max_;
      x[iq(k)] = q_start_ + (q_end_ - q_start_) * k / n_;
      lo[iv(k)] = -v_max_;
      hi[iv(k)] = v_max_;
      x[iv(k)] = 0.0;
    }
  }
  const VectorXd margin = 1e-3 * (hi - lo);
  x = x.cwiseMax(lo + margin).cwiseMin(hi - margin);

  VectorXd y = VectorXd::Zero(m);
  VectorXd zl = VectorXd::Ones(nx);
  VectorXd zu = VectorXd::Ones(nx);
  Eigen::SimplicialLLT<SparseMat> llt;

  QpSolution out;
  VectorXd sl = x - lo, su = hi - x;
  VectorXd rp = A * x - b;
  VectorXd rd = H.cwiseProduct(x) - At * y - zl + zu;
  int stalled = 0;
  for (int it = 0;; ++it) {
    const double mu = (sl.dot(zl) + su.dot(zu)) / (2.0 * nx);
    out.iterations = it;
    if (inf_norm(rp) <= tol && inf_norm(rd) <= tol && mu <= 0.1 * tol) {
      out.ok = true;
      break;
    }
    if (it >= max_iters || stalled >= 3 || !x.allFinite() || inf_norm(y) > 1e14) break;

    const VectorXd kinv = (H + zl.cwiseQuotient(sl) + zu.cwiseQuotient(su)).cwiseInverse();
    llt.compute(A * kinv.asDiagonal() * At);
    if (llt.info() != Eigen::Success) break;

    VectorXd dx, dy, dzl, dzu;
    auto newton = [&](const VectorXd& rcl, const VectorXd& rcu) {
      const VectorXd rho = -rd + rcl.cwiseQuotient(sl) - rcu.cwiseQuotient(su);
      dy = llt.solve(-rp - A * kinv.cwiseProduct(rho));
      dx = kinv.cwiseProduct(rho + At * dy);
      for (int pass = 0; pass < 3; ++pass) {
        const VectorXd e = -rp - A * dx;
        if (inf_norm(e) <= 1e-3 * tol) break;
        const VectorXd ddy = llt.solve(e);
        dy += ddy;
        dx += kinv.cwiseProduct(At * ddy);
      }
      dzl = (rcl - zl.cwiseProduct(dx)).cwiseQuotient(sl);
      dzu = (rcu + zu.cwiseProduct(dx)).cwiseQuotient(su);
    };
    auto max_step = [&]() {
      double a = 1.0;
      for (int j = 0; j < nx; ++j) {
        if (dx[j] < 0.0) a = std::min(a, -sl[j] / dx[j]);
        if (dx[j] > 0.0) a = std::min(a, su[j] / dx[j]);
        if (dzl[j] < 0.0) a = std::min(a, -zl[j] / dzl[j]);
        if (dzu[j] < 0.0) a = std::min(a, -zu[j] / dzu[j]);
      }
      return a;
    };

    newton(-sl.cwiseProduct(zl), -su.cwiseProduct(zu));
    const double a_aff = max_step();
    const double mu_aff = ((sl + a_aff * dx).dot(zl + a_aff * dzl) +
                           (su - a_aff * dx).dot(zu + a_aff * dzu)) /
                          (2.0 * nx);
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
    const VectorXd rcl = VectorXd::Constant(nx, sigma * mu) - sl.cwiseProduct(zl) -
                         dx.cwiseProduct(dzl);
    const VectorXd rcu = VectorXd::Constant(nx, sigma * mu) - su.cwiseProduct(zu) +
                         dx.cwiseProduct(dzu);
    newton(rcl, rcu);
    const double alpha = std::min(1.0, kFractionToBoundary * max_step());
    stalled = alpha < 1e-8 ? stalled + 1 : 0;

    x += alpha * dx;
    y += alpha * dy;
    zl += alpha * dzl;
    zu += alpha * dzu;
    sl = x - lo;
    su = hi - x;
    rp = A * x - b;
    rd = H.cwiseProduct(x) - At * y - zl + zu;
  }

  if (out.ok) polish(A, b, H, lo, hi, x, y, zl, zu);
  rp = A * x - b;
  rd = H.cwiseProduct(x) - At * y - zl + zu;
  out.primal_residual = inf_norm(rp);
  out.dual_residual = inf_norm(rd);
  out.q.resize(n_ + 1);
  out.v.resize(n_ + 1);
  out.u.resize(n_ + 1);
  for (int k = 0; k <= n_; ++k) {
    out.q[k] = iq(k) >= 0 ? x[iq(k)] : (k == 0 ? q_start_ : q_end_);
    out.v[k] = iv(k) >= 0 ? x[iv(k)] : 0.0;
    out.u[k] = x[iu(k)];
  }
  out.value = 0.5 * h * r_ * out.u.squaredNorm();
  double d = 0.5 * r_ * out.u.squaredNorm();
  for (int k = 0; k < n_; ++k) {
    d += 0.5 * y[2 * k] * (out.v[k] + out.v[k + 1]);
    d += 0.5 * y[2 * k + 1] * (out.u[k] + out.u[k + 1]);
  }
  out.dvalue_dh = d;
  out.y = std::move(y);
  return out;
}

struct Evaluation {
  double t = 0.0;
  bool feasible = false;
  double g = 0.0;  // d(total cost)/d t_F
  std::vector<QpSolution> joints;
};

class Planner {
 public:
  Planner(const TrajProblem& p, double tol, int max_iters)
      : p_(p), tol_(tol), max_iters_(max_iters) {
    for (int i = 0; i < kDof; ++i) qps_.emplace_back(p, i);
  }

  Evaluation evaluate(double t) {
    Evaluation e;
    e.t = t;
    e.feasible = true;
    e.g = 1.0;
    const double h = t / p_.intervals;
    for (const JointQp& qp : qps_) {
      QpSolution s;
      if (qp.stationary()) {
        s = stationary_solution(qp);
      } else {
        s = qp.solve(h, 1e-3 * tol_, max_iters_);
        qp_iterations_ += s.iterations;
      }
      e.feasible = e.feasible && s.ok;
      e.g += s.dvalue_dh / p_.intervals;
      e.joints.push_back(std::move(s));
    }
    ++evaluations_;
    return e;
  }

  [[nodiscard]] int evaluations() const { return evaluations_; }
  [[nodiscard]] int qp_iterations() const { return qp_iterations_; }

 private:
  [[nodiscard]] QpSolution stationary_solution(const JointQp& qp) const {
    QpSolution s;
    s.ok = true;
    s.q = VectorXd::Constant(p_.intervals + 1, qp.start());
    s.v = VectorXd::Zero(p_.intervals + 1);
    s.u = VectorXd::Zero(p_.intervals + 1);
    s.y = VectorXd::Zero(2 * p_.intervals);
    return s;
  }

  const TrajProblem& p_;
  double tol_;
  int max_iters_;
  std::vector<JointQp> qps_;
  int evaluations_ = 0;
  int qp_iterations_ = 0;
};

// Root of g on [t_min, t_max]; an infeasible point counts as g < 0.
Evaluation find_time(const TrajProblem& p, Planner& planner, double tol, int max_iters,
                     double& projected_g) {
  double slowest = 0.0;
  for (int i = 0; i < kDof; ++i) {
    slowest = std::max(slowest, rest_to_rest_min_time(p.q_goal[i] - p.q0[i], p.qd_max[i], p.u_max[i]));
  }
  const auto below = [](const Evaluation& e) { return !e.feasible || e.g < 0.0; };

  Evaluation cur = planner.evaluate(std::clamp(kGrowth * slowest, p.t_min, p.t_max));
  projected_g = cur.g;
  Evaluation lo, hi;
  if (!below(cur)) {
    hi = std::move(cur);
    for (;;) {
      if (hi.t <= p.t_min) {
        projected_g = 0.0;
        return hi;
      }
      Evaluation e = planner.evaluate(std::max(p.t_min, hi.t / kGrowth));
      if (below(e)) {
        lo = std::move(e);
        break;
      }
      hi = std::move(e);
    }
  } else {
    lo = std::move(cur);
    for (;;) {
      if (lo.t >= p.t_max) {
        projected_g = lo.feasible ? 0.0 : lo.g;
        return lo;
      }
      Evaluation e = planner.evaluate(std::min(p.t_max, lo.t * kGrowth));
      if (!below(e)) {
        hi = std::move(e);
        break;
      }
      lo = std::move(e);
    }
  }

  // Illinois false position, bisection while the lower end is infeasible.
  double g_lo = lo.g;
  double g_hi = hi.g;
  int side = 0;
  for (int it = 0; it < max_iters; ++it) {
    if (std::abs(hi.g) <= tol || hi.t - lo.t <= 1e-12 * hi.t) break;
    double t = 0.5 * (lo.t + hi.t);
    if (lo.feasible) {
      t = (lo.t * g_hi - hi.t * g_lo) / (g_hi - g_lo);
      if (!(t > lo.t && t < hi.t)) t = 0.5 * (lo.t + hi.t);
    }
    Evaluation e = planner.evaluate(t);
    if (e.feasible && std::abs(e.g) <= tol) {
      hi = std::move(e);
      break;
    }
    if (below(e)) {
      lo = std::move(e);
      g_lo = lo.g;
      if (side == -1) g_hi *= 0.5;
      side = -1;
    } else {
      hi = std::move(e);
      g_hi = hi.g;
      if (side == 1 && lo.feasible) g_lo *= 0.5;
      side = 1;
    }
  }
  projected_g = hi.g;
  if (std::abs(hi.g) > tol && lo.feasible && hi.t - lo.t <= 1e-12 * hi.t) {
    // g jumps across a change of active set. A convex combination of the
    // multipliers at both ends zeroes the t-derivative; what remains is the
    // mismatch between the two primal points.
    double gap = 0.0;
    for (std::size_t i = 0; i < hi.joints.size(); ++i) {
      const QpSolution& a = lo.joints[i];
      const QpSolution& b = hi.joints[i];
      gap = std::max({gap, inf_norm(b.q - a.q), inf_norm(b.v - a.v), inf_norm(b.u - a.u),
                      (hi.t - lo.t) / p.intervals * inf_norm(a.y)});
    }
    projected_g = gap;
  }
  return hi;
}

}  // namespace

void TrajConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, std::string("trajectory config: ") + what);
  };
  require(intervals >= 2, "intervals must be at least 2");
  require(r_weight.allFinite() && (r_weight.array() > 0.0).all(), "input weights must be positive");
  require(u_max.allFinite() && (u_max.array() > 0.0).all(), "acceleration bounds must be positive");
  require(std::isfinite(t_min) && t_min > 0.0, "t_min must be positive");
  require(std::isfinite(t_max) && t_max > t_min, "t_max must exceed t_min");
  require(std::isfinite(tol) && tol > 0.0, "tol must be positive");
  require(max_iters > 0, "max_iters must be positive");
}

TrajProblem TrajProblem::make(const RobotGeometry& geom, const JointVector& q0,
                              const JointVector& q_goal, const TrajConfig& config) {
  config.validate();
  TrajProblem p;
  p.q0 = q0;
  p.q_goal = q_goal;
  for (int i = 0; i < kDof; ++i) {
    p.q_max[i] = geom.q_max[i];
    p.qd_max[i] = geom.qd_max[i];
  }
  p.u_max = config.u_max;
  p.r_weight = config.r_weight;
  p.intervals = config.intervals;
  p.t_min = config.t_min;
  p.t_max = config.t_max;
  p.validate();
  return p;
}

void TrajProblem::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, std::string("trajectory problem: ") + what);
  };
  require(intervals >= 2, "intervals must be at least 2");
  require((q_max.array() > 0.0).all() && (qd_max.array() > 0.0).all() &&
              (u_max.array() > 0.0).all(),
          "bounds must be positive");
  require(r_weight.allFinite() && (r_weight.array() > 0.0).all(), "input weights must be positive");
  require(std::isfinite(t_min) && t_min > 0.0 && t_max > t_min, "invalid duration bounds");
  require(q0.allFinite() && q_goal.allFinite(), "end points must be finite");
  require((q0.cwiseAbs().array() <= q_max.array()).all(), "start configuration violates joint limits");
  require((q_goal.cwiseAbs().array() <= q_max.array()).all(), "goal configuration violates joint limits");
}

double rest_to_rest_min_time(double distance, double v_max, double a_max) {
  const double dist = std::abs(distance);
  if (dist * a_max >= v_max * v_max) return dist / v_max + v_max / a_max;
  return 2.0 * std::sqrt(dist / a_max);
}

Trajectory assemble_and_solve(const TrajProblem& problem, double tol, int max_iters) {
  problem.validate();
  if (!(tol > 0.0) || max_iters <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "trajectory solver: tol and max_iters must be positive");
  }
  Planner planner(problem, tol, max_iters);
  double projected_g = 0.0;
  const Evaluation best = find_time(problem, planner, tol, max_iters, projected_g);

  const int n = problem.intervals;
  Trajectory traj;
  traj.t_F = best.t;
  traj.intervals = n;
  traj.q.resize(n + 1, kDof);
  traj.qd.resize(n + 1, kDof);
  traj.u.resize(n + 1, kDof);
  traj.cost = best.t;
  TrajReport& rep = traj.report;
  double dual = 0.0;
  for (int i = 0; i < kDof; ++i) {
    const QpSolution& s = best.joints[static_cast<std::size_t>(i)];
    traj.q.col(i) = s.q;
    traj.qd.col(i) = s.v;
    traj.u.col(i) = s.u;
    traj.cost += s.value;
    rep.max_defect = std::max(rep.max_defect, s.primal_residual);
    dual = std::max(dual, s.dual_residual);
    const double q_excess = (s.q.cwiseAbs().array() - problem.q_max[i]).maxCoeff();
    const double v_excess = (s.v.cwiseAbs().array() - problem.qd_max[i]).maxCoeff();
    const double u_excess = (s.u.cwiseAbs().array() - problem.u_max[i]).maxCoeff();
    rep.max_bound_violation = std::max({rep.max_bound_violation, q_excess, v_excess, u_excess});
    rep.max_boundary_error =
        std::max({rep.max_boundary_error, std::abs(s.q[0] - problem.q0[i]),
                  std::abs(s.q[n] - problem.q_goal[i]), std::abs(s.v[0]), std::abs(s.v[n])});
  }
  rep.iterations = planner.evaluations();
  rep.qp_iterations = planner.qp_iterations();
  rep.stationarity = std::max(std::abs(projected_g), dual);
  rep.converged = best.feasible && rep.max_defect <= tol && rep.max_bound_violation <= tol &&
                  rep.max_boundary_error <= tol && rep.stationarity <= 10.0 * tol;
  return traj;
}

TrajValidation validate_trajectory(const TrajProblem& problem, const Trajectory& traj) {
  TrajValidation out;
  const int n = traj.intervals;
  const auto rows = static_cast<Eigen::Index>(n) + 1;
  if (n < 1 || traj.q.rows() != rows || traj.qd.rows() != rows || traj.u.rows() != rows) {
    throw Error(ErrorCode::kInvalidArgument, "trajectory arrays must have N + 1 rows");
  }
  const double h = traj.t_F / n;
  double effort = 0.0;
  for (int i = 0; i < kDof; ++i) {
    for (int k = 0; k < n; ++k) {
      const double dq = traj.q(k + 1, i) - traj.q(k, i) - 0.5 * h * (traj.qd(k, i) + traj.qd(k + 1, i));
      const double dv = traj.qd(k + 1, i) - traj.qd(k, i) - 0.5 * h * (traj.u(k, i) + traj.u(k + 1, i));
      const double worst = std::max(std::abs(dq), std::abs(dv));
      if (worst > out.max_defect) {
        out.max_defect = worst;
        out.defect_interval = k;
        out.defect_joint = i;
      }
    }
    for (int k = 0; k <= n; ++k) {
      out.max_bound_violation = std::max({out.max_bound_violation,
                                          std::abs(traj.q(k, i)) - problem.q_max[i],
                                          std::abs(traj.qd(k, i)) - problem.qd_max[i],
                                          std::abs(traj.u(k, i)) - problem.u_max[i]});
      effort += problem.r_weight[i] * traj.u(k, i) * traj.u(k, i);
    }
    out.max_boundary_error = std::max({out.max_boundary_error,
                                       std::abs(traj.q(0, i) - problem.q0[i]),
                                       std::abs(traj.q(n, i) - problem.q_goal[i]),
                                       std::abs(traj.qd(0, i)), std::abs(traj.qd(n, i))});
  }
  out.cost = traj.t_F + 0.5 * h * effort;
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "k,t";
  for (const char* name : {"q", "qd", "u"}) {
    for (int i = 1; i <= kDof; ++i) out << ',' << name << i;
  }
  out << '\n';
  const auto old_precision = out.precision(17);
  for (int k = 0; k <= traj.intervals; ++k) {
    out << k << ',' << k * traj.step();
    for (const JointTrajectory* m : {&traj.q, &traj.qd, &traj.u}) {
      for (int i = 0; i < kDof; ++i) out << ',' << (*m)(k, i);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

std::string trajectory_report_json(const Trajectory& traj) {
  const TrajReport& r = traj.report;
  const nlohmann::json j = {{"t_F", traj.t_F},
                            {"cost", traj.cost},
                            {"intervals", traj.intervals},
                            {"converged", r.converged},
                            {"iterations", r.iterations},
                            {"qp_iterations", r.qp_iterations},
                            {"max_defect", r.max_defect},
                            {"max_bound_violation", r.max_bound_violation},
                            {"max_boundary_error", r.max_boundary_error},
                            {"stationarity", r.stationarity}};
  return j.dump(2);
}

}  // namespace srsik
