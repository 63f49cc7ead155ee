#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dcflex/error.hpp"
#include "dcflex/lp/solver.hpp"

namespace dcflex::lp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

namespace {

using Vector = Eigen::VectorXd;

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;

// Column-major copy of [A | -I | artificials].
struct ColumnStore {
  std::vector<int> start{0};
  std::vector<int> rows;
  std::vector<double> values;

  int count() const { return static_cast<int>(start.size()) - 1; }

  void push(const std::vector<std::pair<int, double>>& entries) {
    for (const auto& [r, v] : entries) {
      rows.push_back(r);
      values.push_back(v);
    }
    start.push_back(static_cast<int>(rows.size()));
  }

  template <typename F>
  void for_each(int j, F&& f) const {
    for (int k = start[j]; k < start[j + 1]; ++k) f(rows[k], values[k]);
  }

  double dot(int j, const Vector& y) const {
    double s = 0.0;
    for (int k = start[j]; k < start[j + 1]; ++k) s += values[k] * y[rows[k]];
    return s;
  }
};

// B^{-1} as a sparse LU of a reference basis followed by product-form etas.
class BasisFactor {
 public:
  bool factorize(const ColumnStore& cols, const std::vector<int>& head) {
    const int m = static_cast<int>(head.size());
    etas_.clear();
    if (m == 0) return true;
    std::vector<Eigen::Triplet<double>> entries;
    for (int p = 0; p < m; ++p)
      cols.for_each(head[p], [&](int r, double v) { entries.emplace_back(r, p, v); });
    Eigen::SparseMatrix<double> basis(m, m);
    basis.setFromTriplets(entries.begin(), entries.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    return lu_.info() == Eigen::Success;
  }

  // v := B^{-1} v
  void ftran(Vector& v) const {
    if (v.size() == 0) return;
    v = lu_.solve(v).eval();
    for (const auto& eta : etas_) {
      const double vr = v[eta.row] / eta.pivot;
      if (vr != 0.0)
        for (const auto& [i, a] : eta.entries) v[i] -= a * vr;
      v[eta.row] = vr;
    }
  }

  // v := B^{-T} v
  void btran(Vector& v) const {
    if (v.size() == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->row];
      for (const auto& [i, a] : it->entries) s -= a * v[i];
      v[it->row] = s / it->pivot;
    }
    v = lu_.transpose().solve(v).eval();
  }

  void update(int row, const Vector& alpha) {
    Eta eta{row, alpha[row], {}};
    for (int i = 0; i < alpha.size(); ++i)
      if (i != row && alpha[i] != 0.0) eta.entries.emplace_back(i, alpha[i]);
    etas_.push_back(std::move(eta));
  }

  std::size_t eta_count() const { return etas_.size(); }

 private:
  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> entries;
  };
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

enum class VarState { Basic, AtLower, AtUpper, Free, Fixed };

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearModel& model, const SolverOptions& options)
      : model_(model), opt_(options) {
    m_ = static_cast<int>(model.constraint_count());
    n_ = static_cast<int>(model.variable_count());
    build_columns();
  }

  Solution run() {
    const auto t0 = std::chrono::steady_clock::now();
    Solution sol;
    sol.status = solve_phases();
    sol.iterations = iterations_;
    if (sol.status == SolveStatus::Optimal) extract(sol);
    sol.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
  }

 private:
  void build_columns() {
    std::vector<std::vector<std::pair<int, double>>> by_col(static_cast<std::size_t>(n_));
    for (int i = 0; i < m_; ++i)
      for (const auto& t : model_.constraint(static_cast<std::size_t>(i)).terms)
        by_col[static_cast<std::size_t>(t.var)].emplace_back(i, t.coef);
    for (int j = 0; j < n_; ++j) {
      cols_.push(by_col[static_cast<std::size_t>(j)]);
      const auto& v = model_.variable(static_cast<std::size_t>(j));
      lo_.push_back(v.lower);
      up_.push_back(v.upper);
      cost_.push_back(model_.costs()[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < m_; ++i) {
      cols_.push({{i, -1.0}});
      const auto& c = model_.constraint(static_cast<std::size_t>(i));
      switch (c.relation) {
        case Relation::LessEqual: lo_.push_back(-kInfinity); up_.push_back(c.rhs); break;
        case Relation::GreaterEqual: lo_.push_back(c.rhs); up_.push_back(kInfinity); break;
        case Relation::Equal: lo_.push_back(c.rhs); up_.push_back(c.rhs); break;
      }
      cost_.push_back(0.0);
    }
  }

  long iteration_limit() const {
    if (opt_.max_iterations > 0) return opt_.max_iterations;
    return std::max<long>(20000, 50L * (m_ + n_));
  }

  void set_nonbasic_at_bound(int j) {
    if (lo_[j] == up_[j]) {
      state_[j] = VarState::Fixed;
      x_[j] = lo_[j];
    } else if (std::isfinite(lo_[j])) {
      state_[j] = VarState::AtLower;
      x_[j] = lo_[j];
    } else if (std::isfinite(up_[j])) {
      state_[j] = VarState::AtUpper;
      x_[j] = up_[j];
    } else {
      state_[j] = VarState::Free;
      x_[j] = 0.0;
    }
  }

  // Slack basis where possible, artificial columns for rows whose activity
  // at the starting point lies outside the row bounds.
  void initial_basis() {
    const int total = n_ + m_;
    x_.assign(static_cast<std::size_t>(total), 0.0);
    state_.assign(static_cast<std::size_t>(total), VarState::AtLower);
    for (int j = 0; j < n_; ++j) set_nonbasic_at_bound(j);

    std::vector<double> activity(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < n_; ++j)
      if (x_[j] != 0.0) cols_.for_each(j, [&](int r, double v) { activity[r] += v * x_[j]; });

    head_.assign(static_cast<std::size_t>(m_), -1);
    for (int i = 0; i < m_; ++i) {
      const int z = n_ + i;
      const double r = activity[i];
      if (r >= lo_[z] - opt_.feas_tol && r <= up_[z] + opt_.feas_tol) {
        state_[z] = VarState::Basic;
        x_[z] = r;
        head_[i] = z;
        continue;
      }
      set_nonbasic_at_bound(z);
      const double target = r < lo_[z] ? lo_[z] : up_[z];
      x_[z] = target;
      state_[z] = target == lo_[z] ? (lo_[z] == up_[z] ? VarState::Fixed : VarState::AtLower)
                                   : VarState::AtUpper;
      const double sigma = target - r > 0 ? 1.0 : -1.0;
      const int a = cols_.count();
      cols_.push({{i, sigma}});
      lo_.push_back(0.0);
      up_.push_back(kInfinity);
      cost_.push_back(0.0);
      x_.push_back(std::fabs(target - r));
      state_.push_back(VarState::Basic);
      artificials_.push_back(a);
      head_[i] = a;
    }
  }

  bool refactor() {
    if (!factor_.factorize(cols_, head_)) return false;
    recompute_basic_values();
    return true;
  }

  void recompute_basic_values() {
    Vector rhs = Vector::Zero(m_);
    for (int j = 0; j < cols_.count(); ++j) {
      if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
      cols_.for_each(j, [&](int r, double v) { rhs[r] -= v * x_[j]; });
    }
    factor_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
  }

  Vector compute_duals(const std::vector<double>& cost) const {
    Vector y(m_);
    for (int p = 0; p < m_; ++p) y[p] = cost[head_[p]];
    factor_.btran(y);
    return y;
  }

  double reduced_cost(int j, const std::vector<double>& cost, const Vector& y) const {
    return cost[j] - cols_.dot(j, y);
  }

  // Returns the entering column and its reduced cost, or -1 when optimal.
  std::pair<int, double> price(const std::vector<double>& cost, const Vector& y) const {
    int best = -1;
    double best_score = 0.0, best_d = 0.0;
    const double tol = opt_.opt_tol;
    for (int j = 0; j < cols_.count(); ++j) {
      const VarState s = state_[j];
      if (s == VarState::Basic || s == VarState::Fixed) continue;
      const double d = reduced_cost(j, cost, y);
      double score = 0.0;
      if (s == VarState::AtLower && d < -tol) score = -d;
      else if (s == VarState::AtUpper && d > tol) score = d;
      else if (s == VarState::Free && std::fabs(d) > tol) score = std::fabs(d);
      if (score == 0.0) continue;
      if (bland_) return {j, d};
      if (score > best_score) {
        best = j;
        best_score = score;
        best_d = d;
      }
    }
    return {best, best_d};
  }

  enum class StepResult { Progress, Unbounded, Singular };

  StepResult step(int q, double d_q) {
    Vector alpha = Vector::Zero(m_);
    cols_.for_each(q, [&](int r, double v) { alpha[r] = v; });
    factor_.ftran(alpha);
    const double dir = d_q < 0 ? 1.0 : -1.0;

    // Basic variable p moves by -t * dir * alpha[p].
    const double delta = opt_.feas_tol;
    double harris_bound = kInfinity;
    for (int p = 0; p < m_; ++p) {
      const double a = dir * alpha[p];
      if (std::fabs(a) < kPivotTol) continue;
      const int j = head_[p];
      if (a > 0 && std::isfinite(lo_[j]))
        harris_bound = std::min(harris_bound, (x_[j] - lo_[j] + delta) / a);
      else if (a < 0 && std::isfinite(up_[j]))
        harris_bound = std::min(harris_bound, (up_[j] - x_[j] + delta) / -a);
    }

    int leave = -1;
    double leave_ratio = kInfinity;
    if (std::isfinite(harris_bound)) {
      double best_mag = 0.0;
      int best_index = 0;
      double min_ratio = kInfinity;
      if (bland_) {
        for (int p = 0; p < m_; ++p) {
          const double r = exact_ratio(p, dir * alpha[p]);
          min_ratio = std::min(min_ratio, r);
        }
      }
      for (int p = 0; p < m_; ++p) {
        const double a = dir * alpha[p];
        const double r = exact_ratio(p, a);
        if (!std::isfinite(r)) continue;
        if (bland_) {
          if (r > min_ratio + kDegenerateStep) continue;
          if (leave < 0 || head_[p] < best_index) {
            leave = p;
            best_index = head_[p];
            leave_ratio = r;
          }
        } else {
          if (r > harris_bound) continue;
          if (std::fabs(a) > best_mag) {
            best_mag = std::fabs(a);
            leave = p;
            leave_ratio = r;
          }
        }
      }
    }

    const double range = up_[q] - lo_[q];
    const bool can_flip = std::isfinite(range);
    if (leave < 0 && !can_flip) return StepResult::Unbounded;

    const double t = leave < 0 ? range : std::max(0.0, leave_ratio);
    if (can_flip && (leave < 0 || range <= t)) {
      // Bound flip: the entering variable crosses to its other bound.
      for (int p = 0; p < m_; ++p)
        if (alpha[p] != 0.0) x_[head_[p]] -= dir * range * alpha[p];
      if (state_[q] == VarState::AtLower) {
        state_[q] = VarState::AtUpper;
        x_[q] = up_[q];
      } else {
        state_[q] = VarState::AtLower;
        x_[q] = lo_[q];
      }
      note_step(range);
      return StepResult::Progress;
    }

    for (int p = 0; p < m_; ++p)
      if (alpha[p] != 0.0) x_[head_[p]] -= dir * t * alpha[p];
    x_[q] += dir * t;

    const int out = head_[leave];
    const double a_out = dir * alpha[leave];
    if (lo_[out] == up_[out]) {
      state_[out] = VarState::Fixed;
      x_[out] = lo_[out];
    } else if (a_out > 0) {
      state_[out] = VarState::AtLower;
      x_[out] = lo_[out];
    } else {
      state_[out] = VarState::AtUpper;
      x_[out] = up_[out];
    }
    state_[q] = VarState::Basic;
    head_[leave] = q;
    factor_.update(leave, alpha);
    note_step(t);
    if (static_cast<int>(factor_.eta_count()) >= opt_.refactor_interval && !refactor())
      return StepResult::Singular;
    return StepResult::Progress;
  }

  double exact_ratio(int p, double a) const {
    if (std::fabs(a) < kPivotTol) return kInfinity;
    const int j = head_[p];
    if (a > 0 && std::isfinite(lo_[j])) return std::max(0.0, (x_[j] - lo_[j]) / a);
    if (a < 0 && std::isfinite(up_[j])) return std::max(0.0, (up_[j] - x_[j]) / -a);
    return kInfinity;
  }

  void note_step(double t) {
    if (t <= kDegenerateStep) {
      if (++degenerate_run_ >= opt_.degenerate_pivot_limit) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }
  }

  enum class PhaseResult { Optimal, Unbounded, IterationLimit };

  PhaseResult iterate(const std::vector<double>& cost) {
    const long limit = iteration_limit();
    bool verified = false;
    for (;;) {
      if (iterations_ >= limit) return PhaseResult::IterationLimit;
      const Vector y = compute_duals(cost);
      const auto [q, d_q] = price(cost, y);
      if (q < 0) {
        // Confirm optimality against a fresh factorization.
        if (verified || factor_.eta_count() == 0) return PhaseResult::Optimal;
        if (!refactor()) throw Error("simplex: singular basis during refactorization");
        verified = true;
        continue;
      }
      verified = false;
      ++iterations_;
      switch (step(q, d_q)) {
        case StepResult::Progress: break;
        case StepResult::Unbounded: return PhaseResult::Unbounded;
        case StepResult::Singular: throw Error("simplex: singular basis during refactorization");
      }
    }
  }

  // Pivots basic artificials (all at zero after phase one) out of the basis
  // wherever a non-artificial column has a usable entry in their row.
  void drive_out_artificials() {
    for (int p = 0; p < m_; ++p) {
      const int a = head_[p];
      if (a < n_ + m_) continue;
      Vector rho = Vector::Zero(m_);
      rho[p] = 1.0;
      factor_.btran(rho);
      int entering = -1;
      double best = 1e-7;
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] == VarState::Basic || state_[j] == VarState::Fixed) continue;
        const double v = std::fabs(cols_.dot(j, rho));
        if (v > best) {
          best = v;
          entering = j;
        }
      }
      if (entering < 0) continue;
      Vector alpha = Vector::Zero(m_);
      cols_.for_each(entering, [&](int r, double v) { alpha[r] = v; });
      factor_.ftran(alpha);
      // Degenerate pivot: the artificial leaves at value zero.
      const double t = x_[a] / alpha[p];
      for (int k = 0; k < m_; ++k)
        if (alpha[k] != 0.0) x_[head_[k]] -= t * alpha[k];
      x_[entering] += t;
      x_[a] = 0.0;
      state_[a] = VarState::Fixed;
      state_[entering] = VarState::Basic;
      head_[p] = entering;
      factor_.update(p, alpha);
      if (static_cast<int>(factor_.eta_count()) >= opt_.refactor_interval && !refactor())
        throw Error("simplex: singular basis during refactorization");
    }
  }

  SolveStatus solve_phases() {
    initial_basis();
    if (!refactor()) throw Error("simplex: singular starting basis");

    if (!artificials_.empty()) {
      std::vector<double> phase_one(cost_.size(), 0.0);
      for (int a : artificials_) phase_one[a] = 1.0;
      switch (iterate(phase_one)) {
        case PhaseResult::IterationLimit: return SolveStatus::IterationLimit;
        case PhaseResult::Unbounded: throw Error("simplex: phase one reported unbounded");
        case PhaseResult::Optimal: break;
      }
      double worst = 0.0;
      for (int a : artificials_) worst = std::max(worst, x_[a]);
      if (worst > opt_.feas_tol) return SolveStatus::Infeasible;
      for (int a : artificials_) {
        up_[a] = 0.0;
        if (state_[a] != VarState::Basic) {
          state_[a] = VarState::Fixed;
          x_[a] = 0.0;
        }
      }
      drive_out_artificials();
      if (!refactor()) throw Error("simplex: singular basis after phase one");
      degenerate_run_ = 0;
      bland_ = false;
    }

    switch (iterate(cost_)) {
      case PhaseResult::IterationLimit: return SolveStatus::IterationLimit;
      case PhaseResult::Unbounded: return SolveStatus::Unbounded;
      case PhaseResult::Optimal: break;
    }
    return SolveStatus::Optimal;
  }

  void extract(Solution& sol) {
    if (factor_.eta_count() > 0 && !refactor())
      throw Error("simplex: singular basis during final refactorization");
    const Vector y = compute_duals(cost_);
    sol.primal.assign(x_.begin(), x_.begin() + n_);
    sol.duals.assign(y.data(), y.data() + m_);
    sol.reduced_costs.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
      sol.reduced_costs[static_cast<std::size_t>(j)] =
          state_[j] == VarState::Basic ? 0.0 : reduced_cost(j, cost_, y);
    sol.objective = model_.objective_value(sol.primal);
  }

  const LinearModel& model_;
  SolverOptions opt_;
  int m_ = 0;
  int n_ = 0;
  ColumnStore cols_;
  std::vector<double> lo_, up_, cost_, x_;
  std::vector<VarState> state_;
  std::vector<int> head_;
  std::vector<int> artificials_;
  BasisFactor factor_;
  long iterations_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
};

}  // namespace

Solution solve(const LinearModel& model, const SolverOptions& options) {
  RevisedSimplex simplex(model, options);
  return simplex.run();
}

}  // namespace dcflex::lp
