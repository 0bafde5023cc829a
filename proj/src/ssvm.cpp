#include "exeplan/ssvm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "exeplan/error.hpp"

namespace exeplan {

std::vector<double> psi(const FormulaSet& x, std::size_t y, std::size_t n_tasks) {
  std::vector<double> out(n_tasks * kFormulaCount, 0.0);
  for (std::size_t i = 0; i < kFormulaCount; ++i) {
    if (x.test(i)) out.at(y * kFormulaCount + i) = 1.0;
  }
  return out;
}

std::vector<double> flatten(const MlnModel& model) {
  std::vector<double> w;
  w.reserve(model.weights.size() * kFormulaCount);
  for (const auto& row : model.weights) w.insert(w.end(), row.begin(), row.end());
  return w;
}

MlnModel unflatten(const std::vector<double>& w, std::vector<std::string> task_types) {
  if (w.size() != task_types.size() * kFormulaCount) throw std::invalid_argument("weight vector size mismatch");
  MlnModel model;
  model.weights.assign(task_types.size(), FormulaWeights{});
  for (std::size_t t = 0; t < task_types.size(); ++t) {
    std::copy_n(w.begin() + static_cast<std::ptrdiff_t>(t * kFormulaCount), kFormulaCount, model.weights[t].begin());
  }
  model.task_types = std::move(task_types);
  return model;
}

double loss(const MlnModel& model, const FormulaSet& x, std::size_t y, std::size_t ybar) {
  if (y == ybar) return 0.0;
  return 1.0 + std::abs(score_formulas(model, y, x) - score_formulas(model, ybar, x));
}

std::size_t loss_augmented_infer(const MlnModel& w, const FormulaSet& x, std::size_t y_true,
                                 const MlnModel& loss_reference) {
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t y = 0; y < w.task_types.size(); ++y) {
    const double v = score_formulas(w, y, x) + loss(loss_reference, x, y_true, y);
    if (y == 0 || v > best_value) {
      best = y;
      best_value = v;
    }
  }
  return best;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::vector<double> positive_part(std::vector<double> v) {
  for (auto& x : v) x = std::max(x, 0.0);
  return v;
}

// Maximize phi(t) = t*db - 1/2 |[v + t d]_+|^2 over t in [0, upper].
// phi is concave and piecewise quadratic with kinks where v_r + t d_r = 0.
double line_search(const std::vector<double>& v, const std::vector<double>& d, double db, double upper) {
  std::vector<double> kinks;
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (d[r] != 0.0) {
      const double t = -v[r] / d[r];
      if (t > 0.0 && t < upper) kinks.push_back(t);
    }
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.push_back(upper);

  double start = 0.0;
  for (double end : kinks) {
    if (end <= start) continue;
    // components active on (start, end)
    const double mid = 0.5 * (start + end);
    double lin = db, quad = 0.0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      if (v[r] + mid * d[r] > 0.0) {
        lin -= d[r] * v[r];
        quad += d[r] * d[r];
      }
    }
    // derivative on this piece: lin - quad * t
    if (lin - quad * end <= 0.0) {
      if (quad <= 0.0) return start;
      return std::clamp(lin / quad, start, end);
    }
    start = end;
  }
  return upper;
}

double dual_value(const std::vector<WorkingConstraint>& cons, const std::vector<double>& lambda,
                  const std::vector<double>& v) {
  double lin = 0.0;
  for (std::size_t k = 0; k < cons.size(); ++k) lin += lambda[k] * cons[k].b;
  const auto w = positive_part(v);
  return lin - 0.5 * dot(w, w);
}

}  // namespace

WorkingSetSolution solve_working_set(const std::vector<WorkingConstraint>& constraints, double c,
                                     const std::vector<double>& warm_start) {
  if (!(c > 0.0)) throw std::invalid_argument("C must be positive");
  const std::size_t m = constraints.size();
  const std::size_t dim = m ? constraints.front().a.size() : 0;

  // Variable 0 is the slack of the sum constraint, so the feasible set is
  // the simplex sum(lambda) = C. It carries a = 0, b = 0.
  std::vector<double> lambda(m + 1, 0.0);
  double used = 0.0;
  for (std::size_t k = 0; k < std::min(m, warm_start.size()); ++k) {
    lambda[k + 1] = std::max(0.0, warm_start[k]);
    used += lambda[k + 1];
  }
  if (used > c) {
    for (auto& l : lambda) l *= c / used;
    used = c;
  }
  lambda[0] = c - used;

  std::vector<double> v(dim, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t r = 0; r < dim; ++r) v[r] += lambda[k + 1] * constraints[k].a[r];
  }
  auto a_of = [&](std::size_t j) -> const std::vector<double>* {
    return j == 0 ? nullptr : &constraints[j - 1].a;
  };
  auto b_of = [&](std::size_t j) { return j == 0 ? 0.0 : constraints[j - 1].b; };

  constexpr std::size_t kMaxSweeps = 200000;
  for (std::size_t it = 0; it < kMaxSweeps; ++it) {
    const auto w = positive_part(v);
    std::size_t up = 0, down = 0;
    double g_up = -INFINITY, g_down = INFINITY;
    for (std::size_t j = 0; j <= m; ++j) {
      const double g = b_of(j) - (a_of(j) ? dot(*a_of(j), w) : 0.0);
      if (g > g_up) {
        g_up = g;
        up = j;
      }
      if (lambda[j] > 0.0 && g < g_down) {
        g_down = g;
        down = j;
      }
    }
    if (up == down || g_up - g_down <= 1e-12 * std::max(1.0, std::abs(g_up))) break;

    std::vector<double> d(dim, 0.0);
    if (a_of(up)) for (std::size_t r = 0; r < dim; ++r) d[r] += (*a_of(up))[r];
    if (a_of(down)) for (std::size_t r = 0; r < dim; ++r) d[r] -= (*a_of(down))[r];
    const double t = line_search(v, d, b_of(up) - b_of(down), lambda[down]);
    if (t <= 0.0) break;
    lambda[up] += t;
    lambda[down] = (t >= lambda[down]) ? 0.0 : lambda[down] - t;
    for (std::size_t r = 0; r < dim; ++r) v[r] += t * d[r];
  }

  WorkingSetSolution sol;
  sol.lambda.assign(lambda.begin() + 1, lambda.end());
  sol.w = positive_part(v);
  for (const auto& con : constraints) sol.xi = std::max(sol.xi, con.b - dot(con.a, sol.w));
  sol.dual_objective = dual_value(constraints, sol.lambda, v);
  sol.primal_objective = 0.5 * dot(sol.w, sol.w) + c * sol.xi;
  return sol;
}

namespace {

SsvmResult cutting_plane(const std::vector<PlanExample>& data, const std::vector<std::string>& task_types,
                         const SsvmOptions& options, const MlnModel& reference) {
  if (data.empty()) throw std::invalid_argument("no training examples");
  if (task_types.empty()) throw std::invalid_argument("no task types");
  if (!(options.c > 0.0) || !(options.epsilon > 0.0)) throw std::invalid_argument("C and epsilon must be positive");
  for (const auto& ex : data) {
    if (ex.y >= task_types.size()) throw std::invalid_argument("example label out of range");
  }

  const std::size_t n_tasks = task_types.size();
  const std::size_t dim = n_tasks * kFormulaCount;
  const double inv_n = 1.0 / static_cast<double>(data.size());

  SsvmResult result;
  result.loss_reference = reference;
  std::vector<WorkingConstraint> working;
  WorkingSetSolution sol;
  sol.w.assign(dim, 0.0);

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    const MlnModel current = unflatten(sol.w, task_types);
    WorkingConstraint con;
    con.a.assign(dim, 0.0);
    for (const auto& ex : data) {
      const std::size_t ybar = loss_augmented_infer(current, ex.x, ex.y, reference);
      if (ybar == ex.y) continue;
      con.b += inv_n * loss(reference, ex.x, ex.y, ybar);
      for (std::size_t i = 0; i < kFormulaCount; ++i) {
        if (!ex.x.test(i)) continue;
        con.a[ex.y * kFormulaCount + i] += inv_n;
        con.a[ybar * kFormulaCount + i] -= inv_n;
      }
    }
    const double violation = con.b - dot(con.a, sol.w);
    result.iterations = iter;
    result.final_violation = violation - sol.xi;
    result.xi = sol.xi;
    if (violation <= sol.xi + options.epsilon) {
      result.model = unflatten(sol.w, task_types);
      return result;
    }

    working.push_back(std::move(con));
    sol = solve_working_set(working, options.c, sol.lambda);
    // the slack term absorbs every working constraint
    if (sol.xi < 0.0) throw std::logic_error("working-set QP infeasible");
    result.trace.push_back({sol.dual_objective, sol.xi, violation, working.size()});
  }
  throw NonConvergence(options.max_iterations, result.final_violation);
}

}  // namespace

SsvmResult train_ssvm(const std::vector<PlanExample>& data, const std::vector<std::string>& task_types,
                      const SsvmOptions& options) {
  if (options.loss_reference) {
    if (options.loss_reference->task_types != task_types) {
      throw std::invalid_argument("loss reference has different task types");
    }
    return cutting_plane(data, task_types, options, *options.loss_reference);
  }
  const MlnModel zero = unflatten(std::vector<double>(task_types.size() * kFormulaCount, 0.0), task_types);
  const SsvmResult first = cutting_plane(data, task_types, options, zero);
  return cutting_plane(data, task_types, options, first.model);
}

}  // namespace exeplan
