#include "exeplan/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace exeplan {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::size_t Classifier::class_index(std::string_view name) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == name) return i;
  }
  throw std::out_of_range("unknown class " + std::string(name));
}

Classification classify(const Classifier& h, const SparseVector& x) {
  Classification out;
  out.scores.reserve(h.per_class.size());
  for (const auto& cw : h.per_class) out.scores.push_back(dot(cw.weights, x) + cw.bias);
  for (std::size_t c = 1; c < out.scores.size(); ++c) {
    if (out.scores[c] > out.scores[out.label]) out.label = c;
  }
  return out;
}

OneVsRestTrainer::OneVsRestTrainer(std::vector<std::string> classes, SvmOptions options)
    : classes_(std::move(classes)), options_(options), problems_(classes_.size()) {
  if (!(options_.c > 0.0)) throw std::invalid_argument("SVM tradeoff C must be positive");
  if (classes_.empty()) throw std::invalid_argument("classifier needs at least one class");
}

void OneVsRestTrainer::add(SparseVector x, std::size_t label) {
  if (label >= classes_.size()) throw std::out_of_range("sample label out of range");
  const std::size_t n = samples_.size();
  std::vector<double> row(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    row[i] = dot(samples_[i], x);
    kernel_[i].push_back(row[i]);
  }
  row[n] = dot(x, x);
  kernel_.push_back(std::move(row));
  samples_.push_back(std::move(x));
  labels_.push_back(label);

  for (std::size_t c = 0; c < problems_.size(); ++c) {
    auto& p = problems_[c];
    const signed char y = label == c ? 1 : -1;
    // G_n = y_n * sum_i alpha_i y_i K(i, n) - 1
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p.alpha[i] != 0.0) g += p.alpha[i] * p.y[i] * kernel_[n][i];
    }
    p.alpha.push_back(0.0);
    p.gradient.push_back(y * g - 1.0);
    p.y.push_back(y);
  }
}

void OneVsRestTrainer::fit() {
  for (auto& p : problems_) solve(p);
}

void OneVsRestTrainer::solve(BinaryProblem& p) {
  const std::size_t n = p.alpha.size();
  const double c = options_.c;
  std::size_t iter = 0;
  while (iter < options_.max_iterations) {
    // Maximal violating pair with second-order selection for j.
    double gmax = -kInf;
    std::ptrdiff_t i_sel = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (p.y[t] == 1) {
        if (p.alpha[t] < c && -p.gradient[t] >= gmax) {
          gmax = -p.gradient[t];
          i_sel = static_cast<std::ptrdiff_t>(t);
        }
      } else if (p.alpha[t] > 0 && p.gradient[t] >= gmax) {
        gmax = p.gradient[t];
        i_sel = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i_sel < 0) break;
    const auto i = static_cast<std::size_t>(i_sel);

    double gmax2 = -kInf;
    double obj_diff_min = kInf;
    std::ptrdiff_t j_sel = -1;
    for (std::size_t t = 0; t < n; ++t) {
      const double q_it = p.y[i] * p.y[t] * kernel(i, t);
      if (p.y[t] == 1) {
        if (p.alpha[t] > 0) {
          const double grad_diff = gmax + p.gradient[t];
          gmax2 = std::max(gmax2, p.gradient[t]);
          if (grad_diff > 0) {
            double quad = kernel(i, i) + kernel(t, t) - 2.0 * p.y[i] * q_it;
            double obj_diff = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
            if (obj_diff <= obj_diff_min) {
              j_sel = static_cast<std::ptrdiff_t>(t);
              obj_diff_min = obj_diff;
            }
          }
        }
      } else if (p.alpha[t] < c) {
        const double grad_diff = gmax - p.gradient[t];
        gmax2 = std::max(gmax2, -p.gradient[t]);
        if (grad_diff > 0) {
          double quad = kernel(i, i) + kernel(t, t) + 2.0 * p.y[i] * q_it;
          double obj_diff = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
          if (obj_diff <= obj_diff_min) {
            j_sel = static_cast<std::ptrdiff_t>(t);
            obj_diff_min = obj_diff;
          }
        }
      }
    }
    if (gmax + gmax2 <= options_.tolerance || j_sel < 0) break;
    const auto j = static_cast<std::size_t>(j_sel);
    ++iter;

    const double q_ij = p.y[i] * p.y[j] * kernel(i, j);
    const double old_i = p.alpha[i];
    const double old_j = p.alpha[j];
    double& ai = p.alpha[i];
    double& aj = p.alpha[j];
    if (p.y[i] != p.y[j]) {
      double quad = kernel(i, i) + kernel(j, j) + 2.0 * q_ij;
      if (quad <= 0) quad = kTau;
      const double delta = (-p.gradient[i] - p.gradient[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) {
          aj = 0;
          ai = diff;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = -diff;
      }
      if (diff > 0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = kernel(i, i) + kernel(j, j) - 2.0 * q_ij;
      if (quad <= 0) quad = kTau;
      const double delta = (p.gradient[i] - p.gradient[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0) {
        aj = 0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = sum;
      }
    }

    const double d_i = ai - old_i;
    const double d_j = aj - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      p.gradient[t] += p.y[t] * (p.y[i] * kernel(i, t) * d_i + p.y[j] * kernel(j, t) * d_j);
    }
  }
  p.iterations = iter;
}

double OneVsRestTrainer::kkt_violation(const BinaryProblem& p) const {
  double up = -kInf;
  double low = -kInf;
  for (std::size_t t = 0; t < p.alpha.size(); ++t) {
    const double yg = -p.y[t] * p.gradient[t];
    const bool can_up = p.y[t] == 1 ? p.alpha[t] < options_.c : p.alpha[t] > 0;
    const bool can_low = p.y[t] == 1 ? p.alpha[t] > 0 : p.alpha[t] < options_.c;
    if (can_up) up = std::max(up, yg);
    if (can_low) low = std::max(low, -yg);
  }
  if (up == -kInf || low == -kInf) return 0.0;
  return std::max(0.0, up + low);
}

double OneVsRestTrainer::bias(const BinaryProblem& p) const {
  double ub = kInf;
  double lb = -kInf;
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < p.alpha.size(); ++t) {
    const double yg = p.y[t] * p.gradient[t];
    if (p.alpha[t] >= options_.c) {
      if (p.y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (p.alpha[t] <= 0) {
      if (p.y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  return -rho;
}

SvmFit OneVsRestTrainer::snapshot(std::size_t dimension) const {
  SvmFit fit;
  fit.classifier.classes = classes_;
  fit.classifier.c = options_.c;
  const std::size_t n = samples_.size();
  for (std::size_t c = 0; c < problems_.size(); ++c) {
    const auto& p = problems_[c];
    ClassWeights cw;
    cw.weights.assign(dimension, 0.0);
    ClassFitReport report;
    report.iterations = p.iterations;

    std::size_t positives = 0;
    bool all_zero = true;
    for (std::size_t t = 0; t < n; ++t) {
      if (p.y[t] == 1) {
        ++positives;
        if (!samples_[t].empty()) all_zero = false;
      }
    }
    if (positives > 0 && all_zero) {
      report.degenerate = true;
    } else if (positives == 0 || positives == n) {
      // One-sided problem: the only feasible multiplier is zero.
      cw.bias = positives == 0 ? -1.0 : 1.0;
    } else {
      for (std::size_t t = 0; t < n; ++t) {
        if (p.alpha[t] == 0.0) continue;
        for (const auto& [col, v] : samples_[t]) {
          if (col < dimension) cw.weights[col] += p.alpha[t] * p.y[t] * v;
        }
      }
      cw.bias = bias(p);
      double dual = 0.0;
      for (std::size_t t = 0; t < n; ++t) dual += p.alpha[t] * (p.gradient[t] - 1.0);
      report.dual_objective = dual / 2.0;
      report.kkt_violation = kkt_violation(p);
    }

    double norm2 = 0.0;
    for (double v : cw.weights) norm2 += v * v;
    double hinge = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      hinge += std::max(0.0, 1.0 - p.y[t] * (dot(cw.weights, samples_[t]) + cw.bias));
    }
    report.primal_objective = 0.5 * norm2 + options_.c * hinge;

    fit.classifier.per_class.push_back(std::move(cw));
    fit.reports.push_back(report);
  }
  return fit;
}

SvmFit train_svm(const TrainingSet& data, SvmOptions options) {
  OneVsRestTrainer trainer(data.classes, options);
  std::size_t dimension = 0;
  for (const auto& s : data.samples) {
    if (!s.x.empty()) dimension = std::max<std::size_t>(dimension, s.x.back().first + 1);
    trainer.add(s.x, s.label);
  }
  trainer.fit();
  return trainer.snapshot(dimension);
}

}  // namespace exeplan
