#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "exeplan/features.hpp"
#include "exeplan/sparse.hpp"

namespace exeplan {

enum class Provenance { Seed, SelfLabeled };

struct Sample {
  SparseVector x;
  std::size_t label = 0;
  Provenance provenance = Provenance::Seed;
};

struct TrainingSet {
  std::vector<std::string> classes;
  std::vector<Sample> samples;
};

struct ClassWeights {
  std::vector<double> weights;  // dense, one entry per index column
  double bias = 0.0;

  bool operator==(const ClassWeights&) const = default;
};

/// One-vs-rest linear SVM. Decision is the argmax of w_c . x + b_c, ties
/// going to the earlier class.
struct Classifier {
  std::vector<std::string> classes;
  std::vector<ClassWeights> per_class;
  double c = 1.0;
  FeatureIndex index;

  std::size_t dimension() const { return per_class.empty() ? 0 : per_class.front().weights.size(); }
  std::size_t class_index(std::string_view name) const;
};

struct Classification {
  std::size_t label = 0;
  std::vector<double> scores;
};

Classification classify(const Classifier& h, const SparseVector& x);

struct SvmOptions {
  double c = 1.0;
  /// Stop once the maximal KKT violation of the dual drops to this value.
  double tolerance = 1e-4;
  std::size_t max_iterations = 10'000'000;
};

struct ClassFitReport {
  /// Dual objective in minimization form: 1/2 a'Qa - sum(a).
  double dual_objective = 0.0;
  /// Primal objective 1/2 |w|^2 + C sum(hinge) at the returned (w, b).
  double primal_objective = 0.0;
  double kkt_violation = 0.0;
  std::size_t iterations = 0;
  /// The class has samples but every one of them is the zero vector.
  bool degenerate = false;
};

struct SvmFit {
  Classifier classifier;
  std::vector<ClassFitReport> reports;
};

/// Incremental one-vs-rest soft-margin trainer.
///
/// Each class is a binary C-SVC dual solved by SMO with second-order
/// working-set selection. Samples can be appended between fits; new
/// samples enter with a zero multiplier, so the previous solution stays
/// dual-feasible and serves as a warm start.
class OneVsRestTrainer {
 public:
  OneVsRestTrainer(std::vector<std::string> classes, SvmOptions options);

  void add(SparseVector x, std::size_t label);
  void fit();

  std::size_t size() const { return samples_.size(); }
  const std::vector<std::size_t>& labels() const { return labels_; }

  /// Primal weights over the first `dimension` columns.
  SvmFit snapshot(std::size_t dimension) const;

 private:
  struct BinaryProblem {
    std::vector<double> alpha;
    std::vector<double> gradient;  // Q alpha - e
    std::vector<signed char> y;
    std::size_t iterations = 0;
  };

  void solve(BinaryProblem& p);
  double kkt_violation(const BinaryProblem& p) const;
  double bias(const BinaryProblem& p) const;
  double kernel(std::size_t i, std::size_t j) const { return kernel_[i][j]; }

  std::vector<std::string> classes_;
  SvmOptions options_;
  std::vector<SparseVector> samples_;
  std::vector<std::size_t> labels_;
  std::vector<std::vector<double>> kernel_;
  std::vector<BinaryProblem> problems_;
};

/// Fit every class on `data`. Classes with samples whose vectors are all
/// zero are reported as degenerate and get zero weights.
SvmFit train_svm(const TrainingSet& data, SvmOptions options);

}  // namespace exeplan
