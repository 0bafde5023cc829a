#pragma once

#include <stdexcept>
#include <string>

namespace exeplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A data file (lexicon, KB, model, corpus, plan) failed validation.
/// The message names the offending row/column or JSON path.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Sentence has no verb; the caller keeps it as non-task context.
class NoVerb : public Error {
 public:
  using Error::Error;
};

/// A basic formula appeared twice in one plan.
class DuplicateSubGoal : public Error {
 public:
  using Error::Error;
};

/// No knowledge-base value for a slot is satisfiable in the current world.
class NoFeasibleValue : public Error {
 public:
  NoFeasibleValue(std::string formula, std::string slot)
      : Error("no feasible value for " + formula + "." + slot),
        formula_(std::move(formula)),
        slot_(std::move(slot)) {}

  const std::string& formula() const { return formula_; }
  const std::string& slot() const { return slot_; }

 private:
  std::string formula_;
  std::string slot_;
};

class NoCandidates : public Error {
 public:
  using Error::Error;
};

class RefuseNonExecutable : public Error {
 public:
  using Error::Error;
};

/// Cutting-plane training hit its iteration cap.
class NonConvergence : public Error {
 public:
  NonConvergence(std::size_t iterations, double violation)
      : Error("cutting plane did not converge after " + std::to_string(iterations) +
              " iterations (violation " + std::to_string(violation) + ")"),
        violation_(violation) {}

  double violation() const { return violation_; }

 private:
  double violation_;
};

}  // namespace exeplan
