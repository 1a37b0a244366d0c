#pragma once

// Iterative nonlinear programming for discretized minimax problems
//
//   max_{(i,j) in grid} F_ij(x)  ->  min_x
//
// The maximum is enforced only on a growing set of reference pairs. Each
// outer iteration adds the current grid argmax and solves
//
//   min t  s.t.  F_ij(x) - t <= 0 for every reference pair,
//                t >= t_prev - delta_step,
//
// starting from the feasible point (x, t_prev), t_prev = current grid max.

#include <Eigen/Dense>
#include <limits>
#include <span>
#include <vector>

#include "schurnorm/errors.hpp"
#include "schurnorm/nlp.hpp"
#include "schurnorm/schur_model.hpp"

namespace schurnorm {

struct GridMax {
  double value = 0.0;
  IndexPair arg;
};

/// A smooth family of constraint functions indexed by grid pairs.
class PairFamily {
 public:
  virtual ~PairFamily() = default;

  virtual Eigen::Index num_params() const = 0;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;

  // Maximum over every grid pair; ties go to the lowest i, then lowest j.
  virtual GridMax grid_max(const Eigen::VectorXd& x) const = 0;

  virtual void values_and_jacobian(const Eigen::VectorXd& x,
                                   std::span<const IndexPair> pairs,
                                   Eigen::VectorXd& values,
                                   Eigen::MatrixXd& jacobian) const = 0;

  virtual Eigen::VectorXd values(const Eigen::VectorXd& x,
                                 std::span<const IndexPair> pairs) const;
};

struct ReferencePoint {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  int added_at = 0;
};

struct HistoryEntry {
  int iteration = 0;
  double t = 0.0;           // optimized value over the reference set
  std::size_t refs = 0;     // reference points used in this step
  double grid_max = 0.0;    // full-grid maximum after the step
  bool inexact = false;     // inner NLP stopped before its tolerance
};

struct OptState {
  Eigen::VectorXd params;
  double t = std::numeric_limits<double>::quiet_NaN();
  std::vector<ReferencePoint> refs;
  int iteration = 0;
  std::vector<HistoryEntry> history;

  bool has_reference(Eigen::Index i, Eigen::Index j) const;
};

struct MinimaxOptions {
  double delta_step = 0.005;
  double gap_tol = 1e-6;
  double stall_tol = 1e-9;
  int stall_window = 10;
  int max_outer = 5000;
  NlpOptions nlp{};
};

/// Raised when an inner solve returns no feasible iterate; carries the
/// state reached before the failing step.
class StepFailure : public SolverFailure {
 public:
  StepFailure(const std::string& what, OptState state)
      : SolverFailure(what), state_(std::move(state)) {}
  const OptState& state() const { return state_; }

 private:
  OptState state_;
};

// Adds the grid argmax, tagged with the current iteration, unless present.
OptState collect_reference(OptState state, const GridMax& grid_max);
OptState collect_reference(OptState state, const SchurField& field);

OptState step(OptState state, const PairFamily& family, double delta_step = 0.005,
              const NlpOptions& nlp = {});

struct OptimizeResult {
  OptState state;
  bool converged = false;
};

OptimizeResult optimize(OptState state, const PairFamily& family,
                        const MinimaxOptions& options = {});

// Warm start for the next member of a family sweep: keeps the parameters,
// keeps all references when fewer than keep_threshold, otherwise only those
// added during the last `window` iterations (survivors are retagged 0);
// resets counters and sets t to the grid max under `next`.
OptState carryover(OptState state, const PairFamily& next, int keep_threshold = 200,
                   int window = 100);

}  // namespace schurnorm
