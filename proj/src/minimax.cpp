#include "schurnorm/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace schurnorm {

namespace {

std::vector<IndexPair> pairs_of(const OptState& state) {
  std::vector<IndexPair> out;
  out.reserve(state.refs.size());
  for (const ReferencePoint& r : state.refs) out.push_back({r.i, r.j});
  return out;
}

double reference_max(const OptState& state, const PairFamily& family) {
  if (state.refs.empty()) return -std::numeric_limits<double>::infinity();
  const std::vector<IndexPair> pairs = pairs_of(state);
  return family.values(state.params, pairs).maxCoeff();
}

// t can rise when a new reference enters, so a stall is measured by the
// spread of t over the window rather than by its signed decrease.
bool stalled(const OptState& state, const MinimaxOptions& opt) {
  const auto n = state.history.size();
  const auto w = static_cast<std::size_t>(opt.stall_window);
  if (n <= w) return false;
  double lo = state.history.back().t, hi = lo;
  for (std::size_t k = n - 1 - w; k < n; ++k) {
    lo = std::min(lo, state.history[k].t);
    hi = std::max(hi, state.history[k].t);
  }
  return hi - lo < opt.stall_tol;
}

}  // namespace

Eigen::VectorXd PairFamily::values(const Eigen::VectorXd& x,
                                   std::span<const IndexPair> pairs) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(pairs.size()));
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(pairs.size()), num_params());
  values_and_jacobian(x, pairs, v, jac);
  return v;
}

bool OptState::has_reference(Eigen::Index i, Eigen::Index j) const {
  return std::any_of(refs.begin(), refs.end(),
                     [&](const ReferencePoint& r) { return r.i == i && r.j == j; });
}

OptState collect_reference(OptState state, const GridMax& grid_max) {
  if (!state.has_reference(grid_max.arg.i, grid_max.arg.j)) {
    state.refs.push_back({grid_max.arg.i, grid_max.arg.j, state.iteration});
  }
  return state;
}

OptState collect_reference(OptState state, const SchurField& field) {
  GridMax gm;
  gm.value = field.kappa_x() * field.kappa_y();
  gm.arg = gm.value > 0.0 ? IndexPair{field.argmax_x(), field.argmax_y()} : IndexPair{0, 0};
  return collect_reference(std::move(state), gm);
}

OptState step(OptState state, const PairFamily& family, double delta_step,
              const NlpOptions& nlp) {
  if (state.refs.empty()) {
    throw DomainError("minimax step: reference set is empty");
  }
  const Eigen::Index n = family.num_params();
  if (state.params.size() != n) {
    throw DimensionMismatch("minimax step: parameter vector does not match family");
  }
  const std::vector<IndexPair> pairs = pairs_of(state);
  const Eigen::Index nref = static_cast<Eigen::Index>(pairs.size());

  // Feasible start: t at least the reference maximum.
  double t_prev = reference_max(state, family);
  if (std::isfinite(state.t)) t_prev = std::max(t_prev, state.t);
  const double t_floor = t_prev - delta_step;

  NlpProblem pb;
  pb.n = n + 1;
  pb.start.resize(n + 1);
  pb.start << state.params, t_prev;
  pb.objective = [n](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    grad.setZero();
    grad[n] = 1.0;
    return z[n];
  };
  pb.num_constraints = nref + 1;
  pb.constraints = [&family, &pairs, n, nref, t_floor](const Eigen::VectorXd& z,
                                                       Eigen::VectorXd& g,
                                                       Eigen::MatrixXd& jac) {
    Eigen::VectorXd vals(nref);
    Eigen::MatrixXd fjac(nref, n);
    family.values_and_jacobian(z.head(n), pairs, vals, fjac);
    g.head(nref) = vals.array() - z[n];
    jac.topLeftCorner(nref, n) = fjac;
    jac.col(n).head(nref).setConstant(-1.0);
    g[nref] = t_floor - z[n];
    jac.row(nref).setZero();
    jac(nref, n) = -1.0;
  };

  const NlpResult res = solve(pb, nlp);
  const double t_new = res.z[n];
  if (!(res.max_violation <= nlp.feas_tol) || !(t_new <= t_prev + nlp.feas_tol)) {
    std::ostringstream msg;
    msg << "minimax step " << state.iteration << ": inner NLP ended with status "
        << to_string(res.status) << ", constraint violation " << res.max_violation;
    throw StepFailure(msg.str(), std::move(state));
  }

  state.params = res.z.head(n);
  state.t = t_new;
  state.iteration += 1;
  HistoryEntry h;
  h.iteration = state.iteration;
  h.t = t_new;
  h.refs = state.refs.size();
  h.grid_max = family.grid_max(state.params).value;
  h.inexact = res.status != NlpStatus::Converged;
  state.history.push_back(h);
  return state;
}

OptimizeResult optimize(OptState state, const PairFamily& family,
                        const MinimaxOptions& opt) {
  if (state.params.size() != family.num_params()) {
    throw DimensionMismatch("optimize: parameter vector does not match family");
  }
  while (true) {
    const GridMax gm = family.grid_max(state.params);
    if (!std::isfinite(state.t)) state.t = gm.value;

    if (!state.refs.empty()) {
      const double ref_max = reference_max(state, family);
      const bool gap_ok = gm.value <= ref_max + opt.gap_tol * (1.0 + std::abs(state.t));
      if (gap_ok && stalled(state, opt)) return {std::move(state), true};
    }
    if (state.iteration >= opt.max_outer) return {std::move(state), false};

    state = collect_reference(std::move(state), gm);
    state.t = gm.value;
    state = step(std::move(state), family, opt.delta_step, opt.nlp);
  }
}

OptState carryover(OptState state, const PairFamily& next, int keep_threshold,
                   int window) {
  if (static_cast<int>(state.refs.size()) >= keep_threshold) {
    const int cutoff = state.iteration - window;
    std::erase_if(state.refs, [cutoff](const ReferencePoint& r) { return r.added_at <= cutoff; });
  }
  for (ReferencePoint& r : state.refs) r.added_at = 0;
  state.iteration = 0;
  state.history.clear();
  state.t = next.grid_max(state.params).value;
  return state;
}

}  // namespace schurnorm
