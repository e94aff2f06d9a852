#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "passgp/ep.hpp"
#include "passgp/hyperopt.hpp"
#include "passgp/kernels.hpp"

namespace passgp {

enum class SelectionMode {
  Pass,    ///< probability thresholds p_inc / p_del decide inclusions and deletions
  FPass,   ///< fixed budget, exchange ceil(p_exc * m_budget) points per update
  Random,  ///< m_budget points drawn once, no updates
  Full,    ///< every training point active
};

std::string mode_name(SelectionMode mode);
SelectionMode parse_mode(const std::string& name);

struct PassConfig {
  int n_init = 300;
  int n_sub = 10;
  int n_pass = 2;
  SelectionMode mode = SelectionMode::Pass;
  double p_inc = 0.6;
  double p_del = 0.99;
  int m_budget = 300;
  double p_exc = 0.02;
  int hyperopt_every = 1;   ///< optimize theta on every k-th subset iteration
  bool fixed_theta = false; ///< never optimize theta
  std::uint64_t seed = 0;
  OptimizerConfig optimizer;
  EPConfig ep;

  /// Throws InvalidArgument when the configuration cannot run on n points.
  void validate(Eigen::Index n) const;
  int initial_size() const;
  int min_active() const;
  int exchange_count() const;
};

/// Outcome of a selection rule for one training point (global index).
struct RuleDecision {
  Eigen::Index index;
  double prob;
};

struct IterationRecord {
  int pass;
  int subset;
  Eigen::Index active_size;  ///< |A| after the update
  Eigen::Index n_add;
  Eigen::Index n_del;
  double log_z_ep;           ///< of the EP fit the rules were evaluated against
  Vector log_theta;
  bool hyperopt_warning;
  std::vector<RuleDecision> removed;
  std::vector<RuleDecision> added;
};

struct ActiveSetModel {
  std::vector<Eigen::Index> active_idx;  ///< ascending training indices
  Matrix features;                       ///< rows of X for active_idx
  Vector labels;
  KernelSpec kernel;
  EPState state;
  PassConfig config;
  std::vector<IterationRecord> history;

  Eigen::Index size() const { return static_cast<Eigen::Index>(active_idx.size()); }

  /// Predictive distribution at x for label y. Training points get the jitter
  /// term in their self-covariance; test queries do not.
  PredictiveResult predict(const Vector& x, double y, bool training_point = false) const;
  std::vector<PredictiveResult> predict(const Matrix& X, double y = 1.0,
                                        bool training_points = false) const;
};

/// Builds a model by fitting EP on the given training rows with a fixed kernel.
ActiveSetModel fit_on_indices(const Matrix& X, const Vector& y, std::vector<Eigen::Index> idx,
                              const KernelSpec& kernel, const EPConfig& ep);

/// Shuffled partition of {0..n-1} into n_sub parts whose sizes differ by at most one.
std::vector<std::vector<Eigen::Index>> split_subsets(Eigen::Index n, int n_sub, std::uint64_t seed);

/// Active positions (into the state) whose cavity probability exceeds p_del,
/// most confident first, capped so that at least min_active points remain.
/// RuleDecision::index is the position within the active set.
std::vector<RuleDecision> removal_rule(const EPState& state, double p_del, Eigen::Index min_active = 0);

/// Subset points not already active whose predictive probability of their own
/// label is below p_inc.
std::vector<RuleDecision> inclusion_rule(const ActiveSetModel& model, const Matrix& X,
                                         const Vector& y, const std::vector<Eigen::Index>& subset,
                                         double p_inc);

struct ExchangePlan {
  std::vector<RuleDecision> remove;  ///< positions within the active set
  std::vector<RuleDecision> add;     ///< global training indices
};

/// fPASS exchange: the ceil(p_exc * |A|) most confident active points (by cavity
/// probability) swap with the least confident inactive subset points. Ties go
/// to the lower index. Shrinks when fewer candidates exist.
ExchangePlan fpass_exchange(const ActiveSetModel& model, const Matrix& X, const Vector& y,
                            const std::vector<Eigen::Index>& subset, double p_exc);

/// Alternating active set selection and hyperparameter optimization.
ActiveSetModel fit(const Matrix& X, const Vector& y, const KernelSpec& kernel0, const PassConfig& config);

/// One tab-separated line per subset iteration, with a header row.
void write_history(std::ostream& out, const std::vector<IterationRecord>& history);

}  // namespace passgp
