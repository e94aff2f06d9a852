#include "passgp/active_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "passgp/errors.hpp"

namespace passgp {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Matrix gather_rows(const Matrix& X, const std::vector<Eigen::Index>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
  return out;
}

Vector gather(const Vector& v, const std::vector<Eigen::Index>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  return out;
}

// Uniform draw of `size` indices, stratified so both labels appear.
std::vector<Eigen::Index> initial_active_set(const Vector& y, int size, std::uint64_t seed) {
  const Eigen::Index n = y.size();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Eigen::Index> chosen(perm.begin(), perm.begin() + size);
  for (double label : {1.0, -1.0}) {
    const bool present = std::any_of(chosen.begin(), chosen.end(), [&](Eigen::Index i) { return y[i] == label; });
    if (present) continue;
    auto it = std::find_if(perm.begin() + size, perm.end(), [&](Eigen::Index i) { return y[i] == label; });
    if (it == perm.end()) throw InvalidArgument("fit: training labels contain a single class");
    // replace a point of the over-represented class
    chosen.back() = *it;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Eigen::Index count_label(const Vector& y, double label) { return (y.array() == label).count(); }

}  // namespace

std::string mode_name(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::Pass: return "pass";
    case SelectionMode::FPass: return "fpass";
    case SelectionMode::Random: return "random";
    case SelectionMode::Full: return "full";
  }
  return "unknown";
}

SelectionMode parse_mode(const std::string& name) {
  if (name == "pass") return SelectionMode::Pass;
  if (name == "fpass") return SelectionMode::FPass;
  if (name == "random") return SelectionMode::Random;
  if (name == "full") return SelectionMode::Full;
  throw InvalidArgument("unknown selection mode '" + name + "'");
}

void PassConfig::validate(Eigen::Index n) const {
  if (n_sub < 1) throw InvalidArgument("n_sub must be >= 1");
  if (n_pass < 1) throw InvalidArgument("n_pass must be >= 1");
  if (hyperopt_every < 1) throw InvalidArgument("hyperopt_every must be >= 1");
  switch (mode) {
    case SelectionMode::Pass:
      if (n_init < 2 || n_init > n) throw InvalidArgument("n_init must be in [2, N]");
      if (!(p_inc > 0.0 && p_inc <= 1.0)) throw InvalidArgument("p_inc must be in (0, 1]");
      if (!(p_del > 0.0 && p_del < 1.0 + 1e-15)) throw InvalidArgument("p_del must be in (0, 1]");
      if (!(p_del > p_inc)) throw InvalidArgument("p_del must exceed p_inc");
      if (n_sub > n) throw InvalidArgument("n_sub exceeds the number of training points");
      break;
    case SelectionMode::FPass:
      if (!(p_exc > 0.0 && p_exc < 1.0)) throw InvalidArgument("p_exc must be in (0, 1)");
      [[fallthrough]];
    case SelectionMode::Random:
      if (m_budget < 2 || m_budget > n) throw InvalidArgument("m_budget must be in [2, N]");
      if (mode == SelectionMode::FPass && exchange_count() < 1)
        throw InvalidArgument("ceil(p_exc * m_budget) must be >= 1");
      if (n_sub > n) throw InvalidArgument("n_sub exceeds the number of training points");
      break;
    case SelectionMode::Full:
      break;
  }
}

int PassConfig::initial_size() const {
  switch (mode) {
    case SelectionMode::Pass: return n_init;
    case SelectionMode::FPass:
    case SelectionMode::Random: return m_budget;
    case SelectionMode::Full: return 0;
  }
  return 0;
}

int PassConfig::min_active() const { return std::max(2, n_init / 10); }

int PassConfig::exchange_count() const {
  return static_cast<int>(std::ceil(p_exc * m_budget - 1e-12));
}

PredictiveResult ActiveSetModel::predict(const Vector& x, double y, bool training_point) const {
  const Vector k_star = kernel.cross(features, x.transpose()).col(0);
  const double k_ss = kernel.eval(x, x, training_point);
  return passgp::predict(state, k_star, k_ss, y);
}

std::vector<PredictiveResult> ActiveSetModel::predict(const Matrix& X, double y, bool training_points) const {
  if (X.cols() != features.cols()) throw InvalidArgument("predict: feature dimension does not match model");
  Vector k_ss = kernel.self_covariance(X);
  if (training_points) k_ss.array() += kernel.jitter();
  return predict_batch(state, kernel.cross(features, X), k_ss, y);
}

ActiveSetModel fit_on_indices(const Matrix& X, const Vector& y, std::vector<Eigen::Index> idx,
                              const KernelSpec& kernel, const EPConfig& ep) {
  std::sort(idx.begin(), idx.end());
  ActiveSetModel m{idx, gather_rows(X, idx), gather(y, idx), kernel, EPState{}, PassConfig{}, {}};
  m.state = ep_fit(kernel.gram(m.features), m.labels, ep);
  return m;
}

std::vector<std::vector<Eigen::Index>> split_subsets(Eigen::Index n, int n_sub, std::uint64_t seed) {
  if (n_sub < 1) throw InvalidArgument("split_subsets: n_sub must be >= 1");
  if (n_sub > n) throw InvalidArgument("split_subsets: more subsets than points");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<Eigen::Index>> parts(static_cast<std::size_t>(n_sub));
  const Eigen::Index base = n / n_sub, extra = n % n_sub;
  auto it = perm.begin();
  for (Eigen::Index j = 0; j < n_sub; ++j) {
    const Eigen::Index size = base + (j < extra ? 1 : 0);
    parts[static_cast<std::size_t>(j)].assign(it, it + size);
    it += size;
  }
  return parts;
}

std::vector<RuleDecision> removal_rule(const EPState& state, double p_del, Eigen::Index min_active) {
  std::vector<RuleDecision> out;
  for (Eigen::Index n = 0; n < state.size(); ++n) {
    const double p = cavity_predictive(state, n, state.labels[n]);
    if (p > p_del) out.push_back({n, p});
  }
  std::stable_sort(out.begin(), out.end(), [](const RuleDecision& a, const RuleDecision& b) { return a.prob > b.prob; });
  const Eigen::Index room = std::max<Eigen::Index>(0, state.size() - min_active);
  if (static_cast<Eigen::Index>(out.size()) > room) out.resize(static_cast<std::size_t>(room));
  return out;
}

namespace {

std::vector<RuleDecision> score_candidates(const ActiveSetModel& model, const Matrix& X, const Vector& y,
                                           const std::vector<Eigen::Index>& subset) {
  std::vector<Eigen::Index> cand;
  for (Eigen::Index i : subset)
    if (!std::binary_search(model.active_idx.begin(), model.active_idx.end(), i)) cand.push_back(i);
  std::vector<RuleDecision> out;
  if (cand.empty()) return out;
  const Matrix Xc = gather_rows(X, cand);
  // probability of +1 for every candidate, flipped per label below
  const auto preds = model.predict(Xc, 1.0, true);
  for (std::size_t j = 0; j < cand.size(); ++j) {
    const double p_pos = preds[j].prob;
    out.push_back({cand[j], y[cand[j]] > 0 ? p_pos : 1.0 - p_pos});
  }
  return out;
}

}  // namespace

std::vector<RuleDecision> inclusion_rule(const ActiveSetModel& model, const Matrix& X, const Vector& y,
                                         const std::vector<Eigen::Index>& subset, double p_inc) {
  std::vector<RuleDecision> out;
  for (const RuleDecision& d : score_candidates(model, X, y, subset))
    if (d.prob < p_inc) out.push_back(d);
  return out;
}

ExchangePlan fpass_exchange(const ActiveSetModel& model, const Matrix& X, const Vector& y,
                            const std::vector<Eigen::Index>& subset, double p_exc) {
  const auto want = static_cast<std::size_t>(std::ceil(p_exc * static_cast<double>(model.size()) - 1e-12));
  ExchangePlan plan;
  std::vector<RuleDecision> active;
  for (Eigen::Index n = 0; n < model.size(); ++n)
    active.push_back({n, cavity_predictive(model.state, n, model.labels[n])});
  std::stable_sort(active.begin(), active.end(), [](const RuleDecision& a, const RuleDecision& b) { return a.prob > b.prob; });
  // keep at least one point of each class
  Eigen::Index pos_left = count_label(model.labels, 1.0), neg_left = count_label(model.labels, -1.0);
  for (const RuleDecision& d : active) {
    if (plan.remove.size() == want) break;
    Eigen::Index& left = model.labels[d.index] > 0 ? pos_left : neg_left;
    if (left <= 1) continue;
    --left;
    plan.remove.push_back(d);
  }
  auto cands = score_candidates(model, X, y, subset);
  std::stable_sort(cands.begin(), cands.end(), [](const RuleDecision& a, const RuleDecision& b) {
    return a.prob < b.prob || (a.prob == b.prob && a.index < b.index);
  });
  const std::size_t count = std::min({want, plan.remove.size(), cands.size()});
  plan.remove.resize(count);
  plan.add.assign(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(count));
  return plan;
}

ActiveSetModel fit(const Matrix& X, const Vector& y, const KernelSpec& kernel0, const PassConfig& config) {
  const Eigen::Index n = X.rows();
  if (y.size() != n) throw InvalidArgument("fit: label count does not match features");
  for (Eigen::Index i = 0; i < n; ++i)
    if (y[i] != 1.0 && y[i] != -1.0) throw InvalidArgument("fit: labels must be +1 or -1");
  if (count_label(y, 1.0) == 0 || count_label(y, -1.0) == 0)
    throw InvalidArgument("fit: both classes must be present");
  config.validate(n);

  std::vector<Eigen::Index> active;
  if (config.mode == SelectionMode::Full) {
    active.resize(static_cast<std::size_t>(n));
    std::iota(active.begin(), active.end(), Eigen::Index{0});
  } else {
    active = initial_active_set(y, config.initial_size(), config.seed);
  }

  KernelSpec kernel = kernel0;
  std::vector<IterationRecord> history;
  auto refit = [&](bool tune, bool& warned) {
    warned = false;
    const Matrix XA = gather_rows(X, active);
    const Vector yA = gather(y, active);
    if (tune) {
      const OptimizeResult r = optimize(XA, yA, kernel, config.optimizer, config.ep);
      kernel = r.kernel;
      warned = r.warning;
    }
    ActiveSetModel m = fit_on_indices(X, y, active, kernel, config.ep);
    return m;
  };

  if (config.mode == SelectionMode::Random || config.mode == SelectionMode::Full) {
    bool warned = false;
    ActiveSetModel m = refit(!config.fixed_theta, warned);
    history.push_back({0, 0, m.size(), 0, 0, m.state.log_z_ep, kernel.log_theta(), warned, {}, {}});
    m.config = config;
    m.history = std::move(history);
    return m;
  }

  int iteration = 0;
  for (int pass = 0; pass < config.n_pass; ++pass) {
    const auto subsets = split_subsets(n, config.n_sub, splitmix(config.seed ^ splitmix(static_cast<std::uint64_t>(pass) + 1)));
    for (int j = 0; j < config.n_sub; ++j, ++iteration) {
      const bool tune = !config.fixed_theta && iteration % config.hyperopt_every == 0;
      bool warned = false;
      ActiveSetModel m = [&] {
        try {
          return refit(tune, warned);
        } catch (const NumericalError& e) {
          throw NumericalError("fit: EP failed at pass " + std::to_string(pass) + ", subset " +
                               std::to_string(j) + ": " + e.what());
        }
      }();
      IterationRecord rec{pass, j, 0, 0, 0, m.state.log_z_ep, kernel.log_theta(), warned, {}, {}};
      const auto& subset = subsets[static_cast<std::size_t>(j)];

      std::vector<Eigen::Index> remove_pos;
      if (config.mode == SelectionMode::Pass) {
        auto removed = removal_rule(m.state, config.p_del, config.min_active());
        Eigen::Index pos_left = count_label(m.labels, 1.0), neg_left = count_label(m.labels, -1.0);
        for (const RuleDecision& d : removed) {
          Eigen::Index& left = m.labels[d.index] > 0 ? pos_left : neg_left;
          if (left <= 1) continue;
          --left;
          remove_pos.push_back(d.index);
          rec.removed.push_back({m.active_idx[static_cast<std::size_t>(d.index)], d.prob});
        }
        rec.added = inclusion_rule(m, X, y, subset, config.p_inc);
      } else {
        ExchangePlan plan = fpass_exchange(m, X, y, subset, config.p_exc);
        for (const RuleDecision& d : plan.remove) {
          remove_pos.push_back(d.index);
          rec.removed.push_back({m.active_idx[static_cast<std::size_t>(d.index)], d.prob});
        }
        rec.added = std::move(plan.add);
      }

      std::set<Eigen::Index> drop;
      for (Eigen::Index p : remove_pos) drop.insert(m.active_idx[static_cast<std::size_t>(p)]);
      std::vector<Eigen::Index> next;
      for (Eigen::Index i : active)
        if (!drop.count(i)) next.push_back(i);
      for (const RuleDecision& d : rec.added) next.push_back(d.index);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      active = std::move(next);

      rec.n_add = static_cast<Eigen::Index>(rec.added.size());
      rec.n_del = static_cast<Eigen::Index>(rec.removed.size());
      rec.active_size = static_cast<Eigen::Index>(active.size());
      history.push_back(std::move(rec));
    }
  }

  // final posterior on the updated active set with the last theta
  ActiveSetModel m = fit_on_indices(X, y, active, kernel, config.ep);
  m.config = config;
  m.history = std::move(history);
  return m;
}

void write_history(std::ostream& out, const std::vector<IterationRecord>& history) {
  out << "pass\tsubset\tactive_size\tn_add\tn_del\tlog_z_ep\tlog_theta\n";
  for (const IterationRecord& r : history) {
    out << r.pass << '\t' << r.subset << '\t' << r.active_size << '\t' << r.n_add << '\t' << r.n_del << '\t'
        << r.log_z_ep << '\t';
    for (Eigen::Index k = 0; k < r.log_theta.size(); ++k) out << (k ? "," : "") << r.log_theta[k];
    out << '\n';
  }
}

}  // namespace passgp
