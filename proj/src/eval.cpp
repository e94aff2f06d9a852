#include "passgp/eval.hpp"

#include <algorithm>
#include <ostream>

#include "passgp/errors.hpp"

namespace passgp {

double error_rate(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth) {
  if (predicted.size() != truth.size()) throw InvalidArgument("error_rate: length mismatch");
  if (truth.size() == 0) throw InvalidArgument("error_rate: empty input");
  return static_cast<double>((predicted.array() != truth.array()).count()) / static_cast<double>(truth.size());
}

double brier_score(const Eigen::VectorXd& p) {
  if (p.size() == 0) throw InvalidArgument("brier_score: empty input");
  if ((p.array() < 0.0).any() || (p.array() > 1.0).any() || !p.allFinite())
    throw InvalidArgument("brier_score: probabilities must lie in [0, 1]");
  return (1.0 - p.array()).square().mean();
}

Eigen::VectorXi multiclass_combine(const Eigen::MatrixXd& probs) {
  Eigen::VectorXi out(probs.cols());
  for (Eigen::Index j = 0; j < probs.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < probs.rows(); ++c)
      if (probs(c, j) > probs(best, j)) best = c;
    out[j] = static_cast<int>(best);
  }
  return out;
}

DensityHistogram density_histogram(const Eigen::VectorXd& p, const std::vector<bool>& correct, int n_bins) {
  if (n_bins < 1) throw InvalidArgument("density_histogram: n_bins must be >= 1");
  if (static_cast<std::size_t>(p.size()) != correct.size())
    throw InvalidArgument("density_histogram: length mismatch");
  DensityHistogram h;
  h.n_bins = n_bins;
  h.correct.assign(static_cast<std::size_t>(n_bins), 0);
  h.incorrect.assign(static_cast<std::size_t>(n_bins), 0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const int bin = std::clamp(static_cast<int>(p[i] * n_bins), 0, n_bins - 1);
    (correct[static_cast<std::size_t>(i)] ? h.correct : h.incorrect)[static_cast<std::size_t>(bin)]++;
  }
  return h;
}

EvalReport evaluate_binary(const Eigen::VectorXd& prob_positive, const Eigen::VectorXi& truth, int n_bins) {
  if (prob_positive.size() != truth.size()) throw InvalidArgument("evaluate: length mismatch");
  EvalReport r;
  r.n_test = truth.size();
  Eigen::VectorXi pred(truth.size());
  Eigen::VectorXd p_true(truth.size());
  std::vector<bool> ok(static_cast<std::size_t>(truth.size()));
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    pred[i] = prob_positive[i] > 0.5 ? 1 : -1;
    p_true[i] = truth[i] > 0 ? prob_positive[i] : 1.0 - prob_positive[i];
    ok[static_cast<std::size_t>(i)] = pred[i] == truth[i];
  }
  r.error_rate = error_rate(pred, truth);
  r.brier = brier_score(p_true);
  r.density_histogram = density_histogram(p_true, ok, n_bins);
  return r;
}

EvalReport evaluate_multiclass(const Eigen::MatrixXd& probs, const Eigen::VectorXi& truth, int n_bins) {
  if (probs.cols() != truth.size()) throw InvalidArgument("evaluate: length mismatch");
  if (probs.rows() < 2) throw InvalidArgument("evaluate: need at least two classes");
  EvalReport r;
  r.n_test = truth.size();
  const Eigen::VectorXi pred = multiclass_combine(probs);
  r.error_rate = error_rate(pred, truth);
  Eigen::VectorXd p_true(truth.size());
  std::vector<bool> ok(static_cast<std::size_t>(truth.size()));
  std::vector<double> class_err(static_cast<std::size_t>(probs.rows()), 0.0);
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= probs.rows()) throw InvalidArgument("evaluate: label outside class range");
    p_true[i] = probs(truth[i], i);
    ok[static_cast<std::size_t>(i)] = pred[i] == truth[i];
    // per-class one-vs-rest error of each binary task
    for (Eigen::Index c = 0; c < probs.rows(); ++c) {
      const bool says_pos = probs(c, i) > 0.5;
      if (says_pos != (truth[i] == c)) class_err[static_cast<std::size_t>(c)] += 1.0;
    }
  }
  for (double& e : class_err) e /= static_cast<double>(truth.size());
  r.per_class_errors = class_err;
  r.brier = brier_score(p_true);
  r.density_histogram = density_histogram(p_true, ok, n_bins);
  return r;
}

void write_report(std::ostream& out, const EvalReport& r) {
  const auto& h = r.density_histogram;
  out << "bin_lo\tbin_hi\tcorrect\tincorrect\n";
  for (int b = 0; b < h.n_bins; ++b)
    out << static_cast<double>(b) / h.n_bins << '\t' << static_cast<double>(b + 1) / h.n_bins << '\t'
        << h.correct[static_cast<std::size_t>(b)] << '\t' << h.incorrect[static_cast<std::size_t>(b)] << '\n';
  out << "\n[report]\n";
  out << "n_test=" << r.n_test << '\n';
  out << "error_rate=" << r.error_rate << '\n';
  out << "brier=" << r.brier << '\n';
  if (r.per_class_errors) {
    for (std::size_t c = 0; c < r.per_class_errors->size(); ++c)
      out << "class_error." << c << '=' << (*r.per_class_errors)[c] << '\n';
  }
}

}  // namespace passgp
