#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace passgp {

struct DensityHistogram {
  int n_bins = 50;
  std::vector<long> correct;    ///< counts per bin of [0, 1]
  std::vector<long> incorrect;
};

struct EvalReport {
  double error_rate = 0.0;
  double brier = 0.0;
  Eigen::Index n_test = 0;
  std::optional<std::vector<double>> per_class_errors;  ///< error of each one-vs-rest task at p = 0.5
  DensityHistogram density_histogram;
};

/// Fraction of mismatched labels.
double error_rate(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth);

/// Mean of (1 - p_i)^2 where p_i is the probability given to the observed label.
double brier_score(const Eigen::VectorXd& probs_of_true_label);

/// Argmax over rows of a classes x queries matrix of positive-class
/// probabilities; ties go to the lowest class index.
Eigen::VectorXi multiclass_combine(const Eigen::MatrixXd& per_class_probs);

/// Fixed-width bins on [0, 1], split by correctness. p == 1 falls in the last bin.
DensityHistogram density_histogram(const Eigen::VectorXd& probs_of_true_label,
                                   const std::vector<bool>& correct_mask, int n_bins = 50);

/// Binary report from probabilities of +1 and the true +/-1 labels.
EvalReport evaluate_binary(const Eigen::VectorXd& prob_positive, const Eigen::VectorXi& truth,
                           int n_bins = 50);

/// Multiclass report. Brier and the histogram use each query's one-vs-rest
/// probability of its true class.
EvalReport evaluate_multiclass(const Eigen::MatrixXd& per_class_probs, const Eigen::VectorXi& truth,
                               int n_bins = 50);

/// Tab-separated histogram table followed by a key=value summary block.
void write_report(std::ostream& out, const EvalReport& report);

}  // namespace passgp
