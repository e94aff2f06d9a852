#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "passgp/kernels.hpp"

namespace passgp {

/// Affine feature map x -> lo + (x - in_min) * (hi - lo) / (in_max - in_min),
/// shared by all features (digits are scaled globally, not per pixel).
struct Scaling {
  double in_min = 0.0;
  double in_max = 1.0;
  double lo = -1.0;
  double hi = 1.0;

  double apply(double x) const;
  double invert(double x) const;
};

struct Dataset {
  Matrix features;       ///< N x D
  Eigen::VectorXi labels;  ///< class ids, or +/-1 when binary
  std::string name;
  bool binary = false;
  std::optional<Scaling> scaling;
  int image_height = 0;  ///< known for IDX input, 0 otherwise
  int image_width = 0;

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index d() const { return features.cols(); }
  /// Binary labels as a real vector; throws unless binary.
  Vector signed_labels() const;
};

enum class DataFormat { Idx, SvmLight, Csv, UspsText };

DataFormat parse_format(const std::string& name);

/// IDX image file (magic 0x00000803) plus IDX label file (0x00000801).
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

/// "label idx:val ..." lines with 1-based indices; d = 0 infers the width
/// from the largest index seen.
Dataset load_svmlight(const std::string& path, Eigen::Index d = 0);
Dataset read_svmlight(std::istream& in, Eigen::Index d = 0, const std::string& name = "svmlight");
void write_svmlight(std::ostream& out, const Dataset& ds);

/// Comma or whitespace separated rows, label in the last column. Blank lines
/// and lines starting with '#' are skipped.
Dataset load_csv(const std::string& path);
Dataset read_csv(std::istream& in, bool label_first = false, const std::string& name = "csv");
void write_csv(std::ostream& out, const Dataset& ds);

/// USPS-style whitespace text: label first, then the pixel values.
Dataset load_usps_text(const std::string& path);

/// Dispatches on format; labels_path only used for IDX.
Dataset load(const std::string& path, DataFormat format, const std::string& labels_path = "",
             Eigen::Index svmlight_dim = 0);

/// Global min -> lo, max -> hi. Constant data maps to the midpoint.
Dataset scale_to_range(const Dataset& ds, double lo, double hi);
Dataset apply_scaling(const Dataset& ds, const Scaling& s);

/// +1 where label == target_class, -1 elsewhere.
Dataset one_vs_rest(const Dataset& ds, int target_class);

/// Labels mapped to +/-1: values > 0 become +1, the rest -1 (binary files
/// commonly use 0/1 or -1/+1).
Dataset as_binary(const Dataset& ds);

enum class ShiftSet { Four, Eight };

/// Appends one-pixel translated copies of every image, originals first, then
/// one block per direction. Vacated pixels take the dataset minimum.
Dataset augment_translations(const Dataset& ds, int height, int width, ShiftSet shifts);

}  // namespace passgp
