#include "passgp/data_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "passgp/errors.hpp"

namespace passgp {
namespace {

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

std::uint32_t read_be32(std::istream& in, const std::string& path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw ParseError("truncated IDX header in '" + path + "'");
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

int parse_label(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size() || v != std::floor(v)) throw ParseError("non-integer label '" + tok + "'", line_no);
    return static_cast<int>(v);
  } catch (const std::logic_error&) {
    throw ParseError("bad label '" + tok + "'", line_no);
  }
}

double parse_value(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw ParseError("bad number '" + tok + "'", line_no);
    if (!std::isfinite(v)) throw ParseError("non-finite feature value", line_no);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad number '" + tok + "'", line_no);
  }
}

Dataset from_rows(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                  Eigen::Index d, const std::string& name) {
  Dataset ds;
  ds.name = name;
  ds.features = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), d);
  ds.labels.resize(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    ds.labels[static_cast<Eigen::Index>(i)] = labels[i];
  }
  ds.binary = !labels.empty() && std::all_of(labels.begin(), labels.end(), [](int l) { return l == 1 || l == -1; });
  return ds;
}

}  // namespace

double Scaling::apply(double x) const {
  if (in_max == in_min) return 0.5 * (lo + hi);
  return lo + (x - in_min) * (hi - lo) / (in_max - in_min);
}

double Scaling::invert(double x) const {
  if (in_max == in_min) return in_min;
  return in_min + (x - lo) * (in_max - in_min) / (hi - lo);
}

Vector Dataset::signed_labels() const {
  if (!binary) throw InvalidArgument("dataset '" + name + "' is not binary");
  return labels.cast<double>();
}

DataFormat parse_format(const std::string& name) {
  if (name == "idx") return DataFormat::Idx;
  if (name == "svmlight") return DataFormat::SvmLight;
  if (name == "csv") return DataFormat::Csv;
  if (name == "usps") return DataFormat::UspsText;
  throw InvalidArgument("unknown data format '" + name + "'");
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
  auto img = open_in(images_path, std::ios::binary);
  if (read_be32(img, images_path) != 0x00000803u) throw ParseError("bad IDX image magic in '" + images_path + "'");
  const std::uint32_t n = read_be32(img, images_path);
  const std::uint32_t rows = read_be32(img, images_path);
  const std::uint32_t cols = read_be32(img, images_path);
  auto lab = open_in(labels_path, std::ios::binary);
  if (read_be32(lab, labels_path) != 0x00000801u) throw ParseError("bad IDX label magic in '" + labels_path + "'");
  if (read_be32(lab, labels_path) != n) throw ParseError("IDX image and label counts differ");

  Dataset ds;
  ds.name = images_path;
  ds.image_height = static_cast<int>(rows);
  ds.image_width = static_cast<int>(cols);
  const Eigen::Index d = static_cast<Eigen::Index>(rows) * cols;
  ds.features.resize(n, d);
  std::vector<unsigned char> buf(static_cast<std::size_t>(d));
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!img.read(reinterpret_cast<char*>(buf.data()), d)) throw ParseError("truncated IDX image data", i + 1);
    for (Eigen::Index j = 0; j < d; ++j) ds.features(i, j) = buf[static_cast<std::size_t>(j)];
  }
  std::vector<unsigned char> lbuf(n);
  if (n && !lab.read(reinterpret_cast<char*>(lbuf.data()), n)) throw ParseError("truncated IDX label data");
  ds.labels.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) ds.labels[i] = lbuf[i];
  return ds;
}

Dataset read_svmlight(std::istream& in, Eigen::Index d, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  Eigen::Index width = d;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (skip_line(line)) continue;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    labels.push_back(parse_label(tok, line_no));
    std::vector<double> row;
    Eigen::Index last = 0;
    while (ss >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParseError("expected index:value, got '" + tok + "'", line_no);
      long idx = 0;
      try {
        idx = std::stol(tok.substr(0, colon));
      } catch (const std::logic_error&) {
        throw ParseError("bad feature index in '" + tok + "'", line_no);
      }
      if (idx < 1 || (d > 0 && idx > d)) throw ParseError("feature index out of range: " + std::to_string(idx), line_no);
      if (idx <= last) throw ParseError("feature indices must increase", line_no);
      last = idx;
      if (static_cast<Eigen::Index>(row.size()) < idx) row.resize(static_cast<std::size_t>(idx), 0.0);
      row[static_cast<std::size_t>(idx - 1)] = parse_value(tok.substr(colon + 1), line_no);
    }
    width = std::max(width, static_cast<Eigen::Index>(row.size()));
    rows.push_back(std::move(row));
  }
  return from_rows(rows, labels, width, name);
}

Dataset load_svmlight(const std::string& path, Eigen::Index d) {
  auto in = open_in(path);
  return read_svmlight(in, d, path);
}

void write_svmlight(std::ostream& out, const Dataset& ds) {
  out.precision(17);
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    out << (ds.binary && ds.labels[i] > 0 ? "+" : "") << ds.labels[i];
    for (Eigen::Index j = 0; j < ds.d(); ++j)
      if (ds.features(i, j) != 0.0) out << ' ' << j + 1 << ':' << ds.features(i, j);
    out << '\n';
  }
}

Dataset read_csv(std::istream& in, bool label_first, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    if (toks.size() < 2) throw ParseError("row needs at least one feature and a label", line_no);
    if (width == 0) width = toks.size();
    if (toks.size() != width) throw ParseError("ragged row", line_no);
    const std::size_t label_pos = label_first ? 0 : toks.size() - 1;
    std::vector<double> row;
    for (std::size_t j = 0; j < toks.size(); ++j)
      if (j != label_pos) row.push_back(parse_value(toks[j], line_no));
    labels.push_back(parse_label(toks[label_pos], line_no));
    rows.push_back(std::move(row));
  }
  return from_rows(rows, labels, width ? static_cast<Eigen::Index>(width - 1) : 0, name);
}

Dataset load_csv(const std::string& path) {
  auto in = open_in(path);
  return read_csv(in, false, path);
}

void write_csv(std::ostream& out, const Dataset& ds) {
  out.precision(17);
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (Eigen::Index j = 0; j < ds.d(); ++j) out << ds.features(i, j) << ',';
    out << ds.labels[i] << '\n';
  }
}

Dataset load_usps_text(const std::string& path) {
  auto in = open_in(path);
  Dataset ds = read_csv(in, true, path);
  if (ds.d() == 256) ds.image_height = ds.image_width = 16;
  return ds;
}

Dataset load(const std::string& path, DataFormat format, const std::string& labels_path,
             Eigen::Index svmlight_dim) {
  switch (format) {
    case DataFormat::Idx:
      if (labels_path.empty()) throw InvalidArgument("IDX input needs a labels file");
      return load_idx(path, labels_path);
    case DataFormat::SvmLight: return load_svmlight(path, svmlight_dim);
    case DataFormat::Csv: return load_csv(path);
    case DataFormat::UspsText: return load_usps_text(path);
  }
  throw InvalidArgument("unknown data format");
}

Dataset apply_scaling(const Dataset& ds, const Scaling& s) {
  Dataset out = ds;
  out.features = ds.features.unaryExpr([&](double x) { return s.apply(x); });
  out.scaling = s;
  return out;
}

Dataset scale_to_range(const Dataset& ds, double lo, double hi) {
  if (ds.n() == 0 || ds.d() == 0) throw InvalidArgument("scale_to_range: empty dataset");
  return apply_scaling(ds, Scaling{ds.features.minCoeff(), ds.features.maxCoeff(), lo, hi});
}

Dataset one_vs_rest(const Dataset& ds, int target_class) {
  if ((ds.labels.array() == target_class).count() == 0)
    throw InvalidArgument("one_vs_rest: class " + std::to_string(target_class) + " absent");
  Dataset out = ds;
  out.labels = (ds.labels.array() == target_class).select(Eigen::VectorXi::Ones(ds.n()), -1);
  out.binary = true;
  return out;
}

Dataset as_binary(const Dataset& ds) {
  Dataset out = ds;
  out.labels = (ds.labels.array() > 0).select(Eigen::VectorXi::Ones(ds.n()), -1);
  out.binary = true;
  return out;
}

Dataset augment_translations(const Dataset& ds, int height, int width, ShiftSet shifts) {
  if (static_cast<Eigen::Index>(height) * width != ds.d())
    throw InvalidArgument("augment_translations: image shape does not match feature count");
  std::vector<std::pair<int, int>> moves = {{0, -1}, {-1, 0}, {0, 1}, {1, 0}};  // left, up, right, down
  if (shifts == ShiftSet::Eight) moves.insert(moves.end(), {{-1, -1}, {-1, 1}, {1, 1}, {1, -1}});
  const double fill = ds.n() ? ds.features.minCoeff() : 0.0;
  const Eigen::Index n = ds.n();
  Dataset out = ds;
  out.features.resize(n * static_cast<Eigen::Index>(1 + moves.size()), ds.d());
  out.labels.resize(out.features.rows());
  out.features.topRows(n) = ds.features;
  out.labels.head(n) = ds.labels;
  for (std::size_t m = 0; m < moves.size(); ++m) {
    const auto [dr, dc] = moves[m];
    const Eigen::Index base = n * static_cast<Eigen::Index>(m + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
          const int sr = r - dr, sc = c - dc;
          const bool inside = sr >= 0 && sr < height && sc >= 0 && sc < width;
          out.features(base + i, r * width + c) = inside ? ds.features(i, sr * width + sc) : fill;
        }
      out.labels[base + i] = ds.labels[i];
    }
  }
  out.image_height = height;
  out.image_width = width;
  return out;
}

}  // namespace passgp
