#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "passgp/active_set.hpp"

namespace passgp {

inline constexpr int kModelFormatVersion = 1;

/// A trained model plus free-form metadata (config echo, target class, ...).
///
/// On disk: a text header of key=value lines opened by "passgp-model <version>"
/// and closed by "end_header", then little-endian blocks: active indices
/// (int64), active features (float64, row-major), labels, site precisions and
/// site natural means (float64). The header carries a CRC-32 of the blocks.
struct ModelFile {
  ActiveSetModel model;
  std::map<std::string, std::string> meta;
};

void write_model(std::ostream& out, const ModelFile& file);
ModelFile read_model(std::istream& in);

void save_model(const std::string& path, const ModelFile& file);
ModelFile load_model(const std::string& path);

/// Flat key=value echo of a PassConfig, keys prefixed with "config.".
std::map<std::string, std::string> config_echo(const PassConfig& config);
/// Inverse of config_echo; keys missing from the map keep their defaults.
PassConfig config_from_echo(const std::map<std::string, std::string>& meta);

}  // namespace passgp
