#include "passgp/model_file.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <zlib.h>

#include "passgp/errors.hpp"

namespace passgp {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::string& buf, T value) {
  auto bits = std::bit_cast<std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

template <typename T>
T get_le(const std::string& buf, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  if (pos + sizeof(T) > buf.size()) throw ParseError("model file: truncated data block");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bits |= static_cast<U>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  pos += sizeof(T);
  return std::bit_cast<T>(bits);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

Vector split_doubles(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) vals.push_back(std::stod(tok));
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::uint32_t crc(const std::string& data) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("model file: missing header key '" + key + "'");
  return it->second;
}

}  // namespace

std::map<std::string, std::string> config_echo(const PassConfig& c) {
  return {
      {"config.mode", mode_name(c.mode)},
      {"config.n_init", std::to_string(c.n_init)},
      {"config.n_sub", std::to_string(c.n_sub)},
      {"config.n_pass", std::to_string(c.n_pass)},
      {"config.p_inc", format_double(c.p_inc)},
      {"config.p_del", format_double(c.p_del)},
      {"config.m_budget", std::to_string(c.m_budget)},
      {"config.p_exc", format_double(c.p_exc)},
      {"config.hyperopt_every", std::to_string(c.hyperopt_every)},
      {"config.fixed_theta", c.fixed_theta ? "1" : "0"},
      {"config.seed", std::to_string(c.seed)},
      {"config.ep_tol", format_double(c.ep.tol)},
      {"config.ep_max_sweeps", std::to_string(c.ep.max_sweeps)},
      {"config.ep_damping", format_double(c.ep.damping)},
      {"config.max_evals", std::to_string(c.optimizer.max_evals)},
  };
}

PassConfig config_from_echo(const std::map<std::string, std::string>& m) {
  PassConfig c;
  auto get = [&](const char* key) -> const std::string* {
    auto it = m.find(key);
    return it == m.end() ? nullptr : &it->second;
  };
  if (auto v = get("config.mode")) c.mode = parse_mode(*v);
  if (auto v = get("config.n_init")) c.n_init = std::stoi(*v);
  if (auto v = get("config.n_sub")) c.n_sub = std::stoi(*v);
  if (auto v = get("config.n_pass")) c.n_pass = std::stoi(*v);
  if (auto v = get("config.p_inc")) c.p_inc = std::stod(*v);
  if (auto v = get("config.p_del")) c.p_del = std::stod(*v);
  if (auto v = get("config.m_budget")) c.m_budget = std::stoi(*v);
  if (auto v = get("config.p_exc")) c.p_exc = std::stod(*v);
  if (auto v = get("config.hyperopt_every")) c.hyperopt_every = std::stoi(*v);
  if (auto v = get("config.fixed_theta")) c.fixed_theta = *v == "1";
  if (auto v = get("config.seed")) c.seed = std::stoull(*v);
  if (auto v = get("config.ep_tol")) c.ep.tol = std::stod(*v);
  if (auto v = get("config.ep_max_sweeps")) c.ep.max_sweeps = std::stoi(*v);
  if (auto v = get("config.ep_damping")) c.ep.damping = std::stod(*v);
  if (auto v = get("config.max_evals")) c.optimizer.max_evals = std::stoi(*v);
  c.ep.seed = c.seed;
  return c;
}

void write_model(std::ostream& out, const ModelFile& file) {
  const ActiveSetModel& m = file.model;
  const Eigen::Index n = m.size(), d = m.features.cols();
  std::string blob;
  for (Eigen::Index i : m.active_idx) put_le<std::int64_t>(blob, i);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) put_le<double>(blob, m.features(i, j));
  for (const Vector* v : {&m.labels, &m.state.site_precision, &m.state.site_nat_mean})
    for (Eigen::Index i = 0; i < n; ++i) put_le<double>(blob, (*v)[i]);

  char crc_hex[16];
  std::snprintf(crc_hex, sizeof crc_hex, "%08x", crc(blob));
  out << "passgp-model " << kModelFormatVersion << '\n';
  out << "family=" << family_name(m.kernel.family()) << '\n';
  out << "degree=" << m.kernel.degree() << '\n';
  out << "jitter_enabled=" << (m.kernel.jitter_enabled() ? 1 : 0) << '\n';
  out << "log_theta=" << join(m.kernel.log_theta()) << '\n';
  out << "n_active=" << n << '\n';
  out << "dim=" << d << '\n';
  out << "ep_converged=" << (m.state.converged ? 1 : 0) << '\n';
  out << "ep_sweeps=" << m.state.n_sweeps << '\n';
  out << "log_z_ep=" << format_double(m.state.log_z_ep) << '\n';
  for (const auto& [k, v] : file.meta) {
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos)
      throw InvalidArgument("model metadata keys/values must not contain '=' or newlines");
    out << k << '=' << v << '\n';
  }
  out << "checksum=" << crc_hex << '\n';
  out << "end_header\n";
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw Error("model file: write failed");
}

ModelFile read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("passgp-model ", 0) != 0)
    throw ParseError("model file: missing 'passgp-model' header", 1);
  const int version = std::stoi(line.substr(13));
  if (version != kModelFormatVersion)
    throw ParseError("model file: unsupported version " + std::to_string(version), 1);
  std::map<std::string, std::string> kv;
  std::size_t line_no = 1;
  bool closed = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line == "end_header") {
      closed = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("model file: expected key=value", line_no);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!closed) throw ParseError("model file: header not terminated");
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  char crc_hex[16];
  std::snprintf(crc_hex, sizeof crc_hex, "%08x", crc(blob));
  if (require(kv, "checksum") != crc_hex) throw ParseError("model file: checksum mismatch");

  const Eigen::Index n = std::stol(require(kv, "n_active"));
  const Eigen::Index d = std::stol(require(kv, "dim"));
  const std::size_t expected = static_cast<std::size_t>(n) * 8 * (static_cast<std::size_t>(d) + 4);
  if (blob.size() != expected) throw ParseError("model file: data block has unexpected size");

  const KernelSpec kernel(parse_family(require(kv, "family")), split_doubles(require(kv, "log_theta")),
                          require(kv, "jitter_enabled") == "1", std::stoi(require(kv, "degree")));
  std::size_t pos = 0;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (auto& i : idx) i = static_cast<Eigen::Index>(get_le<std::int64_t>(blob, pos));
  Matrix features(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) features(i, j) = get_le<double>(blob, pos);
  Vector labels(n), tau(n), nu(n);
  for (Vector* v : {&labels, &tau, &nu})
    for (Eigen::Index i = 0; i < n; ++i) (*v)[i] = get_le<double>(blob, pos);

  std::map<std::string, std::string> meta;
  for (const auto& [k, v] : kv) {
    static const char* reserved[] = {"family", "degree", "jitter_enabled", "log_theta", "n_active", "dim",
                                     "ep_converged", "ep_sweeps", "log_z_ep", "checksum"};
    if (std::find(std::begin(reserved), std::end(reserved), k) == std::end(reserved)) meta[k] = v;
  }

  EPState state = ep_restore(kernel.gram(features), labels, tau, nu, Vector::Zero(n));
  state.converged = require(kv, "ep_converged") == "1";
  state.n_sweeps = std::stoi(require(kv, "ep_sweeps"));
  PassConfig config = config_from_echo(meta);
  return {ActiveSetModel{std::move(idx), std::move(features), std::move(labels), kernel, std::move(state),
                         config, {}},
          std::move(meta)};
}

void save_model(const std::string& path, const ModelFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + path + "'");
  write_model(out, file);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  return read_model(in);
}

}  // namespace passgp
