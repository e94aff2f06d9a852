#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "passgp/active_set.hpp"
#include "passgp/data_io.hpp"
#include "passgp/errors.hpp"
#include "passgp/eval.hpp"
#include "passgp/ml_approx.hpp"
#include "passgp/model_file.hpp"
#include "passgp/representer.hpp"
#include "passgp/synthetic.hpp"

namespace passgp::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string data;
  std::string format = "csv";
  std::string labels;
  long svm_dim = 0;
  std::string scale;  // "lo,hi"
  std::string augment = "none";
  std::string image_shape;  // "HxW"

  std::string kernel = "se";
  std::string theta;  // raw (not log) values, comma separated

  std::string mode = "pass";
  double p_inc = 0.6;
  double p_del = 0.99;
  double p_exc = 0.02;
  int m_budget = 300;
  int n_init = 300;
  int n_sub = 10;
  int n_pass = 2;
  int hyperopt_every = 1;
  int max_evals = 20;
  bool fixed_theta = false;
  std::uint64_t seed = 0;
  int reps = 1;
  std::string out;
  std::string target_class;
  std::vector<std::string> models;
  std::string p_inc_list = "0.5,0.6,0.7,0.8,0.9,0.99,1";

  std::string kind = "blobs";
  long n = 400;
  int classes = 3;
  double separation = 2.5;
  double noise = 0.2;

  bool p_exc_given = false;
  bool m_budget_given = false;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw InvalidArgument(std::string("bad number in ") + what + ": '" + tok + "'");
    }
  }
  return out;
}

KernelSpec make_kernel(const Options& o) {
  const KernelFamily family = parse_family(o.kernel);
  std::vector<double> theta;
  if (o.theta.empty()) {
    switch (family) {
      case KernelFamily::SeJitter: theta = {1.0, 1.0, 0.01}; break;
      case KernelFamily::SeJitterLinear: theta = {1.0, 1.0, 0.01, 0.01}; break;
      case KernelFamily::Poly9: theta = {1.0}; break;
    }
  } else {
    theta = parse_list(o.theta, "--theta");
  }
  return KernelSpec::from_theta(family, theta);
}

PassConfig make_pass_config(const Options& o) {
  PassConfig c;
  c.mode = parse_mode(o.mode);
  c.p_inc = o.p_inc;
  c.p_del = o.p_del;
  c.p_exc = o.p_exc;
  c.m_budget = o.m_budget;
  c.n_init = o.n_init;
  c.n_sub = o.n_sub;
  c.n_pass = o.n_pass;
  c.hyperopt_every = o.hyperopt_every;
  c.fixed_theta = o.fixed_theta;
  c.seed = o.seed;
  c.optimizer.max_evals = o.max_evals;
  c.ep.seed = o.seed;
  return c;
}

Dataset load_data(const Options& o) {
  if (o.data.empty()) throw InvalidArgument("--data is required");
  return load(o.data, parse_format(o.format), o.labels, o.svm_dim);
}

std::optional<Scaling> scaling_from_meta(const std::map<std::string, std::string>& meta) {
  if (!meta.count("scale.in_min")) return std::nullopt;
  Scaling s;
  s.in_min = std::stod(meta.at("scale.in_min"));
  s.in_max = std::stod(meta.at("scale.in_max"));
  s.lo = std::stod(meta.at("scale.lo"));
  s.hi = std::stod(meta.at("scale.hi"));
  return s;
}

// Binary view of a dataset for a model trained on `target` ("" = binary data).
Dataset binary_view(const Dataset& ds, const std::string& target) {
  if (!target.empty()) return one_vs_rest(ds, std::stoi(target));
  if (ds.binary) return ds;
  for (Eigen::Index i = 0; i < ds.labels.size(); ++i)
    if (ds.labels[i] != 0 && ds.labels[i] != 1)
      throw InvalidArgument("labels are not binary; pass --target-class <c> or --target-class all");
  return as_binary(ds);
}

std::vector<int> distinct_labels(const Dataset& ds) {
  std::set<int> s(ds.labels.data(), ds.labels.data() + ds.labels.size());
  return {s.begin(), s.end()};
}

std::string model_stem(const std::string& target, int rep, int reps, std::uint64_t seed) {
  std::string stem = "model";
  if (!target.empty()) stem += ".class" + target;
  if (reps > 1) stem += ".seed" + std::to_string(seed + static_cast<std::uint64_t>(rep));
  return stem;
}

// ---- train ----------------------------------------------------------------

std::string train_task(const Options& o, const Dataset& base, const std::string& target) {
  Dataset ds = binary_view(base, target);
  if (o.augment != "none") {
    int h = ds.image_height, w = ds.image_width;
    if (!o.image_shape.empty()) {
      if (std::sscanf(o.image_shape.c_str(), "%dx%d", &h, &w) != 2)
        throw InvalidArgument("--image-shape must look like 16x16");
    }
    if (h <= 0 || w <= 0) throw InvalidArgument("--augment needs the image shape (IDX input or --image-shape)");
    const ShiftSet shifts = o.augment == "four"    ? ShiftSet::Four
                            : o.augment == "eight" ? ShiftSet::Eight
                                                   : throw InvalidArgument("--augment must be none, four or eight");
    ds = augment_translations(ds, h, w, shifts);
  }
  const Vector y = ds.signed_labels();
  const KernelSpec k0 = make_kernel(o);
  std::ostringstream summary;
  for (int r = 0; r < o.reps; ++r) {
    PassConfig c = make_pass_config(o);
    c.seed = o.seed + static_cast<std::uint64_t>(r);
    c.ep.seed = c.seed;
    c.validate(ds.n());
    const auto t0 = std::chrono::steady_clock::now();
    ActiveSetModel m = fit(ds.features, y, k0, c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ModelFile file{m, config_echo(c)};
    file.meta["target_class"] = target;
    file.meta["n_train"] = std::to_string(ds.n());
    if (base.scaling) {
      file.meta["scale.in_min"] = fmt(base.scaling->in_min);
      file.meta["scale.in_max"] = fmt(base.scaling->in_max);
      file.meta["scale.lo"] = fmt(base.scaling->lo);
      file.meta["scale.hi"] = fmt(base.scaling->hi);
    }
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    fs::create_directories(dir);
    const std::string stem = model_stem(target, r, o.reps, o.seed);
    save_model((dir / (stem + ".model")).string(), file);
    std::ofstream hist(dir / (stem + ".history.tsv"));
    write_history(hist, m.history);

    summary << stem << "\tactive=" << m.size() << "\tseconds=" << secs << "\tlog_z_ep=" << fmt(m.state.log_z_ep)
            << "\tlog_theta=";
    for (Eigen::Index i = 0; i < m.kernel.log_theta().size(); ++i)
      summary << (i ? "," : "") << m.kernel.log_theta()[i];
    summary << '\n';
  }
  return summary.str();
}

int cmd_train(const Options& o, std::ostream& out) {
  if (o.reps < 1) throw InvalidArgument("--reps must be >= 1");
  if (o.p_exc_given && o.mode != "fpass") throw InvalidArgument("--p-exc only applies to --mode fpass");
  if (o.m_budget_given && o.mode != "fpass" && o.mode != "random")
    throw InvalidArgument("--m-budget only applies to --mode fpass or random");
  Dataset ds = load_data(o);
  if (!o.scale.empty()) {
    const auto lh = parse_list(o.scale, "--scale");
    if (lh.size() != 2 || !(lh[0] < lh[1])) throw InvalidArgument("--scale must be 'lo,hi' with lo < hi");
    ds = scale_to_range(ds, lh[0], lh[1]);
  }
  std::vector<std::string> targets;
  if (o.target_class == "all") {
    for (int c : distinct_labels(ds)) targets.push_back(std::to_string(c));
  } else {
    targets.push_back(o.target_class);
  }
  if (targets.size() == 1) {
    out << train_task(o, ds, targets[0]);
    return kOk;
  }
  // independent one-vs-rest tasks; output collected in class order
  std::vector<std::future<std::string>> jobs;
  for (const std::string& t : targets)
    jobs.push_back(std::async(std::launch::async, [&o, &ds, t] { return train_task(o, ds, t); }));
  for (auto& j : jobs) out << j.get();
  return kOk;
}

// ---- predict / evaluate / weights ------------------------------------------

Dataset load_queries(const Options& o, const ModelFile& f) {
  Dataset ds = load_data(o);
  if (const auto s = scaling_from_meta(f.meta)) ds = apply_scaling(ds, *s);
  if (ds.n() > 0 && ds.d() != f.model.features.cols())
    throw InvalidArgument("data has " + std::to_string(ds.d()) + " features, model expects " +
                          std::to_string(f.model.features.cols()));
  return ds;
}

int cmd_predict(const Options& o, std::ostream& out) {
  if (o.models.size() != 1) throw InvalidArgument("predict takes exactly one --model");
  const ModelFile f = load_model(o.models[0]);
  const Dataset ds = load_queries(o, f);
  std::ofstream file;
  std::ostream& os = o.out.empty() ? out : (file.open(o.out), file);
  os << "index\tmean\tvar\tprob\tlabel\n";
  if (ds.n() == 0) return kOk;
  const auto preds = f.model.predict(ds.features, 1.0);
  for (std::size_t i = 0; i < preds.size(); ++i)
    os << i << '\t' << fmt(preds[i].mean) << '\t' << fmt(preds[i].var) << '\t' << fmt(preds[i].prob) << '\t'
       << (preds[i].mean >= 0.0 ? 1 : -1) << '\n';
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  if (o.models.empty()) throw InvalidArgument("evaluate needs at least one --model");
  std::vector<ModelFile> models;
  for (const std::string& p : o.models) models.push_back(load_model(p));
  const Dataset ds = load_queries(o, models[0]);
  if (ds.n() == 0) throw InvalidArgument("evaluate: no test rows");

  EvalReport report;
  if (models.size() == 1) {
    const std::string target = models[0].meta.count("target_class") ? models[0].meta.at("target_class") : "";
    const Dataset b = binary_view(ds, target);
    const auto preds = models[0].model.predict(b.features, 1.0);
    Vector prob(b.n());
    for (Eigen::Index i = 0; i < b.n(); ++i) prob[i] = preds[static_cast<std::size_t>(i)].prob;
    report = evaluate_binary(prob, b.labels);
  } else {
    std::map<int, const ModelFile*> by_class;
    for (const ModelFile& m : models) {
      const auto it = m.meta.find("target_class");
      if (it == m.meta.end() || it->second.empty())
        throw InvalidArgument("multiclass evaluation needs one-vs-rest models (trained with --target-class)");
      if (m.model.features.cols() != ds.d()) throw InvalidArgument("models disagree on the feature dimension");
      by_class[std::stoi(it->second)] = &m;
    }
    for (int c : distinct_labels(ds))
      if (!by_class.count(c)) throw InvalidArgument("missing model for class " + std::to_string(c));
    std::vector<int> classes;
    Matrix probs(static_cast<Eigen::Index>(by_class.size()), ds.n());
    Eigen::Index row = 0;
    for (const auto& [c, m] : by_class) {
      classes.push_back(c);
      const auto preds = m->model.predict(ds.features, 1.0);
      for (Eigen::Index i = 0; i < ds.n(); ++i) probs(row, i) = preds[static_cast<std::size_t>(i)].prob;
      ++row;
    }
    Eigen::VectorXi truth(ds.n());
    for (Eigen::Index i = 0; i < ds.n(); ++i)
      truth[i] = static_cast<int>(std::lower_bound(classes.begin(), classes.end(), ds.labels[i]) - classes.begin());
    report = evaluate_multiclass(probs, truth);
  }
  std::ofstream file;
  std::ostream& os = o.out.empty() ? out : (file.open(o.out), file);
  write_report(os, report);
  return kOk;
}

int cmd_weights(const Options& o, std::ostream& out) {
  if (o.models.size() != 1) throw InvalidArgument("weights takes exactly one --model");
  const ModelFile f = load_model(o.models[0]);
  if (!f.model.state.converged) throw NumericalError("weights: stored EP state did not converge");
  const WeightVector w = weights(f.model.state);
  std::ofstream file;
  std::ostream& os = o.out.empty() ? out : (file.open(o.out), file);
  os << "index\ty\tz\talpha\n";
  for (Eigen::Index i = 0; i < w.alpha.size(); ++i)
    os << f.model.active_idx[static_cast<std::size_t>(i)] << '\t' << f.model.labels[i] << '\t' << fmt(w.z[i]) << '\t'
       << fmt(w.alpha[i]) << '\n';
  return kOk;
}

// ---- ml-compare -------------------------------------------------------------

inline constexpr Eigen::Index kMaxCompareN = 3000;

int cmd_ml_compare(const Options& o, std::ostream& out, std::ostream& err) {
  Dataset ds = binary_view(load_data(o), o.target_class);
  if (ds.n() > kMaxCompareN)
    throw InvalidArgument("ml-compare refuses N = " + std::to_string(ds.n()) + " > " +
                          std::to_string(kMaxCompareN) + ": the full-GPC column would be too expensive");
  if (o.reps < 1) throw InvalidArgument("--reps must be >= 1");
  std::vector<double> p_incs = parse_list(o.p_inc_list, "--p-inc-list");
  std::sort(p_incs.begin(), p_incs.end());
  const Vector y = ds.signed_labels();
  const KernelSpec k0 = make_kernel(o);

  std::ofstream file;
  std::ostream& os = o.out.empty() ? out : (file.open(o.out), file);
  os << "p_inc\tseed\tactive\tlog_z_ep_a\tlog_z_app\tlog_z_acc\tlog_z_full\tseconds_app\tseconds_acc\n";
  for (double p_inc : p_incs) {
    for (int r = 0; r < o.reps; ++r) {
      PassConfig c = make_pass_config(o);
      c.seed = o.seed + static_cast<std::uint64_t>(r);
      c.ep.seed = c.seed;
      if (p_inc >= 1.0) {
        c.mode = SelectionMode::Full;  // every point is included
      } else {
        c.mode = SelectionMode::Pass;
        c.p_inc = p_inc;
        if (c.p_del <= p_inc) {
          c.p_del = 0.5 * (1.0 + p_inc);
          err << "note: p_del raised to " << c.p_del << " for p_inc = " << p_inc << '\n';
        }
      }
      c.n_init = std::min<int>(c.n_init, static_cast<int>(ds.n()));
      c.validate(ds.n());
      const ActiveSetModel m = fit(ds.features, y, k0, c);
      const bool with_acc = ds.n() - m.size() <= kMaxInactiveForAcc;
      const MLDecomposition d = decompose(m, ds.features, y, with_acc, c.ep);
      const double full = ep_fit(m.kernel.gram(ds.features), y, c.ep).log_z_ep;
      os << p_inc << '\t' << c.seed << '\t' << d.active_size << '\t' << fmt(d.log_z_ep_a) << '\t'
         << fmt(d.log_z_app) << '\t' << (d.log_z_acc ? fmt(*d.log_z_acc) : "nan") << '\t' << fmt(full) << '\t'
         << d.seconds_app << '\t' << d.seconds_acc << '\n';
    }
  }
  return kOk;
}

// ---- synth ------------------------------------------------------------------

int cmd_synth(const Options& o, std::ostream& out) {
  if (o.n < 1) throw InvalidArgument("--n must be >= 1");
  Dataset ds;
  if (o.kind == "blobs")
    ds = synthetic::two_gaussians(o.n, o.seed, o.separation);
  else if (o.kind == "moons")
    ds = synthetic::two_moons(o.n, o.seed, o.noise);
  else if (o.kind == "multiblobs")
    ds = synthetic::blobs(o.n, o.classes, o.seed);
  else
    throw InvalidArgument("--kind must be blobs, moons or multiblobs");
  std::ofstream file;
  std::ostream& os = o.out.empty() ? out : (file.open(o.out), file);
  write_csv(os, ds);
  return kOk;
}

// ---- option wiring ----------------------------------------------------------

void add_data_options(CLI::App* app, Options& o) {
  app->add_option("--data", o.data, "Data file (for IDX: the image file)");
  app->add_option("--format", o.format, "Data format")->check(CLI::IsMember({"idx", "svmlight", "csv", "usps"}));
  app->add_option("--labels", o.labels, "IDX label file");
  app->add_option("--svm-dim", o.svm_dim, "Feature count for svmlight input (0 = infer)");
  app->add_option("--config", "Flat key=value file; explicit flags override it");
}

void add_fit_options(CLI::App* app, Options& o) {
  app->add_option("--kernel", o.kernel, "Kernel family")->check(CLI::IsMember({"se", "se-linear", "poly9"}));
  app->add_option("--theta", o.theta, "Initial hyperparameters, comma separated (jitter 0 disables it)");
  app->add_option("--n-init", o.n_init, "Initial active set size");
  app->add_option("--n-sub", o.n_sub, "Subsets per pass");
  app->add_option("--n-pass", o.n_pass, "Passes over the data");
  app->add_option("--p-inc", o.p_inc, "Inclusion threshold");
  app->add_option("--p-del", o.p_del, "Deletion threshold");
  app->add_option("--hyperopt-every", o.hyperopt_every, "Optimize theta on every k-th subset iteration");
  app->add_option("--max-evals", o.max_evals, "Objective evaluations per hyperparameter optimization");
  app->add_flag("--fixed-theta", o.fixed_theta, "Never optimize the hyperparameters");
  app->add_option("--seed", o.seed, "Random seed");
  app->add_option("--reps", o.reps, "Repetitions with seeds seed, seed+1, ...");
  app->add_option("--target-class", o.target_class, "One-vs-rest target class, or 'all'");
}

}  // namespace

std::vector<std::string> expand_config(
    const std::vector<std::string>& args,
    const std::function<bool(const std::string&, const std::string&)>& skip) {
  std::vector<std::string> rest, injected;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("config: expected key=value", line_no);
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      std::string key = trim(line.substr(0, eq));
      std::replace(key.begin(), key.end(), '_', '-');
      if (skip && !rest.empty() && skip(rest[0], "--" + key)) continue;
      injected.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
  }
  if (rest.empty() || injected.empty()) return rest;
  std::vector<std::string> out{rest[0]};
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Sparse GP classification with EP and PASS active set selection", "passgp"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  CLI::App* train = app.add_subcommand("train", "Fit a model and write it with its history");
  add_data_options(train, o);
  add_fit_options(train, o);
  train->add_option("--mode", o.mode, "Active set selection")->check(CLI::IsMember({"pass", "fpass", "random", "full"}));
  train->add_option("--p-exc", o.p_exc, "fPASS exchange fraction");
  train->add_option("--m-budget", o.m_budget, "Active set size for fpass / random");
  train->add_option("--out", o.out, "Output directory");
  train->add_option("--scale", o.scale, "Scale features globally to lo,hi (stored in the model)");
  train->add_option("--augment", o.augment, "Translated copies of image data")
      ->check(CLI::IsMember({"none", "four", "eight"}));
  train->add_option("--image-shape", o.image_shape, "Image shape HxW for --augment on non-IDX data");

  CLI::App* predict = app.add_subcommand("predict", "Predictive mean, variance and probability per query");
  add_data_options(predict, o);
  predict->add_option("--model", o.models, "Model file")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  predict->add_option("--out", o.out, "Output file (default stdout)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Error rate, Brier score and density histogram");
  add_data_options(evaluate, o);
  evaluate->add_option("--model", o.models, "Model file; repeat once per class for one-vs-rest")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  evaluate->add_option("--out", o.out, "Output file (default stdout)");

  CLI::App* weights_cmd = app.add_subcommand("weights", "Representer weights of a model's active points");
  weights_cmd->add_option("--model", o.models, "Model file")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  weights_cmd->add_option("--out", o.out, "Output file (default stdout)");

  CLI::App* compare = app.add_subcommand("ml-compare", "Marginal likelihood approximations across p_inc");
  add_data_options(compare, o);
  add_fit_options(compare, o);
  compare->add_option("--p-inc-list", o.p_inc_list, "Comma separated p_inc values (1 = full GPC)");
  compare->add_option("--out", o.out, "Output file (default stdout)");

  CLI::App* synth = app.add_subcommand("synth", "Write a deterministic synthetic dataset as CSV");
  synth->add_option("--kind", o.kind, "blobs, moons or multiblobs");
  synth->add_option("--n", o.n, "Number of points");
  synth->add_option("--classes", o.classes, "Classes for multiblobs");
  synth->add_option("--separation", o.separation, "Distance between the two blob centres");
  synth->add_option("--noise", o.noise, "Noise level for moons");
  synth->add_option("--seed", o.seed, "Random seed");
  synth->add_option("--out", o.out, "Output file (default stdout)");

  try {
    // a config key is ignored by subcommands that lack it, as long as some
    // other subcommand knows it; unknown keys still fail to parse
    const auto skip = [&app](const std::string& sub, const std::string& flag) {
      const CLI::App* chosen = nullptr;
      bool known_elsewhere = false;
      for (const CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; })) {
        if (s->get_name() == sub) chosen = s;
        else if (s->get_option_no_throw(flag)) known_elsewhere = true;
      }
      return chosen && !chosen->get_option_no_throw(flag) && known_elsewhere;
    };
    std::vector<std::string> args = expand_config(raw_args, skip);
    std::reverse(args.begin(), args.end());  // CLI11 consumes vectors from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  o.p_exc_given = train->count("--p-exc") > 0;
  o.m_budget_given = train->count("--m-budget") > 0;
  try {
    if (*train) return cmd_train(o, out);
    if (*predict) return cmd_predict(o, out);
    if (*evaluate) return cmd_evaluate(o, out);
    if (*weights_cmd) return cmd_weights(o, out);
    if (*compare) return cmd_ml_compare(o, out, err);
    if (*synth) return cmd_synth(o, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace passgp::cli
