#include "copreg/cli.hpp"

#include "copreg/csv.hpp"
#include "copreg/errors.hpp"
#include "copreg/experiments.hpp"
#include "copreg/fitting.hpp"
#include "copreg/regression.hpp"
#include "copreg/vine.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace copreg {

namespace {

using Settings = std::map<std::string, std::string>;

struct Key {
  std::string name;
  std::string fallback; // empty: no default
  std::string help;
};

const std::vector<Key>& keys_for(const std::string& command) {
  static const Key config{"config", "", "key=value file; flags take precedence"};
  static const Key out{"out", "", "output path"};
  static const Key workers{"workers", "1", "worker threads"};
  static const Key model{"model", "m1", "m1, m2, m3, m5, xsin, expcos or flat"};
  static const Key n{"n", "100", "sample size"};
  static const Key sigma{"sigma", "0.1", "noise standard deviation"};
  static const Key seed{"seed", "1", "seed (base seed for mse)"};
  static const Key data{"data", "", "input CSV with header y,x1[,x2]"};
  static const Key family{"family", "gaussian", "family tag such as clayton@180, or auto-aic, vine, oracle"};
  static const Key rotation{"rotation", "", "0, 90, 180 or 270; overrides a suffix on --family"};
  static const Key fit{"fit", "pml", "pml or l2"};
  static const Key candidates{"candidates", "default", "comma separated family tags, default or vine"};
  static const Key grid{"grid", "", "grid points per axis"};

  static const std::map<std::string, std::vector<Key>> table = {
      {"simulate", {config, out, model, n, sigma, seed}},
      {"fit", {config, out, workers, data, family, rotation, fit, candidates}},
      {"regress", {config, out, workers, data, family, rotation, fit, candidates, {"grid", "101", grid.help}}},
      {"vine", {config, out, workers, data, {"candidates", "vine", candidates.help}}},
      {"mse",
       {config, out, workers, model, n, sigma, seed, family, rotation, fit, candidates, {"grid", "51", grid.help},
        {"reps", "1000", "Monte-Carlo replications"}}},
      {"sweep",
       {config, out, workers, {"grid", "101", grid.help},
        {"taus", "-0.7,-0.5,-0.3,-0.1,0.1,0.3,0.5,0.7", "comma separated Kendall tau values"},
        {"families", "all", "comma separated family names or all"},
        {"tolerance", "1e-8", "audit tolerance relative to the curve range"}}},
      {"contour",
       {config, out, {"model", "m2", model.help}, {"n", "100000", n.help}, sigma, seed, {"grid", "50", grid.help},
        {"bandwidth", "auto", "kernel bandwidth or auto"}}},
  };
  return table.at(command);
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> list = {"simulate", "fit", "regress", "vine", "mse", "sweep", "contour"};
  return list;
}

const std::string& get(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end() || it->second.empty())
    throw ConfigError("missing required setting --" + key);
  return it->second;
}

template <class T>
T parse_number(const Settings& s, const std::string& key) {
  const std::string& text = get(s, key);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("--" + key + ": cannot parse '" + text + "'");
  return value;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_csv_line(text)) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw ConfigError("--" + key + ": cannot parse '" + item + "'");
    out.push_back(value);
  }
  return out;
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  if (count < 2)
    throw ConfigError("--grid must be at least 2");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1);
  out.back() = b;
  return out;
}

EstimatorConfig estimator_from(const Settings& s) {
  EstimatorConfig est;
  const std::string& family = get(s, "family");
  if (family == "auto-aic") {
    est.kind = EstimatorKind::AutoAic;
  } else if (family == "vine") {
    est.kind = EstimatorKind::Vine;
  } else if (family == "oracle") {
    est.kind = EstimatorKind::Oracle;
  } else {
    const auto [f, r] = parse_family_tag(family);
    est.family = {f, r};
    if (const auto it = s.find("rotation"); it != s.end() && !it->second.empty())
      est.family.rotation = rotation_from_degrees(parse_number<int>(s, "rotation"));
  }
  const std::string& method = get(s, "fit");
  if (method == "pml")
    est.method = FitMethod::Pml;
  else if (method == "l2")
    est.method = FitMethod::L2;
  else
    throw ConfigError("--fit must be pml or l2, got '" + method + "'");
  est.candidates = parse_candidates(get(s, "candidates"));
  return est;
}

std::string run_simulate(const Settings& s, std::ostream& out) {
  const DgpSpec dgp{parse_model(get(s, "model")), parse_number<std::size_t>(s, "n"), parse_number<double>(s, "sigma"),
                    parse_number<std::uint64_t>(s, "seed")};
  const Dataset data = simulate_dgp(dgp);
  out << "simulated " << data.n() << " rows of model " << model_name(dgp.model) << "\n";
  return dataset_csv(data);
}

std::string run_fit(const Settings& s, std::ostream& out) {
  const Dataset data = load_dataset(get(s, "data"));
  const PseudoSample pseudo = ecdf_transform(data);
  const EstimatorConfig est = estimator_from(s);
  const std::size_t workers = parse_number<std::size_t>(s, "workers");
  std::string csv = "predictor," + fit_csv_header() + "\n";
  for (std::size_t j = 0; j < pseudo.d; ++j) {
    const auto pairs = pseudo.response_pairs(j);
    FitResult fit;
    if (est.kind == EstimatorKind::AutoAic)
      fit = select_by_aic(est.candidates, pairs, workers);
    else if (est.kind == EstimatorKind::Family && est.method == FitMethod::L2)
      fit = fit_l2(est.family.family, est.family.rotation, pseudo);
    else if (est.kind == EstimatorKind::Family)
      fit = fit_pml(est.family, pairs);
    else
      throw ConfigError("fit: --family must be a family tag or auto-aic");
    csv += "x" + std::to_string(j + 1) + "," + fit_csv_row(fit) + "\n";
    out << "x" << j + 1 << ": " << to_string(fit.spec) << (fit.converged ? "" : " (not converged)")
        << (fit.at_boundary ? " (at boundary)" : "") << "\n";
  }
  return csv;
}

std::string run_regress(const Settings& s, std::ostream& out) {
  const Dataset data = load_dataset(get(s, "data"));
  EstimatorConfig est = estimator_from(s);
  if (est.kind == EstimatorKind::Oracle)
    throw ConfigError("regress: the oracle needs a model, not a data file");
  est.workers = parse_number<std::size_t>(s, "workers");
  const std::size_t count = parse_number<std::size_t>(s, "grid");
  std::vector<std::vector<double>> grid;
  for (const auto& col : data.x) {
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    grid.push_back(linspace(*lo, *hi, count));
  }
  // The model only feeds the truth column, which is not written here.
  const Model model = data.d() == 1 ? Model::Flat : Model::M3;
  const auto rep = run_replication(data, model, est, grid);
  if (rep.fit)
    out << "fitted " << to_string(rep.fit->spec) << "\n";
  if (rep.vine)
    out << serialize_vine(*rep.vine);
  const auto flagged = std::count(rep.estimate.extrapolation.begin(), rep.estimate.extrapolation.end(), true);
  if (flagged > 0)
    out << flagged << " grid point(s) extrapolated\n";
  return regression_csv(rep.estimate);
}

std::string run_vine(const Settings& s, std::ostream& out) {
  const Dataset data = load_dataset(get(s, "data"));
  if (data.d() != 2)
    throw ConfigError("vine: needs a dataset with columns y,x1,x2");
  const auto candidates = parse_candidates(get(s, "candidates"));
  const VineModel model = fit_vine(ecdf_transform(data), candidates, parse_number<std::size_t>(s, "workers"));
  const std::string text = serialize_vine(model);
  out << text;
  return text;
}

std::string run_mse(const Settings& s, std::ostream& out) {
  const DgpSpec dgp{parse_model(get(s, "model")), parse_number<std::size_t>(s, "n"), parse_number<double>(s, "sigma"),
                    0};
  const EstimatorConfig est = estimator_from(s);
  const std::size_t count = parse_number<std::size_t>(s, "grid");
  std::vector<std::vector<double>> grid(model_dim(dgp.model), linspace(0.0, 1.0, count));
  const auto result = run_mse_study(dgp, est, parse_number<std::size_t>(s, "reps"), grid,
                                    parse_number<std::uint64_t>(s, "seed"), parse_number<std::size_t>(s, "workers"));
  if (result.failures > 0)
    out << "warning: " << result.failures << " of " << result.reps << " replications failed and were dropped\n";
  out << "mse study " << result.estimator_label << " on " << model_name(dgp.model) << ", " << result.reps
      << " replications\n";
  return mse_csv(result);
}

std::string run_sweep(const Settings& s, std::ostream& out) {
  std::vector<Family> families;
  const std::string& names = get(s, "families");
  if (names == "all") {
    families = sweep_families();
  } else {
    for (const auto& tag : split_csv_line(names)) {
      const auto [f, r] = parse_family_tag(tag);
      if (r != Rotation::R0)
        throw ConfigError("--families takes plain family names; every rotation is swept");
      families.push_back(f);
    }
  }
  const Rotation rotations[] = {Rotation::R0, Rotation::R90, Rotation::R180, Rotation::R270};
  const auto taus = parse_list(get(s, "taus"), "taus");
  const auto rows = monotonicity_sweep(families, rotations, taus, parse_number<std::size_t>(s, "grid"),
                                       parse_number<double>(s, "tolerance"), parse_number<std::size_t>(s, "workers"));
  std::size_t skipped = 0, non_monotone = 0;
  for (const auto& r : rows) {
    skipped += r.skipped ? 1 : 0;
    non_monotone += (!r.skipped && !r.audit.monotone) ? 1 : 0;
  }
  out << rows.size() << " rows, " << skipped << " skipped, " << non_monotone << " non-monotone\n";
  return sweep_csv(rows);
}

std::string run_contour(const Settings& s, std::ostream& out) {
  const DgpSpec dgp{parse_model(get(s, "model")), parse_number<std::size_t>(s, "n"), parse_number<double>(s, "sigma"),
                    parse_number<std::uint64_t>(s, "seed")};
  const double bandwidth = get(s, "bandwidth") == "auto" ? 0.0 : parse_number<double>(s, "bandwidth");
  const auto grid = contour_density(dgp, parse_number<std::size_t>(s, "grid"), bandwidth);
  out << "contour grid " << grid.u.size() << "x" << grid.u.size() << ", bandwidths " << grid.bandwidth_y << " "
      << grid.bandwidth_x << "\n";
  return contour_csv(grid);
}

std::string run_command(const std::string& command, const Settings& s, std::ostream& out) {
  if (command == "simulate")
    return run_simulate(s, out);
  if (command == "fit")
    return run_fit(s, out);
  if (command == "regress")
    return run_regress(s, out);
  if (command == "vine")
    return run_vine(s, out);
  if (command == "mse")
    return run_mse(s, out);
  if (command == "sweep")
    return run_sweep(s, out);
  return run_contour(s, out);
}

std::string manifest(const std::string& command, const Settings& s) {
  std::string text = std::string("tool=") + kToolVersion + "\ncommand=" + command + "\n";
  for (const auto& [key, value] : s)
    text += key + "=" + value + "\n";
  return text;
}

} // namespace

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() {
    if (!std::getline(in, line))
      return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    return true;
  };
  if (!next())
    throw ConfigError(path + ": empty file");
  const auto header = split_csv_line(line);
  const bool ok_header = (header.size() == 2 && header[0] == "y" && header[1] == "x1") ||
                         (header.size() == 3 && header[0] == "y" && header[1] == "x1" && header[2] == "x2");
  if (!ok_header)
    throw ConfigError(path + ":1: header must be y,x1 or y,x1,x2");
  Dataset data;
  data.x.assign(header.size() - 1, {});
  while (next()) {
    if (line.empty())
      continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(fields.size()));
    for (std::size_t k = 0; k < fields.size(); ++k) {
      double value = 0.0;
      const auto& f = fields[k];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(value))
        throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed number '" + f + "'");
      if (k == 0)
        data.y.push_back(value);
      else
        data.x[k - 1].push_back(value);
    }
  }
  if (data.y.empty())
    throw ConfigError(path + ": no data rows");
  return data;
}

Settings read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config " + path);
  Settings out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string t) {
    const auto b = t.find_first_not_of(" \t\r");
    const auto e = t.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

static std::string command_help(const std::string& command) {
  static const std::map<std::string, std::string> help = {
      {"simulate", "draw a dataset from one of the regression models"},
      {"fit", "fit a bivariate copula to (Y, X1)"},
      {"regress", "estimate the regression curve or surface on a grid"},
      {"vine", "fit a three-dimensional vine copula and print it"},
      {"mse", "Monte Carlo pointwise MSE study"},
      {"sweep", "audit monotonicity of population curves across families"},
      {"contour", "kernel estimate of the copula density of (Y, X)"},
  };
  return help.at(command);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Copula-based regression and misspecification experiments", "copreg"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, CLI::App*> subs;
  for (const auto& command : commands()) {
    CLI::App* sub = app.add_subcommand(command, command_help(command));
    for (const auto& key : keys_for(command)) {
      std::string help = key.help;
      if (!key.fallback.empty())
        help += " (default " + key.fallback + ")";
      sub->add_option("--" + key.name, raw[command][key.name], help);
    }
    subs[command] = sub;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed())
      command = name;

  try {
    CLI::App* sub = subs.at(command);
    Settings file;
    if (sub->count("--config"))
      file = read_config_file(raw[command]["config"]);
    Settings resolved;
    for (const auto& key : keys_for(command)) {
      if (key.name == "config")
        continue;
      if (sub->count("--" + key.name))
        resolved[key.name] = raw[command][key.name];
      else if (file.count(key.name))
        resolved[key.name] = file.at(key.name);
      else if (!key.fallback.empty())
        resolved[key.name] = key.fallback;
    }
    for (const auto& [key, value] : file)
      if (std::none_of(keys_for(command).begin(), keys_for(command).end(),
                       [&](const Key& k) { return k.name == key && key != "config"; }))
        throw ConfigError("unknown setting '" + key + "' in config file for " + command);
    const std::string& path = get(resolved, "out");
    const std::string content = run_command(command, resolved, out);
    write_text_file(path, content);
    write_text_file(path + ".manifest", manifest(command, resolved));
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 3;
  }
}

} // namespace copreg
