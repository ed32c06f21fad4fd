#include "precoder/config.hpp"

#include <charconv>
#include <complex>
#include <fstream>
#include <map>
#include <sstream>

namespace precoder::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Entry {
  std::string value;
  int line;
};

[[noreturn]] void fail(const std::string& key, int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + what);
}

double parse_double(const std::string& key, const Entry& e, const std::string& token) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || token.empty()) fail(key, e.line, "not a number: '" + token + "'");
  return v;
}

long long parse_int(const std::string& key, const Entry& e) {
  long long v = 0;
  const std::string& t = e.value;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    fail(key, e.line, "not an integer: '" + t + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const Entry& e) {
  std::vector<double> out;
  for (const std::string& tok : split(e.value, ',')) out.push_back(parse_double(key, e, tok));
  return out;
}

std::vector<double> per_user(const std::string& key, const Entry& e, int n_u) {
  std::vector<double> v = parse_list(key, e);
  if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(n_u), v[0]);
  if (v.size() != static_cast<std::size_t>(n_u)) {
    fail(key, e.line, "expected 1 or " + std::to_string(n_u) + " values, got " +
                          std::to_string(v.size()));
  }
  return v;
}

Eigen::MatrixXcd parse_channel(const Entry& e) {
  std::vector<std::vector<std::complex<double>>> rows;
  for (const std::string& row_text : split(e.value, ';')) {
    std::istringstream in(row_text);
    std::vector<std::complex<double>> row;
    std::string token;
    while (in >> token) {
      std::istringstream tin(token);
      std::complex<double> c;
      if (!(tin >> c) || tin.peek() != std::char_traits<char>::eof()) {
        fail("channel", e.line, "bad complex entry '" + token + "'");
      }
      row.push_back(c);
    }
    if (row.empty()) fail("channel", e.line, "empty row");
    if (!rows.empty() && row.size() != rows.front().size()) fail("channel", e.line, "ragged rows");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXcd h(rows.size(), rows.front().size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i) h(k, i) = rows[k][i];
  }
  return h;
}

std::string fmt_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(v[i]);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  static const char* const kKeys[] = {
      "n_t",     "n_u",   "gamma_db",      "sigma",         "delta",     "kappa",
      "trials",  "error_samples", "error_mode", "methods",   "method",    "seed",
      "perturbation_sigma", "gamma_grid_db", "delta_grid", "channel"};

  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (entries.count(key)) fail(key, line_no, "duplicate key");
    entries[key] = {trim(line.substr(eq + 1)), line_no};
  }

  RunConfig cfg;
  mc::ExperimentConfig& ex = cfg.experiment;
  auto has = [&](const char* k) { return entries.count(k) > 0; };

  if (has("channel")) {
    cfg.channel = parse_channel(entries["channel"]);
    ex.n_u = static_cast<int>(cfg.channel->rows());
    ex.n_t = static_cast<int>(cfg.channel->cols());
  }
  for (const char* k : {"n_t", "n_u"}) {
    if (!has(k)) continue;
    const long long v = parse_int(k, entries[k]);
    if (v < 1 || v > 64) fail(k, entries[k].line, "must be between 1 and 64");
    int& slot = std::string(k) == "n_t" ? ex.n_t : ex.n_u;
    if (cfg.channel && slot != v) fail(k, entries[k].line, "disagrees with the channel rows");
    slot = static_cast<int>(v);
  }
  ex.set_uniform(5.0, 1.0, 0.015);
  if (has("gamma_db")) ex.gamma_db = per_user("gamma_db", entries["gamma_db"], ex.n_u);
  if (has("sigma")) ex.sigma = per_user("sigma", entries["sigma"], ex.n_u);
  if (has("delta")) ex.delta = per_user("delta", entries["delta"], ex.n_u);
  if (has("kappa")) ex.kappa = parse_double("kappa", entries["kappa"], entries["kappa"].value);
  if (has("trials")) ex.n_channel_trials = static_cast<int>(parse_int("trials", entries["trials"]));
  if (has("error_samples")) {
    ex.n_error_samples = static_cast<int>(parse_int("error_samples", entries["error_samples"]));
  }
  if (has("seed")) {
    const Entry& e = entries["seed"];
    const char* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, ex.seed);
    if (ec != std::errc() || ptr != end || e.value.empty()) {
      fail("seed", e.line, "must be an integer in [0, 2^64)");
    }
  }
  if (has("error_mode")) {
    const Entry& e = entries["error_mode"];
    if (e.value == "ball") ex.error_mode = model::ErrorMode::Ball;
    else if (e.value == "boundary") ex.error_mode = model::ErrorMode::Boundary;
    else fail("error_mode", e.line, "expected 'ball' or 'boundary'");
  }
  if (has("perturbation_sigma")) {
    const Entry& e = entries["perturbation_sigma"];
    if (e.value == "paper") ex.perturbation_sigma = design::PerturbationSigma::Paper;
    else if (e.value == "zero") ex.perturbation_sigma = design::PerturbationSigma::Zero;
    else fail("perturbation_sigma", e.line, "expected 'paper' or 'zero'");
  }
  if (has("methods")) {
    ex.methods.clear();
    for (const std::string& name : split(entries["methods"].value, ',')) {
      const auto m = mc::parse_method(name);
      if (!m) fail("methods", entries["methods"].line, "unknown method '" + name + "'");
      if (std::find(ex.methods.begin(), ex.methods.end(), *m) == ex.methods.end()) ex.methods.push_back(*m);
    }
  }
  if (has("method")) {
    const auto m = mc::parse_method(entries["method"].value);
    if (!m) fail("method", entries["method"].line, "unknown method '" + entries["method"].value + "'");
    cfg.method = *m;
  }
  if (has("gamma_grid_db")) cfg.gamma_grid_db = parse_list("gamma_grid_db", entries["gamma_grid_db"]);
  if (has("delta_grid")) cfg.delta_grid = parse_list("delta_grid", entries["delta_grid"]);

  try {
    ex.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (double d : cfg.delta_grid) {
    if (!(d >= 0.0)) throw ConfigError("delta_grid entries must be >= 0");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_config(const RunConfig& config) {
  const mc::ExperimentConfig& ex = config.experiment;
  std::ostringstream out;
  out << "n_t = " << ex.n_t << "\n";
  out << "n_u = " << ex.n_u << "\n";
  out << "gamma_db = " << fmt_list(ex.gamma_db) << "\n";
  out << "sigma = " << fmt_list(ex.sigma) << "\n";
  out << "delta = " << fmt_list(ex.delta) << "\n";
  out << "kappa = " << fmt_double(ex.kappa) << "\n";
  out << "trials = " << ex.n_channel_trials << "\n";
  out << "error_samples = " << ex.n_error_samples << "\n";
  out << "error_mode = " << model::to_string(ex.error_mode) << "\n";
  out << "methods = ";
  for (std::size_t i = 0; i < ex.methods.size(); ++i) out << (i ? ", " : "") << mc::to_string(ex.methods[i]);
  out << "\n";
  out << "method = " << mc::to_string(config.method) << "\n";
  out << "seed = " << ex.seed << "\n";
  out << "perturbation_sigma = "
      << (ex.perturbation_sigma == design::PerturbationSigma::Paper ? "paper" : "zero") << "\n";
  out << "gamma_grid_db = " << fmt_list(config.gamma_grid_db) << "\n";
  out << "delta_grid = " << fmt_list(config.delta_grid) << "\n";
  if (config.channel) {
    out << "channel =";
    const Eigen::MatrixXcd& h = *config.channel;
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
      if (k) out << ";";
      for (Eigen::Index i = 0; i < h.cols(); ++i) {
        out << " (" << fmt_double(h(k, i).real()) << "," << fmt_double(h(k, i).imag()) << ")";
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace precoder::cli
