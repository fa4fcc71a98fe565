#include "rvar/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "rvar/empirical.hpp"
#include "rvar/errors.hpp"
#include "rvar/orthant.hpp"
#include "rvar/robustness.hpp"

namespace rvar::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string lower_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_double(const std::string& s, double& v) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  return ec == std::errc() && p == t.data() + t.size();
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  if (!parse_double(s, v)) throw DomainError("`" + key + "` expects a number, got \"" + s + "\"");
  return v;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  Int v{};
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size())
    throw DomainError("`" + key + "` expects an integer, got \"" + s + "\"");
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(to_double(key, part));
  return out;
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_exact(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + exact(v[i]);
  return s;
}

// "family k=v k=v" -> family and parameter map.
std::pair<std::string, std::map<std::string, double>> family_params(const std::string& text) {
  const auto toks = words(text);
  if (toks.empty()) throw DomainError("empty model specification");
  std::map<std::string, double> params;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos) throw DomainError("parameter \"" + toks[i] + "\" is not of the form key=value");
    const std::string key = lower_case(toks[i].substr(0, eq));
    params[key] = to_double(key, toks[i].substr(eq + 1));
  }
  return {lower_case(toks[0]), params};
}

double take(std::map<std::string, double>& p, const std::string& family, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw DomainError(family + " needs parameter " + key);
  const double v = it->second;
  p.erase(it);
  return v;
}

void no_leftovers(const std::map<std::string, double>& p, const std::string& family) {
  if (!p.empty()) throw DomainError(family + " has no parameter " + p.begin()->first);
}

// -------------------------------------------------------------------------

struct Flags {
  std::vector<std::string> margin;
  std::vector<std::string> gev, gpd, weibull, exponential, uniform;
  std::vector<std::string> x1, x2, copula;
  double alpha = std::nan("");
  double theta = std::nan("");
};

std::string join_words(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
  return s;
}

BivariateModel bivariate(const RunConfig& c) {
  if (c.margin1.empty() || c.margin2.empty()) throw DomainError("model needs both --x1 and --x2 margins");
  return BivariateModel(parse_margin(c.margin1), parse_margin(c.margin2), parse_copula(c.copula));
}

Component fixed_component(const RunConfig& c) {
  if (c.fixed != 1 && c.fixed != 2) throw DomainError("--fixed must be 1 or 2");
  return static_cast<Component>(c.fixed);
}

bool is_var(CurveKind k) { return k == CurveKind::lower_var || k == CurveKind::upper_var; }
bool is_tvar(CurveKind k) { return k == CurveKind::lower_tvar || k == CurveKind::upper_tvar; }

CurveSpec curve_spec(const RunConfig& c) {
  if (c.kind.empty()) throw DomainError("--kind is required");
  const CurveKind k = parse_curve_kind(c.kind);
  const Component f = fixed_component(c);
  if (is_var(k)) return CurveSpec::var(k, c.alpha1, f);
  if (is_tvar(k)) return CurveSpec::tvar(k, c.alpha1, f);
  return CurveSpec::rvar(k, LevelRange(c.alpha1, c.alpha2), f);
}

std::string alpha2_cell(const CurveSpec& s) { return is_var(s.kind) ? "NA" : format_number(s.alpha2); }

std::string value_cell(const RiskValue& v) { return v.diverges() ? "DIVERGES" : format_number(v.value()); }

const char* kCurveHeader = "x_fixed,value,kind,alpha1,alpha2,fixed_index";

// Writes to --output when given, else to `out`.
class Sink {
 public:
  Sink(const RunConfig& c, std::ostream& out) : out_(&out) {
    if (!c.output.empty()) {
      file_ = std::make_unique<std::ofstream>(c.output);
      if (!*file_) throw DomainError("cannot open output file " + c.output);
      out_ = file_.get();
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

int cmd_uni(const RunConfig& c, std::ostream& out) {
  if (c.margin1.empty()) throw DomainError("uni needs a margin (--gev, --gpd, --weibull, --exponential, --uniform)");
  const MarginalModel m = parse_margin(c.margin1);
  const std::string measure = c.kind.empty() ? "var" : c.kind;
  if (measure == "var") {
    out << format_number(uni_var(m, c.alpha1)) << "\n";
  } else if (measure == "tvar") {
    out << value_cell(uni_tvar(m, c.alpha1)) << "\n";
  } else if (measure == "rvar") {
    out << format_number(uni_rvar(m, LevelRange(c.alpha1, c.alpha2))) << "\n";
  } else {
    throw DomainError("--measure must be var, tvar or rvar");
  }
  return 0;
}

std::vector<double> curve_grid(const RunConfig& c, const BivariateModel& b, const CurveSpec& spec) {
  if (!c.x_fixed.empty()) return c.x_fixed;
  if (c.points < 2) throw DomainError("--points must be at least 2");
  return band_grid(valid_band(b, spec), c.points);
}

int cmd_curve(const RunConfig& c, std::ostream& out) {
  const BivariateModel b = bivariate(c);
  const CurveSpec spec = curve_spec(c);
  const OrthantCurve curve = orthant_curve(b, spec, curve_grid(c, b, spec));
  Sink sink(c, out);
  std::ostream& os = sink.stream();
  os << kCurveHeader << "\n";
  for (std::size_t k = 0; k < curve.values.size(); ++k)
    os << format_number(curve.fixed_values[k]) << "," << value_cell(curve.values[k]) << "," << to_string(spec.kind)
       << "," << format_number(spec.alpha1) << "," << alpha2_cell(spec) << "," << c.fixed << "\n";
  return 0;
}

double empirical_value(const SampleMatrix& s, CurveKind k, double a1, double a2, std::size_t m, std::size_t free_col,
                       std::span<const double> x) {
  switch (k) {
    case CurveKind::lower_var: return emp_lower_var(s, a1, free_col, x);
    case CurveKind::upper_var: return emp_upper_var(s, a1, free_col, x);
    case CurveKind::lower_rvar: return emp_lower_rvar(s, EstimatorConfig{m, LevelRange(a1, a2)}, free_col, x);
    case CurveKind::upper_rvar: return emp_upper_rvar(s, EstimatorConfig{m, LevelRange(a1, a2)}, free_col, x);
    case CurveKind::lower_tvar: return emp_lower_rvar(s, EstimatorConfig{m, LevelRange(a1, 1.0)}, free_col, x);
    case CurveKind::upper_tvar: return emp_upper_rvar(s, EstimatorConfig{m, LevelRange(a1, 1.0)}, free_col, x);
  }
  throw DomainError("unknown curve kind");
}

int cmd_empirical(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.input.empty()) throw DomainError("empirical needs --input");
  std::ifstream in(c.input);
  if (!in) throw DataError(0, "cannot open " + c.input);
  const SampleMatrix s = read_sample_csv(in);
  if (c.kind.empty()) throw DomainError("--kind is required");
  const CurveKind kind = parse_curve_kind(c.kind);
  const double a2 = is_var(kind) ? c.alpha1 : (is_tvar(kind) ? 1.0 : c.alpha2);
  if (!is_var(kind)) LevelRange(c.alpha1, a2);
  const std::size_t d = s.cols();

  std::vector<std::vector<double>> points;
  std::size_t free_col = 0;
  std::string fixed_label;
  if (d == 2 && c.free_index == 0) {
    const std::size_t fixed_col = static_cast<std::size_t>(fixed_component(c)) - 1;
    free_col = 1 - fixed_col;
    fixed_label = std::to_string(fixed_col + 1);
    std::vector<double> xs = c.x_fixed;
    if (xs.empty()) {
      if (c.points < 2) throw DomainError("--points must be at least 2");
      const std::vector<double> col = s.column(fixed_col);
      const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      for (std::size_t k = 0; k < c.points; ++k)
        xs.push_back(*lo + (*hi - *lo) * static_cast<double>(k) / static_cast<double>(c.points - 1));
    }
    for (double x : xs) points.push_back({x});
  } else {
    if (c.free_index < 1 || static_cast<std::size_t>(c.free_index) > d)
      throw DomainError("--free-index must name a column in 1.." + std::to_string(d));
    free_col = static_cast<std::size_t>(c.free_index) - 1;
    if (c.x_fixed.size() != d - 1)
      throw DomainError("--x must list the " + std::to_string(d - 1) + " conditioning coordinates");
    points.push_back(c.x_fixed);
    for (std::size_t j = 0; j < d; ++j)
      if (j != free_col) fixed_label += (fixed_label.empty() ? "" : ";") + std::to_string(j + 1);
  }

  Sink sink(c, out);
  std::ostream& os = sink.stream();
  os << kCurveHeader << "\n";
  for (const auto& p : points) {
    std::string value;
    try {
      value = format_number(empirical_value(s, kind, c.alpha1, a2, c.m, free_col, p));
    } catch (const DomainError& e) {
      value = "NA";
      err << "x_fixed=" << format_number(p[0]) << ": " << e.what() << "\n";
    }
    std::string xcell;
    for (std::size_t i = 0; i < p.size(); ++i) xcell += (i ? ";" : "") + format_number(p[i]);
    os << xcell << "," << value << "," << to_string(kind) << "," << format_number(c.alpha1) << ","
       << (is_var(kind) ? std::string("NA") : format_number(a2)) << "," << fixed_label << "\n";
  }
  return 0;
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const BivariateModel b = bivariate(c);
  const CurveSpec spec = curve_spec(c);
  const ConsistencyReport r = consistency_experiment(b, c.reps, c.n, spec, c.m, curve_grid(c, b, spec), c.seed);
  for (const auto& f : r.failures) err << f << "\n";
  Sink sink(c, out);
  std::ostream& os = sink.stream();
  os << "# seed=" << c.seed << "\n" << kCurveHeader << ",rep_mean,rep_sd\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k)
    os << format_number(r.grid[k]) << "," << format_number(r.theoretical[k]) << "," << to_string(spec.kind) << ","
       << format_number(spec.alpha1) << "," << alpha2_cell(spec) << "," << c.fixed << ","
       << format_number(r.mean_estimate[k]) << "," << format_number(r.sd_estimate[k]) << "\n";
  return 0;
}

int cmd_sensitivity(const RunConfig& c, std::ostream& out) {
  const BivariateModel b = bivariate(c);
  if (c.kind.empty()) throw DomainError("--target is required");
  if (c.x_fixed.size() != 1) throw DomainError("sensitivity needs a single --x value");
  const SensitivityTarget t = parse_sensitivity_target(c.kind);
  const SensitivityFunction s = sensitivity(b, t, c.alpha1, c.alpha2, c.x_fixed[0], fixed_component(c));
  const std::vector<double> z = c.z.empty() ? default_z_grid(s, std::max<std::size_t>(c.points, 2)) : c.z;
  const SensitivityProfile p = sensitivity_profile(s, z);
  Sink sink(c, out);
  std::ostream& os = sink.stream();
  os << "z,S,branch\n";
  for (std::size_t k = 0; k < p.z_grid.size(); ++k)
    os << format_number(p.z_grid[k]) << "," << format_number(p.values[k]) << "," << to_string(p.branches[k]) << "\n";
  os << "bounded=" << (p.bounded ? "true" : "false") << " sup_abs=" << format_number(p.sup_abs) << "\n";
  return 0;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "uni") return cmd_uni(c, out);
  if (c.command == "curve") return cmd_curve(c, out);
  if (c.command == "empirical") return cmd_empirical(c, out, err);
  if (c.command == "simulate") return cmd_simulate(c, out, err);
  if (c.command == "sensitivity") return cmd_sensitivity(c, out);
  throw DomainError("unknown command \"" + c.command + "\"");
}

void add_model_options(CLI::App* sc, Flags& f, RunConfig& c) {
  sc->add_option("--x1", f.x1, "first margin, e.g. weibull shape=2 scale=50")->expected(1, -1);
  sc->add_option("--x2", f.x2, "second margin")->expected(1, -1);
  sc->add_option("--copula", f.copula, "independence | comonotone | countermonotone | gumbel theta=<v>")
      ->expected(1, -1);
  sc->add_option("--theta", f.theta, "Gumbel parameter (shorthand for --copula gumbel theta=<v>)");
  sc->add_option("--fixed", c.fixed, "index of the fixed coordinate (1 or 2)");
}

void add_level_options(CLI::App* sc, Flags& f, RunConfig& c) {
  sc->add_option("--alpha", f.alpha, "level for var/tvar");
  sc->add_option("--alpha1", c.alpha1, "lower level");
  sc->add_option("--alpha2", c.alpha2, "upper level");
}

void add_list_option(CLI::App* sc, const std::string& name, std::vector<double>& target, const std::string& help) {
  sc->add_option_function<std::string>(
      name, [&target, name](const std::string& v) { target = to_list(name, v); }, help);
}

// Pulls `--config <path>` out of args and returns the loaded config.
RunConfig preload(std::vector<std::string>& args) {
  RunConfig c;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    c = parse_run_config(ss.str());
    if (!c.command.empty() && (args.empty() || args[0].rfind("-", 0) == 0)) args.insert(args.begin(), c.command);
    break;
  }
  return c;
}

}  // namespace

// -------------------------------------------------------------------------

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

MarginalModel parse_margin(const std::string& text) {
  auto [family, p] = family_params(text);
  MarginalModel m = [&]() -> MarginalModel {
    if (family == "gev") {
      const double mu = take(p, family, "mu"), sigma = take(p, family, "sigma"), xi = take(p, family, "xi");
      return Gev{mu, sigma, xi};
    }
    if (family == "gpd") {
      const double u = take(p, family, "u"), sigma = take(p, family, "sigma"), xi = take(p, family, "xi");
      const double zeta = p.count("zeta") ? take(p, family, "zeta") : 1.0;
      return GpdTail{u, sigma, xi, zeta};
    }
    if (family == "weibull") {
      const double shape = take(p, family, "shape"), scale = take(p, family, "scale");
      return Weibull{shape, scale};
    }
    if (family == "exponential") return Exponential{take(p, family, "lambda")};
    if (family == "uniform") {
      const double lo = take(p, family, "lo"), hi = take(p, family, "hi");
      return Uniform{lo, hi};
    }
    throw DomainError("unknown margin family \"" + family + "\"");
  }();
  no_leftovers(p, family);
  return m;
}

std::string margin_text(const MarginalModel& m) {
  if (m.is<Gev>()) {
    const auto& g = m.as<Gev>();
    return "gev mu=" + exact(g.mu) + " sigma=" + exact(g.sigma) + " xi=" + exact(g.xi);
  }
  if (m.is<GpdTail>()) {
    const auto& g = m.as<GpdTail>();
    return "gpd u=" + exact(g.u) + " sigma=" + exact(g.sigma) + " xi=" + exact(g.xi) + " zeta=" + exact(g.zeta);
  }
  if (m.is<Weibull>()) {
    const auto& g = m.as<Weibull>();
    return "weibull shape=" + exact(g.shape) + " scale=" + exact(g.scale);
  }
  if (m.is<Exponential>()) return "exponential lambda=" + exact(m.as<Exponential>().lambda);
  if (m.is<Uniform>()) {
    const auto& g = m.as<Uniform>();
    return "uniform lo=" + exact(g.lo) + " hi=" + exact(g.hi);
  }
  throw DomainError("margin has no text form: " + m.describe());
}

Copula parse_copula(const std::string& text) {
  auto [family, p] = family_params(text);
  Copula c = [&]() -> Copula {
    if (family == "independence" || family == "indep" || family == "pi") return Independence{};
    if (family == "comonotone" || family == "m") return Comonotone{};
    if (family == "countermonotone" || family == "w") return Countermonotone{};
    if (family == "gumbel") return Gumbel{take(p, family, "theta")};
    throw DomainError("unknown copula \"" + family + "\"");
  }();
  no_leftovers(p, family);
  return c;
}

std::string copula_text(const Copula& c) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Independence>) return "independence";
        else if constexpr (std::is_same_v<T, Comonotone>) return "comonotone";
        else if constexpr (std::is_same_v<T, Countermonotone>) return "countermonotone";
        else return "gumbel theta=" + exact(p.theta);
      },
      c.params());
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "command=" << command << "\n"
     << "margin1=" << margin1 << "\n"
     << "margin2=" << margin2 << "\n"
     << "copula=" << copula << "\n"
     << "kind=" << kind << "\n"
     << "alpha1=" << exact(alpha1) << "\n"
     << "alpha2=" << exact(alpha2) << "\n"
     << "fixed=" << fixed << "\n"
     << "free_index=" << free_index << "\n"
     << "points=" << points << "\n"
     << "m=" << m << "\n"
     << "n=" << n << "\n"
     << "reps=" << reps << "\n"
     << "seed=" << seed << "\n"
     << "x_fixed=" << join_exact(x_fixed) << "\n"
     << "z=" << join_exact(z) << "\n"
     << "input=" << input << "\n"
     << "output=" << output << "\n";
  return os.str();
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(line_no) + " has no '='");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key == "command") c.command = val;
    else if (key == "margin1") c.margin1 = val.empty() ? "" : margin_text(parse_margin(val));
    else if (key == "margin2") c.margin2 = val.empty() ? "" : margin_text(parse_margin(val));
    else if (key == "copula") c.copula = copula_text(parse_copula(val));
    else if (key == "kind") c.kind = val;
    else if (key == "alpha1") c.alpha1 = to_double(key, val);
    else if (key == "alpha2") c.alpha2 = to_double(key, val);
    else if (key == "fixed") c.fixed = to_integer<int>(key, val);
    else if (key == "free_index") c.free_index = to_integer<int>(key, val);
    else if (key == "points") c.points = to_integer<std::size_t>(key, val);
    else if (key == "m") c.m = to_integer<std::size_t>(key, val);
    else if (key == "n") c.n = to_integer<std::size_t>(key, val);
    else if (key == "reps") c.reps = to_integer<std::size_t>(key, val);
    else if (key == "seed") c.seed = to_integer<std::uint64_t>(key, val);
    else if (key == "x_fixed") c.x_fixed = to_list(key, val);
    else if (key == "z") c.z = to_list(key, val);
    else if (key == "input") c.input = val;
    else if (key == "output") c.output = val;
    else throw DomainError("unknown config key \"" + key + "\"");
  }
  return c;
}

SampleMatrix read_sample_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t d = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      d = split(trim(line), ',').size();
      break;
    }
  }
  if (d == 0) throw DataError(line_no, "missing header");
  if (d < 2) throw DataError(line_no, "need at least two columns");
  std::vector<double> data;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (fields.size() != d)
      throw DataError(line_no, "expected " + std::to_string(d) + " fields, found " + std::to_string(fields.size()));
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_double(f, v) || !std::isfinite(v)) throw DataError(line_no, "not a finite number: \"" + f + "\"");
      data.push_back(v);
    }
  }
  if (data.size() < 2 * d) throw DataError(line_no, "need at least two data rows");
  return SampleMatrix(d, std::move(data));
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> args = raw_args;
    RunConfig c = preload(args);
    Flags f;

    CLI::App app{"Range Value-at-Risk engine"};
    app.name("rvar");
    app.require_subcommand(1);

    auto* uni = app.add_subcommand("uni", "univariate VaR, TVaR or RVaR");
    for (auto [name, target] : {std::pair{"--gev", &f.gev}, {"--gpd", &f.gpd}, {"--weibull", &f.weibull},
                                {"--exponential", &f.exponential}, {"--uniform", &f.uniform}})
      uni->add_option(name, *target, "margin parameters key=value")->expected(1, -1);
    uni->add_option("--margin", f.margin, "margin spec: family key=value ...")->expected(1, -1);
    uni->add_option("--measure", c.kind, "var | tvar | rvar");
    add_level_options(uni, f, c);

    auto* curve = app.add_subcommand("curve", "orthant curve over the valid band");
    add_model_options(curve, f, c);
    add_level_options(curve, f, c);
    curve->add_option("--kind", c.kind, "lower_var | upper_var | lower_rvar | upper_rvar | lower_tvar | upper_tvar");
    curve->add_option("--points", c.points, "grid size");
    add_list_option(curve, "--x", c.x_fixed, "explicit comma-separated x_fixed values");
    curve->add_option("--out", c.output, "output CSV path");

    auto* emp = app.add_subcommand("empirical", "empirical orthant estimates from a CSV sample");
    emp->add_option("--input", c.input, "CSV with header x1,x2[,...]");
    emp->add_option("--kind", c.kind, "curve kind");
    add_level_options(emp, f, c);
    emp->add_option("--fixed", c.fixed, "fixed column for two-column data");
    emp->add_option("--free-index", c.free_index, "measured column (1-based); required when d > 2");
    emp->add_option("--m", c.m, "summation steps");
    emp->add_option("--points", c.points, "grid size when --x is absent");
    add_list_option(emp, "--x", c.x_fixed, "x_fixed values (d = 2) or the conditioning point (d > 2)");
    emp->add_option("--out", c.output, "output CSV path");

    auto* sim = app.add_subcommand("simulate", "replicated empirical vs theoretical curves");
    add_model_options(sim, f, c);
    add_level_options(sim, f, c);
    sim->add_option("--kind", c.kind, "curve kind");
    sim->add_option("--reps", c.reps, "replications");
    sim->add_option("--n", c.n, "sample size");
    sim->add_option("--m", c.m, "summation steps");
    sim->add_option("--seed", c.seed, "base seed");
    sim->add_option("--points", c.points, "grid size");
    add_list_option(sim, "--x", c.x_fixed, "explicit x_fixed values");
    sim->add_option("--out", c.output, "output CSV path");

    auto* sens = app.add_subcommand("sensitivity", "sensitivity function of an orthant measure");
    add_model_options(sens, f, c);
    add_level_options(sens, f, c);
    sens->add_option("--target", c.kind, "lower_var | upper_var | lower_rvar | upper_rvar | lower_tvar | upper_tvar");
    add_list_option(sens, "--x", c.x_fixed, "x_fixed");
    add_list_option(sens, "--z", c.z, "comma-separated contamination points");
    sens->add_option("--points", c.points, "size of the default z grid");
    sens->add_option("--out", c.output, "output CSV path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }

    for (auto* sc : app.get_subcommands()) c.command = sc->get_name();
    if (!std::isnan(f.alpha)) c.alpha1 = f.alpha;
    std::vector<std::string> chosen;
    for (auto [family, toks] : {std::pair{"gev", &f.gev}, {"gpd", &f.gpd}, {"weibull", &f.weibull},
                                {"exponential", &f.exponential}, {"uniform", &f.uniform}})
      if (!toks->empty()) chosen.push_back(std::string(family) + " " + join_words(*toks));
    if (!f.margin.empty()) chosen.push_back(join_words(f.margin));
    if (chosen.size() > 1) throw DomainError("give exactly one margin");
    if (!chosen.empty()) c.margin1 = margin_text(parse_margin(chosen[0]));
    if (!f.x1.empty()) c.margin1 = margin_text(parse_margin(join_words(f.x1)));
    if (!f.x2.empty()) c.margin2 = margin_text(parse_margin(join_words(f.x2)));
    if (!f.copula.empty()) c.copula = copula_text(parse_copula(join_words(f.copula)));
    if (!std::isnan(f.theta)) c.copula = copula_text(parse_copula("gumbel theta=" + exact(f.theta)));

    return dispatch(c, out, err);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rvar::cli
