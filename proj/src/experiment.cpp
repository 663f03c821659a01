#include "ixy/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "ixy/analysis.hpp"
#include "ixy/ed_oracle.hpp"
#include "ixy/metrology.hpp"
#include "ixy/momentum.hpp"
#include "ixy/parallel.hpp"

namespace ixy {

using nlohmann::json;

namespace {

enum class Kind { Number, Int, String, Numbers, Ints, ZList, ZValue };

const std::map<std::string, Kind>& schema() {
  static const std::map<std::string, Kind> keys = {
      {"N", Kind::Int},
      {"Z", Kind::ZValue},
      {"alpha", Kind::Number},
      {"gamma", Kind::Number},
      {"h", Kind::Number},
      {"anisotropy", Kind::String},
      {"mode_range", Kind::String},
      {"theta", Kind::String},
      {"output_dir", Kind::String},
      {"threads", Kind::Int},
      {"Z_list", Kind::ZList},
      {"alpha_list", Kind::Numbers},
      {"N_list", Kind::Ints},
      {"dh_list", Kind::Numbers},
      {"h_list", Kind::Numbers},
      {"gamma_list", Kind::Numbers},
      {"t_list", Kind::Numbers},
      {"transient_t_min", Kind::Number},
      {"transient_t_max", Kind::Number},
      {"transient_n", Kind::Int},
      {"long_t_min", Kind::Number},
      {"long_t_max", Kind::Number},
      {"long_n", Kind::Int},
      {"t_eval", Kind::Number},
      {"t0", Kind::Number},
      {"t1", Kind::Number},
      {"n_grid", Kind::Int},
      {"fd_step", Kind::Number},
      {"anchor", Kind::String},
      {"ep_bracket", Kind::Numbers},
      {"ep_tol", Kind::Number},
      {"oracle_tol", Kind::Number},
  };
  return keys;
}

json base_defaults() {
  return {
      {"N", 1024},
      {"Z", 1},
      {"alpha", 1.5},
      {"gamma", 0.3},
      {"h", -0.7},
      {"anisotropy", "NonHermitian"},
      {"mode_range", "Full"},
      {"theta", "h"},
      {"output_dir", "out"},
      {"threads", 0},
      {"transient_t_min", 1e-3},
      {"transient_t_max", 2.0},
      {"transient_n", 60},
      {"long_t_min", 200.0},
      {"long_t_max", 1000.0},
      {"long_n", 60},
      {"fd_step", 0.0},
      {"ep_bracket", {-1.2, -0.7}},
      {"ep_tol", 1e-9},
  };
}

json experiment_defaults(Experiment e) {
  json d = base_defaults();
  switch (e) {
    case Experiment::Dispersion:
      break;
    case Experiment::ExceptionalPoint:
      d["gamma"] = 0.5;
      break;
    case Experiment::EpTable:
      d["gamma"] = 0.5;
      d["N"] = 65536;
      d["Z_list"] = {2, 3, 4, 5, 6, 7, "N/2"};
      d["alpha_list"] = {0.5, 0.8, 1.0, 1.2, 1.5, 2.0, 3.0, 5.0};
      break;
    case Experiment::QfiDynamics:
      d["Z_list"] = {1, 2, 4, "N/2"};
      break;
    case Experiment::TimeScaling:
      d["Z_list"] = {1, 2, 4, 8, "N/2"};
      d["alpha_list"] = {1.5};
      break;
    case Experiment::SizeScaling:
      d["Z"] = 4;
      d["alpha_list"] = {1.5};
      d["h_list"] = {-3.0, -0.5};
      d["N_list"] = {128, 256, 512, 1024, 2048, 4096};
      d["t_eval"] = 200.0;
      break;
    case Experiment::StationaryScaling:
      d["gamma"] = 0.5;
      d["Z_list"] = {2};
      d["N_list"] = {1024, 2048, 4096, 8192};
      d["dh_list"] = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
      d["anchor"] = "exceptional-point";
      break;
    case Experiment::Ratio:
      d["Z_list"] = {1};
      d["alpha_list"] = {1.5};
      d["h_list"] = {-0.7};
      d["t0"] = 200.0;
      d["t1"] = 1000.0;
      d["n_grid"] = 801;
      break;
    case Experiment::OracleCheck:
      d["N_list"] = {4, 6, 8};
      d["Z_list"] = {1, 2};
      d["gamma_list"] = {0.0, 0.3};
      d["h_list"] = {-0.7, -1.5};
      d["t_list"] = {0.5, 1.0, 2.0};
      d["theta"] = "both";
      d["oracle_tol"] = 1e-8;
      break;
  }
  return d;
}

int line_at_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

int key_line(const std::string& text, const std::string& key) {
  const std::regex pattern("\"" + std::regex_replace(key, std::regex(R"([.^$|()\[\]{}*+?\\])"), R"(\$&)") +
                           "\"\\s*:");
  std::smatch m;
  if (!std::regex_search(text, m, pattern)) return 0;
  return line_at_offset(text, static_cast<std::size_t>(m.position(0)));
}

bool is_half_n(const json& v) { return v.is_string() && v.get<std::string>() == "N/2"; }

std::string z_label(int z, int n) { return z == 0 ? "N/2(" + std::to_string(n / 2) + ")" : std::to_string(z); }

std::string file_tag(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') out += c;
    else if (c == '/') out += "half";
  }
  return out;
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

json fit_json(const PowerFit& fit) {
  return {{"slope", fit.slope},           {"intercept", fit.intercept},
          {"r_squared", fit.r_squared},   {"slope_stderr", fit.slope_stderr},
          {"window", {fit.x_min, fit.x_max}}, {"n_points", fit.n_points},
          {"n_excluded", fit.n_excluded}};
}

json params_json(const ModelParams& p) {
  return {{"N", p.N},
          {"Z", p.Z},
          {"alpha", p.alpha},
          {"gamma", p.gamma},
          {"h", p.h},
          {"anisotropy", to_string(p.anisotropy)},
          {"mode_range", to_string(p.mode_range)}};
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw NumericalError("cannot open " + path.string() + " for writing");
    out_ << header << '\n';
  }
  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(fields), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  std::ofstream out_;
};

struct Context {
  const ExperimentConfig& config;
  std::filesystem::path dir;
  std::ostream& log;
  RunReport report;
  json details = json::object();

  std::filesystem::path output(const std::string& name) {
    report.outputs.push_back(name);
    return dir / name;
  }
  void write_json(const std::string& name, const json& value) {
    std::ofstream out(output(name));
    out << value.dump(2) << '\n';
  }
  void warn(const std::string& message) {
    report.warnings.push_back(message);
    log << "warning: " << message << '\n';
  }
};

std::vector<Parameter> thetas(const ExperimentConfig& c) {
  const auto text = c.get_string("theta");
  if (text == "both") return {Parameter::Field, Parameter::Anisotropy};
  return {parse_parameter(text)};
}

TimeScalingGrids time_grids(const ExperimentConfig& c) {
  TimeScalingGrids g;
  g.transient = {c.get_double("transient_t_min"), c.get_double("transient_t_max"), c.get_int("transient_n")};
  g.long_time = {c.get_double("long_t_min"), c.get_double("long_t_max"), c.get_int("long_n")};
  return g;
}

json grids_json(const TimeScalingGrids& g) {
  return {{"transient", {{"t_min", g.transient.t_min}, {"t_max", g.transient.t_max}, {"n", g.transient.n}, {"spacing", "log"}}},
          {"long_time", {{"t_min", g.long_time.t_min}, {"t_max", g.long_time.t_max}, {"n", g.long_time.n}, {"spacing", "log"}}}};
}

ModelParams with_z(ModelParams p, int z) {
  p.Z = z == 0 ? p.N / 2 : z;
  validate(p);
  return p;
}

void run_dispersion(Context& ctx) {
  const ModelParams p = ctx.config.model();
  const auto blocks = build_blocks(p);
  CsvWriter csv(ctx.output("dispersion.csv"), "p,phi,a,b,eps_sq,eps_re,eps_im");
  for (const auto& b : blocks) {
    const auto e = dispersion(b);
    csv.row(b.p, b.phi, b.a, b.b, b.eps_sq, e.real(), e.imag());
  }
  const auto cls = classify_phase(blocks);
  ctx.details["phase"] = {{"label", to_string(cls.label)},
                          {"min_eps_sq", cls.min_eps_sq},
                          {"argmin_mode", cls.argmin_mode},
                          {"tolerance", kPhaseTolerance}};
  ctx.details["critical_fields"] = {{"h_c_zero", critical_field_zero()},
                                    {"h_c_pi", critical_field_pi(p.alpha, p.Z)}};
  ctx.log << "phase: " << to_string(cls.label) << " (min eps^2 = " << format_number(cls.min_eps_sq)
          << " at p = " << cls.argmin_mode << ")\n";
}

json ep_json(const EPResult& r) {
  return {{"h_e", r.h_e}, {"bracket", {r.h_lo, r.h_hi}}, {"tolerance", r.tol}, {"iterations", r.iterations},
          {"gamma", r.gamma}, {"alpha", r.alpha}, {"Z", r.Z}, {"N", r.N}};
}

void run_exceptional_point(Context& ctx) {
  const auto& c = ctx.config;
  const auto bracket = c.get_doubles("ep_bracket");
  const auto r = find_exceptional_point(c.model(), bracket[0], bracket[1], c.get_double("ep_tol"));
  CsvWriter csv(ctx.output("exceptional_point.csv"), "Z,alpha,gamma,N,h_e,iterations");
  csv.row(r.Z, r.alpha, r.gamma, r.N, r.h_e, r.iterations);
  ctx.write_json("exceptional_point.json", ep_json(r));
  ctx.log << "h_e = " << format_number(r.h_e) << '\n';
}

void run_ep_table(Context& ctx) {
  const auto& c = ctx.config;
  const auto bracket = c.get_doubles("ep_bracket");
  const auto zs = c.get_z_list("Z_list");
  const auto alphas = c.get_doubles("alpha_list");
  const ModelParams base = c.model();

  std::vector<EPResult> cells(zs.size() * alphas.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ModelParams p = with_z(base, zs[i / alphas.size()]);
    p.alpha = alphas[i % alphas.size()];
    cells[i] = find_exceptional_point(p, bracket[0], bracket[1], c.get_double("ep_tol"));
    ctx.log << "Z=" << z_label(zs[i / alphas.size()], p.N) << " alpha=" << short_number(p.alpha)
            << " h_e=" << format_number(cells[i].h_e) << '\n';
  }
  CsvWriter csv(ctx.output("ep_table.csv"), "Z,alpha,gamma,N,h_e,iterations");
  for (const auto& r : cells) csv.row(r.Z, r.alpha, r.gamma, r.N, r.h_e, r.iterations);
}

void run_qfi_dynamics(Context& ctx) {
  const auto& c = ctx.config;
  const auto grids = time_grids(c);
  std::vector<double> times;
  if (c.values().contains("t_list")) {
    times = c.get_doubles("t_list");
  } else {
    times = grids.transient.points();
    const auto late = grids.long_time.points();
    times.insert(times.end(), late.begin(), late.end());
    ctx.details["grids"] = grids_json(grids);
  }
  const ModelParams base = c.model();
  for (Parameter theta : thetas(c)) {
    for (int z : c.get_z_list("Z_list")) {
      const ModelParams p = with_z(base, z);
      const auto samples = dynamical_qfi_series(p, times, theta);
      CsvWriter csv(ctx.output("qfi_dynamics_theta-" + to_string(theta) + "_Z" + file_tag(z == 0 ? "N/2" : std::to_string(z)) + ".csv"),
                    "t,qfi");
      for (const auto& s : samples) csv.row(s.x, s.value);
    }
  }
}

void run_time_scaling(Context& ctx) {
  const auto& c = ctx.config;
  const auto grids = time_grids(c);
  ctx.details["grids"] = grids_json(grids);
  const ModelParams base = c.model();
  json fits = json::array();
  CsvWriter summary(ctx.output("time_scaling_summary.csv"),
                    "theta,Z,alpha,beta_transient,beta_transient_stderr,beta_long,beta_long_stderr");
  for (Parameter theta : thetas(c)) {
    for (double alpha : c.get_doubles("alpha_list")) {
      for (int z : c.get_z_list("Z_list")) {
        ModelParams p = with_z(base, z);
        p.alpha = alpha;
        const auto r = sweep_time_scaling(p, theta, grids);
        const std::string tag = "theta-" + to_string(theta) + "_Z" + file_tag(z == 0 ? "N/2" : std::to_string(z)) +
                                "_alpha" + short_number(alpha);
        CsvWriter csv(ctx.output("time_scaling_" + tag + ".csv"), "t,qfi");
        for (const auto& s : r.series.samples) csv.row(s.x, s.value);
        summary.row(to_string(theta), p.Z, alpha, r.transient.slope, r.transient.slope_stderr, r.long_time.slope,
                    r.long_time.slope_stderr);
        fits.push_back({{"theta", to_string(theta)}, {"params", params_json(p)},
                        {"transient", fit_json(r.transient)}, {"long_time", fit_json(r.long_time)}});
        ctx.log << tag << ": transient " << format_number(r.transient.slope) << ", long-time "
                << format_number(r.long_time.slope) << '\n';
      }
    }
  }
  ctx.write_json("time_scaling_fits.json", fits);
}

void run_size_scaling(Context& ctx) {
  const auto& c = ctx.config;
  const auto sizes = c.get_ints("N_list");
  const double t_eval = c.get_double("t_eval");
  const ModelParams base = c.model();
  json fits = json::array();
  CsvWriter summary(ctx.output("size_scaling_summary.csv"), "theta,alpha,h,mu,mu_stderr,r_squared");
  for (Parameter theta : thetas(c)) {
    for (double alpha : c.get_doubles("alpha_list")) {
      for (double h : c.get_doubles("h_list")) {
        ModelParams p = base;
        p.alpha = alpha;
        p.h = h;
        const auto r = sweep_size_scaling(p, theta, t_eval, sizes, c.z_is_half_n());
        const std::string tag = "theta-" + to_string(theta) + "_alpha" + short_number(alpha) + "_h" + short_number(h);
        CsvWriter csv(ctx.output("size_scaling_" + tag + ".csv"), "N,qfi");
        for (const auto& s : r.series.samples) csv.row(static_cast<int>(s.x), s.value);
        summary.row(to_string(theta), alpha, h, r.fit.slope, r.fit.slope_stderr, r.fit.r_squared);
        json params = params_json(p);
        params.erase("N");
        fits.push_back({{"theta", to_string(theta)}, {"params", params}, {"t_eval", t_eval}, {"N_list", sizes},
                        {"fit", fit_json(r.fit)}});
        ctx.log << tag << ": mu = " << format_number(r.fit.slope) << '\n';
      }
    }
  }
  ctx.write_json("size_scaling_fits.json", fits);
}

void run_stationary(Context& ctx) {
  const auto& c = ctx.config;
  const auto sizes = c.get_ints("N_list");
  const auto dhs = c.get_doubles("dh_list");
  const auto bracket = c.get_doubles("ep_bracket");
  const Anchor anchor = parse_anchor(c.get_string("anchor"));
  StationarySweepOptions options;
  options.ep_lo = bracket[0];
  options.ep_hi = bracket[1];
  options.ep_tol = c.get_double("ep_tol");
  options.base_step = c.get_double("fd_step");

  json fits = json::array();
  for (Parameter theta : thetas(c)) {
    for (int z : c.get_z_list("Z_list")) {
      ModelParams p = c.model();
      options.z_half_n = z == 0;
      if (z != 0) p.Z = z;
      const auto cells = sweep_stationary_scaling(p, theta, dhs, sizes, anchor, options);
      const std::string tag = "theta-" + to_string(theta) + "_Z" + file_tag(z == 0 ? "N/2" : std::to_string(z));
      CsvWriter csv(ctx.output("stationary_" + tag + ".csv"), "dh,N,qfi,mu_fit_group");
      int group = 0;
      for (const auto& cell : cells) {
        json points = json::array();
        for (const auto& pt : cell.points) {
          csv.row(cell.dh, pt.N, pt.qfi, group);
          points.push_back({{"N", pt.N}, {"anchor_h", pt.anchor_h}, {"h", pt.h}, {"fd_step", pt.fd_step},
                            {"straddling_modes", pt.straddling_modes}, {"coalesced_modes", pt.coalesced_modes}});
          if (pt.straddling_modes > 0)
            ctx.warn(tag + " dh=" + format_number(cell.dh) + " N=" + std::to_string(pt.N) + ": " +
                     std::to_string(pt.straddling_modes) + " modes straddle an exceptional point within the FD stencil");
          if (pt.coalesced_modes > 0)
            ctx.warn(tag + " dh=" + format_number(cell.dh) + " N=" + std::to_string(pt.N) + ": " +
                     std::to_string(pt.coalesced_modes) + " modes evaluated at coalescence");
        }
        fits.push_back({{"theta", to_string(theta)}, {"Z", z == 0 ? json("N/2") : json(z)}, {"dh", cell.dh},
                        {"mu_fit_group", group}, {"anchor", to_string(anchor)}, {"fit", fit_json(cell.fit)},
                        {"points", points}});
        ctx.log << tag << " dh=" << format_number(cell.dh) << ": mu = " << format_number(cell.fit.slope) << '\n';
        ++group;
      }
    }
  }
  ctx.write_json("stationary_fits.json", fits);
}

void run_ratio(Context& ctx) {
  const auto& c = ctx.config;
  const double t0 = c.get_double("t0"), t1 = c.get_double("t1");
  const int n_grid = c.get_int("n_grid");
  ctx.details["grids"] = {{"t0", t0}, {"t1", t1}, {"n_grid", n_grid}, {"spacing", "uniform"}, {"rule", "trapezoid"}};
  json summary = json::array();
  for (Parameter theta : thetas(c)) {
    for (double alpha : c.get_doubles("alpha_list")) {
      for (double h : c.get_doubles("h_list")) {
        for (int z : c.get_z_list("Z_list")) {
          ModelParams p = with_z(c.model(), z);
          p.alpha = alpha;
          p.h = h;
          const auto r = qfi_ratio_time_avg(p, theta, t0, t1, n_grid);
          const std::string tag = "theta-" + to_string(theta) + "_Z" + file_tag(z == 0 ? "N/2" : std::to_string(z)) +
                                  "_alpha" + short_number(alpha) + "_h" + short_number(h);
          CsvWriter csv(ctx.output("ratio_" + tag + ".csv"), "t,qfi_nh,qfi_h,ratio");
          for (const auto& s : r.per_sample) {
            if (s.dropped) csv.row(s.t, s.qfi_nh, s.qfi_h, "nan");
            else csv.row(s.t, s.qfi_nh, s.qfi_h, s.ratio);
          }
          csv.row("mean", "", "", r.mean_ratio);
          if (r.n_dropped > 0) ctx.warn(tag + ": " + std::to_string(r.n_dropped) + " ratio points dropped");
          summary.push_back({{"theta", to_string(theta)}, {"params", params_json(p)}, {"mean_ratio", r.mean_ratio},
                             {"n_samples", r.n_samples}, {"n_dropped", r.n_dropped}});
          ctx.log << tag << ": <r> = " << format_number(r.mean_ratio) << '\n';
        }
      }
    }
  }
  ctx.write_json("ratio_summary.json", summary);
}

void run_oracle_check(Context& ctx) {
  const auto& c = ctx.config;
  const double tol = c.get_double("oracle_tol");
  const ModelParams base = c.model();
  CsvWriter csv(ctx.output("oracle_check.csv"),
                "N,Z,gamma,h,t,theta,qfi_momentum,qfi_dense,rel_err,rel_err_other_mode_range,result");
  int failures = 0, total = 0;
  for (int n : c.get_ints("N_list")) {
    for (int z : c.get_z_list("Z_list")) {
      for (double gamma : c.get_doubles("gamma_list")) {
        for (double h : c.get_doubles("h_list")) {
          for (double t : c.get_doubles("t_list")) {
            for (Parameter theta : thetas(c)) {
              ModelParams p = base;
              p.N = n;
              p.Z = z == 0 ? n / 2 : z;
              p.gamma = gamma;
              p.h = h;
              validate(p);
              ModelParams other = p;
              other.mode_range = p.mode_range == ModeRange::Full ? ModeRange::Reduced : ModeRange::Full;
              const double dense = dense_evolve_qfi(p, t, theta).value;
              const double mom = dynamical_qfi(p, t, theta).value;
              const double alt = dynamical_qfi(other, t, theta).value;
              const double scale = std::max(std::abs(dense), 1e-300);
              const double err = std::abs(mom - dense) / scale, err_alt = std::abs(alt - dense) / scale;
              // Both vanish identically when nothing depends on theta.
              const bool pass = err <= tol || (std::abs(dense) < 1e-14 && std::abs(mom) < 1e-14);
              failures += !pass;
              ++total;
              csv.row(n, p.Z, gamma, h, t, to_string(theta), mom, dense, err, err_alt, pass ? "PASS" : "FAIL");
            }
          }
        }
      }
    }
  }
  ctx.details["oracle"] = {{"cases", total}, {"failures", failures}, {"tolerance", tol},
                           {"mode_range", to_string(base.mode_range)}};
  ctx.log << (failures == 0 ? "PASS" : "FAIL") << ": " << total - failures << "/" << total
          << " cases agree with the dense oracle to " << format_number(tol) << '\n';
  if (failures > 0) ctx.report.exit_code = 3;
}

}  // namespace

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> list = {
      Experiment::Dispersion,  Experiment::ExceptionalPoint, Experiment::EpTable,
      Experiment::QfiDynamics, Experiment::TimeScaling,      Experiment::SizeScaling,
      Experiment::StationaryScaling, Experiment::Ratio,      Experiment::OracleCheck};
  return list;
}

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::Dispersion: return "dispersion";
    case Experiment::ExceptionalPoint: return "exceptional-point";
    case Experiment::EpTable: return "ep-table";
    case Experiment::QfiDynamics: return "qfi-dynamics";
    case Experiment::TimeScaling: return "time-scaling";
    case Experiment::SizeScaling: return "size-scaling";
    case Experiment::StationaryScaling: return "stationary-scaling";
    case Experiment::Ratio: return "ratio";
    case Experiment::OracleCheck: return "oracle-check";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : all_experiments())
    if (to_string(e) == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ExperimentConfig::ExperimentConfig(Experiment experiment)
    : experiment_(experiment), values_(experiment_defaults(experiment)) {}

void ExperimentConfig::set(const std::string& key, json value, int line) {
  if (!schema().contains(key)) {
    throw ConfigError("unknown key '" + key + "'", line);
  }
  values_[key] = std::move(value);
  lines_[key] = line;
}

void ExperimentConfig::merge_text(const std::string& text) {
  json parsed;
  try {
    parsed = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what(), line_at_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!parsed.is_object()) throw ConfigError("config must be a JSON object", 1);
  for (auto it = parsed.begin(); it != parsed.end(); ++it) set(it.key(), it.value(), key_line(text, it.key()));
}

void ExperimentConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  merge_text(buffer.str());
}

void ExperimentConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  if (!schema().contains(key)) throw ConfigError("--set: unknown key '" + key + "'");
  values_[key] = std::move(value);
  lines_.erase(key);
}

int ExperimentConfig::line_of(const std::string& key) const {
  const auto it = lines_.find(key);
  return it == lines_.end() ? 0 : it->second;
}

void ExperimentConfig::fail(const std::string& key, const std::string& message) const {
  throw ConfigError("'" + key + "': " + message, line_of(key));
}

const json& ExperimentConfig::at(const std::string& key) const {
  if (!values_.contains(key)) fail(key, "required by " + to_string(experiment_) + " but not set");
  return values_.at(key);
}

double ExperimentConfig::get_double(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

int ExperimentConfig::get_int(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<int>();
}

std::string ExperimentConfig::get_string(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array() || v.empty()) fail(key, "expected a nonempty list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail(key, "expected a nonempty list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> ExperimentConfig::get_ints(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array() || v.empty()) fail(key, "expected a nonempty list of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(key, "expected a nonempty list of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<int> ExperimentConfig::get_z_list(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array() || v.empty()) fail(key, "expected a nonempty list of integers or \"N/2\"");
  std::vector<int> out;
  for (const auto& e : v) {
    if (is_half_n(e)) out.push_back(0);
    else if (e.is_number_integer() && e.get<int>() >= 1) out.push_back(e.get<int>());
    else fail(key, "entries must be integers >= 1 or \"N/2\"");
  }
  return out;
}

bool ExperimentConfig::z_is_half_n() const { return is_half_n(at("Z")); }

ModelParams ExperimentConfig::model() const {
  ModelParams p;
  p.N = get_int("N");
  const json& z = at("Z");
  if (is_half_n(z)) p.Z = p.N / 2;
  else if (z.is_number_integer()) p.Z = z.get<int>();
  else fail("Z", "expected an integer or \"N/2\"");
  p.alpha = get_double("alpha");
  p.gamma = get_double("gamma");
  p.h = get_double("h");
  try {
    p.anisotropy = parse_anisotropy_mode(get_string("anisotropy"));
  } catch (const DomainError& e) {
    fail("anisotropy", e.what());
  }
  try {
    p.mode_range = parse_mode_range(get_string("mode_range"));
  } catch (const DomainError& e) {
    fail("mode_range", e.what());
  }
  return p;
}

void ExperimentConfig::validate() const {
  for (const auto& [key, kind] : schema()) {
    if (!values_.contains(key)) continue;
    switch (kind) {
      case Kind::Number: get_double(key); break;
      case Kind::Int: get_int(key); break;
      case Kind::String: get_string(key); break;
      case Kind::Numbers: get_doubles(key); break;
      case Kind::Ints: get_ints(key); break;
      case Kind::ZList: get_z_list(key); break;
      case Kind::ZValue: break;
    }
  }

  const ModelParams p = model();
  try {
    ixy::validate(p);
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    const std::string key = msg.rfind("N ", 0) == 0 ? "N" : msg.rfind("Z ", 0) == 0 ? "Z" : msg.rfind("alpha", 0) == 0 ? "alpha" : msg.rfind("gamma", 0) == 0 ? "gamma" : "h";
    fail(key, msg);
  }

  const std::string theta = get_string("theta");
  if (theta != "both") {
    try {
      parse_parameter(theta);
    } catch (const DomainError& e) {
      fail("theta", e.what());
    }
  }
  if (values_.contains("anchor")) {
    try {
      parse_anchor(get_string("anchor"));
    } catch (const DomainError& e) {
      fail("anchor", e.what());
    }
  }
  if (values_.contains("N_list"))
    for (int n : get_ints("N_list"))
      if (n < 4 || n % 2 != 0) fail("N_list", "every N must be even and >= 4, got " + std::to_string(n));
  if (values_.contains("N_list") && values_.contains("Z_list") && experiment_ != Experiment::OracleCheck)
    for (int n : get_ints("N_list"))
      for (int z : get_z_list("Z_list"))
        if (z > n / 2) fail("Z_list", "Z=" + std::to_string(z) + " exceeds N/2 for N=" + std::to_string(n));
  if (values_.contains("Z_list") && !values_.contains("N_list"))
    for (int z : get_z_list("Z_list"))
      if (z > p.N / 2) fail("Z_list", "Z=" + std::to_string(z) + " exceeds N/2 for N=" + std::to_string(p.N));
  if (experiment_ == Experiment::OracleCheck)
    for (int n : get_ints("N_list"))
      if (n > kMaxDenseSites) fail("N_list", "dense oracle supports at most " + std::to_string(kMaxDenseSites) + " sites");
  if (get_doubles("ep_bracket").size() != 2) fail("ep_bracket", "expected [lo, hi]");
  if (!(get_double("ep_tol") > 0)) fail("ep_tol", "must be > 0");
  if (get_double("fd_step") < 0) fail("fd_step", "must be >= 0 (0 selects the default)");
  if (values_.contains("t0") && values_.contains("t1") &&
      !(get_double("t0") > 0 && get_double("t0") < get_double("t1")))
    fail("t0", "need 0 < t0 < t1");
  if (values_.contains("n_grid") && get_int("n_grid") < 2) fail("n_grid", "must be >= 2");
  if (values_.contains("t_eval") && !(get_double("t_eval") > 0)) fail("t_eval", "must be > 0");
  for (const char* key : {"transient", "long"}) {
    const std::string base = key;
    if (!(get_double(base + "_t_min") > 0 && get_double(base + "_t_min") < get_double(base + "_t_max")))
      fail(base + "_t_min", "need 0 < t_min < t_max");
    if (get_int(base + "_n") < 3) fail(base + "_n", "need at least 3 points");
  }
}

RunReport run(const ExperimentConfig& config, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const std::filesystem::path dir = config.get_string("output_dir");
  std::filesystem::create_directories(dir);
  set_thread_count(config.get_int("threads"));

  Context ctx{config, dir, log, {}};
  try {
    switch (config.experiment()) {
      case Experiment::Dispersion: run_dispersion(ctx); break;
      case Experiment::ExceptionalPoint: run_exceptional_point(ctx); break;
      case Experiment::EpTable: run_ep_table(ctx); break;
      case Experiment::QfiDynamics: run_qfi_dynamics(ctx); break;
      case Experiment::TimeScaling: run_time_scaling(ctx); break;
      case Experiment::SizeScaling: run_size_scaling(ctx); break;
      case Experiment::StationaryScaling: run_stationary(ctx); break;
      case Experiment::Ratio: run_ratio(ctx); break;
      case Experiment::OracleCheck: run_oracle_check(ctx); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    ctx.report.exit_code = 3;
    ctx.details["error"] = e.what();
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const ModelParams p = config.model();
  json fd = {{"dense_oracle", "1e-5 max(1, |theta|), one Richardson step"}};
  fd["stationary"] = config.get_double("fd_step") > 0 ? json(config.get_double("fd_step"))
                                                      : json("min(1e-6 max(1, |theta|), |dh|/10), one Richardson step");
  json manifest = {{"tool", "ixy"},
                   {"version", kToolVersion},
                   {"experiment", to_string(config.experiment())},
                   {"config", config.values()},
                   {"mode_range", to_string(p.mode_range)},
                   {"fit_windows", grids_json(time_grids(config))},
                   {"fd_steps", fd},
                   {"wall_time_s", wall},
                   {"threads", thread_count()},
                   {"exit_code", ctx.report.exit_code},
                   {"outputs", ctx.report.outputs},
                   {"warnings", ctx.report.warnings},
                   {"details", ctx.details}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
  ctx.report.outputs.push_back("manifest.json");
  return ctx.report;
}

}  // namespace ixy
