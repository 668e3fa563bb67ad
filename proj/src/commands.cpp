#include "cmtomo/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cmtomo/clt.hpp"
#include "cmtomo/convolution.hpp"
#include "cmtomo/discrepancy.hpp"
#include "cmtomo/errors.hpp"
#include "cmtomo/marginals.hpp"
#include "cmtomo/reconstruct.hpp"

namespace cmtomo {

namespace {

class Csv {
 public:
  Csv(const ExperimentConfig& c, const char* command) {
    os_ << "# cmtomo " << artifact_version << '\n';
    os_ << "# command = " << command << '\n';
    os_ << "# config_digest = " << c.digest() << '\n';
    std::istringstream lines(c.canonical());
    for (std::string l; std::getline(lines, l);) os_ << "# config: " << l << '\n';
  }
  void meta(const std::string& key, const std::string& value) { os_ << "# " << key << " = " << value << '\n'; }
  void meta(const std::string& key, double value) { meta(key, format_real(value)); }
  void comment(const std::string& text) { os_ << "# " << text << '\n'; }
  void header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      os_ << (first ? "" : ",") << c;
      first = false;
    }
    os_ << '\n';
  }
  template <class... T>
  void row(const T&... v) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(v), first = false), ...);
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double v) { return format_real(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  std::ostringstream os_;
};

const ModeSpec& single_mode(const ExperimentConfig& c, const char* command) {
  if (c.modes.size() != 1)
    throw ConfigError(std::string(command) + " needs exactly one mode in [system], got " + std::to_string(c.modes.size()));
  return c.modes[0];
}

std::string kind_name(const ModeSpec& m) {
  switch (m.kind) {
    case ModeKind::fock: return "fock";
    case ModeKind::even: return "even";
    case ModeKind::odd: return "odd";
  }
  return "?";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string cmd_marginal(const ExperimentConfig& c) {
  const ModeSpec& m = single_mode(c, "marginal");
  const FrameSpec f = c.frame(1);
  const double dx = c.dx > 0.0 ? c.dx : policy_dx(m, f.mu[0], f.nu[0], c.hbar);
  const double half = c.half_width > 0.0 ? c.half_width : 8.0 * std::sqrt(mode_variance(m, f.mu[0], f.nu[0], c.hbar));
  const Grid g = Grid::centered(dx, half);
  if (g.count > c.max_points) throw NumericalError("marginal grid exceeds max_points");
  const auto d = mode_marginal(m, f.mu[0], f.nu[0], c.hbar, g);

  Csv csv(c, "marginal");
  csv.meta("mode", m.describe());
  csv.meta("kind", kind_name(m));
  csv.meta("mu", f.mu[0]);
  csv.meta("nu", f.nu[0]);
  csv.meta("hbar", c.hbar);
  csv.meta("rescale", d.meta.rescale);
  csv.meta("pre_rescale_integral", d.meta.pre_rescale_integral);
  for (const auto& w : d.meta.warnings) csv.meta("warning", w);
  csv.header({"X", "density"});
  for (std::size_t i = 0; i < g.count; ++i) csv.row(g.x(i), d.values[i]);
  return csv.str();
}

std::string cmd_cm(const ExperimentConfig& c, bool all_backends) {
  const SystemSpec sys = c.system();
  const FrameSpec f = c.frame(sys.modes.size());
  ConvolutionOptions opt;
  opt.max_points = c.max_points;
  const auto marginals = build_marginals(sys, f);
  const auto fft = convolve_fft(marginals, opt);
  const auto mm = mode_moments(sys, f);

  Csv csv(c, "cm");
  csv.meta("system_digest", digest(sys));
  csv.meta("frame_digest", digest(f));
  double s2 = 0.0;
  for (const auto& x : mm) s2 += x.var;
  csv.meta("sigma2", s2);
  csv.meta("S_N", lyapunov_ratio(mm));
  csv.meta("clamped_mass", fft.meta.clamped_mass);
  const Grid& g = fft.grid;
  if (!all_backends) {
    csv.header({"X", "density"});
    for (std::size_t i = 0; i < g.count; ++i) csv.row(g.x(i), fft.values[i]);
    return csv.str();
  }

  const auto cf = cf_product(marginals, default_k_grid(marginals, c.max_points), opt);
  const auto samples = sample_sum(marginals, c.samples, c.seed);
  // Histogram of the draws on the output grid's cells.
  std::vector<double> hist(g.count, 0.0);
  for (double x : samples) {
    const double u = (x - g.x0) / g.dx + 0.5;
    if (u >= 0.0 && u < static_cast<double>(g.count)) hist[static_cast<std::size_t>(u)] += 1.0;
  }
  for (auto& h : hist) h /= static_cast<double>(samples.size()) * g.dx;
  csv.meta("samples", std::to_string(c.samples));
  csv.meta("seed", std::to_string(c.seed));
  csv.header({"X", "density", "cf", "mc"});
  for (std::size_t i = 0; i < g.count; ++i) csv.row(g.x(i), fft.values[i], cf.values[i], hist[i]);
  csv.comment("tv_fft_cf = " + format_real(total_variation(fft, cf)));
  csv.comment("tv_fft_mc = " + format_real(histogram_tv(samples, g, fft.values)));
  csv.comment("tv_cf_mc = " + format_real(histogram_tv(samples, cf.grid, cf.values)));
  csv.comment("ks_fft_mc = " + format_real(ks_statistic(samples, g, fft.values)));
  return csv.str();
}

std::string cmd_clt_scan(const ExperimentConfig& c) {
  if (c.modes.empty()) throw ConfigError("clt-scan needs at least one mode in [system]");
  const FrameSpec f = c.frame(std::max(c.mu.size(), c.nu.size()));
  const auto reports = n_scan(c.modes, f, c.energy, c.N_list, c.epsilon);
  Csv csv(c, "clt-scan");
  csv.meta("energy", c.energy);
  csv.header({"N", "hbar", "S_N", "sigma2", "rE", "RE", "ks", "tv"});
  for (const auto& r : reports) csv.row(r.N, r.hbar, r.S_N, r.sigma2, r.rE, r.RE, r.ks_distance, r.tv_distance);
  return csv.str();
}

std::string cmd_hbar_scan(const ExperimentConfig& c) {
  const SystemSpec sys = c.system();
  const FrameSpec f = c.frame(sys.modes.size());
  const auto reports = hbar_scan(sys, f, c.hbar_list, c.epsilon);
  Csv csv(c, "hbar-scan");
  csv.meta("epsilon", c.epsilon);
  csv.header({"hbar", "sigma2", "mass_in_epsilon", "gaussian_predicted_mass"});
  for (const auto& r : reports) csv.row(r.hbar, r.sigma2, r.mass_in_epsilon, r.gaussian_mass);
  return csv.str();
}

std::string cmd_reconstruct(const ExperimentConfig& c) {
  const ModeSpec& m = single_mode(c, "reconstruct");
  const auto rec = reconstruct_single_mode(mode_tomogram(m, c.hbar), c.dim, c.hbar, c.reconstruct);
  const auto psi = fock_expansion(m);
  Csv csv(c, "reconstruct");
  csv.meta("mode", m.describe());
  csv.meta("dim", std::to_string(c.dim));
  csv.meta("pre_rescale_trace", rec.pre_rescale_trace);
  csv.meta("fidelity", fidelity(rec.rho, psi));
  csv.meta("hermiticity_error", hermiticity_error(rec.rho));
  csv.meta("min_eigenvalue", rec.min_eigenvalue);
  csv.meta("leakage_warning", yes_no(rec.leakage));
  for (const auto& w : rec.warnings) csv.meta("warning", w);
  csv.header({"i", "j", "re", "im"});
  for (int i = 0; i < c.dim; ++i)
    for (int j = 0; j < c.dim; ++j) csv.row(i, j, rec.rho(i, j).real(), rec.rho(i, j).imag());
  return csv.str();
}

std::string cmd_discrepancy_report(const ExperimentConfig& c) {
  const auto rows = discrepancy_report();
  Csv csv(c, "discrepancy");
  csv.comment("printed_value: closed form as printed; oracle_value: Fock-expansion or quadrature value");
  int disagree = 0;
  for (const auto& r : rows) disagree += r.agree ? 0 : 1;
  csv.meta("rows", std::to_string(rows.size()));
  csv.meta("disagreeing_rows", std::to_string(disagree));
  csv.header({"quantity", "alpha_re", "alpha_im", "parity", "mu", "nu", "hbar", "printed_value", "oracle_value",
              "ratio", "abs_diff", "agree"});
  for (const auto& r : rows) {
    csv.row(r.quantity, r.alpha.real(), r.alpha.imag(), r.parity, r.mu, r.nu, r.hbar, r.printed_value, r.oracle_value,
            r.ratio, r.abs_diff, yes_no(r.agree));
  }
  return csv.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw ConfigError("cannot write '" + tmp.string() + "'");
    o.write(content.data(), static_cast<std::streamsize>(content.size()));
    o.flush();
    if (!o) throw ConfigError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot rename onto '" + path + "': " + ec.message());
  }
}

int run_command(const std::string& command, const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig c;
    if (!options.config_path.empty()) {
      c = load_config(options.config_path);
    } else if (command != "discrepancy") {
      throw ConfigError("--config is required for " + command);
    }
    if (options.seed) c.seed = *options.seed;
    if (options.epsilon) {
      if (!(*options.epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
      c.epsilon = *options.epsilon;
    }
    std::string text;
    if (command == "marginal") {
      text = cmd_marginal(c);
    } else if (command == "cm") {
      text = cmd_cm(c, options.all_backends);
    } else if (command == "clt-scan") {
      text = cmd_clt_scan(c);
    } else if (command == "hbar-scan") {
      text = cmd_hbar_scan(c);
    } else if (command == "reconstruct") {
      text = cmd_reconstruct(c);
    } else if (command == "discrepancy") {
      text = cmd_discrepancy_report(c);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
    const std::string& path = options.out.empty() ? c.output : options.out;
    if (path.empty()) {
      out << text;
    } else {
      write_atomic(path, text);
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
}

}  // namespace cmtomo
