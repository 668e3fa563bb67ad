#include "cmtomo/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cmtomo/convolution.hpp"
#include "cmtomo/errors.hpp"

namespace cmtomo {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(int line, std::string_view key, const std::string& msg) const {
    std::ostringstream os;
    os << source_ << ':' << line << ": ";
    if (!key.empty()) os << key << ": ";
    os << msg;
    throw ConfigError(os.str());
  }

  double real(int line, std::string_view key, std::string_view w) const {
    double v = 0.0;
    const auto res = std::from_chars(w.data(), w.data() + w.size(), v);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size() || !std::isfinite(v))
      fail(line, key, "expected a finite real number, got '" + std::string(w) + "'");
    return v;
  }

  template <class Int>
  Int integer(int line, std::string_view key, std::string_view w) const {
    Int v = 0;
    const auto res = std::from_chars(w.data(), w.data() + w.size(), v);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size())
      fail(line, key, "expected an integer, got '" + std::string(w) + "'");
    return v;
  }

  std::vector<double> reals(int line, std::string_view key, std::string_view value) const {
    std::vector<double> out;
    for (auto w : words(value)) out.push_back(real(line, key, w));
    if (out.empty()) fail(line, key, "expected at least one value");
    return out;
  }

  double single(int line, std::string_view key, std::string_view value) const {
    const auto ws = words(value);
    if (ws.size() != 1) fail(line, key, "expected exactly one value");
    return real(line, key, ws[0]);
  }

  std::string_view source_;
};

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  const Parser p(source);
  ExperimentConfig c;
  std::string section;
  std::map<std::string, int> seen;  // "section.key" -> line, for repeats and later checks
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') p.fail(line_no, "", "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"system", "frame", "grid", "scan", "reconstruct", "run"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) p.fail(line_no, "", "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) p.fail(line_no, "", "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) p.fail(line_no, "", "missing key");
    if (section.empty()) p.fail(line_no, key, "key outside of any [section]");
    const std::string full = section + "." + key;
    if (key != "mode") {
      if (seen.count(full)) p.fail(line_no, key, "repeated key (first set on line " + std::to_string(seen[full]) + ")");
      seen[full] = line_no;
    }

    if (section == "system" && key == "mode") {
      const auto ws = words(value);
      if (ws.empty()) p.fail(line_no, key, "expected 'fock N', 'even RE IM' or 'odd RE IM'");
      try {
        if (ws[0] == "fock") {
          if (ws.size() != 2) p.fail(line_no, key, "'fock' takes one level");
          c.modes.push_back(ModeSpec::fock(p.integer<int>(line_no, key, ws[1])));
        } else if (ws[0] == "even" || ws[0] == "odd") {
          if (ws.size() != 3) p.fail(line_no, key, "'" + std::string(ws[0]) + "' takes Re alpha and Im alpha");
          const cplx a(p.real(line_no, key, ws[1]), p.real(line_no, key, ws[2]));
          c.modes.push_back(ws[0] == "even" ? ModeSpec::even(a) : ModeSpec::odd(a));
        } else {
          p.fail(line_no, key, "unknown mode kind '" + std::string(ws[0]) + "'");
        }
      } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind(std::string(source), 0) == 0) throw;
        p.fail(line_no, key, what);
      }
    } else if (section == "system" && key == "hbar") {
      c.hbar = p.single(line_no, key, value);
      if (!(c.hbar > 0.0)) p.fail(line_no, key, "must be positive");
    } else if (section == "frame" && key == "mu") {
      c.mu = p.reals(line_no, key, value);
    } else if (section == "frame" && key == "nu") {
      c.nu = p.reals(line_no, key, value);
    } else if (section == "frame" && key == "r") {
      c.r = p.single(line_no, key, value);
    } else if (section == "frame" && key == "R") {
      c.R = p.single(line_no, key, value);
    } else if (section == "grid" && key == "dx") {
      c.dx = p.single(line_no, key, value);
      if (!(c.dx >= 0.0)) p.fail(line_no, key, "must be nonnegative");
    } else if (section == "grid" && key == "half_width") {
      c.half_width = p.single(line_no, key, value);
      if (!(c.half_width >= 0.0)) p.fail(line_no, key, "must be nonnegative");
    } else if (section == "grid" && key == "max_points") {
      c.max_points = p.integer<std::size_t>(line_no, key, value);
      if (c.max_points < 2) p.fail(line_no, key, "must be at least 2");
    } else if (section == "scan" && key == "energy") {
      c.energy = p.single(line_no, key, value);
      if (!(c.energy > 0.0)) p.fail(line_no, key, "must be positive");
    } else if (section == "scan" && key == "N_list") {
      c.N_list.clear();
      for (auto w : words(value)) {
        const int n = p.integer<int>(line_no, key, w);
        if (n < 1) p.fail(line_no, key, "entries must be positive");
        c.N_list.push_back(n);
      }
      if (c.N_list.empty()) p.fail(line_no, key, "expected at least one value");
    } else if (section == "scan" && key == "hbar_list") {
      c.hbar_list = p.reals(line_no, key, value);
      for (std::size_t i = 0; i < c.hbar_list.size(); ++i) {
        if (!(c.hbar_list[i] > 0.0)) p.fail(line_no, key, "entries must be positive");
        if (i > 0 && !(c.hbar_list[i] < c.hbar_list[i - 1])) p.fail(line_no, key, "must be strictly decreasing");
      }
    } else if (section == "scan" && key == "epsilon") {
      c.epsilon = p.single(line_no, key, value);
      if (!(c.epsilon > 0.0)) p.fail(line_no, key, "must be positive");
    } else if (section == "scan" && key == "samples") {
      c.samples = p.integer<std::size_t>(line_no, key, value);
      if (c.samples < 1) p.fail(line_no, key, "must be positive");
    } else if (section == "reconstruct" && key == "dim") {
      c.dim = p.integer<int>(line_no, key, value);
      if (c.dim < 2) p.fail(line_no, key, "must be at least 2");
    } else if (section == "reconstruct" && key == "K") {
      c.reconstruct.K = p.single(line_no, key, value);
      if (!(c.reconstruct.K >= 0.0)) p.fail(line_no, key, "must be nonnegative");
    } else if (section == "reconstruct" && (key == "theta_steps" || key == "k_panels" || key == "x_steps")) {
      const int v = p.integer<int>(line_no, key, value);
      if (v < 3) p.fail(line_no, key, "must be at least 3");
      (key == "theta_steps" ? c.reconstruct.theta_steps : key == "k_panels" ? c.reconstruct.k_panels : c.reconstruct.x_steps) = v;
    } else if (section == "run" && key == "seed") {
      c.seed = p.integer<std::uint64_t>(line_no, key, value);
    } else if (section == "run" && key == "output") {
      c.output = std::string(value);
    } else {
      p.fail(line_no, key, "unknown key in [" + section + "]");
    }
  }

  const auto line_of = [&](const char* k) { return seen.count(k) ? seen[k] : 0; };
  if (!(c.r > 0.0) || !(c.R > c.r)) p.fail(line_of(seen.count("frame.R") ? "frame.R" : "frame.r"), "R", "frame bounds need 0 < r < R");
  if (c.mu.size() != c.nu.size() && c.mu.size() != 1 && c.nu.size() != 1)
    p.fail(line_of("frame.nu"), "nu", "has " + std::to_string(c.nu.size()) + " values, mu has " + std::to_string(c.mu.size()));
  const std::size_t frames = std::max(c.mu.size(), c.nu.size());
  if (!c.modes.empty() && frames != 1 && frames != c.modes.size())
    p.fail(line_of(c.mu.size() > 1 ? "frame.mu" : "frame.nu"), c.mu.size() > 1 ? "mu" : "nu",
           std::to_string(frames) + " frame values for " + std::to_string(c.modes.size()) + " modes");
  for (std::size_t i = 0; i < frames; ++i) {
    const double m = c.mu[c.mu.size() == 1 ? 0 : i];
    const double n = c.nu[c.nu.size() == 1 ? 0 : i];
    const double rho = m * m + n * n;
    if (!(rho > c.r && rho < c.R)) {
      std::ostringstream os;
      os << "frame " << i << ": mu^2+nu^2 = " << format_real(rho) << " outside (" << format_real(c.r) << ", "
         << format_real(c.R) << ")";
      p.fail(line_of(c.mu.size() > 1 || !seen.count("frame.nu") ? "frame.mu" : "frame.nu"),
             c.mu.size() > 1 || !seen.count("frame.nu") ? "mu" : "nu", os.str());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

SystemSpec ExperimentConfig::system() const {
  SystemSpec s;
  s.modes = modes;
  s.hbar = hbar;
  s.validate();
  return s;
}

FrameSpec ExperimentConfig::frame(std::size_t count) const {
  FrameSpec f;
  f.r = r;
  f.R = R;
  for (std::size_t i = 0; i < count; ++i) {
    f.mu.push_back(mu[mu.size() == 1 ? 0 : i % mu.size()]);
    f.nu.push_back(nu[nu.size() == 1 ? 0 : i % nu.size()]);
  }
  f.validate(count);
  return f;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  const auto list = [&](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ' ';
      if constexpr (std::is_same_v<std::decay_t<decltype(v[0])>, double>) {
        s += format_real(v[i]);
      } else {
        s += std::to_string(v[i]);
      }
    }
    return s;
  };
  os << "[system]\n";
  os << "hbar = " << format_real(hbar) << '\n';
  for (const auto& m : modes) {
    switch (m.kind) {
      case ModeKind::fock: os << "mode = fock " << m.n << '\n'; break;
      case ModeKind::even:
      case ModeKind::odd:
        os << "mode = " << (m.kind == ModeKind::even ? "even " : "odd ") << format_real(m.alpha.real()) << ' '
           << format_real(m.alpha.imag()) << '\n';
        break;
    }
  }
  os << "[frame]\n";
  os << "mu = " << list(mu) << "\nnu = " << list(nu) << '\n';
  os << "r = " << format_real(r) << "\nR = " << format_real(R) << '\n';
  os << "[grid]\n";
  os << "dx = " << format_real(dx) << "\nhalf_width = " << format_real(half_width) << "\nmax_points = " << max_points
     << '\n';
  os << "[scan]\n";
  os << "energy = " << format_real(energy) << "\nN_list = " << list(N_list) << "\nhbar_list = " << list(hbar_list)
     << "\nepsilon = " << format_real(epsilon) << "\nsamples = " << samples << '\n';
  os << "[reconstruct]\n";
  os << "dim = " << dim << "\nK = " << format_real(reconstruct.K) << "\ntheta_steps = " << reconstruct.theta_steps
     << "\nk_panels = " << reconstruct.k_panels << "\nx_steps = " << reconstruct.x_steps << '\n';
  os << "[run]\n";
  os << "seed = " << seed << '\n';
  return os.str();
}

std::string ExperimentConfig::digest() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

}  // namespace cmtomo
