#include "polyco/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "polyco/expr.hpp"

namespace polyco {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Entries* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
      if (cfg.has_section(name)) throw ConfigError("config line " + std::to_string(lineno) + ": duplicate section " + name);
      cfg.data_.push_back({name, {}});
      current = &cfg.data_.back().second;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    if (!current) throw ConfigError("config line " + std::to_string(lineno) + ": entry outside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    for (const auto& [k, v] : *current)
      if (k == key) throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key " + key);
    current->push_back({key, value});
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool ConfigFile::has_section(const std::string& s) const {
  for (const auto& [name, e] : data_)
    if (name == s) return true;
  return false;
}

const ConfigFile::Entries& ConfigFile::section(const std::string& s) const {
  static const Entries empty;
  for (const auto& [name, e] : data_)
    if (name == s) return e;
  return empty;
}

std::optional<std::string> ConfigFile::get(const std::string& s, const std::string& key) const {
  for (const auto& [k, v] : section(s))
    if (k == key) return v;
  return std::nullopt;
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : data_) out.push_back(name);
  return out;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw ConfigError(what + ": not a number: " + item);
    out.push_back(v);
  }
  return out;
}

namespace {

int parse_index(const std::string& s, int limit, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1 || v > limit)
    throw ConfigError(what + ": index " + s + " outside 1.." + std::to_string(limit));
  return v - 1;
}

SmoothField expression(const std::string& text, const std::vector<std::string>& vars, const std::string& where) {
  try {
    return compile_expression(text, vars);
  } catch (const ExpressionError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

VValuedForm form_section(const ConfigFile& cfg, const std::string& section, int degree, int k, const ChartPtr& chart,
                         const std::vector<std::string>& names) {
  std::vector<FormTerm> terms;
  for (const auto& [key, value] : cfg.section(section)) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw ConfigError("[" + section + "] key " + key + ": expected <alpha>.<coords>");
    FormTerm t;
    t.alpha = parse_index(key.substr(0, dot), k, "[" + section + "] " + key);
    for (const auto& c : split_list(key.substr(dot + 1), '^')) {
      const int i = chart->index_of(c);
      if (i < 0) throw ConfigError("[" + section + "] " + key + ": unknown coordinate " + c);
      t.indices.push_back(i);
    }
    if (static_cast<int>(t.indices.size()) != degree)
      throw ConfigError("[" + section + "] " + key + ": expected " + std::to_string(degree) + " coordinates");
    t.coefficient = expression(value, names, "[" + section + "] " + key);
    terms.push_back(std::move(t));
  }
  try {
    return VValuedForm::from_terms(chart, degree, k, terms);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("[" + section + "]: " + e.what());
  }
}

CatalogInstance user_instance(const ConfigFile& cfg) {
  const auto coords = split_list(cfg.get("chart", "coords").value_or(""));
  if (coords.empty()) throw ConfigError("[chart] coords is required");
  const int n = static_cast<int>(coords.size());
  std::vector<Interval> bounds(n, {-1.0, 1.0});
  if (auto b = cfg.get("chart", "bounds")) {
    auto items = split_list(*b);
    if (items.size() != 1 && static_cast<int>(items.size()) != n)
      throw ConfigError("[chart] bounds: give one lo:hi pair or one per coordinate");
    for (int i = 0; i < n; ++i) {
      const auto& item = items.size() == 1 ? items[0] : items[i];
      auto parts = parse_reals(std::string(item).replace(item.find(':') == std::string::npos ? 0 : item.find(':'), 1, ","),
                               "[chart] bounds");
      if (item.find(':') == std::string::npos || parts.size() != 2 || !(parts[0] < parts[1]))
        throw ConfigError("[chart] bounds: bad interval " + item);
      bounds[i] = {parts[0], parts[1]};
    }
  }
  ChartPtr chart;
  try {
    chart = make_chart(coords, bounds);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[chart]: ") + e.what());
  }
  const auto kv = parse_reals(cfg.get("chart", "k").value_or("1"), "[chart] k");
  if (kv.size() != 1 || kv[0] < 1 || kv[0] != std::floor(kv[0])) throw ConfigError("[chart] k must be a positive integer");
  const int k = static_cast<int>(kv[0]);

  KPolycosymplecticStructure s(form_section(cfg, "tau", 1, k, chart, coords), form_section(cfg, "omega", 2, k, chart, coords));
  SmoothField h = expression(cfg.get("hamiltonian", "h").value_or("0"), coords, "[hamiltonian] h");

  std::vector<std::vector<int>> moved;
  for (const auto& [key, value] : cfg.section("action")) {
    if (key.rfind("translate.", 0) != 0) throw ConfigError("[action] " + key + ": expected translate.<b>");
    const int b = parse_index(key.substr(10), 64, "[action] " + key);
    if (b != static_cast<int>(moved.size())) throw ConfigError("[action] generators must be numbered 1, 2, ... in order");
    std::vector<int> cs;
    for (const auto& c : split_list(value)) {
      const int i = chart->index_of(c);
      if (i < 0) throw ConfigError("[action] " + key + ": unknown coordinate " + c);
      cs.push_back(i);
    }
    moved.push_back(cs);
  }
  const int m = static_cast<int>(moved.size());
  ActionModel a;
  a.group = abelian_group(m);
  a.chart = chart;
  a.phi = [n, moved](const Coords& g) {
    return SmoothField::make(n, n, [g, moved](auto x, auto y) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i];
      for (std::size_t b = 0; b < moved.size(); ++b)
        for (int c : moved[b]) y[c] = y[c] + g[b];
    });
  };
  std::vector<double> gens(static_cast<std::size_t>(m) * n, 0.0);
  for (int b = 0; b < m; ++b)
    for (int c : moved[b]) gens[b * n + c] = 1.0;
  a.generators = constant_field(n, gens);

  std::optional<MomentumMapModel> J;
  if (cfg.has_section("momentum")) {
    if (m == 0) throw ConfigError("[momentum] needs an [action]");
    std::vector<SmoothField> parts(static_cast<std::size_t>(k) * m, constant_field(n, {0.0}));
    for (const auto& [key, value] : cfg.section("momentum")) {
      const auto dot = key.find('.');
      if (dot == std::string::npos) throw ConfigError("[momentum] " + key + ": expected <alpha>.<b>");
      const int al = parse_index(key.substr(0, dot), k, "[momentum] " + key);
      const int b = parse_index(key.substr(dot + 1), m, "[momentum] " + key);
      parts[al * m + b] = expression(value, coords, "[momentum] " + key);
    }
    J = MomentumMapModel{k, m, concat(parts)};
  }

  ReductionInstance base{
      .name = cfg.get("instance", "name").value_or("config"),
      .summary = cfg.get("instance", "summary").value_or("structure loaded from a config file"),
      .structure = s,
      .action = a,
      .momentum = J,
      .hamiltonian = h,
      .paper_gauge = std::nullopt,
      .level = std::nullopt,
      .quotient = std::nullopt,
      .isotropy = {},
      .expected = {},
      .default_mu = {},
  };
  return CatalogInstance(std::move(base));
}

bool is_catalog(const std::string& name) {
  for (const auto& i : list_instances())
    if (i.name == name) return true;
  return false;
}

}  // namespace

CatalogInstance instance_from_config(const ConfigFile& cfg) {
  const auto name = cfg.get("instance", "name");
  if (cfg.has_section("chart")) {
    if (name && is_catalog(*name)) throw ConfigError("[instance] name " + *name + " is a catalog name; drop [chart] or rename");
    return user_instance(cfg);
  }
  if (!name) throw ConfigError("config needs [instance] name or a [chart] section");
  InstanceOptions o;
  if (auto v = cfg.get("instance", "variant")) o.variant = *v;
  if (auto v = cfg.get("instance", "force")) o.force = *v;
  if (auto v = cfg.get("instance", "wave_speed")) {
    auto r = parse_reals(*v, "[instance] wave_speed");
    if (r.size() != 1) throw ConfigError("[instance] wave_speed takes one number");
    o.wave_speed = r[0];
  }
  std::string coupling = cfg.get("instance", "coupling").value_or("qsinx");
  try {
    if (*name == "coupled-strings" && coupling != "zero" && coupling != "qsinx" && coupling != "q2x")
      return make_strings(expression(coupling, {"t", "x", "q"}, "[instance] coupling"), coupling);
    if (*name == "membrane-polar" && o.force != "unit" && o.force != "cos" && o.force != "zero")
      return make_membrane(o.wave_speed, expression(o.force, {"r"}, "[instance] force"), o.force);
    o.coupling = coupling;
    return get_instance(*name, o);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExportResult export_structure(const std::string& label, const KPolycosymplecticStructure& s, const SmoothField& h,
                              int samples, std::uint64_t seed) {
  const auto& chart = s.chart();
  const int n = chart->dim(), k = s.k();
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(chart->name(i));
  const auto fit_pts = halton_samples(*chart, samples, seed + 31);
  const auto check_pts = halton_samples(*chart, samples / 2, seed + 97);
  ExportResult res;
  std::ostringstream out;
  out << "# reduced structure export\n[instance]\nname = " << label << "\n\n[chart]\ncoords = ";
  for (int i = 0; i < n; ++i) out << (i ? ", " : "") << names[i];
  out << "\nbounds = ";
  for (int i = 0; i < n; ++i)
    out << (i ? ", " : "") << real_text(chart->bounds()[i].lo) << ":" << real_text(chart->bounds()[i].hi);
  out << "\nk = " << k << "\n";

  auto emit = [&](const SmoothField& f, int output, const std::string& key) {
    bool zero = true;
    for (const auto& x : check_pts)
      if (std::abs(f.eval(x)[output]) > 1e-14) zero = false;
    if (zero) return;
    auto [poly, dev] = fit_polynomial(f, output, 4, fit_pts, check_pts);
    res.worst_fit = std::max(res.worst_fit, dev);
    if (dev <= 1e-9) {
      out << key << " = " << format_polynomial(poly, names) << "\n";
    } else {
      res.unfitted.push_back(key);
      out << "# " << key << ": not a polynomial of degree <= 4 (fit deviation " << format_real(dev) << ")\n";
    }
  };
  for (int deg : {1, 2}) {
    const VValuedForm& form = deg == 1 ? s.tau : s.omega;
    out << "\n[" << (deg == 1 ? "tau" : "omega") << "]\n";
    const auto idx = multi_indices(n, deg);
    for (int a = 0; a < k; ++a)
      for (std::size_t j = 0; j < idx.size(); ++j) {
        std::string key = std::to_string(a + 1) + ".";
        for (std::size_t c = 0; c < idx[j].size(); ++c) key += (c ? "^" : "") + names[idx[j][c]];
        emit(form.coefficients(), a * static_cast<int>(idx.size()) + static_cast<int>(j), key);
      }
  }
  out << "\n[hamiltonian]\n";
  bool hz = true;
  for (const auto& x : check_pts)
    if (std::abs(h.scalar(x)) > 1e-14) hz = false;
  if (hz)
    out << "h = 0\n";
  else
    emit(h, 0, "h");
  res.text = out.str();
  return res;
}

}  // namespace polyco
