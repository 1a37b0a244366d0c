#include "schurnorm/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "schurnorm/errors.hpp"

namespace schurnorm {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

bool odd_at_least_3(int m) { return m >= 3 && m % 2 == 1; }

}  // namespace

KernelParams RunConfig::kernel_params() const {
  KernelParams kp = kernel ? *kernel : mg_map(*mackey_glass).params;
  kp.nu0 = nu0;
  kp.omega = 0.0;
  return kp;
}

std::optional<double> RunConfig::lambda_inverse() const {
  if (!mackey_glass) return std::nullopt;
  return 1.0 / mg_map(*mackey_glass).lambda;
}

int RunConfig::omega_count() const {
  return static_cast<int>(std::floor((omega_max - omega_min) / omega_step + 1e-9)) + 1;
}

double RunConfig::omega_at(int k) const {
  const double w = omega_min + k * omega_step;
  // Land exactly on zero when the sweep passes through it.
  return std::abs(w) < 1e-9 * omega_step ? 0.0 : w;
}

void validate(const RunConfig& c) {
  if (c.mackey_glass.has_value() == c.kernel.has_value()) {
    throw ConfigError("exactly one of 'mackey_glass' and 'kernel' must be given");
  }
  if (c.mackey_glass && c.mackey_glass->kappa == 0.0) {
    throw ConfigError("mackey_glass.kappa must be nonzero");
  }
  if (c.kernel && !(c.kernel->tau > 0.0)) throw ConfigError("kernel.tau must be positive");
  if (!odd_at_least_3(c.grid_m)) throw ConfigError("grid_m must be odd and >= 3");
  if (!odd_at_least_3(c.fine_m)) throw ConfigError("fine_m must be odd and >= 3");
  if (!(c.omega_step > 0.0)) throw ConfigError("omega_step must be positive");
  if (!(c.omega_min <= c.omega_max)) throw ConfigError("omega_min must not exceed omega_max");
  if (!(c.delta_step > 0.0)) throw ConfigError("delta_step must be positive");
  if (c.trunc_n < 0 || c.asymptotic_trunc_n < 0) {
    throw ConfigError("truncation mode counts must be nonnegative");
  }
  if (c.max_outer < 1) throw ConfigError("max_outer must be positive");
  for (double v : {c.nu0, c.omega_min, c.omega_max, c.omega_step, c.delta_step}) {
    if (!std::isfinite(v)) throw ConfigError("configuration values must be finite");
  }
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"mackey_glass", "kernel", "nu0", "grid_m", "fine_m", "omega_min", "omega_max",
                  "omega_step", "delta_step", "trunc_n", "asymptotic_trunc_n", "max_outer",
                  "seed", "output_dir"},
                 "config");

  RunConfig c;
  if (doc.contains("kernel")) {
    const json& k = doc["kernel"];
    if (!k.is_object()) throw ConfigError("'kernel' must be an object");
    reject_unknown(k, {"a", "b", "tau"}, "kernel");
    KernelParams kp;
    read(k, "a", kp.a);
    read(k, "b", kp.b);
    read(k, "tau", kp.tau);
    c.kernel = kp;
    c.mackey_glass.reset();
  }
  if (doc.contains("mackey_glass")) {
    const json& m = doc["mackey_glass"];
    if (!m.is_object()) throw ConfigError("'mackey_glass' must be an object");
    reject_unknown(m, {"gamma", "beta", "kappa", "tau_prime"}, "mackey_glass");
    MackeyGlassParams mg;
    read(m, "gamma", mg.gamma);
    read(m, "beta", mg.beta);
    read(m, "kappa", mg.kappa);
    read(m, "tau_prime", mg.tau_prime);
    c.mackey_glass = mg;
  }
  read(doc, "nu0", c.nu0);
  read(doc, "grid_m", c.grid_m);
  read(doc, "fine_m", c.fine_m);
  read(doc, "omega_min", c.omega_min);
  read(doc, "omega_max", c.omega_max);
  read(doc, "omega_step", c.omega_step);
  read(doc, "delta_step", c.delta_step);
  read(doc, "trunc_n", c.trunc_n);
  read(doc, "asymptotic_trunc_n", c.asymptotic_trunc_n);
  read(doc, "max_outer", c.max_outer);
  read(doc, "seed", c.seed);
  if (doc.contains("output_dir")) {
    std::string dir;
    read(doc, "output_dir", dir);
    c.output_dir = dir;
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json(const RunConfig& c) {
  json doc;
  if (c.mackey_glass) {
    doc["mackey_glass"] = {{"gamma", c.mackey_glass->gamma},
                           {"beta", c.mackey_glass->beta},
                           {"kappa", c.mackey_glass->kappa},
                           {"tau_prime", c.mackey_glass->tau_prime}};
  }
  if (c.kernel) doc["kernel"] = {{"a", c.kernel->a}, {"b", c.kernel->b}, {"tau", c.kernel->tau}};
  doc["nu0"] = c.nu0;
  doc["grid_m"] = c.grid_m;
  doc["fine_m"] = c.fine_m;
  doc["omega_min"] = c.omega_min;
  doc["omega_max"] = c.omega_max;
  doc["omega_step"] = c.omega_step;
  doc["delta_step"] = c.delta_step;
  doc["trunc_n"] = c.trunc_n;
  doc["asymptotic_trunc_n"] = c.asymptotic_trunc_n;
  doc["max_outer"] = c.max_outer;
  doc["seed"] = c.seed;
  doc["output_dir"] = c.output_dir.string();
  return doc.dump(2);
}

}  // namespace schurnorm
