#include "schurnorm/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "schurnorm/errors.hpp"
#include "schurnorm/norms.hpp"
#include "schurnorm/schur_family.hpp"

namespace schurnorm {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Alarm threshold for fine-grid estimates exceeding the coarse ones.
constexpr double kFineGridSlack = 1.05;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void note(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void append_line(const fs::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to " + path.string());
  out << line << '\n';
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string profiles_header(Eigen::Index m) {
  std::string h = "omega";
  for (Eigen::Index k = 0; k < m; ++k) h += ",p_" + std::to_string(k);
  return h;
}

std::string history_csv(const OptState& state) {
  std::string out = std::string(kHistoryHeader) + '\n';
  for (const HistoryEntry& h : state.history) {
    out += std::to_string(h.iteration) + ',' + fmt17(h.t) + ',' + std::to_string(h.refs) + ',' +
           fmt17(h.grid_max) + '\n';
  }
  return out;
}

// Configuration fields that determine the sweep results.
json sweep_identity(const RunConfig& config) {
  json j = json::parse(to_json(config));
  j.erase("output_dir");
  return j;
}

}  // namespace

fs::path state_path(const RunConfig& config, int omega_index) {
  char name[32];
  std::snprintf(name, sizeof name, "omega_%05d.json", omega_index);
  return config.output_dir / "state" / name;
}

EstimateResult estimate_omega(const RunConfig& config, double omega, const OptState* warm,
                              const Logger& log) {
  KernelParams kp = config.kernel_params();
  kp.omega = omega;
  const TransferKernel kernel(kp);

  const QuadGrid grid = make_grid(kp.tau, config.grid_m);
  const KernelSamples coarse = sample_kernel_set(kernel, grid, grid);
  const SchurFamily family(SchurProblem(coarse.modulus, grid, grid));

  OptState start;
  if (warm != nullptr) {
    start = carryover(*warm, family);
  } else {
    start.params = SchurModel::random(config.seed).params();
  }

  MinimaxOptions opt;
  opt.delta_step = config.delta_step;
  opt.max_outer = config.max_outer;

  EstimateResult out;
  SweepRecord& rec = out.record;
  rec.omega = omega;
  try {
    OptimizeResult r = optimize(std::move(start), family, opt);
    out.state = std::move(r.state);
    rec.converged = r.converged;
    if (!r.converged) {
      note(log, "omega " + fmt17(omega) + ": stopped at max_outer = " +
                    std::to_string(config.max_outer) + " without converging");
    }
  } catch (const StepFailure& e) {
    out.state = e.state();
    rec.failed = true;
    rec.failure = e.what();
    note(log, "omega " + fmt17(omega) + ": " + e.what());
  }
  rec.iterations = out.state.iteration;
  rec.ref_points = static_cast<int>(out.state.refs.size());

  const SchurModel model(out.state.params);
  rec.coarse_estimate = std::sqrt(std::max(0.0, family.grid_max(model.params()).value));
  rec.truncation_norm = matrix_norm(truncation_matrix(coarse.value, config.trunc_n, grid, grid));

  const QuadGrid fine = make_grid(kp.tau, config.fine_m);
  const KernelSamples fine_samples = sample_kernel_set(kernel, fine, fine);
  const SchurField field = ratios(fine_samples.modulus, model, fine, fine);
  rec.schur_estimate = field.estimate();
  rec.l2_norm_k = l2_norm(fine_samples.modulus_sq, fine, fine);
  rec.p_samples = field.p;
  rec.q_samples = field.q;

  if (rec.schur_estimate > kFineGridSlack * rec.coarse_estimate) {
    note(log, "omega " + fmt17(omega) + ": fine-grid estimate " + fmt17(rec.schur_estimate) +
                  " exceeds the optimization-grid estimate " + fmt17(rec.coarse_estimate) +
                  " by more than 5%");
  }
  return out;
}

std::string csv_row(const SweepRecord& r) {
  return fmt17(r.omega) + ',' + fmt17(r.schur_estimate) + ',' + fmt17(r.l2_norm_k) + ',' +
         fmt17(r.truncation_norm) + ',' + std::to_string(r.iterations) + ',' +
         std::to_string(r.ref_points);
}

std::string profile_row(const SweepRecord& r) {
  std::string row = fmt17(r.omega);
  for (Eigen::Index k = 0; k < r.p_samples.size(); ++k) row += ',' + fmt17(r.p_samples[k]);
  return row;
}

std::string state_to_json(const EstimateResult& result, int omega_index) {
  const OptState& s = result.state;
  const SweepRecord& r = result.record;
  json refs = json::array();
  for (const ReferencePoint& p : s.refs) {
    refs.push_back({{"i", p.i}, {"j", p.j}, {"added_at", p.added_at}});
  }
  json doc;
  doc["omega_index"] = omega_index;
  doc["omega"] = r.omega;
  doc["params"] = vector_json(s.params);
  doc["refs"] = refs;
  doc["t"] = s.t;
  doc["iteration"] = s.iteration;
  doc["record"] = {{"schur_estimate", r.schur_estimate},
                   {"coarse_estimate", r.coarse_estimate},
                   {"l2_norm_k", r.l2_norm_k},
                   {"truncation_norm", r.truncation_norm},
                   {"iterations", r.iterations},
                   {"ref_points", r.ref_points},
                   {"converged", r.converged},
                   {"failed", r.failed},
                   {"failure", r.failure},
                   {"p_samples", vector_json(r.p_samples)},
                   {"q_samples", vector_json(r.q_samples)}};
  return doc.dump(1) + '\n';
}

EstimateResult state_from_json(const std::string& text) {
  EstimateResult out;
  try {
    const json doc = json::parse(text);
    OptState& s = out.state;
    s.params = vector_from(doc.at("params"));
    for (const json& p : doc.at("refs")) {
      s.refs.push_back({p.at("i").get<Eigen::Index>(), p.at("j").get<Eigen::Index>(),
                        p.at("added_at").get<int>()});
    }
    s.t = number_or_nan(doc.at("t"));
    s.iteration = doc.at("iteration").get<int>();

    const json& r = doc.at("record");
    SweepRecord& rec = out.record;
    rec.omega = doc.at("omega").get<double>();
    rec.schur_estimate = number_or_nan(r.at("schur_estimate"));
    rec.coarse_estimate = number_or_nan(r.at("coarse_estimate"));
    rec.l2_norm_k = number_or_nan(r.at("l2_norm_k"));
    rec.truncation_norm = number_or_nan(r.at("truncation_norm"));
    rec.iterations = r.at("iterations").get<int>();
    rec.ref_points = r.at("ref_points").get<int>();
    rec.converged = r.at("converged").get<bool>();
    rec.failed = r.at("failed").get<bool>();
    rec.failure = r.at("failure").get<std::string>();
    rec.p_samples = vector_from(r.at("p_samples"));
    rec.q_samples = vector_from(r.at("q_samples"));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed state file: ") + e.what());
  }
  if (out.state.params.size() != kModelParams) {
    throw Error("malformed state file: expected 122 model parameters");
  }
  return out;
}

EstimateResult cmd_estimate(const RunConfig& config, double omega, const Logger& log) {
  validate(config);
  const EstimateResult result = estimate_omega(config, omega, nullptr, log);
  fs::create_directories(config.output_dir);
  const fs::path dir = config.output_dir;
  write_file(dir / "estimate.csv",
             std::string(kSweepHeader) + '\n' + csv_row(result.record) + '\n');
  write_file(dir / "estimate_state.json", state_to_json(result, 0));
  write_file(dir / "history.csv", history_csv(result.state));
  write_file(dir / "profiles.csv", profiles_header(result.record.p_samples.size()) + '\n' +
                                       profile_row(result.record) + '\n');
  return result;
}

SweepSummary cmd_sweep(const RunConfig& config, bool resume, const Logger& log) {
  validate(config);
  const fs::path dir = config.output_dir;
  const fs::path csv = dir / "sweep.csv";
  const fs::path profiles = dir / "profiles.csv";
  const fs::path meta = dir / "sweep_meta.json";
  fs::create_directories(dir / "state");

  json meta_doc;
  meta_doc["config"] = sweep_identity(config);
  meta_doc["direction"] = "ascending";
  meta_doc["omega_count"] = config.omega_count();

  SweepSummary summary;
  std::vector<EstimateResult> done;
  if (resume && fs::exists(meta)) {
    const json old = json::parse(read_file(meta));
    if (old.at("config") != meta_doc["config"]) {
      throw ConfigError("cannot resume: " + meta.string() +
                        " was written for a different configuration");
    }
    for (int k = 0; k < config.omega_count() && fs::exists(state_path(config, k)); ++k) {
      done.push_back(state_from_json(read_file(state_path(config, k))));
    }
  } else {
    for (const auto& entry : fs::directory_iterator(dir / "state")) {
      if (entry.path().extension() == ".json") fs::remove(entry.path());
    }
  }
  write_file(meta, meta_doc.dump(2) + '\n');

  // Rebuild the CSVs from the stored records so a resumed run matches an
  // uninterrupted one byte for byte.
  const Eigen::Index profile_len = config.fine_m;
  std::string csv_text = std::string(kSweepHeader) + '\n';
  std::string profile_text = profiles_header(profile_len) + '\n';
  for (const EstimateResult& r : done) {
    csv_text += csv_row(r.record) + '\n';
    profile_text += profile_row(r.record) + '\n';
    if (r.record.failed) ++summary.failures;
  }
  write_file(csv, csv_text);
  write_file(profiles, profile_text);
  summary.resumed = static_cast<int>(done.size());
  if (summary.resumed > 0) {
    note(log, "resuming after " + std::to_string(summary.resumed) + " completed frequencies");
  }

  std::optional<OptState> warm;
  if (!done.empty()) warm = done.back().state;
  done.clear();

  for (int k = summary.resumed; k < config.omega_count(); ++k) {
    const double omega = config.omega_at(k);
    EstimateResult r = estimate_omega(config, omega, warm ? &*warm : nullptr, log);
    write_file(state_path(config, k), state_to_json(r, k));
    append_line(csv, csv_row(r.record));
    append_line(profiles, profile_row(r.record));
    if (r.record.failed) ++summary.failures;
    ++summary.computed;
    note(log, "omega " + fmt17(omega) + ": estimate " + fmt17(r.record.schur_estimate) +
                  ", iterations " + std::to_string(r.record.iterations) + ", references " +
                  std::to_string(r.record.ref_points));
    warm = std::move(r.state);
  }
  return summary;
}

Baselines compute_baselines(const RunConfig& config) {
  validate(config);
  const KernelParams kp = config.kernel_params();
  Baselines b;
  b.lambda_inverse = config.lambda_inverse();
  b.l2_kbar = l2_kbar_closed(kp);
  b.tkbar_modes = config.asymptotic_trunc_n;
  b.tkbar_norm = matrix_norm(truncation_matrix_kbar(kp, config.asymptotic_trunc_n));
  return b;
}

std::string baselines_to_json(const Baselines& b) {
  json doc;
  doc["lambda_inverse"] = b.lambda_inverse ? json(*b.lambda_inverse) : json(nullptr);
  doc["l2_norm_kbar"] = b.l2_kbar;
  doc["norm_t_kbar"] = b.tkbar_norm;
  doc["norm_t_kbar_modes"] = b.tkbar_modes;
  return doc.dump(2) + '\n';
}

Baselines cmd_baselines(const RunConfig& config) {
  const Baselines b = compute_baselines(config);
  fs::create_directories(config.output_dir);
  write_file(config.output_dir / "baselines.json", baselines_to_json(b));
  return b;
}

}  // namespace schurnorm
