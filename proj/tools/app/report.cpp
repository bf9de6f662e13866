#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace levyext::app {

using nlohmann::json;

namespace {

json level_json(const LevelRecord& r) {
  json j = {{"x", r.x},
            {"count", r.count},
            {"trials", r.trials},
            {"probability", {{"estimate", r.probability.estimate},
                             {"lower", r.probability.lower},
                             {"upper", r.probability.upper},
                             {"standard_error", r.probability.standard_error}}},
            {"estimate", r.estimate},
            {"lower", r.lower},
            {"upper", r.upper},
            {"target", r.target},
            {"usable", r.usable},
            {"covered", r.covered}};
  if (r.exact) j["exact"] = *r.exact;
  if (r.exact_covered) j["exact_covered"] = *r.exact_covered;
  return j;
}

json levels_json(const std::vector<LevelRecord>& levels) {
  json a = json::array();
  for (const auto& r : levels) a.push_back(level_json(r));
  return a;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

json to_json(const Verdict& v) {
  return {{"name", v.name}, {"pass", v.pass}, {"tolerance", v.tolerance}, {"detail", v.detail}};
}

json to_json(const CountLimitRow& row) {
  return {{"k", row.k},           {"scalings", row.scalings}, {"p_ratio", row.p_ratio},
          {"q_ratio", row.q_ratio}, {"liminf_p", row.liminf_p}, {"limsup_q", row.limsup_q},
          {"final_p", row.final_p}, {"final_q", row.final_q}};
}

json to_json(const ExperimentResult& r) {
  json j = {{"kind", r.kind},
            {"replicates", r.replicates},
            {"seed", r.seed},
            {"passed", r.passed()},
            {"metrics", r.metrics}};
  if (r.target != 0.0) {
    j["target"] = r.target;
    j["target_error"] = r.target_error;
  }
  if (!r.levels.empty()) j["levels"] = levels_json(r.levels);
  if (!r.perturbed_levels.empty()) j["perturbed_levels"] = levels_json(r.perturbed_levels);
  if (!r.ladder.empty()) {
    json ladder = json::array();
    for (const auto& rung : r.ladder) {
      json g = {{"scaling", rung.scaling}, {"volume", rung.volume}, {"norming", rung.norming},
                {"ks", rung.ks},           {"levels", levels_json(rung.levels)}};
      if (rung.ks_exact) g["ks_exact"] = *rung.ks_exact;
      if (!rung.perturbed_levels.empty()) {
        g["perturbed_levels"] = levels_json(rung.perturbed_levels);
        g["ks_perturbed"] = rung.ks_perturbed.value_or(0.0);
        g["paired_difference"] = rung.paired_difference;
        g["paired_half_width"] = rung.paired_half_width;
      }
      ladder.push_back(std::move(g));
    }
    j["ladder"] = std::move(ladder);
  }
  if (!r.table.empty()) {
    json t = json::array();
    for (const auto& row : r.table) t.push_back({{"label", row.label}, {"values", row.values}});
    j["table"] = std::move(t);
  }
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  j["verdicts"] = std::move(verdicts);
  return j;
}

std::string results_csv(const ExperimentResult& r) {
  std::ostringstream os;
  if (!r.ladder.empty()) {
    os << "scaling,volume,norming,x,count,trials,cdf_hat,lower,upper,target,covered,exact,"
          "exact_covered,ks,ks_exact,cdf_hat_perturbed,paired_difference,paired_half_width\n";
    for (const auto& g : r.ladder) {
      for (std::size_t i = 0; i < g.levels.size(); ++i) {
        const auto& l = g.levels[i];
        os << num(g.scaling) << ',' << num(g.volume) << ',' << num(g.norming) << ',' << num(l.x)
           << ',' << l.count << ',' << l.trials << ',' << num(l.estimate) << ',' << num(l.lower)
           << ',' << num(l.upper) << ',' << num(l.target) << ',' << l.covered << ','
           << (l.exact ? num(*l.exact) : "") << ','
           << (l.exact_covered ? std::to_string(*l.exact_covered) : "") << ',' << num(g.ks) << ','
           << (g.ks_exact ? num(*g.ks_exact) : "") << ',';
        if (i < g.perturbed_levels.size()) {
          os << num(g.perturbed_levels[i].estimate) << ',' << num(g.paired_difference[i]) << ','
             << num(g.paired_half_width[i]);
        } else {
          os << ",,";
        }
        os << '\n';
      }
    }
    return os.str();
  }
  os << "variant,x,count,trials,p_hat,p_lower,p_upper,ratio,ratio_lower,ratio_upper,target,usable,"
        "covered\n";
  auto rows = [&](const char* variant, const std::vector<LevelRecord>& levels) {
    for (const auto& l : levels) {
      os << variant << ',' << num(l.x) << ',' << l.count << ',' << l.trials << ','
         << num(l.probability.estimate) << ',' << num(l.probability.lower) << ','
         << num(l.probability.upper) << ',' << num(l.estimate) << ',' << num(l.lower) << ','
         << num(l.upper) << ',' << num(l.target) << ',' << l.usable << ',' << l.covered << '\n';
    }
  };
  rows("plain", r.levels);
  rows("perturbed", r.perturbed_levels);
  return os.str();
}

std::string table_csv(const ExperimentResult& r) {
  std::ostringstream os;
  if (r.table.empty()) return os.str();
  os << "label";
  for (const auto& [k, v] : r.table.front().values) os << ',' << k;
  os << '\n';
  for (const auto& row : r.table) {
    os << row.label;
    for (const auto& [k, v] : row.values) os << ',' << num(v);
    os << '\n';
  }
  return os.str();
}

std::string config_digest(const json& config) {
  const std::string canonical = config.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunWriter::RunWriter(std::filesystem::path out_dir, std::string subcommand, const json& config,
                     std::uint64_t seed)
    : dir_(std::move(out_dir)),
      subcommand_(std::move(subcommand)),
      digest_(config_digest(config)),
      seed_(seed),
      started_(utc_timestamp()) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path RunWriter::write(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  write_atomic(path, content);
  outputs_.push_back(path.string());
  return path;
}

std::filesystem::path RunWriter::write_json(const std::string& name, const json& payload) {
  return write(name, payload.dump(2) + "\n");
}

void RunWriter::finish(int exit_status) {
  const json manifest = {{"config_digest", digest_},
                         {"toolkit_version", LEVYEXT_VERSION},
                         {"subcommand", subcommand_},
                         {"seed", seed_},
                         {"started", started_},
                         {"finished", utc_timestamp()},
                         {"exit_status", exit_status},
                         {"outputs", outputs_}};
  write_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace levyext::app
