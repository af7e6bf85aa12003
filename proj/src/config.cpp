#include "ffg/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ffg {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: bad boolean for " + key + ": " + v);
}

FingerprintStrategy parse_ta(const std::string& v) {
  if (v == "optimal") return FingerprintStrategy::optimal;
  if (v == "uniform") return FingerprintStrategy::uniform;
  if (v == "fancy") return FingerprintStrategy::fancy;
  if (v == "none") return FingerprintStrategy::none;
  throw std::runtime_error("config: unknown ta.fingerprint: " + v);
}

AdStrategy parse_ad(const std::string& v) {
  if (v == "optimal") return AdStrategy::optimal;
  if (v == "uniform-mu") return AdStrategy::uniform_mu;
  if (v == "uniform-delay") return AdStrategy::uniform_delay;
  if (v == "optimal-random-chaff") return AdStrategy::optimal_random_chaff;
  if (v == "none") return AdStrategy::none;
  throw std::runtime_error("config: unknown ad.strategy: " + v);
}

DetectorVariant parse_det(const std::string& v) {
  if (v == "proposed") return DetectorVariant::proposed;
  if (v == "baseline") return DetectorVariant::baseline;
  throw std::runtime_error("config: unknown detector.variant: " + v);
}

RhoMode parse_rho(const std::string& v) {
  if (v == "grid") return RhoMode::grid;
  if (v == "oracle") return RhoMode::oracle;
  throw std::runtime_error("config: unknown rho.mode: " + v);
}

}  // namespace

RunConfig parse_config(const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  cfg.raw = kv;
  GameParams& p = cfg.params;
  for (const auto& [key, value] : kv) {
    if (key == "n") p.n = std::stoul(value);
    else if (key == "w_c") p.w_c = std::stod(value);
    else if (key == "a_c") p.a_c = std::stod(value);
    else if (key == "p_a") p.p_a = std::stod(value);
    else if (key == "eta") p.eta = std::stod(value);
    else if (key == "sigma") p.sigma = std::stod(value);
    else if (key == "trials_h1") p.trials_h1 = std::stoul(value);
    else if (key == "trials_null") p.trials_null = std::stoul(value);
    else if (key == "master_seed") p.master_seed = std::stoull(value);
    else if (key == "ta.fingerprint") p.ta = parse_ta(value);
    else if (key == "ad.strategy") p.ad = parse_ad(value);
    else if (key == "detector.variant") p.detector = parse_det(value);
    else if (key == "detector.aggregate") p.log_sum = (value == "log-sum");
    else if (key == "detector.denominator")
      p.denominator_uses_fingerprint = (value == "fingerprint");
    else if (key == "follow_paper_equations")
      p.follow_paper_equations = parse_bool(value, key);
    else if (key == "grid_size") p.grid_size = std::stoi(value);
    else if (key == "quad_nodes") p.quad_nodes = std::stoi(value);
    else if (key == "rho.mode") p.rho_mode = parse_rho(value);
    else if (key == "rho.step") p.rho_step = std::stod(value);
    else if (key == "chaff.offset") p.chaff_offset = std::stod(value);
    else if (key == "belief.mc_realizations")
      p.belief_mc_realizations = std::stoi(value);
    else if (key == "density.fit_flows") p.density_fit_flows = std::stoul(value);
    else if (key == "density.max_centers")
      p.density_max_centers = std::stoul(value);
    else if (key == "ipd_trace") cfg.ipd_trace = value;
    else if (key == "delay_trace_1") cfg.delay_trace_1 = value;
    else if (key == "delay_trace_2") cfg.delay_trace_2 = value;
    else
      throw std::runtime_error("config: unknown key: " + key);
  }
  p.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key=value: " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return parse_config(kv);
}

void write_manifest(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << "# run manifest\n";
  out << "version=" << version_string() << "\n";
  const GameParams& p = cfg.params;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "n=%zu\nw_c=%.17g\na_c=%.17g\np_a=%.17g\neta=%.17g\n"
                "sigma=%.17g\ntrials_h1=%zu\ntrials_null=%zu\nmaster_seed=%llu\n",
                p.n, p.w_c, p.a_c, p.p_a, p.eta, p.resolved_sigma(),
                p.trials_h1, p.trials_null,
                static_cast<unsigned long long>(p.master_seed));
  out << buf;
  out << "ta.fingerprint=" << to_string(p.ta) << "\n";
  out << "ad.strategy=" << to_string(p.ad) << "\n";
  out << "detector.variant=" << to_string(p.detector) << "\n";
  out << "detector.aggregate=" << (p.log_sum ? "log-sum" : "sum") << "\n";
  out << "detector.denominator="
      << (p.denominator_uses_fingerprint ? "fingerprint" : "observation")
      << "\n";
  out << "follow_paper_equations="
      << (p.follow_paper_equations ? "true" : "false") << "\n";
  std::snprintf(buf, sizeof buf,
                "grid_size=%d\nquad_nodes=%d\nrho.step=%.17g\n"
                "chaff.offset=%.17g\nbelief.mc_realizations=%d\n"
                "density.fit_flows=%zu\ndensity.max_centers=%zu\n",
                p.grid_size, p.quad_nodes, p.rho_step, p.chaff_offset,
                p.belief_mc_realizations, p.density_fit_flows,
                p.density_max_centers);
  out << buf;
  out << "rho.mode=" << to_string(p.rho_mode) << "\n";
  out << "ipd_trace=" << cfg.ipd_trace << "\n";
  out << "delay_trace_1=" << cfg.delay_trace_1 << "\n";
  out << "delay_trace_2=" << cfg.delay_trace_2 << "\n";
}

const char* version_string() { return "ffg 0.1.0"; }

std::string to_string(FingerprintStrategy s) {
  switch (s) {
    case FingerprintStrategy::optimal: return "optimal";
    case FingerprintStrategy::uniform: return "uniform";
    case FingerprintStrategy::fancy: return "fancy";
    case FingerprintStrategy::none: return "none";
  }
  return "?";
}

std::string to_string(AdStrategy s) {
  switch (s) {
    case AdStrategy::optimal: return "optimal";
    case AdStrategy::uniform_mu: return "uniform-mu";
    case AdStrategy::uniform_delay: return "uniform-delay";
    case AdStrategy::optimal_random_chaff: return "optimal-random-chaff";
    case AdStrategy::none: return "none";
  }
  return "?";
}

std::string to_string(DetectorVariant v) {
  return v == DetectorVariant::proposed ? "proposed" : "baseline";
}

std::string to_string(RhoMode m) {
  return m == RhoMode::grid ? "grid" : "oracle";
}

}  // namespace ffg
