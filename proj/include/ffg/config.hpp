#pragma once

#include <map>
#include <string>

#include "ffg/harness.hpp"

namespace ffg {

// A run configuration: GameParams plus the trace files backing the
// experiment. Parsed from a key=value text file ('#' starts a comment).
struct RunConfig {
  GameParams params;
  std::string ipd_trace;
  std::string delay_trace_1;
  std::string delay_trace_2;
  std::map<std::string, std::string> raw;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::map<std::string, std::string>& kv);

// Writes the effective configuration, master seed and library version next
// to the outputs so a run can be reproduced from its artifacts alone.
void write_manifest(const std::string& path, const RunConfig& cfg);

const char* version_string();

std::string to_string(FingerprintStrategy s);
std::string to_string(AdStrategy s);
std::string to_string(DetectorVariant v);
std::string to_string(RhoMode m);

}  // namespace ffg
