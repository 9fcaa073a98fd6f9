#pragma once

#include <filesystem>
#include <vector>

#include "intertwine/cli/config.hpp"
#include "intertwine/cli/io.hpp"

namespace intertwine::cli {

struct RunOutput {
  std::vector<std::filesystem::path> files;
  Json report;
};

RunOutput run_static(const RunConfig& cfg);
RunOutput run_floquet(const RunConfig& cfg);
RunOutput run_trace(const RunConfig& cfg);
RunOutput run_scan(const RunConfig& cfg);

}  // namespace intertwine::cli
