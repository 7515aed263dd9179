#pragma once

#include <filesystem>

#include "run_config.hpp"

namespace sqfn::cli {

// Each command takes a resolved config, computes everything, then writes its
// outputs (and run_config.json) into `out`. Returns the process exit code.
int run_gen(const Json& config, const std::filesystem::path& out);
int run_squarefn(const Json& config, const std::filesystem::path& out);
int run_equiv(const Json& config, const std::filesystem::path& out);
int run_lemma(const Json& config, const std::filesystem::path& out);

}  // namespace sqfn::cli
