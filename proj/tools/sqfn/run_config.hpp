#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "sqfn/convolve.hpp"
#include "sqfn/field.hpp"
#include "sqfn/kernels.hpp"
#include "sqfn/squarefn.hpp"
#include "sqfn/testfields.hpp"

namespace sqfn::cli {

using Json = nlohmann::ordered_json;

/// Flags that override or complement the config file.
struct Overrides {
  std::optional<int> threads;
  bool override_range = false;
  bool check_identity = false;
};

/// Reads a config file (or an empty object when no path is given), then
/// fills every default so the returned document fully determines the run.
/// Throws ParameterError on unknown keys or malformed values.
Json resolve_config(const std::string& command, const std::optional<std::filesystem::path>& path,
                    const Overrides& overrides);

GridSpec grid_from(const Json& grid);
FieldRecipe recipe_from(const Json& recipe);
SymbolMode mode_from(const Json& config);
KernelSpec kernel_from(const Json& kernel, int n);

/// Scale grid for `grid` from a resolved "scales" object; `support_multiple`
/// is the largest kernel order served.
ScaleGrid scales_from(const Json& scales, const GridSpec& grid, int support_multiple);

/// Field named by "input" (a field file) or generated from "recipe".
Field input_field(const Json& config);

}  // namespace sqfn::cli
