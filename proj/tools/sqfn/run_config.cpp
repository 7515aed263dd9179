#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "sqfn/errors.hpp"
#include "sqfn/lemma.hpp"

namespace sqfn::cli {

namespace {

void allow_only(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ParameterError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; }))
      throw ParameterError("unknown key '" + item.key() + "' in " + where);
  }
}

template <class T>
T get_or(const Json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParameterError(std::string("bad value for '") + key + "'");
  }
}

Json resolve_grid(const Json& in) {
  Json g = in.is_null() ? Json::object() : in;
  allow_only(g, "grid", {"n", "samples_per_axis", "period"});
  Json out;
  out["n"] = get_or(g, "n", 2);
  out["samples_per_axis"] = get_or(g, "samples_per_axis", 256);
  out["period"] = get_or(g, "period", 1.0);
  grid_from(out);  // validates
  return out;
}

Json resolve_recipe(const Json& in) {
  Json r = in.is_null() ? Json{{"kind", "atom"}} : in;
  allow_only(r, "recipe", {"kind", "center", "width", "beta", "decay_exponent", "seed", "generator"});
  return Json::parse(to_json(recipe_from_json(r.dump())));
}

Json resolve_scales(const Json& in, const GridSpec& grid, int support_multiple) {
  Json s = in.is_null() ? Json::object() : in;
  allow_only(s, "scales", {"t_min", "t_min_in_cells", "t_max", "per_octave"});
  if (s.contains("t_min") && s.contains("t_min_in_cells"))
    throw ParameterError("give either scales.t_min or scales.t_min_in_cells, not both");
  Json out;
  if (s.contains("t_min"))
    out["t_min"] = get_or(s, "t_min", 0.0);
  else
    out["t_min_in_cells"] = get_or(s, "t_min_in_cells", 2.0);
  out["t_max"] = get_or(s, "t_max", ScaleGrid::max_admissible_scale(grid, support_multiple));
  out["per_octave"] = get_or(s, "per_octave", 4);
  scales_from(out, grid, support_multiple);  // validates
  return out;
}

// "input" file or "grid" + "recipe".
void resolve_source(const Json& c, Json& out) {
  if (c.contains("input")) {
    if (c.contains("recipe") || c.contains("grid"))
      throw ParameterError("give either input or grid/recipe, not both");
    std::filesystem::path p = get_or<std::string>(c, "input", "");
    out["input"] = std::filesystem::absolute(p).lexically_normal().string();
  } else {
    out["grid"] = resolve_grid(c.contains("grid") ? c["grid"] : Json());
    out["recipe"] = resolve_recipe(c.contains("recipe") ? c["recipe"] : Json());
  }
}

GridSpec source_grid(const Json& out) {
  if (out.contains("input")) return read_field(out["input"].get<std::string>()).grid();
  return grid_from(out["grid"]);
}

}  // namespace

GridSpec grid_from(const Json& g) {
  return GridSpec(g.at("n").get<int>(), g.at("samples_per_axis").get<int>(), g.at("period").get<double>());
}

FieldRecipe recipe_from(const Json& recipe) { return recipe_from_json(recipe.dump()); }

SymbolMode mode_from(const Json& config) {
  const auto name = config.at("symbol_mode").get<std::string>();
  if (name == "discrete") return SymbolMode::Discrete;
  if (name == "analytic") return SymbolMode::Analytic;
  throw ParameterError("symbol_mode must be 'discrete' or 'analytic', got '" + name + "'");
}

KernelSpec kernel_from(const Json& kernel, int n) {
  const auto kind = kernel.at("kind").get<std::string>();
  if (kind == "ball") return KernelSpec::ball(n);
  if (kind == "binomial") return KernelSpec::binomial(n, kernel.at("k").get<int>());
  throw ParameterError("kernel.kind must be 'ball' or 'binomial', got '" + kind + "'");
}

ScaleGrid scales_from(const Json& s, const GridSpec& grid, int support_multiple) {
  const double t_min =
      s.contains("t_min") ? s["t_min"].get<double>() : s["t_min_in_cells"].get<double>() * grid.spacing();
  return ScaleGrid::make(grid, t_min, s.at("t_max").get<double>(), s.at("per_octave").get<int>(),
                         support_multiple);
}

Field input_field(const Json& config) {
  if (config.contains("input")) return read_field(config["input"].get<std::string>());
  return generate(grid_from(config["grid"]), recipe_from(config["recipe"]));
}

Json resolve_config(const std::string& command, const std::optional<std::filesystem::path>& path,
                    const Overrides& overrides) {
  Json c = Json::object();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw FieldIoError(FieldIoError::Kind::Open, "cannot open config " + path->string());
    try {
      c = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParameterError("config " + path->string() + " is not valid JSON: " + e.what());
    }
    if (!c.is_object()) throw ParameterError("config must be a JSON object");
  }
  if (c.contains("command") && c["command"] != command)
    throw ParameterError("config was written for '" + c["command"].get<std::string>() + "', not '" + command + "'");

  Json out;
  out["command"] = command;
  out["threads"] = overrides.threads ? *overrides.threads : get_or(c, "threads", 1);
  if (out["threads"].get<int>() < 1) throw ParameterError("threads must be at least 1");

  if (command == "gen") {
    allow_only(c, "gen config", {"command", "threads", "grid", "recipe", "csv"});
    out["grid"] = resolve_grid(c.contains("grid") ? c["grid"] : Json());
    out["recipe"] = resolve_recipe(c.contains("recipe") ? c["recipe"] : Json());
    out["csv"] = get_or(c, "csv", false);
    return out;
  }

  if (command == "squarefn") {
    allow_only(c, "squarefn config",
               {"command", "threads", "input", "grid", "recipe", "symbol_mode", "alpha", "kernel", "scales",
                "override_range", "check_identity"});
    resolve_source(c, out);
    const GridSpec grid = source_grid(out);
    out["symbol_mode"] = get_or<std::string>(c, "symbol_mode", "discrete");
    mode_from(out);
    out["alpha"] = get_or(c, "alpha", 1.5);
    Json k = c.contains("kernel") ? c["kernel"] : Json{{"kind", "ball"}};
    allow_only(k, "kernel", {"kind", "k"});
    Json kernel;
    kernel["kind"] = get_or<std::string>(k, "kind", "ball");
    if (kernel["kind"] == "binomial") kernel["k"] = get_or(k, "k", 2);
    const KernelSpec spec = kernel_from(kernel, grid.dimension());
    out["kernel"] = kernel;
    out["scales"] = resolve_scales(c.contains("scales") ? c["scales"] : Json(), grid, spec.order());
    out["override_range"] = overrides.override_range || get_or(c, "override_range", false);
    out["check_identity"] = overrides.check_identity || get_or(c, "check_identity", false);
    return out;
  }

  if (command == "equiv") {
    allow_only(c, "equiv config",
               {"command", "threads", "input", "grid", "recipe", "symbol_mode", "alpha", "k_list", "scales",
                "family", "override_range"});
    resolve_source(c, out);
    const GridSpec grid = source_grid(out);
    out["symbol_mode"] = get_or<std::string>(c, "symbol_mode", "discrete");
    mode_from(out);
    out["alpha"] = get_or(c, "alpha", 1.5);
    auto k_list = get_or(c, "k_list", std::vector<int>{1, 2, 3});
    for (int k : k_list) KernelSpec::binomial(grid.dimension(), k);
    out["k_list"] = k_list;
    const int kmax = k_list.empty() ? 1 : *std::max_element(k_list.begin(), k_list.end());
    out["scales"] = resolve_scales(c.contains("scales") ? c["scales"] : Json(), grid, kmax);

    Json f = c.contains("family") ? c["family"] : Json{{"kind", "single"}};
    allow_only(f, "family", {"kind", "count", "shifts", "sizes"});
    Json family;
    family["kind"] = get_or<std::string>(f, "kind", "single");
    const auto kind = family["kind"].get<std::string>();
    if (kind == "translations") {
      if (f.contains("shifts")) {
        family["shifts"] = get_or(f, "shifts", std::vector<std::vector<int>>{});
      } else {
        const int count = get_or(f, "count", 8);
        if (count < 1) throw ParameterError("family.count must be at least 1");
        std::vector<std::vector<int>> shifts;
        const int N = grid.samples_per_axis();
        for (int i = 0; i < count; ++i) {
          std::vector<int> s(static_cast<std::size_t>(grid.dimension()));
          for (int a = 0; a < grid.dimension(); ++a)
            s[static_cast<std::size_t>(a)] = static_cast<int>((static_cast<long>(i) * N * (a + 1) / count) % N);
          shifts.push_back(s);
        }
        family["shifts"] = shifts;
      }
    } else if (kind == "refinement") {
      if (out.contains("input")) throw ParameterError("refinement family needs a recipe, not an input file");
      family["sizes"] = get_or(f, "sizes", std::vector<int>{128, 256, 512});
      for (int N : family["sizes"].get<std::vector<int>>())
        scales_from(out["scales"], GridSpec(grid.dimension(), N, grid.period()), kmax);
    } else if (kind != "single" && kind != "dilation") {
      throw ParameterError("family.kind must be single, translations, dilation or refinement");
    }
    out["family"] = family;
    out["override_range"] = overrides.override_range || get_or(c, "override_range", false);
    return out;
  }

  if (command == "lemma") {
    allow_only(c, "lemma config", {"command", "threads", "alpha", "n", "tol", "sampling", "grad_checks"});
    out["alpha"] = get_or(c, "alpha", 1.5);
    out["n"] = get_or(c, "n", 2);
    out["tol"] = get_or(c, "tol", 1e-8);
    Json s = c.contains("sampling") ? c["sampling"] : Json::object();
    allow_only(s, "sampling", {"bases", "ladder", "seed", "u_min", "u_max", "custom"});
    SampleSpec defaults;
    Json sampling;
    sampling["bases"] = get_or(s, "bases", defaults.bases);
    sampling["ladder"] = get_or(s, "ladder", defaults.ladder);
    sampling["seed"] = get_or(s, "seed", defaults.seed);
    sampling["u_min"] = get_or(s, "u_min", defaults.u_min);
    sampling["u_max"] = get_or(s, "u_max", defaults.u_max);
    Json custom = Json::array();
    if (s.contains("custom")) {
      for (const auto& pair : s["custom"]) {
        allow_only(pair, "sampling.custom entry", {"u", "v"});
        custom.push_back(Json{{"u", get_or(pair, "u", std::vector<double>{})},
                              {"v", get_or(pair, "v", std::vector<double>{})}});
      }
    }
    sampling["custom"] = custom;
    out["sampling"] = sampling;
    Json checks = Json::array();
    if (c.contains("grad_checks")) {
      for (const auto& g : c["grad_checks"]) {
        allow_only(g, "grad_checks entry", {"n", "alpha", "radius"});
        checks.push_back(Json{{"n", get_or(g, "n", 2)}, {"alpha", get_or(g, "alpha", 1.5)},
                              {"radius", get_or(g, "radius", 1.0)}});
      }
    } else {
      for (int n : {2, 3})
        for (double frac : {0.6, 0.8})
          for (double radius : {0.5, 1.0, 2.0})
            checks.push_back(Json{{"n", n}, {"alpha", frac * n}, {"radius", radius}});
    }
    out["grad_checks"] = checks;
    return out;
  }

  throw ParameterError("unknown command '" + command + "'");
}

}  // namespace sqfn::cli
