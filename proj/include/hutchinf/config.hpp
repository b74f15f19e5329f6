#pragma once

#include "hutchinf/engine.hpp"
#include "hutchinf/render.hpp"

#include <cstdint>
#include <string>

namespace hutchinf {

struct RunParams {
    int depth = 4;
    double prune_eps = 1e-3;
    int prefix = 8;  // truncation depth M for set products
    double tol = 0.05;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    int schema = 1;
    GifsSystem system;
    RunParams run;
    Viewport viewport;
    std::string out_path;
};

// Built-in system lookup: ex5 | sup-pair | sup-interval | half-sup.
GifsSystem system_by_name(const std::string& name);

// Default seed sequence for iteration: the full truncated space for the sup
// systems, the singleton seed point otherwise.
SetSeq default_seeds(const GifsSystem& sys);

// Sensible viewport per built-in system (renders use it when none is given).
Viewport default_viewport(const std::string& system_name);

// Versioned JSON config; unknown keys are rejected at every level.
ExperimentConfig parse_config_json(const std::string& text);

}  // namespace hutchinf
