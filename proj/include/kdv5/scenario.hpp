#pragma once

#include "kdv5/config.hpp"
#include "kdv5/hum.hpp"

namespace kdv5 {

struct ScenarioOverrides {
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::optional<std::string> command;  // must match run.command when both set
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Dispatches a scenario, writes artifact files plus a manifest, and maps
// typed failures to the CLI exit codes (diagnostics go to stderr).
int run_scenario(const std::string& config_path, const ScenarioOverrides& overrides = {});

// 17-significant-digit float formatting used by every CSV/JSON writer; the
// representation round-trips doubles exactly, which the determinism and
// signal re-import contracts rely on.
std::string fmt_g17(double x);

void write_signal_csv(const ControlSignal& k, const std::string& path);
ControlSignal read_signal_csv(const std::string& path, const PeriodicGrid& grid);

}  // namespace kdv5
