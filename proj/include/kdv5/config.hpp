#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace kdv5 {

// One scenario = one JSON document. Parsing is strict: unknown keys are
// rejected with the offending path (and source line when it can be located),
// numeric fields are validated against the module preconditions at load time.
struct ScenarioConfig {
    struct GridCfg {
        int K = 16;
        int n_points = 0;  // 0 = default
    } grid;

    struct ModelCfg {
        double eps = 0.0;
        double beta0 = 0.0;
        double beta1 = 0.0;
        int l = 2;
        double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
        bool hierarchy = false;
        bool feedback = false;
    } model;

    struct ProfileCfg {
        bool uniform = false;
        double center = 3.14159265358979323846;
        double radius = 1.57079632679489661923;
    } profile;

    struct RunCfg {
        std::string command;   // simulate | stabilize | control | observability | verify
        double T = 1.0;
        double dt = 1e-3;
        double s = 2.5;
        double tol = 1e-8;
        unsigned long long seed = 0;
        bool linear = false;   // control: linear vs nonlinear steering
    } run;

    struct DataCfg {
        // either a named analytic field ...
        std::string name;      // "sine" | "cosine" | "two_mode" | "random" | ""
        int k = 1;
        double amplitude = 1e-3;
        // ... or an explicit coefficient list [[k, re, im], ...]
        std::vector<std::array<double, 3>> modes;
        bool present = false;
    };
    DataCfg initial_data;
    DataCfg target_data;

    struct OutputCfg {
        std::string directory = "out";
        std::vector<std::string> formats = {"csv", "json"};
        std::vector<double> norms_s = {0.0, 2.5};
        int stride = 1;
        std::string trajectory_kind = "physical";  // physical | modes
    } output;

    int threads = 1;

    std::string raw;  // original document (manifest echo + hashing)
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text, const std::string& origin);

// FNV-1a over the raw document, hex-encoded; stable across runs.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace kdv5
