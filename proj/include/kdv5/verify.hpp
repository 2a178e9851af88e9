#pragma once

#include <string>
#include <vector>

#include "kdv5/hum.hpp"

namespace kdv5 {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured defect / quantity
    double threshold = 0.0;  // bound it was held against
    std::string detail;
};

struct VerifyOptions {
    int K = 16;
    double T = 1.0;
    double dt = 1e-3;
    double s = 2.5;
    double tol = 1e-6;
    unsigned long long seed = 12345;
    double center = 3.14159265358979323846;
    double radius = 1.57079632679489661923;
    int threads = 1;
};

// The invariant battery behind the `verify` command: spectral calculus,
// control-operator identities, energy/weighted ledgers, semigroup and duality
// relations, Gramian structure, conservation. Scales with the options; the
// acceptance suite pins its own parameters on top of these.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace kdv5
