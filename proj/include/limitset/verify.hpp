#pragma once

#include "limitset/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace limitset {

/// One named check inside a verification run. pass holds exactly when
/// margin >= -tolerance.
struct Margin {
    std::string name;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string id;
    nlohmann::ordered_json inputs;
    nlohmann::ordered_json measured;
    std::vector<Margin> margins;
    bool pass = false;
    double runtime_seconds = 0.0;

    nlohmann::ordered_json to_json(bool include_runtime = true) const;
    std::string summary_text() const;
};

/// Canonical experiment for a theorem id. Known ids: sepwa, radial, bigthm,
/// boxchar, hauschar, alphabeta, gammaradial, kleinian. dim_tol replaces the
/// default 0.1 on dimension/exponent comparisons; closed-form targets keep
/// their own 0.05. depth overrides the experiment's pinned truncation depth
/// (net/cover depth K, or max word length for the group suite).
VerificationReport run_verification(const std::string& id, double dim_tol = 0.1,
                                    std::uint64_t seed = 7, int depth = 0);

std::vector<std::string> verification_ids();

}  // namespace limitset
