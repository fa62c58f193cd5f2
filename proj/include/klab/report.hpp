// Structured pass/fail records emitted by every verifier, plus the frozen
// registry mapping claim ids to the statement each one checks.

#pragma once

#include <map>
#include <string>
#include <vector>

namespace klab {

enum class CheckStatus { pass, fail, skipped_hypothesis };

std::string to_string(CheckStatus s);

struct VerificationReport {
    std::string claim_id;
    CheckStatus status = CheckStatus::fail;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;      // orientation documented per claim in the registry
    double tolerance = 0.0;
    std::string witness;     // point / vector / seed reproducing the check
    std::string note;

    bool passed() const { return status == CheckStatus::pass; }
    bool failed() const { return status == CheckStatus::fail; }

    // one deterministic line per claim, greppable
    std::string to_line() const;
};

// pass iff slack >= -tolerance
VerificationReport make_report(std::string claim_id, double lhs, double rhs, double slack,
                               double tolerance, std::string witness, std::string note = {});

VerificationReport make_skipped(std::string claim_id, std::string witness, std::string note);

// Frozen claim registry: stable id -> the statement being verified, with the
// slack orientation. Every claim id used by a verifier must appear here.
const std::map<std::string, std::string>& claim_registry();

// renders "claim  status  lhs  rhs  slack" rows plus a verdict footer
std::string summary_table(const std::vector<VerificationReport>& reports);

}  // namespace klab
