#pragma once

#include <string>
#include <vector>

namespace shc::validation {

struct CriterionResult {
    std::string id;
    std::string description;
    bool pass = false;
    double measured = 0.0;   // worst observed discrepancy, in tolerance units where noted
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

// Criterion ids A1..A10. The fast suite holds the sub-minute ones.
std::vector<std::string> criteria_ids(const std::string& suite);

CriterionResult run_criterion(const std::string& id, int threads = 0);

std::vector<CriterionResult> run_suite(const std::string& suite, int threads = 0);

// Numerical-evidence table for the arctan law below u = 1: quadrature value,
// arctan value, and their difference per abscissa. Reported, not asserted.
struct ArctanEvidenceRow {
    double u, quadrature, arctan, difference;
};
std::vector<ArctanEvidenceRow> arctan_below_one_table();

} // namespace shc::validation
