// checks.hpp -- named symbolic check suite over one algebra context.
// Independent items run on a small worker pool; report assembly is
// order-stable regardless of completion order.
#ifndef MKDV_CHECKS_HPP
#define MKDV_CHECKS_HPP

#include <string>
#include <vector>

#include "mkdv/serialize.hpp"

namespace mkdv {

struct CheckOptions {
    std::vector<int> flows;          // defaults to rank-appropriate set
    int degree = 0;                  // 0 -> max(flows) + 3
    std::vector<std::string> checks; // empty -> all applicable
    // Test hook: adds a bogus term to the named flow before running the
    // suite; used as a negative control.
    int perturb_flow = 0;
};

struct CheckItem {
    std::string name;
    std::string params;
    bool pass = false;
    // Residuals rendered verbatim ("0" or the offending polynomial/matrix).
    std::vector<std::pair<std::string, std::string>> residuals;
    std::string note;
};

struct CheckReport {
    std::string algebra;
    int degree = 0;
    std::vector<int> flows;
    std::vector<CheckItem> items;
    bool pass = true;
    // Normalisation ledger: p_n scale, measured constants.
    Json constants;
};

std::vector<std::string> known_checks();
std::vector<int> default_flows(const AlgebraCtx& ctx);

CheckReport run_checks(const AlgebraCtx& ctx, const CheckOptions& opt);

Json check_report_to_json(const CheckReport& rep);
std::string check_report_to_text(const CheckReport& rep);

} // namespace mkdv

#endif
