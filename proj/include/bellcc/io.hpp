#pragma once

// File formats and report serialization.
//
// g file:    {"n": 3, "values": [g(000), g(001), ..., g(111)]}
// sign file: {"n": 2, "mask": "0x96"}   bit j of mask = (S + 1)/2 at s-index j

#include <string>

#include "json.hpp"

#include "bellcc/ccp.hpp"
#include "bellcc/continuum.hpp"
#include "bellcc/inequalities.hpp"
#include "bellcc/montecarlo.hpp"

namespace bellcc::io {

using Json = nlohmann::ordered_json;

// `source` names the input in diagnostics. Throws ParseError naming the line
// and column for syntax errors, or the offending field otherwise.
ineq::GTable parse_g_table(const std::string& text, const std::string& source = "<g>");
ineq::GTable load_g_table(const std::string& path);
Json g_table_json(const ineq::GTable& g);

ineq::SignFunction parse_sign_function(const std::string& text, const std::string& source = "<sign>");
ineq::SignFunction load_sign_function(const std::string& path);
Json sign_function_json(const ineq::SignFunction& sign);

Json strategy_json(const ineq::DeterministicStrategy& strategy);

Json to_json(const ccp::SuccessReport& report);
ccp::SuccessReport success_report_from_json(const Json& j);

Json to_json(const mc::SimReport& report);
mc::SimReport sim_report_from_json(const Json& j);

Json to_json(const continuum::ContinuumReport& report);
continuum::ContinuumReport continuum_report_from_json(const Json& j);

// %.17g; non-finite values print as inf / -inf / nan.
std::string format_double(double value);

}  // namespace bellcc::io
