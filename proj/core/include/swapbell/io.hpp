#pragma once

// File formats shared by the command-line tool and its tests.
//
// Every JSON document carries "format_version". The event CSV has a fixed
// header row; its column list is the schema version.

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swapbell/correlation.hpp"
#include "swapbell/lhv.hpp"
#include "swapbell/parity_solver.hpp"
#include "swapbell/quantum.hpp"

namespace swapbell::io {

inline constexpr int kFormatVersion = 1;

/// Raised for any malformed or version-mismatched input document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json angles_to_json(const AngleSettings& angles);
AngleSettings angles_from_json(const nlohmann::json& j);

// --- constraint sets -------------------------------------------------------
//
// {format_version, context:{kappa,label}, angle_quantum,
//  variables:[{id,tag,angles[]}],
//  constraints:[{id,vars[],required_sign,provenance:{angles[],zeta,equation}}]}

nlohmann::json constraint_set_to_json(const ConstraintSet& cs);
ConstraintSet constraint_set_from_json(const nlohmann::json& j);

// --- solver results --------------------------------------------------------

/// {format_version, method, status, model?, certificate?, explanation[]}.
/// explanation spells out each certificate line (or the model) with variable
/// names and provenance.
nlohmann::json solve_result_to_json(const ConstraintSet& cs, const SolveResult& result,
                                    std::string_view method);
SolveResult solve_result_from_json(const nlohmann::json& j);

// --- angle settings files --------------------------------------------------
//
// {format_version, settings:[[phi1,phi2,phi3,phi4], ...]} in radians.

nlohmann::json settings_to_json(std::span<const AngleSettings> settings);
std::vector<AngleSettings> settings_from_json(const nlohmann::json& j);

// --- quantum tables --------------------------------------------------------

nlohmann::json amplitudes_to_json(const BellBellAmplitudes& amps);
nlohmann::json correlation_report_to_json(const CorrelationReport& report);

// --- event CSV -------------------------------------------------------------

inline constexpr std::string_view kEventCsvHeader =
    "event_id,phi1,phi2,phi3,phi4,bc_outcome,pol_a,pol_d,kappa,f,a,d,product";

/// Header plus one LF-terminated row per event; angles use format_double.
void write_events_csv(std::ostream& out, std::span<const EventRecord> events);
std::vector<EventRecord> read_events_csv(std::istream& in);

// --- report document -------------------------------------------------------

struct ReportDocument {
  int format_version = kFormatVersion;
  std::string command;
  nlohmann::json body = nlohmann::json::object();

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

std::string serialize(const ReportDocument& doc, int indent = 2);
ReportDocument parse_report(std::string_view text);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace swapbell::io
