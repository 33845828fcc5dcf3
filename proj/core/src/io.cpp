#include "swapbell/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace swapbell::io {

using nlohmann::json;

namespace {

void check_version(const json& j, std::string_view what) {
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
  if (!j.contains("format_version")) {
    throw FormatError(std::string(what) + ": missing format_version");
  }
  const int version = j.at("format_version").get<int>();
  if (version != kFormatVersion) {
    throw FormatError(std::string(what) + ": unsupported format_version " +
                      std::to_string(version));
  }
}

int sign_from_json(const json& j, std::string_view field) {
  const int v = j.get<int>();
  if (v != 1 && v != -1) {
    throw FormatError(std::string(field) + " must be +1 or -1");
  }
  return v;
}

BellOutcome bell_from_string(std::string_view text) {
  for (BellOutcome b : kBellOutcomes)
    if (to_string(b) == text) return b;
  throw FormatError("unknown Bell outcome '" + std::string(text) + "'");
}

Polarization polarization_from_string(std::string_view text) {
  if (text == "H") return Polarization::H;
  if (text == "V") return Polarization::V;
  throw FormatError("unknown polarization '" + std::string(text) + "'");
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw FormatError("not a number: '" + text + "'");
  }
  return value;
}

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

std::string constraint_text(const ConstraintSet& cs, const ParityConstraint& c) {
  std::string text;
  for (std::size_t i = 0; i < c.variables.size(); ++i) {
    if (i) text += " * ";
    text += cs.variable(c.variables[i]).describe(cs.angle_quantum());
  }
  text += c.required_sign == 1 ? " = +1" : " = -1";
  return text;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

json angles_to_json(const AngleSettings& angles) {
  return json::array({angles.phi1, angles.phi2, angles.phi3, angles.phi4});
}

AngleSettings angles_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw FormatError("angle setting must be an array of four numbers");
  }
  AngleSettings a{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                  j[3].get<double>()};
  for (std::size_t i = 0; i < 4; ++i)
    if (!std::isfinite(a[i])) throw FormatError("angles must be finite");
  return a;
}

json constraint_set_to_json(const ConstraintSet& cs) {
  json variables = json::array();
  for (VariableId id = 0; id < cs.variable_count(); ++id) {
    const auto& v = cs.variable(id);
    json angles = json::array();
    for (const auto& key : v.keys) angles.push_back(key.radians(cs.angle_quantum()));
    variables.push_back({{"id", id}, {"tag", std::string(to_string(v.tag))}, {"angles", angles}});
  }
  json constraints = json::array();
  for (ConstraintId id = 0; id < cs.constraint_count(); ++id) {
    const auto& c = cs.constraint(id);
    constraints.push_back({{"id", id},
                           {"vars", c.variables},
                           {"required_sign", c.required_sign},
                           {"provenance",
                            {{"angles", angles_to_json(c.provenance.angles)},
                             {"zeta", c.provenance.zeta},
                             {"equation", c.provenance.equation}}}});
  }
  return {{"format_version", kFormatVersion},
          {"context", {{"kappa", cs.context().kappa}, {"label", cs.context().label}}},
          {"angle_quantum", cs.angle_quantum()},
          {"variables", variables},
          {"constraints", constraints}};
}

ConstraintSet constraint_set_from_json(const json& j) {
  check_version(j, "constraint set");
  try {
    const auto& ctx = j.at("context");
    HiddenContext context{sign_from_json(ctx.at("kappa"), "context.kappa"),
                          ctx.at("label").get<std::string>()};
    const double quantum = j.value("angle_quantum", kDefaultAngleQuantum);
    ConstraintSet cs(context, quantum);

    const auto& variables = j.at("variables");
    for (std::size_t i = 0; i < variables.size(); ++i) {
      const auto& v = variables[i];
      if (v.at("id").get<std::size_t>() != i) {
        throw FormatError("variable ids must be 0..n-1 in order");
      }
      const FunctionTag tag = function_tag_from_string(v.at("tag").get<std::string>());
      const auto angles = v.at("angles").get<std::vector<double>>();
      if (angles.size() != arity(tag)) {
        throw FormatError("variable " + std::to_string(i) + " has the wrong number of angles");
      }
      if (cs.intern(tag, angles) != i) {
        throw FormatError("variable " + std::to_string(i) + " duplicates an earlier variable");
      }
    }

    const auto& constraints = j.at("constraints");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const auto& c = constraints[i];
      if (c.at("id").get<std::size_t>() != i) {
        throw FormatError("constraint ids must be 0..m-1 in order");
      }
      ParityConstraint pc;
      pc.variables = c.at("vars").get<std::vector<VariableId>>();
      pc.required_sign = sign_from_json(c.at("required_sign"), "required_sign");
      const auto& prov = c.at("provenance");
      pc.provenance.angles = angles_from_json(prov.at("angles"));
      pc.provenance.zeta = prov.at("zeta").get<double>();
      pc.provenance.equation = prov.at("equation").get<std::string>();
      cs.add_constraint(std::move(pc));
    }
    return cs;
  } catch (const json::exception& e) {
    throw FormatError(std::string("constraint set: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("constraint set: ") + e.what());
  }
}

json solve_result_to_json(const ConstraintSet& cs, const SolveResult& result,
                          std::string_view method) {
  json j = {{"format_version", kFormatVersion},
            {"method", std::string(method)},
            {"status", std::string(to_string(result.status))}};
  json explanation = json::array();
  if (result.model) {
    j["model"] = *result.model;
    for (VariableId id = 0; id < result.model->size() && id < cs.variable_count(); ++id) {
      explanation.push_back(cs.variable(id).describe(cs.angle_quantum()) + " = " +
                            ((*result.model)[id] == 1 ? "+1" : "-1"));
    }
  }
  if (result.certificate) {
    j["certificate"] = *result.certificate;
    int sign = 1;
    for (ConstraintId id : *result.certificate) {
      if (id >= cs.constraint_count()) continue;
      const auto& c = cs.constraint(id);
      sign *= c.required_sign;
      explanation.push_back("[" + std::to_string(id) + "] " + constraint_text(cs, c) + "  (" +
                            c.provenance.equation + " at zeta " +
                            format_double(c.provenance.zeta) + ")");
    }
    explanation.push_back(std::string("product: every variable squared, +1 = ") +
                          (sign == 1 ? "+1" : "-1"));
  }
  j["explanation"] = explanation;
  return j;
}

SolveResult solve_result_from_json(const json& j) {
  check_version(j, "solve result");
  try {
    SolveResult r;
    const auto status = j.at("status").get<std::string>();
    if (status == "sat") {
      r.status = SolveStatus::Sat;
    } else if (status == "unsat") {
      r.status = SolveStatus::Unsat;
    } else {
      throw FormatError("unknown status '" + status + "'");
    }
    if (j.contains("model")) r.model = j.at("model").get<std::vector<int>>();
    if (j.contains("certificate")) {
      r.certificate = j.at("certificate").get<std::vector<ConstraintId>>();
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("solve result: ") + e.what());
  }
}

json settings_to_json(std::span<const AngleSettings> settings) {
  json list = json::array();
  for (const auto& s : settings) list.push_back(angles_to_json(s));
  return {{"format_version", kFormatVersion}, {"settings", list}};
}

std::vector<AngleSettings> settings_from_json(const json& j) {
  check_version(j, "settings file");
  try {
    std::vector<AngleSettings> out;
    for (const auto& s : j.at("settings")) out.push_back(angles_from_json(s));
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("settings file: ") + e.what());
  }
}

json amplitudes_to_json(const BellBellAmplitudes& amps) {
  json rows = json::object();
  for (BellOutcome bc : kBellOutcomes) {
    json row = json::object();
    for (BellOutcome ad : kBellOutcomes) row[std::string(to_string(ad))] = complex_to_json(amps(bc, ad));
    rows[std::string(to_string(bc))] = row;
  }
  return rows;
}

json correlation_report_to_json(const CorrelationReport& report) {
  json sectors = json::array();
  for (const auto& s : report.sectors) {
    json sj = {{"kappa", s.kappa},
               {"zeta", s.zeta},
               {"class", std::string(to_string(s.phase_class))},
               {"sector_probability", s.sector_probability},
               {"holds", s.holds}};
    if (s.predicted_product) {
      sj["predicted_product"] = *s.predicted_product;
      sj["product_violation"] = s.product_violation;
      sj["pairing_violation"] = s.pairing_violation;
    } else {
      sj["predicted_product"] = nullptr;
      sj["note"] = "no perfect correlation at this setting";
    }
    sectors.push_back(sj);
  }
  return {{"angles", angles_to_json(report.angles)},
          {"xi", report.phases.xi},
          {"eta", report.phases.eta},
          {"kappa_mismatch", report.kappa_mismatch},
          {"sectors", sectors},
          {"all_hold", report.all_hold}};
}

void write_events_csv(std::ostream& out, std::span<const EventRecord> events) {
  out << kEventCsvHeader << '\n';
  std::size_t id = 0;
  for (const auto& e : events) {
    out << id++ << ',' << format_double(e.angles.phi1) << ',' << format_double(e.angles.phi2)
        << ',' << format_double(e.angles.phi3) << ',' << format_double(e.angles.phi4) << ','
        << to_string(e.bc_outcome) << ',' << to_string(e.pol_a) << ',' << to_string(e.pol_d)
        << ',' << e.kappa << ',' << e.f_value << ',' << e.a_value << ',' << e.d_value << ','
        << e.product << '\n';
  }
}

std::vector<EventRecord> read_events_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kEventCsvHeader) {
    throw FormatError("event CSV: missing or unexpected header row");
  }
  std::vector<EventRecord> events;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) fields.push_back(field);
    if (fields.size() != 13) {
      throw FormatError("event CSV: expected 13 fields, got " + std::to_string(fields.size()));
    }
    try {
      if (std::stoull(fields[0]) != events.size()) {
        throw FormatError("event CSV: event_id must count up from 0");
      }
      const AngleSettings angles{parse_double(fields[1]), parse_double(fields[2]),
                                 parse_double(fields[3]), parse_double(fields[4])};
      const Fig1Outcome outcome{bell_from_string(fields[5]), polarization_from_string(fields[6]),
                                polarization_from_string(fields[7])};
      EventRecord e = EventRecord::from_outcome(angles, outcome);
      const EventRecord stated{angles,         outcome.bc,          outcome.pol_a,
                               outcome.pol_d,  std::stoi(fields[8]), std::stoi(fields[9]),
                               std::stoi(fields[10]), std::stoi(fields[11]), std::stoi(fields[12])};
      if (!(stated == e)) throw FormatError("event CSV: derived columns disagree with outcome");
      events.push_back(e);
    } catch (const FormatError&) {
      throw;
    } catch (const std::logic_error& err) {
      throw FormatError(std::string("event CSV: ") + err.what());
    }
  }
  return events;
}

std::string serialize(const ReportDocument& doc, int indent) {
  json j = {{"format_version", doc.format_version}, {"command", doc.command}, {"body", doc.body}};
  return j.dump(indent);
}

ReportDocument parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    check_version(j, "report");
    return ReportDocument{j.at("format_version").get<int>(), j.at("command").get<std::string>(),
                          j.at("body")};
  } catch (const json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

}  // namespace swapbell::io
