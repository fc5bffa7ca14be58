#pragma once

#include <string>

#include <json.hpp>

#include "multinorm/cyclotomic.hpp"
#include "multinorm/sweep.hpp"

namespace multinorm {

/// Result of one command: stable text rendering plus the same content as a
/// JSON object.  Both carry identical mathematical values.
struct RunResult {
  std::string text;
  nlohmann::json json;
};

/// Executes one of the document-driven commands: sha, multinorm,
/// certificate, intersection, bound, phi, wedge, sweep.  Throws parse_error
/// for malformed documents, input_error for precondition violations and
/// internal_error when a theorem-level check fails.
RunResult run_command(const std::string& command, const nlohmann::json& input);

/// Document parsers, exposed for reuse and tests.
FinAbGroup parse_group_doc(const nlohmann::json& doc);
LocalFamily parse_family_doc(const nlohmann::json& doc, const FinAbGroup& g);
CycloField parse_field_doc(const nlohmann::json& doc);

nlohmann::json group_to_json(const FinAbGroup& g);
nlohmann::json hom_to_json(const AbHom& f);

}  // namespace multinorm
