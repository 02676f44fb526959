#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cachedof/schedule.hpp"
#include "cachedof/verify.hpp"

namespace cachedof {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Parameter block of a scheme; scheme_from_json rebuilds the same scheme.
Json params_to_json(const DeliveryScheme& scheme);
std::unique_ptr<DeliveryScheme> scheme_from_json(const std::string& kind, const Json& params);

/// Placement summary. For the projective scheme the member subspaces are
/// listed as basis rows, each row an integer in base q.
Json caching_to_json(const DeliveryScheme& scheme);

/// All indices in the document are 1-based.
Json round_to_json(const DeliveryScheme& scheme, const Round& round);
Round round_from_json(const DeliveryScheme& scheme, const Json& doc);

Json report_to_json(const VerificationReport& report);

/// The full export document. `rounds` is written only when given.
Json export_document(const DeliveryScheme& scheme, const Demands& demands, const VerificationReport& report,
                     const std::vector<Round>* rounds);

struct ReplayResult {
  std::unique_ptr<DeliveryScheme> scheme;
  Demands demands;
  VerificationReport report;
  bool report_matches = true;  // recomputed counts equal the stored ones
};

/// Re-verifies an export: the stored rounds when present, otherwise the
/// regenerated schedule. Throws Format on a malformed document.
ReplayResult replay_export(const Json& doc);

}  // namespace cachedof
