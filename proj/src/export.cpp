#include "cachedof/export.hpp"

#include <cstdint>

#include "cachedof/error.hpp"
#include "cachedof/scheme_pg.hpp"
#include "cachedof/scheme_subset.hpp"

namespace cachedof {
namespace {

std::vector<std::uint32_t> one_based(std::span<const std::uint32_t> xs) {
  std::vector<std::uint32_t> out(xs.begin(), xs.end());
  for (auto& x : out) ++x;
  return out;
}

std::vector<std::uint32_t> zero_based(const Json& doc, const char* what) {
  if (!doc.is_array()) throw Error(ErrorCode::kFormat, std::string(what) + " must be an array");
  std::vector<std::uint32_t> out;
  for (const auto& v : doc) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1 || v.get<std::int64_t>() > UINT32_MAX) {
      throw Error(ErrorCode::kFormat, std::string(what) + " entries must be positive integers");
    }
    out.push_back(v.get<std::uint32_t>() - 1);
  }
  return out;
}

std::uint32_t get_u32(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key) || !doc.at(key).is_number_integer() || doc.at(key).get<std::int64_t>() < 0 ||
      doc.at(key).get<std::int64_t>() > UINT32_MAX) {
    throw Error(ErrorCode::kFormat, std::string("missing or non-integer field '") + key + "'");
  }
  return doc.at(key).get<std::uint32_t>();
}

std::string str(const Rational& r) { return r.str(); }

Json subspace_rows(const Subspace& s) {
  Json rows = Json::array();
  for (const auto& v : s.basis()) rows.push_back(encode_vector(s.field(), v));
  return rows;
}

}  // namespace

Json params_to_json(const DeliveryScheme& scheme) {
  Json out;
  if (const auto* s = dynamic_cast<const SubsetScheme*>(&scheme)) {
    const auto& p = s->params();
    out["K_T"] = p.K_T;
    out["t_T"] = p.t_T;
    out["K_R"] = p.K_R;
    out["t_R"] = p.t_R;
    out["N"] = p.N;
    out["F_C"] = p.F_C.str();
    out["F_P"] = p.F_P.str();
    out["F"] = p.F.str();
    out["rounds"] = p.rounds.str();
    out["dof"] = p.dof;
    out["M_T/N"] = str(p.transmitter_fraction());
    out["M_R/N"] = str(p.receiver_fraction());
  } else if (const auto* g = dynamic_cast<const PGScheme*>(&scheme)) {
    const auto& p = g->params();
    out["q"] = p.q;
    out["k_t"] = p.k_t;
    out["l_t"] = p.l_t;
    out["m_t"] = p.m_t;
    out["k_r"] = p.k_r;
    out["l_r"] = p.l_r;
    out["m_r"] = p.m_r;
    out["N"] = p.N;
    out["K_T"] = p.K_T.str();
    out["K_R"] = p.K_R.str();
    out["t_T"] = p.t_T.str();
    out["t_R"] = p.t_R.str();
    out["F_T"] = p.F_T.str();
    out["F_R"] = p.F_R.str();
    out["F_P"] = p.F_P.str();
    out["F"] = p.F.str();
    out["rounds"] = std::to_string(g->round_count());
    out["dof"] = p.dof.str();
    out["M_T/N"] = str(p.transmitter_fraction());
    out["M_R/N"] = str(p.receiver_fraction());
  } else {
    throw Error(ErrorCode::kInvalidArgs, "unknown scheme type");
  }
  return out;
}

std::unique_ptr<DeliveryScheme> scheme_from_json(const std::string& kind, const Json& params) {
  if (!params.is_object()) throw Error(ErrorCode::kFormat, "params must be an object");
  if (kind == "subset") {
    return std::make_unique<SubsetScheme>(make_subset_params(get_u32(params, "K_T"), get_u32(params, "t_T"),
                                                             get_u32(params, "K_R"), get_u32(params, "t_R"),
                                                             get_u32(params, "N")));
  }
  if (kind == "pg") {
    return std::make_unique<PGScheme>(build_pg_params(get_u32(params, "q"), get_u32(params, "k_t"),
                                                      get_u32(params, "l_t"), get_u32(params, "m_t"),
                                                      get_u32(params, "k_r"), get_u32(params, "l_r"),
                                                      get_u32(params, "m_r"), get_u32(params, "N")));
  }
  throw Error(ErrorCode::kFormat, "unknown scheme '" + kind + "'");
}

Json caching_to_json(const DeliveryScheme& scheme) {
  const auto& c = scheme.caching();
  Json out;
  out["transmitters"] = c.num_transmitters();
  out["receivers"] = c.num_receivers();
  out["tx_sets"] = c.num_tx_sets();
  out["rx_sets"] = c.num_rx_sets();
  out["tx_replication"] = c.transmitter_replication();
  out["rx_replication"] = c.receiver_replication();
  out["M_T/N"] = str(c.transmitter_fraction());
  out["M_R/N"] = str(c.receiver_fraction());
  if (const auto* g = dynamic_cast<const PGScheme*>(&scheme)) {
    out["tx_fixed"] = subspace_rows(g->tx_fixed());
    out["rx_fixed"] = subspace_rows(g->rx_fixed());
    Json txs = Json::array();
    for (const auto& s : g->transmitters().members) txs.push_back(subspace_rows(s));
    Json rxs = Json::array();
    for (const auto& s : g->receivers().members) rxs.push_back(subspace_rows(s));
    out["transmitter_subspaces"] = std::move(txs);
    out["receiver_subspaces"] = std::move(rxs);
  }
  return out;
}

Json round_to_json(const DeliveryScheme& scheme, const Round& round) {
  Json out;
  out["tx"] = one_based(round.transmitters);
  Json serves = Json::array();
  const auto* s = dynamic_cast<const SubsetScheme*>(&scheme);
  const auto* g = dynamic_cast<const PGScheme*>(&scheme);
  for (const auto& e : round.entries) {
    Json entry;
    entry["rx"] = e.receiver + 1;
    entry["file"] = e.packet.file + 1;
    if (s != nullptr) {
      const auto p = s->from_packet_id(e.packet);
      entry["T"] = one_based(p.T);
      entry["R"] = one_based(p.R);
      entry["Rp"] = one_based(p.Rprime);
    } else if (g != nullptr) {
      entry["Xt"] = one_based(g->tx_cache_sets().at(e.packet.tx_set));
      entry["Xr"] = one_based(g->rx_cache_sets().at(e.packet.rx_set));
      entry["Y"] = one_based(g->zf_sets().at(e.packet.zf_set));
    }
    serves.push_back(std::move(entry));
  }
  out["serves"] = std::move(serves);
  return out;
}

Round round_from_json(const DeliveryScheme& scheme, const Json& doc) {
  if (!doc.is_object() || !doc.contains("tx") || !doc.contains("serves") || !doc.at("serves").is_array()) {
    throw Error(ErrorCode::kFormat, "round needs 'tx' and 'serves'");
  }
  Round round;
  round.transmitters = zero_based(doc.at("tx"), "tx");
  const auto* s = dynamic_cast<const SubsetScheme*>(&scheme);
  const auto* g = dynamic_cast<const PGScheme*>(&scheme);
  auto find = [](const MemberSets& sets, const std::vector<std::uint32_t>& key, const char* what) {
    const auto idx = sets.find(key);
    if (!idx) throw Error(ErrorCode::kFormat, std::string(what) + " is not a set of the scheme");
    return *idx;
  };
  for (const auto& entry : doc.at("serves")) {
    ServedEntry e;
    const auto rx = get_u32(entry, "rx");
    const auto file = get_u32(entry, "file");
    if (rx == 0 || file == 0) throw Error(ErrorCode::kFormat, "rx and file are 1-based");
    e.receiver = rx - 1;
    e.packet.file = file - 1;
    try {
      if (s != nullptr) {
        SubsetPacketId p{e.packet.file, zero_based(entry.at("T"), "T"), zero_based(entry.at("R"), "R"),
                         zero_based(entry.at("Rp"), "Rp")};
        e.packet = s->to_packet_id(p);
      } else if (g != nullptr) {
        e.packet.tx_set = find(g->tx_cache_sets(), zero_based(entry.at("Xt"), "Xt"), "Xt");
        e.packet.rx_set = find(g->rx_cache_sets(), zero_based(entry.at("Xr"), "Xr"), "Xr");
        e.packet.zf_set = find(g->zf_sets(), zero_based(entry.at("Y"), "Y"), "Y");
      }
    } catch (const Json::exception& ex) {
      throw Error(ErrorCode::kFormat, ex.what());
    } catch (const Error& ex) {
      if (ex.code() == ErrorCode::kFormat) throw;
      throw Error(ErrorCode::kFormat, ex.what());
    }
    round.entries.push_back(e);
  }
  return round;
}

Json report_to_json(const VerificationReport& r) {
  Json out;
  out["passed"] = r.passed();
  out["rounds_total"] = r.rounds_total;
  out["rounds_valid"] = r.rounds_valid;
  out["packets_missing"] = r.packets_missing;
  out["packets_served"] = r.packets_served;
  out["invalid_entries"] = r.invalid_entries;
  out["duplicates"] = r.duplicate_count;
  out["orphans"] = r.orphan_count;
  out["dof_observed"] = r.dof_observed ? Json(*r.dof_observed) : Json(nullptr);
  out["rate"] = str(r.rate);
  out["M_T/N"] = str(r.transmitter_fraction);
  out["M_R/N"] = str(r.receiver_fraction);
  out["duplicate_examples"] = r.duplicates;
  out["orphan_examples"] = r.orphans;
  out["round_diagnostics"] = r.round_diagnostics;
  return out;
}

Json export_document(const DeliveryScheme& scheme, const Demands& demands, const VerificationReport& report,
                     const std::vector<Round>* rounds) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["scheme"] = scheme.name();
  doc["params"] = params_to_json(scheme);
  std::vector<std::uint32_t> d(demands.begin(), demands.end());
  for (auto& x : d) ++x;
  doc["demands"] = d;
  doc["caching"] = caching_to_json(scheme);
  if (rounds != nullptr) {
    Json rs = Json::array();
    for (const auto& r : *rounds) rs.push_back(round_to_json(scheme, r));
    doc["rounds"] = std::move(rs);
  }
  doc["report"] = report_to_json(report);
  return doc;
}

ReplayResult replay_export(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kFormat, "export must be an object");
  if (!doc.contains("format_version") || doc.at("format_version") != kFormatVersion) {
    throw Error(ErrorCode::kFormat, "unsupported format_version");
  }
  if (!doc.contains("scheme") || !doc.at("scheme").is_string() || !doc.contains("params") ||
      !doc.contains("demands") || !doc.contains("report")) {
    throw Error(ErrorCode::kFormat, "export needs scheme, params, demands and report");
  }
  ReplayResult out;
  out.scheme = scheme_from_json(doc.at("scheme").get<std::string>(), doc.at("params"));
  out.demands = zero_based(doc.at("demands"), "demands");
  if (doc.contains("rounds")) {
    if (!doc.at("rounds").is_array()) throw Error(ErrorCode::kFormat, "rounds must be an array");
    CompletenessChecker checker(*out.scheme, out.demands);
    for (const auto& r : doc.at("rounds")) checker.add(round_from_json(*out.scheme, r));
    out.report = checker.finish();
  } else {
    out.report = verify_schedule(*out.scheme, out.demands);
  }
  const auto stored = doc.at("report");
  const auto fresh = report_to_json(out.report);
  for (const char* key : {"passed", "rounds_total", "packets_missing", "packets_served", "duplicates", "orphans"}) {
    if (!stored.contains(key) || stored.at(key) != fresh.at(key)) out.report_matches = false;
  }
  return out;
}

}  // namespace cachedof
