/**
 * @file report_json.hpp
 * @brief Deterministic JSON serialization of suite reports, BK reports, and
 *        algebra summaries. Key order is fixed (insertion order), so identical
 *        inputs produce byte-identical documents. Timings are opt-in and off
 *        by default to keep reports reproducible.
 */
#pragma once

#include <json.hpp>

#include "bkiso.hpp"
#include "suites.hpp"

namespace hecke {

using OrderedJson = nlohmann::ordered_json;

inline OrderedJson suite_report_to_json(const SuiteReport& rep) {
  OrderedJson j;
  j["suite"] = rep.suite;
  OrderedJson params = OrderedJson::object();
  for (const auto& [k, v] : rep.params) params[k] = v;
  j["params"] = std::move(params);
  OrderedJson items = OrderedJson::array();
  for (const auto& it : rep.items)
    items.push_back({{"name", it.name},
                     {"branch", it.branch},
                     {"residual_zero", it.residual_zero}});
  j["identities"] = std::move(items);
  j["all_passed"] = rep.all_passed();
  return j;
}

inline OrderedJson bk_report_to_json(const BKReport& rep, long elapsed_ms = -1) {
  OrderedJson j;
  OrderedJson params = OrderedJson::object();
  for (const auto& [k, v] : rep.params) params[k] = v;
  j["params"] = std::move(params);
  j["orbit"] = rep.orbit;
  j["block_dim"] = rep.block_dim;
  j["closure_dim"] = rep.closure_dim;
  OrderedJson verdicts = OrderedJson::array();
  for (const auto& v : rep.verdicts)
    verdicts.push_back(
        {{"relation", v.relation}, {"branch", v.branch}, {"status", v.pass}});
  j["verdicts"] = std::move(verdicts);
  OrderedJson nil = OrderedJson::object();
  for (const auto& [r, k] : rep.nilpotency_indices)
    nil["y" + std::to_string(r)] = k;
  j["nilpotency_indices"] = std::move(nil);
  j["not_exercised"] = rep.not_exercised;
  j["certification"] = rep.certification;
  j["all_passed"] = rep.all_passed();
  if (elapsed_ms >= 0) j["elapsed_ms"] = elapsed_ms;
  return j;
}

inline OrderedJson block_summary_to_json(const CycloAlgPtr& alg,
                                         const IdempotentSystem& sys) {
  OrderedJson j;
  j["dim"] = alg->dim();
  j["basis_count"] = alg->dim();
  OrderedJson tuples = OrderedJson::array();
  for (const auto& [i, e] : sys.eps) tuples.push_back(i.to_string());
  j["idempotent_tuples"] = std::move(tuples);
  // Group nonzero idempotents by orbit and report each block's dimension.
  std::map<ResidueTuple, CycloElem> block_of;
  for (const auto& [i, ei] : sys.eps) {
    ResidueTuple key = orbit_of(i).members().front();
    auto it = block_of.find(key);
    if (it == block_of.end())
      block_of.emplace(key, ei);
    else
      it->second = it->second + ei;
  }
  auto basis = monomial_basis(alg);
  OrderedJson blocks = OrderedJson::object();
  for (const auto& [key, ec] : block_of) {
    EchelonSpan span(alg->spec());
    for (const auto& b : basis) {
      CycloElem v = b * ec;
      if (!v.is_zero()) span.insert(v.coords());
    }
    blocks[key.to_string()] = span.dimension();
  }
  j["block_dims"] = std::move(blocks);
  return j;
}

}  // namespace hecke
