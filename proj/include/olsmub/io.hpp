#pragma once

// JSON encodings shared by the CLI and the tests. Complex entries are
// [re, im] pairs; every top-level object carries schema_version.

#include <json.hpp>

#include <string>
#include <vector>

#include "olsmub/error.hpp"
#include "olsmub/gfield.hpp"
#include "olsmub/hvm.hpp"
#include "olsmub/nets.hpp"
#include "olsmub/qmub.hpp"
#include "olsmub/squares.hpp"

namespace olsmub {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json certification_to_json(const Certification& c) {
  return {{"max_overlap_deviation", c.max_overlap_deviation},
          {"max_gram_deviation", c.max_gram_deviation},
          {"tolerance", c.tolerance},
          {"certified", c.certified}};
}

/// bases[k].vectors[j] is the j-th vector of basis k as a list of components.
inline json mubs_to_json(const MubSet& set) {
  json bases = json::array();
  for (const auto& b : set.bases) {
    json vectors = json::array();
    for (Eigen::Index j = 0; j < b.vectors.cols(); ++j) {
      json v = json::array();
      for (Eigen::Index k = 0; k < b.vectors.rows(); ++k) v.push_back(complex_to_json(b.vectors(k, j)));
      vectors.push_back(std::move(v));
    }
    bases.push_back({{"label", b.label}, {"vectors", std::move(vectors)}});
  }
  json out = {{"schema_version", kSchemaVersion},
              {"d", set.d},
              {"bases", std::move(bases)},
              {"certification", certification_to_json(set.certification)}};
  if (!set.anchors.empty()) out["anchors"] = set.anchors;
  return out;
}

inline MubSet mubs_from_json(const json& j) {
  try {
    MubSet set;
    set.d = j.at("d").get<int>();
    if (set.d < 1) throw InvalidArgument("mubs json: d must be positive");
    for (const auto& b : j.at("bases")) {
      Basis basis{CMat(set.d, set.d), b.value("label", static_cast<int>(set.bases.size()))};
      const auto& vectors = b.at("vectors");
      if (static_cast<int>(vectors.size()) != set.d) throw DimensionMismatch("mubs json: basis needs d vectors");
      for (int c = 0; c < set.d; ++c) {
        const auto& v = vectors.at(c);
        if (static_cast<int>(v.size()) != set.d) throw DimensionMismatch("mubs json: vector needs d components");
        for (int k = 0; k < set.d; ++k) basis.vectors(k, c) = cplx(v.at(k).at(0).get<double>(), v.at(k).at(1).get<double>());
      }
      set.bases.push_back(std::move(basis));
    }
    if (j.contains("anchors")) set.anchors = j.at("anchors").get<std::vector<int>>();
    return set;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("mubs json: ") + e.what());
  }
}

inline json square_to_json(const Square& s) {
  json rows = json::array();
  for (int i = 0; i < s.order(); ++i) rows.push_back(s.row(i));
  return rows;
}

inline json ols_to_json(const OlsSet& set) {
  json squares = json::array();
  for (const auto& s : set.squares) squares.push_back(square_to_json(s.square()));
  json out = {{"schema_version", kSchemaVersion},
              {"order", set.order},
              {"certified", set.certified},
              {"multipliers", set.multipliers},
              {"squares", std::move(squares)}};
  if (set.field) out["field"] = {{"p", set.field->p}, {"r", set.field->r}, {"irreducible", set.field->irreducible}};
  return out;
}

inline std::string row_kind_name(RowKind k) {
  switch (k) {
    case RowKind::MEqualsB:
      return "m=b";
    case RowKind::NEqualsB:
      return "n=b";
    case RowKind::Square:
      return "square";
  }
  return "?";
}

inline json net_to_json(const NetDesign& net) {
  json kinds = json::array();
  json multipliers = json::array();
  for (const auto& t : net.tags) {
    kinds.push_back(row_kind_name(t.kind));
    multipliers.push_back(t.multiplier);
  }
  return {{"schema_version", kSchemaVersion},
          {"d", net.d},
          {"encoding", "label = m*d + n"},
          {"rows", net.rows},
          {"questions", render_questions(net)},
          {"row_kinds", std::move(kinds)},
          {"multipliers", std::move(multipliers)}};
}

inline json census_to_json(const CensusResult& r, const CensusConfig& cfg) {
  json out = {{"schema_version", kSchemaVersion},
              {"d", r.d},
              {"E", r.E},
              {"Q", r.Q},
              {"ratio", r.ratio},
              {"elapsed_ms", r.elapsed_ms},
              {"chunks", r.chunks},
              {"threads", r.threads}};
  if (cfg.report_mixed) out["mixed_psd"] = r.mixed;
  if (cfg.audit) out["audit"] = {{"recomputed", r.audited}, {"verdict_changes", r.flipped}};
  return out;
}

inline json field_to_json(const GaloisField& f) {
  json out = {{"schema_version", kSchemaVersion},
              {"p", f.p()},
              {"r", f.r()},
              {"d", f.order()},
              {"irreducible", f.spec().irreducible}};
  json elements = json::array();
  for (int a = 0; a < f.order(); ++a) elements.push_back({{"index", a}, {"coeffs", f.coeffs(a)}, {"trace", f.trace(a)}});
  out["elements"] = std::move(elements);
  if (f.r() > 1) {
    const auto pair = default_basis_pair(f);
    out["basis"] = pair.basis;
    out["dual_basis"] = pair.dual;
  }
  return out;
}

}  // namespace olsmub
