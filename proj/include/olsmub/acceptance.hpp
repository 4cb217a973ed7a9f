#pragma once

// The acceptance suite: one pass/fail result per criterion. Shared by the
// olsmub_acceptance binary and `olsmub reproduce`.

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "olsmub/gfield.hpp"
#include "olsmub/hvm.hpp"
#include "olsmub/nets.hpp"
#include "olsmub/qmub.hpp"
#include "olsmub/squares.hpp"

namespace olsmub {

// Reference nets, one row per line, cells separated by '|', labels as pairs mn.
inline constexpr const char* kReferenceNet2 =
    "00 01 | 10 11\n"
    "00 10 | 01 11\n"
    "00 11 | 01 10\n";

inline constexpr const char* kReferenceNet3 =
    "00 01 02 | 10 11 12 | 20 21 22\n"
    "00 10 20 | 01 11 21 | 02 12 22\n"
    "00 11 22 | 01 12 20 | 02 10 21\n"
    "00 12 21 | 01 10 22 | 02 11 20\n";

inline constexpr const char* kReferenceNet4 =
    "00 01 02 03 | 10 11 12 13 | 20 21 22 23 | 30 31 32 33\n"
    "00 10 20 30 | 01 11 21 31 | 02 12 22 32 | 03 13 23 33\n"
    "00 11 22 33 | 01 10 23 32 | 02 13 20 31 | 03 12 21 30\n"
    "00 12 23 31 | 01 13 22 30 | 02 10 21 33 | 03 11 20 32\n"
    "00 13 21 32 | 01 12 20 33 | 02 11 23 30 | 03 10 22 31\n";

inline constexpr const char* kReferenceNet4Cyclic =
    "00 01 02 03 | 10 11 12 13 | 20 21 22 23 | 30 31 32 33\n"
    "00 10 20 30 | 01 11 21 31 | 02 12 22 32 | 03 13 23 33\n"
    "00 11 22 33 | 01 12 23 30 | 02 13 20 31 | 03 10 21 32\n";

/// Parses the reference format above (single-digit m and n) into label rows.
inline std::vector<NetRow> parse_reference_net(const std::string& text, int d) {
  std::vector<NetRow> rows;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (line.empty()) continue;
    NetRow row(1);
    std::istringstream tokens(line);
    for (std::string tok; tokens >> tok;) {
      if (tok == "|") {
        row.emplace_back();
        continue;
      }
      if (tok.size() != 2) throw InvalidArgument("reference net: bad token " + tok);
      row.back().push_back((tok[0] - '0') * d + (tok[1] - '0'));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CriterionResult {
  int id = 0;
  std::string key;
  std::string title;
  bool passed = false;
  std::string detail;
  double ms = 0.0;
};

/// Every field axiom over all element pairs and triples.
inline bool field_axioms_hold(const GaloisField& f) {
  const int q = f.order();
  for (int a = 0; a < q; ++a) {
    if (f.add(a, 0) != a || f.mul(a, 1) != a || f.mul(a, 0) != 0) return false;
    if (f.add(a, f.neg(a)) != 0) return false;
    if (a != 0 && f.mul(a, f.inv(a)) != 1) return false;
    for (int b = 0; b < q; ++b) {
      if (f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a)) return false;
      if (a && b && f.mul(a, b) == 0) return false;
      for (int c = 0; c < q; ++c) {
        if (f.add(f.add(a, b), c) != f.add(a, f.add(b, c))) return false;
        if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))) return false;
        if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) return false;
      }
    }
  }
  return true;
}

/// tr(m n) = sum_i m_i n_i for all pairs, with m in the basis and n in the dual.
inline bool trace_identity_holds(const GaloisField& f, const FieldBasisPair& pair) {
  for (int m = 0; m < f.order(); ++m)
    for (int n = 0; n < f.order(); ++n) {
      const auto mi = decompose_m(f, m, pair);
      const auto ni = decompose_n(f, n, pair);
      int s = 0;
      for (std::size_t i = 0; i < mi.size(); ++i) s += mi[i] * ni[i];
      if (mod(s, f.p()) != f.trace(f.mul(m, n))) return false;
    }
  return true;
}

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

inline CriterionResult criterion_net() {
  CriterionResult r{1, "net", "net reproduction d = 2, 3, 4"};
  const std::vector<std::pair<int, const char*>> refs = {{2, kReferenceNet2}, {3, kReferenceNet3}, {4, kReferenceNet4}};
  r.passed = true;
  for (const auto& [d, text] : refs) {
    const auto net = field_net(GaloisField::create(d));
    const bool ok = net.rows == parse_reference_net(text, d) && verify_net(net).ok;
    r.detail += "d=" + std::to_string(d) + (ok ? " match; " : " MISMATCH; ");
    r.passed = r.passed && ok;
  }
  return r;
}

inline CriterionResult criterion_mubs() {
  CriterionResult r{2, "mubs", "complete MUB sets for d in {2,3,4,5,7,8,9}"};
  r.passed = true;
  double worst = 0.0;
  for (int d : {2, 3, 4, 5, 7, 8, 9}) {
    const auto set = mubs_for(d);
    const auto c = verify_mub(set, 1e-10);
    const bool ok = static_cast<int>(set.bases.size()) == d + 1 && c.max_overlap_deviation < 1e-10 &&
                    c.max_gram_deviation < 1e-10;
    worst = std::max({worst, c.max_overlap_deviation, c.max_gram_deviation});
    if (!ok) r.detail += "d=" + std::to_string(d) + " failed; ";
    r.passed = r.passed && ok;
  }
  r.detail += "max deviation " + fmt(worst);
  return r;
}

inline CriterionResult criterion_census() {
  CriterionResult r{3, "census", "census counts d = 2..5 (single thread)"};
  struct Want {
    int d;
    std::uint64_t E;
    std::string ratio;
    std::uint64_t Q;
  };
  const std::vector<Want> wants = {{2, 6, "1/1", 6}, {3, 84, "1/7", 12}, {4, 1820, "8/455", 32}, {5, 53130, "1/1771", 30}};
  r.passed = true;
  for (const auto& w : wants) {
    const auto f = GaloisField::create(w.d);
    const auto res = census(w.d, mubs_for(w.d), field_net(f));
    const bool ok = res.E == w.E && res.Q == w.Q && res.ratio == w.ratio;
    r.detail += "d=" + std::to_string(w.d) + " Q=" + std::to_string(res.Q) + " E=" + std::to_string(res.E) + " " +
                res.ratio + (ok ? "" : " (want " + w.ratio + ")") + "; ";
    r.passed = r.passed && ok;
  }
  return r;
}

inline CriterionResult criterion_purity() {
  CriterionResult r{4, "purity", "net cells reconstruct to MUB projectors, d = 2..5"};
  r.passed = true;
  double worst = 0.0;
  for (int d : {2, 3, 4, 5}) {
    const auto net = field_net(GaloisField::create(d));
    const auto mubs = mubs_for(d);
    for (std::size_t m = 0; m < net.rows.size(); ++m)
      for (int j = 0; j < d; ++j) {
        const auto rec = reconstruct_operator(EpistemicState(d, net.rows[m][j]), mubs, net);
        const double dev = max_abs(rec.op - projector(mubs.bases[m], j));
        worst = std::max(worst, dev);
        const bool ok = dev < 1e-9 && classify_quantum(rec).verdict == Classification::PureQuantum;
        r.passed = r.passed && ok;
      }
  }
  r.detail = "max entrywise deviation " + fmt(worst);
  return r;
}

inline CriterionResult criterion_latin() {
  CriterionResult r{5, "latin", "Latin operator trace law, d = 2..5"};
  r.passed = true;
  std::mt19937_64 rng(12345);
  double worst_law = 0.0, worst_orth = 0.0;
  for (int d : {2, 3, 4, 5}) {
    const auto mubs = mubs_for(d);
    std::uniform_int_distribution<int> digit(0, d - 1);
    auto random_tuple = [&] {
      std::vector<int> t(d + 1);
      for (auto& x : t) x = digit(rng);
      return t;
    };
    const double d3 = std::pow(d, 3);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto t1 = random_tuple();
      const auto t2 = random_tuple();
      const cplx tr = (latin_operator(mubs, t1).adjoint() * latin_operator(mubs, t2)).trace();
      const double want = double(d) * d * (tuple_agreement(t1, t2) - 1);
      const double err = std::abs(tr - want);
      worst_law = std::max(worst_law, err / d3);
      r.passed = r.passed && err < 1e-8 * d3;
    }
    const auto tuples = tuples_from_net(field_net(GaloisField::create(d)));
    std::vector<CMat> ops;
    for (const auto& t : tuples.tuples) ops.push_back(latin_operator(mubs, t));
    for (std::size_t x = 0; x < ops.size(); ++x)
      for (std::size_t y = x + 1; y < ops.size(); ++y) {
        const double v = std::abs((ops[x].adjoint() * ops[y]).trace());
        worst_orth = std::max(worst_orth, v / (d * d));
        r.passed = r.passed && v < 1e-8 * d * d;
      }
    r.passed = r.passed && static_cast<int>(ops.size()) == d * d && tuples.complete;
  }
  r.detail = "max law error / d^3 " + fmt(worst_law) + ", max net-tuple |Tr| / d^2 " + fmt(worst_orth);
  return r;
}

inline CriterionResult criterion_shifting() {
  CriterionResult r{6, "shifting", "shifting unitaries for d in {2,3,5,7}"};
  r.passed = true;
  double worst = 0.0;
  for (int d : {2, 3, 5, 7}) {
    const auto f = GaloisField::create(d);
    const auto net = field_net(f);
    const auto rep = verify_shifting(net, mubs_for(d), LabelOperators::field(f));
    worst = std::max(worst, rep.max_deviation);
    const bool ok = rep.max_deviation < 1e-10 && rep.table_matches;
    if (!ok) r.detail += "d=" + std::to_string(d) + " failed; ";
    r.passed = r.passed && ok;
  }
  r.detail += "max magnitude deviation " + fmt(worst);
  return r;
}

inline CriterionResult criterion_macneish() {
  CriterionResult r{7, "macneish", "tensor-product MUBs for d = 6 and d = 12"};
  const auto six = mubs_macneish(6, 1e-10);
  const auto twelve = mubs_macneish(12, 1e-10);
  r.passed = six.bases.size() == 3 && six.certification.certified && twelve.bases.size() == 4 &&
             twelve.certification.certified;
  r.detail = "d=6: " + std::to_string(six.bases.size()) + " bases, dev " + fmt(six.certification.max_overlap_deviation) +
             "; d=12: " + std::to_string(twelve.bases.size()) + " bases, dev " +
             fmt(twelve.certification.max_overlap_deviation);
  return r;
}

inline CriterionResult criterion_tarry() {
  CriterionResult r{8, "tarry", "orthogonal mates: Z6 has none, d = 3 cyclic has one"};
  const LatinSquare z6(cyclic_ols(6).squares[0].square());
  const auto none = find_orthogonal_mate(z6);
  const LatinSquare z3(cyclic_ols(3).squares[0].square());
  const auto some = find_orthogonal_mate(z3);
  const bool mate_ok = some.mate && is_latin(some.mate->square()) && are_orthogonal(z3, *some.mate);
  r.passed = !none.mate && none.stats.transversals == 0 && mate_ok;
  r.detail = "Z6 transversals " + std::to_string(none.stats.transversals) + (none.mate ? ", mate found" : ", no mate") +
             "; Z3 " + (mate_ok ? "certified mate" : "no certified mate");
  return r;
}

inline CriterionResult criterion_field() {
  CriterionResult r{9, "field", "field axioms GF(4), GF(8), GF(9); dual basis; trace identity"};
  r.passed = true;
  for (int q : {4, 8, 9}) {
    const auto f = GaloisField::create(q);
    const bool ok = field_axioms_hold(*f) && trace_identity_holds(*f, default_basis_pair(*f));
    r.detail += "GF(" + std::to_string(q) + ") " + (ok ? "ok" : "FAILED") + "; ";
    r.passed = r.passed && ok;
  }
  const auto gf4 = GaloisField::create(4);
  const auto pair = dual_basis(*gf4, {2, 1});  // (w, 1)
  const bool dual_ok = pair.dual == std::vector<int>{1, 3};  // (1, w + 1)
  r.detail += std::string("dual of (w,1) ") + (dual_ok ? "= (1, w+1)" : "wrong");
  r.passed = r.passed && dual_ok;
  return r;
}

inline CriterionResult criterion_incomplete() {
  CriterionResult r{10, "incomplete", "three-row order-4 net and its three MUBs"};
  NetDesign ref;
  ref.d = 4;
  ref.rows = parse_reference_net(kReferenceNet4Cyclic, 4);
  const auto check = verify_net(ref);
  const auto net = cyclic_net(4);
  const auto mubs = mubs_from_net(net, LabelOperators::cyclic(4));
  r.passed = check.ok && ref.rows.size() == 3 && net.rows == ref.rows && mubs.bases.size() == 3 &&
             mubs.certification.certified;
  r.detail = std::string("verify_net ") + (check.ok ? "ok" : "failed") + ", generator " +
             (net.rows == ref.rows ? "matches" : "differs") + ", MUB deviation " +
             fmt(mubs.certification.max_overlap_deviation);
  return r;
}

}  // namespace detail

struct CriterionEntry {
  std::string key;
  std::function<CriterionResult()> run;
};

inline std::vector<CriterionEntry> acceptance_criteria() {
  return {{"net", detail::criterion_net},         {"mubs", detail::criterion_mubs},
          {"census", detail::criterion_census},   {"purity", detail::criterion_purity},
          {"latin", detail::criterion_latin},     {"shifting", detail::criterion_shifting},
          {"macneish", detail::criterion_macneish}, {"tarry", detail::criterion_tarry},
          {"field", detail::criterion_field},     {"incomplete", detail::criterion_incomplete}};
}

/// Runs the criteria whose key is in `only` (all when empty). Exceptions count as failures.
inline std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only = {}) {
  std::vector<CriterionResult> out;
  int id = 0;
  for (const auto& c : acceptance_criteria()) {
    ++id;
    if (!only.empty() && std::find(only.begin(), only.end(), c.key) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {id, c.key, c.key, false, std::string("exception: ") + e.what()};
    }
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

/// Runtime limits in milliseconds, keyed like the criteria.
inline double time_limit_ms(const std::string& key) {
  if (key == "net") return 1000;
  if (key == "mubs") return 10000;
  if (key == "census") return 60000;
  if (key == "tarry") return 5000;
  return 0;  // no limit
}

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  const double limit = time_limit_ms(r.key);
  const bool in_time = limit == 0 || r.ms < limit;
  s << (r.passed && in_time ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.key << ": " << r.title << " -- "
    << r.detail << " (" << static_cast<long long>(r.ms) << " ms";
  if (!in_time) s << ", over the " << static_cast<long long>(limit) << " ms limit";
  s << ")";
  return s.str();
}

inline bool result_ok(const CriterionResult& r) {
  const double limit = time_limit_ms(r.key);
  return r.passed && (limit == 0 || r.ms < limit);
}

}  // namespace olsmub
