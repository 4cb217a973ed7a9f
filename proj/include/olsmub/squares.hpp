#pragma once

// Latin squares and sets of mutually orthogonal Latin squares.
//
// Orientation used throughout: the square attached to multiplier a has
// rows indexed by b, columns indexed by m and entry n = a*m + b. The rows of
// a square become the cells of one net row, so cell b of that row holds the
// pairs (m, n) with n = a*m + b.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "olsmub/error.hpp"
#include "olsmub/exact_cover.hpp"
#include "olsmub/gfield.hpp"
#include "olsmub/numtheory.hpp"

namespace olsmub {

/// d x d array of symbols 0..d-1; not necessarily Latin.
class Square {
 public:
  Square() = default;

  Square(int order, std::vector<int> cells) : order_(order), cells_(std::move(cells)) {
    if (order < 1) throw InvalidSquare("square order must be positive");
    if (static_cast<int>(cells_.size()) != order * order)
      throw InvalidSquare("square has " + std::to_string(cells_.size()) + " entries, expected " +
                          std::to_string(order * order));
    for (int v : cells_)
      if (v < 0 || v >= order) throw InvalidSquare("entry " + std::to_string(v) + " out of range 0.." + std::to_string(order - 1));
  }

  static Square from_rows(const std::vector<std::vector<int>>& rows) {
    std::vector<int> cells;
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw InvalidSquare("square rows must have length equal to the order");
      cells.insert(cells.end(), row.begin(), row.end());
    }
    return {static_cast<int>(rows.size()), std::move(cells)};
  }

  int order() const { return order_; }
  int at(int row, int col) const { return cells_[row * order_ + col]; }
  const std::vector<int>& cells() const { return cells_; }

  std::vector<int> row(int i) const { return {cells_.begin() + i * order_, cells_.begin() + (i + 1) * order_}; }

  bool operator==(const Square&) const = default;

 private:
  int order_ = 0;
  std::vector<int> cells_;
};

/// Every row and every column is a permutation of 0..d-1.
inline bool is_latin(const Square& s) {
  const int d = s.order();
  for (int i = 0; i < d; ++i) {
    std::vector<bool> row_seen(d), col_seen(d);
    for (int j = 0; j < d; ++j) {
      if (row_seen[s.at(i, j)] || col_seen[s.at(j, i)]) return false;
      row_seen[s.at(i, j)] = col_seen[s.at(j, i)] = true;
    }
  }
  return true;
}

class LatinSquare {
 public:
  explicit LatinSquare(Square s) : square_(std::move(s)) {
    if (!is_latin(square_)) throw InvalidSquare("square is not Latin");
  }

  const Square& square() const { return square_; }
  int order() const { return square_.order(); }
  int at(int i, int j) const { return square_.at(i, j); }

  bool operator==(const LatinSquare&) const = default;

 private:
  Square square_;
};

/// All d^2 ordered pairs (a_ij, b_ij) are distinct.
inline bool are_orthogonal(const Square& a, const Square& b) {
  if (a.order() != b.order()) throw OrderMismatch("are_orthogonal: squares have different orders");
  const int d = a.order();
  std::vector<bool> seen(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto key = static_cast<std::size_t>(a.at(i, j)) * d + b.at(i, j);
      if (seen[key]) return false;
      seen[key] = true;
    }
  return true;
}

inline bool are_orthogonal(const LatinSquare& a, const LatinSquare& b) { return are_orthogonal(a.square(), b.square()); }

/// A = j (answers "m = b?" once written into the net).
inline Square coordinate_square_col(int d) {
  std::vector<int> c;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c.push_back(j);
  return {d, c};
}

/// A = i (answers "n = b?").
inline Square coordinate_square_row(int d) {
  std::vector<int> c;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c.push_back(i);
  return {d, c};
}

struct OlsSet {
  int order = 0;
  std::vector<LatinSquare> squares;
  // Multiplier a of n = a*m + b for generated squares, -1 when unknown.
  std::vector<int> multipliers;
  // Set for squares built with field arithmetic of degree > 1.
  std::optional<FieldSpec> field;
  bool certified = false;
};

/// Checks every unordered pair and the d-1 bound; sets `certified`.
inline bool certify(OlsSet& set) {
  set.certified = false;
  if (set.order >= 2 && static_cast<int>(set.squares.size()) > set.order - 1) return false;
  for (std::size_t i = 0; i < set.squares.size(); ++i) {
    if (set.squares[i].order() != set.order) return false;
    for (std::size_t j = i + 1; j < set.squares.size(); ++j)
      if (!are_orthogonal(set.squares[i], set.squares[j])) return false;
  }
  set.certified = true;
  return true;
}

/// Complete set over GF(p^r): square a has entry a*m + b at (row b, column m).
inline OlsSet generate_ols_prime_power(const GaloisField& f) {
  const int d = f.order();
  OlsSet set;
  set.order = d;
  if (f.r() > 1) set.field = f.spec();
  for (int a = 1; a < d; ++a) {
    std::vector<int> cells;
    for (int b = 0; b < d; ++b)
      for (int m = 0; m < d; ++m) cells.push_back(f.add(f.mul(a, m), b));
    set.squares.emplace_back(Square(d, std::move(cells)));
    set.multipliers.push_back(a);
  }
  if (!certify(set)) throw ConstructionError("generated squares failed the orthogonality check");
  return set;
}

/// Complete set of d-1 squares n = a*m + b mod d.
inline OlsSet generate_ols_prime(int d) {
  if (!is_prime(d)) throw NotPrime(std::to_string(d) + " is not prime");
  return generate_ols_prime_power(*GaloisField::create(d));
}

/// The single cyclic square n = m + b mod d (Cayley table of Z_d), any d >= 2.
inline OlsSet cyclic_ols(int d) {
  if (d < 2) throw InvalidArgument("cyclic_ols: d must be >= 2");
  std::vector<int> cells;
  for (int b = 0; b < d; ++b)
    for (int m = 0; m < d; ++m) cells.push_back((m + b) % d);
  OlsSet set;
  set.order = d;
  set.squares.emplace_back(Square(d, std::move(cells)));
  set.multipliers.push_back(1);
  certify(set);
  return set;
}

inline bool is_standard(const Square& s) {
  for (int i = 0; i < s.order(); ++i)
    if (s.at(i, 0) != i) return false;
  return true;
}

/// Relabels the symbols of one square so that its first column reads 0..d-1.
inline Square standardize(const Square& s) {
  const int d = s.order();
  std::vector<int> relabel(d, -1);
  for (int i = 0; i < d; ++i) {
    if (relabel[s.at(i, 0)] >= 0) throw InvalidSquare("standardize: first column repeats a symbol");
    relabel[s.at(i, 0)] = i;
  }
  std::vector<int> cells;
  for (int v : s.cells()) cells.push_back(relabel[v]);
  return {d, std::move(cells)};
}

/// Symbol relabeling per square; Latin and orthogonality properties are re-verified.
inline OlsSet standardize(const OlsSet& set) {
  OlsSet out = set;
  for (auto& sq : out.squares) sq = LatinSquare(standardize(sq.square()));
  if (set.certified && !certify(out)) throw ConstructionError("standardize broke orthogonality");
  return out;
}

/// Direct product: entry at row i*d2+k, column j*d2+l is a_ij*d2 + b_kl.
inline Square macneish_product(const Square& a, const Square& b) {
  const int d1 = a.order();
  const int d2 = b.order();
  const int d = d1 * d2;
  std::vector<int> cells(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d2; ++k)
      for (int j = 0; j < d1; ++j)
        for (int l = 0; l < d2; ++l) cells[(i * d2 + k) * d + (j * d2 + l)] = a.at(i, j) * d2 + b.at(k, l);
  return {d, std::move(cells)};
}

/// min_i(p_i^{r_i}) - 1 over the prime-power factors of d.
inline int macneish_bound(int d) {
  if (d < 2) throw InvalidArgument("macneish_bound: d must be >= 2");
  int best = d;
  for (const auto& f : factorize(d)) best = std::min(best, f.value);
  return best - 1;
}

/// MacNeish set: products of the complete sets of each prime-power factor,
/// paired in order; size equals macneish_bound(d).
inline OlsSet macneish_ols(int d) {
  const int count = macneish_bound(d);
  std::vector<Square> acc;
  int acc_order = 1;
  for (const auto& f : factorize(d)) {
    auto factor_set = generate_ols_prime_power(*GaloisField::create(f.value));
    std::vector<Square> next;
    for (int k = 0; k < count; ++k) {
      const Square& fac = factor_set.squares[k].square();
      next.push_back(acc.empty() ? fac : macneish_product(acc[k], fac));
    }
    acc = std::move(next);
    acc_order *= f.value;
  }
  OlsSet set;
  set.order = acc_order;
  for (auto& s : acc) {
    set.squares.emplace_back(s);
    set.multipliers.push_back(-1);
  }
  if (!certify(set)) throw ConstructionError("MacNeish products are not orthogonal");
  return set;
}

// --- orthogonal mates -----------------------------------------------------

struct MateStats {
  std::uint64_t transversals = 0;
  std::uint64_t nodes = 0;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, MateStats partial) : Error(what), stats(partial) {}
  MateStats stats;
};

struct MateResult {
  std::optional<LatinSquare> mate;  // nullopt means no mate exists
  MateStats stats;
  std::vector<std::vector<int>> transversals;  // cell indices i*d+j, rows ascending
};

inline constexpr std::uint64_t kDefaultMateBudget = 10'000'000;
inline constexpr int kMaxMateOrder = 10;

/// Every transversal (one cell per row, distinct columns and symbols).
inline std::vector<std::vector<int>> transversals(const LatinSquare& s, MateStats& stats,
                                                  std::uint64_t budget = kDefaultMateBudget) {
  const int d = s.order();
  std::vector<std::vector<int>> out;
  std::vector<int> chosen;
  std::vector<bool> col_used(d), sym_used(d);
  auto rec = [&](auto&& self, int row) -> void {
    if (row == d) {
      out.push_back(chosen);
      ++stats.transversals;
      return;
    }
    for (int col = 0; col < d; ++col) {
      const int sym = s.at(row, col);
      if (col_used[col] || sym_used[sym]) continue;
      if (++stats.nodes > budget) throw BudgetExceeded("transversal enumeration exceeded the node budget", stats);
      col_used[col] = sym_used[sym] = true;
      chosen.push_back(row * d + col);
      self(self, row + 1);
      chosen.pop_back();
      col_used[col] = sym_used[sym] = false;
    }
  };
  rec(rec, 0);
  return out;
}

/// Searches for d disjoint transversals; symbol k goes on transversal k.
inline MateResult find_orthogonal_mate(const LatinSquare& s, std::uint64_t budget = kDefaultMateBudget) {
  const int d = s.order();
  if (d > kMaxMateOrder) throw InvalidArgument("find_orthogonal_mate: order above " + std::to_string(kMaxMateOrder));
  MateResult result;
  result.transversals = transversals(s, result.stats, budget);
  if (result.transversals.empty()) return result;

  ExactCover dlx(d * d);
  for (const auto& t : result.transversals) dlx.add_option(t);
  std::optional<std::vector<int>> chosen;
  const auto remaining = budget > result.stats.nodes ? budget - result.stats.nodes : 0;
  auto stats = dlx.solve(
      [&](const std::vector<int>& opts) {
        chosen = opts;
        return false;
      },
      remaining);
  result.stats.nodes += stats.nodes;
  if (stats.budget_exhausted) throw BudgetExceeded("exact-cover search exceeded the node budget", result.stats);
  if (!chosen) return result;

  std::vector<int> cells(static_cast<std::size_t>(d) * d, -1);
  std::vector<int> sorted = *chosen;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < d; ++k)
    for (int cell : result.transversals[sorted[k]]) cells[cell] = k;
  result.mate = LatinSquare(Square(d, std::move(cells)));
  return result;
}

// --- text format: first line d, then d whitespace-separated rows ----------

inline Square read_square(std::istream& in) {
  int d = 0;
  if (!(in >> d) || d < 1) throw InvalidSquare("square file: missing or invalid order");
  std::vector<int> cells;
  for (int k = 0; k < d * d; ++k) {
    int v;
    if (!(in >> v)) throw InvalidSquare("square file: expected " + std::to_string(d * d) + " entries");
    cells.push_back(v);
  }
  return {d, std::move(cells)};
}

inline void write_square(std::ostream& out, const Square& s) {
  out << s.order() << '\n';
  for (int i = 0; i < s.order(); ++i) {
    for (int j = 0; j < s.order(); ++j) out << (j ? " " : "") << s.at(i, j);
    out << '\n';
  }
}

}  // namespace olsmub
