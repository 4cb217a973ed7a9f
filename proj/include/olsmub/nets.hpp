#pragma once

// Net designs built from sets of orthogonal Latin squares.
//
// Ontic labels are 0..d^2-1; label l is read as the pair (m, n) = (l / d, l % d).

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "olsmub/error.hpp"
#include "olsmub/squares.hpp"

namespace olsmub {

enum class RowKind {
  MEqualsB,  // from A_ij = j, the coordinate row
  NEqualsB,  // from A_ij = i
  Square,    // from a Latin square
};

struct RowTag {
  RowKind kind = RowKind::Square;
  int multiplier = -1;  // a in n = a*m + b, -1 when unknown
  int square = -1;      // index into the source OlsSet
};

using Cell = std::vector<int>;
using NetRow = std::vector<Cell>;

struct NetDesign {
  int d = 0;
  std::vector<NetRow> rows;
  std::vector<RowTag> tags;
  int field_degree = 1;  // r > 1 renders questions with field operations

  bool complete() const { return static_cast<int>(rows.size()) == d + 1; }
  bool operator==(const NetDesign& o) const { return d == o.d && rows == o.rows; }
};

inline int label_m(int label, int d) { return label / d; }
inline int label_n(int label, int d) { return label % d; }

/// Steps (i)-(v): rows of each square become cells, the coordinate square is
/// relabelled by i*d+j, every other entry B_ij at position j by j*d+B_ij.
inline NetDesign net_from_ols(const OlsSet& set) {
  if (!set.certified) throw InvalidNet("net_from_ols: OLS set is not certified");
  for (const auto& s : set.squares)
    if (!is_standard(s.square())) throw InvalidNet("net_from_ols: squares must be in standard form");
  const int d = set.order;
  NetDesign net;
  net.d = d;
  net.field_degree = set.field ? set.field->r : 1;

  const Square coord = coordinate_square_col(d);
  NetRow coord_row(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) coord_row[i].push_back(i * d + coord.at(i, j));

  auto relabel = [&](const Square& s) {
    NetRow row(d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) row[i].push_back(j * d + s.at(i, j));
      std::sort(row[i].begin(), row[i].end());
    }
    return row;
  };

  net.rows.push_back(std::move(coord_row));
  net.tags.push_back({RowKind::MEqualsB, -1, -1});
  net.rows.push_back(relabel(coordinate_square_row(d)));
  net.tags.push_back({RowKind::NEqualsB, 0, -1});
  for (std::size_t k = 0; k < set.squares.size(); ++k) {
    net.rows.push_back(relabel(set.squares[k].square()));
    const int a = k < set.multipliers.size() ? set.multipliers[k] : -1;
    net.tags.push_back({RowKind::Square, a, static_cast<int>(k)});
  }
  return net;
}

struct NetViolation {
  int row = 0, cell = 0, other_row = 0, other_cell = 0;
  int first = 0, second = 0;  // offending labels
  std::string reason;
};

struct NetCheck {
  bool ok = true;
  std::optional<NetViolation> violation;
};

/// Both forms of the net property: no label pair repeats across cells, and
/// any two cells of different rows share exactly one label.
inline NetCheck verify_net(const NetDesign& net) {
  const int d = net.d;
  const int n = d * d;
  NetCheck check;
  auto fail = [&](NetViolation v) {
    check.ok = false;
    check.violation = std::move(v);
    return check;
  };

  for (std::size_t r = 0; r < net.rows.size(); ++r) {
    const auto& row = net.rows[r];
    std::vector<bool> seen(n);
    if (static_cast<int>(row.size()) != d)
      return fail({static_cast<int>(r), 0, static_cast<int>(r), 0, 0, 0, "row does not have d cells"});
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (static_cast<int>(row[c].size()) != d)
        return fail({static_cast<int>(r), static_cast<int>(c), static_cast<int>(r), static_cast<int>(c), 0, 0,
                     "cell does not have d labels"});
      for (int l : row[c]) {
        if (l < 0 || l >= n || seen[l])
          return fail({static_cast<int>(r), static_cast<int>(c), static_cast<int>(r), static_cast<int>(c), l, l,
                       "row is not a partition of 0..d^2-1"});
        seen[l] = true;
      }
    }
  }
  if (static_cast<int>(net.rows.size()) > d + 1) return fail({0, 0, 0, 0, 0, 0, "more than d+1 rows"});

  // Pair form.
  std::vector<int> owner(static_cast<std::size_t>(n) * n, -1);
  std::optional<NetViolation> pair_violation;
  for (std::size_t r = 0; r < net.rows.size() && !pair_violation; ++r)
    for (std::size_t c = 0; c < net.rows[r].size() && !pair_violation; ++c) {
      const auto& cell = net.rows[r][c];
      for (std::size_t x = 0; x < cell.size() && !pair_violation; ++x)
        for (std::size_t y = x + 1; y < cell.size(); ++y) {
          const int lo = std::min(cell[x], cell[y]);
          const int hi = std::max(cell[x], cell[y]);
          int& slot = owner[static_cast<std::size_t>(lo) * n + hi];
          if (slot >= 0) {
            pair_violation = NetViolation{slot / d, slot % d, static_cast<int>(r), static_cast<int>(c), lo, hi,
                                          "label pair repeats in two cells"};
            break;
          }
          slot = static_cast<int>(r) * d + static_cast<int>(c);
        }
    }

  // Intersection form.
  std::optional<NetViolation> meet_violation;
  for (std::size_t r = 0; r < net.rows.size() && !meet_violation; ++r)
    for (std::size_t c = 0; c < net.rows[r].size() && !meet_violation; ++c)
      for (std::size_t r2 = r + 1; r2 < net.rows.size() && !meet_violation; ++r2)
        for (std::size_t c2 = 0; c2 < net.rows[r2].size(); ++c2) {
          std::vector<int> common;
          std::set_intersection(net.rows[r][c].begin(), net.rows[r][c].end(), net.rows[r2][c2].begin(),
                                net.rows[r2][c2].end(), std::back_inserter(common));
          if (common.size() != 1) {
            meet_violation = NetViolation{static_cast<int>(r), static_cast<int>(c), static_cast<int>(r2),
                                          static_cast<int>(c2), common.empty() ? -1 : common[0],
                                          common.size() > 1 ? common[1] : -1, "cells do not share exactly one label"};
            break;
          }
        }

  if (pair_violation.has_value() != meet_violation.has_value())
    throw ConstructionError("verify_net: pair and intersection forms disagree");
  if (pair_violation) return fail(*pair_violation);
  return check;
}

/// F_a(m, n): column of row a holding the label m*d+n.
struct ColumnFunction {
  int row = 0;
  int d = 0;
  std::vector<int> table;  // indexed by m*d+n

  int operator()(int m, int n) const { return table[m * d + n]; }
};

inline ColumnFunction column_function(const NetDesign& net, int row) {
  if (row < 0 || row >= static_cast<int>(net.rows.size())) throw InvalidArgument("column_function: row out of range");
  ColumnFunction f{row, net.d, std::vector<int>(static_cast<std::size_t>(net.d) * net.d, -1)};
  for (int c = 0; c < net.d; ++c)
    for (int l : net.rows[row][c]) f.table[l] = c;
  return f;
}

/// On every level set of f, g takes each value exactly once.
inline bool functions_orthogonal(const ColumnFunction& f, const ColumnFunction& g) {
  const int d = f.d;
  std::vector<int> count(static_cast<std::size_t>(d) * d, 0);
  for (std::size_t l = 0; l < f.table.size(); ++l) ++count[f.table[l] * d + g.table[l]];
  return std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
}

inline std::string render_question(const NetDesign& net, std::size_t row) {
  const auto& tag = net.tags.at(row);
  switch (tag.kind) {
    case RowKind::MEqualsB:
      return "m = b?";
    case RowKind::NEqualsB:
      return "n = b?";
    case RowKind::Square:
      break;
  }
  if (tag.multiplier < 0) return "square " + std::to_string(tag.square) + " = b?";
  if (net.field_degree > 1) {
    if (tag.multiplier == 1) return "n = m ⊕ b?";
    return "n = " + std::to_string(tag.multiplier) + "⊙m ⊕ b?";
  }
  if (net.d == 2 && tag.multiplier == 1) return "m + n = b?";
  if (tag.multiplier == 1) return "n = m + b?";
  return "n = " + std::to_string(tag.multiplier) + "m + b?";
}

inline std::vector<std::string> render_questions(const NetDesign& net) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < net.rows.size(); ++r) out.push_back(render_question(net, r));
  return out;
}

inline std::string label_pair(int label, int d) {
  if (d <= 10) return std::to_string(label_m(label, d)) + std::to_string(label_n(label, d));
  return std::to_string(label_m(label, d)) + "," + std::to_string(label_n(label, d));
}

/// Table with cell separators, labels as pairs mn, questions on the right.
inline std::string render_text(const NetDesign& net) {
  const int d = net.d;
  const int w = d <= 10 ? 2 : 5;
  std::ostringstream out;
  auto pad = [&](const std::string& s, int width) { return s + std::string(std::max(0, width - static_cast<int>(s.size())), ' '); };
  const int cell_width = d * (w + 1) - 1;
  std::string header;
  for (int c = 0; c < d; ++c) {
    if (c) header += " | ";
    header += pad("b=" + std::to_string(c), cell_width);
  }
  out << header << '\n' << std::string(header.size(), '=') << '\n';
  const auto questions = render_questions(net);
  for (std::size_t r = 0; r < net.rows.size(); ++r) {
    std::string line;
    for (int c = 0; c < d; ++c) {
      if (c) line += " | ";
      for (int k = 0; k < d; ++k) {
        if (k) line += ' ';
        line += pad(label_pair(net.rows[r][c][k], d), w);
      }
    }
    out << line << "    " << questions[r] << '\n';
  }
  return out.str();
}

/// Inverse of steps (iii)-(v) on the non-coordinate rows.
inline OlsSet squares_from_net(const NetDesign& net) {
  const int d = net.d;
  OlsSet set;
  set.order = d;
  for (std::size_t r = 0; r < net.rows.size(); ++r) {
    if (net.tags[r].kind != RowKind::Square) continue;
    std::vector<int> cells(static_cast<std::size_t>(d) * d, -1);
    for (int i = 0; i < d; ++i)
      for (int l : net.rows[r][i]) {
        int& slot = cells[i * d + label_m(l, d)];
        if (slot >= 0) throw InvalidNet("squares_from_net: cell repeats a column position");
        slot = label_n(l, d);
      }
    set.squares.emplace_back(Square(d, std::move(cells)));
    set.multipliers.push_back(net.tags[r].multiplier);
  }
  certify(set);
  return set;
}

/// Three-row net of the cyclic square n = m + b mod d.
inline NetDesign cyclic_net(int d) { return net_from_ols(cyclic_ols(d)); }

}  // namespace olsmub
