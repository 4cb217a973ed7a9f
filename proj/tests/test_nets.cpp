#include <gtest/gtest.h>

#include <set>

#include "olsmub/acceptance.hpp"
#include "olsmub/nets.hpp"

using namespace olsmub;

namespace {

NetDesign net_for(int d) { return field_net(GaloisField::create(d)); }

// Independent net oracle: count label pairs across all cells.
bool net_oracle(const NetDesign& net) {
  std::set<std::pair<int, int>> seen;
  for (const auto& row : net.rows)
    for (const auto& cell : row)
      for (std::size_t x = 0; x < cell.size(); ++x)
        for (std::size_t y = x + 1; y < cell.size(); ++y)
          if (!seen.insert({std::min(cell[x], cell[y]), std::max(cell[x], cell[y])}).second) return false;
  return true;
}

}  // namespace

TEST(NetFromOls, ReferenceTables) {
  EXPECT_EQ(net_for(2).rows, parse_reference_net(kReferenceNet2, 2));
  EXPECT_EQ(net_for(3).rows, parse_reference_net(kReferenceNet3, 3));
  EXPECT_EQ(net_for(4).rows, parse_reference_net(kReferenceNet4, 4));
}

TEST(NetFromOls, AllPrimePowersAreNets) {
  for (int d : {2, 3, 4, 5, 7, 8, 9}) {
    const auto net = net_for(d);
    EXPECT_EQ(static_cast<int>(net.rows.size()), d + 1);
    EXPECT_TRUE(net.complete());
    EXPECT_TRUE(verify_net(net).ok) << d;
    EXPECT_TRUE(net_oracle(net)) << d;
  }
}

TEST(NetFromOls, RejectsUncertifiedOrNonStandard) {
  auto set = generate_ols_prime(3);
  set.certified = false;
  EXPECT_THROW(net_from_ols(set), InvalidNet);
  auto shifted = generate_ols_prime(3);
  std::vector<int> cells = shifted.squares[0].square().cells();
  for (auto& v : cells) v = (v + 1) % 3;
  shifted.squares[0] = LatinSquare(Square(3, cells));
  ASSERT_TRUE(certify(shifted));
  EXPECT_THROW(net_from_ols(shifted), InvalidNet);
  EXPECT_NO_THROW(net_from_ols(standardize(shifted)));
}

TEST(VerifyNet, CyclicThreeRowNet) {
  NetDesign ref;
  ref.d = 4;
  ref.rows = parse_reference_net(kReferenceNet4Cyclic, 4);
  EXPECT_TRUE(verify_net(ref).ok);
  EXPECT_EQ(cyclic_net(4).rows, ref.rows);
  EXPECT_FALSE(cyclic_net(4).complete());
}

TEST(VerifyNet, CorruptionGivesWitness) {
  auto net = net_for(3);
  // Exchange one label between two cells of row 2 (third row).
  std::swap(net.rows[2][0][1], net.rows[2][1][1]);
  for (auto& cell : net.rows[2]) std::sort(cell.begin(), cell.end());
  const auto check = verify_net(net);
  EXPECT_FALSE(check.ok);
  ASSERT_TRUE(check.violation);
  EXPECT_FALSE(net_oracle(net));
  EXPECT_NE(check.violation->first, check.violation->second);
}

TEST(VerifyNet, StructuralFailures) {
  auto net = net_for(3);
  net.rows[1][0].pop_back();
  EXPECT_FALSE(verify_net(net).ok);
  auto dup = net_for(3);
  dup.rows[1][0][0] = dup.rows[1][1][0];
  EXPECT_FALSE(verify_net(dup).ok);
  auto extra = net_for(2);
  extra.rows.push_back(extra.rows[0]);
  extra.rows.push_back(extra.rows[1]);
  EXPECT_FALSE(verify_net(extra).ok);
}

TEST(ColumnFunction, CoordinateAndSquareRows) {
  const int d = 3;
  const auto net = net_for(d);
  const auto f0 = column_function(net, 0);
  const auto f1 = column_function(net, 1);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      EXPECT_EQ(f0(m, n), m);
      EXPECT_EQ(f1(m, n), n);
      for (int a = 1; a < d; ++a) EXPECT_EQ(column_function(net, a + 1)(m, n), mod(n - a * m, d));
    }
}

TEST(ColumnFunction, PairwiseOrthogonalAndBalanced) {
  for (int d : {2, 3, 4, 5, 8}) {
    const auto net = net_for(d);
    for (std::size_t a = 0; a < net.rows.size(); ++a) {
      const auto fa = column_function(net, static_cast<int>(a));
      std::vector<int> sizes(d, 0);
      for (int v : fa.table) ++sizes[v];
      for (int s : sizes) EXPECT_EQ(s, d);
      for (std::size_t b = a + 1; b < net.rows.size(); ++b)
        EXPECT_TRUE(functions_orthogonal(fa, column_function(net, static_cast<int>(b))));
    }
  }
}

TEST(Questions, Rendering) {
  EXPECT_EQ(render_questions(net_for(2)), (std::vector<std::string>{"m = b?", "n = b?", "m + n = b?"}));
  EXPECT_EQ(render_questions(net_for(3)), (std::vector<std::string>{"m = b?", "n = b?", "n = m + b?", "n = 2m + b?"}));
  const auto q4 = render_questions(net_for(4));
  EXPECT_EQ(q4[2], "n = m ⊕ b?");
  EXPECT_EQ(q4[3], "n = 2⊙m ⊕ b?");
  NetDesign single = net_for(3);
  single.rows.resize(1);
  single.tags.resize(1);
  EXPECT_EQ(render_questions(single).size(), 1u);
}

TEST(RenderText, ThreeByThree) {
  const auto text = render_text(net_for(3));
  EXPECT_NE(text.find("b=0      | b=1      | b=2"), std::string::npos);
  EXPECT_NE(text.find("00 01 02 | 10 11 12 | 20 21 22    m = b?"), std::string::npos);
  EXPECT_NE(text.find("00 12 21 | 01 10 22 | 02 11 20    n = 2m + b?"), std::string::npos);
}

TEST(SquaresFromNet, RoundTrip) {
  for (int d : {3, 4, 5, 8}) {
    const auto set = generate_ols_prime_power(*GaloisField::create(d));
    const auto back = squares_from_net(net_from_ols(set));
    EXPECT_TRUE(back.certified);
    EXPECT_EQ(back.squares, set.squares);
  }
}
