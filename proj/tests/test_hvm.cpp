#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "olsmub/hvm.hpp"

using namespace olsmub;

namespace {

struct Setup {
  NetDesign net;
  MubSet mubs;
};

Setup setup(int d) { return {field_net(GaloisField::create(d)), mubs_for(d)}; }

// Nested-sum count of d-subsets of d^2 labels, D = d^2 - d + 1 outer terms.
std::uint64_t nested_sum(int d) {
  const int n = d * d;
  std::uint64_t total = 0;
  std::vector<int> idx;
  auto rec = [&](auto&& self, int start, int left) -> void {
    if (left == 0) {
      ++total;
      return;
    }
    for (int i = start; i <= n - left; ++i) self(self, i + 1, left - 1);
  };
  rec(rec, 0, d);
  return total;
}

std::vector<int> random_state(int d, std::mt19937_64& rng) {
  std::vector<int> labels(d * d);
  std::iota(labels.begin(), labels.end(), 0);
  std::shuffle(labels.begin(), labels.end(), rng);
  labels.resize(d);
  return labels;
}

}  // namespace

TEST(CountEpistemic, KnownValues) {
  EXPECT_EQ(count_epistemic(2), 6u);
  EXPECT_EQ(count_epistemic(3), 84u);
  EXPECT_EQ(count_epistemic(4), 1820u);
  EXPECT_EQ(count_epistemic(5), 53130u);
  EXPECT_EQ(count_epistemic(7), 85900584u);
  EXPECT_THROW(count_epistemic(1), InvalidArgument);
  EXPECT_THROW(count_epistemic(32), InvalidArgument);
}

TEST(CountEpistemic, NestedSumOracle) {
  for (int d : {2, 3, 4}) EXPECT_EQ(count_epistemic(d), nested_sum(d));
}

TEST(EpistemicState, Validation) {
  EXPECT_EQ(EpistemicState(3, {6, 0, 1}).labels(), (std::vector<int>{0, 1, 6}));
  EXPECT_THROW(EpistemicState(3, {0, 1}), InvalidArgument);
  EXPECT_THROW(EpistemicState(3, {0, 0, 1}), InvalidArgument);
  EXPECT_THROW(EpistemicState(3, {0, 1, 9}), InvalidArgument);
}

TEST(OverlapProfile, WorkedExample) {
  // [00 01 20] for d = 3.
  const auto s = setup(3);
  const auto p = overlap_profile(EpistemicState(3, {0, 1, 6}), s.net);
  EXPECT_EQ(p.counts[0], (std::vector<int>{2, 0, 1}));
  for (const auto& row : p.counts) EXPECT_EQ(std::accumulate(row.begin(), row.end(), 0), 3);
}

TEST(OverlapProfile, NetCellIsIndicatorPlusUniform) {
  for (int d : {2, 3, 4, 5}) {
    const auto s = setup(d);
    for (std::size_t m = 0; m < s.net.rows.size(); ++m)
      for (int j = 0; j < d; ++j) {
        const auto p = overlap_profile(EpistemicState(d, s.net.rows[m][j]), s.net);
        for (std::size_t r = 0; r < s.net.rows.size(); ++r)
          for (int c = 0; c < d; ++c) EXPECT_EQ(p.counts[r][c], r == m ? (c == j ? d : 0) : 1);
      }
  }
  EXPECT_THROW(overlap_profile(EpistemicState(4, {0, 1, 2, 3}), cyclic_net(4)), IncompleteNet);
}

TEST(Reconstruct, NetCellsGiveProjectors) {
  for (int d : {2, 3, 4, 5}) {
    const auto s = setup(d);
    for (std::size_t m = 0; m < s.net.rows.size(); ++m)
      for (int j = 0; j < d; ++j) {
        const auto r = reconstruct_operator(EpistemicState(d, s.net.rows[m][j]), s.mubs, s.net);
        EXPECT_LT(max_abs(r.op - projector(s.mubs.bases[m], j)), 1e-9);
        EXPECT_EQ(classify_quantum(r).verdict, Classification::PureQuantum);
      }
  }
}

TEST(Reconstruct, QubitCellsAreBlochAxisStates) {
  const auto s = setup(2);
  const CMat paulis[3] = {weyl_z(2), weyl_x(2), weyl_op(1, 1, 2)};
  for (std::size_t m = 0; m < 3; ++m)
    for (int j = 0; j < 2; ++j) {
      const auto r = reconstruct_operator(EpistemicState(2, s.net.rows[m][j]), s.mubs, s.net);
      // Bloch vector has a single component of magnitude one along axis m.
      for (std::size_t axis = 0; axis < 3; ++axis) {
        const double comp = std::abs((r.op * paulis[axis]).trace());
        EXPECT_NEAR(comp, axis == m ? 1.0 : 0.0, 1e-10);
      }
    }
}

TEST(Reconstruct, TraceOneAndHermitianForRandomStates) {
  std::mt19937_64 rng(5);
  for (int d : {2, 3, 4, 5}) {
    const auto s = setup(d);
    for (int t = 0; t < 1000; ++t) {
      const auto r = reconstruct_operator(EpistemicState(d, random_state(d, rng)), s.mubs, s.net);
      EXPECT_NEAR(r.t1, 1.0, 1e-10);
      EXPECT_LT(hermiticity_deviation(r.op), 1e-10);
    }
  }
}

TEST(Reconstruct, UniformProfileFormula) {
  // -1 + (1/d) sum over all projectors = -1 + (d + 1)/d * 1 = 1/d.
  const int d = 3;
  const auto s = setup(d);
  CMat o = -CMat::Identity(d, d);
  for (const auto& b : s.mubs.bases)
    for (int j = 0; j < d; ++j) o += projector(b, j) / double(d);
  EXPECT_LT(max_abs(o - CMat::Identity(d, d) / double(d)), 1e-12);
  const auto c = classify_quantum(o);
  EXPECT_EQ(c.verdict, Classification::NotQuantum);
  EXPECT_NEAR(c.t2, 1.0 / d, 1e-12);
}

TEST(Classify, WorkedExampleIsNotQuantum) {
  const auto s = setup(3);
  const auto r = reconstruct_operator(EpistemicState(3, {0, 1, 6}), s.mubs, s.net);
  EXPECT_EQ(classify_quantum(r).verdict, Classification::NotQuantum);
}

TEST(Classify, RejectsNonHermitianAndWrongTrace) {
  CMat a(2, 2);
  a << 1, 1, 0, 0;
  EXPECT_THROW(classify_quantum(a), NotHermitian);
  EXPECT_THROW(classify_quantum(CMat::Identity(2, 2)), InvalidArgument);
}

TEST(Census, SmallDimensions) {
  const std::vector<std::tuple<int, std::uint64_t, std::uint64_t, std::string>> want = {
      {2, 6, 6, "1/1"}, {3, 84, 12, "1/7"}, {5, 53130, 30, "1/1771"}};
  for (const auto& [d, e, q, ratio] : want) {
    const auto s = setup(d);
    const auto r = census(d, s.mubs, s.net);
    EXPECT_EQ(r.E, e);
    EXPECT_EQ(r.Q, q);
    EXPECT_EQ(r.ratio, ratio);
    EXPECT_EQ(r.chunks, d * d - d + 1);
  }
}

TEST(Census, D3QuantumStatesAreExactlyNetCells) {
  const auto s = setup(3);
  const auto r = census(3, s.mubs, s.net);
  std::set<std::vector<int>> cells;
  for (const auto& row : s.net.rows)
    for (const auto& c : row) cells.insert(c);
  EXPECT_EQ(std::set<std::vector<int>>(r.quantum_states.begin(), r.quantum_states.end()), cells);
}

TEST(Census, ChunkedAndThreadedRunsAgree) {
  for (int d : {3, 4}) {
    const auto s = setup(d);
    CensusConfig one, many;
    many.threads = 4;
    const auto a = census(d, s.mubs, s.net, one);
    const auto b = census(d, s.mubs, s.net, many);
    EXPECT_EQ(a.Q, b.Q);
    EXPECT_EQ(a.E, b.E);
    EXPECT_EQ(a.quantum_states, b.quantum_states);
  }
}

TEST(Census, MatchesDirectClassification) {
  // Every state of d = 3 through the overlap route and the classifier.
  const int d = 3;
  const auto s = setup(d);
  std::uint64_t q = 0;
  std::vector<int> c(d);
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b)
      for (int e = b + 1; e < 9; ++e)
        q += classify_quantum(reconstruct_operator(EpistemicState(d, {a, b, e}), s.mubs, s.net)).verdict ==
             Classification::PureQuantum;
  EXPECT_EQ(census(d, s.mubs, s.net).Q, q);
}

TEST(Census, AtLeastNetCellsForPrimePowers) {
  for (int d : {2, 3, 4, 5}) {
    const auto s = setup(d);
    EXPECT_GE(census(d, s.mubs, s.net).Q, static_cast<std::uint64_t>(d * (d + 1)));
  }
}

TEST(Census, D4DependsOnAnchorsNotOnFieldBasis) {
  const auto f = GaloisField::create(4);
  const auto net = field_net(f);
  std::set<std::uint64_t> by_basis;
  for (auto b : std::vector<std::vector<int>>{{2, 1}, {1, 2}, {1, 3}, {3, 1}, {2, 3}, {3, 2}}) {
    const auto mubs = mubs_from_net(net, LabelOperators::field(f, dual_basis(*f, b)));
    by_basis.insert(census(4, mubs, net).Q);
  }
  EXPECT_EQ(by_basis.size(), 1u);

  const auto scan = scan_anchors(4, net, LabelOperators::field(f));
  EXPECT_EQ(scan.anchorings, 1024u);
  std::uint64_t total = 0;
  for (const auto& [q, count] : scan.histogram) total += count;
  EXPECT_EQ(total, 1024u);
  EXPECT_TRUE(scan.histogram.count(32));
  AlignmentOptions opt;
  opt.anchors = scan.first_anchor_for_min;
  EXPECT_EQ(census(4, mubs_from_net(net, LabelOperators::field(f), opt), net).Q, scan.histogram.begin()->first);
}

TEST(Census, FlagsAndGuards) {
  const auto s = setup(3);
  CensusConfig cfg;
  cfg.report_mixed = true;
  cfg.audit = true;
  const auto r = census(3, s.mubs, s.net, cfg);
  EXPECT_EQ(r.Q, 12u);
  EXPECT_EQ(r.flipped, 0u);
  EXPECT_THROW(census(4, mubs_from_net(cyclic_net(4), LabelOperators::cyclic(4)), cyclic_net(4)), IncompleteNet);
  const auto s7 = setup(7);
  EXPECT_THROW(census(7, s7.mubs, s7.net), InvalidArgument);
}

TEST(Simulate, CellStatesAndBornRule) {
  const int d = 3;
  const auto s = setup(d);
  for (std::size_t m = 0; m < s.net.rows.size(); ++m)
    for (int j = 0; j < d; ++j) {
      const EpistemicState e(d, s.net.rows[m][j]);
      for (std::size_t row = 0; row < s.net.rows.size(); ++row) {
        const auto sim = simulate_measurement(e, static_cast<int>(row), s.net, 100, 1);
        const auto born = born_probabilities(s.mubs, static_cast<int>(m), j, static_cast<int>(row));
        for (int k = 0; k < d; ++k) {
          EXPECT_NEAR(sim.exact[k], row == m ? (k == j ? 1.0 : 0.0) : 1.0 / d, 1e-15);
          EXPECT_NEAR(sim.exact[k], born[k], 1e-10);
        }
      }
    }
}

TEST(Simulate, HistogramWithinThreeSigma) {
  const auto s = setup(2);
  const EpistemicState e(2, s.net.rows[0][1]);
  const std::uint64_t trials = 10000;
  const auto sim = simulate_measurement(e, 1, s.net, trials, 42);
  std::uint64_t sum = 0;
  for (int k = 0; k < 2; ++k) {
    const double p = sim.exact[k];
    const double sigma = std::sqrt(trials * p * (1 - p));
    EXPECT_LE(std::abs(static_cast<double>(sim.histogram[k]) - trials * p), 3 * sigma + 1e-12);
    sum += sim.histogram[k];
  }
  EXPECT_EQ(sum, trials);
  // Same seed, same histogram.
  EXPECT_EQ(simulate_measurement(e, 1, s.net, trials, 42).histogram, sim.histogram);
}
