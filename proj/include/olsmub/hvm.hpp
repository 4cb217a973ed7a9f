#pragma once

// Epistemic states over a net, operator reconstruction from the MUB
// expansion, purity classification and the census of quantum-representable
// epistemic states.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "olsmub/error.hpp"
#include "olsmub/linalg.hpp"
#include "olsmub/nets.hpp"
#include "olsmub/qmub.hpp"

namespace olsmub {

/// C(d^2, d), exact; throws when the result does not fit in 64 bits.
inline std::uint64_t count_epistemic(int d) {
  if (d < 2) throw InvalidArgument("count_epistemic: d must be >= 2");
  const std::uint64_t n = static_cast<std::uint64_t>(d) * d;
  unsigned __int128 c = 1;
  for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(d); ++k) {
    c = c * (n - d + k) / k;  // stays integral: C(n-d+k, k)
    if (c > std::numeric_limits<std::uint64_t>::max()) throw InvalidArgument("count_epistemic: overflow");
  }
  return static_cast<std::uint64_t>(c);
}

class EpistemicState {
 public:
  EpistemicState(int d, std::vector<int> labels) : d_(d), labels_(std::move(labels)) {
    if (d < 2) throw InvalidArgument("EpistemicState: d must be >= 2");
    if (static_cast<int>(labels_.size()) != d) throw InvalidArgument("EpistemicState: needs exactly d labels");
    std::sort(labels_.begin(), labels_.end());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] < 0 || labels_[i] >= d * d) throw InvalidArgument("EpistemicState: label out of range");
      if (i && labels_[i] == labels_[i - 1]) throw InvalidArgument("EpistemicState: repeated label");
    }
  }

  int d() const { return d_; }
  const std::vector<int>& labels() const { return labels_; }
  bool operator==(const EpistemicState&) const = default;

 private:
  int d_;
  std::vector<int> labels_;
};

/// counts[m][j] = |e ∩ cell(m, j)|; the overlap is counts / d.
struct OverlapProfile {
  int d = 0;
  std::vector<std::vector<int>> counts;

  double overlap(int row, int col) const { return static_cast<double>(counts[row][col]) / d; }
};

inline void require_complete(const NetDesign& net) {
  if (!net.complete()) throw IncompleteNet("net has " + std::to_string(net.rows.size()) + " rows, expected d+1");
}

inline OverlapProfile overlap_profile(const EpistemicState& e, const NetDesign& net) {
  require_complete(net);
  if (e.d() != net.d) throw DimensionMismatch("overlap_profile: dimension mismatch");
  OverlapProfile p{net.d, std::vector<std::vector<int>>(net.rows.size(), std::vector<int>(net.d, 0))};
  for (std::size_t m = 0; m < net.rows.size(); ++m) {
    const auto f = column_function(net, static_cast<int>(m));
    for (int l : e.labels()) ++p.counts[m][f.table[l]];
  }
  return p;
}

struct ReconstructedOperator {
  CMat op;
  EpistemicState source;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
};

struct Traces {
  double t1, t2, t3;
};

/// Tr O, Tr O^2, Tr O^3 for Hermitian O; O^3 never formed.
inline Traces traces(const CMat& o) {
  const CMat o2 = o * o;
  // Tr(O^2 O) = sum_ij (O^2)_ij O_ji = sum_ij (O^2)_ij conj(O_ij)
  const cplx t3 = (o2.array() * o.conjugate().array()).sum();
  return {o.trace().real(), o.squaredNorm(), t3.real()};
}

inline CMat projector(const Basis& b, int j) { return b.vectors.col(j) * b.vectors.col(j).adjoint(); }

/// O = -1 + sum_m sum_j p_j^(m) |j>_m<j|, bases aligned with net rows.
inline ReconstructedOperator reconstruct_operator(const EpistemicState& e, const MubSet& mubs, const NetDesign& net) {
  if (mubs.d != net.d || mubs.bases.size() != net.rows.size())
    throw DimensionMismatch("reconstruct_operator: MUB set does not match the net");
  const auto profile = overlap_profile(e, net);
  const int d = net.d;
  CMat o = -CMat::Identity(d, d);
  for (std::size_t m = 0; m < net.rows.size(); ++m)
    for (int j = 0; j < d; ++j)
      if (profile.counts[m][j]) o += profile.overlap(static_cast<int>(m), j) * projector(mubs.bases[m], j);
  const auto t = traces(o);
  return {o, e, t.t1, t.t2, t.t3};
}

enum class Classification { PureQuantum, NotQuantum };

inline constexpr double kClassifyTolerance = 1e-8;

struct ClassifyResult {
  Classification verdict = Classification::NotQuantum;
  double t2 = 0.0, t3 = 0.0;
  double min_eigenvalue = 0.0;  // only computed for trace-accepted operators
};

inline ClassifyResult classify_quantum(const CMat& op, double eps = kClassifyTolerance) {
  if (!is_hermitian(op, kTolerance)) throw NotHermitian("classify_quantum: operator is not Hermitian");
  const auto t = traces(op);
  if (std::abs(t.t1 - 1.0) > eps) throw InvalidArgument("classify_quantum: trace is not 1");
  ClassifyResult r{Classification::NotQuantum, t.t2, t.t3, 0.0};
  if (std::abs(t.t2 - 1.0) <= eps && std::abs(t.t3 - 1.0) <= eps) {
    r.min_eigenvalue = jacobi_eigh(op).values.front();
    if (r.min_eigenvalue >= -eps) r.verdict = Classification::PureQuantum;
  }
  return r;
}

inline ClassifyResult classify_quantum(const ReconstructedOperator& r, double eps = kClassifyTolerance) {
  return classify_quantum(r.op, eps);
}

inline std::string to_string(Classification c) { return c == Classification::PureQuantum ? "PureQuantum" : "NotQuantum"; }

/// Reduced "p/q".
inline std::string ratio_string(std::uint64_t p, std::uint64_t q) {
  const auto g = std::gcd(p, q);
  return std::to_string(g ? p / g : p) + "/" + std::to_string(g ? q / g : q);
}

struct CensusConfig {
  int threads = 1;
  bool report_mixed = false;  // also count PSD reconstructions that are not pure
  bool audit = false;         // recompute borderline traces in extended precision
  bool allow_large = false;   // required for d >= 6
  double eps = kClassifyTolerance;
};

struct CensusResult {
  int d = 0;
  std::uint64_t E = 0;
  std::uint64_t Q = 0;
  std::uint64_t mixed = 0;     // meaningful with report_mixed
  std::uint64_t audited = 0;   // borderline cases recomputed
  std::uint64_t flipped = 0;   // audited cases whose verdict changed
  std::string ratio;
  double elapsed_ms = 0.0;
  int chunks = 0;
  int threads = 1;
  std::vector<std::vector<int>> quantum_states;  // label sets, colex order
};

namespace detail {

using lcplx = std::complex<long double>;

// Neumaier summation of the traces of O^2 and O^3 in long double.
inline std::pair<long double, long double> compensated_traces(const std::vector<std::vector<lcplx>>& o) {
  const std::size_t d = o.size();
  auto add = [](long double& s, long double& c, long double x) {
    const long double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  };
  long double s2 = 0, c2 = 0, s3 = 0, c3 = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      add(s2, c2, std::norm(o[i][j]));
      for (std::size_t k = 0; k < d; ++k) add(s3, c3, (o[i][j] * o[j][k] * o[k][i]).real());
    }
  return {s2 + c2, s3 + c3};
}

}  // namespace detail

/// Exhaustive classification of all C(d^2, d) epistemic states. Chunk k holds
/// the subsets whose largest label is d-1+k, so there are d^2-d+1 chunks.
/// Chunks run on a shared queue; the merge is integer addition, so results do
/// not depend on the thread count.
inline CensusResult census(int d, const MubSet& mubs, const NetDesign& net, const CensusConfig& cfg = {}) {
  require_complete(net);
  if (mubs.d != d || net.d != d || mubs.bases.size() != net.rows.size())
    throw DimensionMismatch("census: MUB set and net do not match d");
  if (d >= 6 && !cfg.allow_large) throw InvalidArgument("census: d >= 6 needs allow_large");
  const auto start = std::chrono::steady_clock::now();
  const int n = d * d;

  // Phase-point operators A_l = sum_m P(m, F_m(l)) - 1, so O_e = (1/d) sum_{l in e} A_l.
  std::vector<CMat> point(n, -CMat::Identity(d, d));
  for (std::size_t m = 0; m < net.rows.size(); ++m) {
    const auto f = column_function(net, static_cast<int>(m));
    for (int l = 0; l < n; ++l) point[l] += projector(mubs.bases[m], f.table[l]);
  }

  const int chunk_count = n - d + 1;
  struct ChunkOut {
    std::uint64_t q = 0, mixed = 0, audited = 0, flipped = 0, visited = 0;
    std::vector<std::vector<int>> states;
  };
  std::vector<ChunkOut> outs(chunk_count);
  std::atomic<int> next{0};

  auto worker = [&] {
    std::vector<CMat> partial(d + 1, CMat::Zero(d, d));
    std::vector<int> chosen(d);
    CMat o(d, d), o2(d, d);
    for (int chunk; (chunk = next.fetch_add(1)) < chunk_count;) {
      ChunkOut& out = outs[chunk];
      const int top = d - 1 + chunk;
      chosen[d - 1] = top;
      partial[d - 1] = point[top];

      auto classify = [&] {
        o = partial[0] / static_cast<double>(d);
        o2.noalias() = o * o;
        const double t2 = o.squaredNorm();
        const double t3 = (o2.array() * o.conjugate().array()).sum().real();
        bool pure = std::abs(t2 - 1.0) <= cfg.eps && std::abs(t3 - 1.0) <= cfg.eps;
        if (cfg.audit) {
          auto borderline = [&](double t) {
            const double dev = std::abs(t - 1.0);
            return dev >= cfg.eps / 10 && dev <= cfg.eps * 10;
          };
          if (borderline(t2) || borderline(t3)) {
            std::vector<std::vector<detail::lcplx>> lo(d, std::vector<detail::lcplx>(d, 0));
            for (int k = 0; k < d; ++k)
              for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                  const cplx v = point[chosen[k]](i, j);
                  lo[i][j] += detail::lcplx(v.real(), v.imag()) / static_cast<long double>(d);
                }
            const auto [l2, l3] = detail::compensated_traces(lo);
            const bool pure_l = std::abs(l2 - 1.0L) <= cfg.eps && std::abs(l3 - 1.0L) <= cfg.eps;
            ++out.audited;
            if (pure_l != pure) ++out.flipped;
            pure = pure_l;
          }
        }
        if (pure) {
          if (jacobi_eigh(o).values.front() >= -cfg.eps) {
            ++out.q;
            out.states.push_back(chosen);
          }
        } else if (cfg.report_mixed && jacobi_eigh(o).values.front() >= -cfg.eps) {
          ++out.mixed;
        }
        ++out.visited;
      };

      // Choose positions d-2 .. 0 with strictly decreasing labels below `top`.
      auto dfs = [&](auto&& self, int pos, int bound) -> void {
        if (pos < 0) {
          classify();
          return;
        }
        for (int l = pos; l < bound; ++l) {
          chosen[pos] = l;
          partial[pos] = partial[pos + 1] + point[l];
          self(self, pos - 1, l);
        }
      };
      dfs(dfs, d - 2, top);
      // Colex order within the chunk: sort the label sets.
      for (auto& s : out.states) std::sort(s.begin(), s.end());
      std::sort(out.states.begin(), out.states.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
      });
    }
  };

  const int threads = std::max(1, std::min(cfg.threads, chunk_count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  CensusResult res;
  res.d = d;
  res.E = count_epistemic(d);
  res.chunks = chunk_count;
  res.threads = threads;
  std::uint64_t visited = 0;
  for (auto& out : outs) {
    res.Q += out.q;
    res.mixed += out.mixed;
    res.audited += out.audited;
    res.flipped += out.flipped;
    visited += out.visited;
    for (auto& s : out.states) res.quantum_states.push_back(std::move(s));
  }
  if (visited != res.E) throw ConstructionError("census: enumeration visited the wrong number of states");
  res.ratio = ratio_string(res.Q, res.E);
  res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

/// Census under every anchor choice (d^(d+1) of them): Q value -> number of
/// anchorings giving it. Only feasible for small d.
struct AnchorScan {
  int d = 0;
  std::uint64_t anchorings = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::vector<int> first_anchor_for_min;  // some anchoring attaining the smallest Q
};

inline AnchorScan scan_anchors(int d, const NetDesign& net, const LabelOperators& ops, AlignmentOptions opt = {},
                               std::uint64_t budget = 50'000'000) {
  require_complete(net);
  const std::uint64_t rows = net.rows.size();
  std::uint64_t total = 1;
  for (std::uint64_t r = 0; r < rows; ++r) total *= d;
  if (total * count_epistemic(d) > budget) throw InvalidArgument("scan_anchors: too many classifications for d = " + std::to_string(d));
  AnchorScan scan{d, total, {}, {}};
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t code = 0; code < total; ++code) {
    opt.anchors.assign(rows, 0);
    auto c = code;
    for (std::uint64_t r = 0; r < rows; ++r, c /= d) opt.anchors[rows - 1 - r] = static_cast<int>(c % d);
    const auto mubs = mubs_from_net(net, ops, opt);
    const auto res = census(d, mubs, net);
    ++scan.histogram[res.Q];
    if (res.Q < best) {
      best = res.Q;
      scan.first_anchor_for_min = opt.anchors;
    }
  }
  return scan;
}

struct MeasurementSimulation {
  std::vector<double> exact;             // P(j) = |e ∩ cell(row, j)| / d
  std::vector<std::uint64_t> histogram;  // sampled outcomes
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Draws an ontic state uniformly from e and reports the cell of `row` holding it.
inline MeasurementSimulation simulate_measurement(const EpistemicState& e, int row, const NetDesign& net,
                                                  std::uint64_t trials, std::uint64_t seed) {
  if (e.d() != net.d) throw DimensionMismatch("simulate_measurement: dimension mismatch");
  const auto f = column_function(net, row);
  MeasurementSimulation sim;
  sim.trials = trials;
  sim.seed = seed;
  sim.exact.assign(net.d, 0.0);
  sim.histogram.assign(net.d, 0);
  for (int l : e.labels()) sim.exact[f.table[l]] += 1.0 / net.d;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, net.d - 1);
  for (std::uint64_t t = 0; t < trials; ++t) ++sim.histogram[f.table[e.labels()[pick(rng)]]];
  return sim;
}

/// |<k|_row |j>_m|^2 for k = 0..d-1.
inline std::vector<double> born_probabilities(const MubSet& mubs, int m, int j, int row) {
  const CVec psi = mubs.bases.at(m).vectors.col(j);
  std::vector<double> p;
  for (int k = 0; k < mubs.d; ++k) p.push_back(std::norm(mubs.bases.at(row).vectors.col(k).dot(psi)));
  return p;
}

}  // namespace olsmub
