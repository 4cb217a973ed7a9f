// olsmub: command-line driver for the Latin-square / MUB / census experiments.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "olsmub/acceptance.hpp"
#include "olsmub/gfield.hpp"
#include "olsmub/hvm.hpp"
#include "olsmub/io.hpp"
#include "olsmub/nets.hpp"
#include "olsmub/qmub.hpp"
#include "olsmub/squares.hpp"

namespace {

using namespace olsmub;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Output {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot open " + path + " for writing");
    f << text;
  }

  void write(const json& j) const { write(j.dump(2) + "\n"); }
};

int default_threads() {
  if (const char* env = std::getenv("OLSMUB_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

void require_d(int d) {
  if (d < 2) throw InvalidArgument("--d must be at least 2");
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw InvalidArgument("bad integer list: " + s);
    out.push_back(v);
  }
  return out;
}

// The complete field net plus label operators, optionally with a custom field basis.
struct FieldSetup {
  FieldPtr field;
  NetDesign net;
  LabelOperators ops;
};

FieldSetup field_setup(int d, const std::string& basis) {
  if (!prime_power(d)) throw NotPrimePower(std::to_string(d) + " is not a prime power");
  auto f = GaloisField::create(d);
  auto pair = basis.empty() ? default_basis_pair(*f) : dual_basis(*f, parse_int_list(basis));
  return {f, field_net(f), LabelOperators::field(f, pair)};
}

std::string text_table(const std::vector<std::vector<int>>& rows) {
  std::ostringstream s;
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) s << (k ? " " : "") << row[k];
    s << '\n';
  }
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal Latin squares, net designs, mutually unbiased bases and epistemic-state census"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string out_path;
  double tol = kTolerance;
  int d = 0;

  auto add_common = [&](CLI::App* sub, bool needs_d) {
    if (needs_d) sub->add_option("--d", d, "dimension / order")->required();
    sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--output", out_path, "write the report to a file");
    sub->add_option("--tol", tol, "linear-algebra tolerance")->check(CLI::PositiveNumber);
  };

  auto* field_cmd = app.add_subcommand("field", "GF(d) arithmetic tables, trace and dual basis");
  add_common(field_cmd, true);
  bool field_table = false;
  field_cmd->add_flag("--table", field_table, "include addition and multiplication tables");

  auto* ols_cmd = app.add_subcommand("ols", "complete set of orthogonal Latin squares (prime power) or MacNeish set");
  add_common(ols_cmd, true);
  std::string field_poly;
  ols_cmd->add_option("--field-poly", field_poly, "irreducible modulus, coefficients constant first, e.g. 1,1,0,1");

  auto* net_cmd = app.add_subcommand("net", "net design from the complete OLS set");
  add_common(net_cmd, true);
  bool net_cyclic = false;
  net_cmd->add_flag("--cyclic", net_cyclic, "three-row net of the cyclic square instead");

  auto* mubs_cmd = app.add_subcommand("mubs", "net-aligned mutually unbiased bases");
  add_common(mubs_cmd, true);
  bool use_macneish = false;
  std::string anchors_str, basis_str;
  mubs_cmd->add_flag("--macneish", use_macneish, "tensor products over the prime-power factors");
  mubs_cmd->add_option("--anchors", anchors_str, "anchor rank per net row, comma separated");
  mubs_cmd->add_option("--basis", basis_str, "field basis as element indices, comma separated");

  auto* verify_cmd = app.add_subcommand("verify", "re-certify a MUB set from a JSON file");
  add_common(verify_cmd, false);
  std::string mubs_file;
  verify_cmd->add_option("--mubs", mubs_file, "file written by `mubs`")->required()->check(CLI::ExistingFile);

  auto* census_cmd = app.add_subcommand("census", "count quantum-representable epistemic states");
  add_common(census_cmd, true);
  int threads = default_threads();
  bool report_mixed = false, audit = false, allow_large = false, scan = false;
  census_cmd->add_option("--threads", threads, "worker threads (default from OLSMUB_THREADS)")->check(CLI::PositiveNumber);
  census_cmd->add_flag("--report-mixed", report_mixed, "also count positive semidefinite mixed reconstructions");
  census_cmd->add_flag("--audit", audit, "recompute borderline traces in extended precision");
  census_cmd->add_flag("--allow-large", allow_large, "permit d >= 6");
  census_cmd->add_option("--anchors", anchors_str, "anchor rank per net row, comma separated");
  census_cmd->add_option("--basis", basis_str, "field basis as element indices, comma separated");
  census_cmd->add_flag("--scan-anchors", scan, "histogram of Q over every anchor choice");

  auto* mate_cmd = app.add_subcommand("mate", "search for an orthogonal mate of a Latin square");
  add_common(mate_cmd, false);
  std::string square_file;
  std::uint64_t budget = kDefaultMateBudget;
  mate_cmd->add_option("--square", square_file, "file: order on the first line, then rows")->required()->check(CLI::ExistingFile);
  mate_cmd->add_option("--budget", budget, "search node budget");

  auto* sim_cmd = app.add_subcommand("simulate", "sample measurements of a net-cell epistemic state");
  add_common(sim_cmd, true);
  std::string cell_str;
  int row = 0;
  std::uint64_t trials = 10000, seed = 42;
  sim_cmd->add_option("--cell", cell_str, "m,j: the state is cell j of net row m")->required();
  sim_cmd->add_option("--row", row, "net row to measure")->required();
  sim_cmd->add_option("--trials", trials, "number of draws");
  sim_cmd->add_option("--seed", seed, "random seed");

  auto* bound_cmd = app.add_subcommand("bound", "MacNeish bounds for OLS and MUB counts");
  add_common(bound_cmd, true);

  auto* repro_cmd = app.add_subcommand("reproduce", "run the acceptance suite");
  add_common(repro_cmd, false);
  std::vector<std::string> only;
  repro_cmd->add_option("--only", only, "criterion keys to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Output out{out_path};
  const bool text = format == "text";
  try {
    if (*field_cmd) {
      require_d(d);
      auto f = GaloisField::create(d);
      json j = field_to_json(*f);
      j["command"] = "field";
      if (field_table) {
        std::vector<std::vector<int>> add(d, std::vector<int>(d)), mul(d, std::vector<int>(d));
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            add[a][b] = f->add(a, b);
            mul[a][b] = f->mul(a, b);
          }
        j["add"] = add;
        j["mul"] = mul;
      }
      if (!text) {
        out.write(j);
      } else {
        std::ostringstream s;
        s << "GF(" << d << "), p=" << f->p() << " r=" << f->r() << "\n";
        for (int a = 0; a < d; ++a) s << a << ": trace " << f->trace(a) << "\n";
        if (field_table) s << "addition\n" << text_table(j["add"].get<std::vector<std::vector<int>>>()) << "multiplication\n" << text_table(j["mul"].get<std::vector<std::vector<int>>>());
        out.write(s.str());
      }
      return kExitOk;
    }

    if (*ols_cmd) {
      require_d(d);
      OlsSet set;
      if (!field_poly.empty()) {
        const auto pr = prime_power(d);
        if (!pr) throw NotPrimePower("--field-poly needs a prime-power order");
        auto poly = parse_int_list(field_poly);
        if (static_cast<int>(poly.size()) != pr->second + 1)
          throw InvalidArgument("--field-poly: expected " + std::to_string(pr->second + 1) + " coefficients");
        set = generate_ols_prime_power(*GaloisField::create(pr->first, poly));
      } else {
        set = prime_power(d) ? generate_ols_prime_power(*GaloisField::create(d)) : macneish_ols(d);
      }
      if (!text) {
        json j = ols_to_json(set);
        j["command"] = "ols";
        out.write(j);
      } else {
        std::ostringstream s;
        for (std::size_t k = 0; k < set.squares.size(); ++k) {
          s << "square " << k + 1 << (set.multipliers[k] > 0 ? " (a=" + std::to_string(set.multipliers[k]) + ")" : "")
            << "\n";
          for (int i = 0; i < d; ++i) s << text_table({set.squares[k].square().row(i)});
        }
        out.write(s.str());
      }
      return set.certified ? kExitOk : kExitFailed;
    }

    if (*net_cmd) {
      require_d(d);
      NetDesign net;
      if (net_cyclic) {
        net = cyclic_net(d);
      } else {
        if (!prime_power(d)) throw NotPrimePower(std::to_string(d) + " is not a prime power; try --cyclic");
        net = field_net(GaloisField::create(d));
      }
      const auto check = verify_net(net);
      if (text) {
        out.write(render_text(net));
      } else {
        json j = net_to_json(net);
        j["command"] = "net";
        j["verified"] = check.ok;
        out.write(j);
      }
      return check.ok ? kExitOk : kExitFailed;
    }

    if (*mubs_cmd) {
      require_d(d);
      MubSet set;
      if (use_macneish) {
        set = olsmub::mubs_macneish(d, tol);
      } else {
        if (!prime_power(d)) throw NotPrimePower(std::to_string(d) + " is not a prime power; try --macneish");
        AlignmentOptions opt;
        opt.tolerance = tol;
        opt.anchors = parse_int_list(anchors_str);
        if (basis_str.empty()) {
          set = mubs_for(d, opt);
        } else {
          const auto setup = field_setup(d, basis_str);
          set = mubs_from_net(setup.net, setup.ops, opt);
        }
      }
      json j = mubs_to_json(set);
      j["command"] = "mubs";
      out.write(j);
      return set.certification.certified ? kExitOk : kExitFailed;
    }

    if (*verify_cmd) {
      std::ifstream f(mubs_file);
      json in;
      try {
        f >> in;
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("cannot parse ") + mubs_file + ": " + e.what());
      }
      const auto set = mubs_from_json(in);
      const auto cert = verify_mub(set, tol);
      json j = {{"schema_version", kSchemaVersion},
                {"command", "verify"},
                {"d", set.d},
                {"bases", set.bases.size()},
                {"certification", certification_to_json(cert)}};
      out.write(j);
      return cert.certified ? kExitOk : kExitFailed;
    }

    if (*census_cmd) {
      require_d(d);
      const auto setup = field_setup(d, basis_str);
      AlignmentOptions opt;
      opt.tolerance = tol;
      opt.anchors = parse_int_list(anchors_str);
      if (scan) {
        const auto s = scan_anchors(d, setup.net, setup.ops, opt);
        json hist = json::object();
        for (const auto& [q, count] : s.histogram) hist[std::to_string(q)] = count;
        out.write(json{{"schema_version", kSchemaVersion},
                       {"command", "census"},
                       {"d", d},
                       {"anchorings", s.anchorings},
                       {"Q_histogram", hist},
                       {"anchors_for_min_Q", s.first_anchor_for_min}});
        return kExitOk;
      }
      if (basis_str.empty() && prime_power(d)->second == 1) opt.route = MubRoute::ClosedForm;
      const auto mubs = mubs_from_net(setup.net, setup.ops, opt);
      if (!mubs.certification.certified) throw ConstructionError("MUB set failed certification");
      CensusConfig cfg;
      cfg.threads = threads;
      cfg.report_mixed = report_mixed;
      cfg.audit = audit;
      cfg.allow_large = allow_large;
      const auto res = census(d, mubs, setup.net, cfg);
      json j = census_to_json(res, cfg);
      j["command"] = "census";
      j["anchors"] = mubs.anchors;
      j["field_basis"] = setup.ops.basis_pair()->basis;
      if (text) {
        std::ostringstream s;
        s << "d=" << res.d << " E=" << res.E << " Q=" << res.Q << " ratio=" << res.ratio << " (" << res.elapsed_ms
          << " ms, " << res.threads << " threads)\n";
        out.write(s.str());
      } else {
        out.write(j);
      }
      return kExitOk;
    }

    if (*mate_cmd) {
      std::ifstream f(square_file);
      const LatinSquare s(read_square(f));
      const auto res = find_orthogonal_mate(s, budget);
      json j = {{"schema_version", kSchemaVersion},
                {"command", "mate"},
                {"order", s.order()},
                {"transversals", res.stats.transversals},
                {"nodes", res.stats.nodes},
                {"mate_found", res.mate.has_value()}};
      if (res.mate) j["mate"] = square_to_json(res.mate->square());
      out.write(j);
      return kExitOk;
    }

    if (*sim_cmd) {
      require_d(d);
      const auto cell = parse_int_list(cell_str);
      if (cell.size() != 2) throw InvalidArgument("--cell expects m,j");
      const auto f = GaloisField::create(d);
      const auto net = field_net(f);
      if (cell[0] < 0 || cell[0] > d || cell[1] < 0 || cell[1] >= d || row < 0 || row > d)
        throw InvalidArgument("cell or row out of range");
      const EpistemicState e(d, net.rows[cell[0]][cell[1]]);
      const auto sim = simulate_measurement(e, row, net, trials, seed);
      const auto born = born_probabilities(mubs_for(d), cell[0], cell[1], row);
      if (text) {
        std::ostringstream t;
        t << "state " << cell[0] << "," << cell[1] << " measured with row " << row << ", " << trials << " trials\n";
        for (int k = 0; k < d; ++k)
          t << "b=" << k << "  count " << sim.histogram[k] << "  exact " << sim.exact[k] << "  born " << born[k] << "\n";
        out.write(t.str());
        return kExitOk;
      }
      out.write(json{{"schema_version", kSchemaVersion},
                     {"command", "simulate"},
                     {"d", d},
                     {"state", e.labels()},
                     {"row", row},
                     {"trials", trials},
                     {"seed", seed},
                     {"exact", sim.exact},
                     {"born", born},
                     {"histogram", sim.histogram}});
      return kExitOk;
    }

    if (*bound_cmd) {
      require_d(d);
      json factors = json::array();
      for (const auto& f : factorize(d)) factors.push_back({{"p", f.p}, {"r", f.r}, {"value", f.value}});
      const int ols = macneish_bound(d);
      if (text) {
        out.write("d=" + std::to_string(d) + (prime_power(d) ? " (prime power)" : "") + ": at least " +
                  std::to_string(ols) + " MOLS, at least " + std::to_string(ols + 2) + " MUBs\n");
        return kExitOk;
      }
      out.write(json{{"schema_version", kSchemaVersion},
                     {"command", "bound"},
                     {"d", d},
                     {"factors", factors},
                     {"ols_lower_bound", ols},
                     {"mub_lower_bound", ols + 2},
                     {"prime_power", prime_power(d).has_value()}});
      return kExitOk;
    }

    if (*repro_cmd) {
      const auto results = run_acceptance(only);
      if (results.empty()) throw InvalidArgument("--only matched no criterion");
      bool all = true;
      json rows = json::array();
      std::ostringstream s;
      for (const auto& r : results) {
        const bool ok = result_ok(r);
        all = all && ok;
        s << format_result(r) << '\n';
        rows.push_back({{"id", r.id}, {"key", r.key}, {"passed", ok}, {"detail", r.detail}, {"ms", r.ms}});
      }
      if (text) {
        out.write(s.str());
      } else {
        out.write(json{{"schema_version", kSchemaVersion}, {"command", "reproduce"}, {"all_passed", all}, {"results", rows}});
      }
      for (const auto& r : results)
        if (!result_ok(r)) std::cerr << "failed: " << r.key << '\n';
      return all ? kExitOk : kExitFailed;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotPrimePower& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotPrime& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateBasis& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidSquare& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotIrreducible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
