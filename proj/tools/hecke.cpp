/**
 * @file hecke.cpp
 * @brief Command-line driver: relation-suite verification on the affine side,
 *        cyclotomic quotient construction, and the full Brundan-Kleshchev
 *        block verification, with deterministic JSON reports.
 *
 * Exit codes: 0 = all verifications passed; 1 = a verification failed;
 * 2 = usage or resource error.
 */
#include <CLI11.hpp>

#include <hecke/report_json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

using namespace hecke;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

FieldSpecPtr parse_field(const std::string& name) {
  if (name == "rat") return FieldSpec::rationals();
  if (name.rfind("fp:", 0) == 0) return FieldSpec::prime_field(std::stol(name.substr(3)));
  if (name.rfind("cyclo:", 0) == 0)
    return FieldSpec::cyclotomic(std::stol(name.substr(6)));
  throw ConfigError("unknown field '" + name + "' (expected rat, fp:<p>, cyclo:<m>)");
}

HeckeFlavor parse_flavor(const std::string& kase, const FieldSpecPtr& spec,
                         const std::string& qstr) {
  if (kase == "degenerate") {
    if (!qstr.empty())
      throw ConfigError("--q applies only to the nondegenerate case");
    return HeckeFlavor::degenerate(spec);
  }
  if (kase != "nondegenerate")
    throw ConfigError("--case must be degenerate or nondegenerate");
  if (qstr.empty())
    throw ConfigError("the nondegenerate case requires --q (integer or 'zeta')");
  FieldElem q = (qstr == "zeta") ? FieldElem::zeta(spec)
                                 : FieldElem::from_int(spec, std::stol(qstr));
  return HeckeFlavor::nondegenerate(q);
}

void check_e(const HeckeFlavor& flavor, long requested_e) {
  if (requested_e >= 0 && requested_e != flavor.e())
    throw ConfigError("--e " + std::to_string(requested_e) +
                      " conflicts with the quantum characteristic " +
                      std::to_string(flavor.e()) + " of this configuration");
}

Orbit parse_orbit(const std::string& str, long e, int n) {
  std::vector<long> entries;
  std::stringstream ss(str);
  std::string tok;
  while (std::getline(ss, tok, ',')) entries.push_back(std::stol(tok));
  if (int(entries.size()) != n)
    throw ConfigError("--orbit must list exactly n=" + std::to_string(n) +
                      " residues");
  return orbit_of(ResidueTuple(e, entries));
}

std::map<long, int> parse_lambda(const std::string& str) {
  std::map<long, int> lambda;
  std::stringstream ss(str);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto pos = tok.find(':');
    if (pos == std::string::npos)
      throw ConfigError("--lambda entries must look like residue:multiplicity");
    lambda[std::stol(tok.substr(0, pos))] += std::stoi(tok.substr(pos + 1));
  }
  if (lambda.empty()) throw ConfigError("--lambda must be nonempty");
  return lambda;
}

void emit(const OrderedJson& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file " + out_path);
    os << text;
    std::cout << "report written to " << out_path << "\n";
  }
}

struct Options {
  std::string suite, kase = "degenerate", field = "rat", q, lambda, orbit, out;
  int n = 3;
  long e = -1;
  int trials = 20;
  uint64_t seed = 1;
  int jobs = 1;
  bool timings = false;
};

int cmd_verify(const Options& o) {
  auto spec = parse_field(o.field);
  auto flavor = parse_flavor(o.kase, spec, o.q);
  check_e(flavor, o.e);
  SuiteConfig cfg;
  cfg.flavor = flavor;
  cfg.n = o.n;
  if (!o.orbit.empty()) cfg.orbit = parse_orbit(o.orbit, flavor.e(), o.n);
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep = verify_relation_suite(o.suite, cfg);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  OrderedJson j = suite_report_to_json(rep);
  if (o.timings) j["elapsed_ms"] = ms;
  emit(j, o.out);
  std::cout << "suite " << o.suite << ": " << rep.items.size() << " identities, "
            << (rep.all_passed() ? "all passed" : "FAILURES") << "\n";
  return rep.all_passed() ? 0 : 1;
}

int cmd_block(const Options& o) {
  auto spec = parse_field(o.field);
  auto flavor = parse_flavor(o.kase, spec, o.q);
  check_e(flavor, o.e);
  CycloParams params;
  params.flavor = flavor;
  params.n = o.n;
  params.lambda = parse_lambda(o.lambda);
  auto alg = build_algebra(params);
  auto sys = compute_idempotents(alg);
  emit(block_summary_to_json(alg, sys), o.out);
  std::cout << "dim " << alg->dim() << ", " << sys.eps.size()
            << " idempotent tuples\n";
  return 0;
}

int cmd_bk_check(const Options& o) {
  auto spec = parse_field(o.field);
  auto flavor = parse_flavor(o.kase, spec, o.q);
  check_e(flavor, o.e);
  CycloParams params;
  params.flavor = flavor;
  params.n = o.n;
  params.lambda = parse_lambda(o.lambda);
  Orbit orbit = parse_orbit(o.orbit, flavor.e(), o.n);
  auto t0 = std::chrono::steady_clock::now();
  BKReport rep = bk_check(params, orbit, o.seed);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  emit(bk_report_to_json(rep, o.timings ? ms : -1), o.out);
  if (rep.block_dim == 0)
    std::cout << "degenerate case: zero block (no such residues occur)\n";
  std::cout << "bk-check: block dim " << rep.block_dim << ", closure dim "
            << rep.closure_dim << ", "
            << (rep.all_passed() ? "all verdicts passed" : "FAILURES") << "\n";
  return rep.all_passed() ? 0 : 1;
}

int cmd_selftest() {
  bool ok = true;
  auto line = [&](const std::string& name, bool pass) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "\n";
    ok = ok && pass;
  };
  {
    SuiteConfig cfg;
    cfg.flavor = HeckeFlavor::degenerate(FieldSpec::rationals());
    cfg.n = 3;
    cfg.trials = 10;
    line("demazure suite (rat, n=3)",
         verify_relation_suite("demazure", cfg).all_passed());
  }
  {
    SuiteConfig cfg;
    cfg.flavor = HeckeFlavor::degenerate(FieldSpec::prime_field(3));
    cfg.n = 3;
    cfg.trials = 5;
    line("hecke suite (fp:3, n=3)",
         verify_relation_suite("hecke", cfg).all_passed());
  }
  {
    SuiteConfig cfg;
    cfg.flavor = HeckeFlavor::degenerate(FieldSpec::prime_field(2));
    cfg.n = 2;
    cfg.orbit = orbit_of(ResidueTuple(2, {0, 1}));
    cfg.trials = 4;
    line("klr suite (fp:2, n=2, orbit 0,1)",
         verify_relation_suite("klr", cfg).all_passed());
  }
  {
    CycloParams params;
    params.flavor = HeckeFlavor::degenerate(FieldSpec::prime_field(2));
    params.n = 2;
    params.lambda = {{0, 1}};
    line("bk-check (fp:2, n=2, lambda 0:1, orbit 0,1)",
         bk_check(params, orbit_of(ResidueTuple(2, {0, 1}))).all_passed());
  }
  std::cout << (ok ? "selftest passed" : "selftest FAILED") << "\n";
  return ok ? 0 : 1;
}

void add_common(CLI::App* cmd, Options& o, bool with_q = true) {
  cmd->add_option("--case", o.kase, "degenerate | nondegenerate");
  cmd->add_option("--field", o.field, "rat | fp:<p> | cyclo:<m>");
  if (with_q) cmd->add_option("--q", o.q, "q for the nondegenerate case (integer or 'zeta')");
  cmd->add_option("--n", o.n, "number of strands")->check(CLI::Range(1, 6));
  cmd->add_option("--e", o.e, "expected quantum characteristic (validated)");
  cmd->add_option("--out", o.out, "write the JSON report to this path");
  cmd->add_option("--jobs", o.jobs, "worker threads (reports stay deterministic)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--timings", o.timings, "include elapsed_ms in the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact-arithmetic verification of affine Hecke algebra relations, "
      "cyclotomic quotients, and the Brundan-Kleshchev isomorphism"};
  app.require_subcommand(1);

  Options vo, bo, ko;
  auto* verify = app.add_subcommand("verify", "run a relation suite");
  verify->add_option("--suite", vo.suite,
                     "demazure | hecke | intertwiner | qsym | theta | klr")
      ->required();
  add_common(verify, vo);
  verify->add_option("--orbit", vo.orbit, "orbit representative, e.g. 0,1,2");
  verify->add_option("--trials", vo.trials, "random polynomial trials")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", vo.seed, "PRNG seed");

  auto* block = app.add_subcommand("block", "build a cyclotomic quotient");
  add_common(block, bo);
  block->add_option("--lambda", bo.lambda, "weights, e.g. 0:1,1:2")->required();

  auto* bk = app.add_subcommand("bk-check", "full Brundan-Kleshchev verification");
  add_common(bk, ko);
  bk->add_option("--lambda", ko.lambda, "weights, e.g. 0:1,1:2")->required();
  bk->add_option("--orbit", ko.orbit, "orbit representative, e.g. 0,1")->required();
  bk->add_option("--seed", ko.seed, "PRNG seed");

  app.add_subcommand("selftest", "run a fixed quick battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("verify")) return cmd_verify(vo);
    if (app.got_subcommand("block")) return cmd_block(bo);
    if (app.got_subcommand("bk-check")) return cmd_bk_check(ko);
    return cmd_selftest();
  } catch (const hecke::SuiteUnknown& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hecke::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid numeric argument (" << e.what() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
