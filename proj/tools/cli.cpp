#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "fsc/error.hpp"
#include "fsc/family.hpp"
#include "fsc/fsc_format.hpp"
#include "fsc/groupsearch.hpp"
#include "fsc/partition_code.hpp"
#include "fsc/simulator.hpp"
#include "fsc/storage.hpp"

namespace fsc::cli {

namespace {

using json = nlohmann::json;

struct Context {
  std::ostream& out;
  std::ostream& err;
};

std::map<std::string, std::string> collection_names(const format::FscDocument& doc) {
  std::map<std::string, std::string> names;
  for (const auto& [name, members] : doc.collections) {
    names.emplace(RepairingCollection(format::collection_spaces(doc, name)).key(), name);
  }
  return names;
}

std::string describe(const format::FscDocument& doc, const std::string& name) {
  std::string s = name + " {";
  const auto& members = doc.collections.at(name);
  for (std::size_t i = 0; i < members.size(); ++i) s += (i ? " " : "") + members[i];
  return s + "}";
}

bool newcomer_valid(const StateSet& a, const RepairingCollection& c, const Subspace& u) {
  if (!find_witness(c, u, a.params())) return false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!a.contains(collection_key_with(c.spaces(), i, u))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string file;
  bool full = false;
  unsigned threads = 0;
  bool json = false;
};

int cmd_verify(const VerifyArgs& args, Context& ctx) {
  const auto doc = format::parse_fsc(format::read_file(args.file));
  const StateSet a = format::to_state_set(doc);
  VerifyOptions options;
  options.full = args.full;
  options.threads = args.threads;
  const auto report = check_repair_property(a, options);
  const auto names = collection_names(doc);

  std::vector<std::string> invalid_states;
  for (const auto& [c, s] : doc.states) {
    if (!newcomer_valid(a, RepairingCollection(format::collection_spaces(doc, c)), doc.subspaces.at(s))) {
      invalid_states.push_back(c + " -> " + s);
    }
  }
  const bool pass = report.passed && invalid_states.empty();
  std::optional<std::string> failing;
  if (report.failing_key) failing = names.at(*report.failing_key);

  if (args.json) {
    json j;
    j["verdict"] = pass ? "pass" : "fail";
    j["states"] = a.size();
    j["failing_collection"] = failing ? json(*failing) : json(nullptr);
    j["reason"] = report.failure_reason;
    j["invalid_states"] = invalid_states;
    j["duplicates_seen"] = report.duplicates_seen;
    ctx.out << j.dump(2) << "\n";
  } else {
    ctx.out << "collections " << a.size() << "\n";
    if (args.full) {
      std::size_t unique = 0;
      for (const auto& c : report.collections) unique += c.valid_newcomers.size() == 1;
      ctx.out << "collections with a unique valid newcomer " << unique << "\n";
    }
    if (report.duplicates_seen) ctx.out << "note: some collections repeat a member\n";
    if (failing) ctx.out << "failing collection " << describe(doc, *failing) << ": " << report.failure_reason << "\n";
    for (const auto& s : invalid_states) ctx.out << "invalid state " << s << "\n";
    ctx.out << "verdict " << (pass ? "pass" : "fail") << "\n";
  }
  return pass ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- family

struct FamilyArgs {
  std::size_t r = 3;
  std::size_t s = 1;
  int q = 2;
  std::size_t steps = 100;
  std::uint64_t seed = 1;
  std::size_t cap = 300000;
  bool skip_closure = false;
  std::string out;
};

int cmd_family(const FamilyArgs& args, Context& ctx) {
  const CodeParams p = family::family_params(args.r, args.s, args.q);
  ctx.out << "m_rs " << p.m << "\n";
  ctx.out << "params m=" << p.m << " n=" << p.n << " k=" << p.k << " r=" << p.r << " alpha=" << p.alpha
          << " beta=" << p.beta << " q=" << p.q << "\n";
  ctx.out << "rate " << p.rate() << "\n";
  ctx.out << "cutset " << family::cutset_bound(p.k, p.r, p.alpha, p.beta) << "\n";

  const auto seed = family::construct_good(args.r, args.s, args.q);
  ctx.out << "seed collection good\n";
  Rng rng(args.seed);
  std::vector<Subspace> current = seed;
  for (std::size_t i = 0; i < args.steps; ++i) {
    const auto choice = family::random_choice(current, args.r, args.s, rng);
    const auto step = family::family_step(current, args.r, args.s, choice);
    current = step.replacements[uniform_index(rng, args.r)];
  }
  ctx.out << "steps " << args.steps << ", every replacement good\n";
  if (args.skip_closure) return kOk;

  const StateSet a = family::family_closure(seed, args.r, args.s, args.cap);
  ctx.out << "closure " << a.size() << " collections\n";
  const auto report = check_repair_property(a);
  ctx.out << "verdict " << (report.passed ? "pass" : "fail") << "\n";
  if (!args.out.empty()) format::write_file(args.out, format::emit_fsc(format::from_state_set(a)));
  return report.passed ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- good-check

struct GoodArgs {
  std::string file;
  std::size_t r = 0;
  std::size_t s = 0;
};

int cmd_good(const GoodArgs& args, Context& ctx) {
  const auto doc = format::parse_fsc(format::read_file(args.file));
  if (doc.collections.empty()) throw std::invalid_argument("file has no collections");
  bool all = true;
  for (const auto& [name, members] : doc.collections) {
    const bool good = family::is_good(format::collection_spaces(doc, name), args.r, args.s);
    ctx.out << name << " " << (good ? "good" : "not good") << "\n";
    all = all && good;
  }
  ctx.out << "verdict " << (all ? "good" : "not good") << "\n";
  return all ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- search

struct SearchArgs {
  std::string file;
  std::size_t group_cap = 1000000;
  std::size_t orbit_cap = 100000;
  std::uint64_t max_nodes = 10000000;
  std::size_t max_results = 0;
  std::string out;
  std::string log;
  bool json = false;
};

int cmd_search(const SearchArgs& args, Context& ctx) {
  const auto doc = format::parse_fsc(format::read_file(args.file));
  if (!doc.params) throw std::invalid_argument("seed file has no params line");
  if (doc.states.empty()) throw std::invalid_argument("seed file has no state line");
  const auto& [cname, sname] = doc.states.front();
  group::SeedState seed{RepairingCollection(format::collection_spaces(doc, cname)), doc.subspaces.at(sname),
                        *doc.params};
  group::SearchOptions options;
  options.limits.group_cap = args.group_cap;
  options.limits.orbit_cap = args.orbit_cap;
  options.limits.max_nodes = args.max_nodes;
  options.max_results = args.max_results;
  const auto outcome = group::ltgc_search(seed, options);

  std::string log;
  for (const auto& line : outcome.log) log += line + "\n";
  if (!args.log.empty()) format::write_file(args.log, log);
  const bool found = !outcome.results.empty();

  if (found && !args.out.empty()) {
    const auto& best = outcome.results.front();
    auto out_doc = format::from_state_set(best.states);
    for (std::size_t i = 0; i < best.group.generators.size(); ++i) {
      out_doc.maps.emplace("G" + std::to_string(i + 1), best.group.generators[i]);
    }
    format::write_file(args.out, format::emit_fsc(out_doc));
  }

  if (args.json) {
    json j;
    j["verdict"] = found ? "found" : "none";
    j["candidate_maps"] = outcome.candidate_maps;
    j["candidate_classes"] = outcome.candidate_classes;
    j["stabilizer_order"] = outcome.stabilizer_order;
    j["stabilizer_transitive"] = outcome.stabilizer_transitive;
    if (found) {
      j["states"] = outcome.results.front().states.size();
      j["group_order"] = outcome.results.front().group.order();
      j["orbit_size"] = outcome.results.front().states.size();
    } else {
      j["states"] = 0;
      j["group_order"] = nullptr;
      j["orbit_size"] = nullptr;
    }
    json results = json::array();
    for (const auto& r : outcome.results) {
      results.push_back({{"group_order", r.group.order()},
                         {"orbit_size", r.states.size()},
                         {"transition", r.transition.fingerprint()},
                         {"candidate_class", r.candidate_class}});
    }
    j["results"] = results;
    j["log"] = outcome.log;
    ctx.out << j.dump(2) << "\n";
  } else {
    ctx.out << log;
    ctx.out << "candidate maps " << outcome.candidate_maps << " (" << outcome.candidate_classes
            << " up to the stabilizer)\n";
    ctx.out << "successful groups " << outcome.results.size() << "\n";
    if (found) {
      ctx.out << "best group_order " << outcome.results.front().group.order() << " orbit_size "
              << outcome.results.front().states.size() << "\n";
    }
    ctx.out << "verdict " << (found ? "found" : "none") << "\n";
  }
  return found ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- partition

struct PartitionArgs {
  bool max_check = false;
  bool uniqueness = false;
  std::string out;
};

int cmd_partition(const PartitionArgs& args, Context& ctx) {
  const auto model = partition::build_partition();
  ctx.out << "partition " << model.w_vectors << " + 8x3 = " << model.w_vectors + 24 << " nonzero vectors\n";
  const StateSet states = partition::code_states();
  VerifyOptions options;
  options.full = true;
  const auto report = check_repair_property(states, options);
  bool unique = report.passed;
  bool distinct = true;
  for (const auto& row : partition::epsilon_table()) {
    RepairingCollection c({model.spaces[row.beta], model.spaces[row.gamma], model.spaces[row.delta]});
    const auto* cr = report.find(c.key());
    unique = unique && cr && cr->valid_newcomers.size() == 1 && cr->valid_newcomers[0] == model.spaces[row.eps];
    distinct = distinct && row.eps != row.beta && row.eps != row.gamma && row.eps != row.delta;
  }
  if (!unique) {
    ctx.out << "verdict fail\n";
    return kVerificationFailed;
  }
  ctx.out << states.size() << " states verified, unique newcomer per collection\n";
  ctx.out << "epsilon " << (distinct ? "differs from" : "coincides with one of") << " beta, gamma, delta in every row\n";
  ctx.out << "beta gamma delta -> epsilon\n";
  for (const auto& row : partition::epsilon_table()) {
    ctx.out << partition::element_name(row.beta) << " " << partition::element_name(row.gamma) << " "
            << partition::element_name(row.delta) << " -> " << partition::element_name(row.eps) << "\n";
  }
  if (!args.out.empty()) format::write_file(args.out, format::emit_fsc(format::from_state_set(states)));
  int code = distinct ? kOk : kVerificationFailed;
  if (args.max_check || args.uniqueness) {
    partition::MaxCollectionOptions mo;
    mo.uniqueness = args.uniqueness;
    const auto r = partition::max_collection_check(mo);
    ctx.out << "maximum collection size " << r.maximum << " (" << r.nodes << " search nodes)\n";
    ctx.out << "the 8 spaces U_b " << (r.u_spaces_attain ? "attain" : "do not attain") << " it\n";
    if (args.uniqueness) {
      ctx.out << "maximum collections " << r.maximum_collections << ", GL(5,2) orbit of {U_b} " << r.orbit_size
              << (r.unique_up_to_gl ? ", all equivalent" : ", NOT all equivalent") << "\n";
    }
    if (r.maximum != 8 || !r.u_spaces_attain || (args.uniqueness && !r.unique_up_to_gl)) code = kVerificationFailed;
  }
  return code;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string file;
  std::string data;
  std::size_t steps = 100;
  std::uint64_t seed = 1;
  std::string transcript;
  bool random_newcomer = false;
  bool sampled = false;
  bool json = false;
};

int cmd_simulate(const SimulateArgs& args, Context& ctx) {
  const auto doc = format::parse_fsc(format::read_file(args.file));
  const StateSet a = format::to_state_set(doc);
  const auto proof = check_repair_property(a);
  if (!proof.passed) throw VerificationFailure("code does not satisfy the repair property: " + proof.failure_reason);
  const Vector x = sim::parse_data(a.field(), a.params().m, args.data);
  sim::SimOptions options;
  options.choice = args.random_newcomer ? sim::NewcomerChoice::Random : sim::NewcomerChoice::Least;
  options.exhaustive_collect = !args.sampled;
  sim::Dss dss(a, proof, x, args.seed, options);
  const auto report = dss.run_random(args.steps);
  if (!args.transcript.empty()) format::write_file(args.transcript, dss.transcript());

  if (args.json) {
    json j;
    j["verdict"] = report.ok() ? "pass" : "fail";
    j["states"] = report.states_visited;
    j["downloads"] = report.downloads_total;
    j["downloads_per_repair"] = a.params().r * a.params().beta;
    j["steps"] = report.steps;
    j["collect_checks"] = report.collect_checks;
    j["integrity_failures"] = report.integrity_failures;
    if (!report.failure.empty()) j["failure"] = report.failure;
    ctx.out << j.dump(2) << "\n";
  } else {
    ctx.out << report.text();
  }
  return report.ok() ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- cutset

struct CutsetArgs {
  std::size_t k = 0, r = 0, alpha = 0, beta = 0;
};

int cmd_cutset(const CutsetArgs& args, Context& ctx) {
  const std::size_t bound = family::cutset_bound(args.k, args.r, args.alpha, args.beta);
  ctx.out << bound << "\n";
  if (args.k == args.r && args.beta == 1 && args.alpha >= 1 && args.alpha - 1 < args.r) {
    const std::size_t s = args.alpha - 1;
    const std::size_t m = family::m_rs(args.r, s);
    ctx.out << "m_rs(" << args.r << "," << s << ") = " << m << (m == bound ? ", equal to the bound" : ", differs")
            << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Functional-repair storage code toolkit"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check the repair property of the collections in a .fsc file");
  v->add_option("file", verify.file, ".fsc file")->required();
  v->add_flag("--full", verify.full, "Collect every valid newcomer");
  v->add_option("--threads", verify.threads, "Worker threads (0 = all cores)");
  v->add_flag("--json", verify.json, "Machine-readable report");

  FamilyArgs fam;
  auto* f = app.add_subcommand("family", "Build the (r,s) family code and verify its closure");
  f->add_option("--r", fam.r)->required();
  f->add_option("--s", fam.s)->required();
  f->add_option("--q", fam.q)->required();
  f->add_option("--steps", fam.steps, "Random family steps from the seed");
  f->add_option("--seed", fam.seed);
  f->add_option("--cap", fam.cap, "Largest closure to enumerate");
  f->add_flag("--skip-closure", fam.skip_closure);
  f->add_option("--out", fam.out, "Write the closure as .fsc");

  GoodArgs good;
  auto* g = app.add_subcommand("good-check", "Check (r,s)-goodness of every collection in a file");
  g->add_option("file", good.file)->required();
  g->add_option("--r", good.r)->required();
  g->add_option("--s", good.s)->required();

  SearchArgs search;
  auto* s = app.add_subcommand("search", "Group-orbit search from the first state of a seed file");
  s->add_option("file", search.file)->required();
  s->add_option("--group-cap", search.group_cap);
  s->add_option("--orbit-cap", search.orbit_cap);
  s->add_option("--max-nodes", search.max_nodes, "Backtracking budget for the map search");
  s->add_option("--max-results", search.max_results, "Stop after this many successes (0 = all)");
  s->add_option("--out", search.out, "Write the best orbit as .fsc");
  s->add_option("--log", search.log, "Write the search log");
  s->add_flag("--json", search.json);

  PartitionArgs part;
  auto* p = app.add_subcommand("partition", "Build and verify the eight-space partition code");
  p->add_flag("--max-check", part.max_check, "Also search for the largest admissible collection");
  p->add_flag("--uniqueness", part.uniqueness, "Also compare all maximum collections with one GL(5,2) orbit");
  p->add_option("--out", part.out, "Write the 56 states as .fsc");

  SimulateArgs simulate;
  auto* m = app.add_subcommand("simulate", "Random fail/repair/collect run over a verified code");
  m->add_option("file", simulate.file)->required();
  m->add_option("--data", simulate.data, "Data vector as base-q digits")->required();
  m->add_option("--steps", simulate.steps);
  m->add_option("--seed", simulate.seed);
  m->add_option("--transcript", simulate.transcript, "Write one block per repair");
  m->add_flag("--random-newcomer", simulate.random_newcomer);
  m->add_flag("--sampled", simulate.sampled, "Collect from one random k-subset per step");
  m->add_flag("--json", simulate.json);

  CutsetArgs cut;
  auto* c = app.add_subcommand("cutset", "Cutset bound sum_{i<k} min(alpha, (r-i) beta)");
  c->add_option("--k", cut.k)->required();
  c->add_option("--r", cut.r)->required();
  c->add_option("--alpha", cut.alpha)->required();
  c->add_option("--beta", cut.beta)->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*v) return cmd_verify(verify, ctx);
    if (*f) return cmd_family(fam, ctx);
    if (*g) return cmd_good(good, ctx);
    if (*s) return cmd_search(search, ctx);
    if (*p) return cmd_partition(part, ctx);
    if (*m) return cmd_simulate(simulate, ctx);
    if (*c) return cmd_cutset(cut, ctx);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace fsc::cli
