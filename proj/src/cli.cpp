#include "hetsim/cli.hpp"

#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "hetsim/closed_forms.hpp"
#include "hetsim/errors.hpp"
#include "hetsim/ioformats.hpp"
#include "hetsim/laws.hpp"
#include "hetsim/logic.hpp"
#include "hetsim/simulation.hpp"

namespace hetsim::cli {

namespace {

struct Caps {
  std::size_t support_cap = EvalOptions{}.support_cap;
  std::uint64_t middle_cap = EvalOptions{}.middle_cap;

  EvalOptions options() const {
    EvalOptions o;
    o.support_cap = support_cap;
    o.middle_cap = middle_cap;
    return o;
  }
};

void add_caps(CLI::App* app, Caps& caps) {
  app->add_option("--support-cap", caps.support_cap, "max argument bits per Kantorovich clause");
  app->add_option("--middle-cap", caps.middle_cap, "max middle terms per composite check");
}

const Removal* find_removal(const SimResult& sim, std::size_t x, std::size_t y) {
  for (const auto& r : sim.removal_log)
    if (r.x == x && r.y == y) return &r;
  return nullptr;
}

void counterexample(std::ostream& out, const std::string& x, const std::string& y, const Removal* r) {
  out << "counterexample\n";
  out << "pair\t" << x << "\t" << y << "\n";
  if (r) {
    out << "round\t" << r->round << "\n";
    out << "clause\t" << (r->converse_side ? "converse: " : "") << r->clause << "\n";
  }
  out << "end\n";
}

// Right-hand system as the connector expects it: weak connectors compare
// against the saturated system.
Coalgebra prepare_right(const ConnectorExpr& e, const Coalgebra& d) {
  if (e.tag() == ConnectorExpr::Tag::weak && !d.kind().labels().contains(kEpsilonLabel)) return weak_saturate(d, e.tau());
  return d;
}

struct GsimArgs {
  std::string left, right, connector, out;
  std::vector<std::string> pair;
  bool bisim = false;
  Caps caps;
};

int cmd_gsim(const GsimArgs& a, std::ostream& out) {
  const Coalgebra c = load_system(a.left);
  const ConnectorExpr e = parse_connector(read_file(a.connector));
  const Coalgebra d = prepare_right(e, load_system(a.right));
  const Connector l = bind(e, c.kind(), d.kind(), a.caps.options());
  const SimResult sim = a.bisim ? greatest_bisimulation(c, d, l) : greatest_simulation(c, d, l);
  const std::string rel = write_relation(sim.relation);
  if (!a.out.empty()) write_file(a.out, rel);
  if (a.pair.empty()) {
    if (a.out.empty()) out << rel;
    return ok;
  }
  const std::size_t x = c.states().index_of(a.pair[0]);
  const std::size_t y = d.states().index_of(a.pair[1]);
  if (sim.relation.contains(x, y)) {
    out << (a.bisim ? "bisimilar" : "similar") << "\t" << a.pair[0] << "\t" << a.pair[1] << "\n";
    return ok;
  }
  out << (a.bisim ? "not bisimilar" : "not similar") << "\t" << a.pair[0] << "\t" << a.pair[1] << "\n";
  counterexample(out, a.pair[0], a.pair[1], find_removal(sim, x, y));
  return fails;
}

struct DistinguishArgs {
  std::string left, right, connector;
  std::vector<std::string> pair;
  Caps caps;
};

int cmd_distinguish(const DistinguishArgs& a, std::ostream& out, std::ostream& err) {
  const ConnectorExpr e = parse_connector(read_file(a.connector));
  if (e.tag() != ConnectorExpr::Tag::kant) {
    err << "distinguish: formulas exist only for Kantorovich connectors, got " << e.str() << "\n";
    return usage;
  }
  const Coalgebra c = load_system(a.left);
  const Coalgebra d = load_system(a.right);
  const Connector l = bind(e, c.kind(), d.kind(), a.caps.options());
  const std::size_t x = c.states().index_of(a.pair[0]);
  const std::size_t y = d.states().index_of(a.pair[1]);
  const SimResult sim = greatest_simulation(c, d, l);
  Distinguisher dist(c, d, *l.lambda(), sim);
  auto f = dist.formula(x, y);
  if (!f) {
    out << "similar\n";
    return ok;
  }
  out << f->str() << "\n";
  counterexample(out, a.pair[0], a.pair[1], find_removal(sim, x, y));
  return fails;
}

struct IocoArgs {
  std::string impl, spec, compat;
  Caps caps;
};

int cmd_ioco(const IocoArgs& a, std::ostream& out, std::ostream& err) {
  const Coalgebra spec = load_system(a.spec);
  if (spec.kind().tag() != KindTag::susp) {
    err << "ioco: specification must be SUSP, got " << spec.kind().str() << "\n";
    return usage;
  }
  const bool compat = !a.compat.empty();
  if (!compat && a.impl.empty()) {
    err << "ioco: --impl is required unless --compat is given\n";
    return usage;
  }
  const Coalgebra other = load_system(compat ? a.compat : a.impl);
  const KindTag want = compat ? KindTag::susp : KindTag::suspie;
  if (other.kind().tag() != want) {
    err << "ioco: " << (compat ? "second specification must be SUSP" : "implementation must be SUSPIE") << ", got "
        << other.kind().str() << "\n";
    return usage;
  }
  const ConnectorExpr e =
      compat ? ConnectorExpr::comp(ConnectorExpr::conv(ConnectorExpr::ioco()), ConnectorExpr::ioco()) : ConnectorExpr::ioco();
  if (spec.size() == 0 || other.size() == 0) {
    err << "ioco: systems need a root state\n";
    return usage;
  }
  const Connector l = bind(e, spec.kind(), other.kind(), a.caps.options());
  const SimResult sim = greatest_simulation(spec, other, l);
  const std::string& x = spec.states()[0];
  const std::string& y = other.states()[0];
  if (sim.relation.contains(0, 0)) {
    out << (compat ? "compatible" : "ioco") << "\t" << x << "\t" << y << "\n";
    out << "relation\n" << write_relation(sim.relation) << "end\n";
    return ok;
  }
  out << (compat ? "incompatible" : "not ioco") << "\t" << x << "\t" << y << "\n";
  counterexample(out, x, y, find_removal(sim, 0, 0));
  return fails;
}

struct SelftestArgs {
  std::uint64_t seed = 1;
  std::size_t cases = laws::LawConfig{}.cases;
  std::size_t max_states = laws::LawConfig{}.max_states;
};

int cmd_selftest(const SelftestArgs& a, std::ostream& out) {
  laws::LawConfig cfg;
  cfg.seed = a.seed;
  cfg.cases = a.cases;
  cfg.max_states = std::max<std::size_t>(a.max_states, 1);
  const auto results = laws::run_all(cfg);
  out << laws::format_report(cfg, results);
  for (const auto& r : results)
    if (!r.passed) return fails;
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heterogeneous simulation checker for finite coalgebras", "hetsim"};
  app.require_subcommand(1);

  GsimArgs g;
  auto* gsim = app.add_subcommand("gsim", "greatest simulation between two systems");
  gsim->add_option("--left", g.left, "left system")->required();
  gsim->add_option("--right", g.right, "right system")->required();
  gsim->add_option("--connector", g.connector, "connector DSL file")->required();
  gsim->add_option("--out", g.out, "write the relation here");
  gsim->add_option("--pair", g.pair, "report membership of one pair")->expected(2);
  gsim->add_flag("--bisim", g.bisim, "greatest bisimulation instead");
  add_caps(gsim, g.caps);

  DistinguishArgs dg;
  auto* dist = app.add_subcommand("distinguish", "distinguishing formula for a pair");
  dist->add_option("--left", dg.left, "left system")->required();
  dist->add_option("--right", dg.right, "right system")->required();
  dist->add_option("--connector-lambda", dg.connector, "Kantorovich connector DSL file")->required();
  dist->add_option("--pair", dg.pair, "left and right state")->expected(2)->required();
  add_caps(dist, dg.caps);

  IocoArgs io;
  auto* ioco = app.add_subcommand("ioco", "input/output conformance of the root states");
  ioco->add_option("--impl", io.impl, "implementation (SUSPIE)");
  ioco->add_option("--spec", io.spec, "specification (SUSP)")->required();
  ioco->add_option("--compat", io.compat, "second specification (SUSP) to check compatibility with");
  add_caps(ioco, io.caps);

  SelftestArgs st;
  auto* self = app.add_subcommand("selftest", "run the seeded law suite");
  self->add_option("--seed", st.seed, "generator seed");
  self->add_option("--cases", st.cases, "random instances per check family");
  self->add_option("--max-states", st.max_states, "carrier bound");

  std::vector<const char*> argv{"hetsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (gsim->parsed()) return cmd_gsim(g, out);
    if (dist->parsed()) return cmd_distinguish(dg, out, err);
    if (ioco->parsed()) return cmd_ioco(io, out, err);
    if (self->parsed()) return cmd_selftest(st, out);
  } catch (const Intractable& e) {
    err << "intractable: " << e.what() << "\n";
    return intractable;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace hetsim::cli
