// atomiso: command-line front end for definable sets and structures.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "atomiso/backend.hpp"
#include "atomiso/errors.hpp"
#include "atomiso/expr.hpp"
#include "atomiso/fixtures.hpp"
#include "atomiso/iso.hpp"
#include "atomiso/sets.hpp"
#include "atomiso/structure.hpp"

using namespace atomiso;
using nlohmann::ordered_json;

namespace {

enum Exit : int { kOk = 0, kInternal = 1, kUsage = 2, kNegative = 3, kIncomplete = 4, kBudget = 5 };

struct Globals {
  std::string backend = "equality";
  bool backend_given = false;
  bool json = false;
  std::uint64_t budget = std::uint64_t{1} << 16;
  unsigned threads = 1;
};

ordered_json atoms_json(const AtomSet& s) {
  auto out = ordered_json::array();
  for (const auto& a : s) out.push_back(a.str());
  return out;
}

std::string atoms_line(const AtomSet& s) {
  std::string out;
  for (const auto& a : s) out += (out.empty() ? "" : " ") + a.str();
  return out;
}

AtomSet atom_list(const std::string& text, const Backend& b) {
  auto s = parse_atom_list(text);
  for (const auto& a : s) b.validate(a);
  return s;
}

Structure load_for(const std::string& path, const Globals& g) {
  auto s = load_structure(path);
  if (g.backend_given && s.backend_name != g.backend)
    throw ValidationError(path + ": backend is " + s.backend_name + ", not " + g.backend);
  return s;
}

MorphismKind parse_mode(const std::string& m) {
  if (m == "iso") return MorphismKind::Isomorphism;
  if (m == "emb") return MorphismKind::Embedding;
  return MorphismKind::Homomorphism;
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Found:
      return kOk;
    case Verdict::NotFound:
      return kNegative;
    case Verdict::NotFoundIncomplete:
      return kIncomplete;
  }
  return kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Definable sets with atoms and definable isomorphisms of structures"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--backend", g.backend, "Atom theory: equality, dlo or cyclic")
      ->check(CLI::IsMember({"equality", "dlo", "cyclic"}))
      ->each([&](const std::string&) { g.backend_given = true; });
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--budget", g.budget, "Limit on enumerated subsets and candidates")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads for the isomorphism search")->check(CLI::Range(1u, 256u));

  std::string e1, e2, fix, params_text, a_path, b_path, map_path, mode = "iso", name, dir;
  std::size_t n = 0;
  bool naive = false;

  auto* check_eq = app.add_subcommand("check-eq", "Decide whether two expressions denote the same set");
  check_eq->add_option("e1", e1)->required();
  check_eq->add_option("e2", e2)->required();

  auto* orbits = app.add_subcommand("orbits", "Partition a set into orbits");
  orbits->add_option("--fix", fix, "Extra atoms fixed by the automorphisms");
  orbits->add_option("expr", e1)->required();

  auto* support = app.add_subcommand("support", "Least support of an expression");
  support->add_option("expr", e1)->required();

  auto* subsets = app.add_subcommand("subsets", "Enumerate the definable subsets over the given parameters");
  subsets->add_option("--params", params_text, "Parameters allowed besides those of EXPR")->expected(0, 1);
  subsets->add_option("expr", e1)->required();

  auto* rn = app.add_subcommand("rn", "Number of orbits of n-tuples of atoms");
  rn->add_option("n", n)->required()->check(CLI::Range(0, 8));

  auto* iso = app.add_subcommand("iso", "Search for a definable isomorphism between two structures");
  iso->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  iso->add_option("B", b_path)->required()->check(CLI::ExistingFile);
  iso->add_option("--params", params_text, "Parameters allowed besides those of A and B")->expected(0, 1);
  iso->add_option("--mode", mode, "iso, hom or emb")->check(CLI::IsMember({"iso", "hom", "emb"}));
  iso->add_flag("--naive", naive, "Enumerate all unions of orbits instead of matching");

  auto* elim = app.add_subcommand("eliminate", "Turn an isomorphism with parameters into one over --params");
  elim->add_option("--map", map_path, "Function file")->required()->check(CLI::ExistingFile);
  elim->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  elim->add_option("B", b_path)->required()->check(CLI::ExistingFile);
  elim->add_option("--params", params_text, "Parameters the result may use")->expected(0, 1);

  auto* fixture_cmd = app.add_subcommand("fixture", "Write a bundled example to disk");
  fixture_cmd->add_option("name", name)->required()->check(CLI::IsMember(fixture_names()));
  fixture_cmd->add_option("--emit", dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const Backend& b = backend(g.backend);

    if (*check_eq) {
      bool eq = set_equal(b, parse_expr(e1, b), parse_expr(e2, b));
      if (g.json) {
        std::cout << ordered_json{{"equal", eq}}.dump(2) << "\n";
      } else {
        std::cout << (eq ? "equal" : "unequal") << "\n";
      }
      return eq ? kOk : kNegative;
    }

    if (*orbits) {
      auto X = parse_expr(e1, b);
      AtomSet S = X.params();
      S.merge(atom_list(fix, b));
      auto os = orbit_decomposition(b, X, S);
      if (g.json) {
        auto out = ordered_json::array();
        for (const auto& o : os)
          out.push_back({{"orbit", to_string(o.expr())}, {"element", to_string(o.element)}, {"type", to_string(o.type)}});
        std::cout << ordered_json{{"fixed", atoms_json(S)}, {"orbits", out}}.dump(2) << "\n";
      } else {
        for (const auto& o : os) std::cout << to_string(o.expr()) << "\n";
      }
      return kOk;
    }

    if (*support) {
      auto s = least_support(b, parse_expr(e1, b));
      if (g.json) {
        std::cout << ordered_json{{"support", atoms_json(s.atoms)}, {"dimension", s.dimension()}}.dump(2) << "\n";
      } else {
        std::cout << atoms_line(s.atoms) << "\n";
      }
      return kOk;
    }

    if (*subsets) {
      auto X = parse_expr(e1, b);
      AtomSet T = X.params();
      T.merge(atom_list(params_text, b));
      auto subs = definable_subsets(b, X, T, g.budget);
      if (g.json) {
        auto out = ordered_json::array();
        for (const auto& s : subs) out.push_back(to_string(s));
        std::cout << ordered_json{{"params", atoms_json(T)}, {"subsets", out}}.dump(2) << "\n";
      } else {
        for (const auto& s : subs) std::cout << to_string(s) << "\n";
      }
      return kOk;
    }

    if (*rn) {
      auto count = rn_count(b, n);
      if (g.json) {
        std::cout << ordered_json{{"n", n}, {"orbits", count}}.dump(2) << "\n";
      } else {
        std::cout << count << "\n";
      }
      return kOk;
    }

    if (*iso) {
      auto A = load_for(a_path, g);
      auto B = load_for(b_path, g);
      SearchOptions o;
      o.mode = parse_mode(mode);
      o.threads = g.threads;
      o.budget = g.budget;
      o.naive = naive;
      auto c = decide_definable_iso(A, B, atom_list(params_text, A.atoms()), o);
      if (g.json) {
        std::cout << certificate_to_json(c) << "\n";
      } else {
        std::cout << to_string(c.verdict) << "\n";
        if (c.witness) std::cout << to_string(*c.witness) << "\n";
        if (c.caveat) std::cout << "caveat: " << *c.caveat << "\n";
      }
      return exit_for(c.verdict);
    }

    if (*elim) {
      auto A = load_for(a_path, g);
      auto B = load_for(b_path, g);
      auto f = load_function(map_path);
      if (f.backend_name != A.backend_name) throw ValidationError(map_path + ": backend is " + f.backend_name);
      auto st = eliminate_parameters(f.function, A, B, atom_list(params_text, A.atoms()));
      if (g.json) {
        auto steps = ordered_json::array();
        for (const auto& s : st.steps)
          steps.push_back({{"dimension", s.dimension}, {"swapped", s.swapped}, {"length", s.trace.size() - 1},
                           {"piece", to_string(s.piece)}});
        std::cout << ordered_json{{"witness", to_string(st.h.graph)},
                                  {"params", atoms_json(st.T)},
                                  {"support", atoms_json(st.S)},
                                  {"steps", steps}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << to_string(st.h.graph) << "\n";
      }
      return kOk;
    }

    if (*fixture_cmd) {
      for (const auto& p : emit_fixture(name, dir)) std::cout << p.string() << "\n";
      return kOk;
    }
  } catch (const ResourceError& e) {
    std::cerr << "atomiso: budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const InternalError& e) {
    std::cerr << "atomiso: internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "atomiso: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "atomiso: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
