#pragma once

// Command-line front end. Exit codes:
//   0  verified true / witness found
//   1  verified false / search exhausted without a witness
//   2  usage, parse, IO or precondition error
//   3  budget exceeded

#include <spectile/spectile.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace spectile::cli {

enum ExitCode : int { kTrue = 0, kFalse = 1, kUsage = 2, kBudget = 3 };

struct Flags {
  std::string group;
  std::string box;
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool canonical = false;
  bool json = false;
  std::uint64_t k = 2;
  std::vector<std::string> files;
};

namespace detail {

using nlohmann::json;

inline std::string coords_text(const GroupElement& g) {
  std::string s;
  for (std::size_t i = 0; i < g.coords.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(g.coords[i]);
  }
  return s;
}

inline json points_json(const PointSet& s) {
  json arr = json::array();
  for (const auto& g : s) arr.push_back(g.coords);
  return arr;
}

class Emitter {
 public:
  Emitter(const Flags& flags, std::ostream& out) : json_mode_(flags.json), out_(out) {}

  void line(const std::string& text) {
    if (!json_mode_) out_ << text << '\n';
  }
  json& doc() { return doc_; }
  void finish() {
    if (json_mode_) out_ << doc_.dump(2) << '\n';
  }

 private:
  bool json_mode_;
  std::ostream& out_;
  json doc_ = json::object();
};

inline void require_files(const Flags& f, std::size_t n, const char* usage) {
  if (f.files.size() != n) throw ParseError(std::string("usage: ") + usage);
}

// Group of a set file, reconciled with --group when both are present.
inline GroupSpec resolve_group(const Flags& f, const SetFile& file, const std::string& path) {
  if (f.group.empty()) return file.spec;
  const auto g = parse_group_spec(f.group);
  if (!(g == file.spec)) {
    throw ParseError(path + " declares group " + file.spec.to_string() + " but --group is " + g.to_string());
  }
  return g;
}

inline PointSet load_group_set(const Flags& f, const std::string& path) {
  const auto file = read_set_file(path);
  resolve_group(f, file, path);
  return file.to_point_set();
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline void print_set_block(Emitter& em, const PointSet& s) {
  std::istringstream block(serialize(SetFile::from(s)));
  for (std::string l; std::getline(block, l);) em.line(l);
}

inline SearchOptions search_options(const Flags& f) {
  SearchOptions o;
  if (f.budget) o.node_budget = *f.budget;
  o.threads = f.threads;
  o.canonical = f.canonical;
  return o;
}

inline int cmd_check_tiling(const Flags& f, std::ostream& out) {
  require_files(f, 2, "check-tiling [--group G] A B");
  const auto A = load_group_set(f, f.files[0]);
  const auto B = load_group_set(f, f.files[1]);
  require_same_ambient(A, B);
  const auto check = verify_tiling(A, B);
  Emitter em(f, out);
  em.doc() = {{"command", "check-tiling"}, {"group", A.ambient().to_string()}, {"tiling", check.ok()}};
  if (check.ok()) {
    em.line("tiling=yes |A|=" + std::to_string(A.size()) + " |B|=" + std::to_string(B.size()) +
            " |G|=" + std::to_string(A.ambient().order()));
  } else {
    em.line("tiling=no g=" + coords_text(*check.failing_element) + " count=" + std::to_string(check.failing_count));
    em.doc()["g"] = check.failing_element->coords;
    em.doc()["count"] = check.failing_count;
  }
  em.finish();
  return check.ok() ? kTrue : kFalse;
}

inline int cmd_check_spectral(const Flags& f, std::ostream& out) {
  require_files(f, 2, "check-spectral [--group G] S LAMBDA");
  const auto S = load_group_set(f, f.files[0]);
  const auto L = load_group_set(f, f.files[1]);
  require_same_ambient(S, L);
  const auto check = verify_spectral_pair(S, L);
  Emitter em(f, out);
  em.doc() = {{"command", "check-spectral"}, {"group", S.ambient().to_string()}, {"spectral_pair", check.ok()}};
  if (check.ok()) {
    em.line("spectral-pair=yes checked_pairs=" + std::to_string(check.certificate->checked_pairs));
    em.doc()["checked_pairs"] = check.certificate->checked_pairs;
  } else {
    em.line("spectral-pair=no reason=" + check.failure);
    em.doc()["reason"] = check.failure;
  }
  em.finish();
  return check.ok() ? kTrue : kFalse;
}

inline int cmd_find_spectrum(const Flags& f, std::ostream& out) {
  require_files(f, 1, "find-spectrum [--group G] S");
  const auto S = load_group_set(f, f.files[0]);
  const auto result = find_spectrum(S, search_options(f));
  Emitter em(f, out);
  em.doc() = {{"command", "find-spectrum"}, {"group", S.ambient().to_string()}, {"status", to_string(result.status)}};
  switch (result.status) {
    case SearchStatus::found:
      em.line("spectrum found size=" + std::to_string(result.certificate->spectrum.size()));
      print_set_block(em, result.certificate->spectrum);
      em.doc()["spectrum"] = points_json(result.certificate->spectrum);
      em.finish();
      return kTrue;
    case SearchStatus::exhausted_none:
      em.line("no spectrum (exhaustive)");
      em.finish();
      return kFalse;
    case SearchStatus::budget_exceeded:
      em.line("budget exceeded: " + result.detail);
      em.doc()["detail"] = result.detail;
      em.finish();
      return kBudget;
  }
  return kUsage;
}

inline int cmd_find_complement(const Flags& f, std::ostream& out) {
  require_files(f, 1, "find-complement [--group G] A");
  const auto A = load_group_set(f, f.files[0]);
  const auto result = find_complement(A, search_options(f));
  Emitter em(f, out);
  em.doc() = {{"command", "find-complement"}, {"group", A.ambient().to_string()}, {"status", to_string(result.status)}};
  switch (result.status) {
    case SearchStatus::found:
      em.line("complement found size=" + std::to_string(result.certificate->complement.size()));
      print_set_block(em, result.certificate->complement);
      em.doc()["complement"] = points_json(result.certificate->complement);
      em.finish();
      return kTrue;
    case SearchStatus::exhausted_none:
      em.line("no complement (exhaustive)");
      em.finish();
      return kFalse;
    case SearchStatus::budget_exceeded:
      em.line("budget exceeded: " + result.detail);
      em.doc()["detail"] = result.detail;
      em.finish();
      return kBudget;
  }
  return kUsage;
}

// Base group G for a file living in G x G: --group, or the file's header
// split into two equal halves.
inline GroupSpec base_of_square(const Flags& f, const SetFile& file, const std::string& path) {
  if (!f.group.empty()) {
    const auto G = parse_group_spec(f.group);
    if (!(product_group(G, G) == file.spec)) {
      throw ParseError(path + " declares group " + file.spec.to_string() + ", expected " +
                       product_group(G, G).to_string() + " for --group " + G.to_string());
    }
    return G;
  }
  const auto& o = file.spec.orders();
  const auto half = o.size() / 2;
  if (o.size() % 2 != 0 || !std::equal(o.begin(), o.begin() + static_cast<std::ptrdiff_t>(half),
                                       o.begin() + static_cast<std::ptrdiff_t>(half))) {
    throw ParseError(path + ": cannot read group " + file.spec.to_string() + " as G x G; pass --group");
  }
  return GroupSpec({o.begin(), o.begin() + static_cast<std::ptrdiff_t>(half)});
}

inline int cmd_diagonal_check(const Flags& f, std::ostream& out) {
  require_files(f, 1, "diagonal-check [--group G] P");
  const auto file = read_set_file(f.files[0]);
  const auto G = base_of_square(f, file, f.files[0]);
  const auto P = file.to_point_set();
  const auto budget = f.budget.value_or(kDefaultDirectPairBudget);
  const auto v = check_thm_item1(G, P, budget);
  const bool transversal = antidiagonal_transversal_check(G, P, budget);
  const bool agree = v.agree && transversal == v.multiset;
  Emitter em(f, out);
  const std::string pairwise = v.pairwise ? yes_no(*v.pairwise) : "skipped";
  em.line("pairwise=" + pairwise + " multiset=" + yes_no(v.multiset) + " transversal=" + yes_no(transversal) +
          " agree=" + yes_no(agree) + (v.theorem_shortcut ? " note=theorem-shortcut" : ""));
  em.doc() = {{"command", "diagonal-check"}, {"group", G.to_string()},   {"pairwise", pairwise},
              {"multiset", v.multiset},      {"transversal", transversal}, {"agree", agree},
              {"theorem_shortcut", v.theorem_shortcut}};
  em.finish();
  return v.multiset && agree ? kTrue : kFalse;
}

inline int cmd_product_diagonal(const Flags& f, std::ostream& out) {
  require_files(f, 2, "product-diagonal [--group G] A B");
  const auto A = load_group_set(f, f.files[0]);
  const auto B = load_group_set(f, f.files[1]);
  const auto v = product_with_diagonal(A, B);
  Emitter em(f, out);
  em.line("tiling=" + yes_no(v.tiling) + " product-spectral=" + yes_no(v.product_spectral) + " agree=" + yes_no(v.agree));
  em.doc() = {{"command", "product-diagonal"}, {"group", A.ambient().to_string()}, {"tiling", v.tiling},
              {"product_spectral", v.product_spectral}, {"agree", v.agree}};
  em.finish();
  return v.tiling && v.product_spectral && v.agree ? kTrue : kFalse;
}

inline int cmd_harness(const Flags& f, std::ostream& out) {
  require_files(f, 0, "harness --group G [--budget N] [--seed S] [--threads T]");
  if (f.group.empty()) throw ParseError("harness needs --group");
  const auto G = parse_group_spec(f.group);
  HarnessOptions opts;
  if (f.budget) opts.budget = *f.budget;
  opts.seed = f.seed;
  opts.threads = f.threads;
  const auto report = exhaustive_theorem_harness(G, opts);
  Emitter em(f, out);
  if (!f.json) out << report.render();
  em.doc() = {{"command", "harness"},
              {"group", G.to_string()},
              {"seed", f.seed},
              {"mode", report.exhaustive ? "exhaustive" : "sampled"},
              {"checked", report.checked},
              {"disagreements", report.disagreements},
              {"splits_mode", report.splits_exhaustive ? "exhaustive" : "sampled"},
              {"splits_checked", report.split_checked},
              {"splits_disagreements", report.split_disagreements},
              {"lines", report.lines}};
  em.finish();
  return report.clean() ? kTrue : kFalse;
}

inline int cmd_pipeline(const Flags& f, std::ostream& out) {
  require_files(f, 2, "pipeline [--box DIMS] A B [-k K]");
  const auto fa = read_set_file(f.files[0]);
  const auto fb = read_set_file(f.files[1]);
  if (!f.box.empty()) {
    const auto dims = parse_group_spec(f.box);
    for (const auto* file : {&fa, &fb}) {
      if (!(file->spec == dims)) throw ParseError("box file declares " + file->spec.to_string() + " but --box is " + dims.to_string());
    }
  }
  PipelineOptions opts;
  if (f.budget) opts.verify_pair_budget = *f.budget;
  const auto report = tiling_product_pipeline(fa.to_boxed_set(), fb.to_boxed_set(), f.k, opts);
  Emitter em(f, out);
  if (!f.json) out << report.render();
  auto steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"step", s.name}, {"status", to_string(s.status)}, {"detail", s.detail}});
  }
  em.doc() = {{"command", "pipeline"}, {"header", report.header}, {"steps", steps}, {"anomaly", report.anomaly},
              {"passed", report.passed()}};
  em.finish();
  return report.passed() ? kTrue : kFalse;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification and search of spectral sets and tilings in finite abelian groups"};
  app.require_subcommand(1);
  Flags flags;

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const Flags&, std::ostream&);
  };
  const Command commands[] = {
      {"check-tiling", "verify that A (+) B = G", detail::cmd_check_tiling},
      {"check-spectral", "verify that (S, LAMBDA) is a spectral pair", detail::cmd_check_spectral},
      {"find-spectrum", "search for a spectrum of S", detail::cmd_find_spectrum},
      {"find-complement", "search for a tiling complement of A", detail::cmd_find_complement},
      {"diagonal-check", "compare both criteria for (P, diagonal) in G x G", detail::cmd_diagonal_check},
      {"product-diagonal", "tiling of (A, B) versus spectrality of (A x B, diagonal)", detail::cmd_product_diagonal},
      {"harness", "cross-check the diagonal criteria over many instances", detail::cmd_harness},
      {"pipeline", "tiling -> product spectrality -> lifting report", detail::cmd_pipeline},
  };
  int (*selected)(const Flags&, std::ostream&) = nullptr;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--group", flags.group, "group spec, e.g. 24^3 or 2x3");
    sub->add_option("--box", flags.box, "box dimensions for pipeline files");
    sub->add_option("--budget", flags.budget, "search nodes / harness samples / pair budget");
    sub->add_option("--seed", flags.seed, "seed for sampled harness runs");
    sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--canonical", flags.canonical, "lexicographically least witness");
    sub->add_flag("--json", flags.json, "machine-readable output");
    if (std::string(c.name) == "pipeline") sub->add_option("-k", flags.k, "lifting factor");
    sub->add_option("files", flags.files, "set files");
    sub->callback([&selected, fn = c.fn] { selected = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  try {
    return selected(flags, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace spectile::cli
