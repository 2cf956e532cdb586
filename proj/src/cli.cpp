#include "obsgame/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "obsgame/attack.hpp"
#include "obsgame/errors.hpp"
#include "obsgame/game.hpp"
#include "obsgame/normal_form.hpp"
#include "obsgame/scenario.hpp"
#include "obsgame/subspace.hpp"

namespace obsgame {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string path;
  std::optional<std::size_t> horizon;
  std::optional<std::string> depth;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::string out;
  std::vector<std::string> overrides;
};

const Matrix& need(const std::optional<Matrix>& M, const char* what) {
  if (!M) throw ShapeMismatch(std::string("scenario is missing ") + what);
  return *M;
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

std::string shape(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

Scenario load_with_flags(const Options& o) {
  Scenario s = load_scenario(o.path);
  if (o.horizon) s.horizon = *o.horizon;
  if (o.seed) s.seed = *o.seed;
  if (o.budget) s.budget = *o.budget;
  if (o.depth) {
    if (*o.depth == "one-step") s.depth = Depth::one_step;
    else if (*o.depth == "two-step") s.depth = Depth::two_step;
    else throw ParseError("--depth must be one-step or two-step");
  }
  for (const auto& arg : o.overrides) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) throw ParseError("--override expects <epoch>=<file>");
    std::size_t epoch = 0;
    try {
      epoch = std::stoul(arg.substr(0, eq));
    } catch (const std::exception&) {
      throw ParseError("--override epoch must be a positive integer");
    }
    Matrix M = load_matrix(arg.substr(eq + 1));
    auto it = std::find_if(s.overrides.begin(), s.overrides.end(),
                           [&](const auto& p) { return p.first == epoch; });
    if (it != s.overrides.end()) it->second = M;
    else s.overrides.emplace_back(epoch, M);
  }
  return s;
}

void cmd_reduce(const Scenario& s, std::ostream& out, std::ostream& err) {
  const Matrix& A0 = need(s.A0, "A0");
  const Matrix& B1 = need(s.B1, "B1");
  const Matrix& C0 = need(s.C0, "C0");
  const Matrix B2 = s.B2 ? *s.B2 : Matrix(A0.rows(), 0);
  const auto nf = to_normal_form(A0, B1, B2, C0);
  out << "r = (" << join(nf.r) << ")\n";
  out << "s = " << nf.s << "\n";
  out << "N: " << shape(nf.N) << "  E: " << shape(nf.E) << "  R: " << shape(nf.R)
      << "  S: " << shape(nf.S) << "  L: " << shape(nf.L) << "  B2': " << shape(nf.B2prime) << "\n";
  out << "T = " << nf.T_nf << "\n";
  out << "N = " << nf.N << "\nE = " << nf.E << "\nR = " << nf.R << "\nS = " << nf.S
      << "\nL = " << nf.L << "\nB2' = " << nf.B2prime << "\n";
  out << "hypothesis Im B2 in V*: " << (nf.hypothesis_holds ? "holds" : "violated") << "\n";
  if (!nf.hypothesis_holds) {
    err << "warning: HypothesisViolated: Im B2 is not contained in V*(A0, B1, C0)\n";
  }
}

void cmd_vstar(const Scenario& s, std::ostream& out) {
  const auto res = vstar(need(s.A, "A"), need(s.B, "B"), need(s.C, "C"));
  out << "dim V* = " << res.vstar.dim() << "\n";
  out << "iterations = " << res.iterations << "\n";
  out << "iterate dims = " << join(res.iterate_dims) << "\n";
  out << "basis = " << res.vstar.basis() << "\n";
}

void cmd_attack(const Scenario& s, std::ostream& out) {
  const Matrix& A = need(s.A, "A");
  const Matrix& B = need(s.B, "B");
  const Matrix F = s.F0 ? *s.F0 : Matrix(B.cols(), A.cols());
  const std::size_t m = s.outputs();
  const Matrix C = minimize_unobservable(A, B, F, m);
  const Matrix M = closed_loop(A, B, F);
  out << "C = " << C << "\n";
  out << "phi = " << unobservable_dim(C, M) << "\n";
  out << "min unobservable dim = " << min_unobservable_dim(M, m) << "\n";
  out << "max geometric multiplicity = " << max_geometric_multiplicity(M) << "\n";
  out << "candidates = " << attacker_candidates(A, B, F, m).size() << "\n";
}

void cmd_defend(const Scenario& s, std::ostream& out) {
  const Matrix& A = need(s.A, "A");
  const Matrix& B = need(s.B, "B");
  const Matrix& C = need(s.C, "C");
  const auto V = vstar(A, B, C).vstar;
  const Matrix F = friend_matrix(A, B, V);
  out << "dim V* = " << V.dim() << "\n";
  out << "F = " << F << "\n";
  out << "phi = " << unobservable_dim(C, closed_loop(A, B, F)) << "\n";
  out << "zero is a friend = " << (is_friend(A, B, Matrix(B.cols(), A.cols()), V) ? "yes" : "no")
      << "\n";
}

void write_csv(const GameTrace& trace, std::ostream& os) {
  os << "epoch,actor,phi,dim_vstar,max_geo_mult\n";
  for (const auto& st : trace.steps) {
    os << st.epoch << ',' << to_string(st.actor) << ',' << st.phi << ',' << st.dim_vstar << ','
       << (st.max_geo_mult ? std::to_string(*st.max_geo_mult) : std::string("NA")) << '\n';
  }
}

void write_report(const ModeReport& r, std::ostream& os, const char* prefix) {
  auto yn = [](bool b) { return b ? "true" : "false"; };
  os << prefix << "mode=" << to_string(r.mode) << "\n";
  os << prefix << "onset_epoch=" << r.onset_epoch << "\n";
  os << prefix << "amplitude=" << r.amplitude << "\n";
  os << prefix << "loop_period=" << (r.loop_period ? std::to_string(*r.loop_period) : "none") << "\n";
  os << prefix << "theorem1_holds=" << yn(r.theorem1_holds) << "\n";
  os << prefix << "theorem2_holds=" << yn(r.theorem2_holds) << "\n";
  os << prefix << "lemma5_holds=" << yn(r.lemma5_holds) << "\n";
  os << prefix << "corollary2_holds=" << yn(r.corollary2_holds) << "\n";
  os << prefix << "zero_friend_in_tail=" << yn(r.zero_friend_all_tail) << "\n";
}

void cmd_game(const Scenario& s, const Options& o, std::ostream& out) {
  const auto cfg = s.game_config();
  const auto trace = run_game(cfg);
  const auto rep = classify_mode(trace, cfg.A, cfg.B, cfg.m);
  if (o.out.empty()) {
    write_csv(trace, out);
    write_report(rep, out, "# ");
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ParseError("cannot write " + o.out);
  write_csv(trace, f);
  write_report(rep, out, "");
}

void cmd_stackelberg(const Scenario& s, std::ostream& out) {
  const Matrix& A = need(s.A, "A");
  const Matrix& B = need(s.B, "B");
  const Matrix F = s.F0 ? *s.F0 : Matrix(B.cols(), A.cols());
  const auto r = stackelberg_compare(A, B, s.outputs(), F, std::max<std::size_t>(s.budget, 16), s.seed);
  auto yn = [](bool b) { return b ? "true" : "false"; };
  out << "br2x_value=" << r.br2x_value << "\n";
  out << "br2a_value=" << r.br2a_value << "\n";
  out << "br1a_value=" << r.br1a_value << "\n";
  out << "ordering_holds=" << yn(r.ordering_holds) << "\n";
  out << "lemma4_holds=" << yn(r.lemma4_holds) << "\n";
  out << "follower_defender_matches_br1_d=" << yn(r.defender_agreement) << " (" << r.defender_samples
      << " samples)\n";
  out << "follower_attacker_matches_br1_a=" << yn(r.attacker_agreement) << " (" << r.attacker_samples
      << " samples)\n";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ShapeMismatch*>(&e)) return 2;
  return 3;
}

struct SweepRow {
  std::string file;
  std::string line;
  std::string mode;  // empty when the scenario failed
  int code = 0;
};

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(o.path, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw ParseError("cannot read directory " + o.path);
  std::sort(files.begin(), files.end());

  std::vector<std::future<SweepRow>> jobs;
  for (const auto& f : files) {
    jobs.push_back(std::async(std::launch::async, [f, o]() {
      SweepRow row;
      row.file = f.filename().string();
      try {
        Options local = o;
        local.path = f.string();
        const Scenario s = load_with_flags(local);
        const auto cfg = s.game_config();
        const auto trace = run_game(cfg);
        const auto rep = classify_mode(trace, cfg.A, cfg.B, cfg.m);
        row.mode = to_string(rep.mode);
        std::ostringstream os;
        os << row.file << " mode=" << row.mode << " onset=" << rep.onset_epoch
           << " amplitude=" << rep.amplitude
           << " loop=" << (rep.loop_period ? std::to_string(*rep.loop_period) : "none")
           << " theorem1=" << (rep.theorem1_holds ? "true" : "false");
        row.line = os.str();
      } catch (const std::exception& e) {
        row.code = exit_code_for(e);
        row.line = row.file + " error: " + e.what();
      }
      return row;
    }));
  }
  std::map<std::string, std::size_t> counts{{"lock", 0}, {"oscillation", 0}, {"inconclusive", 0}};
  std::size_t failed = 0;
  for (auto& j : jobs) {
    const SweepRow row = j.get();
    if (row.code) {
      err << row.line << "\n";
      ++failed;
      continue;
    }
    out << row.line << "\n";
    ++counts[row.mode];
  }
  out << "total=" << files.size() << " lock=" << counts["lock"]
      << " oscillation=" << counts["oscillation"] << " inconclusive=" << counts["inconclusive"]
      << " failed=" << failed << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Observability attack/defense game toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, const char* what) {
    sub->add_option("path", o.path, what)->required();
  };
  auto add_game_flags = [&](CLI::App* sub) {
    sub->add_option("--horizon", o.horizon, "number of epochs");
    sub->add_option("--depth", o.depth, "one-step or two-step");
    sub->add_option("--seed", o.seed, "seed for randomized searches");
    sub->add_option("--budget", o.budget, "random candidates per defender search");
    sub->add_option("--override", o.overrides, "force a strategy: <epoch>=<matrix file>");
  };

  auto* reduce = app.add_subcommand("reduce", "normal-form reduction of (A0, B1, B2, C0)");
  add_common(reduce, "scenario file");
  auto* vs = app.add_subcommand("vstar", "maximal (A,B)-invariant subspace in Ker C");
  add_common(vs, "scenario file");
  auto* attack = app.add_subcommand("attack", "attacker sensor matrix for (A, B, F0, m)");
  add_common(attack, "scenario file");
  auto* defend = app.add_subcommand("defend", "defender friend matrix for (A, B, C)");
  add_common(defend, "scenario file");
  auto* game = app.add_subcommand("game", "run the epoch game and classify its mode");
  add_common(game, "scenario file");
  add_game_flags(game);
  game->add_option("--out", o.out, "write the CSV trace to this file");
  auto* stack = app.add_subcommand("stackelberg", "compare best responses with Stackelberg sets");
  add_common(stack, "scenario file");
  stack->add_option("--seed", o.seed, "seed for sampling");
  stack->add_option("--budget", o.budget, "random sensor matrices to sample");
  auto* sweep = app.add_subcommand("sweep", "run every scenario in a directory concurrently");
  add_common(sweep, "directory of scenario files");
  add_game_flags(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*sweep) return cmd_sweep(o, out, err);
    const Scenario s = load_with_flags(o);
    if (*reduce) cmd_reduce(s, out, err);
    else if (*vs) cmd_vstar(s, out);
    else if (*attack) cmd_attack(s, out);
    else if (*defend) cmd_defend(s, out);
    else if (*game) cmd_game(s, o, out);
    else if (*stack) cmd_stackelberg(s, out);
    return 0;
  } catch (const NonRationalSpectrum& e) {
    err << "error: NonRationalSpectrum: " << e.what() << "\n";
    return 3;
  } catch (const NoRelativeDegree& e) {
    err << "error: NoRelativeDegree: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return 2;
  } catch (const ShapeMismatch& e) {
    err << "error: ShapeMismatch: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace obsgame
