#include "puzzlelab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "puzzlelab/combinatorics.hpp"
#include "puzzlelab/dissection.hpp"
#include "puzzlelab/error.hpp"
#include "puzzlelab/presets.hpp"
#include "puzzlelab/probability.hpp"
#include "puzzlelab/rng.hpp"
#include "puzzlelab/service.hpp"
#include "puzzlelab/wire.hpp"

namespace puzzlelab::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string shape = "l-tromino";
  std::string model = "single-split";
  std::string format = "text";
  std::string strategy;
  std::string formula;
  std::string start = "0,0";
  std::string snapshot;
  int n = 0;
  int nmax = 5;
  int curve_nmax = 60;
  int rows = 5;
  int cols = 5;
  int port = 8080;
  int jobs = 1;
  int cap = 0;
  bool closed = false;
  std::uint64_t trials = 100000;
  std::uint64_t curve_trials = 10000;
  std::uint64_t seed = 0;
  std::optional<double> threshold;
};

std::string fixed6(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

poly::Polyomino load_shape(const std::string& name) {
  if (auto preset = presets::find(name)) return *preset;
  std::ifstream in(name);
  if (!in) throw Error(ErrorCode::InvalidArgument, "'" + name + "' is neither a preset nor a readable file");
  std::stringstream text;
  text << in.rdbuf();
  return poly::parse_any(text.str());
}

dissect::CutModel load_model(const std::string& text) {
  auto model = dissect::parse_cut_model(text);
  if (!model) throw Error(ErrorCode::InvalidArgument, "unknown model '" + text + "'");
  return *model;
}

prob::Strategy load_strategy(const std::string& text) {
  auto s = prob::parse_strategy(text);
  if (!s) throw Error(ErrorCode::InvalidArgument, "strategy must be switch or stay");
  return *s;
}

std::string strategy_key(prob::Strategy s) { return s == prob::Strategy::Switch ? "switch" : "stay"; }

std::vector<prob::Strategy> strategies(const Options& o) {
  if (o.strategy.empty()) return {prob::Strategy::Switch, prob::Strategy::Stay};
  return {load_strategy(o.strategy)};
}

comb::Square parse_square(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma != std::string::npos) {
      std::size_t used_r = 0;
      std::size_t used_c = 0;
      const std::string r = text.substr(0, comma);
      const std::string c = text.substr(comma + 1);
      const int row = std::stoi(r, &used_r);
      const int col = std::stoi(c, &used_c);
      if (used_r == r.size() && used_c == c.size()) return {row, col};
    }
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::InvalidArgument, "start must be row,col");
}

std::string squares_text(const std::vector<comb::Square>& squares) {
  std::string out;
  for (const comb::Square& s : squares) {
    if (!out.empty()) out += ' ';
    out += "(" + std::to_string(s.row) + "," + std::to_string(s.col) + ")";
  }
  return out;
}

// ---- dissection ----------------------------------------------------------

void dissect_min(const Options& o, std::ostream& out) {
  const poly::Polyomino shape = load_shape(o.shape);
  const dissect::CutModel model = load_model(o.model);
  const dissect::MinCutResult r = dissect::min_cuts(shape, model);
  if (o.format == "json") {
    emit_json(out, {{"command", "dissect min"},
                    {"model", dissect::to_string(model)},
                    {"n", shape.size()},
                    {"shape", wire::polyomino_json(shape)},
                    {"min_cuts", r.count},
                    {"n_minus_1", static_cast<int>(shape.size()) - 1},
                    {"witness", wire::cuts_json(r.witness)}});
    return;
  }
  if (o.format == "csv") {
    out << "step,target,axis,line,lo,hi\n";
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
      const auto& c = r.witness[i];
      out << i + 1 << ',' << (c.target ? wire::piece_label(*c.target) : "GLOBAL") << ','
          << (c.axis == dissect::Axis::Horizontal ? 'H' : 'V') << ',' << c.line << ',' << c.lo << ',' << c.hi << '\n';
    }
    return;
  }
  out << "min_cuts=" << r.count << '\n';
  out << "model=" << dissect::to_string(model) << " n=" << shape.size() << '\n';
  for (const auto& c : r.witness) out << "  " << dissect::describe(c) << '\n';
}

void dissect_greedy(const Options& o, std::ostream& out) {
  const poly::Polyomino shape = load_shape(o.shape);
  const auto cuts = dissect::greedy_dissect(shape);
  const auto final_state = dissect::replay(shape, dissect::CutModel::SingleSplit, cuts);
  if (o.format == "json") {
    emit_json(out, {{"command", "dissect greedy"},
                    {"n", shape.size()},
                    {"shape", wire::polyomino_json(shape)},
                    {"cuts", cuts.size()},
                    {"finished", final_state.finished()},
                    {"sequence", wire::cuts_json(cuts)}});
    return;
  }
  out << "cuts=" << cuts.size() << '\n';
  for (const auto& c : cuts) out << "  " << dissect::describe(c) << '\n';
}

void survey(const Options& o, std::ostream& out) {
  const dissect::CutModel model = load_model(o.model);
  const dissect::MinCutSolver solver;
  const dissect::SurveyReport report = dissect::survey_conjecture(o.nmax, model, solver, o.jobs);
  if (o.format == "csv") {
    out << report.to_csv();
    return;
  }
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"n", r.n},
                      {"shape_key", r.shape_key.text},
                      {"min_cuts", r.min_cuts},
                      {"n_minus_1", r.n_minus_1()},
                      {"matches", r.matches()},
                      {"has_holes", r.has_holes}});
    }
    json per_n = json::array();
    for (const auto& a : report.per_n) {
      per_n.push_back({{"n", a.n},
                       {"shapes", a.shapes},
                       {"flagged", a.flagged},
                       {"min_cuts_low", a.min_cuts_low},
                       {"min_cuts_high", a.min_cuts_high}});
    }
    emit_json(out, {{"command", "survey"},
                    {"model", dissect::to_string(model)},
                    {"nmax", o.nmax},
                    {"flagged", report.flagged()},
                    {"per_n", per_n},
                    {"rows", rows}});
    return;
  }
  out << "model=" << dissect::to_string(model) << " nmax=" << o.nmax << '\n';
  for (const auto& a : report.per_n) {
    out << "n=" << a.n << " shapes=" << a.shapes << " min_cuts=" << a.min_cuts_low << ".." << a.min_cuts_high
        << " flagged=" << a.flagged << '\n';
  }
  for (const auto& r : report.rows) {
    if (!r.matches()) out << "  flag n=" << r.n << ' ' << r.shape_key.text << " min_cuts=" << r.min_cuts << '\n';
  }
  out << "flagged=" << report.flagged() << '\n';
}

// ---- probability ---------------------------------------------------------

void monty_exact(const Options& o, std::ostream& out) {
  const prob::MontyTree tree = prob::monty_tree();
  if (o.format == "json") {
    json leaves = json::array();
    for (const auto& l : tree.leaves) {
      leaves.push_back({{"path", l.path},
                        {"car_door", l.car_door},
                        {"opened_door", l.opened_door},
                        {"probability", l.probability.to_string()},
                        {"if_stay", prob::to_string(l.if_stay)},
                        {"if_switch", prob::to_string(l.if_switch)}});
    }
    json win = json::object();
    for (auto s : strategies(o)) win[strategy_key(s)] = prob::monty_exact(s).to_string();
    emit_json(out, {{"command", "monty exact"}, {"picked_door", tree.picked_door}, {"win", win}, {"leaves", leaves}});
    return;
  }
  if (o.format == "csv") {
    out << "path,probability,if_stay,if_switch\n";
    for (const auto& l : tree.leaves) {
      out << '"' << l.path << "\"," << l.probability.to_string() << ',' << prob::to_string(l.if_stay) << ','
          << prob::to_string(l.if_switch) << '\n';
    }
    return;
  }
  for (auto s : strategies(o)) out << strategy_key(s) << '=' << prob::monty_exact(s).to_string() << '\n';
}

void monty_simulate(const Options& o, std::ostream& out) {
  const prob::TrialConfig cfg{o.trials, o.seed, o.jobs};
  json win = json::object();
  std::string text;
  std::string csv = "strategy,win_rate,exact\n";
  for (auto s : strategies(o)) {
    const double rate = prob::monty_simulate(s, cfg);
    win[strategy_key(s)] = rate;
    text += strategy_key(s) + "=" + fixed6(rate) + "\n";
    csv += strategy_key(s) + "," + fixed6(rate) + "," + prob::monty_exact(s).to_string() + "\n";
  }
  if (o.format == "json") {
    emit_json(out, {{"command", "monty simulate"}, {"trials", o.trials}, {"seed", o.seed}, {"win", win}});
  } else {
    out << (o.format == "csv" ? csv : text);
  }
}

void birthday(const Options& o, std::ostream& out) {
  if (o.threshold) {
    const int exact = prob::birthday_threshold(*o.threshold, prob::BirthdayFormula::Exact);
    const int approx = prob::birthday_threshold(*o.threshold, prob::BirthdayFormula::Approx);
    if (o.format == "json") {
      emit_json(out, {{"command", "birthday threshold"}, {"target", *o.threshold}, {"exact", exact}, {"approx", approx}});
    } else if (o.formula.empty()) {
      out << "exact=" << exact << " approx=" << approx << '\n';
    } else {
      out << (*prob::parse_formula(o.formula) == prob::BirthdayFormula::Exact ? exact : approx) << '\n';
    }
    return;
  }

  if (o.n == 0) {
    // Curve over 1..nmax with a seeded simulation per point.
    if (o.curve_nmax < 1) throw Error(ErrorCode::InvalidN, "nmax must be at least 1");
    json points = json::array();
    std::string csv = "n,exact,approx,simulated\n";
    for (int n = 1; n <= o.curve_nmax; ++n) {
      const double exact = prob::birthday_exact(n);
      const double approx = prob::birthday_approx(n);
      const double sim = prob::birthday_simulate(n, {o.curve_trials, shard_seed(o.seed, static_cast<std::uint64_t>(n)), o.jobs});
      points.push_back({{"n", n}, {"exact", exact}, {"approx", approx}, {"simulated", sim}});
      csv += std::to_string(n) + "," + fixed6(exact) + "," + fixed6(approx) + "," + fixed6(sim) + "\n";
    }
    if (o.format == "json") {
      emit_json(out, {{"command", "birthday curve"}, {"trials", o.curve_trials}, {"seed", o.seed}, {"points", points}});
    } else {
      out << csv;
    }
    return;
  }

  if (!o.formula.empty()) {
    auto formula = prob::parse_formula(o.formula);
    if (!formula) throw Error(ErrorCode::InvalidArgument, "formula must be exact or approx");
    const double p = prob::birthday(o.n, *formula);
    if (o.format == "json") {
      emit_json(out, {{"command", "birthday"},
                      {"n", o.n},
                      {"formula", *formula == prob::BirthdayFormula::Exact ? "exact" : "approx"},
                      {"probability", p}});
    } else {
      out << fixed6(p) << '\n';
    }
    return;
  }
  const double exact = prob::birthday_exact(o.n);
  const double approx = prob::birthday_approx(o.n);
  if (o.format == "json") {
    emit_json(out, {{"command", "birthday"}, {"n", o.n}, {"exact", exact}, {"approx", approx}});
  } else if (o.format == "csv") {
    out << "n,exact,approx\n" << o.n << ',' << fixed6(exact) << ',' << fixed6(approx) << '\n';
  } else {
    out << "exact=" << fixed6(exact) << " approx=" << fixed6(approx) << '\n';
  }
}

// ---- combinatorics -------------------------------------------------------

void hanoi(const Options& o, std::ostream& out) {
  const comb::HanoiSolution s = comb::hanoi(o.n);
  if (o.format == "json") {
    emit_json(out, {{"command", "hanoi"}, {"n", o.n}, {"count", s.count}, {"moves", wire::hanoi_moves_json(s.moves)}});
    return;
  }
  if (o.format == "csv") {
    out << "step,from,to\n";
    for (std::size_t i = 0; i < s.moves.size(); ++i) out << i + 1 << ',' << s.moves[i].from_rod << ',' << s.moves[i].to_rod << '\n';
    return;
  }
  out << "moves=" << s.count << '\n';
  for (const auto& m : s.moves) out << m.from_rod << " -> " << m.to_rod << '\n';
}

void queens(const Options& o, std::ostream& out) {
  const comb::QueensResult r = comb::queens(o.n, comb::kQueensCap, o.jobs);
  if (o.format == "json") {
    json first = r.solutions.empty() ? json(nullptr) : wire::squares_json(r.solutions.front().squares);
    emit_json(out, {{"command", "queens"}, {"n", o.n}, {"count", r.count}, {"first", first}});
    return;
  }
  if (o.format == "csv") {
    out << "solution,row,col\n";
    for (std::size_t i = 0; i < r.solutions.size(); ++i) {
      for (const auto& q : r.solutions[i].squares) out << i + 1 << ',' << q.row << ',' << q.col << '\n';
    }
    return;
  }
  out << "count=" << r.count << '\n';
  if (!r.solutions.empty()) out << "first=" << squares_text(r.solutions.front().squares) << '\n';
}

void knight(const Options& o, std::ostream& out) {
  const comb::Square start = parse_square(o.start);
  const auto tour = comb::knight_tour(o.rows, o.cols, start, o.closed);
  if (o.format == "json") {
    emit_json(out, {{"command", "knight"},
                    {"rows", o.rows},
                    {"cols", o.cols},
                    {"start", {start.row, start.col}},
                    {"closed", o.closed},
                    {"found", tour.has_value()},
                    {"path", tour ? wire::squares_json(tour->path) : json::array()}});
    return;
  }
  if (o.format == "csv") {
    out << "step,row,col\n";
    if (tour) {
      for (std::size_t i = 0; i < tour->path.size(); ++i) out << i + 1 << ',' << tour->path[i].row << ',' << tour->path[i].col << '\n';
    }
    return;
  }
  out << "found=" << (tour ? "true" : "false") << '\n';
  if (!tour) return;
  std::vector<std::vector<int>> order(o.rows, std::vector<int>(o.cols, 0));
  for (std::size_t i = 0; i < tour->path.size(); ++i) order[tour->path[i].row][tour->path[i].col] = static_cast<int>(i) + 1;
  for (const auto& row : order) {
    for (int c = 0; c < o.cols; ++c) out << (c ? " " : "") << std::setw(2) << row[c];
    out << '\n';
  }
}

void domination(const Options& o, std::ostream& out) {
  const comb::Domination d = comb::queens_domination(o.n);
  if (o.format == "json") {
    emit_json(out, {{"command", "domination"}, {"n", o.n}, {"k", d.k}, {"queens", wire::squares_json(d.placement.squares)}});
    return;
  }
  if (o.format == "csv") {
    out << "row,col\n";
    for (const auto& q : d.placement.squares) out << q.row << ',' << q.col << '\n';
    return;
  }
  out << "k=" << d.k << '\n' << "queens=" << squares_text(d.placement.squares) << '\n';
}

void magic(const Options& o, std::ostream& out) {
  const auto squares = comb::magic_squares(o.n == 0 ? 3 : o.n);
  if (o.format == "json") {
    json all = json::array();
    for (const auto& m : squares) all.push_back(m);
    emit_json(out, {{"command", "magic"}, {"order", 3}, {"count", squares.size()}, {"line_sum", 15}, {"squares", all}});
    return;
  }
  if (o.format == "csv") {
    out << "square,r0c0,r0c1,r0c2,r1c0,r1c1,r1c2,r2c0,r2c1,r2c2\n";
    for (std::size_t i = 0; i < squares.size(); ++i) {
      out << i + 1;
      for (const auto& row : squares[i]) {
        for (int v : row) out << ',' << v;
      }
      out << '\n';
    }
    return;
  }
  out << "count=" << squares.size() << '\n';
  for (const auto& m : squares) {
    for (const auto& row : m) out << row[0] << ' ' << row[1] << ' ' << row[2] << '\n';
    out << '\n';
  }
}

void serve(const Options& o, std::ostream& out) {
  service::ServiceConfig config;
  int port = 8080;
  service::apply_environment(config, port);
  if (o.port != 8080) port = o.port;
  if (o.seed != 0) config.seed = o.seed;
  if (o.cap > 0) config.caps.per_piece_cap = o.cap;
  if (!o.snapshot.empty()) config.snapshot_path = o.snapshot;

  service::Service svc(config);
  if (config.snapshot_path && std::ifstream(*config.snapshot_path).good()) svc.load_snapshot(*config.snapshot_path);
  if (config.snapshot_path) svc.start_autosave(std::chrono::seconds(5));

  service::HttpServer server(svc);
  if (server.bind("0.0.0.0", port) < 0) throw Error(ErrorCode::InvalidArgument, "cannot bind port " + std::to_string(port));
  out << "listening on :" << port << std::endl;
  server.run();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  std::function<void(const Options&, std::ostream&)> action;

  CLI::App app{"Polyomino dissection and puzzle labs", "puzzlelab"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"text", "json", "csv"};

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "text, json or csv")->check(CLI::IsMember(formats));
  };
  auto add_shape = [&](CLI::App* cmd) {
    cmd->add_option("--shape", o.shape, "preset name (domino, l-tromino, square-tetromino, u-pentomino, row-N) or file");
  };
  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--model", o.model, "single-split, full-line or global-line");
  };
  auto add_survey = [&](CLI::App* cmd) {
    add_model(cmd);
    cmd->add_option("--nmax", o.nmax, "largest polyomino size");
    cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    add_format(cmd);
    cmd->callback([&] { action = survey; });
  };

  auto* dissect_cmd = app.add_subcommand("dissect", "minimum and greedy dissections");
  dissect_cmd->require_subcommand(1);
  auto* min_cmd = dissect_cmd->add_subcommand("min", "exact minimum cut count with a witness");
  add_shape(min_cmd);
  add_model(min_cmd);
  add_format(min_cmd);
  min_cmd->callback([&] { action = dissect_min; });
  auto* greedy_cmd = dissect_cmd->add_subcommand("greedy", "greedy single-split dissection");
  add_shape(greedy_cmd);
  add_format(greedy_cmd);
  greedy_cmd->callback([&] { action = dissect_greedy; });
  add_survey(dissect_cmd->add_subcommand("survey", "min cuts for every fixed polyomino up to --nmax"));
  add_survey(app.add_subcommand("survey", "same as dissect survey"));

  auto* monty_cmd = app.add_subcommand("monty", "Monty Hall");
  monty_cmd->require_subcommand(1);
  auto* exact_cmd = monty_cmd->add_subcommand("exact", "probability tree");
  exact_cmd->add_option("--strategy", o.strategy, "switch or stay");
  add_format(exact_cmd);
  exact_cmd->callback([&] { action = monty_exact; });
  auto* sim_cmd = monty_cmd->add_subcommand("simulate", "seeded simulation");
  sim_cmd->add_option("--strategy", o.strategy, "switch or stay");
  sim_cmd->add_option("--trials", o.trials, "games per strategy")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", o.seed, "base seed");
  sim_cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  add_format(sim_cmd);
  sim_cmd->callback([&] { action = monty_simulate; });

  auto* bday_cmd = app.add_subcommand("birthday", "birthday problem");
  bday_cmd->add_option("--n", o.n, "group size; omit for a curve over 1..--nmax");
  bday_cmd->add_option("--formula", o.formula, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
  bday_cmd->add_option("--threshold", o.threshold, "smallest n reaching this probability");
  bday_cmd->add_option("--nmax", o.curve_nmax, "curve length");
  bday_cmd->add_option("--trials", o.curve_trials, "simulated groups per curve point")->check(CLI::PositiveNumber);
  bday_cmd->add_option("--seed", o.seed, "base seed");
  bday_cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  add_format(bday_cmd);
  bday_cmd->callback([&] { action = birthday; });

  auto* hanoi_cmd = app.add_subcommand("hanoi", "Tower of Hanoi moves");
  hanoi_cmd->add_option("--n", o.n, "disks")->required();
  add_format(hanoi_cmd);
  hanoi_cmd->callback([&] { action = hanoi; });

  auto* queens_cmd = app.add_subcommand("queens", "N-queens solutions");
  queens_cmd->add_option("--n", o.n, "board size")->required();
  queens_cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  add_format(queens_cmd);
  queens_cmd->callback([&] { action = queens; });

  auto* knight_cmd = app.add_subcommand("knight", "knight's tour");
  knight_cmd->add_option("--rows", o.rows, "board rows");
  knight_cmd->add_option("--cols", o.cols, "board columns");
  knight_cmd->add_option("--start", o.start, "start square row,col");
  knight_cmd->add_flag("--closed", o.closed, "require a closed tour");
  add_format(knight_cmd);
  knight_cmd->callback([&] { action = knight; });

  auto* dom_cmd = app.add_subcommand("domination", "queens domination number");
  dom_cmd->add_option("--n", o.n, "board size")->required();
  add_format(dom_cmd);
  dom_cmd->callback([&] { action = domination; });

  auto* magic_cmd = app.add_subcommand("magic", "3x3 magic squares");
  magic_cmd->add_option("--n", o.n, "order (only 3)");
  add_format(magic_cmd);
  magic_cmd->callback([&] { action = magic; });

  auto* serve_cmd = app.add_subcommand("serve", "start the HTTP service");
  serve_cmd->add_option("--port", o.port, "listen port (env PORT)");
  serve_cmd->add_option("--seed", o.seed, "base seed for Monty sessions (env SEED)");
  serve_cmd->add_option("--snapshot", o.snapshot, "snapshot file (env SNAPSHOT_PATH)");
  serve_cmd->add_option("--cap", o.cap, "largest polyomino accepted (env CAP_N)");
  serve_cmd->callback([&] { action = serve; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 2;
  }

  try {
    action(o, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace puzzlelab::cli
