// Command-line interface: closed-form values, constructive strategies,
// exact evaluation, the double-oracle solver, a Monte-Carlo cross-check,
// property-suite verification, and the published-example reproduction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "boxsearch/json_io.hpp"

using namespace boxsearch;

namespace {

struct Opts {
  std::string instance_path;
  bool use_float = false;
  bool exact_display = false;
  bool want_json = false;
  std::string csv_path;
};

template <typename T>
std::string show(const T& v, const Opts& o) {
  if constexpr (num_traits<T>::exact) {
    if (o.exact_display) return rat_to_string(v);
  }
  return format_signif(to_double(v));
}

std::string alloc_str(const Allocation& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

template <typename T>
Instance<T> get_instance(const Opts& o) {
  if (o.instance_path.empty()) throw invalid_instance_error("--instance FILE is required");
  return instance_from_json<T>(load_json_file(o.instance_path));
}

void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
      if (quote) {
        out << '"';
        for (char c : row[i]) {
          if (c == '"') out << '"';
          out << c;
        }
        out << '"';
      } else {
        out << row[i];
      }
    }
    out << "\n";
  }
}

template <typename T>
bool all_equal_costs(const std::vector<T>& costs) {
  for (const T& c : costs)
    if (c != costs[0]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// value
// ---------------------------------------------------------------------------

template <typename T>
struct ClosedForm {
  bool ok = false;
  T value{};
  std::string formula;
  std::string why_not;
};

template <typename T>
ClosedForm<T> closed_form_value(const Instance<T>& inst) {
  ClosedForm<T> out;
  const int n = static_cast<int>(inst.costs.size());
  const int k = inst.balls;
  const auto order = decreasing_order(inst.costs);
  const auto sorted = permute_costs(inst.costs, order);
  if (inst.variant == kMultiCost) {
    if (n == 1) {
      out = {true, T(k) * inst.costs[0], "k*c1", ""};
    } else if (all_equal_costs(inst.costs)) {
      out = {true, inst.costs[0] * value_equal_cost<T>(n, k), "c*(n+k)*(1 - 1/(k+1))", ""};
    } else if (n == 2) {
      auto thr = cutoff_b_multi_n2(sorted[0], sorted[1], k);
      out = {true, thr.value, "(k-b)*c1 + U([2],b) with b=" + std::to_string(thr.b), ""};
    } else {
      out.why_not = "the multi-look cost game with n >= 3 unequal costs has no closed form";
    }
  } else if (inst.variant == kMultiRegret) {
    out = {true, value_multi_regret(inst.costs, k), "T_1 - T_{k+1}/T_k", ""};
  } else if (inst.variant == kSingleCost) {
    if (k == n) {
      T sum(0);
      for (const T& c : inst.costs) sum += c;
      out = {true, sum, "c1 + ... + cn (every box must be opened)", ""};
    } else if (k == 1) {
      out = {true, value_multi_cost_equalizing(inst.costs, 1),
             "T_2/T_1 (k = 1 coincides with the multi-look game)", ""};
    } else {
      out.why_not = "the single-look cost game with 1 < k < n has no closed form";
    }
  } else {  // single-regret
    if (k == n) {
      out = {true, T(0), "0 (no empty box can be opened)", ""};
    } else if (k == 1) {
      out = {true, value_single_regret(inst.costs, 1),
             "S_2/S_1 (k = 1 coincides with the multi-look regret game)", ""};
    } else if (k == n - 1) {
      auto thr = cutoff_b_single(sorted);
      out = {true, thr.value, "W([b],b-1) with b=" + std::to_string(thr.b), ""};
    } else {
      out.why_not = "the single-look regret game with 1 < k < n-1 has no closed form";
    }
  }
  if (!out.ok) out.why_not += "; use `boxsearch solve`";
  return out;
}

template <typename T>
int cmd_value(const Opts& o) {
  Instance<T> inst = get_instance<T>(o);
  ClosedForm<T> cf = closed_form_value(inst);
  if (!cf.ok) {
    std::cerr << "error: " << cf.why_not << "\n";
    return 2;
  }
  if (o.want_json) {
    json out{{"command", "value"},        {"variant", to_string(inst.variant)},
             {"boxes", inst.costs.size()}, {"balls", inst.balls},
             {"value", show(cf.value, o)}, {"approx", to_double(cf.value)},
             {"formula", cf.formula}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "variant: " << to_string(inst.variant) << ", boxes: " << inst.costs.size()
              << ", balls: " << inst.balls << "\n"
              << "value: " << show(cf.value, o) << "\n"
              << "formula: " << cf.formula << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// strategy
// ---------------------------------------------------------------------------

template <typename T>
int cmd_strategy(const Opts& o) {
  Instance<T> inst = get_instance<T>(o);
  const int n = static_cast<int>(inst.costs.size());
  const int k = inst.balls;
  const auto order = decreasing_order(inst.costs);
  const auto sorted = permute_costs(inst.costs, order);

  HiderMixed<T> hider;
  json searcher;
  std::vector<std::string> notes;

  auto seq_all = [&](int reps) {
    json seq = json::array();
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < reps; ++t) seq.push_back(i + 1);
    return seq;
  };

  if (inst.variant == kMultiCost) {
    if (n == 1) {
      hider = hider_point_mass<T>(Allocation{k});
      searcher = json{{"kind", "sequence"}, {"sequence", seq_all(k)}};
    } else if (all_equal_costs(inst.costs)) {
      hider = hider_equalizing_multi(inst.costs, k);
      searcher = json{{"kind", "equal-cost"},
                      {"description", "recursive uniform-box commitment policy"}};
    } else if (n == 2) {
      hider = relabel_hider(hider_set_aside_n2(sorted[0], sorted[1], k), order);
      searcher = json{{"kind", "two-box"}, {"description", "threshold commitment policy"}};
    } else {
      std::cerr << "error: no constructive optimum is known for the multi-look cost game with "
                   "n >= 3 unequal costs; use `boxsearch solve`\n";
      return 2;
    }
  } else if (inst.variant == kMultiRegret) {
    hider = hider_equalizing_multi(inst.costs, k);
    searcher = json{{"kind", "regret-search"},
                    {"description", "recursive set-aside policy driven by the column weights"}};
    if (k == 1) notes.push_back("an optimal normal strategy is available: kind \"normal-k1\"");
    if (k == 2) notes.push_back("an optimal normal strategy is available: kind \"normal-k2\"");
  } else if (inst.variant == kSingleCost) {
    if (k == n) {
      hider = hider_point_mass<T>(Allocation(n, 1));
      searcher = json{{"kind", "sequence"}, {"sequence", seq_all(1)}};
    } else if (k == 1 && n == 2) {
      hider = hider_equalizing_single(inst.costs, 1);
      searcher = json{{"kind", "two-box"}, {"description", "threshold commitment policy"}};
    } else {
      std::cerr << "error: no constructive optimum is known for the single-look cost game with "
                   "1 < k < n; use `boxsearch solve`\n";
      return 2;
    }
  } else {  // single-regret
    if (k == n) {
      hider = hider_point_mass<T>(Allocation(n, 1));
      searcher = json{{"kind", "sequence"}, {"sequence", seq_all(1)}};
    } else if (k == n - 1) {
      hider = relabel_hider(hider_prefill_single(sorted), order);
      searcher = json{{"kind", "single-regret"},
                      {"description", "prefill sweep then saved-box mixture"}};
    } else if (k == 1) {
      hider = hider_equalizing_single(inst.costs, 1);
      searcher = json{{"kind", "regret-search"},
                      {"description", "recursive set-aside policy (k = 1 is single-look legal)"}};
    } else {
      std::cerr << "error: no constructive optimum is known for the single-look regret game "
                   "with 1 < k < n-1; use `boxsearch solve`\n";
      return 2;
    }
  }

  ClosedForm<T> cf = closed_form_value(inst);
  if (o.want_json) {
    json out{{"command", "strategy"},
             {"variant", to_string(inst.variant)},
             {"hider", hider_to_json(hider, o.exact_display)},
             {"searcher", searcher}};
    if (cf.ok) {
      out["value"] = show(cf.value, o);
      out["approx"] = to_double(cf.value);
    }
    if (!notes.empty()) out["notes"] = notes;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "variant: " << to_string(inst.variant) << "\n";
    if (cf.ok) std::cout << "value: " << show(cf.value, o) << "\n";
    std::cout << "hider: " << hider.description << "\n";
    for (const auto& [x, p] : hider.support)
      std::cout << "  " << alloc_str(x) << "  p = " << show(p, o) << "\n";
    std::cout << "searcher: " << searcher["kind"].get<std::string>();
    if (searcher.contains("description"))
      std::cout << " — " << searcher["description"].get<std::string>();
    std::cout << "\n";
    for (const auto& s : notes) std::cout << "note: " << s << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

Allocation parse_allocation(const std::string& text) {
  Allocation x;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    x.push_back(std::stoi(item));
  }
  return x;
}

template <typename T>
void check_allocation(const Allocation& x, const Instance<T>& inst) {
  const int cap = inst.variant.look == LookMode::single ? 1 : inst.balls;
  if (static_cast<int>(x.size()) != static_cast<int>(inst.costs.size()))
    throw invalid_instance_error("allocation length does not match the number of boxes");
  for (int b : x)
    if (b < 0 || b > cap) throw invalid_instance_error("allocation entry out of range");
  if (total_balls(x) != inst.balls)
    throw invalid_instance_error("allocation does not place exactly k balls");
}

template <typename T>
int cmd_evaluate(const Opts& o, const std::string& strategy_path, const std::string& alloc_text,
                 const std::string& hider_path) {
  Instance<T> inst = get_instance<T>(o);
  if (strategy_path.empty()) throw invalid_instance_error("--strategy FILE is required");
  if (alloc_text.empty() == hider_path.empty())
    throw invalid_instance_error("exactly one of --allocation or --hider is required");
  SearcherPolicy<T> policy = searcher_from_json<T>(load_json_file(strategy_path), inst);

  json out{{"command", "evaluate"}, {"variant", to_string(inst.variant)},
           {"strategy", policy.description}};
  T value;
  long long nodes = 0;
  if (!alloc_text.empty()) {
    Allocation x = parse_allocation(alloc_text);
    check_allocation(x, inst);
    auto r = evaluate(policy, x, inst.costs, inst.variant);
    value = r.expected_payoff;
    nodes = r.node_count;
    out["allocation"] = x;
  } else {
    HiderMixed<T> hider = hider_from_json<T>(load_json_file(hider_path), inst);
    auto r = evaluate_mixed(policy, hider, inst.costs, inst.variant);
    value = r.expected_payoff;
    nodes = r.node_count;
    json breakdown = json::array();
    for (const auto& [x, v] : r.breakdown)
      breakdown.push_back(json{{"allocation", x},
                               {"payoff", number_to_json(v, o.exact_display)},
                               {"payoff_approx", to_double(v)}});
    out["breakdown"] = breakdown;
  }
  out["expected_payoff"] = show(value, o);
  out["approx"] = to_double(value);
  out["node_count"] = nodes;
  if (o.want_json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "strategy: " << policy.description << "\n"
              << "expected payoff: " << show(value, o) << "\n"
              << "evaluation nodes: " << nodes << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

template <typename T>
int cmd_solve(const Opts& o, const std::string& eps_text, long long budget, bool normal_only) {
  Instance<T> inst = get_instance<T>(o);
  std::vector<std::vector<std::string>> csv;

  if (normal_only) {
    if (inst.variant != kMultiRegret)
      throw invalid_instance_error("--normal-only applies to the multi-regret variant only");
    NormalOnlyResult<T> r = solve_normal_only(inst.costs, inst.balls);
    T closed = value_multi_regret(inst.costs, inst.balls);
    if (o.want_json) {
      json out{{"command", "solve"},
               {"mode", "normal-only"},
               {"value", show(r.value, o)},
               {"approx", to_double(r.value)},
               {"sequences", r.sequences},
               {"adaptive_value", show(closed, o)},
               {"hider", hider_to_json(r.hider, o.exact_display)},
               {"searcher", normal_to_json(r.searcher, o.exact_display)}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "normal-strategy game value: " << show(r.value, o) << " (over "
                << r.sequences << " sequences)\n"
                << "adaptive game value:        " << show(closed, o) << "\n";
      for (const auto& [seq, w] : r.searcher.mixture) {
        std::cout << "  p = " << show(w, o) << "  sequence:";
        for (int b : seq) std::cout << " " << b + 1;
        std::cout << "\n";
      }
    }
    csv.push_back({"allocation", "probability"});
    for (const auto& [x, p] : r.hider.support)
      csv.push_back({alloc_str(x), format_signif(to_double(p), 17)});
    write_csv(o.csv_path, csv);
    return 0;
  }

  SolveOptions<T> opts;
  opts.state_budget = budget;
  if (!eps_text.empty()) {
    if constexpr (num_traits<T>::exact)
      opts.eps = from_rat<T>(parse_decimal(eps_text));
    else
      opts.eps = std::stod(eps_text);
  }
  SolveResult<T> sol = solve_game(inst.costs, inst.balls, inst.variant, opts);
  auto rep = check_equalizing_property(sol.hider, inst.costs);

  if (o.want_json) {
    json searcher = json::array();
    for (const auto& [dt, w] : sol.searcher) {
      json entry = decision_tree_to_json(dt);
      entry["probability"] = number_to_json(w, o.exact_display);
      entry["probability_approx"] = to_double(w);
      searcher.push_back(std::move(entry));
    }
    json out{{"command", "solve"},
             {"variant", to_string(inst.variant)},
             {"value", show(sol.value, o)},
             {"approx", to_double(sol.value)},
             {"iterations", sol.iterations},
             {"columns", sol.columns},
             {"duality_gap", to_double(sol.duality_gap)},
             {"hider", hider_to_json(sol.hider, o.exact_display)},
             {"searcher", searcher},
             {"equalizing_property",
              json{{"holds", rep.equalizing},
                   {"max_ratio_deviation", rep.max_ratio_deviation},
                   {"support_size", rep.support.size()}}}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "value: " << show(sol.value, o) << "\n"
              << "iterations: " << sol.iterations << ", columns: " << sol.columns
              << ", duality gap: " << to_double(sol.duality_gap) << "\n"
              << "hider support:\n";
    for (const auto& [x, p] : sol.hider.support)
      std::cout << "  " << alloc_str(x) << "  p = " << show(p, o) << "\n";
    std::cout << "equalizing property: " << (rep.equalizing ? "holds" : "does not hold")
              << " (max ratio deviation " << format_signif(rep.max_ratio_deviation, 3) << ")\n"
              << "searcher mixture:\n";
    for (const auto& [dt, w] : sol.searcher)
      std::cout << "  p = " << show(w, o) << "  decision tree with " << dt.action.size()
                << " states\n";
  }
  csv.push_back({"allocation", "probability", "probability_exact"});
  for (const auto& [x, p] : sol.hider.support) {
    std::string exact;
    if constexpr (num_traits<T>::exact) exact = rat_to_string(p);
    csv.push_back({alloc_str(x), format_signif(to_double(p), 17), exact});
  }
  write_csv(o.csv_path, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// play (Monte-Carlo cross-check)
// ---------------------------------------------------------------------------

template <typename T>
double play_once(const PolicyPtr<T>& root, const Allocation& x, const std::vector<T>& costs,
                 GameVariant variant, std::mt19937_64& rng) {
  const int n = static_cast<int>(costs.size());
  InfoState s = initial_state(n, total_balls(x));
  PolicyPtr<T> node = root;
  double paid = 0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int step = 0; step < 100000; ++step) {
    if (s.remaining == 0) return paid;
    typename PolicyNode<T>::Choice c = node->choose(s);
    if (auto* mix = std::get_if<typename PolicyNode<T>::Chance>(&c)) {
      double u = unif(rng), acc = 0;
      PolicyPtr<T> next;
      for (const auto& [w, child] : mix->branches) {
        acc += to_double(w);
        next = child;
        if (u < acc) break;
      }
      if (!next) throw policy_violation_error("chance node with no branches");
      node = next;
      continue;
    }
    if (auto* open = std::get_if<typename PolicyNode<T>::Open>(&c)) {
      const int i = open->box;
      if (i < 0 || i >= n || !s.live(i))
        throw policy_violation_error("policy opened an exhausted box");
      const bool found = s.found[i] < x[i];
      if (variant.payoff == PayoffMode::cost || !found) paid += to_double(costs[i]);
      if (found) {
        s.found[i] += 1;
        s.remaining -= 1;
        if (variant.look == LookMode::single) s.dead[i] = 1;
        node = open->on_found;
      } else {
        s.dead[i] = 1;
        node = open->on_empty;
      }
      continue;
    }
    throw policy_violation_error("policy stopped with balls still hidden");
  }
  throw policy_violation_error("policy failed to terminate");
}

template <typename T>
int cmd_play(const Opts& o, const std::string& strategy_path, const std::string& alloc_text,
             const std::string& hider_path, std::uint64_t seed, long long trials) {
  Instance<T> inst = get_instance<T>(o);
  if (strategy_path.empty()) throw invalid_instance_error("--strategy FILE is required");
  if (alloc_text.empty() == hider_path.empty())
    throw invalid_instance_error("exactly one of --allocation or --hider is required");
  SearcherPolicy<T> policy = searcher_from_json<T>(load_json_file(strategy_path), inst);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  HiderMixed<T> hider;
  if (!alloc_text.empty()) {
    Allocation x = parse_allocation(alloc_text);
    check_allocation(x, inst);
    hider = hider_point_mass<T>(std::move(x));
  } else {
    hider = hider_from_json<T>(load_json_file(hider_path), inst);
  }

  double total = 0;
  for (long long t = 0; t < trials; ++t) {
    const Allocation* x = &hider.support.front().first;
    if (hider.support.size() > 1) {
      double u = unif(rng), acc = 0;
      for (const auto& [xx, p] : hider.support) {
        acc += to_double(p);
        x = &xx;
        if (u < acc) break;
      }
    }
    total += play_once(policy.root, *x, inst.costs, inst.variant, rng);
  }
  const double mean = total / static_cast<double>(trials);
  T exact = evaluate_mixed(policy, hider, inst.costs, inst.variant).expected_payoff;
  const double diff = std::abs(mean - to_double(exact));

  if (o.want_json) {
    json out{{"command", "play"},   {"seed", seed},
             {"trials", trials},    {"mean", mean},
             {"expected", to_double(exact)}, {"abs_error", diff}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "trials: " << trials << " (seed " << seed << ")\n"
              << "sample mean payoff: " << format_signif(mean) << "\n"
              << "exact expectation:  " << show(exact, o) << "\n"
              << "absolute error:     " << format_signif(diff, 3) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify (property suites, exact arithmetic)
// ---------------------------------------------------------------------------

struct SuiteResult {
  std::string name;
  long long cases = 0;
  long long failures = 0;
  std::vector<std::string> messages;

  void check(bool ok, const std::string& msg) {
    ++cases;
    if (!ok) {
      ++failures;
      if (messages.size() < 20) messages.push_back(msg);
    }
  }
};

Rat rand_cost(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 24), den(1, 6);
  return Rat(num(rng), den(rng));
}

std::vector<Rat> rand_costs(int n, std::mt19937_64& rng) {
  std::vector<Rat> costs(n);
  for (auto& c : costs) c = rand_cost(rng);
  return costs;
}

std::string costs_str(const std::vector<Rat>& costs) {
  std::string s = "(";
  for (std::size_t i = 0; i < costs.size(); ++i)
    s += (i ? "," : "") + rat_to_string(costs[i]);
  return s + ")";
}

// Valid search sequence ending with the pattern x (each box i appears
// k - x_i times first, then the last k entries realize x).
std::vector<int> sequence_ending_with(const Allocation& x, int k) {
  std::vector<int> seq;
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    for (int t = 0; t < k - x[i]; ++t) seq.push_back(i);
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    for (int t = 0; t < x[i]; ++t) seq.push_back(i);
  return seq;
}

SuiteResult suite_equalizer(long long budget) {
  SuiteResult res;
  res.name = "equalizer-indifference";
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> pick_n(1, 4), pick_k(1, 3);
  for (long long t = 0; t < budget; ++t) {
    const int n = pick_n(rng), k = pick_k(rng);
    const auto costs = rand_costs(n, rng);
    const std::string tag = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " costs=" +
                            costs_str(costs);
    // Rotate through structurally different policies.
    SearcherPolicy<Rat> pol;
    switch (t % 3) {
      case 0:
        pol = dt_to_policy<Rat>(random_decision_tree(n, k, LookMode::multi, rng));
        break;
      case 1:
        pol = searcher_uniform_adaptive<Rat>(n);
        break;
      default: {
        std::vector<int> seq;
        for (int i = 0; i < n; ++i)
          for (int r = 0; r < k; ++r) seq.push_back(i);
        std::shuffle(seq.begin(), seq.end(), rng);
        pol = policy_from_sequence<Rat>(seq, n);
        break;
      }
    }
    auto hm = hider_equalizing_multi(costs, k);
    Rat u = evaluate_mixed(pol, hm, costs, kMultiCost).expected_payoff;
    res.check(u == value_multi_cost_equalizing(costs, k), tag + ": cost payoff != U");
    Rat v = evaluate_mixed(pol, hm, costs, kMultiRegret).expected_payoff;
    res.check(v == value_multi_regret(costs, k), tag + ": regret payoff != V");
    // Single look with a random pure permutation policy.
    const int ks = std::min(k, n);
    auto hs = hider_equalizing_single(costs, ks);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto single_pol = policy_from_sequence<Rat>(perm, n);
    Rat w = evaluate_mixed(single_pol, hs, costs, kSingleRegret).expected_payoff;
    res.check(w == value_single_regret(costs, ks), tag + ": single-look regret != W");
  }
  return res;
}

SuiteResult suite_symmetry(long long budget) {
  SuiteResult res;
  res.name = "symmetry-k2";
  std::mt19937_64 rng(23456);
  auto tail = [](const std::vector<Rat>& c, int from) {  // c_{from+1} + ... + c_n (1-based from)
    Rat s(0);
    for (std::size_t i = from; i < c.size(); ++i) s += c[i];
    return s;
  };
  for (long long t = 0; t < budget; ++t) {
    const int n = 2 + static_cast<int>(t % 4);  // 2..5
    const auto costs = rand_costs(n, rng);
    const std::string tag = "costs=" + costs_str(costs);
    auto e = [&](int i, int j) {
      Allocation y(n, 0);
      y[i] += 1;
      y[j] += 1;
      return y;
    };
    auto R = [&](const Allocation& y, const Allocation& x) {
      return normal_expected_regret(normal_k2_pattern(costs, y), x, costs);
    };
    // The seven canonical cases (those defined at this n).
    res.check(R(e(0, 0), e(1, 1)) == tail(costs, 2) / 2, tag + ": case 2 (2e1 vs 2e2)");
    {
      Rat expect(0);
      for (int j = 1; j < n; ++j) expect += costs[j];
      res.check(R(e(0, 0), e(0, 1)) == expect, tag + ": case 3 (2e1 vs e1+e2)");
    }
    if (n >= 3) {
      res.check(R(e(0, 0), e(1, 2)) == (costs[1] + costs[2]) / 2 + Rat(2, 3) * tail(costs, 3),
                tag + ": case 4 (2e1 vs e2+e3)");
      res.check(R(e(0, 1), e(1, 2)) == (costs[0] + costs[2]) / 2 + Rat(5, 6) * tail(costs, 3),
                tag + ": case 6 (e1+e2 vs e2+e3)");
    }
    if (n >= 4) {
      res.check(R(e(0, 1), e(2, 3)) ==
                    (costs[0] + costs[1] + costs[2] + costs[3]) / 3 + Rat(2, 3) * tail(costs, 4),
                tag + ": case 7 (e1+e2 vs e3+e4)");
    }
    // Full pairwise symmetry at n <= 4.
    if (n <= 4) {
      auto patterns = enumerate_allocations(n, 2, LookMode::multi);
      for (const auto& y : patterns)
        for (const auto& x : patterns)
          res.check(R(y, x) == R(x, y),
                    tag + ": R(T_y,x) != R(T_x,y) at y=" + alloc_str(y) + " x=" + alloc_str(x));
    }
    // Lemma 6 for random k: overlapping pair => symmetric closed form.
    std::uniform_int_distribution<int> pick_k(1, 3);
    const int k = pick_k(rng);
    auto allocs = enumerate_allocations(n, k, LookMode::multi);
    for (const auto& x : allocs) {
      for (const auto& y : allocs) {
        int witness = -1;
        for (int i = 0; i < n; ++i)
          if (x[i] + y[i] > k) witness = i;
        if (witness < 0) continue;
        Rat expect(0);
        for (int j = 0; j < n; ++j)
          if (j != witness) expect += costs[j];
        Rat rxy = sequence_regret(sequence_ending_with(y, k), x, costs);
        Rat ryx = sequence_regret(sequence_ending_with(x, k), y, costs);
        res.check(rxy == expect && ryx == expect,
                  tag + ": Lemma 6 mismatch at x=" + alloc_str(x) + " y=" + alloc_str(y));
      }
    }
  }
  return res;
}

SuiteResult suite_lemma5(long long budget) {
  SuiteResult res;
  res.name = "lemma5";
  std::mt19937_64 rng(34567);
  std::uniform_int_distribution<int> pick_n(2, 3), pick_k(1, 3);
  for (long long t = 0; t < budget; ++t) {
    const int n = pick_n(rng), k = pick_k(rng);
    const auto costs = rand_costs(n, rng);
    std::vector<int> seq;
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < k; ++r) seq.push_back(i);
    std::shuffle(seq.begin(), seq.end(), rng);
    std::vector<int> first_perm = seq, last_perm = seq;
    std::shuffle(first_perm.begin(), first_perm.begin() + k, rng);
    std::shuffle(last_perm.end() - k, last_perm.end(), rng);
    for (const auto& x : enumerate_allocations(n, k, LookMode::multi)) {
      Rat base = sequence_regret(seq, x, costs);
      res.check(sequence_regret(first_perm, x, costs) == base,
                "first-k permutation changed the regret at x=" + alloc_str(x));
      res.check(sequence_regret(last_perm, x, costs) == base,
                "last-k permutation changed the regret at x=" + alloc_str(x));
    }
  }
  return res;
}

SuiteResult suite_closed_form(long long budget) {
  SuiteResult res;
  res.name = "closed-form-agreement";
  std::mt19937_64 rng(45678);
  for (long long t = 0; t < budget; ++t) {
    switch (t % 4) {
      case 0: {  // equal-cost multi-cost
        std::uniform_int_distribution<int> pick_n(1, 4), pick_k(1, 4);
        const int n = pick_n(rng), k = pick_k(rng);
        const Rat c = rand_cost(rng);
        std::vector<Rat> costs(n, c);
        auto sol = solve_game(costs, k, kMultiCost);
        res.check(sol.value == c * value_equal_cost<Rat>(n, k),
                  "equal-cost n=" + std::to_string(n) + " k=" + std::to_string(k) +
                      " c=" + rat_to_string(c));
        break;
      }
      case 1: {  // two-box multi-cost threshold
        std::uniform_int_distribution<int> pick_k(1, 4);
        const int k = pick_k(rng);
        Rat c1 = rand_cost(rng), c2 = rand_cost(rng);
        if (c2 > c1) std::swap(c1, c2);
        std::vector<Rat> costs{c1, c2};
        auto sol = solve_game(costs, k, kMultiCost);
        res.check(sol.value == cutoff_b_multi_n2(c1, c2, k).value,
                  "two-box k=" + std::to_string(k) + " costs=" + costs_str(costs));
        break;
      }
      case 2: {  // multi-regret
        std::uniform_int_distribution<int> pick_n(1, 4), pick_k(1, 3);
        const int n = pick_n(rng), k = pick_k(rng);
        const auto costs = rand_costs(n, rng);
        auto sol = solve_game(costs, k, kMultiRegret);
        res.check(sol.value == value_multi_regret(costs, k),
                  "multi-regret k=" + std::to_string(k) + " costs=" + costs_str(costs));
        break;
      }
      default: {  // single-regret with k = n-1
        std::uniform_int_distribution<int> pick_n(2, 5);
        const int n = pick_n(rng);
        auto costs = rand_costs(n, rng);
        std::sort(costs.begin(), costs.end(), std::greater<>());
        auto sol = solve_game(costs, n - 1, kSingleRegret);
        res.check(sol.value == cutoff_b_single(costs).value,
                  "single-regret costs=" + costs_str(costs));
        break;
      }
    }
  }
  return res;
}

SuiteResult suite_oracle(long long budget) {
  SuiteResult res;
  res.name = "oracle-equivalence";
  std::mt19937_64 rng(56789);
  const GameVariant variants[] = {kMultiCost, kMultiRegret, kSingleCost, kSingleRegret};
  for (long long t = 0; t < budget; ++t) {
    const int k = 1 + static_cast<int>(t % 2);
    const GameVariant variant = variants[(t / 2) % 4];
    const auto costs = rand_costs(2, rng);
    auto allocs = enumerate_allocations(2, k, variant.look);
    // Random hider over a random non-empty sub-support.
    HiderMixed<Rat> hm;
    std::uniform_int_distribution<int> coin(0, 1), weight(1, 9);
    Rat total(0);
    for (const auto& x : allocs) {
      if (coin(rng)) continue;
      Rat w(weight(rng));
      hm.support.emplace_back(x, w);
      total += w;
    }
    if (hm.support.empty()) {
      hm.support.emplace_back(allocs[0], Rat(1));
      total = Rat(1);
    }
    for (auto& [x, p] : hm.support) p /= total;

    Rat br = best_response(hm, costs, variant).value;
    Rat brute;
    bool first = true;
    for (const auto& dt : enumerate_decision_trees(2, k, variant.look)) {
      auto pol = dt_to_policy<Rat>(dt);
      Rat v = evaluate_mixed(pol, hm, costs, variant).expected_payoff;
      if (first || v < brute) brute = v;
      first = false;
    }
    res.check(br == brute, "best_response mismatch: variant=" + to_string(variant) +
                               " k=" + std::to_string(k) + " costs=" + costs_str(costs) +
                               " dp=" + rat_to_string(br) + " brute=" + rat_to_string(brute));
  }
  return res;
}

SuiteResult suite_eq10(long long budget) {
  SuiteResult res;
  res.name = "eq10-weights";
  std::mt19937_64 rng(67890);
  std::uniform_int_distribution<int> pick_n(2, 4), pick_k(1, 3);
  for (long long t = 0; t < budget; ++t) {
    const int n = pick_n(rng), k = pick_k(rng);
    const auto costs = rand_costs(n, rng);
    const std::string tag = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " costs=" +
                            costs_str(costs);
    auto w = regret_reduction_weights(costs, k);
    Rat sum(0);
    bool nonneg = true;
    for (const Rat& p : w) {
      sum += p;
      if (p < Rat(0)) nonneg = false;
    }
    res.check(nonneg, tag + ": negative column weight");
    res.check(sum == Rat(1), tag + ": column weights sum to " + rat_to_string(sum));
    auto m = regret_reduction_matrix(costs, k);
    const Rat v = value_multi_regret(costs, k);
    for (int s = 0; s <= k; ++s) {
      Rat row(0);
      for (int c = 0; c <= k; ++c) row += w[c] * m[s][c];
      res.check(row == v, tag + ": weighted column payoff " + rat_to_string(row) +
                              " != V at hider row " + std::to_string(s));
    }
    res.check(solve_matrix_game(m).value == v, tag + ": matrix game value != V");
  }
  return res;
}

std::vector<SuiteResult> run_suites(const std::string& suite, long long budget) {
  std::vector<SuiteResult> out;
  auto want = [&](std::initializer_list<const char*> names) {
    if (suite == "all") return true;
    for (const char* s : names)
      if (suite == s) return true;
    return false;
  };
  bool known = suite == "all";
  if (want({"equalizer", "equalizer-indifference"})) {
    out.push_back(suite_equalizer(budget));
    known = true;
  }
  if (want({"symmetry", "symmetry-k2", "lemma6", "lemma7"})) {
    out.push_back(suite_symmetry(budget));
    known = true;
  }
  if (want({"lemma5"})) {
    out.push_back(suite_lemma5(budget));
    known = true;
  }
  if (want({"closed-form", "closed-form-agreement"})) {
    out.push_back(suite_closed_form(budget));
    known = true;
  }
  if (want({"oracle", "oracle-equivalence"})) {
    out.push_back(suite_oracle(budget));
    known = true;
  }
  if (want({"eq10", "eq10-weights"})) {
    out.push_back(suite_eq10(budget));
    known = true;
  }
  if (!known) throw invalid_instance_error("unknown suite: " + suite);
  return out;
}

int cmd_verify(const Opts& o, const std::string& suite, long long budget) {
  std::vector<SuiteResult> results = run_suites(suite, budget);
  bool all_pass = true;
  json jout = json::array();
  std::vector<std::vector<std::string>> csv{{"suite", "cases", "failures"}};
  for (const SuiteResult& r : results) {
    all_pass = all_pass && r.failures == 0;
    if (o.want_json) {
      jout.push_back(json{{"suite", r.name},
                          {"cases", r.cases},
                          {"failures", r.failures},
                          {"counterexamples", r.messages}});
    } else {
      std::cout << r.name << ": " << (r.cases - r.failures) << "/" << r.cases << " pass\n";
      for (const auto& m : r.messages) std::cout << "  counterexample: " << m << "\n";
    }
    csv.push_back({r.name, std::to_string(r.cases), std::to_string(r.failures)});
  }
  if (o.want_json) std::cout << jout.dump(2) << "\n";
  write_csv(o.csv_path, csv);
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// reproduce-paper
// ---------------------------------------------------------------------------

struct ReproRow {
  std::string name;
  std::string computed;
  std::string expected;
  bool pass = false;
};

template <typename T>
std::vector<ReproRow> reproduce_rows() {
  std::vector<ReproRow> rows;
  const double tol = 5e-5;
  auto near = [](const T& x, const T& y) {
    if constexpr (num_traits<T>::exact) return x == y;
    return std::abs(to_double(x) - to_double(y)) <= 1e-9 * std::max(1.0, std::abs(to_double(y)));
  };
  auto value_row = [&](const std::string& name, const T& got, double expect) {
    const double g = to_double(got);
    rows.push_back({name, format_signif(g, 9), format_signif(expect, 9),
                    std::abs(g - expect) <= tol});
  };
  auto support_of = [](const SolveResult<T>& sol) {
    std::vector<Allocation> s;
    for (const auto& [x, p] : sol.hider.support) s.push_back(x);
    std::sort(s.begin(), s.end());
    return s;
  };
  auto bool_row = [&](const std::string& name, bool ok, const std::string& got,
                      const std::string& expect) {
    rows.push_back({name, got, expect, ok});
  };

  {  // Example 1
    std::vector<T> costs{T(10), T(9), T(1), T(1)};
    auto sol = solve_game(costs, 2, kMultiCost);
    value_row("example 1 value (10,9,1,1) multi-cost", sol.value, 25.9515);
    auto sup = support_of(sol);
    std::vector<Allocation> expect = enumerate_allocations(4, 2, LookMode::multi);
    std::erase(expect, Allocation{0, 0, 2, 0});
    std::erase(expect, Allocation{0, 0, 1, 1});
    std::erase(expect, Allocation{0, 0, 0, 2});
    bool_row("example 1 support (all but three allocations)", sup == expect,
             std::to_string(sup.size()) + " allocations", "7 allocations");
    auto rep = check_equalizing_property(sol.hider, costs);
    bool_row("example 1 equalizing property", rep.equalizing, rep.equalizing ? "holds" : "fails",
             "holds");
  }
  {  // Example 2
    std::vector<T> costs{T(100), T(10), T(1), from_rat<T>(parse_decimal("0.99"))};
    auto sol = solve_game(costs, 2, kMultiCost);
    value_row("example 2 value (100,10,1,0.99) multi-cost", sol.value, 201.0972);
    std::vector<Allocation> expect{{1, 0, 0, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}, {2, 0, 0, 0}};
    bool_row("example 2 support {2000,1100,1010,1001}", support_of(sol) == expect,
             std::to_string(sol.hider.support.size()) + " allocations", "4 allocations");
  }
  {  // Example 3
    std::vector<T> costs{T(100), T(10), T(1), from_rat<T>(parse_decimal("0.99"))};
    auto sol = solve_game(costs, 2, kSingleRegret);
    value_row("example 3 value (100,10,1,0.99) single-regret", sol.value, 10.0405);
    auto sup = support_of(sol);
    bool excluded = std::find(sup.begin(), sup.end(), Allocation{1, 1, 0, 0}) == sup.end();
    bool_row("example 3 support excludes (1,1,0,0)", excluded && sup.size() == 5,
             std::to_string(sup.size()) + " allocations", "5 allocations, no (1,1,0,0)");
  }
  {  // Example 4
    std::vector<T> costs{T(100), T(10), from_rat<T>(parse_decimal("9.9")), T(1)};
    auto sol = solve_game(costs, 2, kSingleRegret);
    value_row("example 4 value (100,10,9.9,1) single-regret", sol.value, 17.4229);
    std::vector<Allocation> expect{{0, 0, 1, 1}, {0, 1, 0, 1}, {1, 0, 0, 1}};
    bool_row("example 4 support {1001,0101,0011}", support_of(sol) == expect,
             std::to_string(sol.hider.support.size()) + " allocations", "3 allocations");
  }
  {  // Section 2.1 worked instance: n = k = 2, equal costs
    std::vector<T> costs{T(1), T(1)};
    auto sol = solve_game(costs, 2, kMultiCost);
    bool_row("equal-cost n=k=2 value = 8/3", near(sol.value, T(8) / T(3)),
             format_signif(to_double(sol.value), 9), "2.66666667");
    auto pol = searcher_equal_cost<T>(2, 2);
    T a = evaluate(pol, {2, 0}, costs, kMultiCost).expected_payoff;
    T b = evaluate(pol, {1, 1}, costs, kMultiCost).expected_payoff;
    bool_row("equal-cost policy pays 8/3 on both supports",
             near(a, T(8) / T(3)) && near(b, T(8) / T(3)),
             format_signif(to_double(a), 9) + " / " + format_signif(to_double(b), 9),
             "2.66666667 / 2.66666667");
    auto uni = searcher_uniform_adaptive<T>(2);
    T u = evaluate(uni, {2, 0}, costs, kMultiCost).expected_payoff;
    bool_row("uniform-adaptive vs (2,0) = 11/4", near(u, T(11) / T(4)),
             format_signif(to_double(u), 9), "2.75");
  }
  {  // Section 2.2 worked instance: costs (10,1)
    std::vector<T> costs{T(10), T(1)};
    T u22 = value_multi_cost_equalizing(costs, 2);
    bool_row("U([2],2) = 2222/111 for costs (10,1)", near(u22, T(2222) / T(111)),
             format_signif(to_double(u22), 9), "20.018018");
    T better = T(10) + value_multi_cost_equalizing(costs, 1);
    bool_row("10 + U([2],1) > U([2],2)", better > u22, format_signif(to_double(better), 9),
             "> 20.018018");
    auto sol = solve_game(costs, 2, kMultiCost);
    bool_row("two-box game value = 10 + U([2],1)", near(sol.value, better),
             format_signif(to_double(sol.value), 9), format_signif(to_double(better), 9));
  }
  {  // Section 4.1 worked instance: costs (100,100,1), k = 2
    std::vector<T> costs{T(100), T(100), T(1)};
    auto sol = solve_game(costs, 2, kSingleRegret);
    value_row("single-regret (100,100,1) k=2 value", sol.value, 50.0);
    auto thr = cutoff_b_single(costs);
    bool_row("cutoff b = 2 with value W([2],1) = 50", thr.b == 2 && near(thr.value, T(50)),
             "b=" + std::to_string(thr.b) + ", " + format_signif(to_double(thr.value), 9),
             "b=2, 50");
  }
  return rows;
}

template <typename T>
int cmd_reproduce(const Opts& o) {
  std::vector<ReproRow> rows = reproduce_rows<T>();
  bool all_pass = true;
  for (const auto& r : rows) all_pass = all_pass && r.pass;
  if (o.want_json) {
    json jout = json::array();
    for (const auto& r : rows)
      jout.push_back(json{{"name", r.name},
                          {"computed", r.computed},
                          {"expected", r.expected},
                          {"pass", r.pass}});
    std::cout << json{{"command", "reproduce-paper"}, {"pass", all_pass}, {"rows", jout}}.dump(2)
              << "\n";
  } else {
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    for (const auto& r : rows) {
      std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name
                << std::string(width - r.name.size() + 2, ' ') << r.computed
                << "  (expected " << r.expected << ")\n";
    }
    std::cout << (all_pass ? "overall: PASS" : "overall: FAIL") << "\n";
  }
  std::vector<std::vector<std::string>> csv{{"name", "computed", "expected", "pass"}};
  for (const auto& r : rows)
    csv.push_back({r.name, r.computed, r.expected, r.pass ? "pass" : "fail"});
  write_csv(o.csv_path, csv);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"box-search game solver"};
  app.require_subcommand(1);

  Opts opts;
  std::string strategy_path, alloc_text, hider_path, eps_text, suite = "all";
  long long budget = kDefaultStateBudget;
  long long verify_budget = 100;
  long long trials = 10000;
  std::uint64_t seed = 0;
  bool normal_only = false;

  auto add_common = [&](CLI::App* cmd, bool with_instance) {
    if (with_instance) cmd->add_option("--instance", opts.instance_path, "instance JSON file");
    cmd->add_flag("--exact", opts.exact_display, "print exact rational values");
    cmd->add_flag("--float", opts.use_float, "use floating-point arithmetic");
    cmd->add_flag("--json", opts.want_json, "emit JSON output");
    cmd->add_option("--csv", opts.csv_path, "write the report table to a CSV file");
  };

  CLI::App* c_value = app.add_subcommand("value", "closed-form game value");
  add_common(c_value, true);

  CLI::App* c_strategy = app.add_subcommand("strategy", "constructive optimal strategies");
  add_common(c_strategy, true);

  CLI::App* c_evaluate = app.add_subcommand("evaluate", "exact expected payoff of a strategy");
  add_common(c_evaluate, true);
  c_evaluate->add_option("--strategy", strategy_path, "searcher strategy JSON file");
  c_evaluate->add_option("--allocation", alloc_text, "pure hider allocation, e.g. 2,0,0");
  c_evaluate->add_option("--hider", hider_path, "hider strategy JSON file");

  CLI::App* c_solve = app.add_subcommand("solve", "solve the game numerically");
  add_common(c_solve, true);
  c_solve->add_option("--eps", eps_text, "duality-gap tolerance");
  c_solve->add_option("--budget", budget, "best-response state budget");
  c_solve->add_flag("--normal-only", normal_only,
                    "solve the normal-strategy matrix game (multi-regret)");

  CLI::App* c_play = app.add_subcommand("play", "Monte-Carlo cross-check of a strategy");
  add_common(c_play, true);
  c_play->add_option("--strategy", strategy_path, "searcher strategy JSON file");
  c_play->add_option("--allocation", alloc_text, "pure hider allocation");
  c_play->add_option("--hider", hider_path, "hider strategy JSON file");
  c_play->add_option("--seed", seed, "random seed")->required();
  c_play->add_option("--trials", trials, "number of simulated plays");

  CLI::App* c_verify = app.add_subcommand("verify", "run a property suite");
  add_common(c_verify, false);
  c_verify->add_option("--suite", suite,
                       "equalizer | symmetry-k2 | lemma5 | closed-form | oracle | eq10 | all");
  c_verify->add_option("--budget", verify_budget, "randomized cases per suite");

  CLI::App* c_repro = app.add_subcommand("reproduce-paper", "reproduce the published examples");
  add_common(c_repro, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (opts.use_float && opts.exact_display)
      throw invalid_instance_error("--exact display requires rational arithmetic (drop --float)");
    auto dispatch = [&](auto runner) {
      return opts.use_float ? runner(double{}) : runner(Rat{});
    };
    if (app.got_subcommand(c_value))
      return dispatch([&](auto tag) { return cmd_value<decltype(tag)>(opts); });
    if (app.got_subcommand(c_strategy))
      return dispatch([&](auto tag) { return cmd_strategy<decltype(tag)>(opts); });
    if (app.got_subcommand(c_evaluate))
      return dispatch([&](auto tag) {
        return cmd_evaluate<decltype(tag)>(opts, strategy_path, alloc_text, hider_path);
      });
    if (app.got_subcommand(c_solve))
      return dispatch([&](auto tag) {
        return cmd_solve<decltype(tag)>(opts, eps_text, budget, normal_only);
      });
    if (app.got_subcommand(c_play))
      return dispatch([&](auto tag) {
        return cmd_play<decltype(tag)>(opts, strategy_path, alloc_text, hider_path, seed, trials);
      });
    if (app.got_subcommand(c_verify)) return cmd_verify(opts, suite, verify_budget);
    if (app.got_subcommand(c_repro))
      return dispatch([&](auto tag) { return cmd_reproduce<decltype(tag)>(opts); });
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
