#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "boxsearch/model.hpp"
#include "boxsearch/number.hpp"
#include "boxsearch/solver.hpp"
#include "boxsearch/strategies.hpp"

namespace boxsearch {

using json = nlohmann::json;

// Parses JSON text with every fractional number literal captured as a
// string, so rational mode sees "0.99" and not the nearest double.
json parse_json_exact(const std::string& text);

// Reads and exact-parses a JSON file.
json load_json_file(const std::string& path);

// value formatted to `digits` significant digits.
std::string format_signif(double v, int digits = 6);

template <typename T>
T number_from_json(const json& j) {
  if (j.is_string()) {
    Rat r = parse_decimal(j.get<std::string>());
    return from_rat<T>(r);
  }
  if (j.is_number_integer()) return T(j.get<long long>());
  if (j.is_number_unsigned()) return T(static_cast<long long>(j.get<unsigned long long>()));
  if (j.is_number_float()) {
    if constexpr (num_traits<T>::exact)
      return T(j.get<double>());
    else
      return j.get<double>();
  }
  throw invalid_instance_error("expected a number, got: " + j.dump());
}

// Full-precision representation that round-trips through JSON.
template <typename T>
json number_to_json_full(const T& v) {
  if constexpr (num_traits<T>::exact) {
    return json(rat_to_string(v));
  } else {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return json(std::string(buf));
  }
}

// Display representation: exact fraction string in exact display mode, 6
// significant digits otherwise.
template <typename T>
json number_to_json(const T& v, bool exact_display) {
  if constexpr (num_traits<T>::exact) {
    if (exact_display) return json(rat_to_string(v));
  }
  return json(format_signif(to_double(v)));
}

template <typename T>
Instance<T> instance_from_json(const json& j) {
  if (!j.is_object()) throw invalid_instance_error("instance must be a JSON object");
  if (!j.contains("costs") || !j["costs"].is_array())
    throw invalid_instance_error("instance needs a \"costs\" array");
  if (!j.contains("balls")) throw invalid_instance_error("instance needs \"balls\"");
  if (!j.contains("variant")) throw invalid_instance_error("instance needs \"variant\"");
  Instance<T> inst;
  for (const json& c : j["costs"]) inst.costs.push_back(number_from_json<T>(c));
  if (!j["balls"].is_number_integer() && !j["balls"].is_number_unsigned())
    throw invalid_instance_error("\"balls\" must be an integer");
  inst.balls = j["balls"].get<int>();
  inst.variant = variant_from_string(j["variant"].get<std::string>());
  inst.validate();
  return inst;
}

template <typename T>
json instance_to_json(const Instance<T>& inst) {
  json costs = json::array();
  for (const T& c : inst.costs) costs.push_back(number_to_json_full(c));
  return json{{"costs", costs}, {"balls", inst.balls}, {"variant", to_string(inst.variant)}};
}

template <typename T>
json allocation_to_json(const Allocation& x) {
  return json(x);
}

template <typename T>
json hider_to_json(const HiderMixed<T>& hm, bool exact_display) {
  json support = json::array();
  for (const auto& [x, p] : hm.support) {
    support.push_back(json{{"allocation", x},
                           {"probability", number_to_json(p, exact_display)},
                           {"probability_approx", to_double(p)}});
  }
  return json{{"kind", "mixed"}, {"description", hm.description}, {"support", support}};
}

// Box ids are 1-based in serialized sequences.
inline json sequence_to_json(const std::vector<int>& seq) {
  json out = json::array();
  for (int b : seq) out.push_back(b + 1);
  return out;
}

inline std::vector<int> sequence_from_json(const json& j, int n) {
  if (!j.is_array()) throw invalid_instance_error("sequence must be an array of box ids");
  std::vector<int> seq;
  for (const json& e : j) {
    if (!e.is_number_integer() && !e.is_number_unsigned())
      throw invalid_instance_error("sequence entries must be integers");
    int b = e.get<int>();
    if (b < 1 || b > n) throw invalid_order_error("sequence box id out of range (ids are 1-based)");
    seq.push_back(b - 1);
  }
  return seq;
}

template <typename T>
json normal_to_json(const NormalStrategy<T>& ns, bool exact_display) {
  json seqs = json::array();
  for (const auto& [seq, w] : ns.mixture)
    seqs.push_back(json{{"sequence", sequence_to_json(seq)},
                        {"probability", number_to_json(w, exact_display)},
                        {"probability_approx", to_double(w)}});
  return json{{"kind", "normal"}, {"description", ns.description}, {"sequences", seqs}};
}

inline json decision_tree_to_json(const DecisionTreePolicy& dt) {
  json actions = json::array();
  for (const auto& [key, box] : dt.action) {
    InfoState s;
    s.found.assign(dt.boxes, 0);
    s.dead.assign(dt.boxes, 0);
    // key() packs box 0 into the highest occupied 5-bit group.
    for (int i = 0; i < dt.boxes; ++i) {
      std::uint64_t bits = (key >> (5 * (dt.boxes - 1 - i))) & 31u;
      s.dead[i] = static_cast<std::uint8_t>(bits & 1u);
      s.found[i] = static_cast<int>(bits >> 1);
    }
    actions.push_back(json{{"found", s.found},
                           {"dead", std::vector<int>(s.dead.begin(), s.dead.end())},
                           {"open", box + 1}});
  }
  return json{{"kind", "decision-tree"}, {"actions", actions}};
}

inline DecisionTreePolicy decision_tree_from_json(const json& j, int n) {
  DecisionTreePolicy dt;
  dt.boxes = n;
  if (!j.contains("actions") || !j["actions"].is_array())
    throw invalid_instance_error("decision-tree strategy needs an \"actions\" array");
  for (const json& a : j["actions"]) {
    InfoState s;
    s.found = a["found"].get<std::vector<int>>();
    auto dead = a["dead"].get<std::vector<int>>();
    if (static_cast<int>(s.found.size()) != n || static_cast<int>(dead.size()) != n)
      throw invalid_instance_error("decision-tree state length mismatch");
    s.dead.assign(dead.begin(), dead.end());
    int box = a["open"].get<int>();
    if (box < 1 || box > n) throw invalid_order_error("decision-tree opens a box out of range");
    dt.action[s.key()] = box - 1;
  }
  return dt;
}

// Builds a hider from its serialized form; named kinds use the instance's
// costs (canonicalized to decreasing order where the construction needs it).
template <typename T>
HiderMixed<T> hider_from_json(const json& j, const Instance<T>& inst) {
  if (!j.is_object() || !j.contains("kind"))
    throw invalid_instance_error("hider strategy needs a \"kind\" tag");
  const std::string kind = j["kind"].get<std::string>();
  const int n = static_cast<int>(inst.costs.size());
  if (kind == "equalizing") {
    return inst.variant.look == LookMode::single
               ? hider_equalizing_single(inst.costs, inst.balls)
               : hider_equalizing_multi(inst.costs, inst.balls);
  }
  if (kind == "set-aside") {
    if (n != 2 || inst.variant.look != LookMode::multi)
      throw invalid_instance_error("set-aside hider needs a two-box multi-look game");
    auto order = decreasing_order(inst.costs);
    auto sorted = permute_costs(inst.costs, order);
    return relabel_hider(hider_set_aside_n2(sorted[0], sorted[1], inst.balls), order);
  }
  if (kind == "prefill") {
    if (inst.variant.look != LookMode::single || inst.balls != n - 1)
      throw invalid_instance_error("prefill hider needs a single-look game with k = n-1");
    auto order = decreasing_order(inst.costs);
    return relabel_hider(hider_prefill_single(permute_costs(inst.costs, order)), order);
  }
  if (kind == "point") {
    Allocation x = j.at("allocation").get<Allocation>();
    if (static_cast<int>(x.size()) != n || total_balls(x) != inst.balls)
      throw invalid_instance_error("point-mass allocation does not match the instance");
    return hider_point_mass<T>(std::move(x));
  }
  if (kind == "mixed") {
    HiderMixed<T> hm;
    hm.description = j.value("description", std::string("mixed hider"));
    for (const json& e : j.at("support")) {
      Allocation x = e.at("allocation").get<Allocation>();
      T p = number_from_json<T>(e.at("probability"));
      hm.support.emplace_back(std::move(x), std::move(p));
    }
    return hm;
  }
  throw invalid_instance_error("unknown hider kind: " + kind);
}

// Builds a searcher policy from its serialized form.
template <typename T>
SearcherPolicy<T> searcher_from_json(const json& j, const Instance<T>& inst) {
  if (!j.is_object() || !j.contains("kind"))
    throw invalid_instance_error("searcher strategy needs a \"kind\" tag");
  const std::string kind = j["kind"].get<std::string>();
  const int n = static_cast<int>(inst.costs.size());
  const int k = inst.balls;
  if (kind == "equal-cost") return searcher_equal_cost<T>(n, k);
  if (kind == "two-box") {
    if (n != 2) throw invalid_instance_error("two-box policy needs exactly two boxes");
    auto order = decreasing_order(inst.costs);
    auto sorted = permute_costs(inst.costs, order);
    return relabel_policy(searcher_n2_cost(sorted[0], sorted[1], k), order);
  }
  if (kind == "regret-search") return searcher_multi_regret(inst.costs, k);
  if (kind == "normal-k1") {
    if (k != 1) throw invalid_instance_error("normal-k1 needs k = 1");
    return policy_from_normal(searcher_normal_k1(inst.costs), n);
  }
  if (kind == "normal-k2") {
    if (k != 2) throw invalid_instance_error("normal-k2 needs k = 2");
    return searcher_normal_k2(inst.costs);
  }
  if (kind == "single-regret") {
    if (inst.variant.look != LookMode::single || k != n - 1)
      throw invalid_instance_error("single-regret policy needs a single-look game with k = n-1");
    auto order = decreasing_order(inst.costs);
    return relabel_policy(searcher_single_regret_full(permute_costs(inst.costs, order)), order);
  }
  if (kind == "uniform") return searcher_uniform_adaptive<T>(n);
  if (kind == "sequence") {
    std::vector<int> seq = sequence_from_json(j.at("sequence"), n);
    validate_sequence(seq, n, k, inst.variant.look);
    return policy_from_sequence<T>(seq, n);
  }
  if (kind == "normal") {
    NormalStrategy<T> ns;
    ns.description = j.value("description", std::string("normal strategy"));
    for (const json& e : j.at("sequences")) {
      std::vector<int> seq = sequence_from_json(e.at("sequence"), n);
      validate_sequence(seq, n, k, inst.variant.look);
      ns.mixture.emplace_back(std::move(seq), number_from_json<T>(e.at("probability")));
    }
    return policy_from_normal(ns, n);
  }
  if (kind == "decision-tree") return dt_to_policy<T>(decision_tree_from_json(j, n));
  throw invalid_instance_error("unknown searcher kind: " + kind);
}

}  // namespace boxsearch
