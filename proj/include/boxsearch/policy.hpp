#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "boxsearch/model.hpp"

namespace boxsearch {

template <typename T>
class PolicyNode;

template <typename T>
using PolicyPtr = std::shared_ptr<const PolicyNode<T>>;

// A searcher policy is a rooted graph of decision nodes.  Queried at an
// information state, a node either randomizes over other nodes, opens a box
// (with successor nodes for the ball/empty outcomes), or stops.  Node
// identity doubles as the policy-internal state for engine memoization, so
// constructors build their node graphs eagerly and reuse nodes.
template <typename T>
class PolicyNode {
 public:
  struct Chance {
    std::vector<std::pair<T, PolicyPtr<T>>> branches;  // probabilities sum to 1
  };
  struct Open {
    int box = 0;  // 0-based
    PolicyPtr<T> on_found;
    PolicyPtr<T> on_empty;
  };
  struct Stop {};
  using Choice = std::variant<Chance, Open, Stop>;

  PolicyNode() : id_(counter().fetch_add(1, std::memory_order_relaxed)) {}
  PolicyNode(const PolicyNode&) = delete;
  PolicyNode& operator=(const PolicyNode&) = delete;
  virtual ~PolicyNode() = default;

  virtual Choice choose(const InfoState& state) const = 0;
  std::uint64_t id() const { return id_; }

 private:
  static std::atomic<std::uint64_t>& counter() {
    static std::atomic<std::uint64_t> c{0};
    return c;
  }
  std::uint64_t id_;
};

namespace detail {

template <typename T>
class FixedNode final : public PolicyNode<T> {
 public:
  explicit FixedNode(typename PolicyNode<T>::Choice choice) : choice_(std::move(choice)) {}
  typename PolicyNode<T>::Choice choose(const InfoState&) const override { return choice_; }

 private:
  typename PolicyNode<T>::Choice choice_;
};

template <typename T>
class AdaptiveNode final : public PolicyNode<T> {
 public:
  using Fn = std::function<typename PolicyNode<T>::Choice(const InfoState&)>;
  explicit AdaptiveNode(Fn fn) : fn_(std::move(fn)) {}
  typename PolicyNode<T>::Choice choose(const InfoState& s) const override { return fn_(s); }

 private:
  Fn fn_;
};

// Opens `box` until the game ends, escaping to `on_empty` if it turns up
// empty with balls still missing.
template <typename T>
class SweepNode final : public PolicyNode<T>,
                        public std::enable_shared_from_this<SweepNode<T>> {
 public:
  SweepNode(int box, PolicyPtr<T> on_empty) : box_(box), on_empty_(std::move(on_empty)) {}
  typename PolicyNode<T>::Choice choose(const InfoState&) const override {
    return typename PolicyNode<T>::Open{box_, this->shared_from_this(), on_empty_};
  }

 private:
  int box_;
  PolicyPtr<T> on_empty_;
};

}  // namespace detail

template <typename T>
PolicyPtr<T> make_stop() {
  return std::make_shared<detail::FixedNode<T>>(typename PolicyNode<T>::Stop{});
}

template <typename T>
PolicyPtr<T> make_open(int box, PolicyPtr<T> on_found, PolicyPtr<T> on_empty) {
  return std::make_shared<detail::FixedNode<T>>(
      typename PolicyNode<T>::Open{box, std::move(on_found), std::move(on_empty)});
}

template <typename T>
PolicyPtr<T> make_chance(std::vector<std::pair<T, PolicyPtr<T>>> branches) {
  return std::make_shared<detail::FixedNode<T>>(
      typename PolicyNode<T>::Chance{std::move(branches)});
}

template <typename T>
PolicyPtr<T> make_adaptive(typename detail::AdaptiveNode<T>::Fn fn) {
  return std::make_shared<detail::AdaptiveNode<T>>(std::move(fn));
}

// Open `box` until all balls are found; if it reveals empty while balls are
// missing, continue with `on_empty`.
template <typename T>
PolicyPtr<T> make_sweep(int box, PolicyPtr<T> on_empty) {
  return std::make_shared<detail::SweepNode<T>>(box, std::move(on_empty));
}

template <typename T>
struct SearcherPolicy {
  PolicyPtr<T> root;
  std::string description;
};

}  // namespace boxsearch
