#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace eqqcsp {

/// An equivalence relation on positions 0..m-1, stored as its canonical
/// restricted-growth string: c[0] = 0 and c[i+1] <= 1 + max(c[0..i]).
///
/// Two assignments with the same Partition satisfy exactly the same equality
/// formulas, so this is the value every evaluator and memo table works on.
class Partition {
 public:
  Partition() = default;

  /// Validates the restricted-growth property; throws std::invalid_argument.
  explicit Partition(std::vector<int> rgs);
  Partition(std::initializer_list<int> rgs)
      : Partition(std::vector<int>(rgs)) {}

  /// The kernel of an arbitrary labelling: positions with equal labels share
  /// a block, blocks numbered by first appearance.
  template <typename T>
  static Partition kernel_of(std::span<const T> labels);

  std::size_t size() const { return rgs_.size(); }
  bool empty() const { return rgs_.empty(); }
  int operator[](std::size_t i) const { return rgs_[i]; }
  int num_blocks() const { return blocks_; }
  bool same_block(std::size_t i, std::size_t j) const {
    return rgs_[i] == rgs_[j];
  }
  const std::vector<int>& rgs() const { return rgs_; }

  /// "[0,0,1]"
  std::string to_string() const;

  auto operator<=>(const Partition&) const = default;
  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> rgs_;
  int blocks_ = 0;
};

template <typename T>
Partition Partition::kernel_of(std::span<const T> labels) {
  std::vector<int> rgs(labels.size());
  std::vector<T> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::size_t b = 0;
    while (b < seen.size() && !(seen[b] == labels[i])) ++b;
    if (b == seen.size()) seen.push_back(labels[i]);
    rgs[i] = static_cast<int>(b);
  }
  return Partition(std::move(rgs));
}

/// Canonical kernel of a sequence of natural-number labels.
Partition kernel_of(std::span<const std::uint64_t> assignment);

inline constexpr int kDefaultPartitionCap = 8;

/// Calls fn(partition) for every partition of an m-element set in
/// lexicographic restricted-growth order. m = 0 yields the single empty
/// partition.
void for_each_partition(int m, const std::function<void(const Partition&)>& fn);

/// All Bell(m) partitions, lexicographically. Throws CapExceeded if m > cap.
std::vector<Partition> enumerate_partitions(int m,
                                            int cap = kDefaultPartitionCap);

/// Bell number B(m) for m <= 25.
std::uint64_t bell_number(int m);

}  // namespace eqqcsp

template <>
struct std::hash<eqqcsp::Partition> {
  std::size_t operator()(const eqqcsp::Partition& p) const noexcept {
    std::size_t h = p.size();
    for (int c : p.rgs()) h = h * 31 + static_cast<std::size_t>(c);
    return h;
  }
};
