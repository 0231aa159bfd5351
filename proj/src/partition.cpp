#include "eqqcsp/partition.hpp"

#include <algorithm>
#include <stdexcept>

#include "eqqcsp/error.hpp"

namespace eqqcsp {

Partition::Partition(std::vector<int> rgs) : rgs_(std::move(rgs)) {
  int next = 0;
  for (std::size_t i = 0; i < rgs_.size(); ++i) {
    if (rgs_[i] < 0 || rgs_[i] > next) {
      throw std::invalid_argument("not a restricted-growth string at index " +
                                  std::to_string(i));
    }
    if (rgs_[i] == next) ++next;
  }
  blocks_ = next;
}

std::string Partition::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < rgs_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(rgs_[i]);
  }
  out += ']';
  return out;
}

Partition kernel_of(std::span<const std::uint64_t> assignment) {
  return Partition::kernel_of(assignment);
}

void for_each_partition(int m,
                        const std::function<void(const Partition&)>& fn) {
  if (m < 0) throw std::invalid_argument("negative partition size");
  if (m == 0) {
    fn(Partition());
    return;
  }
  // Iterative restricted-growth enumeration; maxima[i] = max(c[0..i]).
  std::vector<int> c(m, 0);
  std::vector<int> maxima(m, 0);
  while (true) {
    fn(Partition(c));
    int i = m - 1;
    while (i > 0 && c[i] == maxima[i - 1] + 1) --i;
    if (i == 0) return;
    ++c[i];
    maxima[i] = std::max(maxima[i - 1], c[i]);
    for (int j = i + 1; j < m; ++j) {
      c[j] = 0;
      maxima[j] = maxima[i];
    }
  }
}

std::vector<Partition> enumerate_partitions(int m, int cap) {
  if (m < 1) throw std::invalid_argument("partition size must be positive");
  if (m > cap) {
    throw CapExceeded("partition size " + std::to_string(m) +
                      " exceeds cap " + std::to_string(cap));
  }
  std::vector<Partition> out;
  out.reserve(bell_number(m));
  for_each_partition(m, [&](const Partition& p) { out.push_back(p); });
  return out;
}

std::uint64_t bell_number(int m) {
  if (m < 0 || m > 25) throw std::invalid_argument("bell_number out of range");
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < m; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

}  // namespace eqqcsp
