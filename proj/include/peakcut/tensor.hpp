#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace peakcut {

// Dense (client, datacenter, slot) tensor. Storage is datacenter-major, then
// slot, then client, so one datacenter's block and one (datacenter, slot)
// column over clients are both contiguous.
class AllocationTensor {
 public:
  AllocationTensor() = default;
  AllocationTensor(std::size_t clients, std::size_t datacenters,
                   std::size_t slots, double fill = 0.0)
      : clients_(clients),
        datacenters_(datacenters),
        slots_(slots),
        values_(clients * datacenters * slots, fill) {}

  std::size_t clients() const { return clients_; }
  std::size_t datacenters() const { return datacenters_; }
  std::size_t slots() const { return slots_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t t) const {
    return (j * slots_ + t) * clients_ + i;
  }
  double& at(std::size_t i, std::size_t j, std::size_t t) {
    return values_[index(i, j, t)];
  }
  double at(std::size_t i, std::size_t j, std::size_t t) const {
    return values_[index(i, j, t)];
  }

  std::span<double> column(std::size_t j, std::size_t t) {
    return {values_.data() + (j * slots_ + t) * clients_, clients_};
  }
  std::span<const double> column(std::size_t j, std::size_t t) const {
    return {values_.data() + (j * slots_ + t) * clients_, clients_};
  }
  std::span<double> block(std::size_t j) {
    return {values_.data() + j * slots_ * clients_, slots_ * clients_};
  }
  std::span<const double> block(std::size_t j) const {
    return {values_.data() + j * slots_ * clients_, slots_ * clients_};
  }

  std::span<double> flat() { return values_; }
  std::span<const double> flat() const { return values_; }

  bool same_shape(const AllocationTensor& other) const {
    return clients_ == other.clients_ && datacenters_ == other.datacenters_ &&
           slots_ == other.slots_;
  }
  bool operator==(const AllocationTensor&) const = default;

 private:
  std::size_t clients_ = 0;
  std::size_t datacenters_ = 0;
  std::size_t slots_ = 0;
  std::vector<double> values_;
};

}  // namespace peakcut
