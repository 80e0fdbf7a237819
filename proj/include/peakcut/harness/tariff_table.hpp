#pragma once

#include <map>
#include <string>
#include <vector>

#include "peakcut/model.hpp"

namespace peakcut::harness {

// Named tariffs. The bundled table holds the SCEG industrial rate as
// published and five rates backed out of monthly bills for a 10 MW peak /
// 6 MW average load (10 000 kW, 4 320 000 kWh over 720 h).
class TariffTable {
 public:
  static TariffTable bundled();

  void add(Tariff tariff);
  const Tariff& get(const std::string& name) const;  // ConfigError if absent
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Tariff> tariffs_;
};

inline constexpr double kReferencePeakKw = 10000.0;
inline constexpr double kReferenceMonthKwh = 6000.0 * 720.0;

}  // namespace peakcut::harness
