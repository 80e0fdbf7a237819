#include "peakcut/harness/tariff_table.hpp"

#include "peakcut/error.hpp"

namespace peakcut::harness {

namespace {

Tariff from_monthly_bill(std::string name, double demand_usd, double energy_usd) {
  return Tariff{std::move(name), demand_usd / kReferencePeakKw,
                energy_usd / kReferenceMonthKwh};
}

}  // namespace

TariffTable TariffTable::bundled() {
  TariffTable table;
  table.add(from_monthly_bill("OR", 38400.0, 147312.0));
  table.add(from_monthly_bill("IA", 62600.0, 114236.0));
  table.add(from_monthly_bill("OK", 103900.0, 93312.0));
  table.add(from_monthly_bill("NC", 111000.0, 240580.0));
  table.add(Tariff{"SC", 14.76, 0.05037});
  table.add(from_monthly_bill("GA", 165500.0, 24002.0));
  return table;
}

void TariffTable::add(Tariff tariff) {
  tariff.validate();
  const std::string key = tariff.name;
  tariffs_[key] = std::move(tariff);
}

const Tariff& TariffTable::get(const std::string& name) const {
  const auto it = tariffs_.find(name);
  if (it == tariffs_.end()) throw ConfigError("unknown tariff '" + name + "'");
  return it->second;
}

bool TariffTable::contains(const std::string& name) const {
  return tariffs_.count(name) != 0;
}

std::vector<std::string> TariffTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, tariff] : tariffs_) out.push_back(name);
  return out;
}

}  // namespace peakcut::harness
