#include "oddform/report.hpp"

namespace oddform {

bool Report::cites(const std::string& axiom) const {
  for (const auto& v : violations)
    if (v.axiom == axiom) return true;
  return false;
}

void Report::merge(const Report& other) {
  violations.insert(violations.end(), other.violations.begin(),
                    other.violations.end());
  stats.insert(stats.end(), other.stats.begin(), other.stats.end());
}

std::string Report::summary() const {
  std::uint64_t tuples = 0;
  std::size_t exhaustive = 0;
  for (const auto& s : stats) {
    tuples += s.tuples;
    exhaustive += s.exhaustive;
  }
  std::string out = std::to_string(stats.size()) + " axioms, " +
                    std::to_string(exhaustive) + " exhaustive, " +
                    std::to_string(tuples) + " tuples, " +
                    std::to_string(violations.size()) + " violations";
  for (const auto& v : violations) out += "\n  " + v.axiom + ": " + v.witness;
  return out;
}

}  // namespace oddform
