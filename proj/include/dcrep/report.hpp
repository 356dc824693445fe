#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dcrep {

enum class Verdict { ColorRep, NoColorRep, Undetermined };

enum class Regime { ZeroH, SmallH, LargeH, AllH, AnyPositiveH, AtH };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ColorRep: return "ColorRep";
    case Verdict::NoColorRep: return "NoColorRep";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::ZeroH: return "h=0";
    case Regime::SmallH: return "small-h";
    case Regime::LargeH: return "large-h";
    case Regime::AllH: return "all-h";
    case Regime::AnyPositiveH: return "any-positive-h";
    case Regime::AtH: return "at-h";
  }
  return "?";
}

/// One classification with the regime it applies to and a human-readable witness.
struct ClassificationReport {
  Verdict verdict = Verdict::Undetermined;
  Regime regime = Regime::ZeroH;
  std::string source;                                  // which check produced it
  std::vector<std::pair<std::string, double>> witness;  // named numbers backing the verdict
};

}  // namespace dcrep
