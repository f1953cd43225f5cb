#pragma once

#include <map>
#include <string>

namespace hitchin {

// Shared result record for every property checker.
struct CheckReport {
  std::string check;
  int n = 0;
  int tuples = 0;           // tuples / items actually tested
  double worst_margin = 0;  // smallest margin observed
  double tolerance = 0;     // threshold the margin is held against
  bool pass = false;
  std::string note;         // free-form context (failing word, root, ...)
  std::map<std::string, double> extra;  // named diagnostics (slopes, distances)
};

std::string report_to_json(const CheckReport& r);

}  // namespace hitchin
