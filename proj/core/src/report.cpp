#include "hitchin/report.hpp"

#include "json.hpp"

namespace hitchin {

std::string report_to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["n"] = r.n;
  j["tuples"] = r.tuples;
  j["worst_margin"] = r.worst_margin;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["note"] = r.note;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.extra) extra[k] = v;
  j["extra"] = extra;
  return j.dump(2) + "\n";
}

}  // namespace hitchin
