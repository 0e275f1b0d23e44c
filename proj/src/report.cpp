#include "fhg/report.hpp"

#include <sstream>

namespace fhg {

ResidualReport make_report(std::string name, std::string detail, int n, int j,
                           const Real& residual, const Real& tolerance, std::string note) {
  ResidualReport rep;
  rep.name = std::move(name);
  rep.detail = std::move(detail);
  rep.n = n;
  rep.j = j;
  rep.residual = residual;
  rep.tolerance = tolerance;
  rep.pass = residual <= tolerance;
  rep.note = std::move(note);
  return rep;
}

std::string to_line(const ResidualReport& rep) {
  std::ostringstream os;
  os << "name=" << rep.name;
  if (rep.n >= 0) os << " n=" << rep.n;
  if (rep.j >= 0) os << " j=" << rep.j;
  if (rep.z) os << " z=" << to_string(rep.z->re, 20) << "," << to_string(rep.z->im, 20);
  os << " residual=" << to_string(rep.residual, 12);
  os << " tol=" << to_string(rep.tolerance, 6);
  os << " pass=" << (rep.pass ? 1 : 0);
  if (!rep.detail.empty()) os << " detail=\"" << rep.detail << "\"";
  if (!rep.note.empty()) os << " note=\"" << rep.note << "\"";
  return os.str();
}

bool all_pass(const std::vector<ResidualReport>& reps) {
  for (const auto& r : reps)
    if (!r.pass) return false;
  return true;
}

std::vector<std::pair<std::string, Real>> max_residual_by_name(
    const std::vector<ResidualReport>& reps) {
  std::vector<std::pair<std::string, Real>> out;
  for (const auto& r : reps) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& p) { return p.first == r.name; });
    if (it == out.end())
      out.emplace_back(r.name, r.residual);
    else
      it->second = max(it->second, r.residual);
  }
  return out;
}

}  // namespace fhg
