#include "femtosim/access.hpp"

#include <numeric>

namespace femtosim {

Assignment assign(const Realization& r, const NetworkParams& p,
                  const RngStream& base) {
  const std::size_t nf = r.faps.size();
  const std::size_t nm = r.mus.size();
  Assignment a;
  a.candidate.assign(nm, Assignment::mbs);
  a.serving.assign(nm, Assignment::mbs);
  a.served.resize(nf);

  const double k2 = p.kappa * p.kappa;
  std::vector<std::vector<std::size_t>> cands(nf);
  for (std::size_t u = 0; u < nm; ++u) {
    const Point& pu = r.mus[u];
    const double lim = k2 * (pu.x * pu.x + pu.y * pu.y);
    double best = 0.0;
    std::size_t best_fap = Assignment::mbs;
    for (std::size_t i = 0; i < nf; ++i) {
      const double d2 = dist2(pu, r.faps[i]);
      if (d2 <= lim && (best_fap == Assignment::mbs || d2 < best)) {
        best = d2;
        best_fap = i;
      }
    }
    a.candidate[u] = best_fap;
    if (best_fap != Assignment::mbs) cands[best_fap].push_back(u);
  }

  for (std::size_t i = 0; i < nf; ++i) {
    auto& list = cands[i];
    const std::uint64_t cap =
        p.n_c > r.fu_counts[i] ? p.n_c - r.fu_counts[i] : 0;
    std::size_t take = list.size();
    if (cap < take) {
      // Full Fisher-Yates, independent of cap; admitted set = prefix.
      RngStream s = base.child("admit", i);
      for (std::size_t j = list.size(); j > 1; --j)
        std::swap(list[j - 1], list[s.bounded(j)]);
      take = static_cast<std::size_t>(cap);
    }
    for (std::size_t j = 0; j < take; ++j) {
      a.serving[list[j]] = i;
      a.served[i].push_back(list[j]);
    }
  }
  return a;
}

UserClasses classify(const Realization& r, const Assignment& a) {
  UserClasses c;
  const std::size_t tagged = r.tagged_fap;
  for (std::size_t u = 0; u < r.mus.size(); ++u) {
    const std::size_t cand = a.candidate[u];
    const std::size_t srv = a.serving[u];
    if (srv != Assignment::mbs) {
      (srv == tagged ? c.served_tagged : c.other_served).push_back(u);
    } else if (cand == Assignment::mbs) {
      c.out.push_back(u);
    } else {
      (cand == tagged ? c.ns_tagged : c.in_other).push_back(u);
    }
  }
  return c;
}

}  // namespace femtosim
