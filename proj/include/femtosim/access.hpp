// Open-access policy with a per-FAP backhaul cap.
//
// A macro user qualifies for a FAP when its distance to the FAP is at most
// kappa times its distance to the macro base station; its candidate is the
// nearest qualifying FAP.  Femto users always occupy their own FAP, so a
// FAP with n_f femto users can admit at most (n_c - n_f)+ macro users; when
// more candidates compete, an unbiased random subset is admitted.  Everyone
// else is served by the macro base station.

#pragma once

#include <cstdint>
#include <vector>

#include "femtosim/deployment.hpp"

namespace femtosim {

struct Assignment {
  static constexpr std::size_t mbs = static_cast<std::size_t>(-1);

  std::vector<std::size_t> candidate;  // per MU: FAP index, or mbs if none
  std::vector<std::size_t> serving;    // per MU: FAP index, or mbs
  std::vector<std::vector<std::size_t>> served;  // per FAP: admitted MUs

  std::size_t mbs_served_count() const noexcept {
    std::size_t n = 0;
    for (std::size_t s : serving)
      if (s == mbs) ++n;
    return n;
  }
};

// The admission lottery for FAP i draws from base.child("admit", i) and is
// independent of n_c, so raising n_c with the same base stream only ever
// promotes users from the macro base station to a FAP.
Assignment assign(const Realization& r, const NetworkParams& p,
                  const RngStream& base);

// Disjoint classes of macro users relative to the tagged FAP; together with
// other_served they partition the macro users.
struct UserClasses {
  std::vector<std::size_t> served_tagged;  // admitted by the tagged FAP
  std::vector<std::size_t> ns_tagged;      // tagged candidate, left to the MBS
  std::vector<std::size_t> other_served;   // admitted by another FAP
  std::vector<std::size_t> in_other;       // other FAP's candidate, left to MBS
  std::vector<std::size_t> out;            // no coverage anywhere
};

UserClasses classify(const Realization& r, const Assignment& a);

}  // namespace femtosim
