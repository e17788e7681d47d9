#pragma once

#include "kinklab/potential.hpp"

// One phi4 profile per test binary; building it takes a fraction of a second.
inline const kinklab::KinkProfile& phi4_profile() {
  static const kinklab::KinkProfile p = kinklab::compute_kink_profile(kinklab::phi4_potential());
  return p;
}
