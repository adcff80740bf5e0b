#pragma once

#include "bpfem/fe_space.hpp"

namespace bpfem {

struct AdmissibleBox {
  double lower = 0.0;
  double upper = 1.0;
};

// Componentwise clip onto [lower, upper].
Vector clip_plus(const Vector& v, AdmissibleBox box);

// v - v_plus.
Vector complement(const Vector& v, const Vector& v_plus);

struct ActiveSets {
  std::vector<int> lower;
  std::vector<int> upper;
};

// Entries at or beyond a bound count as active.
ActiveSets active_sets(const Vector& v, AdmissibleBox box);

}  // namespace bpfem
