#include "bpfem/projection.hpp"

#include <cmath>
#include <stdexcept>

namespace bpfem {

Vector clip_plus(const Vector& v, AdmissibleBox box) {
  if (!(box.upper > box.lower)) throw std::invalid_argument("clip_plus: empty admissible box");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double x = v[i];
    if (!std::isfinite(x)) throw std::domain_error("clip_plus: non-finite coefficient");
    out[i] = x < box.lower ? box.lower : (x > box.upper ? box.upper : x);
  }
  return out;
}

Vector complement(const Vector& v, const Vector& v_plus) {
  if (v.size() != v_plus.size()) throw std::invalid_argument("complement: size mismatch");
  return v - v_plus;
}

ActiveSets active_sets(const Vector& v, AdmissibleBox box) {
  ActiveSets sets;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] <= box.lower) sets.lower.push_back(static_cast<int>(i));
    if (v[i] >= box.upper) sets.upper.push_back(static_cast<int>(i));
  }
  return sets;
}

}  // namespace bpfem
