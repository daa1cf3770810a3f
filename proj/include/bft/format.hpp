#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "bft/rational.hpp"

namespace bft {

// Dimension vector (k0; k1, ..., kp) of a boundary-format tensor. The
// stored values are projective dimensions; factor j has linear dimension
// dim(j) = k[j] + 1. Boundary format means k0 = k1 + ... + kp.
//
// Elementary transformations can legitimately produce factors with k_i = 0;
// such formats are marked `relaxed` and rejected by classification.
struct Format {
  std::vector<int> k;
  bool relaxed = false;

  Format() = default;
  explicit Format(std::vector<int> ks, bool relaxed_ok = false) : k(std::move(ks)) {
    validate(relaxed_ok);
    relaxed = has_zero_factor();
  }

  int p() const { return static_cast<int>(k.size()) - 1; }
  int dim(int slot) const { return k[slot] + 1; }
  int num_slots() const { return static_cast<int>(k.size()); }

  std::vector<int> dims() const {
    std::vector<int> d(k.size());
    for (size_t i = 0; i < k.size(); ++i) d[i] = k[i] + 1;
    return d;
  }

  long long entry_count() const {
    long long n = 1;
    for (int ki : k) n *= (ki + 1);
    return n;
  }

  bool has_zero_factor() const {
    for (size_t i = 1; i < k.size(); ++i)
      if (k[i] == 0) return true;
    return false;
  }

  bool boundary() const {
    int sum = 0;
    for (size_t i = 1; i < k.size(); ++i) sum += k[i];
    return !k.empty() && k[0] == sum;
  }

  void validate(bool relaxed_ok) const {
    if (k.size() < 3)
      throw precondition_error("format needs p >= 2 factors besides the 0 slot");
    for (int ki : k)
      if (ki < 0) throw precondition_error("format dimensions must be nonnegative");
    if (!relaxed_ok)
      for (size_t i = 1; i < k.size(); ++i)
        if (k[i] < 1) throw precondition_error("factor dimensions k_i must be >= 1");
    if (k[0] < 1) throw precondition_error("k0 must be >= 1");
    if (!boundary()) throw precondition_error("not of boundary format: k0 != sum k_i");
  }

  bool operator==(const Format& o) const { return k == o.k; }

  std::string to_string() const {
    std::string s = "(" + std::to_string(k[0]) + ";";
    for (size_t i = 1; i < k.size(); ++i) {
      if (i > 1) s += ",";
      s += std::to_string(k[i]);
    }
    return s + ")";
  }
};

// Row-major offset, last index fastest.
inline long long flat_offset(const std::vector<int>& dims, const std::vector<int>& idx) {
  long long off = 0;
  for (size_t i = 0; i < dims.size(); ++i) off = off * dims[i] + idx[i];
  return off;
}

// Advance a multi-index in row-major order; returns false after the last one.
inline bool next_index(const std::vector<int>& dims, std::vector<int>& idx) {
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    if (++idx[i] < dims[i]) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace bft
