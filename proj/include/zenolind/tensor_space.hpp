// tensor_space.hpp — Tensor-factor bookkeeping for operators on a chain Hilbert space

#pragma once

#include <vector>

#include "zenolind/types.hpp"

namespace zenolind::ops {

// An ordered list of local dimensions plus the subset of factors that carry
// dissipation. Indexing is mixed-radix row-major with site 0 as the leftmost
// (most significant) factor; every module relies on this one convention.
class TensorSpace {
  public:
    TensorSpace() = default;
    TensorSpace(std::vector<int> dims, std::vector<int> dissipative_sites = {});

    const std::vector<int>& dims() const { return dims_; }
    const std::vector<int>& dissipative_sites() const { return dissipative_; }

    int n_sites() const { return static_cast<int>(dims_.size()); }
    int total_dim() const { return total_dim_; }
    // Product of dims over the dissipative factors (1 if none).
    int dissipative_dim() const { return d0_; }
    // Product of dims over the remaining factors.
    int free_dim() const { return total_dim_ / d0_; }

    std::vector<int> free_sites() const;
    std::vector<int> dissipative_dims() const;
    std::vector<int> free_dims() const;

    // Mixed-radix digit of a full-space index at a given site.
    int digit(int index, int site) const { return (index / strides_[site]) % dims_[site]; }
    int stride(int site) const { return strides_[site]; }

    // Index within the dissipative (resp. free) subspace obtained by reading
    // the digits of `index` on those factors, in ascending site order.
    int dissipative_index(int index) const;
    int free_index(int index) const;

    TensorSpace with_dissipative(std::vector<int> sites) const;

    bool operator==(const TensorSpace& other) const {
        return dims_ == other.dims_ && dissipative_ == other.dissipative_;
    }
    bool operator!=(const TensorSpace& other) const { return !(*this == other); }

  private:
    std::vector<int> dims_;
    std::vector<int> dissipative_; // sorted ascending, unique
    std::vector<int> strides_;     // strides_[s] = product of dims right of s
    int total_dim_ = 1;
    int d0_ = 1;
};

} // namespace zenolind::ops
