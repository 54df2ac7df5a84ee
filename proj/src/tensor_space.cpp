#include "zenolind/tensor_space.hpp"

#include <algorithm>
#include <stdexcept>

namespace zenolind::ops {

TensorSpace::TensorSpace(std::vector<int> dims, std::vector<int> dissipative_sites)
    : dims_(std::move(dims)), dissipative_(std::move(dissipative_sites)) {
    if (dims_.empty()) throw std::invalid_argument("TensorSpace: no factors");
    for (int d : dims_) {
        if (d < 2) throw std::invalid_argument("TensorSpace: all local dimensions must be >= 2");
    }
    std::sort(dissipative_.begin(), dissipative_.end());
    if (std::adjacent_find(dissipative_.begin(), dissipative_.end()) != dissipative_.end()) {
        throw std::invalid_argument("TensorSpace: duplicate dissipative site");
    }
    for (int s : dissipative_) {
        if (s < 0 || s >= n_sites()) throw std::invalid_argument("TensorSpace: dissipative site out of range");
    }

    strides_.assign(dims_.size(), 1);
    for (int s = n_sites() - 2; s >= 0; --s) strides_[s] = strides_[s + 1] * dims_[s + 1];
    total_dim_ = strides_.empty() ? 1 : strides_[0] * dims_[0];
    d0_ = 1;
    for (int s : dissipative_) d0_ *= dims_[s];
}

std::vector<int> TensorSpace::free_sites() const {
    std::vector<int> out;
    auto it = dissipative_.begin();
    for (int s = 0; s < n_sites(); ++s) {
        if (it != dissipative_.end() && *it == s) {
            ++it;
        } else {
            out.push_back(s);
        }
    }
    return out;
}

std::vector<int> TensorSpace::dissipative_dims() const {
    std::vector<int> out;
    out.reserve(dissipative_.size());
    for (int s : dissipative_) out.push_back(dims_[s]);
    return out;
}

std::vector<int> TensorSpace::free_dims() const {
    std::vector<int> out;
    for (int s : free_sites()) out.push_back(dims_[s]);
    return out;
}

int TensorSpace::dissipative_index(int index) const {
    int out = 0;
    for (int s : dissipative_) out = out * dims_[s] + digit(index, s);
    return out;
}

int TensorSpace::free_index(int index) const {
    int out = 0;
    auto it = dissipative_.begin();
    for (int s = 0; s < n_sites(); ++s) {
        if (it != dissipative_.end() && *it == s) {
            ++it;
            continue;
        }
        out = out * dims_[s] + digit(index, s);
    }
    return out;
}

TensorSpace TensorSpace::with_dissipative(std::vector<int> sites) const {
    return TensorSpace(dims_, std::move(sites));
}

} // namespace zenolind::ops
