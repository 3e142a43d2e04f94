#ifndef MBMOM_LATTICE_HPP
#define MBMOM_LATTICE_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "model.hpp"

namespace mbmom {

/// Mixed-radix index over the population box {n : 0 <= n <= bound}.
/// Index order is lexicographic with the last class varying fastest, so
/// n - 1_r always has a smaller index than n.
class PopulationLattice {
public:
    explicit PopulationLattice(IntVector bound) : bound_(std::move(bound)), stride_(bound_.size()) {
        std::uint64_t s = 1;
        for (std::size_t r = bound_.size(); r-- > 0;) {
            stride_[r] = static_cast<std::size_t>(s);
            s *= static_cast<std::uint64_t>(bound_[r] + 1);
            if (s > std::numeric_limits<std::uint32_t>::max()) s = std::numeric_limits<std::uint32_t>::max();
        }
        size_ = s;
    }

    /// Number of lattice points, saturated at 2^32 - 1.
    std::uint64_t size() const { return size_; }
    const IntVector& bound() const { return bound_; }
    std::size_t stride(std::size_t r) const { return stride_[r]; }

    std::size_t index(const IntVector& n) const {
        std::size_t i = 0;
        for (std::size_t r = 0; r < n.size(); ++r) i += static_cast<std::size_t>(n[r]) * stride_[r];
        return i;
    }

    /// Advances n to the next point in index order; false after the last one.
    bool next(IntVector& n) const {
        for (std::size_t r = n.size(); r-- > 0;) {
            if (n[r] < bound_[r]) {
                ++n[r];
                return true;
            }
            n[r] = 0;
        }
        return false;
    }

private:
    IntVector bound_;
    std::vector<std::size_t> stride_;
    std::uint64_t size_ = 1;
};

}  // namespace mbmom

#endif  // MBMOM_LATTICE_HPP
