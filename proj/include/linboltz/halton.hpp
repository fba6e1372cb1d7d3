#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace linboltz {

// Halton low-discrepancy sequence. The seed acts as an index offset so that
// different seeds give different (still deterministic) point sets.
class HaltonSequence {
public:
    HaltonSequence(int dim, std::uint64_t seed)
        : dim_(dim), index_(seed + 1) {
        static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                     23, 29, 31, 37, 41, 43, 47, 53};
        if (dim < 1 || dim > 16)
            throw std::invalid_argument("HaltonSequence: dimension out of range");
        for (int i = 0; i < dim; ++i) bases_.push_back(primes[i]);
    }

    // Next point in [0,1)^dim.
    std::vector<double> next() {
        std::vector<double> p(dim_);
        for (int i = 0; i < dim_; ++i) p[i] = radical_inverse(index_, bases_[i]);
        ++index_;
        return p;
    }

    // Next point mapped to the centered box given by half-widths.
    std::vector<double> next_in_box(const std::vector<double>& half_width) {
        std::vector<double> p = next();
        for (int i = 0; i < dim_; ++i) p[i] = (2.0 * p[i] - 1.0) * half_width[i];
        return p;
    }

private:
    static double radical_inverse(std::uint64_t k, int base) {
        double inv = 1.0 / base, f = inv, r = 0.0;
        while (k > 0) {
            r += f * static_cast<double>(k % base);
            k /= base;
            f *= inv;
        }
        return r;
    }

    int dim_;
    std::uint64_t index_;
    std::vector<int> bases_;
};

}  // namespace linboltz
