#pragma once

#include <vector>

#include "ncmart/cuculescu.hpp"
#include "ncmart/martingale.hpp"

namespace ncmart {

/// One positive component of a decomposition: the positive martingale, its
/// dyadic families, and the truncated difference sequences.
struct PositivePartDecomposition {
    Complex coefficient;  // weight of this part in the recombination
    MartingaleSequence part;
    DyadicFamilies families;
    DifferenceSequence dy;
    DifferenceSequence dz;
};

/// Output of the two-martingale splitting: x = y + z with dy triangularly
/// truncated (upper, including the diagonal) and dz the strict lower rest,
/// both martingale difference sequences.
struct DecompositionResult {
    MartingaleSequence y;
    MartingaleSequence z;
    DifferenceSequence dy;
    DifferenceSequence dz;
    std::vector<PositivePartDecomposition> parts;  // one for positive input
};

/// Theorem-style decomposition. Positive martingales follow the direct
/// construction; general ones are split into at most four positive
/// martingales (Hermitian/anti-Hermitian, then positive/negative spectral
/// parts of x_inf), each decomposed and recombined.
DecompositionResult decompose(const MartingaleSequence& x,
                              const Tolerances& tol = default_tol());

struct TheoremReport {
    double diff_residual = 0.0;       // (i) martingale-difference residual
    double reconstruction = 0.0;      // (ii) max ||x_n - y_n - z_n||
    double l2_value = 0.0;            // (iii) ||dy||_{L2(l2_C)} + ||dz||_{L2(l2_R)}
    double l2_bound = 0.0;            //      2 ||x||_2
    double l2_ratio = 0.0;
    double weak_value = 0.0;          // (iv) weak-L1 column + row values
    double weak_bound = 0.0;          //      ||x||_1
    double weak_ratio = 0.0;          //      empirical K-hat contribution
    double lemma34_residual = 0.0;    // |dy_n|^2 vs the triple-sum expansion
};

TheoremReport verify_theorem31(const DecompositionResult& result,
                               const MartingaleSequence& x,
                               const Tolerances& tol = default_tol());

}  // namespace ncmart
