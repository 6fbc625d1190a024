#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ncmart/algebra.hpp"
#include "ncmart/operator.hpp"

namespace ncmart {

/// Finite adapted sequence x_1..x_T with E_n(x_{n+1}) = x_n.
struct MartingaleSequence {
    const Filtration* filtration = nullptr;
    std::vector<Operator> terms;

    int length() const { return static_cast<int>(terms.size()); }
    const Operator& term(int n) const { return terms.at(n - 1); }  // 1-based
    const Operator& final() const { return terms.back(); }

    /// Max over n of the adaptedness / martingale-property residuals.
    double martingale_residual() const;

    /// sup_n ||x_n||_1 (attained at n = T for positive martingales).
    double l1_norm() const;

    MartingaleSequence scaled(Complex c) const;
};

/// dx_1 = x_1, dx_n = x_n - x_{n-1} (convention x_0 = 0).
struct DifferenceSequence {
    const Filtration* filtration = nullptr;
    std::vector<Operator> diffs;

    int length() const { return static_cast<int>(diffs.size()); }
    const Operator& diff(int n) const { return diffs.at(n - 1); }  // 1-based

    /// Max over n >= 2 of ||E_{n-1}(dx_n)||_inf plus adaptedness residuals.
    double difference_residual() const;
};

enum class Side { Column, Row };

MartingaleSequence from_final(const Filtration& f, const Operator& x_inf);

DifferenceSequence differences(const MartingaleSequence& x);

/// Partial sums y_n = sum_{k<=n} dx_k.
MartingaleSequence accumulate(const DifferenceSequence& dx);

/// S_{C,upto} = (sum_{k<=upto} |dx_k|^2)^{1/2}, or the row variant with dx_k*.
Operator square_function(const DifferenceSequence& dx, Side side, int upto);

inline Operator square_function(const DifferenceSequence& dx, Side side) {
    return square_function(dx, side, dx.length());
}

/// Norm of the full square function; p = infinity allowed, and
/// p = weak_l1_marker selects the weak-L1 quasi-norm.
constexpr double weak_l1_marker = -1.0;
double sequence_norm(const DifferenceSequence& dx, Side side, double p);

/// Hardy-norm estimate. For p >= 2 the exact max of column and row values;
/// for 1 <= p < 2 an upper bound: the minimum over candidate decompositions
/// x = y + z of col(y) + row(z). (x,0) and (0,x) are always candidates.
struct HardyValue {
    double value = 0.0;
    bool exact = false;          // true iff p >= 2 (max form)
    int attaining_candidate = -1;  // index into the extended candidate list
};

using Decomposition = std::pair<MartingaleSequence, MartingaleSequence>;

HardyValue hardy_norm(const MartingaleSequence& x, double p,
                      const std::vector<Decomposition>& candidates = {});

/// E_n(x_{n+1}) <= x_n for all n (Hermitian terms required).
bool is_supermartingale(const MartingaleSequence& x,
                        const Tolerances& tol = default_tol());

/// x_inf = G* G for a Ginibre G, scaled so tau(x_inf) = norm1.
MartingaleSequence random_positive_martingale(const Filtration& f,
                                              std::uint64_t seed, double norm1);

/// Heavy-tailed variant: unitarily conjugated spiky diagonal (a few large
/// eigenvalues over a small bulk), scaled so tau(x_inf) = norm1. Stresses
/// the weak-L1 tail that smooth Wishart draws under-sample.
MartingaleSequence random_spiky_martingale(const Filtration& f,
                                           std::uint64_t seed, double norm1);

}  // namespace ncmart
