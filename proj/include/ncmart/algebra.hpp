#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncmart/operator.hpp"

namespace ncmart {

/// Unital *-closed subalgebra of M_N, represented by an orthonormal basis
/// for the trace inner product <a,b> = tau(a* b). Conditional expectation
/// onto it is the Hilbert-Schmidt orthogonal projection, which for unital
/// *-subalgebras is the unique trace-preserving conditional expectation.
class Subalgebra {
public:
    Subalgebra(TracialContext ctx, std::vector<Operator> orthonormal_basis);

    const TracialContext& context() const { return ctx_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Operator>& basis() const { return basis_; }

    /// E(x) = sum_i <b_i, x> b_i.
    Operator expect(const Operator& x) const;

    /// Residual of x against the span (Hilbert-Schmidt norm of x - E(x),
    /// relative to 1 + ||x||).
    double span_residual(const Operator& x) const;

    bool contains(const Operator& x, const Tolerances& tol = default_tol()) const {
        return span_residual(x) <= tol.span_residual_tol;
    }

private:
    TracialContext ctx_;
    std::vector<Operator> basis_;
};

/// Smallest unital *-closed multiplicatively closed subspace containing the
/// generators. Closure iterates {identity, adjoints, pairwise products} with
/// re-orthonormalization until the dimension stabilizes.
Subalgebra subalgebra_from_generators(TracialContext ctx,
                                      const std::vector<Operator>& generators);

/// Increasing chain S_1 <= S_2 <= ... <= S_T of subalgebras.
class Filtration {
public:
    Filtration(TracialContext ctx, std::vector<Subalgebra> levels);

    const TracialContext& context() const { return ctx_; }
    int depth() const { return static_cast<int>(levels_.size()); }
    const Subalgebra& level(int n) const { return levels_.at(n - 1); }  // 1-based
    const std::vector<Subalgebra>& levels() const { return levels_; }

    /// S_T is the full matrix algebra.
    bool terminal() const;

    /// E_n(x); n in 1..T.
    Operator expect(int n, const Operator& x) const { return level(n).expect(x); }

private:
    TracialContext ctx_;
    std::vector<Subalgebra> levels_;
};

/// Reconstructible description of how a filtration was built.
struct FiltrationDescriptor {
    std::string kind;  // "tensor" | "dyadic_diagonal" | "conjugated"
    int dim = 0;
    int depth = 0;
    std::uint64_t seed = 0;          // conjugated only
    std::string inner_kind;          // conjugated only
};

/// M_{2^T} with levels M_{2^k} (x) 1; genuinely non-commutative.
Filtration tensor_filtration(int depth);

/// Diagonal algebra of M_N with dyadic-partition block-constant levels;
/// embeds classical (commutative) martingales. N must be divisible by 2^T.
Filtration dyadic_diagonal_filtration(int dim, int depth);

/// Conjugate every basis element of a filtration by a unitary.
Filtration conjugate_filtration(const Filtration& f, const Operator& unitary);

/// Builder dispatch from a descriptor (conjugation unitary drawn from seed).
Filtration build_filtration(const FiltrationDescriptor& d);

}  // namespace ncmart
