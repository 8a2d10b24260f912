#ifndef CKM_CENTERED_HPP
#define CKM_CENTERED_HPP

#include <vector>

#include "ckm/instance.hpp"
#include "ckm/uncap.hpp"

namespace ckm {

// Instance whose metric is induced by a centered graph: the centers S form
// a clique preserving the base metric, and every other point hangs off its
// nearest center by a single pendant edge. Centers are fresh point ids
// appended after the base points, one per open facility of the seeding
// uncapacitated solution (sorted by facility id).
struct CenteredInstance {
    Instance base;
    std::vector<PointId> centers;     // fresh ids: base_size + j
    std::vector<PointId> center_src;  // source facility of centers[j]
    std::vector<PointId> center_of;   // size base_size: the center s^v of every base point
    Metric d_ell;                     // over F ∪ C ∪ S
    std::vector<std::vector<PointId>> f_cluster;  // F(s) per center; partitions F

    int base_size() const { return base.metric.size(); }
    int n_centers() const { return static_cast<int>(centers.size()); }

    // Pendant edge length d(v, s^v) of a base point.
    double pendant(PointId v) const { return d_ell(v, center_of[v]); }

    // Index of a center id within `centers`.
    int center_index(PointId s) const { return s - base_size(); }

    // Metric restricted to the centers (equals the base metric on sources).
    Metric center_metric() const;

    // The base instance viewed under d_ell, for exact solvers and oracles.
    Instance as_instance() const;
};

// Builds the centered instance from an uncapacitated solution computed on
// inst's metric. d_ell dominates the base metric, and each center sits at
// distance 0 from its source facility.
CenteredInstance build_centered(const Instance& inst, const UncapSolution& uncap);

// Reconstructs a CenteredInstance from an instance file that carries the
// centers (the `center` CLI output): center_of is the nearest center under
// the stored metric, ties to the lowest center index.
CenteredInstance centered_from_instance(const Instance& inst_with_centers,
                                        const std::vector<PointId>& centers);

struct EmbeddingGap {
    double lhs = 0.0;  // cost(phi, d)
    double mid = 0.0;  // cost(phi, d_ell)
    double rhs = 0.0;  // 3*cost(phi, d) + 4*psi_cost
};

// Evaluates one assignment under both metrics and the reduction bound.
// Holds for any client→facility map, not only optimal ones; a violation of
// lhs <= mid <= rhs (tolerance 1e-9) throws std::logic_error rather than
// passing silently.
EmbeddingGap embedding_gap(const Assignment& phi, double psi_cost,
                           const Instance& inst, const CenteredInstance& centered);

// Centered instance with geometrically rounded center–facility pendants.
// Facilities at pendant distance > D are removed; survivors fall into
// buckets i with pendant in ((1+eps)^-(i+1) D, (1+eps)^-i D], the last
// bucket closing at zero, and get pendant (1+eps)^-i D under d_prime.
struct BucketedInstance {
    double D = 0.0;
    double epsilon = 0.0;
    int n_buckets = 0;                  // ceil(log_{1+eps}(n/eps)) + 1
    std::vector<PointId> removed;       // facilities with pendant > D
    std::vector<PointId> surviving;     // the rest, in facility order
    std::vector<int> bucket_of;         // per base facility position; -1 = removed
    std::vector<double> bucket_radius;  // (1+eps)^-i D per bucket
    Metric d_prime;                     // >= d_ell pointwise
};

// n in the bucket-count formula is the client count of the centered
// instance. D = 0 is the degenerate guess that only zero-pendant facilities
// may open; D < 0 throws std::invalid_argument.
BucketedInstance build_buckets(const CenteredInstance& centered, double D, double epsilon);

// Sorted distinct values {d_ell(c, f)} — every possible largest
// client–facility distance of an optimal solution.
std::vector<double> candidate_D_values(const CenteredInstance& centered);

}  // namespace ckm

#endif  // CKM_CENTERED_HPP
