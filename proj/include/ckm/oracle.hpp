#ifndef CKM_ORACLE_HPP
#define CKM_ORACLE_HPP

#include "ckm/instance.hpp"
#include "ckm/transport.hpp"
#include "ckm/uncap.hpp"

namespace ckm {

// Size guard for the exhaustive solvers. The defaults are the supported
// envelope; force=true runs anyway (may be very slow).
struct OracleLimits {
    int max_facilities = 12;
    int max_k = 4;
    bool force = false;
};

struct OracleResult {
    Assignment assignment;
    double cost = 0.0;
};

// Ground-truth CKM optimum: enumerates every <=k-subset of facilities
// (colex order, capacity-infeasible subsets pruned early) and solves the
// transportation problem for each. Throws RefusedScaleError beyond the
// guard and InfeasibleError when no subset can serve all clients.
OracleResult exact_ckm(const Instance& inst, const OracleLimits& limits = {});

// Ground-truth uncapacitated k-median optimum: k-subsets with nearest
// assignment (ties to the lowest facility index).
OracleResult exact_uncap_kmedian(const Instance& inst, int k, const OracleLimits& limits = {});

}  // namespace ckm

#endif  // CKM_ORACLE_HPP
