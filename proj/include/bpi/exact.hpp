#pragma once

#include <vector>

#include "bpi/model.hpp"
#include "bpi/pmf.hpp"

namespace bpi {

/// Stopping rule for the fixed-point iterations.
struct IterationControl {
  double tol = 1e-10;  // total variation between successive iterates
  int max_iterations = 10000;
};

using Index = Eigen::Index;

/// Z_n of the branching process started from one ancestor.
Pmf generation_size_pmf(const Law &offspring, int n, Index cutoff);
/// T_n = 1 + Z_1 + ... + Z_n.
Pmf progeny_pmf(const Law &offspring, int n, Index cutoff);
/// T_0 .. T_{n_max}.
std::vector<Pmf> progeny_sequence(const Law &offspring, int n_max, Index cutoff);
/// Total progeny T, iterated until successive T_n agree to tol.
Pmf total_progeny_pmf(const Law &offspring, Index cutoff, IterationControl control = {});

/// X_n from X_0 = 0.
Pmf population_pmf(const ModelParams &params, int n, Index cutoff);
/// Stationary law of X_n.
Pmf stationary_population_pmf(const ModelParams &params, Index cutoff, IterationControl control = {});

/// Family of one immigrant that has j generations left: eta copies of T_j.
Pmf immigrant_line_pmf(const ModelParams &params, const Pmf &progeny, Index cutoff);

/// S_n = X_1 + ... + X_n as the independent sum of immigrant lines.
Pmf total_population_pmf(const ModelParams &params, int n, Index cutoff);
/// S_n for every n in ns (ascending), sharing the line computations.
std::vector<Pmf> total_population_sequence(const ModelParams &params, const std::vector<int> &ns,
                                           Index cutoff);

/// n independent complete immigrant lines, each eta copies of T.
Pmf completed_lines_pmf(const ModelParams &params, int n, Index cutoff, IterationControl control = {});
/// Progeny after time n of the population alive at time n: theta o X_n copies of T.
Pmf residual_progeny_pmf(const ModelParams &params, int n, Index cutoff, IterationControl control = {});
/// Same with X_n replaced by the stationary law.
Pmf residual_progeny_limit_pmf(const ModelParams &params, Index cutoff, IterationControl control = {});

/// Bounds I1 - I3 <= P(S_n - d_n > x) <= I2 + I4 from the split S_n = S_{n,1} - S_{n,2}.
struct SandwichBounds {
  double lower;
  double upper;
  Interval exact;  // P(S_n - d_n > x) from the direct computation
};

/// Evaluates the bounds on each x in the grid. Uses the finite-n residual progeny.
std::vector<SandwichBounds> sandwich_bounds(const ModelParams &params, int n, double eps,
                                            const std::vector<double> &xs, Index cutoff,
                                            IterationControl control = {});

}  // namespace bpi
