#ifndef COVOTER_STATS_HPP
#define COVOTER_STATS_HPP

#include <optional>
#include <vector>

#include "covoter/simulator.hpp"

namespace covoter {

/** Equal-width histogram on [0,1]. */
struct Histogram {
    std::vector<double> edges;     // bins+1
    std::vector<long long> counts; // bins
    long long total = 0;

    int bins() const { return static_cast<int>(counts.size()); }
    double mass(int b) const { return total == 0 ? 0.0 : static_cast<double>(counts[b]) / total; }
};

enum class Observable { y, type };

/** Histogram of the chosen per-vertex observable. */
Histogram type_histogram(const Snapshot& snap, int bins, Observable obs = Observable::y);

/** L1 distance between bin masses and the Beta(a,b) bin masses (computed
 *  from the exact regularized incomplete Beta CDF). */
double beta_l1(const Histogram& h, double a, double b);

/** Plus-fraction path sampled on an observer grid. */
struct FractionTrajectory {
    int n = 0;
    std::vector<double> t;
    std::vector<double> frac_plus;
};

/** First sampled time with min(N+, N-)/n <= eps; nullopt if never.
 *  eps in [0, 0.5). */
std::optional<double> consensus_time(const FractionTrajectory& traj, double eps);

struct Polarisation {
    double disagree_density = 0; // active opposite-opinion edges / C(n,2)
    double disagree_share = 0;   // same numerator / all active edges (0 if none)
};

Polarisation polarisation(const Snapshot& snap);

} // namespace covoter

#endif
