#pragma once

#include <memory>
#include <vector>

#include "qd/rng.hpp"

namespace qd {

// Covariance-matrix-adaptation evolution strategy (classic formulation with
// positive, log-linear recombination weights and cumulative step-size
// adaptation). Scoring is external: tell() receives a ranking of the last
// batch, best first, so the same optimizer serves both plain function
// minimization and archive-improvement ranking.
class CmaEs {
public:
    CmaEs(int dim, int lambda, double sigma0, std::vector<double> mean0);
    CmaEs(CmaEs&&) noexcept;
    CmaEs& operator=(CmaEs&&) noexcept;
    ~CmaEs();

    // Sample a batch of lambda candidates from the current search
    // distribution. The raw batch is retained for the next tell().
    std::vector<std::vector<double>> ask(Rng& rng);

    // Consume a ranking (indices into the last ask batch, best first; at
    // least mu = lambda/2 entries). Returns false when the optimizer became
    // numerically unhealthy (step-size collapse/overflow, non-finite state,
    // failed eigendecomposition) and should be restarted.
    bool tell(const std::vector<int>& ranking);

    int dim() const;
    int lambda() const;
    double sigma() const;
    std::vector<double> mean() const;
    long generation() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace qd
