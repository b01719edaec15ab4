#ifndef RELUCX_EXPERIMENT_HPP
#define RELUCX_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "relucx/builder.hpp"
#include "relucx/model.hpp"
#include "relucx/topology.hpp"

namespace relucx {

/// Everything computed for one network: vertices, complex, decision boundary and its Betti numbers.
struct NetworkAnalysis
{
    LayerBuildState build;
    CubicalComplex complex;
    CubicalComplex boundary;
    ChainComplexGF2 compactified;
    BettiReport betti;
};

NetworkAnalysis analyze_network(const ReluNetwork& net, const BuildOptions& options = {});

struct ExperimentConfig
{
    std::vector<int> architecture;
    int trials = 50;
    std::uint64_t base_seed = 0;
    Tolerances tol;
    /// Concurrent trials.
    unsigned threads = 1;
    /// Degenerate draws tolerated per trial before giving up.
    int max_redraws = 100;
};

struct TrialResult
{
    int trial = 0;
    /// Seed of the network that was actually analysed.
    std::uint64_t seed = 0;
    int redraws = 0;
    std::vector<long> betti;
    long bounded = 0;
    long unbounded = 0;
    std::size_t vertex_count = 0;
};

struct StatsRow
{
    std::string label;
    std::vector<double> betti_mean;
    std::vector<double> betti_se;
    double bounded_mean = 0.0;
    double bounded_se = 0.0;
    double unbounded_mean = 0.0;
    double unbounded_se = 0.0;
    int total_redraws = 0;
    /// Set when trials == 1: standard errors are reported as 0 but undefined.
    bool se_undefined = false;
    std::vector<TrialResult> trials;
};

/// "(2,5,1)"
std::string architecture_label(const std::vector<int>& architecture);

/// Parses "2,5,1" or "(2,5,1)".
std::vector<int> parse_architecture(const std::string& text);

/// Sample mean and standard error (sample standard deviation / sqrt(n); 0 when n == 1).
std::pair<double, double> mean_and_se(const std::vector<double>& values);

/**
 * Trial t analyses random_init(architecture, base_seed + t).  A draw that
 * raises DegenerateNetwork is replaced by seed base_seed + t + trials * r for
 * redraw r = 1, 2, ...  Results are aggregated in trial order.
 */
StatsRow run_experiment(const ExperimentConfig& config);

/// Summary row plus one row per trial; the first line is a timestamp comment when requested.
void write_stats_csv(std::ostream& out, const StatsRow& row, bool timestamp = true);

}   // namespace relucx

#endif
