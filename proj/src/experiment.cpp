#include "relucx/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "relucx/errors.hpp"

namespace relucx {

NetworkAnalysis analyze_network(const ReluNetwork& net, const BuildOptions& options)
{
    NetworkAnalysis out;
    out.build = build_complex(net, options);
    out.complex = assemble(vertex_signs(out.build.vertices), net.input_dim());
    out.boundary = decision_boundary(out.complex);
    out.compactified = compactify(out.boundary);
    out.betti = betti_gf2(out.compactified);
    return out;
}

std::string architecture_label(const std::vector<int>& architecture)
{
    std::string out = "(";
    for (std::size_t i = 0; i < architecture.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(architecture[i]);
    }
    return out + ")";
}

std::vector<int> parse_architecture(const std::string& text)
{
    std::string body = text;
    if (!body.empty() && body.front() == '(' && body.back() == ')')
        body = body.substr(1, body.size() - 2);
    std::vector<int> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        }
        catch (const std::exception&) {
            throw std::invalid_argument("bad architecture entry \"" + item + "\"");
        }
        if (used != item.size())
            throw std::invalid_argument("bad architecture entry \"" + item + "\"");
        out.push_back(v);
    }
    validate_architecture(out);
    return out;
}

std::pair<double, double> mean_and_se(const std::vector<double>& values)
{
    if (values.empty())
        return {0.0, 0.0};
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= static_cast<double>(values.size());
    if (values.size() == 1)
        return {mean, 0.0};
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(values.size()))};
}

namespace {

TrialResult run_trial(const ExperimentConfig& config, int t)
{
    BuildOptions options;
    options.tol = config.tol;
    TrialResult result;
    result.trial = t;
    for (int attempt = 0;; ++attempt) {
        const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(t)
                                   + static_cast<std::uint64_t>(config.trials) * static_cast<std::uint64_t>(attempt);
        try {
            const NetworkAnalysis a = analyze_network(random_init(config.architecture, seed), options);
            result.seed = seed;
            result.redraws = attempt;
            result.betti = a.betti.betti;
            result.bounded = a.betti.bounded;
            result.unbounded = a.betti.unbounded;
            result.vertex_count = a.build.vertices.size();
            return result;
        }
        catch (const DegenerateNetwork&) {
            if (attempt >= config.max_redraws)
                throw;
        }
    }
}

}   // namespace

StatsRow run_experiment(const ExperimentConfig& config)
{
    validate_architecture(config.architecture);
    if (config.trials < 1)
        throw std::invalid_argument("experiment needs at least one trial");
    if (config.architecture[1] < config.architecture[0])
        throw ArchitectureUnsupported("first hidden layer narrower than the input");

    const std::size_t n = static_cast<std::size_t>(config.trials);
    std::vector<TrialResult> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < n; t = next++) {
            try {
                results[t] = run_trial(config, static_cast<int>(t));
            }
            catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        worker();
    }
    else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    StatsRow row;
    row.label = architecture_label(config.architecture);
    row.se_undefined = n == 1;
    const std::size_t dims = static_cast<std::size_t>(config.architecture.front());
    for (std::size_t k = 0; k < dims; ++k) {
        std::vector<double> vals;
        for (const auto& r : results)
            vals.push_back(static_cast<double>(r.betti.at(k)));
        const auto [m, se] = mean_and_se(vals);
        row.betti_mean.push_back(m);
        row.betti_se.push_back(se);
    }
    std::vector<double> bounded, unbounded;
    for (const auto& r : results) {
        bounded.push_back(static_cast<double>(r.bounded));
        unbounded.push_back(static_cast<double>(r.unbounded));
        row.total_redraws += r.redraws;
    }
    std::tie(row.bounded_mean, row.bounded_se) = mean_and_se(bounded);
    std::tie(row.unbounded_mean, row.unbounded_se) = mean_and_se(unbounded);
    row.trials = std::move(results);
    return row;
}

namespace {

std::string fixed(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}   // namespace

void write_stats_csv(std::ostream& out, const StatsRow& row, bool timestamp)
{
    if (timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        out << "# generated " << buf << '\n';
    }
    out << "row,architecture,trial,seed,redraws";
    for (std::size_t k = 0; k < row.betti_mean.size(); ++k)
        out << ",beta_" << k << ",beta_" << k << "_se";
    out << ",unbounded,unbounded_se,bounded,bounded_se,note\n";

    const std::string label = "\"" + row.label + "\"";
    out << "summary," << label << ",," << ',' << row.total_redraws;
    for (std::size_t k = 0; k < row.betti_mean.size(); ++k)
        out << ',' << fixed(row.betti_mean[k]) << ',' << fixed(row.betti_se[k]);
    out << ',' << fixed(row.unbounded_mean) << ',' << fixed(row.unbounded_se) << ',' << fixed(row.bounded_mean)
        << ',' << fixed(row.bounded_se) << ',' << (row.se_undefined ? "se_undefined_single_trial" : "") << '\n';

    for (const auto& t : row.trials) {
        out << "trial," << label << ',' << t.trial << ',' << t.seed << ',' << t.redraws;
        for (long b : t.betti)
            out << ',' << b << ',';
        out << ',' << t.unbounded << ",," << t.bounded << ",,\n";
    }
}

}   // namespace relucx
