#include "relucx/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace relucx {

void SampleGrid::validate() const
{
    if (resolution < 2)
        throw std::invalid_argument("grid resolution must be at least 2");
    if (lower.size() != upper.size() || lower.empty())
        throw std::invalid_argument("grid bounds have mismatched dimensions");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(upper[i] > lower[i]))
            throw std::invalid_argument("grid box has non-positive extent on axis " + std::to_string(i));
}

SampleGrid SampleGrid::cube(int dim, double half, int resolution)
{
    return SampleGrid{std::vector<double>(static_cast<std::size_t>(dim), -half),
                      std::vector<double>(static_cast<std::size_t>(dim), half), resolution};
}

std::set<SignSequence> sample_region_signs(const ReluNetwork& net, const SampleGrid& grid,
                                           double exclusion_tol, unsigned threads)
{
    grid.validate();
    const int n0 = net.input_dim();
    if (static_cast<int>(grid.lower.size()) != n0)
        throw std::invalid_argument("grid dimension does not match network input");
    const std::size_t res = static_cast<std::size_t>(grid.resolution);
    std::size_t total = 1;
    for (int i = 0; i < n0; ++i)
        total *= res;

    auto coordinate = [&](std::size_t axis, std::size_t i) {
        return grid.lower[axis] + (grid.upper[axis] - grid.lower[axis]) * static_cast<double>(i)
                                      / static_cast<double>(res - 1);
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, total));
    std::vector<std::set<SignSequence>> partial(workers);
    auto run = [&](std::size_t w) {
        Eigen::VectorXd x(n0);
        SignSequence s(net.node_count());
        for (std::size_t p = w; p < total; p += workers) {
            std::size_t rest = p;
            for (int a = 0; a < n0; ++a) {
                x(a) = coordinate(static_cast<std::size_t>(a), rest % res);
                rest /= res;
            }
            const Eigen::VectorXd vals = node_map_values(net, x);
            bool keep = true;
            for (Eigen::Index i = 0; i < vals.size() && keep; ++i) {
                if (std::abs(vals(i)) < exclusion_tol)
                    keep = false;
                else
                    s.set(static_cast<std::size_t>(i), vals(i) > 0 ? 1 : -1);
            }
            if (keep)
                partial[w].insert(s);
        }
    };
    if (workers == 1) {
        run(0);
    }
    else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
    }
    std::set<SignSequence> out;
    for (auto& part : partial)
        out.merge(part);
    return out;
}

std::pair<std::uint64_t, std::uint64_t> arrangement_counts(int n0, int n1)
{
    if (n0 < 0 || n1 < n0)
        throw std::invalid_argument("arrangement_counts needs 0 <= n0 <= n1");
    auto choose = [](std::uint64_t n, std::uint64_t k) {
        std::uint64_t r = 1;
        for (std::uint64_t i = 1; i <= k; ++i)
            r = r * (n - k + i) / i;
        return r;
    };
    std::uint64_t regions = 0;
    for (int i = 0; i <= n0; ++i)
        regions += choose(static_cast<std::uint64_t>(n1), static_cast<std::uint64_t>(i));
    return {choose(static_cast<std::uint64_t>(n1), static_cast<std::uint64_t>(n0)), regions};
}

bool perturb_check(const ReluNetwork& net, const Vertex& vertex, double epsilon, int trials,
                   std::uint64_t seed)
{
    const int n0 = net.input_dim();
    const std::size_t n = net.node_count();
    if (vertex.signs.size() != n || vertex.coords.size() != n0)
        throw std::invalid_argument("perturb_check: vertex does not match network");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<char> seen_pos(n, 0), seen_neg(n, 0);
    Eigen::VectorXd dir(n0);
    for (int t = 0; t < trials; ++t) {
        for (int a = 0; a < n0; ++a)
            dir(a) = normal(rng);
        dir *= epsilon / dir.norm();
        const Eigen::VectorXd vals = node_map_values(net, vertex.coords + dir);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = vals(static_cast<Eigen::Index>(i));
            const int s = vertex.signs[i];
            if (s == 0) {
                seen_pos[i] |= v > 0;
                seen_neg[i] |= v < 0;
            }
            else if (!(v * s > 0)) {
                return false;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (vertex.signs[i] == 0 && !(seen_pos[i] && seen_neg[i]))
            return false;
    return true;
}

bool local_region_witness(const ReluNetwork& net, const SignSequence& region,
                          const std::vector<Vertex>& vertices)
{
    if (!region.all_nonzero())
        return false;
    const std::vector<AffineFunctional> maps = region_affine_maps(net, region, net.layer_count());
    const int n0 = net.input_dim();
    for (const Vertex& v : vertices) {
        if (v.signs.size() != region.size() || !is_face(v.signs, region))
            continue;
        Eigen::MatrixXd jac(n0, n0);
        Eigen::VectorXd target(n0);
        for (int r = 0; r < n0; ++r) {
            const std::size_t z = v.zero_set[static_cast<std::size_t>(r)];
            jac.row(r) = maps[z].normal.transpose();
            target(r) = region[z];
        }
        const Eigen::VectorXd dir = jac.fullPivLu().solve(target);
        if (!dir.allFinite() || dir.norm() == 0.0)
            continue;
        for (double step = 1e-2; step >= 1e-10; step *= 0.1) {
            const Eigen::VectorXd x = v.coords + (step * (1.0 + v.coords.norm()) / dir.norm()) * dir;
            const Eigen::VectorXd vals = node_map_values(net, x);
            bool match = true;
            for (std::size_t i = 0; i < region.size() && match; ++i)
                match = vals(static_cast<Eigen::Index>(i)) * region[i] > 0;
            if (match)
                return true;
        }
    }
    return false;
}

SampleGrid vertex_bounding_grid(const std::vector<Vertex>& vertices, int n0, int resolution, double margin)
{
    std::vector<double> lo(static_cast<std::size_t>(n0), -1.0), hi(static_cast<std::size_t>(n0), 1.0);
    if (!vertices.empty()) {
        for (int a = 0; a < n0; ++a) {
            lo[static_cast<std::size_t>(a)] = hi[static_cast<std::size_t>(a)] = vertices.front().coords(a);
            for (const auto& v : vertices) {
                lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], v.coords(a));
                hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], v.coords(a));
            }
        }
    }
    for (std::size_t a = 0; a < lo.size(); ++a) {
        const double pad = margin * (hi[a] - lo[a]) + 1.0;
        lo[a] -= pad;
        hi[a] += pad;
    }
    return SampleGrid{lo, hi, resolution};
}

OracleReport compare_regions(const ReluNetwork& net, const std::vector<SignSequence>& built_regions,
                             const std::set<SignSequence>& sampled, const std::vector<Vertex>& vertices)
{
    OracleReport report;
    report.regions_builder = built_regions.size();
    report.regions_sampled = sampled.size();
    const std::set<SignSequence> built(built_regions.begin(), built_regions.end());
    for (const auto& s : sampled)
        if (!built.contains(s))
            report.unexpected.push_back(s);
    for (const auto& r : built) {
        if (sampled.contains(r))
            continue;
        report.missing.push_back(r);
        if (!local_region_witness(net, r, vertices))
            report.unwitnessed.push_back(r);
    }
    return report;
}

}   // namespace relucx
