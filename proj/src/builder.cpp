#include "relucx/builder.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>

#include "relucx/errors.hpp"

namespace relucx {

namespace {

// Calls fn(indices) for every k-subset of {0, ..., n-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn)
{
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        fn(static_cast<const std::vector<std::size_t>&>(idx));
        if (k == 0)
            return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1))
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

struct SystemSolution
{
    Eigen::VectorXd x;
    double condition = 0.0;
    double residual = 0.0;
};

SystemSolution solve_system(const std::vector<const AffineFunctional*>& eqs, int n0)
{
    Eigen::MatrixXd a(n0, n0);
    Eigen::VectorXd rhs(n0);
    for (int r = 0; r < n0; ++r) {
        a.row(r) = eqs[static_cast<std::size_t>(r)]->normal.transpose();
        rhs(r) = -eqs[static_cast<std::size_t>(r)]->offset;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    SystemSolution out;
    const double smin = sv(n0 - 1);
    out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    out.x = svd.solve(rhs);
    for (const AffineFunctional* f : eqs)
        out.residual = std::max(out.residual, std::abs((*f)(out.x)));
    return out;
}

int strict_sign(double v)
{
    return v > 0.0 ? 1 : -1;
}

bool coords_agree(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double merge_tol)
{
    return (a - b).norm() <= merge_tol * (1.0 + a.norm());
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Keeps the discovery with smaller residual so the result does not depend on
// the order in which regions were visited.
void merge_vertex(std::map<SignSequence, Vertex>& merged, Vertex v, double merge_tol)
{
    auto it = merged.find(v.signs);
    if (it == merged.end()) {
        merged.emplace(v.signs, std::move(v));
        return;
    }
    Vertex& kept = it->second;
    if (!coords_agree(kept.coords, v.coords, merge_tol))
        throw DuplicateMismatch("sign sequence " + v.signs.to_string() + " found at two distinct points");
    if (v.max_residual < kept.max_residual
        || (v.max_residual == kept.max_residual && lex_less(v.coords, kept.coords)))
        kept = std::move(v);
}

DegenerateNetwork near_zero(const ReluNetwork& net, std::size_t flat, double value, const std::string& where)
{
    return DegenerateNetwork(DegenerateNetwork::Kind::NearZeroEvaluation, net.node(flat).layer,
                             static_cast<long>(flat), value,
                             std::string("node map ") + std::to_string(flat) + " evaluates to "
                                 + std::to_string(value) + " at " + where);
}

struct RegionTask
{
    const SignSequence* region;
    const std::vector<std::size_t>* incident;
};

// New vertices of layer k in the closure of one region.
std::vector<Vertex> region_vertices(const ReluNetwork& net, int k, const LayerBuildState& state,
                                    const RegionTask& task, const Tolerances& tol)
{
    const int n0 = net.input_dim();
    const std::size_t old_len = net.layer_offset(k);
    const std::size_t nk = static_cast<std::size_t>(net.layer_width(k));
    const SignSequence& region = *task.region;

    if (task.incident->empty())
        throw DegenerateNetwork(DegenerateNetwork::Kind::NoIncidentVertex, k - 1, -1, 0.0,
                                "region " + region.to_string() + " has no incident vertex");

    const std::vector<AffineFunctional> maps = region_affine_maps(net, region, k);

    // pools[q]: q-subsets of older node maps that meet at a face of the region.
    std::vector<std::set<std::vector<std::size_t>>> pools(static_cast<std::size_t>(n0));
    for (std::size_t vi : *task.incident) {
        const auto& zs = state.vertices[vi].zero_set;
        for (std::size_t q = 0; q < pools.size(); ++q)
            for_each_subset(zs.size(), q, [&](const std::vector<std::size_t>& pick) {
                std::vector<std::size_t> subset;
                subset.reserve(q);
                for (std::size_t p : pick)
                    subset.push_back(zs[p]);
                pools[q].insert(std::move(subset));
            });
    }

    std::vector<Vertex> found;
    std::vector<const AffineFunctional*> eqs(static_cast<std::size_t>(n0));
    std::vector<char> solved_old(old_len, 0);

    for (std::size_t ell = 1; ell <= std::min<std::size_t>(static_cast<std::size_t>(n0), nk); ++ell) {
        const std::size_t q = static_cast<std::size_t>(n0) - ell;
        for_each_subset(nk, ell, [&](const std::vector<std::size_t>& fresh) {
            for (const auto& older : pools[q]) {
                for (std::size_t i = 0; i < q; ++i)
                    eqs[i] = &maps[older[i]];
                for (std::size_t i = 0; i < ell; ++i)
                    eqs[q + i] = &maps[old_len + fresh[i]];

                const SystemSolution sol = solve_system(eqs, n0);
                if (!sol.x.allFinite())
                    continue;

                for (std::size_t i : older)
                    solved_old[i] = 1;
                bool mismatch = false;
                std::size_t near_node = old_len;
                double near_value = 0.0;
                for (std::size_t i = 0; i < old_len && !mismatch; ++i) {
                    if (solved_old[i])
                        continue;
                    const double v = maps[i](sol.x);
                    if (std::abs(v) < tol.degeneracy_tol) {
                        if (near_node == old_len) {
                            near_node = i;
                            near_value = v;
                        }
                    }
                    else if (strict_sign(v) != region[i]) {
                        mismatch = true;
                    }
                }
                for (std::size_t i : older)
                    solved_old[i] = 0;

                if (mismatch)
                    continue;
                if (sol.condition > tol.cond_max) {
                    // Inconsistent near-parallel systems have no isolated intersection.
                    if (sol.residual > tol.residual_tol)
                        continue;
                    throw DegenerateNetwork(DegenerateNetwork::Kind::IllConditioned, k,
                                            static_cast<long>(old_len + fresh.front()), sol.condition,
                                            "non-transverse intersection in region " + region.to_string()
                                                + " (condition " + std::to_string(sol.condition) + ")");
                }
                if (near_node != old_len)
                    throw near_zero(net, near_node, near_value, "a candidate vertex of layer " + std::to_string(k));
                if (sol.residual > tol.residual_tol)
                    throw DegenerateNetwork(DegenerateNetwork::Kind::IllConditioned, k,
                                            static_cast<long>(old_len + fresh.front()), sol.residual,
                                            "solve residual " + std::to_string(sol.residual)
                                                + " exceeds tolerance");

                Vertex v;
                v.coords = sol.x;
                v.max_residual = sol.residual;
                v.solve_condition = sol.condition;
                v.signs = region.prefix(old_len);
                for (std::size_t i : older) {
                    v.signs.set(i, 0);
                    v.zero_set.push_back(i);
                }
                std::size_t next_fresh = 0;
                for (std::size_t j = 0; j < nk; ++j) {
                    if (next_fresh < ell && fresh[next_fresh] == j) {
                        v.signs.push_back(0);
                        v.zero_set.push_back(old_len + j);
                        ++next_fresh;
                        continue;
                    }
                    const double val = maps[old_len + j](sol.x);
                    if (std::abs(val) < tol.degeneracy_tol)
                        throw near_zero(net, old_len + j, val, "a new vertex");
                    v.signs.push_back(strict_sign(val));
                }
                std::sort(v.zero_set.begin(), v.zero_set.end());
                found.push_back(std::move(v));
            }
        });
    }
    return found;
}

}   // namespace

std::vector<SignSequence> vertex_signs(const std::vector<Vertex>& vertices)
{
    std::vector<SignSequence> out;
    out.reserve(vertices.size());
    for (const auto& v : vertices)
        out.push_back(v.signs);
    return out;
}

CubeClosure cube_closure(const std::vector<SignSequence>& vertices, std::size_t active_prefix_length)
{
    std::unordered_set<SignSequence, SignSequenceHash> cells;
    std::size_t max_zeros = 0;
    std::optional<std::size_t> zeros_per_vertex;
    for (const auto& full : vertices) {
        const SignSequence v = full.prefix(active_prefix_length);
        const auto zeros = v.zero_positions();
        if (zeros_per_vertex && *zeros_per_vertex != zeros.size())
            throw std::invalid_argument("cube_closure: vertices have differing zero counts");
        zeros_per_vertex = zeros.size();
        max_zeros = zeros.size();
        // Each zero becomes 0, +1 or -1: base-3 counter over the zero positions.
        std::vector<int> digit(zeros.size(), 0);
        SignSequence cell = v;
        while (true) {
            cells.insert(cell);
            std::size_t i = 0;
            while (i < digit.size() && digit[i] == 2) {
                digit[i] = 0;
                cell.set(zeros[i], 0);
                ++i;
            }
            if (i == digit.size())
                break;
            ++digit[i];
            cell.set(zeros[i], digit[i] == 1 ? 1 : -1);
        }
    }
    CubeClosure out;
    out.by_zeros.resize(max_zeros + 1);
    for (const auto& c : cells)
        out.by_zeros[c.zero_count()].push_back(c);
    for (auto& grade : out.by_zeros)
        std::sort(grade.begin(), grade.end());
    out.regions = out.by_zeros.front();
    return out;
}

std::map<SignSequence, std::vector<std::size_t>>
incident_regions(const std::vector<SignSequence>& vertices, std::size_t active_prefix_length)
{
    std::map<SignSequence, std::vector<std::size_t>> out;
    for (std::size_t vi = 0; vi < vertices.size(); ++vi) {
        const SignSequence v = vertices[vi].prefix(active_prefix_length);
        const auto zeros = v.zero_positions();
        const std::size_t count = std::size_t{1} << zeros.size();
        for (std::size_t mask = 0; mask < count; ++mask) {
            SignSequence region = v;
            for (std::size_t b = 0; b < zeros.size(); ++b)
                region.set(zeros[b], (mask >> b) & 1u ? 1 : -1);
            out[region].push_back(vi);
        }
    }
    return out;
}

LayerBuildState first_layer_vertices(const ReluNetwork& net, const BuildOptions& options)
{
    const int n0 = net.input_dim();
    const int n1 = net.layer_width(1);
    if (n1 < n0)
        throw ArchitectureUnsupported("first hidden layer has " + std::to_string(n1)
                                      + " units, fewer than the input dimension " + std::to_string(n0));
    const Tolerances& tol = options.tol;
    const std::vector<AffineFunctional> maps = region_affine_maps(net, SignSequence(0), 1);

    std::vector<Vertex> vertices;
    std::vector<const AffineFunctional*> eqs(static_cast<std::size_t>(n0));
    for_each_subset(static_cast<std::size_t>(n1), static_cast<std::size_t>(n0),
                    [&](const std::vector<std::size_t>& alpha) {
                        for (std::size_t i = 0; i < alpha.size(); ++i)
                            eqs[i] = &maps[alpha[i]];
                        const SystemSolution sol = solve_system(eqs, n0);
                        // Inconsistent: parallel or constant maps, no intersection point.
                        if (sol.residual > tol.residual_tol)
                            return;
                        if (sol.condition > tol.cond_max)
                            throw DegenerateNetwork(DegenerateNetwork::Kind::IllConditioned, 1,
                                                    static_cast<long>(alpha.front()), sol.condition,
                                                    "first-layer hyperplanes are not in general position");
                        Vertex v;
                        v.coords = sol.x;
                        v.max_residual = sol.residual;
                        v.solve_condition = sol.condition;
                        v.zero_set = alpha;
                        v.signs = SignSequence(static_cast<std::size_t>(n1));
                        std::size_t next = 0;
                        for (std::size_t j = 0; j < static_cast<std::size_t>(n1); ++j) {
                            if (next < alpha.size() && alpha[next] == j) {
                                v.signs.set(j, 0);
                                ++next;
                                continue;
                            }
                            const double val = maps[j](sol.x);
                            if (std::abs(val) < tol.degeneracy_tol)
                                throw near_zero(net, j, val, "a first-layer vertex");
                            v.signs.set(j, strict_sign(val));
                        }
                        vertices.push_back(std::move(v));
                    });

    std::sort(vertices.begin(), vertices.end(),
              [](const Vertex& a, const Vertex& b) { return a.signs < b.signs; });
    for (std::size_t i = 1; i < vertices.size(); ++i)
        if (vertices[i].signs == vertices[i - 1].signs)
            throw DuplicateMismatch("two first-layer vertices share " + vertices[i].signs.to_string());

    LayerBuildState state;
    state.layer = 1;
    state.prefix_length = static_cast<std::size_t>(n1);
    state.vertices = std::move(vertices);
    state.regions = incident_regions(vertex_signs(state.vertices), state.prefix_length);
    return state;
}

LayerBuildState extend_layer(const ReluNetwork& net, int k, const LayerBuildState& state,
                             const BuildOptions& options)
{
    if (k < 2 || k > net.layer_count())
        throw std::out_of_range("extend_layer: layer " + std::to_string(k));
    if (state.layer != k - 1 || state.prefix_length != net.layer_offset(k))
        throw std::invalid_argument("extend_layer: state does not cover exactly layers < "
                                    + std::to_string(k));
    const Tolerances& tol = options.tol;
    const std::size_t old_len = net.layer_offset(k);
    const std::size_t nk = static_cast<std::size_t>(net.layer_width(k));

    std::map<SignSequence, Vertex> merged;
    for (const Vertex& old : state.vertices) {
        Vertex v = old;
        const Eigen::VectorXd vals = node_map_values(net, v.coords);
        for (std::size_t j = 0; j < nk; ++j) {
            const double val = vals(static_cast<Eigen::Index>(old_len + j));
            if (std::abs(val) < tol.degeneracy_tol)
                throw near_zero(net, old_len + j, val, "an existing vertex");
            v.signs.push_back(strict_sign(val));
        }
        merged.emplace(v.signs, std::move(v));
    }

    std::vector<RegionTask> tasks;
    tasks.reserve(state.regions.size());
    for (const auto& [region, incident] : state.regions)
        tasks.push_back(RegionTask{&region, &incident});
    if (options.shuffle_seed) {
        std::mt19937_64 rng(*options.shuffle_seed);
        std::shuffle(tasks.begin(), tasks.end(), rng);
    }

    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(options.threads, tasks.size()));
    std::vector<std::vector<Vertex>> found(tasks.size());
    std::vector<std::exception_ptr> failure(tasks.size());
    auto run = [&](std::size_t w) {
        for (std::size_t t = w; t < tasks.size(); t += workers) {
            try {
                found[t] = region_vertices(net, k, state, tasks[t], tol);
            }
            catch (...) {
                failure[t] = std::current_exception();
                return;
            }
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
    for (const auto& f : failure)
        if (f)
            std::rethrow_exception(f);

    for (auto& batch : found)
        for (auto& v : batch)
            merge_vertex(merged, std::move(v), tol.merge_tol);

    LayerBuildState next;
    next.layer = k;
    next.prefix_length = old_len + nk;
    next.vertices.reserve(merged.size());
    for (auto& [key, v] : merged)
        next.vertices.push_back(std::move(v));
    next.regions = incident_regions(vertex_signs(next.vertices), next.prefix_length);
    return next;
}

LayerBuildState build_complex(const ReluNetwork& net, const BuildOptions& options)
{
    LayerBuildState state = first_layer_vertices(net, options);
    for (int k = 2; k <= net.layer_count(); ++k)
        state = extend_layer(net, k, state, options);
    return state;
}

}   // namespace relucx
