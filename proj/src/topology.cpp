#include "relucx/topology.hpp"

#include <algorithm>
#include <string>

#include "relucx/builder.hpp"
#include "relucx/errors.hpp"

namespace relucx {

CubicalComplex make_complex(std::vector<SignSequence> cells, int n0, std::size_t length)
{
    CubicalComplex cx;
    cx.n0_ = n0;
    cx.length_ = length;
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    cx.cells_ = std::move(cells);
    cx.by_dim_.resize(static_cast<std::size_t>(n0) + 1);
    cx.index_.reserve(cx.cells_.size());
    for (std::size_t id = 0; id < cx.cells_.size(); ++id) {
        const SignSequence& c = cx.cells_[id];
        if (c.size() != length)
            throw DimensionMismatch("cell " + c.to_string() + " has length " + std::to_string(c.size())
                                    + ", expected " + std::to_string(length));
        const std::size_t z = c.zero_count();
        if (z > static_cast<std::size_t>(n0))
            throw ClosureViolation("cell " + c.to_string() + " has more than " + std::to_string(n0)
                                   + " zeros");
        cx.index_.emplace(c, id);
        cx.by_dim_[static_cast<std::size_t>(n0) - z].push_back(id);
    }
    return cx;
}

CubicalComplex CubicalComplex::from_cells(std::vector<SignSequence> cells, int n0)
{
    const std::size_t length = cells.empty() ? 0 : cells.front().size();
    CubicalComplex cx = make_complex(std::move(cells), n0, length);

    std::vector<SignSequence> tops;
    for (std::size_t id : cx.cells_of_dim(0))
        tops.push_back(cx.cell(id));
    const CubeClosure closure = cube_closure(tops, length);
    std::size_t closure_size = 0;
    for (const auto& grade : closure.by_zeros) {
        closure_size += grade.size();
        for (const auto& c : grade)
            if (!cx.contains(c))
                throw ClosureViolation("cell " + c.to_string() + " is forced by a vertex but absent");
    }
    if (closure_size != cx.size())
        throw ClosureViolation("complex has " + std::to_string(cx.size() - closure_size)
                               + " cells that are not faces of any vertex cube");
    return cx;
}

const std::vector<std::size_t>& CubicalComplex::cells_of_dim(int k) const
{
    static const std::vector<std::size_t> none;
    if (k < 0 || static_cast<std::size_t>(k) >= by_dim_.size())
        return none;
    return by_dim_[static_cast<std::size_t>(k)];
}

std::optional<std::size_t> CubicalComplex::find(const SignSequence& s) const
{
    auto it = index_.find(s);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::size_t> CubicalComplex::facets(std::size_t id) const
{
    std::vector<std::size_t> out;
    SignSequence probe = cells_[id];
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const int s = probe[i];
        if (s == 0)
            continue;
        probe.set(i, 0);
        if (auto f = find(probe))
            out.push_back(*f);
        probe.set(i, s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> CubicalComplex::cofaces(std::size_t id) const
{
    std::vector<std::size_t> out;
    for (const auto& c : coface_candidates(cells_[id]))
        if (auto f = find(c))
            out.push_back(*f);
    std::sort(out.begin(), out.end());
    return out;
}

CubicalComplex assemble(const std::vector<SignSequence>& vertices, int n0)
{
    const std::size_t length = vertices.empty() ? 0 : vertices.front().size();
    for (const auto& v : vertices)
        if (v.zero_count() != static_cast<std::size_t>(n0))
            throw ClosureViolation("vertex " + v.to_string() + " does not have " + std::to_string(n0)
                                   + " zeros");
    CubeClosure closure = cube_closure(vertices, length);
    std::vector<SignSequence> cells;
    for (auto& grade : closure.by_zeros)
        for (auto& c : grade)
            cells.push_back(std::move(c));
    return make_complex(std::move(cells), n0, length);
}

namespace {

// Per-dimension position of every cell id.
std::vector<std::size_t> positions_in_grade(const CubicalComplex& cx)
{
    std::vector<std::size_t> pos(cx.size());
    for (int k = 0; k <= cx.input_dim(); ++k) {
        const auto& ids = cx.cells_of_dim(k);
        for (std::size_t i = 0; i < ids.size(); ++i)
            pos[ids[i]] = i;
    }
    return pos;
}

ChainComplexGF2 chain_from(const CubicalComplex& cx, int top, bool with_infinity)
{
    const std::vector<std::size_t> pos = positions_in_grade(cx);
    ChainComplexGF2 chain;
    chain.infinity_vertex = with_infinity;
    for (int k = 0; k <= top; ++k)
        chain.cell_counts.push_back(cx.cells_of_dim(k).size());
    if (with_infinity)
        chain.cell_counts[0] += 1;
    const std::size_t infinity = chain.cell_counts[0] - 1;

    chain.boundary.resize(static_cast<std::size_t>(top) + 1);
    chain.boundary[0].rows = 0;
    chain.boundary[0].columns.assign(chain.cell_counts[0], {});
    for (int k = 1; k <= top; ++k) {
        Gf2Columns& d = chain.boundary[static_cast<std::size_t>(k)];
        d.rows = chain.cell_counts[static_cast<std::size_t>(k) - 1];
        for (std::size_t id : cx.cells_of_dim(k)) {
            std::vector<std::size_t> col;
            for (std::size_t f : cx.facets(id))
                col.push_back(pos[f]);
            std::sort(col.begin(), col.end());
            if (with_infinity && k == 1 && col.size() == 1)
                col.push_back(infinity);
            d.columns.push_back(std::move(col));
        }
    }
    return chain;
}

}   // namespace

ChainComplexGF2 boundary_matrices(const CubicalComplex& cx)
{
    return chain_from(cx, cx.input_dim(), false);
}

CubicalComplex decision_boundary(const CubicalComplex& cx)
{
    std::vector<SignSequence> cells;
    if (cx.sequence_length() > 0)
        for (const auto& c : cx.cells())
            if (c[cx.sequence_length() - 1] == 0)
                cells.push_back(c);
    return make_complex(std::move(cells), cx.input_dim(), cx.sequence_length());
}

ChainComplexGF2 compactify(const CubicalComplex& db)
{
    return chain_from(db, db.input_dim() - 1, true);
}

bool boundary_squares_to_zero(const ChainComplexGF2& chain)
{
    for (std::size_t k = 1; k + 1 < chain.boundary.size(); ++k)
        if (!gf2_product_is_zero(chain.boundary[k], chain.boundary[k + 1]))
            return false;
    return true;
}

BettiReport betti_gf2(const ChainComplexGF2& chain)
{
    if (!boundary_squares_to_zero(chain))
        throw BoundaryInconsistent("boundary map does not square to zero over GF(2)");
    const std::size_t dims = chain.cell_counts.size();
    std::vector<std::size_t> rank(dims + 1, 0);
    for (std::size_t k = 1; k < dims; ++k)
        rank[k] = gf2_rank(chain.boundary[k]);
    BettiReport out;
    for (std::size_t k = 0; k < dims; ++k)
        out.betti.push_back(static_cast<long>(chain.cell_counts[k]) - static_cast<long>(rank[k])
                            - static_cast<long>(rank[k + 1]));
    if (!out.betti.empty()) {
        out.bounded = out.betti.front() - 1;
        out.unbounded = out.betti.back() - out.betti.front() + 1;
    }
    return out;
}

}   // namespace relucx
