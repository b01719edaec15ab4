#ifndef RELUCX_GF2_HPP
#define RELUCX_GF2_HPP

#include <cstddef>
#include <vector>

namespace relucx {

/// Sparse GF(2) matrix stored by column; each column lists its nonzero rows, ascending.
struct Gf2Columns
{
    std::size_t rows = 0;
    std::vector<std::vector<std::size_t>> columns;

    std::size_t cols() const { return columns.size(); }
};

/// Column reduction on 64-bit packed columns.
std::size_t gf2_rank_dense(const Gf2Columns& m);

/// Column reduction on sorted index lists.
std::size_t gf2_rank_sparse(const Gf2Columns& m);

/// Dense below kDenseLimit rows and columns, sparse above.
std::size_t gf2_rank(const Gf2Columns& m);

inline constexpr std::size_t kDenseLimit = std::size_t{1} << 15;

/// a * b over GF(2) is the zero matrix (a.cols() must equal b.rows).
bool gf2_product_is_zero(const Gf2Columns& a, const Gf2Columns& b);

}   // namespace relucx

#endif
