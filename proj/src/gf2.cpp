#include "relucx/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace relucx {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Highest set row of a packed column, or kNone.
std::size_t packed_low(const std::vector<std::uint64_t>& col)
{
    for (std::size_t w = col.size(); w-- > 0;)
        if (col[w] != 0)
            return w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(col[w]));
    return kNone;
}

}   // namespace

std::size_t gf2_rank_dense(const Gf2Columns& m)
{
    const std::size_t words = (m.rows + 63) / 64;
    std::vector<std::vector<std::uint64_t>> reduced;
    reduced.reserve(m.cols());
    std::vector<std::size_t> pivot_col(m.rows, kNone);
    std::size_t rank = 0;
    for (const auto& src : m.columns) {
        std::vector<std::uint64_t> col(words, 0);
        for (std::size_t r : src)
            col[r / 64] ^= std::uint64_t{1} << (r % 64);
        std::size_t low = packed_low(col);
        while (low != kNone && pivot_col[low] != kNone) {
            const auto& piv = reduced[pivot_col[low]];
            for (std::size_t w = 0; w <= low / 64; ++w)
                col[w] ^= piv[w];
            low = packed_low(col);
        }
        if (low != kNone) {
            pivot_col[low] = reduced.size();
            ++rank;
        }
        reduced.push_back(std::move(col));
    }
    return rank;
}

std::size_t gf2_rank_sparse(const Gf2Columns& m)
{
    std::vector<std::vector<std::size_t>> reduced;
    reduced.reserve(m.cols());
    std::vector<std::size_t> pivot_col(m.rows, kNone);
    std::size_t rank = 0;
    std::vector<std::size_t> scratch;
    for (const auto& src : m.columns) {
        std::vector<std::size_t> col = src;
        while (!col.empty() && pivot_col[col.back()] != kNone) {
            const auto& piv = reduced[pivot_col[col.back()]];
            scratch.clear();
            std::set_symmetric_difference(col.begin(), col.end(), piv.begin(), piv.end(),
                                          std::back_inserter(scratch));
            col.swap(scratch);
        }
        if (!col.empty()) {
            pivot_col[col.back()] = reduced.size();
            ++rank;
        }
        reduced.push_back(std::move(col));
    }
    return rank;
}

std::size_t gf2_rank(const Gf2Columns& m)
{
    if (m.rows <= kDenseLimit && m.cols() <= kDenseLimit)
        return gf2_rank_dense(m);
    return gf2_rank_sparse(m);
}

bool gf2_product_is_zero(const Gf2Columns& a, const Gf2Columns& b)
{
    if (a.cols() != b.rows)
        throw std::invalid_argument("gf2_product_is_zero: inner dimensions differ");
    std::vector<char> parity(a.rows, 0);
    std::vector<std::size_t> touched;
    for (const auto& bcol : b.columns) {
        touched.clear();
        for (std::size_t mid : bcol)
            for (std::size_t r : a.columns[mid]) {
                parity[r] ^= 1;
                touched.push_back(r);
            }
        bool nonzero = false;
        for (std::size_t r : touched) {
            if (parity[r])
                nonzero = true;
            parity[r] = 0;
        }
        if (nonzero)
            return false;
    }
    return true;
}

}   // namespace relucx
