#include "relucx/signs.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "relucx/errors.hpp"

namespace relucx {

namespace {

constexpr std::uint64_t kLowBits = 0x5555555555555555ULL;

std::size_t word_count(std::size_t length)
{
    return (length + SignSequence::kPerWord - 1) / SignSequence::kPerWord;
}

// Low bit of each two-bit slot set exactly where the code is 01 (entry 0).
std::uint64_t zero_slots(std::uint64_t w)
{
    return w & ~(w >> 1) & kLowBits;
}

void require_same_length(const SignSequence& a, const SignSequence& b)
{
    if (a.size() != b.size())
        throw DimensionMismatch("sign sequences of length " + std::to_string(a.size()) + " and "
                                + std::to_string(b.size()));
}

}   // namespace

SignSequence::SignSequence(std::size_t length) : length_(length), words_(word_count(length), 0)
{
}

SignSequence::SignSequence(std::initializer_list<int> entries)
    : SignSequence(entries.size())
{
    std::size_t i = 0;
    for (int v : entries)
        set(i++, v);
}

SignSequence SignSequence::from_span(std::span<const int> entries)
{
    SignSequence s(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        s.set(i, entries[i]);
    return s;
}

SignSequence SignSequence::parse(std::string_view text)
{
    auto fail = [&] { return FormatError("malformed sign sequence \"" + std::string(text) + "\""); };
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    skip_ws();
    if (pos >= text.size() || text[pos] != '(')
        throw fail();
    ++pos;
    std::vector<int> entries;
    skip_ws();
    if (pos < text.size() && text[pos] == ')') {
        ++pos;
    }
    else {
        while (true) {
            skip_ws();
            int sign = 1;
            if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
                sign = text[pos] == '-' ? -1 : 1;
                ++pos;
            }
            if (pos >= text.size() || (text[pos] != '0' && text[pos] != '1'))
                throw fail();
            entries.push_back(text[pos] == '0' ? 0 : sign);
            ++pos;
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
                break;
            }
            throw fail();
        }
    }
    skip_ws();
    if (pos != text.size())
        throw fail();
    return from_span(entries);
}

void SignSequence::set(std::size_t i, int v)
{
    if (v < -1 || v > 1)
        throw std::invalid_argument("sign entry out of range: " + std::to_string(v));
    std::uint64_t& w = words_[i / kPerWord];
    const unsigned shift = 62 - 2 * static_cast<unsigned>(i % kPerWord);
    w = (w & ~(std::uint64_t{3} << shift)) | (static_cast<std::uint64_t>(v + 1) << shift);
}

void SignSequence::push_back(int v)
{
    if (length_ % kPerWord == 0)
        words_.push_back(0);
    ++length_;
    set(length_ - 1, v);
}

SignSequence SignSequence::prefix(std::size_t n) const
{
    if (n > length_)
        throw DimensionMismatch("prefix longer than sequence");
    SignSequence out(n);
    std::copy_n(words_.begin(), out.words_.size(), out.words_.begin());
    const std::size_t tail = n % kPerWord;
    if (tail != 0)
        out.words_.back() &= ~std::uint64_t{0} << (64 - 2 * tail);
    return out;
}

std::size_t SignSequence::zero_count() const
{
    std::size_t n = 0;
    for (std::uint64_t w : words_)
        n += static_cast<std::size_t>(std::popcount(zero_slots(w)));
    return n;
}

std::vector<std::size_t> SignSequence::zero_positions() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < length_; ++i)
        if ((*this)[i] == 0)
            out.push_back(i);
    return out;
}

std::vector<int> SignSequence::to_vector() const
{
    std::vector<int> out(length_);
    for (std::size_t i = 0; i < length_; ++i)
        out[i] = (*this)[i];
    return out;
}

std::string SignSequence::to_string() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < length_; ++i) {
        if (i)
            out += ',';
        out += std::to_string((*this)[i]);
    }
    out += ')';
    return out;
}

std::strong_ordering operator<=>(const SignSequence& a, const SignSequence& b)
{
    const std::size_t n = std::min(a.words_.size(), b.words_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a.words_[i] != b.words_[i])
            return a.words_[i] <=> b.words_[i];
    return a.length_ <=> b.length_;
}

std::size_t SignSequenceHash::operator()(const SignSequence& s) const noexcept
{
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.size();
    for (std::uint64_t w : s.words()) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
}

SignSequence product(const SignSequence& a, const SignSequence& b)
{
    require_same_length(a, b);
    SignSequence out(a.length_);
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
        const std::uint64_t z = zero_slots(a.words_[i]);
        const std::uint64_t mask = z | (z << 1);
        out.words_[i] = (a.words_[i] & ~mask) | (b.words_[i] & mask);
    }
    return out;
}

bool is_face(const SignSequence& a, const SignSequence& b)
{
    return product(a, b) == b;
}

std::size_t codimension(const SignSequence& a)
{
    return a.zero_count();
}

bool zeros_contain(const SignSequence& a, const SignSequence& b)
{
    require_same_length(a, b);
    for (std::size_t i = 0; i < a.words().size(); ++i) {
        const std::uint64_t za = zero_slots(a.words()[i]);
        const std::uint64_t zb = zero_slots(b.words()[i]);
        if ((zb & ~za) != 0)
            return false;
    }
    return true;
}

bool sign_compatible(const SignSequence& a, const SignSequence& b)
{
    require_same_length(a, b);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] * b[i] < 0)
            return false;
    return true;
}

std::vector<SignSequence> coface_candidates(const SignSequence& a)
{
    std::vector<SignSequence> out;
    for (std::size_t i : a.zero_positions()) {
        for (int v : {1, -1}) {
            SignSequence c = a;
            c.set(i, v);
            out.push_back(std::move(c));
        }
    }
    return out;
}

}   // namespace relucx
