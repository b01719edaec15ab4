/**
 * Sign sequences: the {-1, 0, +1}-valued cell identifiers of the canonical
 * polyhedral complex, together with the face product and face predicates.
 *
 * Entries are packed two bits each (code 0 = -1, 1 = 0, 2 = +1), first
 * entry in the most significant bits of the first word.  With that layout
 * comparing words lexicographically gives the canonical order
 * -1 < 0 < +1 on entries, shorter prefixes first.
 */

#ifndef RELUCX_SIGNS_HPP
#define RELUCX_SIGNS_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relucx {

class SignSequence
{
  public:
    static constexpr std::size_t kPerWord = 32;

    SignSequence() = default;

    /// All-(-1) sequence of the given length.
    explicit SignSequence(std::size_t length);

    SignSequence(std::initializer_list<int> entries);

    static SignSequence from_span(std::span<const int> entries);

    /// Parses "(1,0,-1)"; throws FormatError on anything else.
    static SignSequence parse(std::string_view text);

    std::size_t size() const { return length_; }
    bool empty() const { return length_ == 0; }

    int operator[](std::size_t i) const
    {
        const std::uint64_t w = words_[i / kPerWord];
        const unsigned shift = 62 - 2 * static_cast<unsigned>(i % kPerWord);
        return static_cast<int>((w >> shift) & 3u) - 1;
    }

    /// v must be -1, 0 or +1.
    void set(std::size_t i, int v);

    /// Appends one entry.
    void push_back(int v);

    /// First n entries.
    SignSequence prefix(std::size_t n) const;

    std::size_t zero_count() const;
    std::vector<std::size_t> zero_positions() const;
    bool all_nonzero() const { return zero_count() == 0; }

    std::vector<int> to_vector() const;
    std::string to_string() const;

    std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const SignSequence& a, const SignSequence& b)
    {
        return a.length_ == b.length_ && a.words_ == b.words_;
    }
    friend std::strong_ordering operator<=>(const SignSequence& a, const SignSequence& b);

    friend SignSequence product(const SignSequence& a, const SignSequence& b);

  private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

struct SignSequenceHash
{
    std::size_t operator()(const SignSequence& s) const noexcept;
};

/// Face product: entry i is a[i] when nonzero, otherwise b[i].
SignSequence product(const SignSequence& a, const SignSequence& b);

/// a is a face of b  <=>  product(a, b) == b.
bool is_face(const SignSequence& a, const SignSequence& b);

/// Number of zero entries (the codimension of the cell).
std::size_t codimension(const SignSequence& a);

/// zeros(b) is a subset of zeros(a): every bent hyperplane containing b contains a.
bool zeros_contain(const SignSequence& a, const SignSequence& b);

/// True when no coordinate carries strictly opposite nonzero signs.
bool sign_compatible(const SignSequence& a, const SignSequence& b);

/// Every sequence obtained by replacing exactly one zero of a with +1 or -1;
/// for each zero position, +1 is listed before -1.
std::vector<SignSequence> coface_candidates(const SignSequence& a);

}   // namespace relucx

template <>
struct std::hash<relucx::SignSequence>
{
    std::size_t operator()(const relucx::SignSequence& s) const noexcept
    {
        return relucx::SignSequenceHash{}(s);
    }
};

#endif
