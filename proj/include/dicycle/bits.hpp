#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dicycle {

using Word = std::uint64_t;

inline constexpr std::size_t word_bits = 64;

constexpr std::size_t words_for(std::size_t bits) noexcept
{
    return (bits + word_bits - 1) / word_bits;
}

inline bool test_bit(std::span<const Word> row, std::size_t i) noexcept
{
    return (row[i / word_bits] >> (i % word_bits)) & 1U;
}

inline void set_bit(std::span<Word> row, std::size_t i) noexcept
{
    row[i / word_bits] |= Word{1} << (i % word_bits);
}

inline void clear_bit(std::span<Word> row, std::size_t i) noexcept
{
    row[i / word_bits] &= ~(Word{1} << (i % word_bits));
}

inline std::size_t popcount(std::span<const Word> row) noexcept
{
    std::size_t c = 0;
    for (Word w : row) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

inline std::size_t and_popcount(std::span<const Word> a, std::span<const Word> b) noexcept
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return c;
}

inline bool any(std::span<const Word> row) noexcept
{
    for (Word w : row)
        if (w) return true;
    return false;
}

template <class F>
void for_each_bit(std::span<const Word> row, F&& f)
{
    for (std::size_t wi = 0; wi < row.size(); ++wi) {
        Word w = row[wi];
        while (w) {
            const auto b = static_cast<std::size_t>(std::countr_zero(w));
            f(wi * word_bits + b);
            w &= w - 1;
        }
    }
}

/// Row-major square bit matrix; row i is the set of j with entry (i, j) = 1.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n) : n_(n), stride_(words_for(n)), data_(n * words_for(n), 0) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t stride() const noexcept { return stride_; }

    std::span<Word> row(std::size_t i) noexcept { return {data_.data() + i * stride_, stride_}; }
    std::span<const Word> row(std::size_t i) const noexcept { return {data_.data() + i * stride_, stride_}; }

    bool get(std::size_t i, std::size_t j) const noexcept { return test_bit(row(i), j); }
    void set(std::size_t i, std::size_t j) noexcept { set_bit(row(i), j); }
    void reset(std::size_t i, std::size_t j) noexcept { clear_bit(row(i), j); }

    /// Boolean product: (this * rhs)[i][j] = OR_k this[i][k] AND rhs[k][j].
    BitMatrix operator*(const BitMatrix& rhs) const
    {
        BitMatrix out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            auto dst = out.row(i);
            for_each_bit(row(i), [&](std::size_t k) {
                auto src = rhs.row(k);
                for (std::size_t w = 0; w < stride_; ++w) dst[w] |= src[w];
            });
        }
        return out;
    }

    static BitMatrix identity(std::size_t n)
    {
        BitMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i);
        return m;
    }

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> data_;
};

} // namespace dicycle
