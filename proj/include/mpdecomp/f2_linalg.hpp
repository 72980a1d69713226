#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"

namespace mpd {

/// Fixed-length vector over F2, packed 64 bits per word.
class BitVector
{
public:
    using word_t = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    BitVector() = default;
    explicit BitVector(std::size_t n) : size_(n), words_((n + word_bits - 1) / word_bits, 0) {}
    BitVector(std::initializer_list<int> bits) : BitVector(bits.size())
    {
        std::size_t i = 0;
        for (int b : bits)
            set(i++, b != 0);
    }

    static BitVector from_indices(std::size_t n, std::span<const std::size_t> ones)
    {
        BitVector v(n);
        for (std::size_t i : ones)
            v.flip(i);
        return v;
    }

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const { return (words_[i / word_bits] >> (i % word_bits)) & 1u; }
    bool operator[](std::size_t i) const { return get(i); }

    void set(std::size_t i, bool value)
    {
        const word_t mask = word_t{1} << (i % word_bits);
        if (value)
            words_[i / word_bits] |= mask;
        else
            words_[i / word_bits] &= ~mask;
    }

    void flip(std::size_t i) { words_[i / word_bits] ^= word_t{1} << (i % word_bits); }

    BitVector& operator^=(const BitVector& other)
    {
        if (other.size_ != size_)
            throw input_error("bit vector length mismatch: " + std::to_string(size_) + " vs " +
                              std::to_string(other.size_));
        for (std::size_t w = 0; w < words_.size(); ++w)
            words_[w] ^= other.words_[w];
        return *this;
    }

    friend BitVector operator^(BitVector a, const BitVector& b)
    {
        a ^= b;
        return a;
    }

    bool is_zero() const
    {
        for (word_t w : words_)
            if (w)
                return false;
        return true;
    }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (word_t w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Largest index holding a one.
    std::optional<std::size_t> low() const
    {
        for (std::size_t w = words_.size(); w-- > 0;)
            if (words_[w])
                return w * word_bits + (word_bits - 1 - static_cast<std::size_t>(std::countl_zero(words_[w])));
        return std::nullopt;
    }

    std::vector<std::size_t> ones() const
    {
        std::vector<std::size_t> r;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            word_t x = words_[w];
            while (x) {
                r.push_back(w * word_bits + static_cast<std::size_t>(std::countr_zero(x)));
                x &= x - 1;
            }
        }
        return r;
    }

    std::string str() const
    {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i))
                s[i] = '1';
        return s;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::size_t size_ = 0;
    std::vector<word_t> words_;
};

/// Dense F2 matrix stored column-major, one BitVector per column.
class F2Matrix
{
public:
    F2Matrix() = default;
    F2Matrix(std::size_t n_rows, std::size_t n_cols) : n_rows_(n_rows), cols_(n_cols, BitVector(n_rows)) {}

    /// Row-major literal, convenient in tests.
    static F2Matrix from_rows(std::initializer_list<std::initializer_list<int>> rows)
    {
        const std::size_t n = rows.size();
        const std::size_t m = n ? rows.begin()->size() : 0;
        F2Matrix a(n, m);
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != m)
                throw input_error("ragged matrix literal");
            std::size_t j = 0;
            for (int x : r)
                a.set(i, j++, x != 0);
            ++i;
        }
        return a;
    }

    static F2Matrix from_columns(std::size_t n_rows, std::vector<BitVector> cols)
    {
        F2Matrix a;
        a.n_rows_ = n_rows;
        for (const auto& c : cols)
            if (c.size() != n_rows)
                throw input_error("column length does not match row count");
        a.cols_ = std::move(cols);
        return a;
    }

    static F2Matrix identity(std::size_t n)
    {
        F2Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            a.set(i, i, true);
        return a;
    }

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return cols_.size(); }

    bool get(std::size_t i, std::size_t j) const { return cols_[j].get(i); }
    void set(std::size_t i, std::size_t j, bool v) { cols_[j].set(i, v); }
    void flip(std::size_t i, std::size_t j) { cols_[j].flip(i); }

    const BitVector& col(std::size_t j) const { return cols_[j]; }
    BitVector& col(std::size_t j) { return cols_[j]; }
    const std::vector<BitVector>& cols() const { return cols_; }

    void append_col(BitVector c)
    {
        if (c.size() != n_rows_)
            throw input_error("appended column has " + std::to_string(c.size()) + " entries, expected " +
                              std::to_string(n_rows_));
        cols_.push_back(std::move(c));
    }

    /// column[target] += column[source]
    void add_col(std::size_t source, std::size_t target) { cols_[target] ^= cols_[source]; }

    /// row[target] += row[source]
    void add_row(std::size_t source, std::size_t target)
    {
        for (auto& c : cols_)
            if (c.get(source))
                c.flip(target);
    }

    BitVector row(std::size_t i) const
    {
        BitVector r(n_cols());
        for (std::size_t j = 0; j < n_cols(); ++j)
            r.set(j, get(i, j));
        return r;
    }

    bool is_zero() const
    {
        for (const auto& c : cols_)
            if (!c.is_zero())
                return false;
        return true;
    }

    std::size_t count() const
    {
        std::size_t n = 0;
        for (const auto& c : cols_)
            n += c.count();
        return n;
    }

    F2Matrix transpose() const
    {
        F2Matrix t(n_cols(), n_rows());
        for (std::size_t j = 0; j < n_cols(); ++j)
            for (std::size_t i : cols_[j].ones())
                t.set(j, i, true);
        return t;
    }

    friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

private:
    std::size_t n_rows_ = 0;
    std::vector<BitVector> cols_;
};

inline F2Matrix multiply(const F2Matrix& a, const F2Matrix& b)
{
    if (a.n_cols() != b.n_rows())
        throw input_error("matrix product dimension mismatch: " + std::to_string(a.n_cols()) + " vs " +
                          std::to_string(b.n_rows()));
    F2Matrix c(a.n_rows(), b.n_cols());
    for (std::size_t j = 0; j < b.n_cols(); ++j)
        for (std::size_t k : b.col(j).ones())
            c.col(j) ^= a.col(k);
    return c;
}

inline std::optional<std::size_t> low(const F2Matrix& m, std::size_t j) { return m.col(j).low(); }

/// Additions performed while reducing [S|c]. Index S.n_cols() denotes c.
struct ColOpLog
{
    std::vector<std::pair<std::size_t, std::size_t>> ops; // (source, target), source < target
};

struct ColReduceResult
{
    BitVector reduced;
    ColOpLog log;
    /// The set of original columns of S whose sum was added to c.
    BitVector combination;
};

/// Left-to-right reduction of [S|c] to a lowest-conflict-free matrix. The
/// returned column is zero iff c lies in the column span of S.
inline ColReduceResult col_reduce(const F2Matrix& source, const BitVector& target)
{
    if (target.size() != source.n_rows())
        throw input_error("col_reduce: target has " + std::to_string(target.size()) + " entries, source has " +
                          std::to_string(source.n_rows()) + " rows");
    const std::size_t m = source.n_cols();
    std::vector<BitVector> work;
    std::vector<BitVector> slave;
    work.reserve(m + 1);
    slave.reserve(m + 1);
    std::unordered_map<std::size_t, std::size_t> pivot_of_low;
    ColOpLog log;

    auto reduce = [&](std::size_t j) {
        while (auto l = work[j].low()) {
            auto it = pivot_of_low.find(*l);
            if (it == pivot_of_low.end()) {
                pivot_of_low.emplace(*l, j);
                return;
            }
            work[j] ^= work[it->second];
            slave[j] ^= slave[it->second];
            log.ops.emplace_back(it->second, j);
        }
    };

    for (std::size_t j = 0; j <= m; ++j) {
        work.push_back(j < m ? source.col(j) : target);
        BitVector s(m);
        if (j < m)
            s.set(j, true);
        slave.push_back(std::move(s));
        reduce(j);
    }
    return {std::move(work[m]), std::move(log), std::move(slave[m])};
}

/// Replays a log on [S|c] and returns the final state of c.
inline BitVector replay(const F2Matrix& source, const BitVector& target, const ColOpLog& log)
{
    F2Matrix full = source;
    full.append_col(target);
    for (auto [s, t] : log.ops)
        full.add_col(s, t);
    return full.col(source.n_cols());
}

inline std::size_t rank(const F2Matrix& m)
{
    std::vector<BitVector> work = m.cols();
    std::unordered_map<std::size_t, std::size_t> pivot_of_low;
    std::size_t r = 0;
    for (std::size_t j = 0; j < work.size(); ++j) {
        while (auto l = work[j].low()) {
            auto it = pivot_of_low.find(*l);
            if (it == pivot_of_low.end()) {
                pivot_of_low.emplace(*l, j);
                ++r;
                break;
            }
            work[j] ^= work[it->second];
        }
    }
    return r;
}

inline bool in_span(const F2Matrix& s, const BitVector& c) { return col_reduce(s, c).reduced.is_zero(); }

} // namespace mpd
