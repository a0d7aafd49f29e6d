#ifndef F2LA_BIT_MATRIX_HPP
#define F2LA_BIT_MATRIX_HPP

#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "f2la/prng.hpp"

namespace f2la {

template <typename W>
concept WordType = std::same_as<W, std::uint8_t> || std::same_as<W, std::uint16_t> ||
                   std::same_as<W, std::uint32_t> || std::same_as<W, std::uint64_t>;

namespace detail {

/// Mask with the k lowest bits set, k <= word width.
template <WordType Word>
constexpr Word low_mask(std::size_t k) noexcept {
    constexpr std::size_t b = 8 * sizeof(Word);
    return k >= b ? Word(~Word(0)) : Word((Word(1) << k) - 1);
}

/// Allocator aligning every allocation to a cache line, so that each
/// word-column block (whose stride is padded to a cache-line multiple)
/// starts on a line boundary.
template <typename T>
struct CacheAlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    CacheAlignedAllocator() = default;
    template <typename U>
    CacheAlignedAllocator(const CacheAlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        void* p = ::operator new(n * sizeof(T), std::align_val_t(alignment));
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept {
        ::operator delete(p, std::align_val_t(alignment));
    }
    template <typename U>
    bool operator==(const CacheAlignedAllocator<U>&) const noexcept { return true; }
};

/// In-place bit-transpose of a b x b tile given as b row words.
/// Bit j of t[i] is entry (i, j); on return bit i of t[j] is entry (i, j).
template <WordType Word>
inline void transpose_tile(Word* t) noexcept {
    constexpr std::size_t b = 8 * sizeof(Word);
    Word m = Word(~Word(0)) >> (b / 2);
    for (std::size_t j = b / 2; j != 0; j >>= 1, m ^= Word(m << j)) {
        for (std::size_t k = 0; k < b; k = (k + j + 1) & ~j) {
            const Word x = Word((t[k] >> j) ^ t[k + j]) & m;
            t[k + j] ^= x;
            t[k] ^= Word(x << j);
        }
    }
}

} // namespace detail

/// Dense matrix over F2 with rows packed into machine words.
///
/// b = 8*sizeof(Word) consecutive entries of a row live in one word; bit k
/// of word (i, q) holds entry (i, q*b + k), i.e. the least significant bit
/// is the leftmost column of the group. The mu = ceil(n_cols/b) word-columns
/// are stored column-major: word-column q is one contiguous block of
/// col_stride() words, row i at offset i. Bits of the last word-column at
/// columns >= n_cols (the padding) are kept zero by every operation.
template <WordType Word>
class PackedMatrix {
public:
    using word_type = Word;
    static constexpr std::size_t word_bits = 8 * sizeof(Word);

    PackedMatrix() = default;

    /// Zero matrix of the given shape.
    PackedMatrix(std::size_t n_rows, std::size_t n_cols)
        : n_rows_(n_rows),
          n_cols_(n_cols),
          n_word_cols_((n_cols + word_bits - 1) / word_bits),
          col_stride_(round_stride(n_rows)),
          storage_(n_word_cols_ * col_stride_, Word(0)) {}

    static PackedMatrix identity(std::size_t n) {
        PackedMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i) a.set_unchecked(i, i, true);
        return a;
    }

    /// Pack rows given as strings of '0'/'1'; row r, character j is entry (r, j).
    static PackedMatrix from_rows(const std::vector<std::string>& rows) {
        const std::size_t n = rows.size();
        const std::size_t m = n == 0 ? 0 : rows.front().size();
        PackedMatrix a(n, m);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != m)
                throw std::invalid_argument("from_rows: ragged rows");
            for (std::size_t j = 0; j < m; ++j) {
                const char ch = rows[i][j];
                if (ch != '0' && ch != '1')
                    throw std::invalid_argument("from_rows: entry not in {0,1}");
                if (ch == '1') a.set_unchecked(i, j, true);
            }
        }
        return a;
    }

    /// Random matrix where each entry is 1 with probability `density`.
    /// Entries are drawn row-major from a single Rng stream, so the result
    /// is identical for every word size.
    static PackedMatrix random_dense(std::size_t n, std::size_t m, double density,
                                     std::uint64_t seed) {
        PackedMatrix a(n, m);
        if (density <= 0.0) return a;
        if (density >= 1.0) {
            for (std::size_t q = 0; q < a.n_word_cols_; ++q) {
                Word* blk = a.col_block(q);
                for (std::size_t i = 0; i < n; ++i) blk[i] = Word(~Word(0));
            }
            a.mask_padding();
            return a;
        }
        Rng rng(seed);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (rng.next_bernoulli(density)) a.set_unchecked(i, j, true);
        return a;
    }

    /// Random matrix with exactly `ones` distinct nonzero columns per row.
    static PackedMatrix random_sparse_rows(std::size_t n, std::size_t m, std::size_t ones,
                                           std::uint64_t seed) {
        if (ones > m)
            throw std::invalid_argument("random_sparse_rows: more ones than columns");
        PackedMatrix a(n, m);
        Rng rng(seed);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t placed = 0;
            while (placed < ones) {
                const std::size_t j = static_cast<std::size_t>(rng.next_below(m));
                if (!a.get_unchecked(i, j)) {
                    a.set_unchecked(i, j, true);
                    ++placed;
                }
            }
        }
        return a;
    }

    std::size_t rows() const noexcept { return n_rows_; }
    std::size_t cols() const noexcept { return n_cols_; }
    std::size_t word_cols() const noexcept { return n_word_cols_; }
    std::size_t col_stride() const noexcept { return col_stride_; }
    bool empty() const noexcept { return n_rows_ == 0 || n_cols_ == 0; }

    const Word* col_block(std::size_t q) const noexcept { return storage_.data() + q * col_stride_; }
    Word* col_block(std::size_t q) noexcept { return storage_.data() + q * col_stride_; }

    Word word(std::size_t i, std::size_t q) const noexcept { return storage_[q * col_stride_ + i]; }
    Word& word(std::size_t i, std::size_t q) noexcept { return storage_[q * col_stride_ + i]; }

    /// Word column q of rows [row0, row0+count) as a contiguous span.
    std::span<const Word> col_words(std::size_t q, std::size_t row0, std::size_t count) const {
        return {storage_.data() + q * col_stride_ + row0, count};
    }
    std::span<Word> col_words(std::size_t q, std::size_t row0, std::size_t count) {
        return {storage_.data() + q * col_stride_ + row0, count};
    }

    bool get(std::size_t i, std::size_t j) const {
        check_index(i, j);
        return get_unchecked(i, j);
    }
    void set(std::size_t i, std::size_t j, bool v) {
        check_index(i, j);
        set_unchecked(i, j, v);
    }

    bool get_unchecked(std::size_t i, std::size_t j) const noexcept {
        return (word(i, j / word_bits) >> (j % word_bits)) & Word(1);
    }
    void set_unchecked(std::size_t i, std::size_t j, bool v) noexcept {
        Word& w = word(i, j / word_bits);
        const Word bit = Word(Word(1) << (j % word_bits));
        if (v) w |= bit; else w &= Word(~bit);
    }

    void row_swap(std::size_t i, std::size_t k) {
        check_row(i);
        check_row(k);
        if (i == k) return;
        for (std::size_t q = 0; q < n_word_cols_; ++q)
            std::swap(word(i, q), word(k, q));
    }

    /// word(dst, q) ^= word(src, q) for q in [q_from, q_to). dst == src zeroes the range.
    void row_xor_range(std::size_t dst, std::size_t src, std::size_t q_from, std::size_t q_to) {
        check_row(dst);
        check_row(src);
        if (q_to > n_word_cols_ || q_from > q_to)
            throw std::out_of_range("row_xor_range: word-column range");
        for (std::size_t q = q_from; q < q_to; ++q)
            word(dst, q) ^= word(src, q);
    }

    PackedMatrix transposed() const {
        PackedMatrix out(n_cols_, n_rows_);
        const std::size_t row_tiles = (n_rows_ + word_bits - 1) / word_bits;
#pragma omp parallel for schedule(static) if (n_word_cols_ > 1 && n_rows_ >= 4096)
        for (std::size_t q = 0; q < n_word_cols_; ++q) {
            Word tile[word_bits];
            const std::size_t out_rows = std::min(word_bits, n_cols_ - q * word_bits);
            for (std::size_t tr = 0; tr < row_tiles; ++tr) {
                const std::size_t i0 = tr * word_bits;
                const std::size_t h = std::min(word_bits, n_rows_ - i0);
                for (std::size_t t = 0; t < h; ++t) tile[t] = word(i0 + t, q);
                for (std::size_t t = h; t < word_bits; ++t) tile[t] = 0;
                detail::transpose_tile(tile);
                for (std::size_t t = 0; t < out_rows; ++t)
                    out.word(q * word_bits + t, tr) = tile[t];
            }
        }
        return out;
    }

    /// Entrywise XOR with a matrix of the same shape.
    void xor_with(const PackedMatrix& other) {
        if (other.n_rows_ != n_rows_ || other.n_cols_ != n_cols_)
            throw std::invalid_argument("xor_with: shape mismatch");
#pragma omp parallel for schedule(static) if (n_word_cols_ > 1 && n_rows_ >= 4096)
        for (std::size_t q = 0; q < n_word_cols_; ++q) {
            Word* dst = col_block(q);
            const Word* src = other.col_block(q);
            for (std::size_t i = 0; i < n_rows_; ++i) dst[i] ^= src[i];
        }
    }

    /// Copy of the top-left n2 x m2 corner.
    PackedMatrix cropped(std::size_t n2, std::size_t m2) const {
        if (n2 > n_rows_ || m2 > n_cols_)
            throw std::out_of_range("cropped: larger than source");
        PackedMatrix out(n2, m2);
        for (std::size_t q = 0; q < out.n_word_cols_; ++q) {
            const Word* src = col_block(q);
            Word* dst = out.col_block(q);
            for (std::size_t i = 0; i < n2; ++i) dst[i] = src[i];
        }
        out.mask_padding();
        return out;
    }

    /// Copy of rows [row0, row0+nrows) x word-columns [wcol0, wcol0+nwcols).
    /// Ranges may extend past the matrix; missing entries read as zero.
    /// `out_cols` sets the logical width of the result (default: full words).
    PackedMatrix submatrix(std::size_t row0, std::size_t nrows, std::size_t wcol0,
                           std::size_t nwcols, std::size_t out_cols = SIZE_MAX) const {
        if (out_cols == SIZE_MAX) out_cols = nwcols * word_bits;
        PackedMatrix out(nrows, out_cols);
        const std::size_t copy_rows = row0 < n_rows_ ? std::min(nrows, n_rows_ - row0) : 0;
        for (std::size_t q = 0; q < std::min(nwcols, out.word_cols()); ++q) {
            if (wcol0 + q >= n_word_cols_) break;
            const Word* src = col_block(wcol0 + q) + row0;
            Word* dst = out.col_block(q);
            for (std::size_t i = 0; i < copy_rows; ++i) dst[i] = src[i];
        }
        out.mask_padding();
        return out;
    }

    bool operator==(const PackedMatrix& other) const {
        if (n_rows_ != other.n_rows_ || n_cols_ != other.n_cols_) return false;
        for (std::size_t q = 0; q < n_word_cols_; ++q) {
            const Word* a = col_block(q);
            const Word* b = other.col_block(q);
            for (std::size_t i = 0; i < n_rows_; ++i)
                if (a[i] != b[i]) return false;
        }
        return true;
    }
    bool operator!=(const PackedMatrix& other) const { return !(*this == other); }

    bool is_zero() const noexcept {
        for (std::size_t q = 0; q < n_word_cols_; ++q) {
            const Word* blk = col_block(q);
            for (std::size_t i = 0; i < n_rows_; ++i)
                if (blk[i] != 0) return false;
        }
        return true;
    }

    /// Mask for the valid bits of the last word-column.
    Word last_col_mask() const noexcept {
        const std::size_t rem = n_cols_ % word_bits;
        return rem == 0 ? Word(~Word(0)) : detail::low_mask<Word>(rem);
    }

    /// Re-zero the padding bits of the last word-column.
    void mask_padding() noexcept {
        if (n_word_cols_ == 0) return;
        const Word mask = last_col_mask();
        if (mask == Word(~Word(0))) return;
        Word* blk = col_block(n_word_cols_ - 1);
        for (std::size_t i = 0; i < n_rows_; ++i) blk[i] &= mask;
    }

    bool padding_is_zero() const noexcept {
        if (n_word_cols_ == 0) return true;
        const Word mask = last_col_mask();
        const Word* blk = col_block(n_word_cols_ - 1);
        for (std::size_t i = 0; i < n_rows_; ++i)
            if (blk[i] & ~mask) return false;
        return true;
    }

private:
    static std::size_t round_stride(std::size_t n_rows) noexcept {
        constexpr std::size_t words_per_line = 64 / sizeof(Word);
        return (n_rows + words_per_line - 1) / words_per_line * words_per_line;
    }
    void check_row(std::size_t i) const {
        if (i >= n_rows_) throw std::out_of_range("row index");
    }
    void check_index(std::size_t i, std::size_t j) const {
        if (i >= n_rows_ || j >= n_cols_) throw std::out_of_range("matrix index");
    }

    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::size_t n_word_cols_ = 0;
    std::size_t col_stride_ = 0;
    std::vector<Word, detail::CacheAlignedAllocator<Word>> storage_;
};

using BitMatrix = PackedMatrix<std::uint64_t>;

/// Row permutation P; applying it to A yields (P A) row i = A row perm[i].
struct RowPermutation {
    std::vector<std::uint32_t> perm;

    static RowPermutation identity(std::size_t n) {
        RowPermutation p;
        p.perm.resize(n);
        std::iota(p.perm.begin(), p.perm.end(), 0u);
        return p;
    }
    std::size_t size() const noexcept { return perm.size(); }
    void swap(std::size_t i, std::size_t k) { std::swap(perm.at(i), perm.at(k)); }

    bool is_bijection() const {
        std::vector<bool> seen(perm.size(), false);
        for (auto v : perm) {
            if (v >= perm.size() || seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }
};

/// Rows of `a` gathered in the order given by `rows`.
template <WordType Word>
PackedMatrix<Word> gather_rows(const PackedMatrix<Word>& a, std::span<const std::uint32_t> rows) {
    PackedMatrix<Word> out(rows.size(), a.cols());
    for (std::size_t q = 0; q < a.word_cols(); ++q) {
        const Word* src = a.col_block(q);
        Word* dst = out.col_block(q);
        for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
    }
    return out;
}

/// P A for a full row permutation.
template <WordType Word>
PackedMatrix<Word> apply_permutation(const RowPermutation& p, const PackedMatrix<Word>& a) {
    if (p.size() != a.rows()) throw std::invalid_argument("apply_permutation: size mismatch");
    return gather_rows(a, std::span<const std::uint32_t>(p.perm));
}

/// A ^ B as a new matrix.
template <WordType Word>
PackedMatrix<Word> matrix_xor(const PackedMatrix<Word>& a, const PackedMatrix<Word>& b) {
    PackedMatrix<Word> out = a;
    out.xor_with(b);
    return out;
}

/// XOR the low bits of `bits` into row i starting at column col0.
/// Bits at and above the matrix width must be zero in `bits`.
template <WordType Word>
inline void xor_bits_at(PackedMatrix<Word>& a, std::size_t i, std::size_t col0, Word bits) {
    constexpr std::size_t b = PackedMatrix<Word>::word_bits;
    if (bits == 0) return;
    const std::size_t q = col0 / b;
    const std::size_t s = col0 % b;
    a.word(i, q) ^= Word(bits << s);
    if (s != 0) {
        const Word hi = Word(bits >> (b - s));
        if (hi != 0) a.word(i, q + 1) ^= hi;
    }
}

/// XOR `src` into `dst` with its top-left corner at (row0, col0).
template <WordType Word>
void xor_paste(PackedMatrix<Word>& dst, std::size_t row0, std::size_t col0,
               const PackedMatrix<Word>& src) {
    constexpr std::size_t b = PackedMatrix<Word>::word_bits;
    if (row0 + src.rows() > dst.rows() || col0 + src.cols() > dst.cols())
        throw std::out_of_range("xor_paste: source sticks out");
    for (std::size_t q = 0; q < src.word_cols(); ++q) {
        const Word* blk = src.col_block(q);
        for (std::size_t i = 0; i < src.rows(); ++i)
            xor_bits_at(dst, row0 + i, col0 + q * b, blk[i]);
    }
}

} // namespace f2la

#endif
