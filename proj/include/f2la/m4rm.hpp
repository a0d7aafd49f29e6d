#ifndef F2LA_M4RM_HPP
#define F2LA_M4RM_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "f2la/bit_matrix.hpp"
#include "f2la/tuning.hpp"

namespace f2la {

/// Lookup tables for multiplying by a k-row block B (k <= word bits).
///
/// The k bit positions are split into K groups of sizes l_1..l_K summing to
/// k. Table j holds 2^{l_j} rows of B's width; the entry at index g is the
/// XOR of the B rows selected by the bits of g within group j (entry 0 is
/// the zero row). A row of the product is then the XOR of K table entries
/// addressed by the corresponding bit groups of the driving word.
template <WordType Word>
struct M4rmTables {
    std::size_t k_bits = 0;                // rows of B covered
    std::size_t width_words = 0;           // words per table row
    std::vector<std::uint32_t> shifts;     // first bit of each group
    std::vector<std::uint32_t> sizes;      // l_j
    std::vector<Word> masks;               // low_mask(l_j)
    std::vector<std::size_t> offsets;      // row index of table j's entry 0
    std::vector<Word> entries;             // concatenated rows

    const Word* entry(std::size_t table, std::size_t index) const noexcept {
        return entries.data() + (offsets[table] + index) * width_words;
    }
    std::size_t table_count() const noexcept { return sizes.size(); }
};

/// Group sizes for a k-bit block: floor(k/c) tables of size c plus one
/// remainder table when c does not divide k.
inline std::vector<std::uint32_t> make_splits(std::size_t k_bits, std::size_t c) {
    if (c == 0) throw std::invalid_argument("make_splits: c must be positive");
    std::vector<std::uint32_t> splits;
    for (std::size_t done = 0; done < k_bits;) {
        const std::size_t l = std::min(c, k_bits - done);
        splits.push_back(static_cast<std::uint32_t>(l));
        done += l;
    }
    return splits;
}

namespace detail {

template <WordType Word>
M4rmTables<Word> make_table_shell(std::size_t k_bits, std::size_t width_words,
                                  std::span<const std::uint32_t> splits) {
    M4rmTables<Word> t;
    t.k_bits = k_bits;
    t.width_words = width_words;
    std::size_t bit = 0, rows = 0;
    for (const std::uint32_t l : splits) {
        t.shifts.push_back(static_cast<std::uint32_t>(bit));
        t.sizes.push_back(l);
        t.masks.push_back(low_mask<Word>(l));
        t.offsets.push_back(rows);
        bit += l;
        rows += std::size_t(1) << l;
    }
    if (bit != k_bits) throw std::invalid_argument("build_tables: splits do not sum to k");
    t.entries.assign(rows * width_words, Word(0));
    return t;
}

/// Fill table entries by doubling: each entry costs one row XOR.
/// row_of(t) must yield a pointer to the t-th B row (width_words words).
template <WordType Word, typename RowOf>
void fill_tables(M4rmTables<Word>& t, RowOf&& row_of) {
    const std::size_t w = t.width_words;
    for (std::size_t j = 0; j < t.table_count(); ++j) {
        for (std::size_t bit = 0; bit < t.sizes[j]; ++bit) {
            const Word* row = row_of(t.shifts[j] + bit);
            const std::size_t base = std::size_t(1) << bit;
            for (std::size_t g = base; g < base * 2; ++g) {
                const Word* prev = t.entry(j, g - base);
                Word* dst = t.entries.data() + (t.offsets[j] + g) * w;
                for (std::size_t x = 0; x < w; ++x) dst[x] = Word(prev[x] ^ row[x]);
            }
        }
    }
}

} // namespace detail

/// Tables over rows [row0, row0+k_bits) x word-columns [wcol0, wcol0+n_wcols) of B.
template <WordType Word>
M4rmTables<Word> build_tables(const PackedMatrix<Word>& b_mat, std::size_t row0,
                              std::size_t k_bits, std::size_t wcol0, std::size_t n_wcols,
                              std::span<const std::uint32_t> splits) {
    if (k_bits > PackedMatrix<Word>::word_bits)
        throw std::invalid_argument("build_tables: block taller than a word");
    if (row0 + k_bits > b_mat.rows() || wcol0 + n_wcols > b_mat.word_cols())
        throw std::out_of_range("build_tables: block outside B");
    auto t = detail::make_table_shell<Word>(k_bits, n_wcols, splits);
    if (n_wcols == 1) {
        const Word* blk = b_mat.col_block(wcol0) + row0;
        detail::fill_tables(t, [&](std::size_t r) { return blk + r; });
    } else {
        std::vector<Word> rowbuf(k_bits * n_wcols);
        for (std::size_t r = 0; r < k_bits; ++r)
            for (std::size_t q = 0; q < n_wcols; ++q)
                rowbuf[r * n_wcols + q] = b_mat.word(row0 + r, wcol0 + q);
        detail::fill_tables(t, [&](std::size_t r) { return rowbuf.data() + r * n_wcols; });
    }
    return t;
}

/// Whole-matrix convenience: B must have at most word_bits rows.
template <WordType Word>
M4rmTables<Word> build_tables(const PackedMatrix<Word>& b_mat,
                              std::span<const std::uint32_t> splits) {
    return build_tables(b_mat, 0, b_mat.rows(), 0, b_mat.word_cols(), splits);
}
template <WordType Word>
M4rmTables<Word> build_tables(const PackedMatrix<Word>& b_mat, std::size_t c) {
    const auto splits = make_splits(b_mat.rows(), c);
    return build_tables(b_mat, std::span<const std::uint32_t>(splits));
}

/// Tables over bare words: row r of B is the single word rows[r].
template <WordType Word>
M4rmTables<Word> build_tables(std::span<const Word> rows, std::size_t c) {
    const auto splits = make_splits(rows.size(), c);
    auto t = detail::make_table_shell<Word>(rows.size(), 1,
                                            std::span<const std::uint32_t>(splits));
    detail::fill_tables(t, [&](std::size_t r) { return rows.data() + r; });
    return t;
}

/// C rows [c_row0 + i] word-columns [c_wcol0, c_wcol0 + width) ^= a_words[i] * B
/// for every i, where B is the block the tables were built from. Rows whose
/// driving word is zero are skipped.
template <WordType Word>
void mult_acc(PackedMatrix<Word>& c_mat, std::size_t c_row0, std::size_t c_wcol0,
              std::span<const Word> a_words, const M4rmTables<Word>& tables) {
    const std::size_t w = tables.width_words;
    if (c_row0 + a_words.size() > c_mat.rows() || c_wcol0 + w > c_mat.word_cols())
        throw std::out_of_range("mult_acc: destination outside C");
    const std::size_t ntab = tables.table_count();
    if (w == 1) {
        Word* dst = c_mat.col_block(c_wcol0) + c_row0;
        for (std::size_t i = 0; i < a_words.size(); ++i) {
            const Word a = a_words[i];
            if (a == 0) continue;
            Word acc = 0;
            for (std::size_t j = 0; j < ntab; ++j) {
                const Word idx = Word((a >> tables.shifts[j]) & tables.masks[j]);
                if (idx) acc ^= *tables.entry(j, idx);
            }
            dst[i] ^= acc;
        }
        return;
    }
    for (std::size_t i = 0; i < a_words.size(); ++i) {
        const Word a = a_words[i];
        if (a == 0) continue;
        for (std::size_t j = 0; j < ntab; ++j) {
            const Word idx = Word((a >> tables.shifts[j]) & tables.masks[j]);
            if (!idx) continue;
            const Word* src = tables.entry(j, idx);
            for (std::size_t q = 0; q < w; ++q)
                c_mat.word(c_row0 + i, c_wcol0 + q) ^= src[q];
        }
    }
}

/// Exact product A * B over F2 by the four-Russians method, blocked over
/// ceil(k / word_bits) row blocks of B. c = 0 picks the table size from the
/// cost model.
template <WordType Word>
PackedMatrix<Word> m4rm_mult(const PackedMatrix<Word>& a, const PackedMatrix<Word>& b,
                             std::size_t c = 0) {
    constexpr std::size_t wb = PackedMatrix<Word>::word_bits;
    if (a.cols() != b.rows()) throw std::invalid_argument("m4rm_mult: shape mismatch");
    if (c == 0) c = tuning::optimal_table_size(wb, a.rows() ? double(a.rows()) : 1.0);
    PackedMatrix<Word> out(a.rows(), b.cols());
    const std::size_t k_blocks = a.word_cols();
#pragma omp parallel for schedule(dynamic) if (out.word_cols() > 1 && a.rows() >= 256)
    for (std::size_t q = 0; q < out.word_cols(); ++q) {
        for (std::size_t kb = 0; kb < k_blocks; ++kb) {
            const std::size_t k_bits = std::min(wb, a.cols() - kb * wb);
            const auto splits = make_splits(k_bits, c);
            const auto tables = build_tables(b, kb * wb, k_bits, q, 1,
                                             std::span<const std::uint32_t>(splits));
            mult_acc(out, 0, q, a.col_words(kb, 0, a.rows()), tables);
        }
    }
    return out;
}

} // namespace f2la

#endif
