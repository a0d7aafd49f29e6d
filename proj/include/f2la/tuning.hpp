#ifndef F2LA_TUNING_HPP
#define F2LA_TUNING_HPP

#include <cstddef>

namespace f2la::tuning {

/// Abstract operation costs for the multiplication kernels. All estimates
/// are in units of one word XOR; wall-clock calibration is a benchmark
/// activity, not a library constant.
struct CostModel {
    unsigned word_bits = 64;   // b
    unsigned table_size = 5;   // c, 2 <= c <= b
    double xor_cost = 1.0;     // cost of one b-bit XOR
    double popcount_cost = 1.0;

    void validate() const;
};

/// C(b,c,n) = (b/c) * (2^c - 1 + n): table build plus n row sweeps,
/// in XOR units.
double m4rm_cost(unsigned word_bits, unsigned table_size, double n);

/// Integer argmin of m4rm_cost over c in [2, min(b,16)], ties toward
/// smaller c. Requires n >= 1.
unsigned optimal_table_size(unsigned word_bits, double n);

/// Size at which Strassen recursion starts to pay off against direct
/// four-Russians multiplication: 44c + 6(2^c - 1).
std::size_t strassen_threshold(unsigned table_size);

enum class RankRegime { full, one };

/// Leading term of the decomposition cost for an n x n input:
/// n^3/(3bc) in the full-rank regime, n^3/(2bc) at rank one.
double predicted_decomposition_cost(double n, unsigned word_bits, unsigned table_size,
                                    RankRegime regime);

/// Cost ratio of running a row sweep with b-bit words instead of 2b-bit
/// words: 2 * (xor_b / xor_2b). Values above 1 favour the wider word.
double word_size_cost_ratio(double xor_b, double xor_2b);

} // namespace f2la::tuning

#endif
