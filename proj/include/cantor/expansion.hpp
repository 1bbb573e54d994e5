#pragma once
#include <iosfwd>
#include <vector>

#include "cantor/basic_sequence.hpp"

namespace cantor {

// Finite digit prefix E_1..E_N of a Q-Cantor series expansion.
class DigitPrefix {
public:
    DigitPrefix(BasicSequence q, std::vector<Integer> digits);

    const BasicSequence& q_ref() const { return q_; }
    std::uint64_t size() const { return digits_.size(); }
    const Integer& digit(std::uint64_t n) const;   // 1-based
    const std::vector<Integer>& digits() const { return digits_; }
    Integer q(std::uint64_t n) const { return q_.q(n); }

private:
    BasicSequence q_;
    std::vector<Integer> digits_;
};

DigitPrefix digits_of(const Rational& x, const BasicSequence& Q, std::uint64_t N);
Rational value_of(const DigitPrefix& d);
Rational t_qn(const Rational& x, const BasicSequence& Q, std::uint64_t n);
// Enclosure of T_{Q,n}(x) from the digits E_{n+1}..E_{n+tail}.
Enclosure t_qn_from_digits(const DigitPrefix& d, std::uint64_t n, std::uint64_t tail_terms);

// Rows "n,q_n,E_n" with a header line.
void write_digits_csv(std::ostream& os, const DigitPrefix& d);
// Reads CSV with header containing n, q_n and E_n columns (extra columns ignored).
// Rows must be consecutive from n = 1; q_n is checked against Q.
DigitPrefix read_digits_csv(std::istream& is, const BasicSequence& Q);

} // namespace cantor
