#include "cantor/expansion.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <algorithm>

namespace cantor {

DigitPrefix::DigitPrefix(BasicSequence q, std::vector<Integer> digits)
    : q_(std::move(q)), digits_(std::move(digits)) {
    for (std::uint64_t n = 1; n <= digits_.size(); ++n) {
        const Integer& e = digits_[n - 1];
        if (e < 0 || e >= q_.q(n))
            throw DomainError("digit E_" + std::to_string(n) + " outside [0, q_n - 1]");
    }
}

const Integer& DigitPrefix::digit(std::uint64_t n) const {
    if (n == 0 || n > digits_.size()) throw RangeError("digit index " + std::to_string(n) + " outside prefix");
    return digits_[n - 1];
}

DigitPrefix digits_of(const Rational& x, const BasicSequence& Q, std::uint64_t N) {
    if (x < 0 || x >= 1) throw DomainError("digits_of needs 0 <= x < 1");
    if (N == 0) throw DomainError("digits_of needs N >= 1");
    std::vector<Integer> out;
    out.reserve(N);
    Rational r = x;
    for (std::uint64_t n = 1; n <= N; ++n) {
        Rational t = r * Rational(Q.q(n));
        Integer e = floor_of(t);
        out.push_back(e);
        r = t - Rational(e);
    }
    return DigitPrefix(Q, std::move(out));
}

Rational value_of(const DigitPrefix& d) {
    // Horner from the last digit: v <- (E_n + v) / q_n.
    Rational v = 0;
    for (std::uint64_t n = d.size(); n >= 1; --n) {
        v = (Rational(d.digit(n)) + v) / Rational(d.q(n));
        v.canonicalize();
    }
    return v;
}

Rational t_qn(const Rational& x, const BasicSequence& Q, std::uint64_t n) {
    if (x < 0 || x >= 1) throw DomainError("t_qn needs 0 <= x < 1");
    Rational r = x;
    for (std::uint64_t k = 1; k <= n; ++k) r = frac_of(r * Rational(Q.q(k)));
    return r;
}

Enclosure t_qn_from_digits(const DigitPrefix& d, std::uint64_t n, std::uint64_t tail_terms) {
    if (tail_terms == 0) return Enclosure(Rational(0), Rational(1));
    if (n + tail_terms > d.size())
        throw RangeError("t_qn_from_digits needs " + std::to_string(n + tail_terms) + " digits, prefix has " +
                         std::to_string(d.size()));
    Rational v = 0;
    for (std::uint64_t k = n + tail_terms; k > n; --k) v = (Rational(d.digit(k)) + v) / Rational(d.q(k));
    Integer denom = d.q_ref().product(n + 1, n + tail_terms);
    return Enclosure(v, v + Rational(1, 1) / Rational(denom));
}

void write_digits_csv(std::ostream& os, const DigitPrefix& d) {
    os << "n,q_n,E_n\n";
    for (std::uint64_t n = 1; n <= d.size(); ++n) os << n << ',' << d.q(n) << ',' << d.digit(n) << '\n';
}

static std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    return out;
}

DigitPrefix read_digits_csv(std::istream& is, const BasicSequence& Q) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("digit CSV is empty");
    auto head = split_csv(line);
    int cn = -1, cq = -1, ce = -1;
    for (int i = 0; i < static_cast<int>(head.size()); ++i) {
        if (head[i] == "n") cn = i;
        else if (head[i] == "q_n") cq = i;
        else if (head[i] == "E_n") ce = i;
    }
    if (cn < 0 || cq < 0 || ce < 0) throw ConfigError("digit CSV header needs n, q_n, E_n columns");
    std::vector<Integer> digits;
    std::uint64_t expect = 1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto row = split_csv(line);
        int need = std::max({cn, cq, ce});
        if (static_cast<int>(row.size()) <= need) throw ConfigError("short CSV row at n=" + std::to_string(expect));
        Integer n = parse_integer(row[cn]);
        if (n != static_cast<unsigned long>(expect)) throw ConfigError("digit CSV rows must be consecutive from n=1");
        if (parse_integer(row[cq]) != Q.q(expect))
            throw ConfigError("q_" + std::to_string(expect) + " in CSV does not match the configured basic sequence");
        digits.push_back(parse_integer(row[ce]));
        ++expect;
    }
    return DigitPrefix(Q, std::move(digits));
}

} // namespace cantor
