#pragma once
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cantor/adf.hpp"
#include "cantor/expansion.hpp"
#include "cantor/family.hpp"
#include "cantor/polynomial.hpp"

namespace cantor {

// Finite window of values, each known exactly or as an enclosure [lo, hi]
// with 0 <= lo <= hi <= 1. Optional digit indices label the values.
class SequenceWindow {
public:
    SequenceWindow() = default;
    static SequenceWindow exact(const std::vector<Rational>& values);

    void push(const Rational& v);
    void push(const Enclosure& e);
    void push(const Enclosure& e, std::uint64_t index);

    std::size_t size() const { return values_.size(); }
    const Enclosure& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Enclosure>& values() const { return values_; }
    const std::vector<std::uint64_t>& indices() const { return indices_; }
    bool is_exact() const;
    Rational max_width() const;

    SequenceWindow prefix(std::size_t n) const;
    SequenceWindow concat(const SequenceWindow& o) const;

private:
    std::vector<Enclosure> values_;
    std::vector<std::uint64_t> indices_;
};

struct Interval {
    Rational a, b;
    bool a_closed = true, b_closed = false;
    static Interval closed_open(const Rational& a, const Rational& b) { return {a, b, true, false}; }
    static Interval closed(const Rational& a, const Rational& b) { return {a, b, true, true}; }
    bool contains(const Rational& x) const;
};

// Definite and possible counts; equal when no enclosure straddles an endpoint.
struct CountRange {
    std::uint64_t lo = 0, hi = 0;
    bool exact() const { return lo == hi; }
};
// A_n(I, w) over the first n values.
CountRange count_in(const Interval& I, const SequenceWindow& w, std::size_t n);

// x -> A_n([0, x), w) / n as a step adf; exact windows only.
Adf empirical_adf(const SequenceWindow& w, std::size_t n);

struct DiscrepancyReport {
    std::size_t n = 0;
    Enclosure upper;   // bounds on the upper discrepancy, >= 0
    Enclosure lower;   // bounds on the lower discrepancy, <= 0
    Rational gamma_upper, gamma_lower;   // candidates attaining the bounds
    bool exact() const { return upper.exact() && lower.exact(); }
    // max(upper, -lower)
    Enclosure star() const;
    nlohmann::json to_json() const;
};
DiscrepancyReport discrepancy(const SequenceWindow& w, std::size_t n, const Adf& f);
// Worst-case bounds: upper.hi and lower.lo.
Rational upper_discrepancy(const SequenceWindow& w, std::size_t n, const Adf& f);
Rational lower_discrepancy(const SequenceWindow& w, std::size_t n, const Adf& f);
// sup over 0 <= a <= b <= 1 of |A_n([a,b))/n - (f(b) - f(a))|; exact windows only.
Rational extreme_discrepancy(const SequenceWindow& w, std::size_t n, const Adf& f);

enum class SubsequenceMode { Orbit, Ratio };
SubsequenceMode parse_subsequence_mode(const std::string& s);

// Values at digit indices j = p(mk + r), k = 0, 1, ..., with j >= 1 and within the
// prefix. Ratio mode gives E_j / q_j; orbit mode gives an enclosure of T_{Q, j-1}
// from tail_terms digits, widened to a 2^-grid_bits grid when grid_bits > 0.
SequenceWindow subsequence(const DigitPrefix& d, const IntPolynomial& p, unsigned long m, unsigned long r,
                           SubsequenceMode mode, unsigned tail_terms = 3, unsigned grid_bits = 0);

// Orbit values from digits fed in order n = 1, 2, ...: once E_{j+tail-1} is
// known, the enclosure of T_{Q, j-1} joins the window with index j. Matches
// subsequence(d, X, 1, 0, Orbit, tail_terms, grid_bits) without holding digits.
class OrbitStream {
public:
    explicit OrbitStream(unsigned tail_terms = 3, unsigned grid_bits = 96);
    void push(const Integer& q, const Integer& E);
    std::uint64_t fed() const { return fed_; }
    const SequenceWindow& window() const { return w_; }

private:
    unsigned tail_, bits_;
    std::uint64_t fed_ = 0;
    std::vector<std::pair<Integer, Integer>> buf_;   // last tail (q, E) pairs
    SequenceWindow w_;
};

struct ApRow {
    std::uint64_t checkpoint = 0;
    unsigned long m = 0, r = 0;
    std::size_t count = 0;
    DiscrepancyReport orbit, ratio;
    Enclosure sandwich;   // star range implied by ratio and ratio + 1/q
    bool diverged = false;
};
struct ApReport {
    std::vector<ApRow> rows;
    bool any_divergence() const;
    nlohmann::json to_json() const;
    void write_csv(std::ostream& os) const;   // checkpoint,m,r,upper,lower,star
};
ApReport ap_normality_report(const DigitPrefix& d, unsigned long max_m, const std::vector<std::uint64_t>& checkpoints,
                             unsigned tail_terms = 3, unsigned grid_bits = 96);

// Union of width >= eps intervals around values whose cell frequency in the
// tail half of the window reaches threshold (eps / 4 by default).
ClosedSetU accumulation_estimate(const SequenceWindow& w, const Rational& eps,
                                 std::optional<Rational> threshold = std::nullopt);
Rational hausdorff_distance(const ClosedSetU& a, const ClosedSetU& b);

// k -> log(n_1...n_k) / -log(c_1...c_{k+1} n_{k+1}) for k = 1..K.
std::vector<Enclosure> moran_lower_bound(const std::vector<Integer>& n, const std::vector<Rational>& c, std::size_t K);

struct SuiteParams {
    Adf f = Adf::identity();
    std::vector<std::size_t> blocks;              // item 2 split, sizes summing to at most n
    std::optional<LinearFamily> family;            // item 4
    unsigned long m = 1, r = 0, d = 2;
    std::optional<std::pair<Adf, Adf>> ordered;    // item 5: (upper, lower) with upper >= lower
};
struct SuiteItem {
    int item = 0;
    bool ok = true;
    bool applied = false;
    Rational lhs, rhs;
    std::string detail;
};
struct SuiteReport {
    std::vector<SuiteItem> items;
    bool ok() const;
    nlohmann::json to_json() const;
};
// Items 1, 2, 4, 5, 6 on the first n values; exact windows only.
SuiteReport discrepancy_property_suite(const SequenceWindow& w, std::size_t n, const SuiteParams& params);

} // namespace cantor
