#pragma once
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cantor/rational.hpp"

namespace cantor {

// Q = (q_1, q_2, ...) with q_n >= 2. Formula kinds carry a certified
// monotone growth search; list and custom kinds need an explicit witness.
class BasicSequence {
public:
    enum class Kind { Successor, PowerOfTwo, Constant, List, Custom };

    using Gen = std::function<Integer(std::uint64_t)>;
    using Witness = std::function<std::uint64_t(const Integer&)>;

    static BasicSequence successor();                    // q_n = n + 1
    static BasicSequence power_of_two();                 // q_n = 2^n
    static BasicSequence constant(const Integer& b);     // q_n = b
    static BasicSequence list(std::vector<Integer> values);   // finite, q_n for n <= size
    // gen must be total; monotone == true asserts non-decreasing q_n which
    // enables certified growth search.
    static BasicSequence custom(Gen gen, bool monotone, std::string label = "custom");

    BasicSequence with_witness(Witness w) const;

    Integer q(std::uint64_t n) const;     // RangeError past a finite list, DomainError at n = 0
    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    bool has_witness() const { return static_cast<bool>(witness_); }
    bool monotone() const { return monotone_; }
    std::optional<std::uint64_t> length() const;   // set for List only

    // m(t) = inf{i : q_j >= t for all j >= i}.
    std::uint64_t growth_index(const Integer& t) const;

    // Product q_a * ... * q_b (1 for empty range).
    Integer product(std::uint64_t a, std::uint64_t b) const;

private:
    Kind kind_ = Kind::Successor;
    Gen gen_;
    Witness witness_;
    bool monotone_ = true;
    std::string label_;
    std::shared_ptr<const std::vector<Integer>> list_;
    Integer base_;
};

inline std::uint64_t growth_index(const BasicSequence& Q, const Integer& t) { return Q.growth_index(t); }

} // namespace cantor
