#include "cantor/basic_sequence.hpp"

namespace cantor {

BasicSequence BasicSequence::successor() {
    BasicSequence s;
    s.kind_ = Kind::Successor;
    s.label_ = "n+1";
    s.gen_ = [](std::uint64_t n) -> Integer { return Integer(static_cast<unsigned long>(n)) + 1; };
    return s;
}

BasicSequence BasicSequence::power_of_two() {
    BasicSequence s;
    s.kind_ = Kind::PowerOfTwo;
    s.label_ = "2^n";
    s.gen_ = [](std::uint64_t n) {
        Integer r;
        mpz_ui_pow_ui(r.get_mpz_t(), 2, n);
        return r;
    };
    return s;
}

BasicSequence BasicSequence::constant(const Integer& b) {
    if (b < 2) throw DomainError("basic sequence needs q_n >= 2");
    BasicSequence s;
    s.kind_ = Kind::Constant;
    s.base_ = b;
    s.label_ = "constant:" + b.get_str();
    s.gen_ = [b](std::uint64_t) { return b; };
    return s;
}

BasicSequence BasicSequence::list(std::vector<Integer> values) {
    for (const auto& v : values)
        if (v < 2) throw DomainError("basic sequence needs q_n >= 2");
    BasicSequence s;
    s.kind_ = Kind::List;
    s.label_ = "list";
    s.monotone_ = false;
    s.list_ = std::make_shared<const std::vector<Integer>>(std::move(values));
    auto data = s.list_;
    s.gen_ = [data](std::uint64_t n) {
        if (n > data->size()) throw RangeError("index " + std::to_string(n) + " past explicit basic sequence");
        return (*data)[n - 1];
    };
    return s;
}

BasicSequence BasicSequence::custom(Gen gen, bool monotone, std::string label) {
    BasicSequence s;
    s.kind_ = Kind::Custom;
    s.gen_ = std::move(gen);
    s.monotone_ = monotone;
    s.label_ = std::move(label);
    return s;
}

BasicSequence BasicSequence::with_witness(Witness w) const {
    BasicSequence s = *this;
    s.witness_ = std::move(w);
    return s;
}

std::optional<std::uint64_t> BasicSequence::length() const {
    if (kind_ == Kind::List) return list_->size();
    return std::nullopt;
}

Integer BasicSequence::q(std::uint64_t n) const {
    if (n == 0) throw DomainError("basic sequence is indexed from 1");
    Integer v = gen_(n);
    if (v < 2) throw DomainError("q_" + std::to_string(n) + " < 2");
    return v;
}

Integer BasicSequence::product(std::uint64_t a, std::uint64_t b) const {
    if (kind_ == Kind::PowerOfTwo && a <= b) {
        // 2^(a + ... + b)
        Integer r = 1;
        std::uint64_t e = (a + b) * (b - a + 1) / 2;
        mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), e);
        return r;
    }
    Integer r = 1;
    for (std::uint64_t n = a; n <= b; ++n) r *= q(n);
    return r;
}

std::uint64_t BasicSequence::growth_index(const Integer& t) const {
    if (witness_) return witness_(t);
    if (kind_ == Kind::Constant) {
        if (t <= base_) return 1;
        throw UnsupportedError("constant basic sequence never reaches " + t.get_str());
    }
    if (!monotone_ || kind_ == Kind::List)
        throw UnsupportedError("no growth witness and no certified monotonicity for " + label_);
    if (q(1) >= t) return 1;
    // Non-decreasing: first index reaching t works for all later ones.
    std::uint64_t lo = 1, hi = 2;
    while (q(hi) < t) {
        lo = hi;
        if (hi > (std::uint64_t(1) << 62)) throw UnsupportedError("growth search overflow");
        hi *= 2;
    }
    while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (q(mid) >= t) hi = mid; else lo = mid;
    }
    return hi;
}

} // namespace cantor
