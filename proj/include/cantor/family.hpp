#pragma once
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cantor/adf.hpp"

namespace cantor {

// (m >= 1, 0 <= r < m) -> Adf, a linear family when the averaging identity holds.
class LinearFamily {
public:
    enum class Kind { Uniform, Power, Piecewise, ClosedSet, SFamily, Custom };
    using Rule = std::function<Adf(unsigned long m, unsigned long r)>;

    LinearFamily(Kind kind, Rule rule, nlohmann::json params = nlohmann::json::object());

    static LinearFamily uniform();
    static LinearFamily power(unsigned e);
    static LinearFamily constant(const Adf& f);                 // Piecewise kind
    static LinearFamily closed_set(const ClosedSetU& D);        // f_D for every (m, r)
    static LinearFamily custom(Rule rule, std::string label = "custom");

    Adf operator()(unsigned long m, unsigned long r) const;
    Kind kind() const { return kind_; }
    std::string kind_name() const;
    const nlohmann::json& params() const { return params_; }

    // Config form, e.g. {"kind":"power","exponent":2}.
    nlohmann::json to_json() const;
    static LinearFamily from_json(const nlohmann::json& j);

private:
    Kind kind_;
    Rule rule_;
    nlohmann::json params_;
};

// Continuous interpolant of f_{m,r} on {i/(n+1)} U {1} U {jumps > 1/n}.
Adf continuous_family_approx(const LinearFamily& fam, unsigned long n, unsigned long m, unsigned long r);
Adf continuous_approx(const Adf& f, unsigned long n);
std::vector<Rational> approx_grid(const Adf& f, unsigned long n);

// ---------------------------------------------------------------- s-family
// Atoms at level n are J_s, s in [0, D(n)), D(n) = lcm(1..n), each of length
// 1/D(n); S_{m,r} is the union of the atoms whose index is r mod m.
struct SFamilyTables {
    unsigned max_m;
    Integer D;                        // lcm(1..max_m)
    std::vector<unsigned long> rho;   // rho[s] = position of atom s at level max_m
};

Integer lcm_step(unsigned n);   // d(n) = lcm(1..n) / lcm(1..n-1)
// Residue tuples (r_1..r_{n-1}), r_t in [0,t), compatible with x = r mod n.
std::vector<std::vector<unsigned long>> gamma_tuples(unsigned n, unsigned long r);
// Chinese remainder merge of x = r_t mod t (t = 1..len) and x = r mod n. Empty when inconsistent.
std::optional<std::pair<Integer, Integer>> crt_merge(const std::vector<std::pair<Integer, Integer>>& congruences);
ClosedSetU s_set(unsigned n, unsigned long r);
LinearFamily ap_abnormal_family(unsigned max_m, unsigned long atom_budget = 1000000);

// (q, s) -> f_{A_{q,s}} built from D_{m,r}, m <= k.
class AccumulationTargets {
public:
    // d[m-1][r] = D_{m,r}
    explicit AccumulationTargets(std::vector<std::vector<ClosedSetU>> d);
    unsigned k() const { return static_cast<unsigned>(d_.size()); }
    ClosedSetU A(unsigned long q, unsigned long s) const;
    Adf operator()(unsigned long q, unsigned long s) const { return adf_from_closed_set(A(q, s)); }
    LinearFamily as_family() const;
    const std::vector<std::vector<ClosedSetU>>& targets() const { return d_; }

private:
    std::vector<std::vector<ClosedSetU>> d_;
};
AccumulationTargets ap_accumulation_targets(std::vector<std::vector<ClosedSetU>> d);

struct IdentityReport {
    bool ok;
    Rational max_defect;
};
IdentityReport family_identity_check(const LinearFamily& fam, unsigned long m, unsigned long r, unsigned long d,
                                     const std::vector<Rational>& samples);

// Per polynomial an upper and a lower family with upper >= lower.
struct TargetPair {
    LinearFamily upper;
    LinearFamily lower;
};
struct TargetSpec {
    std::vector<TargetPair> pairs;   // indexed like the polynomial set
    // Checks upper >= lower at rational samples; ConfigError on failure.
    void validate(unsigned long max_m = 4, unsigned grid = 32) const;
};

} // namespace cantor
