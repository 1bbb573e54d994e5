#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cantor/rational.hpp"

namespace cantor {

// a_0 + a_1 X + ... + a_k X^k with a_k > 0 and k >= 1. Values are taken on
// N = {0, 1, 2, ...}.
class IntPolynomial {
public:
    IntPolynomial() : IntPolynomial(std::vector<Integer>{0, 1}) {}
    explicit IntPolynomial(std::vector<Integer> coeffs);   // constant term first
    static IntPolynomial X() { return IntPolynomial(); }
    static IntPolynomial parse(const std::string& text);   // "X", "X^2+1", "4*X^2-3X+2"

    unsigned degree() const { return static_cast<unsigned>(c_.size() - 1); }
    const std::vector<Integer>& coeffs() const { return c_; }
    const Integer& lead() const { return c_.back(); }
    Integer height() const;                      // max |a_i|
    bool monic() const { return c_.back() == 1; }
    bool is_identity() const { return c_.size() == 2 && c_[0] == 0 && c_[1] == 1; }

    Integer operator()(const Integer& x) const;
    // p increasing and positive on [threshold, oo) (Cauchy bound on the roots of p and p').
    Integer increasing_threshold() const;
    bool takes_value(const Integer& v) const;    // v in p(N)
    // Sorted distinct values of p(N) in [s, n].
    std::vector<Integer> values_in(const Integer& s, const Integer& n) const;

    std::string to_string() const;
    nlohmann::json to_json() const;
    static IntPolynomial from_json(const nlohmann::json& j);

    bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

private:
    std::vector<Integer> c_;
    Integer threshold_;
};

// d(p, q, s, n) = #(p(N) n q(N) n [s,n]) / #(q(N) n [s,n]).
Rational intersection_density(const IntPolynomial& p, const IntPolynomial& q, const Integer& s, const Integer& n);

struct LinearWitness {
    Integer mu_a, mu_b;     // mu = mu_a X + mu_b
    Integer la_a, la_b;     // lambda = la_a X + la_b
};
// Searches p o mu = q o lambda with all coefficients bounded by coeff_bound.
std::optional<LinearWitness> linear_composition_witness(const IntPolynomial& p, const IntPolynomial& q, long coeff_bound);
// Exact coefficient identity check for a witness.
bool verify_witness(const IntPolynomial& p, const IntPolynomial& q, const LinearWitness& w);

// q = p o h for some h in Q[X] (either order). Such pairs make p(X) - q(Y) reducible.
bool composition_reducible(const IntPolynomial& p, const IntPolynomial& q);

// Bound on max{|x|,|y|} for integer solutions of p(x) = q(y):
// d^(2m^2/d - m) (m+1)^(3m/2d) (m/d+1)^(3m/2) (h+1)^((m^2+mn+m)/d + 2m), rounded up.
Integer tengely_bound(unsigned m, unsigned n, unsigned d, const Integer& h);
Integer tengely_bound(const IntPolynomial& p, const IntPolynomial& q, unsigned d);

// n - s > N(m) implies d(num, den, s, n) < 1/m, where the certificate names
// which polynomial plays the role of p ("num") and q ("den").
struct PairCertificate {
    enum class Route { Identity, Tengely };
    Route route = Route::Identity;
    IntPolynomial num, den;
    // Identity route parameters
    unsigned k = 0;
    Integer a_k, a_star;
    // Tengely route parameters
    unsigned d = 0;
    Integer M;

    Integer N(unsigned long m) const;
    nlohmann::json to_json() const;
};
PairCertificate pair_bound_certificate(const IntPolynomial& p, const IntPolynomial& q);

struct SparsePolySet {
    std::vector<IntPolynomial> polys;
    // certificates[j] holds the certificates of polys[j] against polys[0..j-1]
    std::vector<std::vector<PairCertificate>> certificates;
    nlohmann::json to_json() const;
};

struct PolysetOptions {
    long witness_bound = 4;           // raised to the stage number when larger
    long comparability_window = 20000;
};
SparsePolySet build_explicit_polyset(unsigned stage_count, const PolysetOptions& opt = {});

} // namespace cantor
