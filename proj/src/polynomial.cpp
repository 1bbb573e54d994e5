#include "cantor/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace cantor {

namespace {

using RatPoly = std::vector<Rational>;   // constant term first

void trim(RatPoly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

RatPoly mul(const RatPoly& a, const RatPoly& b) {
    RatPoly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

// p o h by Horner.
RatPoly compose(const RatPoly& p, const RatPoly& h) {
    RatPoly r{p.back()};
    for (size_t i = p.size() - 1; i-- > 0;) {
        r = mul(r, h);
        r[0] += p[i];
    }
    trim(r);
    return r;
}

RatPoly to_rat(const IntPolynomial& p) {
    RatPoly r;
    for (const auto& c : p.coeffs()) r.emplace_back(c);
    return r;
}

// Rational n-th roots of x (both signs for even n).
std::vector<Rational> rational_roots(const Rational& x, unsigned n) {
    std::vector<Rational> out;
    if (x == 0) return {Rational(0)};
    if (x < 0 && n % 2 == 0) return out;
    Integer num = abs(x.get_num()), den = x.get_den(), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n)) return out;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n)) return out;
    Rational r = make_rational(rn, rd);
    if (x < 0) r = -r;
    out.push_back(r);
    if (n % 2 == 0) out.push_back(-r);
    return out;
}

// h with p o h = q, or nothing; deg p must divide deg q.
bool right_factor_exists(const IntPolynomial& p, const IntPolynomial& q) {
    unsigned n = p.degree(), m = q.degree();
    if (m % n != 0) return false;
    unsigned t = m / n;
    RatPoly P = to_rat(p), Q = to_rat(q);
    for (const auto& lead : rational_roots(Rational(q.lead()) / Rational(p.lead()), n)) {
        RatPoly h(t + 1, Rational(0));
        h[t] = lead;
        Rational scale = Rational(n) * P.back();
        for (unsigned k = 1; k < n; ++k) scale *= lead;
        for (unsigned i = 1; i <= t; ++i) {
            RatPoly cur = compose(P, h);
            cur.resize(m + 1, Rational(0));
            h[t - i] = (Q[m - i] - cur[m - i]) / scale;
        }
        RatPoly full = compose(P, h);
        if (full == Q) return true;
    }
    return false;
}

Integer ipow(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// 0, 1, -1, 2, -2, ... up to +-bound
std::vector<long> signed_order(long bound) {
    std::vector<long> v{0};
    for (long k = 1; k <= bound; ++k) {
        v.push_back(k);
        v.push_back(-k);
    }
    return v;
}

} // namespace

// ------------------------------------------------------------ IntPolynomial

IntPolynomial::IntPolynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) {
    while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
    if (c_.size() < 2) throw DomainError("polynomial must have degree >= 1");
    if (c_.back() <= 0) throw DomainError("polynomial needs a positive leading coefficient");
    // Cauchy bounds for the roots of p and p'
    unsigned k = degree();
    Rational bound = 0;
    for (unsigned i = 0; i < k; ++i) bound = std::max(bound, Rational(Rational(abs(c_[i])) / Rational(c_[k])));
    if (k >= 2)
        for (unsigned i = 1; i < k; ++i)
            bound = std::max(bound, Rational(Rational(abs(c_[i]) * i) / Rational(c_[k] * k)));
    threshold_ = floor_of(bound) + 2;
}

IntPolynomial IntPolynomial::parse(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '*') s += ch;
    if (s.empty()) throw DomainError("empty polynomial text");
    std::vector<Integer> c;
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-') sign = -1;
            ++i;
        }
        size_t st = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        Integer coef = st == i ? Integer(1) : Integer(s.substr(st, i - st));
        unsigned long e = 0;
        if (i < s.size() && (s[i] == 'X' || s[i] == 'x')) {
            ++i;
            e = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                size_t es = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (es == i) throw DomainError("missing exponent in '" + text + "'");
                e = std::stoul(s.substr(es, i - es));
            }
        } else if (st == i) {
            throw DomainError("cannot parse polynomial '" + text + "'");
        }
        if (c.size() <= e) c.resize(e + 1, 0);
        c[e] += sign * coef;
        if (i < s.size() && s[i] != '+' && s[i] != '-') throw DomainError("cannot parse polynomial '" + text + "'");
    }
    return IntPolynomial(std::move(c));
}

Integer IntPolynomial::height() const {
    Integer h = 0;
    for (const auto& a : c_) h = std::max(h, Integer(abs(a)));
    return h;
}

Integer IntPolynomial::operator()(const Integer& x) const {
    Integer r = c_.back();
    for (size_t i = c_.size() - 1; i-- > 0;) r = r * x + c_[i];
    return r;
}

Integer IntPolynomial::increasing_threshold() const { return threshold_; }

// first x >= threshold with p(x) >= v
static Integer first_at_least(const IntPolynomial& p, const Integer& v) {
    Integer lo = p.increasing_threshold();
    if (p(lo) >= v) return lo;
    Integer step = 1, hi = lo + 1;
    while (p(hi) < v) {
        lo = hi;
        step *= 2;
        hi = lo + step;
    }
    while (hi - lo > 1) {
        Integer mid = (lo + hi) / 2;
        if (p(mid) >= v) hi = mid; else lo = mid;
    }
    return hi;
}

bool IntPolynomial::takes_value(const Integer& v) const {
    for (Integer x = 0; x < threshold_; ++x)
        if ((*this)(x) == v) return true;
    return (*this)(first_at_least(*this, v)) == v;
}

std::vector<Integer> IntPolynomial::values_in(const Integer& s, const Integer& n) const {
    std::vector<Integer> out;
    if (s > n) return out;
    for (Integer x = 0; x < threshold_; ++x) {
        Integer v = (*this)(x);
        if (s <= v && v <= n) out.push_back(v);
    }
    for (Integer x = first_at_least(*this, s);; ++x) {
        Integer v = (*this)(x);
        if (v > n) break;
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string IntPolynomial::to_string() const {
    std::string s;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        Integer a = abs(c_[i]);
        s += c_[i] < 0 ? "-" : (s.empty() ? "" : "+");
        if (i == 0 || a != 1) s += a.get_str();
        if (i >= 1) s += "X";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
}

nlohmann::json IntPolynomial::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : c_) {
        if (a.fits_slong_p()) j.push_back(a.get_si());
        else j.push_back(a.get_str());
    }
    return j;
}

IntPolynomial IntPolynomial::from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse(j.get<std::string>());
    if (!j.is_array()) throw ConfigError("polynomial must be a coefficient array or text");
    std::vector<Integer> c;
    for (const auto& a : j) c.push_back(a.is_string() ? parse_integer(a.get<std::string>()) : Integer(a.get<long>()));
    try {
        return IntPolynomial(std::move(c));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("bad polynomial: ") + e.what());
    }
}

// ------------------------------------------------------------------ density

Rational intersection_density(const IntPolynomial& p, const IntPolynomial& q, const Integer& s, const Integer& n) {
    if (s < 1 || s > n) throw DomainError("density window needs 1 <= s <= n");
    auto qv = q.values_in(s, n);
    if (qv.empty()) throw DomainError("q has no values in the window");
    std::size_t common = 0;
    if (q.degree() >= p.degree()) {
        for (const auto& v : qv)
            if (p.takes_value(v)) ++common;
    } else {
        auto pv = p.values_in(s, n);
        std::vector<Integer> both;
        std::set_intersection(pv.begin(), pv.end(), qv.begin(), qv.end(), std::back_inserter(both));
        common = both.size();
    }
    return make_rational(Integer(static_cast<unsigned long>(common)), Integer(static_cast<unsigned long>(qv.size())));
}

// ---------------------------------------------------------------- witnesses

bool verify_witness(const IntPolynomial& p, const IntPolynomial& q, const LinearWitness& w) {
    RatPoly l = compose(to_rat(p), RatPoly{Rational(w.mu_b), Rational(w.mu_a)});
    RatPoly r = compose(to_rat(q), RatPoly{Rational(w.la_b), Rational(w.la_a)});
    return w.mu_a != 0 && w.la_a != 0 && l == r;
}

std::optional<LinearWitness> linear_composition_witness(const IntPolynomial& p, const IntPolynomial& q, long bound) {
    if (bound < 1) throw DomainError("coefficient bound must be >= 1");
    if (p.degree() != q.degree()) return std::nullopt;
    unsigned k = p.degree();
    const auto& P = p.coeffs();
    const auto& Q = q.coeffs();
    auto order = signed_order(bound);
    for (long a : order) {
        if (a == 0) continue;
        for (long e : order) {
            if (e == 0) continue;
            Integer ak = ipow(Integer(a), k - 1), ek = ipow(Integer(e), k - 1);
            if (P[k] * ak * a != Q[k] * ek * e) continue;
            for (long b : order) {
                // X^{k-1} coefficient fixes lambda's constant term
                Integer num = P[k] * k * ak * b + P[k - 1] * ak - Q[k - 1] * ek;
                Integer den = Q[k] * k * ek;
                if (num % den != 0) continue;
                Integer f = num / den;
                if (abs(f) > bound) continue;
                LinearWitness w{Integer(a), Integer(b), Integer(e), f};
                if (verify_witness(p, q, w)) return w;
            }
        }
    }
    return std::nullopt;
}

bool composition_reducible(const IntPolynomial& p, const IntPolynomial& q) {
    return right_factor_exists(p, q) || right_factor_exists(q, p);
}

// ----------------------------------------------------------- Tengely bound

Integer tengely_bound(unsigned m, unsigned n, unsigned d, const Integer& h) {
    if (h < 1) throw DomainError("height must be >= 1 (monic polynomials)");
    if (n > m) throw DomainError("tengely bound expects deg p <= deg q");
    if (d < 2 || n % d != 0 || m % d != 0) throw DomainError("d must be > 1 and divide gcd(deg p, deg q)");
    // raise everything to the power L = 2d so all exponents are integers
    unsigned long L = 2ul * d;
    unsigned long mm = m, nn = n, dd = d;
    Integer X = ipow(Integer(d), (2 * mm * mm - mm * dd) * 2)          // d^{(2m^2/d - m) L}
                * ipow(Integer(m + 1), 3 * mm)                          // (m+1)^{3m/2d L}
                * ipow(Integer(m / d + 1), 3 * mm * dd)                 // (m/d+1)^{3m/2 L}
                * ipow(h + 1, 2 * (mm * mm + mm * nn + mm + 2 * mm * dd));   // (h+1)^{((m^2+mn+m)/d + 2m) L}
    Integer r;
    bool exact = mpz_root(r.get_mpz_t(), X.get_mpz_t(), L) != 0;
    return exact ? r : r + 1;
}

Integer tengely_bound(const IntPolynomial& p, const IntPolynomial& q, unsigned d) {
    if (!p.monic() || !q.monic()) throw DomainError("tengely bound needs monic polynomials");
    unsigned m = std::max(p.degree(), q.degree()), n = std::min(p.degree(), q.degree());
    return tengely_bound(m, n, d, std::max(p.height(), q.height()));
}

Integer PairCertificate::N(unsigned long m) const {
    if (m == 0) throw DomainError("certificate needs m >= 1");
    Integer M_ = Integer(m);
    if (route == Route::Identity) {
        Rational a = Rational(Integer(4 * k) * a_star * M_) / Rational(a_k);
        Rational b = Rational(8 * M_ * M_) / Rational(a_k);
        return ceil_of(std::max(a, b));
    }
    return ceil_of(Rational(M) / Rational(M_));
}

nlohmann::json PairCertificate::to_json() const {
    nlohmann::json j{{"route", route == Route::Identity ? "identity" : "tengely"},
                     {"bounds", "d(num,den,s,n)"},
                     {"num", num.to_json()},
                     {"den", den.to_json()}};
    if (route == Route::Identity) {
        j["k"] = k;
        j["a_k"] = a_k.get_str();
        j["a_star"] = a_star.get_str();
    } else {
        j["d"] = d;
        j["M"] = M.get_str();
    }
    return j;
}

PairCertificate pair_bound_certificate(const IntPolynomial& p, const IntPolynomial& q) {
    if (p == q) throw UnsupportedError("a polynomial is never certified against itself");
    if (p.is_identity() || q.is_identity()) {
        const IntPolynomial& r = p.is_identity() ? q : p;
        if (r.degree() < 2) throw UnsupportedError("linear polynomial " + r.to_string() + " has no sparse bound against X");
        PairCertificate c;
        c.route = PairCertificate::Route::Identity;
        c.num = r;
        c.den = IntPolynomial::X();
        c.k = r.degree();
        c.a_k = r.lead();
        c.a_star = r.height();
        return c;
    }
    unsigned g = std::gcd(p.degree(), q.degree());
    if (!p.monic() || !q.monic() || p.degree() < 2 || q.degree() < 2 || g < 2)
        throw UnsupportedError("pair " + p.to_string() + ", " + q.to_string() + " fits neither certificate route");
    if (composition_reducible(p, q))
        throw UnsupportedError("p(X) - q(Y) is reducible for " + p.to_string() + ", " + q.to_string());
    const IntPolynomial& hi = p.degree() > q.degree() ? p : q;
    const IntPolynomial& lo = p.degree() > q.degree() ? q : p;
    PairCertificate c;
    c.route = PairCertificate::Route::Tengely;
    c.num = hi;
    c.den = lo;
    for (unsigned d : divisors(g)) {
        if (d < 2) continue;
        Integer M = tengely_bound(p, q, d);
        if (c.d == 0 || M < c.M) {
            c.d = d;
            c.M = M;
        }
    }
    return c;
}

// ------------------------------------------------------------------ builder

nlohmann::json SparsePolySet::to_json() const {
    nlohmann::json ps = nlohmann::json::array(), cs = nlohmann::json::array();
    for (const auto& p : polys) ps.push_back(p.to_json());
    for (size_t j = 0; j < certificates.size(); ++j)
        for (size_t i = 0; i < certificates[j].size(); ++i) {
            auto c = certificates[j][i].to_json();
            c["pair"] = {i, j};
            cs.push_back(c);
        }
    return {{"polys", ps}, {"certificates", cs}};
}

SparsePolySet build_explicit_polyset(unsigned stage_count, const PolysetOptions& opt) {
    if (stage_count < 1) throw DomainError("stage_count must be >= 1");
    SparsePolySet set;
    set.polys.push_back(IntPolynomial::X());
    set.certificates.emplace_back();
    std::set<std::vector<Integer>> seen{IntPolynomial::X().coeffs()};

    for (unsigned s = 1; s <= stage_count; ++s) {
        long bound = std::max<long>(opt.witness_bound, s);
        auto order = signed_order(s);
        for (unsigned deg = 1; deg <= s; ++deg)
            for (long h = 1; h <= static_cast<long>(s); ++h) {
                // coefficient vectors leading term first, max |a_i| == h
                std::vector<long> cur(deg + 1, 0);
                std::function<void(unsigned)> rec = [&](unsigned pos) {
                    if (pos == deg + 1) {
                        long height = 0;
                        for (long v : cur) height = std::max(height, std::labs(v));
                        if (height != h) return;
                        std::vector<Integer> c;
                        for (unsigned i = deg + 1; i-- > 0;) c.emplace_back(cur[i]);
                        if (!seen.insert(c).second) return;
                        IntPolynomial cand(c);
                        for (const auto& m : set.polys)
                            if (m.degree() == cand.degree() && linear_composition_witness(m, cand, bound)) return;
                        std::vector<PairCertificate> certs;
                        try {
                            for (const auto& m : set.polys) certs.push_back(pair_bound_certificate(m, cand));
                        } catch (const UnsupportedError&) {
                            return;   // candidates without a certificate are dropped
                        }
                        // later members must be strictly sparser inside the previous one
                        const IntPolynomial& last = set.polys.back();
                        Integer w(opt.comparability_window);
                        if (cand.values_in(1, w).size() < 2) return;
                        if (intersection_density(cand, last, 1, w) > Rational(1, 4)) return;
                        if (intersection_density(last, cand, 1, w) < Rational(1, 2)) return;
                        set.polys.push_back(cand);
                        set.certificates.push_back(std::move(certs));
                        return;
                    }
                    for (long v : order) {
                        if (std::labs(v) > h) continue;
                        if (pos == 0 && v <= 0) continue;
                        cur[pos] = v;
                        rec(pos + 1);
                    }
                };
                rec(0);
            }
    }
    return set;
}

} // namespace cantor
