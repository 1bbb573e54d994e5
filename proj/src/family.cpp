#include "cantor/family.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace cantor {

LinearFamily::LinearFamily(Kind kind, Rule rule, nlohmann::json params)
    : kind_(kind), rule_(std::move(rule)), params_(std::move(params)) {}

LinearFamily LinearFamily::uniform() {
    return LinearFamily(Kind::Uniform, [](unsigned long, unsigned long) { return Adf::identity(); }, {{"kind", "uniform"}});
}

LinearFamily LinearFamily::power(unsigned e) {
    Adf f = Adf::power(e);
    return LinearFamily(Kind::Power, [f](unsigned long, unsigned long) { return f; }, {{"kind", "power"}, {"exponent", e}});
}

LinearFamily LinearFamily::constant(const Adf& f) {
    return LinearFamily(Kind::Piecewise, [f](unsigned long, unsigned long) { return f; },
                        {{"kind", "piecewise"}, {"adf", f.to_json()}});
}

LinearFamily LinearFamily::closed_set(const ClosedSetU& D) {
    Adf f = adf_from_closed_set(D);
    return LinearFamily(Kind::ClosedSet, [f](unsigned long, unsigned long) { return f; },
                        {{"kind", "closed-set"}, {"set", D.to_json()}});
}

LinearFamily LinearFamily::custom(Rule rule, std::string label) {
    return LinearFamily(Kind::Custom, std::move(rule), {{"kind", "custom"}, {"label", label}});
}

Adf LinearFamily::operator()(unsigned long m, unsigned long r) const {
    if (m == 0 || r >= m) throw DomainError("family index needs m >= 1 and 0 <= r < m");
    return rule_(m, r);
}

std::string LinearFamily::kind_name() const {
    switch (kind_) {
        case Kind::Uniform: return "uniform";
        case Kind::Power: return "power";
        case Kind::Piecewise: return "piecewise";
        case Kind::ClosedSet: return "closed-set";
        case Kind::SFamily: return "s-family";
        case Kind::Custom: return "custom";
    }
    return "custom";
}

nlohmann::json LinearFamily::to_json() const { return params_; }

static std::pair<Rational, Rational> json_interval(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("interval must be a [a,b] pair");
    auto get = [](const nlohmann::json& v) {
        return v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
    };
    return {get(j[0]), get(j[1])};
}

static ClosedSetU json_set(const nlohmann::json& j) {
    return j.is_string() ? ClosedSetU::parse(j.get<std::string>()) : ClosedSetU::from_json(j);
}

LinearFamily LinearFamily::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("family config needs a \"kind\"");
    std::string k = j.at("kind").get<std::string>();
    try {
        if (k == "uniform") return uniform();
        if (k == "power") return power(j.value("exponent", 2u));
        if (k == "piecewise") return constant(Adf::from_json(j.at("adf")));
        if (k == "closed-set") return closed_set(json_set(j.at("set")));
        if (k == "s-family") return ap_abnormal_family(j.value("max_m", 4u), j.value("atom_budget", 1000000ul));
        if (k == "accumulation") {
            std::vector<std::vector<ClosedSetU>> d;
            for (const auto& row : j.at("targets")) {
                d.emplace_back();
                for (const auto& s : row) d.back().push_back(json_set(s));
            }
            auto fam = ap_accumulation_targets(std::move(d)).as_family();
            return LinearFamily(Kind::Custom, [fam](unsigned long m, unsigned long r) { return fam(m, r); }, j);
        }
        if (k == "olsen") {
            auto o = olsen_constraint_adf(json_interval(j.at("I")), json_interval(j.at("J")),
                                          parse_rational(j.at("x0").get<std::string>()), json_interval(j.at("K")));
            return LinearFamily(Kind::Piecewise, [f = o.F](unsigned long, unsigned long) { return f; }, j);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad family config: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("bad family config: ") + e.what());
    }
    throw ConfigError("unknown family kind '" + k + "'");
}

// ------------------------------------------------------------ approximation

std::vector<Rational> approx_grid(const Adf& f, unsigned long n) {
    if (n == 0) throw DomainError("approximation stage must be >= 1");
    std::vector<Rational> g;
    for (unsigned long i = 0; i <= n; ++i) g.push_back(make_rational(Integer(i), Integer(n + 1)));
    g.push_back(1);
    Rational thr = make_rational(Integer(1), Integer(n));
    for (const auto& [x, size] : f.jumps())
        if (size > thr) g.push_back(x);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

Adf continuous_approx(const Adf& f, unsigned long n) {
    std::vector<std::pair<Rational, Rational>> pts;
    for (const auto& a : approx_grid(f, n)) pts.emplace_back(a, f.eval(a));
    return Adf::interpolate(pts);
}

Adf continuous_family_approx(const LinearFamily& fam, unsigned long n, unsigned long m, unsigned long r) {
    return continuous_approx(fam(m, r), n);
}

// ---------------------------------------------------------------- s-family

Integer lcm_step(unsigned n) {
    if (n <= 1) return 1;
    return lcm_upto(n) / lcm_upto(n - 1);
}

std::optional<std::pair<Integer, Integer>> crt_merge(const std::vector<std::pair<Integer, Integer>>& cs) {
    Integer x = 0, mod = 1;
    for (const auto& [r, m] : cs) {
        // x + mod*k = r (mod m)
        Integer g, s;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), nullptr, mod.get_mpz_t(), m.get_mpz_t());
        Integer diff = r - x;
        if (diff % g != 0) return std::nullopt;
        Integer m_g = m / g;
        Integer k = (diff / g) * s;
        mpz_fdiv_r(k.get_mpz_t(), k.get_mpz_t(), m_g.get_mpz_t());
        x += mod * k;
        mod *= m_g;
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    }
    return std::make_pair(x, mod);
}

std::vector<std::vector<unsigned long>> gamma_tuples(unsigned n, unsigned long r) {
    if (n == 0 || r >= n) throw DomainError("gamma needs n >= 1 and r < n");
    std::vector<std::vector<unsigned long>> out;
    std::vector<unsigned long> cur(n > 1 ? n - 1 : 0, 0);
    // odometer over r_t in [0, t)
    for (;;) {
        std::vector<std::pair<Integer, Integer>> cs;
        for (unsigned t = 1; t < n; ++t) cs.emplace_back(Integer(cur[t - 1]), Integer(t));
        cs.emplace_back(Integer(r), Integer(n));
        if (crt_merge(cs)) out.push_back(cur);
        unsigned t = n;
        while (t > 1) {
            --t;
            if (++cur[t - 1] < t) break;
            cur[t - 1] = 0;
        }
        if (t <= 1) {
            bool all_zero = std::all_of(cur.begin(), cur.end(), [](unsigned long v) { return v == 0; });
            if (all_zero) break;
        }
    }
    return out;
}

// rho[s] for s in [0, lcm(1..n)): position of atom s among the level-n atoms.
static std::vector<unsigned long> atom_positions(unsigned n) {
    std::vector<unsigned long> rho{0};
    unsigned long D = 1;
    for (unsigned k = 2; k <= n; ++k) {
        unsigned long d = lcm_step(k).get_ui();
        std::vector<unsigned long> next(D * d);
        for (unsigned long s = 0; s < D * d; ++s) next[s] = rho[s % D] * d + s / D;
        rho.swap(next);
        D *= d;
    }
    return rho;
}

ClosedSetU s_set(unsigned n, unsigned long r) {
    if (n == 0 || r >= n) throw DomainError("s_set needs n >= 1 and r < n");
    auto rho = atom_positions(n);
    Integer D = lcm_upto(n);
    std::vector<ClosedSetU::Piece> ps;
    for (const auto& tup : gamma_tuples(n, r)) {
        std::vector<std::pair<Integer, Integer>> cs;
        for (unsigned t = 1; t < n; ++t) cs.emplace_back(Integer(tup[t - 1]), Integer(t));
        cs.emplace_back(Integer(r), Integer(n));
        auto s = crt_merge(cs);
        CANTOR_ASSERT(s && s->second == D, "gamma tuple must fix the residue mod lcm(1..n)");
        unsigned long pos = rho[s->first.get_ui()];
        ps.push_back({make_rational(Integer(pos), D), make_rational(Integer(pos + 1), D)});
    }
    return ClosedSetU(std::move(ps));
}

LinearFamily ap_abnormal_family(unsigned max_m, unsigned long atom_budget) {
    if (max_m == 0) throw DomainError("s-family needs max_m >= 1");
    Integer D = lcm_upto(max_m);
    if (D > atom_budget) throw ResourceError("s-family with max_m = " + std::to_string(max_m) + " needs " + D.get_str() +
                                             " atoms, budget is " + std::to_string(atom_budget));
    struct Shared {
        std::vector<unsigned long> rho;
        unsigned long D;
        std::mutex mu;
        std::map<std::pair<unsigned long, unsigned long>, Adf> cache;
    };
    auto sh = std::make_shared<Shared>();
    sh->rho = atom_positions(max_m);
    sh->D = D.get_ui();
    // f_{m,r} depends on m only through g = gcd(m, D): atoms with index = r mod g.
    auto rule = [sh](unsigned long m, unsigned long r) -> Adf {
        unsigned long g = std::gcd(m, sh->D);
        unsigned long rr = r % g;
        std::lock_guard<std::mutex> lock(sh->mu);
        auto it = sh->cache.find({g, rr});
        if (it != sh->cache.end()) return it->second;
        std::vector<ClosedSetU::Piece> ps;
        for (unsigned long s = rr; s < sh->D; s += g) {
            Rational a = make_rational(Integer(sh->rho[s]), Integer(sh->D));
            ps.push_back({a, a + make_rational(1, static_cast<long>(sh->D))});
        }
        Adf f = adf_from_closed_set(ClosedSetU(std::move(ps)));
        sh->cache.emplace(std::make_pair(g, rr), f);
        return f;
    };
    return LinearFamily(LinearFamily::Kind::SFamily, rule,
                        {{"kind", "s-family"}, {"max_m", max_m}, {"atom_budget", atom_budget}});
}

// -------------------------------------------------------- accumulation sets

AccumulationTargets::AccumulationTargets(std::vector<std::vector<ClosedSetU>> d) : d_(std::move(d)) {
    if (d_.empty()) throw DomainError("accumulation targets need k >= 1");
    ClosedSetU all = ClosedSetU::unit();
    for (std::size_t m = 1; m <= d_.size(); ++m) {
        if (d_[m - 1].size() != m) throw DomainError("accumulation targets need D_{m,r} for every r < m");
        for (const auto& s : d_[m - 1]) {
            if (s.empty()) throw ConstraintError("accumulation target set is empty");
            all = all.intersect(s);
        }
    }
    if (all.empty()) throw ConstraintError("intersection of all accumulation targets is empty");
}

ClosedSetU AccumulationTargets::A(unsigned long q, unsigned long s) const {
    if (q == 0 || s >= q) throw DomainError("accumulation index needs q >= 1 and s < q");
    if (q <= k()) return d_[q - 1][s];
    ClosedSetU a = ClosedSetU::unit();
    for (unsigned long d = 1; d <= k(); ++d) {
        if (q % d == 0) {
            a = a.intersect(d_[d - 1][s % d]);
        } else {
            for (const auto& set : d_[d - 1]) a = a.intersect(set);
        }
    }
    CANTOR_ASSERT(!a.empty(), "A_{q,s} contains the global intersection");
    return a;
}

LinearFamily AccumulationTargets::as_family() const {
    auto self = std::make_shared<AccumulationTargets>(*this);
    nlohmann::json t = nlohmann::json::array();
    for (const auto& row : d_) {
        t.push_back(nlohmann::json::array());
        for (const auto& s : row) t.back().push_back(s.to_json());
    }
    return LinearFamily(LinearFamily::Kind::Custom, [self](unsigned long q, unsigned long s) { return (*self)(q, s); },
                        {{"kind", "accumulation"}, {"targets", t}});
}

AccumulationTargets ap_accumulation_targets(std::vector<std::vector<ClosedSetU>> d) {
    return AccumulationTargets(std::move(d));
}

IdentityReport family_identity_check(const LinearFamily& fam, unsigned long m, unsigned long r, unsigned long d,
                                     const std::vector<Rational>& samples) {
    if (d == 0) throw DomainError("identity check needs d >= 1");
    Adf base = fam(m, r);
    std::vector<Adf> parts;
    for (unsigned long i = 0; i < d; ++i) parts.push_back(fam(m * d, m * i + r));
    Rational worst = 0;
    for (const auto& x : samples) {
        Rational avg = 0;
        for (const auto& p : parts) avg += p(x);
        avg /= Rational(static_cast<unsigned long>(d));
        Rational defect = abs(base(x) - avg);
        if (defect > worst) worst = defect;
    }
    return {worst == 0, worst};
}

void TargetSpec::validate(unsigned long max_m, unsigned grid) const {
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (unsigned long m = 1; m <= max_m; ++m)
            for (unsigned long r = 0; r < m; ++r) {
                Adf up = pairs[i].upper(m, r), lo = pairs[i].lower(m, r);
                for (unsigned k = 0; k <= grid; ++k) {
                    Rational x = make_rational(static_cast<long>(k), static_cast<long>(grid));
                    if (up(x) < lo(x))
                        throw ConfigError("target families for polynomial " + std::to_string(i) +
                                          " violate upper >= lower at m=" + std::to_string(m) + ", r=" + std::to_string(r) +
                                          ", x=" + to_text(x));
                }
            }
}

} // namespace cantor
