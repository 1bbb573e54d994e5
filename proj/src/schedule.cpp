#include "cantor/schedule.hpp"

#include <algorithm>

#include "cantor/errors.hpp"
#include "cantor/real_bounds.hpp"

namespace cantor {

const char* to_string(ResidueMode m) { return m == ResidueMode::Index ? "index" : "xi"; }
const char* to_string(BandAnchor a) { return a == BandAnchor::Infimum ? "infimum" : "support"; }

ResidueMode parse_residue_mode(const std::string& s) {
    if (s == "index") return ResidueMode::Index;
    if (s == "xi") return ResidueMode::XiCoordinate;
    throw ConfigError("residue mode must be \"index\" or \"xi\", got \"" + s + "\"");
}

BandAnchor parse_band_anchor(const std::string& s) {
    if (s == "infimum") return BandAnchor::Infimum;
    if (s == "support") return BandAnchor::Support;
    throw ConfigError("band anchor must be \"infimum\" or \"support\", got \"" + s + "\"");
}

nlohmann::json StageConstants::to_json() const {
    nlohmann::json j{{"j", this->j},     {"Delta", to_text(delta)}, {"nu1", nu1},         {"nu2", to_text(nu2)},
                     {"nu", to_text(nu)}, {"psi", to_text(psi)},    {"l", to_text(l)},     {"L", to_text(L)}};
    if (epsilon) {
        j["epsilon"] = {{"lo", to_text(epsilon->lo)}, {"hi", to_text(epsilon->hi)}, {"approx", epsilon->mid().get_d()}};
    } else {
        j["epsilon"] = nullptr;
    }
    return j;
}

// ---------------------------------------------------------------- Xi

unsigned stage_of(const std::vector<Integer>& L, const Integer& x) {
    if (x < 1) throw DomainError("stage_of: argument must be >= 1");
    if (x > L.back()) throw RangeError("index " + to_text(x) + " lies beyond the scheduled stages (L = " +
                                       to_text(L.back()) + ")");
    auto it = std::lower_bound(L.begin() + 1, L.end(), x, [](const Integer& a, const Integer& v) { return a < v; });
    return static_cast<unsigned>(it - L.begin());
}

std::vector<Integer> preimages(const IntPolynomial& p, const Integer& n) {
    std::vector<Integer> out;
    if (p.is_identity()) {
        if (n >= 0) out.push_back(n);
        return out;
    }
    Integer T = p.increasing_threshold();
    if (T < 0) T = 0;
    for (Integer x = 0; x < T; ++x)
        if (p(x) == n) out.push_back(x);
    if (p(T) > n) return out;
    Integer lo = T, hi = T + 1;
    while (p(hi) < n) {
        lo = hi;
        hi *= 2;
    }
    // p(lo) <= n <= p(hi) with p increasing on [T, oo)
    while (hi - lo > 1) {
        Integer mid = (lo + hi) / 2;
        if (p(mid) <= n) lo = mid;
        else hi = mid;
    }
    if (p(lo) == n) out.push_back(lo);
    else if (p(hi) == n) out.push_back(hi);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Integer xi(const IntPolynomial& p, const std::vector<Integer>& L, unsigned i, const Integer& b, const Integer& c,
           const Integer& d) {
    if (i < 1 || i >= L.size()) throw DomainError("xi: stage " + std::to_string(i) + " outside the schedule");
    Integer f = factorial(i);
    Integer li = (L[i] - L[i - 1]) / (f * i);
    if (b < 0 || b >= li) throw DomainError("xi: b outside [0, l_i)");
    if (c < 0 || c >= i) throw DomainError("xi: c outside [0, i)");
    if (d < 1 || d > f) throw DomainError("xi: d outside [1, i!]");
    return p(Integer(L[i - 1] + b * f * i + c * f + d));
}

namespace {

XiCoordinates coordinates_of(const std::vector<Integer>& L, const Integer& x) {
    XiCoordinates out;
    out.i = stage_of(L, x);
    out.argument = x;
    Integer f = factorial(out.i);
    Integer block = f * out.i;
    Integer off = x - L[out.i - 1] - 1;
    mpz_fdiv_q(out.b.get_mpz_t(), off.get_mpz_t(), block.get_mpz_t());
    Integer rem = off - out.b * block;
    mpz_fdiv_q(out.c.get_mpz_t(), rem.get_mpz_t(), f.get_mpz_t());
    out.d = rem - out.c * f + 1;
    return out;
}

} // namespace

XiCoordinates xi_inverse(const IntPolynomial& p, const std::vector<Integer>& L, const Integer& n) {
    auto pre = preimages(p, n);
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        if (*it >= 1) return coordinates_of(L, *it);
    }
    throw DomainError("xi_inverse: " + to_text(n) + " is not a value of " + p.to_string() + " at a positive argument");
}

// ---------------------------------------------------------------- stage constants

std::vector<Rational> band_anchors(const Adf& g, unsigned k, BandAnchor anchor) {
    std::vector<Rational> a(k);
    for (unsigned c = 0; c < k; ++c) {
        if (c == 0) a[c] = anchor == BandAnchor::Support ? g.sup_preimage(Rational(0)) : g.inf_preimage(Rational(0));
        else a[c] = g.inf_preimage(make_rational(c, k));
    }
    return a;
}

Rational band_min_length(const Adf& g, unsigned k, BandAnchor anchor) {
    auto a = band_anchors(g, k, anchor);
    Rational best;
    for (unsigned c = 0; c < k; ++c) {
        Rational top = c + 1 == k ? Rational(1) : g.sup_preimage(make_rational(c + 1, k));
        Rational len = top - a[c];
        if (c == 0 || len < best) best = len;
    }
    if (best <= 0) throw InternalError("band preimage of length 0 at k = " + std::to_string(k));
    return best;
}

namespace {

void require_targets(const TargetSpec& F, std::size_t count) {
    if (F.pairs.size() < count)
        throw ConfigError("target set has " + std::to_string(F.pairs.size()) + " pairs but " +
                          std::to_string(count) + " polynomials are active");
}

unsigned long fact_ul(unsigned k) {
    if (k > 20) throw ResourceError("stage " + std::to_string(k) + " exceeds the supported range");
    unsigned long f = 1;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

Rational compute_delta(unsigned k, const TargetSpec& F, const SparsePolySet& P, BandAnchor anchor) {
    if (k < 1) throw DomainError("compute_delta: k must be >= 1");
    std::size_t active = std::min<std::size_t>(k, P.polys.size());
    if (active == 0) throw ConfigError("compute_delta: empty polynomial set");
    require_targets(F, active);
    unsigned long m = fact_ul(k);
    std::optional<Rational> best;
    for (std::size_t l = 0; l < active; ++l) {
        for (unsigned long r = 0; r < m; ++r) {
            for (const LinearFamily* fam : {&F.pairs[l].upper, &F.pairs[l].lower}) {
                Rational len = band_min_length(continuous_family_approx(*fam, k, m, r), k, anchor);
                if (!best || len < *best) best = len;
            }
        }
    }
    return *best;
}

Enclosure compute_epsilon(unsigned k, const BasicSequence& Q) {
    if (k < 2) throw DomainError("epsilon_1 involves the empty product q_1...q_0 and is never used");
    Enclosure lq = log_bounds(Q.q(k));
    Enclosure lp = log_bounds(Q.product(1, k - 1));
    Enclosure e = min_of(sqrt_bounds(lq), sqrt_bounds(lp)) / lq;
    return widen_to_grid(e, 64);
}

NuParts compute_nu(unsigned j, const BasicSequence& Q, const SparsePolySet& P, const Rational& delta_j) {
    if (j < 1) throw DomainError("compute_nu: j must be >= 1");
    if (delta_j <= 0 || delta_j > 1) throw DomainError("compute_nu: Delta must lie in (0, 1]");
    NuParts out;
    // nu_{j,1}: min{sqrt log q_k, sqrt log(q_1...q_{k-1})} >= log 4 - log Delta for all k >= t
    Enclosure theta = log_bounds(Rational(4) / delta_j);
    Rational t2 = theta.hi * theta.hi;
    Integer T = ceil_of(exp_bounds(t2).hi);
    std::uint64_t a = Q.growth_index(T);
    Integer prod = 1;
    std::uint64_t b = 1;
    while (prod < T) {
        if (b > 100000000) throw ResourceError("compute_nu: product threshold not reached");
        prod *= Q.q(b);
        ++b;
    }
    out.nu1 = std::max(a, b);
    // nu_{j,2}: certified d(p_k, p_l, 1, n) < 1/m for n > N(m) + 1
    std::size_t active = std::min<std::size_t>(j, P.polys.size());
    unsigned long f = fact_ul(j);
    unsigned long m = f * f * j * j * j;
    out.nu2 = 0;
    for (std::size_t x = 1; x < active; ++x) {
        if (P.certificates.size() <= x || P.certificates[x].size() < x)
            throw UnsupportedError("compute_nu: missing pair certificate for polynomial " + std::to_string(x + 1));
        for (std::size_t y = 0; y < x; ++y) out.nu2 = std::max(out.nu2, Integer(P.certificates[x][y].N(m) + 1));
    }
    out.nu = std::max(Integer(out.nu1), out.nu2);
    return out;
}

NuParts compute_nu(unsigned j, const BasicSequence& Q, const SparsePolySet& P, const TargetSpec& F) {
    return compute_nu(j, Q, P, compute_delta(j, F, P));
}

Integer compute_psi(unsigned j, const SparsePolySet& P) {
    if (j < 1) throw DomainError("compute_psi: j must be >= 1");
    std::size_t active = std::min<std::size_t>(j, P.polys.size());
    if (active < 2) return 0;
    unsigned long f = fact_ul(j + 1);
    unsigned long m = f * f * (j + 1) * (j + 1) * (j + 1);
    Integer worst = 0;
    for (std::size_t x = 1; x < active; ++x) {
        if (P.certificates.size() <= x || P.certificates[x].size() < x)
            throw UnsupportedError("compute_psi: missing pair certificate for polynomial " + std::to_string(x + 1));
        for (std::size_t y = 0; y < x; ++y) worst = std::max(worst, P.certificates[x][y].N(m));
    }
    return worst / factorial(j - 1) + 1;
}

// ---------------------------------------------------------------- Schedule

Schedule::Schedule(BasicSequence Q, SparsePolySet P, TargetSpec F, ScheduleOptions opt)
    : Q_(std::move(Q)), P_(std::move(P)), F_(std::move(F)), opt_(opt) {
    if (P_.polys.empty()) throw ConfigError("schedule needs at least one polynomial");
    if (!P_.polys.front().is_identity()) throw ConfigError("the polynomial set must start with X");
    require_targets(F_, P_.polys.size());
    fact_.push_back(1);
}

Schedule Schedule::with_lengths(BasicSequence Q, SparsePolySet P, TargetSpec F, const std::vector<Integer>& l,
                                ScheduleOptions opt) {
    Schedule s(std::move(Q), std::move(P), std::move(F), opt);
    for (unsigned j = 1; j <= l.size(); ++j) {
        if (l[j - 1] < 1) throw DomainError("with_lengths: stage lengths must be >= 1");
        StageConstants st;
        st.j = j;
        st.delta = s.delta_for(j);
        if (j >= 2) st.epsilon = compute_epsilon(j, s.Q_);
        st.l = l[j - 1];
        st.L = s.L_.back() + factorial(j) * j * st.l;
        s.L_.push_back(st.L);
        s.stages_.push_back(std::move(st));
    }
    return s;
}

std::size_t Schedule::active_polys(unsigned k) const { return std::min<std::size_t>(k, P_.polys.size()); }

void Schedule::build_table(unsigned k) {
    if (k > opt_.max_stage)
        throw ResourceError("stage " + std::to_string(k) + " exceeds max_stage = " + std::to_string(opt_.max_stage));
    while (tables_.size() < k) {
        tables_.emplace_back();
        deltas_.emplace_back();
    }
    if (deltas_[k - 1]) return;
    std::size_t active = active_polys(k);
    unsigned long m = fact_ul(k);
    bool upper = k % 2 == 0;
    std::vector<std::vector<std::vector<Rational>>> anchors(active, std::vector<std::vector<Rational>>(m));
    std::optional<Rational> best;
    for (std::size_t l = 0; l < active; ++l) {
        for (unsigned long r = 0; r < m; ++r) {
            for (int side = 0; side < 2; ++side) {
                const LinearFamily& fam = side == 0 ? F_.pairs[l].upper : F_.pairs[l].lower;
                Adf g = continuous_family_approx(fam, k, m, r);
                Rational len = band_min_length(g, k, opt_.anchor);
                if (!best || len < *best) best = len;
                if ((side == 0) == upper) anchors[l][r] = band_anchors(g, k, opt_.anchor);
            }
        }
    }
    StageTable& t = tables_[k - 1];
    t.bands.assign(active, std::vector<std::vector<std::pair<Rational, Rational>>>(m));
    for (std::size_t l = 0; l < active; ++l)
        for (unsigned long r = 0; r < m; ++r)
            for (const Rational& a : anchors[l][r]) t.bands[l][r].emplace_back(a, Rational(a + *best));
    deltas_[k - 1] = *best;
}

Rational Schedule::delta_for(unsigned k) {
    build_table(k);
    return *deltas_[k - 1];
}

void Schedule::cover(const Integer& N) {
    while (L_.back() < N) {
        unsigned j = stages() + 1;
        StageConstants st;
        st.j = j;
        st.delta = delta_for(j);
        if (j >= 2) st.epsilon = compute_epsilon(j, Q_);
        NuParts nu = compute_nu(j, Q_, P_, st.delta);
        st.nu1 = nu.nu1;
        st.nu2 = nu.nu2;
        st.nu = nu.nu;
        st.psi = compute_psi(j, P_);
        if (j == 1) {
            NuParts nu2 = compute_nu(2, Q_, P_, delta_for(2));
            st.l = std::max(Integer(nu2.nu - 1), Integer(1));
        } else {
            Integer block = factorial(j) * j;
            Integer need = st.nu - 1 - L_.back();
            Integer t = 0;
            if (need > 0) mpz_cdiv_q(t.get_mpz_t(), need.get_mpz_t(), block.get_mpz_t());
            st.l = std::max({t, st.psi, Integer(j * j)});
        }
        st.L = L_.back() + factorial(j) * j * st.l;
        L_.push_back(st.L);
        stages_.push_back(std::move(st));
    }
}

const StageConstants& Schedule::stage(unsigned j) const {
    if (j < 1 || j > stages_.size()) throw RangeError("stage " + std::to_string(j) + " not computed");
    return stages_[j - 1];
}

IndexDecomposition Schedule::decompose(const Integer& n) const {
    if (n < 1) throw DomainError("index " + to_text(n) + " lies below the schedule start 1");
    if (n > L_.back()) throw RangeError("index " + to_text(n) + " lies beyond the scheduled stages");
    for (std::size_t j = P_.polys.size(); j >= 1; --j) {
        const IntPolynomial& p = P_.polys[j - 1];
        auto pre = p.is_identity() ? std::vector<Integer>{n} : preimages(p, n);
        for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
            if (*it < 1) continue;
            unsigned i = stage_of(L_, *it);
            if (j > std::min<std::size_t>(i, P_.polys.size())) continue;
            XiCoordinates xc = coordinates_of(L_, *it);
            IndexDecomposition out;
            out.i = xc.i;
            out.dg = static_cast<unsigned>(j);
            out.b = std::move(xc.b);
            out.c = std::move(xc.c);
            out.d = std::move(xc.d);
            out.argument = std::move(xc.argument);
            return out;
        }
    }
    throw InternalError("index " + to_text(n) + " has no decomposition");
}

std::uint64_t residue_for(const Schedule& s, std::uint64_t n, const IndexDecomposition& idx) {
    unsigned long m = fact_ul(idx.i);
    if (s.options().residue == ResidueMode::Index) return n % m;
    return static_cast<std::uint64_t>(Integer(idx.d - 1).get_ui());
}

EnvelopeRow Schedule::envelope(std::uint64_t n) const {
    EnvelopeRow row;
    row.n = n;
    row.q = Q_.q(n);
    row.idx = decompose(Integer(static_cast<unsigned long>(n)));
    if (row.idx.i <= 1) {
        row.alpha = 0;
        row.beta = row.q - 1;
        return row;
    }
    const auto& band = tables_[row.idx.i - 1].bands[row.idx.dg - 1][residue_for(*this, n, row.idx)]
                                                   [row.idx.c.get_ui()];
    Integer num = row.q * band.first.get_num();
    mpz_cdiv_q(row.alpha.get_mpz_t(), num.get_mpz_t(), band.first.get_den_mpz_t());
    num = row.q * band.second.get_num();
    mpz_fdiv_q(row.beta.get_mpz_t(), num.get_mpz_t(), band.second.get_den_mpz_t());
    row.beta -= 1;
    if (row.alpha < 0 || row.beta > row.q - 1 || row.beta < row.alpha)
        throw ScheduleError("empty or out-of-range envelope at n = " + std::to_string(n) + ": [" +
                            to_text(row.alpha) + ", " + to_text(row.beta) + "] with q = " + to_text(row.q));
    return row;
}

void Schedule::for_each_envelope(std::uint64_t first, std::uint64_t last,
                                 const std::function<void(const EnvelopeRow&)>& fn) const {
    for (std::uint64_t n = first; n <= last; ++n) fn(envelope(n));
}

nlohmann::json Schedule::to_json() const {
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : stages_) st.push_back(s.to_json());
    nlohmann::json polys = nlohmann::json::array();
    for (const auto& p : P_.polys) polys.push_back(p.to_string());
    nlohmann::json fam = nlohmann::json::array();
    for (const auto& pr : F_.pairs) fam.push_back({{"upper", pr.upper.to_json()}, {"lower", pr.lower.to_json()}});
    return {{"schema", 1},
            {"Q", Q_.label()},
            {"P", polys},
            {"F", fam},
            {"options", {{"residue_mode", to_string(opt_.residue)}, {"band_anchor", to_string(opt_.anchor)}}},
            {"stages", st}};
}

DigitPrefix emit_digits(const Schedule& s, std::uint64_t N) {
    if (Integer(static_cast<unsigned long>(N)) > s.covered())
        throw RangeError("emit_digits: schedule covers only " + to_text(s.covered()) + " indices");
    std::vector<Integer> digits;
    digits.reserve(N);
    if (N > 0) s.for_each_envelope(1, N, [&](const EnvelopeRow& r) { digits.push_back(r.alpha); });
    return DigitPrefix(s.Q(), std::move(digits));
}

MembershipResult membership_check(const DigitPrefix& d, const Schedule& s) {
    MembershipResult out;
    std::uint64_t last = d.size();
    if (Integer(static_cast<unsigned long>(last)) > s.covered()) last = s.covered().get_ui();
    for (std::uint64_t n = 1; n <= last; ++n) {
        EnvelopeRow r = s.envelope(n);
        ++out.checked;
        const Integer& e = d.digit(n);
        if (e < r.alpha || e > r.beta) {
            out.ok = false;
            out.first_violation = n;
            return out;
        }
    }
    return out;
}

nlohmann::json EnvelopeScan::to_json() const {
    nlohmann::json j{{"checked", checked},
                     {"upsilon_min", to_text(upsilon_min)},
                     {"upsilon_min_at", upsilon_min_at},
                     {"range_violations", range_violations},
                     {"small_violations", small_violations},
                     {"bound_violations", bound_violations},
                     {"bound_skipped", bound_skipped},
                     {"ok", ok()}};
    j["first_violation"] = first_violation ? nlohmann::json(*first_violation) : nlohmann::json(nullptr);
    return j;
}

EnvelopeScan scan_envelopes(const Schedule& s, std::uint64_t N) {
    if (Integer(static_cast<unsigned long>(N)) > s.covered())
        throw RangeError("scan_envelopes: schedule covers only " + to_text(s.covered()) + " indices");
    EnvelopeScan out;
    // (1 - eps.lo) per stage, so q^(1 - eps) <= exp((1 - eps.lo) log q)
    std::vector<std::optional<Rational>> expo(s.stages() + 1);
    for (unsigned j = 1; j <= s.stages(); ++j)
        if (s.stage(j).epsilon) expo[j] = Rational(1) - s.stage(j).epsilon->lo;
    auto flag = [&](std::uint64_t n) {
        if (!out.first_violation) out.first_violation = n;
    };
    if (N == 0) return out;
    const Enclosure log4 = log_bounds(Integer(4));
    s.for_each_envelope(1, N, [&](const EnvelopeRow& r) {
        ++out.checked;
        Integer u = r.upsilon();
        if (out.checked == 1 || u < out.upsilon_min) {
            out.upsilon_min = u;
            out.upsilon_min_at = r.n;
        }
        if (r.alpha < 0 || r.alpha > r.beta || r.beta > r.q - 1) {
            ++out.range_violations;
            flag(r.n);
        }
        if (u < 2) {
            ++out.small_violations;
            flag(r.n);
        }
        unsigned i = r.idx.i;
        if (i >= expo.size() || !expo[i]) {
            ++out.bound_skipped;
            return;
        }
        Enclosure lq = log_bounds(r.q);
        Rational arg = *expo[i] >= 0 ? *expo[i] * lq.hi : *expo[i] * lq.lo;
        // u > 4 e^arg - 2 iff log(u + 2) - log 4 > arg
        if (!(log_bounds(Integer(u + 2)).lo - log4.hi > arg)) {
            ++out.bound_violations;
            flag(r.n);
        }
    });
    return out;
}

} // namespace cantor
