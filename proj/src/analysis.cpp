#include "cantor/analysis.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "cantor/errors.hpp"
#include "cantor/real_bounds.hpp"

namespace cantor {

// ---------------------------------------------------------------- windows

SequenceWindow SequenceWindow::exact(const std::vector<Rational>& values) {
    SequenceWindow w;
    for (const auto& v : values) w.push(v);
    return w;
}

void SequenceWindow::push(const Rational& v) { push(Enclosure(v)); }

void SequenceWindow::push(const Enclosure& e) {
    if (e.lo < 0 || e.hi > 1) throw DomainError("window values must lie in [0,1], got [" + to_text(e.lo) + ", " +
                                                to_text(e.hi) + "]");
    if (!indices_.empty()) throw DomainError("window is index-labelled; push with an index");
    values_.push_back(e);
}

void SequenceWindow::push(const Enclosure& e, std::uint64_t index) {
    if (e.lo < 0 || e.hi > 1) throw DomainError("window values must lie in [0,1]");
    if (indices_.size() != values_.size()) throw DomainError("window mixes labelled and unlabelled values");
    values_.push_back(e);
    indices_.push_back(index);
}

bool SequenceWindow::is_exact() const {
    return std::all_of(values_.begin(), values_.end(), [](const Enclosure& e) { return e.exact(); });
}

Rational SequenceWindow::max_width() const {
    Rational w = 0;
    for (const auto& e : values_) {
        Rational x = e.width();
        if (x > w) w = x;
    }
    return w;
}

SequenceWindow SequenceWindow::prefix(std::size_t n) const {
    if (n > size()) throw RangeError("prefix of length " + std::to_string(n) + " exceeds the window");
    SequenceWindow w;
    w.values_.assign(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n));
    if (!indices_.empty()) w.indices_.assign(indices_.begin(), indices_.begin() + static_cast<std::ptrdiff_t>(n));
    return w;
}

SequenceWindow SequenceWindow::concat(const SequenceWindow& o) const {
    SequenceWindow w = *this;
    w.values_.insert(w.values_.end(), o.values_.begin(), o.values_.end());
    if (indices_.empty() || o.indices_.empty()) w.indices_.clear();
    else w.indices_.insert(w.indices_.end(), o.indices_.begin(), o.indices_.end());
    return w;
}

bool Interval::contains(const Rational& x) const {
    int ca = fast_cmp(x, a), cb = fast_cmp(x, b);
    bool left = a_closed ? ca >= 0 : ca > 0;
    bool right = b_closed ? cb <= 0 : cb < 0;
    return left && right;
}

namespace {

void require_n(const SequenceWindow& w, std::size_t n) {
    if (n < 1) throw DomainError("window length n must be >= 1");
    if (n > w.size()) throw RangeError("n = " + std::to_string(n) + " exceeds the window size " +
                                       std::to_string(w.size()));
}

void require_exact(const SequenceWindow& w, std::size_t n, const char* what) {
    for (std::size_t i = 0; i < n; ++i)
        if (!w[i].exact()) throw DomainError(std::string(what) + " needs exact values");
}

} // namespace

CountRange count_in(const Interval& I, const SequenceWindow& w, std::size_t n) {
    if (n > w.size()) throw RangeError("count_in: n exceeds the window size");
    CountRange c;
    for (std::size_t i = 0; i < n; ++i) {
        const Enclosure& e = w[i];
        if (e.exact()) {
            if (I.contains(e.lo)) {
                ++c.lo;
                ++c.hi;
            }
            continue;
        }
        bool lo_in = I.contains(e.lo), hi_in = I.contains(e.hi);
        if (lo_in && hi_in) {
            ++c.lo;
            ++c.hi;
        } else if (lo_in || hi_in || (e.lo < I.a && e.hi > I.b)) {
            ++c.hi;
        }
    }
    return c;
}

// ---------------------------------------------------------------- discrepancy sweep

namespace {

struct Group {
    Rational v;
    std::size_t count;
};

std::vector<Group> grouped(std::vector<Rational> vals) {
    std::sort(vals.begin(), vals.end(), FastLess{});
    std::vector<Group> g;
    for (auto& v : vals) {
        if (!g.empty() && fast_cmp(g.back().v, v) == 0) ++g.back().count;
        else g.push_back({std::move(v), 1});
    }
    return g;
}

enum class Probe { Left, Point, Right };

// Calls fn(probe, u, h) with h = A_n([0,u))/n - f(u) at the one-sided limits
// and values of every candidate u, in increasing position.
template <class Fn>
void sweep(const std::vector<Group>& groups, std::size_t n, const Adf& f, Fn&& fn) {
    std::vector<Rational> cand;
    cand.reserve(groups.size() + f.knots().size());
    {
        std::size_t a = 0, b = 0;
        const auto& K = f.knots();
        while (a < groups.size() || b < K.size()) {
            const Rational* next;
            if (b >= K.size() || (a < groups.size() && fast_cmp(groups[a].v, K[b].x) <= 0)) next = &groups[a++].v;
            else next = &K[b++].x;
            if (fast_cmp(*next, Rational(1)) > 0) continue;
            if (cand.empty() || fast_cmp(cand.back(), *next) != 0) cand.push_back(*next);
        }
    }
    Rational N(static_cast<unsigned long>(n));
    std::size_t gi = 0, lt = 0;
    for (const Rational& u : cand) {
        while (gi < groups.size() && fast_cmp(groups[gi].v, u) < 0) lt += groups[gi++].count;
        std::size_t le = lt;
        if (gi < groups.size() && fast_cmp(groups[gi].v, u) == 0) le += groups[gi].count;
        Rational a_lt = Rational(static_cast<unsigned long>(lt)) / N;
        if (sgn(u) > 0) fn(Probe::Left, u, Rational(a_lt - f.eval(u, Adf::Side::Left)));
        fn(Probe::Point, u, Rational(a_lt - f.eval(u, Adf::Side::Point)));
        if (fast_cmp(u, Rational(1)) < 0)
            fn(Probe::Right, u, Rational(Rational(static_cast<unsigned long>(le)) / N - f.eval(u, Adf::Side::Right)));
    }
}

struct Extremes {
    Rational sup = 0, inf = 0, arg_sup = 0, arg_inf = 0;
};

Extremes extremes(const std::vector<Group>& groups, std::size_t n, const Adf& f) {
    Extremes e;
    sweep(groups, n, f, [&](Probe p, const Rational& u, const Rational& h) {
        if (p != Probe::Left && fast_cmp(h, e.sup) > 0) {
            e.sup = h;
            e.arg_sup = u;
        }
        if (p != Probe::Right && fast_cmp(h, e.inf) < 0) {
            e.inf = h;
            e.arg_inf = u;
        }
    });
    return e;
}

} // namespace

Enclosure DiscrepancyReport::star() const {
    Rational lo = upper.lo > -lower.hi ? upper.lo : Rational(-lower.hi);
    Rational hi = upper.hi > -lower.lo ? upper.hi : Rational(-lower.lo);
    return Enclosure(lo, hi);
}

nlohmann::json DiscrepancyReport::to_json() const {
    Enclosure s = star();
    return {{"n", n},
            {"upper", {to_text(upper.lo), to_text(upper.hi)}},
            {"lower", {to_text(lower.lo), to_text(lower.hi)}},
            {"star", {to_text(s.lo), to_text(s.hi)}},
            {"star_approx", s.hi.get_d()},
            {"gamma_upper", to_text(gamma_upper)},
            {"gamma_lower", to_text(gamma_lower)}};
}

DiscrepancyReport discrepancy(const SequenceWindow& w, std::size_t n, const Adf& f) {
    require_n(w, n);
    DiscrepancyReport r;
    r.n = n;
    std::vector<Rational> lo;
    lo.reserve(n);
    bool exact = true;
    for (std::size_t i = 0; i < n; ++i) {
        lo.push_back(w[i].lo);
        exact = exact && w[i].exact();
    }
    Extremes el = extremes(grouped(std::move(lo)), n, f);
    if (exact) {
        r.upper = Enclosure(el.sup);
        r.lower = Enclosure(el.inf);
        r.gamma_upper = el.arg_sup;
        r.gamma_lower = el.arg_inf;
        return r;
    }
    std::vector<Rational> hi;
    hi.reserve(n);
    for (std::size_t i = 0; i < n; ++i) hi.push_back(w[i].hi);
    Extremes eh = extremes(grouped(std::move(hi)), n, f);
    // smaller values only raise the counts A_n([0, g))
    r.upper = Enclosure(eh.sup, el.sup);
    r.lower = Enclosure(eh.inf, el.inf);
    r.gamma_upper = el.arg_sup;
    r.gamma_lower = eh.arg_inf;
    return r;
}

Rational upper_discrepancy(const SequenceWindow& w, std::size_t n, const Adf& f) { return discrepancy(w, n, f).upper.hi; }
Rational lower_discrepancy(const SequenceWindow& w, std::size_t n, const Adf& f) { return discrepancy(w, n, f).lower.lo; }

Rational extreme_discrepancy(const SequenceWindow& w, std::size_t n, const Adf& f) {
    require_n(w, n);
    require_exact(w, n, "extreme_discrepancy");
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(w[i].lo);
    // h at a = 0 is 0; track running extremes of h over earlier positions
    Rational run_max = 0, run_min = 0, best = 0;
    sweep(grouped(std::move(v)), n, f, [&](Probe, const Rational&, const Rational& h) {
        Rational up = h - run_min, down = run_max - h;
        if (up > best) best = up;
        if (down > best) best = down;
        if (h > run_max) run_max = h;
        if (h < run_min) run_min = h;
    });
    return best;
}

Adf empirical_adf(const SequenceWindow& w, std::size_t n) {
    require_n(w, n);
    require_exact(w, n, "empirical_adf");
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(w[i].lo);
    auto groups = grouped(std::move(v));
    Rational N(static_cast<unsigned long>(n));
    std::vector<Adf::Knot> knots;
    std::size_t below = 0;
    std::size_t gi = 0;
    if (!groups.empty() && sgn(groups[0].v) == 0) {
        below = groups[0].count;
        gi = 1;
    }
    knots.push_back({Rational(0), Rational(0), Rational(0), Rational(static_cast<unsigned long>(below)) / N});
    for (; gi < groups.size(); ++gi) {
        if (fast_cmp(groups[gi].v, Rational(1)) >= 0) throw DomainError("empirical_adf needs values in [0,1)");
        Rational at = Rational(static_cast<unsigned long>(below)) / N;
        below += groups[gi].count;
        knots.push_back({groups[gi].v, at, at, Rational(static_cast<unsigned long>(below)) / N});
    }
    knots.push_back({Rational(1), Rational(1), Rational(1), Rational(1)});
    std::vector<Adf::Segment> segs(knots.size() - 1, Adf::Segment{Rational(0), 1});
    return Adf(std::move(knots), std::move(segs));
}

// ---------------------------------------------------------------- subsequences

SubsequenceMode parse_subsequence_mode(const std::string& s) {
    if (s == "orbit") return SubsequenceMode::Orbit;
    if (s == "ratio") return SubsequenceMode::Ratio;
    throw ConfigError("subsequence mode must be \"orbit\" or \"ratio\", got \"" + s + "\"");
}

SequenceWindow subsequence(const DigitPrefix& d, const IntPolynomial& p, unsigned long m, unsigned long r,
                           SubsequenceMode mode, unsigned tail_terms, unsigned grid_bits) {
    if (m < 1) throw DomainError("subsequence needs m >= 1");
    if (mode == SubsequenceMode::Orbit && tail_terms < 1) throw DomainError("orbit mode needs tail_terms >= 1");
    std::uint64_t N = d.size();
    std::uint64_t limit = N;
    if (mode == SubsequenceMode::Orbit) limit = N + 1 >= tail_terms ? N + 1 - tail_terms : 0;
    Integer lim(static_cast<unsigned long>(limit));
    Integer T = p.increasing_threshold();
    SequenceWindow w;
    for (Integer k = 0;; ++k) {
        Integer x = Integer(m) * k + r;
        Integer j = p(x);
        if (x >= T && j > lim) break;
        if (j < 1 || j > lim) continue;
        std::uint64_t idx = j.get_ui();
        if (mode == SubsequenceMode::Ratio) {
            w.push(Enclosure(make_rational(d.digit(idx), d.q(idx))), idx);
        } else {
            Enclosure e = t_qn_from_digits(d, idx - 1, tail_terms);
            if (grid_bits > 0) {
                e = widen_to_grid(e, grid_bits);
                if (e.lo < 0) e.lo = 0;
                if (e.hi > 1) e.hi = 1;
            }
            w.push(e, idx);
        }
    }
    if (w.size() == 0)
        throw RangeError("no index p(mk + r) falls inside the digit prefix of length " + std::to_string(N));
    return w;
}

OrbitStream::OrbitStream(unsigned tail_terms, unsigned grid_bits) : tail_(tail_terms), bits_(grid_bits) {
    if (tail_ < 1) throw DomainError("orbit stream needs tail_terms >= 1");
}

void OrbitStream::push(const Integer& q, const Integer& E) {
    if (q < 2 || E < 0 || E >= q) throw DomainError("orbit stream digit outside [0, q_n - 1]");
    ++fed_;
    buf_.emplace_back(q, E);
    if (buf_.size() < tail_) return;
    Enclosure e;
    if (bits_ > 0) {
        // floor((a + x) / q) = floor((a + floor(x)) / q) for integers a, q > 0 (and likewise
        // ceil), so the grid bounds nest from the last digit without forming big products
        Integer lo = 0, hi = Integer(1) << bits_;
        for (std::size_t k = buf_.size(); k-- > 0;) {
            const auto& [qk, ek] = buf_[k];
            Integer a = ek << bits_;
            Integer nl = a + lo, nh = a + hi;
            mpz_fdiv_q(lo.get_mpz_t(), nl.get_mpz_t(), qk.get_mpz_t());
            mpz_cdiv_q(hi.get_mpz_t(), nh.get_mpz_t(), qk.get_mpz_t());
        }
        Integer one = Integer(1) << bits_;
        e = Enclosure(make_rational(lo, one), make_rational(hi, one));
    } else {
        // T = S / D with S = (E_j q_{j+1} + E_{j+1}) q_{j+2} + ... and D = q_j q_{j+1} ...
        Integer S = 0, D = 1;
        for (const auto& [qk, ek] : buf_) {
            S = S * qk + ek;
            D *= qk;
        }
        e = Enclosure(make_rational(S, D), make_rational(Integer(S + 1), D));
    }
    w_.push(e, fed_ + 1 - tail_);
    buf_.erase(buf_.begin());
}

// ---------------------------------------------------------------- AP report

bool ApReport::any_divergence() const {
    return std::any_of(rows.begin(), rows.end(), [](const ApRow& r) { return r.diverged; });
}

nlohmann::json ApReport::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{"checkpoint", r.checkpoint},
                       {"m", r.m},
                       {"r", r.r},
                       {"count", r.count},
                       {"orbit", r.orbit.to_json()},
                       {"ratio", r.ratio.to_json()},
                       {"sandwich", {to_text(r.sandwich.lo), to_text(r.sandwich.hi)}},
                       {"diverged", r.diverged}});
    }
    return {{"rows", out}, {"any_divergence", any_divergence()}};
}

void ApReport::write_csv(std::ostream& os) const {
    os << "checkpoint,m,r,upper,lower,star\n";
    for (const auto& r : rows) {
        os << r.checkpoint << ',' << r.m << ',' << r.r << ',' << r.orbit.upper.hi.get_d() << ','
           << r.orbit.lower.lo.get_d() << ',' << r.orbit.star().hi.get_d() << '\n';
    }
}

ApReport ap_normality_report(const DigitPrefix& d, unsigned long max_m, const std::vector<std::uint64_t>& checkpoints,
                             unsigned tail_terms, unsigned grid_bits) {
    if (max_m < 1) throw DomainError("ap_normality_report needs max_m >= 1");
    for (auto c : checkpoints)
        if (c < 1 || c > d.size()) throw RangeError("checkpoint " + std::to_string(c) + " outside the digit prefix");
    ApReport rep;
    Adf id = Adf::identity();
    auto X = IntPolynomial::X();
    for (unsigned long m = 1; m <= max_m; ++m) {
        for (unsigned long r = 0; r < m; ++r) {
            SequenceWindow orbit = subsequence(d, X, m, r, SubsequenceMode::Orbit, tail_terms, grid_bits);
            SequenceWindow ratio, plus;
            for (std::size_t t = 0; t < orbit.size(); ++t) {
                std::uint64_t j = orbit.indices()[t];
                Integer q = d.q(j);
                ratio.push(Enclosure(make_rational(d.digit(j), q)), j);
                plus.push(Enclosure(make_rational(Integer(d.digit(j) + 1), q)), j);
            }
            for (auto c : checkpoints) {
                std::size_t cnt = 0;
                while (cnt < orbit.size() && orbit.indices()[cnt] <= c) ++cnt;
                if (cnt == 0) continue;
                ApRow row;
                row.checkpoint = c;
                row.m = m;
                row.r = r;
                row.count = cnt;
                row.orbit = discrepancy(orbit, cnt, id);
                row.ratio = discrepancy(ratio, cnt, id);
                DiscrepancyReport pl = discrepancy(plus, cnt, id);
                // orbit values lie between ratio and ratio + 1/q
                Rational lo = std::max(Rational(pl.upper.lo), Rational(-row.ratio.lower.hi));
                Rational hi = std::max(Rational(row.ratio.upper.hi), Rational(-pl.lower.lo));
                row.sandwich = Enclosure(lo, hi);
                Enclosure s = row.orbit.star();
                row.diverged = s.hi < row.sandwich.lo || s.lo > row.sandwich.hi;
                rep.rows.push_back(std::move(row));
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- accumulation

ClosedSetU accumulation_estimate(const SequenceWindow& w, const Rational& eps, std::optional<Rational> threshold) {
    if (eps <= 0) throw DomainError("accumulation_estimate needs eps > 0");
    if (w.size() == 0) return ClosedSetU();
    Rational thr = threshold ? *threshold : Rational(eps / 4);
    std::size_t start = w.size() / 2;
    std::size_t len = w.size() - start;
    Integer last_cell = ceil_of(Rational(1 / eps)) - 1;
    struct Cell {
        std::size_t count = 0;
        Rational lo, hi;
    };
    std::map<Integer, Cell> cells;
    for (std::size_t i = start; i < w.size(); ++i) {
        Rational v = w[i].mid();
        Integer k = floor_of(Rational(v / eps));
        if (k > last_cell) k = last_cell;
        Cell& c = cells[k];
        if (c.count == 0 || v < c.lo) c.lo = v;
        if (c.count == 0 || v > c.hi) c.hi = v;
        ++c.count;
    }
    ClosedSetU out;
    Rational half = eps / 2;
    for (const auto& [k, c] : cells) {
        if (Rational(static_cast<unsigned long>(c.count)) < thr * static_cast<unsigned long>(len)) continue;
        Rational mid = (c.lo + c.hi) / 2;
        Rational a = mid - half, b = mid + half;
        if (eps >= 1) {
            a = 0;
            b = 1;
        } else if (a < 0) {
            a = 0;
            b = eps;
        } else if (b > 1) {
            b = 1;
            a = 1 - eps;
        }
        out = out.unite(ClosedSetU::interval(a, b));
    }
    return out;
}

namespace {

Rational dist_to(const Rational& x, const ClosedSetU& B) {
    std::optional<Rational> best;
    for (const auto& p : B.pieces()) {
        Rational d = 0;
        if (x < p.a) d = p.a - x;
        else if (x > p.b) d = x - p.b;
        if (!best || d < *best) best = d;
    }
    return *best;
}

Rational directed(const ClosedSetU& A, const ClosedSetU& B) {
    std::vector<Rational> cand;
    for (const auto& p : A.pieces()) {
        cand.push_back(p.a);
        cand.push_back(p.b);
    }
    const auto& bp = B.pieces();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        Rational m = (bp[i].b + bp[i + 1].a) / 2;
        if (A.contains(m)) cand.push_back(m);
    }
    Rational worst = 0;
    for (const auto& x : cand) {
        Rational d = dist_to(x, B);
        if (d > worst) worst = d;
    }
    return worst;
}

} // namespace

Rational hausdorff_distance(const ClosedSetU& a, const ClosedSetU& b) {
    if (a.empty() || b.empty()) throw DomainError("hausdorff_distance needs non-empty sets");
    return std::max(directed(a, b), directed(b, a));
}

// ---------------------------------------------------------------- Moran bound

std::vector<Enclosure> moran_lower_bound(const std::vector<Integer>& n, const std::vector<Rational>& c, std::size_t K) {
    if (K < 1) throw DomainError("moran_lower_bound needs K >= 1");
    if (n.size() < K + 1 || c.size() < K + 1)
        throw DomainError("moran_lower_bound needs n_k and c_k for k <= K + 1");
    for (std::size_t k = 0; k <= K; ++k) {
        if (n[k] < 2) throw DomainError("n_" + std::to_string(k + 1) + " must be >= 2");
        if (c[k] <= 0 || c[k] >= 1) throw DomainError("c_" + std::to_string(k + 1) + " must lie in (0,1)");
        if (c[k] * n[k] > 1) throw DomainError("n_k c_k must be <= 1 at k = " + std::to_string(k + 1));
    }
    std::vector<Enclosure> out;
    Enclosure log_n(Rational(0)), log_c(Rational(0));
    for (std::size_t k = 0; k < K; ++k) {
        log_n = log_n + log_bounds(n[k]);
        log_c = log_c + log_bounds(c[k]);
        Enclosure den = Enclosure(Rational(0)) - (log_c + log_bounds(c[k + 1]) + log_bounds(n[k + 1]));
        if (den.lo <= 0) {
            // n_{k+1} c_{k+1} = 1 with c_1...c_k close to 1 needs more precision
            Enclosure p = log_bounds(Rational(c[k + 1] * n[k + 1]), 512);
            Enclosure lc(Rational(0));
            for (std::size_t t = 0; t <= k; ++t) lc = lc + log_bounds(c[t], 512);
            den = Enclosure(Rational(0)) - (lc + p);
            if (den.lo <= 0) throw InternalError("moran_lower_bound: denominator not separated from 0");
        }
        out.push_back(widen_to_grid(log_n / den, 96));
    }
    return out;
}

// ---------------------------------------------------------------- property suite

bool SuiteReport::ok() const {
    return std::all_of(items.begin(), items.end(), [](const SuiteItem& i) { return i.ok; });
}

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& i : items)
        out.push_back({{"item", i.item},
                       {"applied", i.applied},
                       {"ok", i.ok},
                       {"lhs", to_text(i.lhs)},
                       {"rhs", to_text(i.rhs)},
                       {"detail", i.detail}});
    return {{"items", out}, {"ok", ok()}};
}

namespace {

SequenceWindow take(const SequenceWindow& w, std::size_t from, std::size_t step, std::size_t count) {
    SequenceWindow out;
    for (std::size_t t = 0; t < count; ++t) out.push(w[from + t * step]);
    return out;
}

} // namespace

SuiteReport discrepancy_property_suite(const SequenceWindow& w, std::size_t n, const SuiteParams& P) {
    require_n(w, n);
    require_exact(w, n, "discrepancy_property_suite");
    SuiteReport rep;

    {   // 1: upper discrepancy <= extreme discrepancy
        SuiteItem it;
        it.item = 1;
        it.applied = true;
        it.lhs = upper_discrepancy(w, n, P.f);
        it.rhs = extreme_discrepancy(w, n, P.f);
        it.ok = it.lhs <= it.rhs;
        rep.items.push_back(it);
    }
    {   // 2: concatenation bound
        SuiteItem it;
        it.item = 2;
        std::size_t total = 0;
        for (auto b : P.blocks) total += b;
        if (!P.blocks.empty() && total <= n && std::find(P.blocks.begin(), P.blocks.end(), 0u) == P.blocks.end()) {
            it.applied = true;
            SequenceWindow all = w.prefix(total);
            it.lhs = upper_discrepancy(all, total, P.f);
            Rational acc = 0;
            std::size_t off = 0;
            for (auto b : P.blocks) {
                acc += Rational(static_cast<unsigned long>(b)) * upper_discrepancy(take(w, off, 1, b), b, P.f);
                off += b;
            }
            it.rhs = acc / static_cast<unsigned long>(total);
            it.ok = it.lhs <= it.rhs;
        } else {
            it.detail = "no block split";
        }
        rep.items.push_back(it);
    }
    {   // 4: family bound over the subsequences z_{mi+r} and z_{dmi+mj+r}
        SuiteItem it;
        it.item = 4;
        unsigned long m = P.m, r = P.r, d = P.d;
        if (P.family && m >= 1 && r < m && d >= 1 && n > m * d) {
            it.applied = true;
            std::size_t n1 = n / m, n2 = n / (m * d);
            it.lhs = upper_discrepancy(take(w, r, m, n1), n1, (*P.family)(m, r));
            Rational worst = 0;
            for (unsigned long j = 0; j < d; ++j) {
                Rational v = upper_discrepancy(take(w, m * j + r, m * d, n2), n2, (*P.family)(d * m, m * j + r));
                if (v > worst) worst = v;
            }
            it.rhs = worst + make_rational(static_cast<long>(m * (d + 1)), static_cast<long>(n - m * d));
            it.ok = it.lhs <= it.rhs;
        } else {
            it.detail = "no family or n <= md";
        }
        rep.items.push_back(it);
    }
    {   // 5: ordered adfs
        SuiteItem it;
        it.item = 5;
        if (P.ordered) {
            it.applied = true;
            it.lhs = upper_discrepancy(w, n, P.ordered->first);
            it.rhs = upper_discrepancy(w, n, P.ordered->second);
            it.ok = it.lhs <= it.rhs;
        } else {
            it.detail = "no ordered pair";
        }
        rep.items.push_back(it);
    }
    {   // 6: sorted values z_1 <= ... <= z_n, 1-based
        SuiteItem it;
        it.item = 6;
        it.applied = true;
        std::vector<Rational> z;
        for (std::size_t i = 0; i < n; ++i) z.push_back(w[i].lo);
        std::sort(z.begin(), z.end(), FastLess{});
        Rational bound = 0;
        Rational N(static_cast<unsigned long>(n));
        for (std::size_t i = 1; i <= n; ++i) {
            Rational fz = P.f(z[i - 1]);
            Rational a = abs(Rational(fz - Rational(static_cast<unsigned long>(i - 1)) / N));
            Rational b = abs(Rational(fz - Rational(static_cast<unsigned long>(i)) / N));
            if (a > bound) bound = a;
            if (b > bound) bound = b;
        }
        it.lhs = upper_discrepancy(w, n, P.f);
        it.rhs = bound;
        it.ok = it.lhs <= it.rhs;
        rep.items.push_back(it);
    }
    return rep;
}

} // namespace cantor
