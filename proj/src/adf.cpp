#include "cantor/adf.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

namespace cantor {

// ---------------------------------------------------------------- ClosedSetU

ClosedSetU::ClosedSetU(std::vector<Piece> pieces) {
    for (const auto& p : pieces) {
        if (p.a > p.b) throw DomainError("closed interval with a > b");
        if (p.a < 0 || p.b > 1) throw DomainError("closed set must lie in [0,1]");
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
        return x.a < y.a || (x.a == y.a && x.b < y.b);
    });
    for (const auto& p : pieces) {
        if (!pieces_.empty() && p.a <= pieces_.back().b) {
            if (p.b > pieces_.back().b) pieces_.back().b = p.b;
        } else {
            pieces_.push_back(p);
        }
    }
}

ClosedSetU ClosedSetU::interval(const Rational& a, const Rational& b) { return ClosedSetU({{a, b}}); }
ClosedSetU ClosedSetU::point(const Rational& a) { return ClosedSetU({{a, a}}); }

bool ClosedSetU::contains(const Rational& x) const {
    for (const auto& p : pieces_)
        if (p.a <= x && x <= p.b) return true;
    return false;
}

Rational ClosedSetU::measure() const {
    Rational m = 0;
    for (const auto& p : pieces_) m += p.b - p.a;
    return m;
}

std::size_t ClosedSetU::atom_count() const {
    return std::count_if(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.a == p.b; });
}

ClosedSetU ClosedSetU::unite(const ClosedSetU& o) const {
    std::vector<Piece> all = pieces_;
    all.insert(all.end(), o.pieces_.begin(), o.pieces_.end());
    return ClosedSetU(std::move(all));
}

ClosedSetU ClosedSetU::intersect(const ClosedSetU& o) const {
    std::vector<Piece> out;
    std::size_t i = 0, j = 0;
    while (i < pieces_.size() && j < o.pieces_.size()) {
        const Piece& p = pieces_[i];
        const Piece& q = o.pieces_[j];
        Rational a = std::max(p.a, q.a), b = std::min(p.b, q.b);
        if (a <= b) out.push_back({a, b});
        if (p.b < q.b) ++i; else ++j;
    }
    return ClosedSetU(std::move(out));
}

nlohmann::json ClosedSetU::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : pieces_) j.push_back({to_text(p.a), to_text(p.b)});
    return j;
}

static Rational json_rational(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw ConfigError("expected a rational as \"num/den\" string, got " + j.dump());
}

ClosedSetU ClosedSetU::from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("closed set must be a JSON array of [a,b] pairs");
    std::vector<Piece> ps;
    for (const auto& e : j) {
        if (e.is_array() && e.size() == 2) ps.push_back({json_rational(e[0]), json_rational(e[1])});
        else if (e.is_array() && e.size() == 1) ps.push_back({json_rational(e[0]), json_rational(e[0])});
        else ps.push_back({json_rational(e), json_rational(e)});
    }
    return ClosedSetU(std::move(ps));
}

ClosedSetU ClosedSetU::parse(const std::string& text) {
    std::vector<Piece> ps;
    std::size_t i = 0;
    auto skip = [&] { while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',' || text[i] == 'U' || text[i] == 'u')) ++i; };
    auto read_until = [&](const char* stops) {
        std::size_t s = i;
        while (i < text.size() && !std::strchr(stops, text[i])) ++i;
        return text.substr(s, i - s);
    };
    skip();
    while (i < text.size()) {
        char open = text[i++];
        if (open == '[') {
            Rational a = parse_rational(read_until(","));
            ++i;
            Rational b = parse_rational(read_until("]"));
            if (i >= text.size()) throw DomainError("unterminated interval in '" + text + "'");
            ++i;
            ps.push_back({a, b});
        } else if (open == '{') {
            for (;;) {
                std::string tok = read_until(",}");
                if (i >= text.size()) throw DomainError("unterminated point set in '" + text + "'");
                Rational a = parse_rational(tok);
                ps.push_back({a, a});
                if (text[i++] == '}') break;
            }
        } else {
            throw DomainError("cannot parse closed set '" + text + "'");
        }
        skip();
    }
    return ClosedSetU(std::move(ps));
}

std::string ClosedSetU::to_string() const {
    std::string s;
    for (const auto& p : pieces_) {
        if (!s.empty()) s += ",";
        s += "[" + to_text(p.a) + "," + to_text(p.b) + "]";
    }
    return s.empty() ? "{}" : s;
}

// ---------------------------------------------------------------------- Adf

static Rational rpow(Rational base, unsigned e) {
    Rational r = 1;
    while (e--) r *= base;
    return r;
}

Adf::Adf(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw DomainError("adf needs knots at 0 and 1");
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
        Rational w = knots_[k + 1].x - knots_[k].x;
        if (w <= 0) throw DomainError("adf knots must be strictly increasing");
        segments_.push_back({(knots_[k + 1].left - knots_[k].right) / w, 1});
    }
    validate();
}

Adf::Adf(std::vector<Knot> knots, std::vector<Segment> segments)
    : knots_(std::move(knots)), segments_(std::move(segments)) {
    validate();
}

void Adf::validate() const {
    if (knots_.size() < 2) throw DomainError("adf needs knots at 0 and 1");
    if (segments_.size() + 1 != knots_.size()) throw DomainError("adf needs one segment between consecutive knots");
    if (knots_.front().x != 0 || knots_.back().x != 1) throw DomainError("adf knots must start at 0 and end at 1");
    if (knots_.front().point != 0 || knots_.front().left != 0) throw DomainError("adf must satisfy f(0) = 0");
    if (knots_.back().point != 1 || knots_.back().right != 1) throw DomainError("adf must satisfy f(1) = 1");
    for (std::size_t k = 0; k < knots_.size(); ++k) {
        const Knot& n = knots_[k];
        if (!(n.left <= n.point && n.point <= n.right)) throw DomainError("adf knot values must satisfy left <= point <= right");
        if (n.left < 0 || n.right > 1) throw DomainError("adf values must lie in [0,1]");
        if (k + 1 < knots_.size()) {
            if (knots_[k + 1].x <= n.x) throw DomainError("adf knots must be strictly increasing");
            const Segment& s = segments_[k];
            if (s.coef < 0 || s.exponent < 1) throw DomainError("adf segment must be non-decreasing");
            Rational end = n.right + s.coef * rpow(knots_[k + 1].x - n.x, s.exponent);
            if (end != knots_[k + 1].left) throw DomainError("adf segment end does not match next left limit");
        }
    }
}

Adf Adf::identity() { return Adf({{0, 0, 0, 0}, {1, 1, 1, 1}}); }

Adf Adf::power(unsigned e) {
    if (e == 0) throw DomainError("power adf needs exponent >= 1");
    return Adf({{0, 0, 0, 0}, {1, 1, 1, 1}}, {{1, e}});
}

Adf Adf::step(const Rational& s) {
    if (s <= 0 || s > 1) throw DomainError("step location must lie in (0,1]");
    if (s == 1) return Adf({{0, 0, 0, 0}, {1, 0, 1, 1}});
    return Adf({{0, 0, 0, 0}, {s, 0, 1, 1}, {1, 1, 1, 1}});
}

Adf Adf::interpolate(const std::vector<std::pair<Rational, Rational>>& pts_in) {
    auto pts = pts_in;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Knot> ks;
    for (const auto& [x, y] : pts) {
        if (!ks.empty() && ks.back().x == x) {
            if (ks.back().point != y) throw DomainError("interpolation points disagree at a repeated x");
            continue;
        }
        ks.push_back({x, y, y, y});
    }
    return Adf(std::move(ks));
}

Rational Adf::seg_value(std::size_t k, const Rational& x) const {
    const Segment& s = segments_[k];
    if (s.exponent == 1) return knots_[k].right + s.coef * (x - knots_[k].x);
    return knots_[k].right + s.coef * rpow(x - knots_[k].x, s.exponent);
}

Rational Adf::seg_solve(std::size_t k, const Rational& q) const {
    const Segment& s = segments_[k];
    Rational r = (q - knots_[k].right) / s.coef;
    if (s.exponent == 1) return knots_[k].x + r;
    // e-th root: exact when numerator and denominator are perfect powers,
    // otherwise floor on the 2^-128 grid.
    Integer n = r.get_num(), d = r.get_den(), rn, rd;
    bool en = mpz_root(rn.get_mpz_t(), n.get_mpz_t(), s.exponent) != 0;
    bool ed = mpz_root(rd.get_mpz_t(), d.get_mpz_t(), s.exponent) != 0;
    if (en && ed) return knots_[k].x + make_rational(rn, rd);
    const unsigned bits = 128;
    Integer t = n;
    mpz_mul_2exp(t.get_mpz_t(), t.get_mpz_t(), bits * s.exponent);
    mpz_fdiv_q(t.get_mpz_t(), t.get_mpz_t(), d.get_mpz_t());
    mpz_root(t.get_mpz_t(), t.get_mpz_t(), s.exponent);
    Rational root(t);
    mpq_div_2exp(root.get_mpq_t(), root.get_mpq_t(), bits);
    return knots_[k].x + root;
}

Rational Adf::eval(const Rational& x, Side side) const {
    if (x < 0 || x > 1) throw DomainError("adf evaluated outside [0,1]");
    // last knot with knot.x <= x
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x, [](const Rational& v, const Knot& k) { return v < k.x; });
    std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (knots_[k].x == x) {
        switch (side) {
            case Side::Left: return knots_[k].left;
            case Side::Point: return knots_[k].point;
            case Side::Right: return knots_[k].right;
        }
    }
    return seg_value(k, x);
}

Rational Adf::inf_preimage(const Rational& q) const {
    if (q < 0 || q > 1) throw DomainError("inf_preimage level outside [0,1]");
    for (std::size_t k = 0; k < knots_.size(); ++k) {
        const Knot& n = knots_[k];
        if (k > 0) {
            const Knot& p = knots_[k - 1];
            if (n.left >= q && n.left > p.right) return seg_solve(k - 1, q);
        }
        if (n.left >= q || n.point >= q || n.right >= q) return n.x;
    }
    return 1;
}

Rational Adf::sup_preimage(const Rational& q) const {
    if (q < 0 || q > 1) throw DomainError("sup_preimage level outside [0,1]");
    for (std::size_t k = knots_.size(); k-- > 0;) {
        const Knot& n = knots_[k];
        if (k + 1 < knots_.size()) {
            const Knot& nx = knots_[k + 1];
            if (n.right <= q && nx.left > q) return seg_solve(k, q);
        }
        if (n.right <= q || n.point <= q || n.left <= q) return n.x;
    }
    return 0;
}

bool Adf::continuous() const {
    for (const auto& k : knots_)
        if (k.left != k.point || k.point != k.right) return false;
    return true;
}

bool Adf::piecewise_affine() const {
    return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) { return s.exponent == 1; });
}

std::vector<std::pair<Rational, Rational>> Adf::jumps() const {
    std::vector<std::pair<Rational, Rational>> out;
    for (const auto& k : knots_)
        if (k.left != k.right) out.emplace_back(k.x, k.right - k.left);
    return out;
}

nlohmann::json Adf::to_json() const {
    nlohmann::json ks = nlohmann::json::array(), ss = nlohmann::json::array();
    for (const auto& k : knots_)
        ks.push_back({{"x", to_text(k.x)}, {"left", to_text(k.left)}, {"point", to_text(k.point)}, {"right", to_text(k.right)}});
    for (const auto& s : segments_) ss.push_back({{"slope", to_text(s.coef)}, {"exponent", s.exponent}});
    return {{"knots", ks}, {"segments", ss}};
}

Adf Adf::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("knots")) throw ConfigError("adf JSON needs a \"knots\" array");
    std::vector<Knot> ks;
    for (const auto& k : j.at("knots")) {
        Rational x = json_rational(k.at("x"));
        Rational p = json_rational(k.at("point"));
        Rational l = k.contains("left") ? json_rational(k.at("left")) : p;
        Rational r = k.contains("right") ? json_rational(k.at("right")) : p;
        ks.push_back({x, l, p, r});
    }
    try {
        if (!j.contains("segments")) return Adf(std::move(ks));
        std::vector<Segment> ss;
        for (const auto& s : j.at("segments")) ss.push_back({json_rational(s.at("slope")), s.value("exponent", 1u)});
        return Adf(std::move(ks), std::move(ss));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid adf: ") + e.what());
    }
}

// ------------------------------------------------------------ constructions

ClosedSetU increase_set(const Adf& f) {
    std::vector<ClosedSetU::Piece> ps;
    const auto& ks = f.knots();
    const auto& ss = f.segments();
    for (std::size_t k = 0; k < ks.size(); ++k) {
        if (ks[k].left != ks[k].right) ps.push_back({ks[k].x, ks[k].x});
        if (k + 1 < ks.size() && ss[k].coef > 0) ps.push_back({ks[k].x, ks[k + 1].x});
    }
    return ClosedSetU(std::move(ps));
}

Adf adf_from_closed_set(const ClosedSetU& D) {
    if (D.empty()) throw DomainError("adf_from_closed_set needs a nonempty set");
    Rational total = D.measure();
    std::size_t atoms = D.atom_count();
    Rational density = atoms == 0 ? Rational(1) / total : Rational(1);
    Rational atom_mass = atoms == 0 ? Rational(0) : (1 - total) / Rational(static_cast<unsigned long>(atoms));

    std::vector<Adf::Knot> ks{{0, 0, 0, 0}};
    auto add = [&](const Rational& x, const Rational& l, const Rational& p, const Rational& r) {
        if (ks.back().x == x) {
            ks.back().point = p;
            ks.back().right = r;
        } else {
            ks.push_back({x, l, p, r});
        }
    };
    Rational c = 0;
    for (const auto& piece : D.pieces()) {
        if (piece.a == piece.b) {
            Rational after = c + atom_mass;
            // f(0) = 0 is forced; elsewhere atoms are right-continuous
            add(piece.a, c, piece.a == 0 ? Rational(0) : after, after);
            c = after;
        } else {
            add(piece.a, c, c, c);
            c += density * (piece.b - piece.a);
            add(piece.b, c, c, c);
        }
    }
    CANTOR_ASSERT(c == 1, "closed-set adf mass must total 1");
    if (ks.back().x != 1) ks.push_back({1, 1, 1, 1});
    ks.back().point = 1;
    ks.back().right = 1;
    return Adf(std::move(ks));
}

OlsenAdf olsen_constraint_adf(std::pair<Rational, Rational> I, std::pair<Rational, Rational> J, const Rational& x0,
                              std::pair<Rational, Rational> K) {
    for (const auto* iv : {&I, &J, &K})
        if (!(0 <= iv->first && iv->first < iv->second && iv->second <= 1))
            throw DomainError("olsen intervals must be non-degenerate subintervals of [0,1]");
    auto overlap = [](const auto& a, const auto& b) { return a.first < b.second && b.first < a.second; };
    if (overlap(I, J) || overlap(I, K) || overlap(J, K)) throw DomainError("olsen intervals must be disjoint");
    Rational lI = I.second - I.first, lJ = J.second - J.first, lK = K.second - K.first;
    if (lI + lJ >= 1) throw DomainError("olsen intervals I and J must have total length below 1");
    if (x0 < 0) throw DomainError("olsen frequency x0 must be non-negative");
    Rational cK = (1 - 2 * x0) / lK;
    if (cK < 0) throw ConstraintError("olsen mass constraint unsatisfiable: c_K < 0 (x0 > 1/2)");
    OlsenAdf out{Adf::identity(), x0 / lI, x0 / lJ, cK};

    struct Piece { Rational a, b, c; };
    std::vector<Piece> ps{{I.first, I.second, out.c_I}, {J.first, J.second, out.c_J}, {K.first, K.second, cK}};
    std::sort(ps.begin(), ps.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    std::vector<std::pair<Rational, Rational>> pts{{0, 0}};
    Rational F = 0;
    for (const auto& p : ps) {
        pts.emplace_back(p.a, F);
        F += p.c * (p.b - p.a);
        pts.emplace_back(p.b, F);
    }
    CANTOR_ASSERT(F == 1, "olsen density must integrate to 1");
    pts.emplace_back(1, 1);
    out.F = Adf::interpolate(pts);
    return out;
}

} // namespace cantor
