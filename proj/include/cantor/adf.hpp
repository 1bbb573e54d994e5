#pragma once
#include <string>
#include <vector>

#include "json.hpp"

#include "cantor/rational.hpp"

namespace cantor {

// Finite union of disjoint closed intervals in [0,1]; degenerate [a,a] allowed.
// Stored canonically: sorted, overlapping or touching pieces merged.
class ClosedSetU {
public:
    struct Piece {
        Rational a, b;
        bool operator==(const Piece&) const = default;
    };

    ClosedSetU() = default;
    explicit ClosedSetU(std::vector<Piece> pieces);
    static ClosedSetU interval(const Rational& a, const Rational& b);
    static ClosedSetU point(const Rational& a);
    static ClosedSetU unit() { return interval(0, 1); }

    const std::vector<Piece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    bool contains(const Rational& x) const;
    Rational measure() const;
    std::size_t atom_count() const;

    ClosedSetU unite(const ClosedSetU& o) const;
    ClosedSetU intersect(const ClosedSetU& o) const;

    bool operator==(const ClosedSetU& o) const { return pieces_ == o.pieces_; }

    nlohmann::json to_json() const;
    static ClosedSetU from_json(const nlohmann::json& j);
    // "[0,1/4],[3/4,1]" or "{1/2}" style text.
    static ClosedSetU parse(const std::string& text);
    std::string to_string() const;

private:
    std::vector<Piece> pieces_;
};

// Non-decreasing f: [0,1] -> [0,1] with f(0) = 0, f(1) = 1.
// Knots carry left limit, point value and right limit; between consecutive
// knots x_k < x_{k+1} the function is right(x_k) + c_k (x - x_k)^e_k, e_k >= 1.
class Adf {
public:
    enum class Side { Left, Point, Right };

    struct Knot {
        Rational x, left, point, right;
    };
    struct Segment {
        Rational coef;        // >= 0
        unsigned exponent;    // 1 for affine pieces
    };

    // Affine pieces only; segments are derived from knot values.
    explicit Adf(std::vector<Knot> knots);
    Adf(std::vector<Knot> knots, std::vector<Segment> segments);

    static Adf identity();
    static Adf power(unsigned e);
    // 0 below s, 1 at and above s (s in (0,1]); s = 0 is rejected.
    static Adf step(const Rational& s);
    // Continuous piecewise-affine interpolant through (x_i, y_i).
    static Adf interpolate(const std::vector<std::pair<Rational, Rational>>& pts);

    const std::vector<Knot>& knots() const { return knots_; }
    const std::vector<Segment>& segments() const { return segments_; }

    Rational eval(const Rational& x, Side side = Side::Point) const;
    Rational operator()(const Rational& x) const { return eval(x); }

    Rational inf_preimage(const Rational& q) const;   // inf{x : f(x) >= q}
    Rational sup_preimage(const Rational& q) const;   // sup{x : f(x) <= q}
    bool continuous() const;
    bool piecewise_affine() const;

    // Jump sizes right - left at each knot (point 0 and 1 use the point value on the missing side).
    std::vector<std::pair<Rational, Rational>> jumps() const;

    nlohmann::json to_json() const;
    static Adf from_json(const nlohmann::json& j);

private:
    void validate() const;
    Rational seg_value(std::size_t k, const Rational& x) const;
    Rational seg_solve(std::size_t k, const Rational& q) const;   // x in segment k with value q, rounded down if irrational

    std::vector<Knot> knots_;
    std::vector<Segment> segments_;
};

ClosedSetU increase_set(const Adf& f);
Adf adf_from_closed_set(const ClosedSetU& D);
inline Rational eval(const Adf& f, const Rational& x, Adf::Side s = Adf::Side::Point) { return f.eval(x, s); }
inline Rational inf_preimage(const Adf& f, const Rational& q) { return f.inf_preimage(q); }

// Adf whose derivative is c_I on I, c_J on J, c_K on K and 0 elsewhere, with
// c_I |I| = c_J |J| = x0. Intervals are [a, b) pairs.
struct OlsenAdf {
    Adf F;
    Rational c_I, c_J, c_K;
};
OlsenAdf olsen_constraint_adf(std::pair<Rational, Rational> I, std::pair<Rational, Rational> J, const Rational& x0,
                              std::pair<Rational, Rational> K);

} // namespace cantor
