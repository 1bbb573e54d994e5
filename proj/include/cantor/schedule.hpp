#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"

#include "cantor/basic_sequence.hpp"
#include "cantor/expansion.hpp"
#include "cantor/family.hpp"
#include "cantor/polynomial.hpp"

namespace cantor {

// Which residue selects f_{i!, r} at index n.
enum class ResidueMode {
    Index,          // r = n mod i!
    XiCoordinate    // r = d(n) - 1
};

// Left end of the band preimage used for c = 0: inf g^{-1}(0) = 0, or the
// start of the increase region sup g^{-1}(0).
enum class BandAnchor { Infimum, Support };

struct ScheduleOptions {
    ResidueMode residue = ResidueMode::Index;
    BandAnchor anchor = BandAnchor::Infimum;
    unsigned max_stage = 8;   // stage tables grow like i!
};

const char* to_string(ResidueMode m);
const char* to_string(BandAnchor a);
ResidueMode parse_residue_mode(const std::string& s);
BandAnchor parse_band_anchor(const std::string& s);

struct StageConstants {
    unsigned j = 0;
    Rational delta;
    std::optional<Enclosure> epsilon;   // absent at j = 1
    std::uint64_t nu1 = 0;
    Integer nu2, nu, psi, l, L;
    nlohmann::json to_json() const;
};

struct XiCoordinates {
    unsigned i = 0;
    Integer b, c, d;
    Integer argument;   // L_{i-1} + b i! i + c i! + d
};

struct IndexDecomposition {
    unsigned i = 0;     // stage of the Xi argument
    unsigned dg = 0;    // 1-based polynomial index
    Integer b, c, d;
    Integer argument;
};

struct EnvelopeRow {
    std::uint64_t n = 0;
    Integer q, alpha, beta;
    IndexDecomposition idx;
    Integer upsilon() const { return beta - alpha + 1; }
};

// Stage containing x >= 1, i.e. L_{i-1} < x <= L_i. RangeError beyond L.back().
unsigned stage_of(const std::vector<Integer>& L, const Integer& x);
// Arguments x >= 0 with p(x) = n, ascending.
std::vector<Integer> preimages(const IntPolynomial& p, const Integer& n);

// L[0] = 0 and L[i] = L_i.
Integer xi(const IntPolynomial& p, const std::vector<Integer>& L, unsigned i, const Integer& b, const Integer& c,
           const Integer& d);
XiCoordinates xi_inverse(const IntPolynomial& p, const std::vector<Integer>& L, const Integer& n);

// Band anchors of g for the k quantile bands, and their common lower bound on
// band lengths.
std::vector<Rational> band_anchors(const Adf& g, unsigned k, BandAnchor anchor);
Rational band_min_length(const Adf& g, unsigned k, BandAnchor anchor);

Rational compute_delta(unsigned k, const TargetSpec& F, const SparsePolySet& P,
                       BandAnchor anchor = BandAnchor::Infimum);
Enclosure compute_epsilon(unsigned k, const BasicSequence& Q);

struct NuParts {
    std::uint64_t nu1 = 0;
    Integer nu2, nu;
};
NuParts compute_nu(unsigned j, const BasicSequence& Q, const SparsePolySet& P, const Rational& delta_j);
NuParts compute_nu(unsigned j, const BasicSequence& Q, const SparsePolySet& P, const TargetSpec& F);
Integer compute_psi(unsigned j, const SparsePolySet& P);

class Schedule {
public:
    Schedule(BasicSequence Q, SparsePolySet P, TargetSpec F, ScheduleOptions opt = {});
    // Stage lengths fixed by hand; nu and psi are not consulted.
    static Schedule with_lengths(BasicSequence Q, SparsePolySet P, TargetSpec F, const std::vector<Integer>& l,
                                 ScheduleOptions opt = {});

    // Computes stages until L_j >= N.
    void cover(const Integer& N);
    unsigned stages() const { return static_cast<unsigned>(stages_.size()); }
    const StageConstants& stage(unsigned j) const;
    const std::vector<Integer>& L() const { return L_; }
    Integer covered() const { return L_.back(); }

    const BasicSequence& Q() const { return Q_; }
    const SparsePolySet& P() const { return P_; }
    const TargetSpec& F() const { return F_; }
    const ScheduleOptions& options() const { return opt_; }

    IndexDecomposition decompose(const Integer& n) const;
    EnvelopeRow envelope(std::uint64_t n) const;
    // Rows for n in [first, last], in order.
    void for_each_envelope(std::uint64_t first, std::uint64_t last,
                           const std::function<void(const EnvelopeRow&)>& fn) const;

    nlohmann::json to_json() const;

private:
    struct StageTable {
        // anchors[l][r][c] and anchors[l][r][c] + Delta, for the family used at this stage
        std::vector<std::vector<std::vector<std::pair<Rational, Rational>>>> bands;
    };

    void build_table(unsigned k);
    Rational delta_for(unsigned k);
    std::size_t active_polys(unsigned k) const;

    BasicSequence Q_;
    SparsePolySet P_;
    TargetSpec F_;
    ScheduleOptions opt_;
    std::vector<StageConstants> stages_;
    std::vector<Integer> L_{Integer(0)};
    std::vector<Integer> fact_;               // fact_[k] = k!
    std::vector<StageTable> tables_;          // tables_[k - 1]
    std::vector<std::optional<Rational>> deltas_;
};

std::uint64_t residue_for(const Schedule& s, std::uint64_t n, const IndexDecomposition& idx);

// E_n = alpha(n) for n = 1..N; the schedule must cover N.
DigitPrefix emit_digits(const Schedule& s, std::uint64_t N);

struct MembershipResult {
    bool ok = true;
    std::optional<std::uint64_t> first_violation;
    std::uint64_t checked = 0;
};
MembershipResult membership_check(const DigitPrefix& d, const Schedule& s);

// Envelope scan over n = 1..N: 0 <= alpha <= beta <= q_n - 1, upsilon >= 2 and
// upsilon > 4 q_n^(1 - eps_i) - 2 with i the stage of n. The bound test uses
// an upper enclosure of the right side; stage 1 has no eps and is skipped.
struct EnvelopeScan {
    std::uint64_t checked = 0;
    Integer upsilon_min;
    std::uint64_t upsilon_min_at = 0;
    std::uint64_t range_violations = 0;
    std::uint64_t small_violations = 0;    // upsilon < 2
    std::uint64_t bound_violations = 0;
    std::uint64_t bound_skipped = 0;
    std::optional<std::uint64_t> first_violation;
    bool ok() const { return range_violations == 0 && small_violations == 0 && bound_violations == 0; }
    nlohmann::json to_json() const;
};
EnvelopeScan scan_envelopes(const Schedule& s, std::uint64_t N);

} // namespace cantor
