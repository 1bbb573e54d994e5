#pragma once
#include <string>
#include <vector>

#include "json.hpp"

#include "cantor/basic_sequence.hpp"
#include "cantor/family.hpp"
#include "cantor/polynomial.hpp"
#include "cantor/schedule.hpp"

namespace cantor {

// {"kind":"2^n"}, {"kind":"n+1"}, {"kind":"constant","value":16} or
// {"kind":"list","values":[...],"witness":"monotone"}.
BasicSequence q_from_json(const nlohmann::json& j);
// {"polys":["X","X^2"]}, {"polys":[[0,1],[0,0,1]]} or "auto:<stages>".
SparsePolySet p_from_json(const nlohmann::json& j);
// Array of {"upper":family,"lower":family}, or a single pair applied to every polynomial.
TargetSpec f_from_json(const nlohmann::json& j, std::size_t poly_count);

// Comma separated tokens: "stages" (every L_j <= N with j >= 2), "L<j>", "N"
// or an integer. Result is sorted, distinct and within [1, N].
std::vector<std::uint64_t> resolve_checkpoints(const std::string& text, const std::vector<Integer>& L,
                                               std::uint64_t N);

struct RunConfig {
    int schema = 1;
    nlohmann::json q_json, p_json, f_json;
    BasicSequence Q = BasicSequence::power_of_two();
    SparsePolySet P;
    TargetSpec F;
    std::uint64_t N = 1000;
    std::string checkpoints = "stages,N";
    unsigned tail_terms = 3;
    unsigned long max_m = 2;   // AP report range
    ScheduleOptions options;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::string& path);
    nlohmann::json to_json() const;
    Schedule make_schedule() const;   // covers N
};

} // namespace cantor
