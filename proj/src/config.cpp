#include "cantor/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

Integer json_integer(const nlohmann::json& j, const std::string& what) {
    if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        try {
            return parse_integer(j.get<std::string>());
        } catch (const DomainError& e) {
            throw ConfigError(what + ": " + e.what());
        }
    }
    throw ConfigError(what + " must be an integer or an integer string");
}

IntPolynomial json_poly(const nlohmann::json& j) {
    try {
        if (j.is_string()) return IntPolynomial::parse(j.get<std::string>());
        if (j.is_array()) {
            std::vector<Integer> c;
            for (const auto& x : j) c.push_back(json_integer(x, "polynomial coefficient"));
            return IntPolynomial(std::move(c));
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("bad polynomial: ") + e.what());
    }
    throw ConfigError("polynomial must be text like \"X^2+1\" or a coefficient list");
}

} // namespace

BasicSequence q_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("Q needs an object with a string \"kind\"");
    std::string k = j["kind"].get<std::string>();
    if (k == "2^n") return BasicSequence::power_of_two();
    if (k == "n+1") return BasicSequence::successor();
    if (k == "constant") {
        if (!j.contains("value")) throw ConfigError("constant Q needs \"value\"");
        Integer b = json_integer(j["value"], "Q value");
        if (b < 2) throw ConfigError("constant Q needs value >= 2");
        return BasicSequence::constant(b);
    }
    if (k == "list") {
        if (!j.contains("values") || !j["values"].is_array() || j["values"].empty())
            throw ConfigError("list Q needs a non-empty \"values\" array");
        std::vector<Integer> v;
        for (const auto& x : j["values"]) {
            v.push_back(json_integer(x, "Q entry"));
            if (v.back() < 2) throw ConfigError("Q entries must be >= 2");
        }
        BasicSequence Q = BasicSequence::list(v);
        std::string w = j.value("witness", "");
        if (w.empty()) return Q;
        if (w != "monotone") throw ConfigError("list Q witness must be \"monotone\"");
        if (!std::is_sorted(v.begin(), v.end())) throw ConfigError("list Q marked monotone is not non-decreasing");
        auto shared = std::make_shared<std::vector<Integer>>(v);
        return Q.with_witness([shared](const Integer& t) -> std::uint64_t {
            auto it = std::lower_bound(shared->begin(), shared->end(), t);
            if (it == shared->end()) throw RangeError("list Q never reaches " + to_text(t));
            return static_cast<std::uint64_t>(it - shared->begin()) + 1;
        });
    }
    throw ConfigError("unknown Q kind \"" + k + "\"");
}

SparsePolySet p_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s.rfind("auto:", 0) != 0) throw ConfigError("P string must be \"auto:<stages>\"");
        unsigned long k = 0;
        try {
            std::size_t used = 0;
            k = std::stoul(s.substr(5), &used);
            if (used != s.size() - 5) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("bad stage count in \"" + s + "\"");
        }
        if (k < 1 || k > 8) throw ConfigError("auto polynomial sets support 1..8 stages");
        return build_explicit_polyset(static_cast<unsigned>(k));
    }
    if (!j.is_object() || !j.contains("polys") || !j["polys"].is_array() || j["polys"].empty())
        throw ConfigError("P needs \"auto:<stages>\" or {\"polys\": [...]}");
    SparsePolySet P;
    for (const auto& x : j["polys"]) P.polys.push_back(json_poly(x));
    if (!P.polys.front().is_identity()) throw ConfigError("the first polynomial must be X");
    for (std::size_t a = 0; a < P.polys.size(); ++a) {
        P.certificates.emplace_back();
        for (std::size_t b = 0; b < a; ++b) {
            if (P.polys[a] == P.polys[b]) throw ConfigError("polynomial " + P.polys[a].to_string() + " repeats");
            P.certificates[a].push_back(pair_bound_certificate(P.polys[a], P.polys[b]));
        }
    }
    return P;
}

TargetSpec f_from_json(const nlohmann::json& j, std::size_t poly_count) {
    auto pair_of = [](const nlohmann::json& p) {
        if (!p.is_object() || !p.contains("upper") || !p.contains("lower"))
            throw ConfigError("each F entry needs \"upper\" and \"lower\" families");
        return TargetPair{LinearFamily::from_json(p["upper"]), LinearFamily::from_json(p["lower"])};
    };
    TargetSpec F;
    if (j.is_object()) {
        TargetPair p = pair_of(j);
        for (std::size_t i = 0; i < poly_count; ++i) F.pairs.push_back(p);
    } else if (j.is_array()) {
        for (const auto& p : j) F.pairs.push_back(pair_of(p));
        if (F.pairs.size() != poly_count)
            throw ConfigError("F lists " + std::to_string(F.pairs.size()) + " pairs for " + std::to_string(poly_count) +
                              " polynomials");
    } else {
        throw ConfigError("F must be a pair object or an array of pairs");
    }
    F.validate();
    return F;
}

std::vector<std::uint64_t> resolve_checkpoints(const std::string& text, const std::vector<Integer>& L,
                                               std::uint64_t N) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        if (tok.empty()) continue;
        if (tok == "stages") {
            for (std::size_t j = 2; j < L.size(); ++j)
                if (L[j] <= N) out.push_back(L[j].get_ui());
        } else if (tok == "N") {
            out.push_back(N);
        } else if (tok[0] == 'L') {
            std::size_t j = 0;
            try {
                std::size_t used = 0;
                j = std::stoul(tok.substr(1), &used);
                if (used != tok.size() - 1) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError("bad checkpoint token \"" + tok + "\"");
            }
            if (j < 1 || j >= L.size()) throw ConfigError("checkpoint " + tok + " names an uncomputed stage");
            if (L[j] > N) throw ConfigError("checkpoint " + tok + " = " + to_text(L[j]) + " exceeds N");
            out.push_back(L[j].get_ui());
        } else {
            if (!std::all_of(tok.begin(), tok.end(), ::isdigit)) throw ConfigError("bad checkpoint token \"" + tok + "\"");
            std::uint64_t v = std::stoull(tok);
            if (v < 1 || v > N) throw ConfigError("checkpoint " + tok + " outside [1, N]");
            out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw ConfigError("checkpoint list \"" + text + "\" is empty");
    return out;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    try {
        c.schema = j.value("schema", 0);
        if (c.schema != 1) throw ConfigError("unsupported config schema " + std::to_string(c.schema) + " (expected 1)");
        for (const char* key : {"Q", "P", "F"})
            if (!j.contains(key)) throw ConfigError(std::string("config is missing \"") + key + "\"");
        c.q_json = j["Q"];
        c.p_json = j["P"];
        c.f_json = j["F"];
        c.Q = q_from_json(c.q_json);
        c.P = p_from_json(c.p_json);
        c.F = f_from_json(c.f_json, c.P.polys.size());
        if (j.contains("N")) {
            if (!j["N"].is_number_unsigned() || j["N"].get<std::uint64_t>() < 1) throw ConfigError("N must be >= 1");
            c.N = j["N"].get<std::uint64_t>();
        }
        if (j.contains("checkpoints")) {
            const auto& cp = j["checkpoints"];
            if (cp.is_string()) {
                c.checkpoints = cp.get<std::string>();
            } else if (cp.is_array()) {
                std::string s;
                for (const auto& x : cp) {
                    if (!s.empty()) s += ",";
                    s += x.is_string() ? x.get<std::string>() : std::to_string(x.get<std::uint64_t>());
                }
                c.checkpoints = s;
            } else {
                throw ConfigError("checkpoints must be a string or an array");
            }
        }
        c.tail_terms = j.value("tail_terms", 3u);
        if (c.tail_terms < 1) throw ConfigError("tail_terms must be >= 1");
        c.max_m = j.value("max_m", 2ul);
        if (c.max_m < 1) throw ConfigError("max_m must be >= 1");
        c.options.residue = parse_residue_mode(j.value("residue_mode", std::string("index")));
        c.options.anchor = parse_band_anchor(j.value("band_anchor", std::string("infimum")));
        c.options.max_stage = j.value("max_stage", 8u);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
    return {{"schema", schema},
            {"Q", q_json},
            {"P", p_json},
            {"F", f_json},
            {"N", N},
            {"checkpoints", checkpoints},
            {"tail_terms", tail_terms},
            {"max_m", max_m},
            {"residue_mode", to_string(options.residue)},
            {"band_anchor", to_string(options.anchor)},
            {"max_stage", options.max_stage}};
}

Schedule RunConfig::make_schedule() const {
    Schedule s(Q, P, F, options);
    s.cover(Integer(static_cast<unsigned long>(N)));
    return s;
}

} // namespace cantor
