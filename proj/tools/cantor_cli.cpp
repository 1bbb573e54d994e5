// Batch front end: construction runs, verification reports and module exports.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cantor/adf.hpp"
#include "cantor/analysis.hpp"
#include "cantor/config.hpp"
#include "cantor/errors.hpp"
#include "cantor/expansion.hpp"
#include "cantor/polynomial.hpp"
#include "cantor/real_bounds.hpp"
#include "cantor/schedule.hpp"

using namespace cantor;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::uint64_t digits = 0;   // 0 keeps the config value
    std::string checkpoints;
    std::string out;
    unsigned tail_terms = 0;    // 0 keeps the config value
};

RunConfig load_config(const Common& c) {
    RunConfig cfg = RunConfig::load(c.config);
    if (c.digits) cfg.N = c.digits;
    if (!c.checkpoints.empty()) cfg.checkpoints = c.checkpoints;
    if (c.tail_terms) cfg.tail_terms = c.tail_terms;
    return cfg;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream os(fs::path(dir) / name, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + (fs::path(dir) / name).string());
    return os;
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
    auto os = open_out(dir, name);
    os << j.dump(2) << '\n';
}

json approx(const Enclosure& e) {
    return {{"lo", to_text(e.lo)}, {"hi", to_text(e.hi)}, {"approx", e.mid().get_d()}};
}

// k -> bound for k = 1..K with n_k = upsilon(k) and c_k = 1/q_k.
json moran_section(const Schedule& s, std::uint64_t N) {
    std::size_t K = std::min<std::uint64_t>(30, N > 0 ? N - 1 : 0);
    json rows = json::array();
    if (K == 0) return {{"K", 0}, {"rows", rows}};
    std::vector<Integer> n;
    std::vector<Rational> c;
    for (std::uint64_t k = 1; k <= K + 1; ++k) {
        EnvelopeRow r = s.envelope(k);
        n.push_back(r.upsilon());
        c.push_back(make_rational(Integer(1), r.q));
    }
    auto bound = moran_lower_bound(n, c, K);
    Rational run_min;
    for (std::size_t k = 1; k <= K; ++k) {
        const Enclosure& b = bound[k - 1];
        if (k == 1 || b.lo < run_min) run_min = b.lo;
        rows.push_back({{"k", k}, {"bound", approx(b)}, {"running_min_lo", run_min.get_d()}});
    }
    return {{"K", K}, {"rows", rows}, {"running_min_lo", to_text(run_min)}, {"running_min_approx", run_min.get_d()}};
}

int cmd_construct(const Common& c) {
    RunConfig cfg = load_config(c);
    Schedule s = cfg.make_schedule();
    std::string dir = c.out.empty() ? "." : c.out;
    {
        auto os = open_out(dir, "digits.csv");
        os << "n,q_n,alpha,beta,E_n\n";
        s.for_each_envelope(1, cfg.N, [&](const EnvelopeRow& r) {
            os << r.n << ',' << r.q << ',' << r.alpha << ',' << r.beta << ',' << r.alpha << '\n';
        });
        if (!os) throw ConfigError("failed writing digits.csv");
    }
    write_json(dir, "schedule.json", s.to_json());
    EnvelopeScan scan = scan_envelopes(s, cfg.N);
    json L = json::array();
    for (const auto& x : s.L()) L.push_back(to_text(x));
    json report{{"config", cfg.to_json()}, {"N", cfg.N}, {"stages", s.stages()}, {"L", L},
                {"envelopes", scan.to_json()}};
    write_json(dir, "construct_report.json", report);
    std::cout << "wrote " << cfg.N << " digits over " << s.stages() << " stages to " << dir << "\n";
    return 0;
}

int cmd_verify(const Common& c, const std::string& csv) {
    RunConfig cfg = load_config(c);
    std::ifstream in(csv);
    if (!in) throw ConfigError("cannot open digit CSV " + csv);
    DigitPrefix d = read_digits_csv(in, cfg.Q);
    if (d.size() == 0) throw ConfigError("digit CSV has no rows");
    cfg.N = d.size();
    Schedule s = cfg.make_schedule();
    MembershipResult mem = membership_check(d, s);
    EnvelopeScan scan = scan_envelopes(s, cfg.N);
    auto cps = resolve_checkpoints(cfg.checkpoints, s.L(), cfg.N);
    ApReport ap = ap_normality_report(d, cfg.max_m, cps, cfg.tail_terms);

    json report;
    report["N"] = cfg.N;
    report["membership"] = {{"ok", mem.ok}, {"checked", mem.checked}};
    report["membership"]["first_violation"] = mem.first_violation ? json(*mem.first_violation) : json(nullptr);
    report["envelopes"] = scan.to_json();
    report["upsilon_min"] = to_text(scan.upsilon_min);
    report["checkpoints"] = cps;
    report["ap"] = ap.to_json();
    report["moran"] = moran_section(s, cfg.N);
    if (c.out.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        write_json(c.out, "verify_report.json", report);
        auto os = open_out(c.out, "ap.csv");
        ap.write_csv(os);
        std::cout << "membership " << (mem.ok ? "ok" : "FAILED at n=" + std::to_string(*mem.first_violation))
                  << ", upsilon_min " << scan.upsilon_min << "\n";
    }
    return 0;
}

// Property suite on random blocks of the emitted ratio stream.
int cmd_suite(const Common& c, unsigned windows, std::uint64_t seed) {
    RunConfig cfg = load_config(c);
    Schedule s = cfg.make_schedule();
    DigitPrefix d = emit_digits(s, cfg.N);
    std::mt19937_64 rng(seed);
    auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
    json items = json::array();
    std::size_t failures = 0;
    for (unsigned t = 0; t < windows; ++t) {
        std::uint64_t len = pick(1, std::min<std::uint64_t>(500, cfg.N));
        std::uint64_t start = pick(1, cfg.N - len + 1);
        std::vector<Rational> v;
        for (std::uint64_t j = start; j < start + len; ++j) v.push_back(make_rational(d.digit(j), d.q(j)));
        SuiteParams p;
        p.family = LinearFamily::uniform();
        p.m = pick(1, 3);
        p.r = pick(0, p.m - 1);
        p.d = pick(2, 3);
        p.ordered = std::make_pair(Adf::identity(), Adf::power(2));
        std::size_t a = pick(0, len);
        p.blocks = {a, len - a};
        SuiteReport r = discrepancy_property_suite(SequenceWindow::exact(v), len, p);
        if (!r.ok()) ++failures;
        items.push_back({{"start", start}, {"n", len}, {"report", r.to_json()}});
    }
    json report{{"seed", seed}, {"windows", windows}, {"failures", failures}, {"items", items}};
    if (c.out.empty())
        std::cout << report.dump(2) << '\n';
    else
        write_json(c.out, "suite_report.json", report);
    if (!c.out.empty()) std::cout << windows << " windows, " << failures << " failures\n";
    return 0;
}

Adf adf_by_name(const std::string& name) {
    if (name == "identity") return Adf::identity();
    auto colon = name.find(':');
    std::string kind = name.substr(0, colon), arg = colon == std::string::npos ? "" : name.substr(colon + 1);
    if (kind == "power") {
        if (arg.empty() || arg.size() > 3 || arg.find_first_not_of("0123456789") != std::string::npos)
            throw ConfigError("power adf needs an exponent below 1000, e.g. power:2");
        return Adf::power(static_cast<unsigned>(std::stoul(arg)));
    }
    if (kind == "step") return Adf::step(parse_rational(arg));
    if (kind == "set") return adf_from_closed_set(ClosedSetU::parse(arg));
    if (kind == "json") {
        std::ifstream in(arg);
        if (!in) throw ConfigError("cannot open adf file " + arg);
        try {
            return Adf::from_json(json::parse(in));
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad adf JSON: ") + e.what());
        }
    }
    throw ConfigError("unknown adf '" + name + "' (identity, power:E, step:S, set:TEXT, json:PATH)");
}

const char* kind_of(int code) { return code == 2 ? "config" : code == 3 ? "schedule" : "internal"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cantor series construction and verification"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* o = sub->add_option("--config", common.config, "run configuration (JSON, schema 1)");
        if (needs_config) o->required();
        sub->add_option("--digits", common.digits, "digit count N, overriding the config");
        sub->add_option("--checkpoints", common.checkpoints, "e.g. \"L2,L3,N\" or \"100,1000\"");
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--tail-terms", common.tail_terms, "digits used for orbit enclosures");
    };

    auto* construct = app.add_subcommand("construct", "emit digits, envelopes and the stage table");
    add_common(construct, true);

    std::string csv;
    auto* verify = app.add_subcommand("verify", "check a digit CSV against a config");
    add_common(verify, true);
    verify->add_option("--csv", csv, "digit CSV with n, q_n, E_n columns")->required();

    unsigned windows = 20;
    std::uint64_t seed = 1;
    auto* suite = app.add_subcommand("suite", "discrepancy property suite on random stream blocks");
    add_common(suite, true);
    suite->add_option("--windows", windows, "number of random blocks");
    suite->add_option("--seed", seed, "RNG seed");

    auto* polyset = app.add_subcommand("polyset", "polynomial set tools");
    polyset->require_subcommand(1);
    std::string pa, pb, ps, pn;
    auto* density = polyset->add_subcommand("density", "d(p, q, s, n)");
    density->add_option("p", pa)->required();
    density->add_option("q", pb)->required();
    density->add_option("s", ps)->required();
    density->add_option("n", pn)->required();
    std::vector<unsigned long> cert_m{1, 2, 4, 8};
    auto* certificate = polyset->add_subcommand("certificate", "sparse intersection certificate for p against q");
    certificate->add_option("p", pa)->required();
    certificate->add_option("q", pb)->required();
    certificate->add_option("--m", cert_m, "values of m to tabulate N(m)");
    unsigned stages = 3;
    auto* build = polyset->add_subcommand("build", "explicit polynomial set for the first stages");
    build->add_option("stages", stages)->required()->check(CLI::Range(1u, 8u));

    auto* adf = app.add_subcommand("adf", "asymptotic distribution function tools");
    adf->require_subcommand(1);
    std::string set_text, adf_name, x_text;
    auto* from_set = adf->add_subcommand("from-closed-set", "adf whose increase set is D");
    from_set->add_option("set", set_text, "e.g. \"[0,1/4],[3/4,1]\"")->required();
    unsigned long grid = 10;
    auto* sample = adf->add_subcommand("sample", "CSV grid x,f(x) at x = i/n");
    sample->add_option("adf", adf_name, "identity, power:E, step:S, set:TEXT or json:PATH")->required();
    sample->add_option("n", grid)->required()->check(CLI::PositiveNumber);
    auto* eval_cmd = adf->add_subcommand("eval", "f(x) at a rational x");
    eval_cmd->add_option("adf", adf_name)->required();
    eval_cmd->add_option("x", x_text)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*construct) return cmd_construct(common);
        if (*verify) return cmd_verify(common, csv);
        if (*suite) return cmd_suite(common, windows, seed);
        if (*density) {
            auto p = IntPolynomial::parse(pa), q = IntPolynomial::parse(pb);
            std::cout << intersection_density(p, q, parse_integer(ps), parse_integer(pn)).get_str() << '\n';
            return 0;
        }
        if (*certificate) {
            PairCertificate cert = pair_bound_certificate(IntPolynomial::parse(pa), IntPolynomial::parse(pb));
            json j = cert.to_json();
            for (auto m : cert_m) {
                if (m == 0) throw DomainError("m must be >= 1");
                j["N"][std::to_string(m)] = to_text(cert.N(m));
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (*build) {
            std::cout << build_explicit_polyset(stages).to_json().dump(2) << '\n';
            return 0;
        }
        if (*from_set) {
            std::cout << adf_from_closed_set(ClosedSetU::parse(set_text)).to_json().dump(2) << '\n';
            return 0;
        }
        if (*sample) {
            Adf f = adf_by_name(adf_name);
            std::cout << "x,f\n";
            for (unsigned long i = 0; i <= grid; ++i) {
                Rational x = make_rational(Integer(i), Integer(grid));
                std::cout << x.get_str() << ',' << f.eval(x).get_str() << '\n';
            }
            return 0;
        }
        if (*eval_cmd) {
            Adf f = adf_by_name(adf_name);
            Rational x = parse_rational(x_text);
            if (x < 0 || x > 1) throw DomainError("x must lie in [0, 1]");
            std::cout << f.eval(x).get_str() << '\n';
            return 0;
        }
        throw InternalError("no command ran");
    } catch (const std::exception& e) {
        int code = exit_code_for(e);
        std::cerr << "error (" << kind_of(code) << "): " << e.what() << '\n';
        return code;
    }
}
