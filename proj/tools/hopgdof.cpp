#include "hopgdof/detmodel.hpp"
#include "hopgdof/formulas.hpp"
#include "hopgdof/montecarlo.hpp"
#include "hopgdof/schemes.hpp"
#include "hopgdof/stacking.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace hopgdof;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Exit {
    int code;
};

std::string dec(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", r.to_double());
    return buf;
}

Rational exact_arg(const std::string& s, const char* what) {
    try {
        return Rational::parse(s);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("invalid-rational: ") + what + " must be p/q, got " + s);
    }
}

// mc commands also take decimals; they are snapped to the nearest fraction with denominator <= 1000
Rational loose_arg(const std::string& s) {
    try {
        return Rational::parse(s);
    } catch (const std::exception&) {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("invalid-number: " + s);
        return Rational::approximate(v, 1000);
    }
}

Rational json_rational(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_array() && j.size() == 2) return Rational(j[0].get<long>(), j[1].get<long>());
    throw std::invalid_argument("invalid-rational: expected \"p/q\", integer or [p, q]");
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("io-error: cannot read " + path);
    return json::parse(in);
}

fs::path out_path(const std::string& given, const std::string& fallback_name) {
    fs::path p = given.empty() ? fs::path(fallback_name) : fs::path(given);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("HOPGDOF_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
    }
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::invalid_argument("io-error: cannot write " + p.string());
    out << text;
}

using Curve = std::function<Rational(const Rational&, int)>;

Curve curve(const std::string& name) {
    if (name == "fp") return [](const Rational& a, int L) { return sum_gdof_fp(a, L).value; };
    if (name == "perfect") return [](const Rational& a, int) { return sum_gdof_perfect(a).value; };
    if (name == "df_fp") return [](const Rational& a, int) { return sum_gdof_df_fp(a).value; };
    if (name == "df_perfect") return [](const Rational& a, int) { return sum_gdof_df_perfect(a).value; };
    if (name == "converse") return [](const Rational& a, int L) { return converse_bound(a, L).value; };
    throw std::invalid_argument("unknown-curve: " + name);
}

std::vector<Rational> alpha_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string t; std::getline(ss, t, ':');) parts.push_back(t);
    if (parts.size() != 3) throw std::invalid_argument("invalid-range: expected start:stop:step");
    Rational a = exact_arg(parts[0], "range start"), b = exact_arg(parts[1], "range stop"),
             s = exact_arg(parts[2], "range step");
    if (s.sign() <= 0) throw std::invalid_argument("invalid-range: step must be positive");
    if (b < a) throw std::invalid_argument("invalid-range: stop below start");
    std::vector<Rational> out;
    for (Rational x = a; x <= b; x += s) out.push_back(x);
    return out;
}

std::string emit_table(const std::vector<Rational>& alphas, const std::vector<int>& Ls,
                       const std::vector<std::string>& names, const std::string& format) {
    std::vector<Curve> fs;
    for (const auto& n : names) fs.push_back(curve(n));
    if (format == "csv") {
        std::ostringstream os;
        os << "alpha,alpha_decimal,L";
        for (const auto& n : names) os << ',' << n << ',' << n << "_decimal";
        os << '\n';
        for (const auto& a : alphas)
            for (int L : Ls) {
                os << a << ',' << dec(a) << ',' << L;
                for (const auto& f : fs) {
                    Rational v = f(a, L);
                    os << ',' << v << ',' << dec(v);
                }
                os << '\n';
            }
        return os.str();
    }
    if (format == "json") {
        json rows = json::array();
        for (const auto& a : alphas)
            for (int L : Ls) {
                json r{{"alpha", a.str()}, {"L", L}};
                for (size_t i = 0; i < names.size(); ++i) r[names[i]] = fs[i](a, L).str();
                rows.push_back(r);
            }
        return rows.dump(2) + "\n";
    }
    throw std::invalid_argument("unknown-format: " + format);
}

std::string fig2() {
    std::vector<Rational> alphas;
    for (int k = 0; k <= 300; ++k) alphas.push_back(Rational(k, 100));
    return emit_table(alphas, {2}, {"fp", "perfect", "df_fp", "df_perfect"}, "csv");
}

std::string fig3() {
    std::ostringstream os;
    os << "alpha,alpha_decimal,L,gdof,gdof_decimal\n";
    for (int k = 80; k <= 140; ++k) {
        Rational a(k, 200);
        for (int L : {2, 3, 4, 10}) {
            Rational v = sum_gdof_fp(a, L).value;
            os << a << ',' << dec(a) << ',' << L << ',' << v << ',' << dec(v) << '\n';
        }
        Rational lim = 2 - a;
        os << a << ',' << dec(a) << ",inf," << lim << ',' << dec(lim) << '\n';
    }
    return os.str();
}

std::string fig5() {
    std::ostringstream os;
    os << "alpha,alpha_decimal,L,gdof,gdof_decimal\n";
    for (const Rational& a : {Rational(1, 2), Rational(20)})
        for (int L = 2; L <= 10; ++L) {
            Rational v = sum_gdof_fp(a, L).value;
            os << a << ',' << dec(a) << ',' << L << ',' << v << ',' << dec(v) << '\n';
        }
    return os.str();
}

std::vector<SubSectionSpec> subsections_from(const json& arr) {
    std::vector<SubSectionSpec> out;
    for (const auto& s : arr)
        out.push_back({s.at("id").get<std::string>(), s.at("parent").get<std::string>(), json_rational(s.at("lambda1")),
                       json_rational(s.at("lambda2")), json_rational(s.at("parent_lambda"))});
    return out;
}

det::BoundedDensityConfig channel_from(const json& j) {
    det::BoundedDensityConfig c;
    c.delta = j.value("delta", 2.0);
    c.family = j.value("channel_family", std::string("uniform"));
    c.seed = j.value("seed", std::uint64_t{1});
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sum-GDoF calculator, scheme verifier and simulator for layered two-user multi-hop interference channels"};
    app.require_subcommand(1);
    std::function<void()> action;

    // formula
    auto* formula = app.add_subcommand("formula", "closed-form values");
    formula->require_subcommand(1);
    std::string f_alpha, f_curve = "fp";
    int f_L = 2;
    auto* eval = formula->add_subcommand("eval", "evaluate one curve at (alpha, L)");
    eval->add_option("--alpha", f_alpha, "cross-link exponent as p/q")->required();
    eval->add_option("--L", f_L, "number of hops");
    eval->add_option("--curve", f_curve, "fp | perfect | df_fp | df_perfect | converse");
    eval->callback([&] {
        action = [&] { std::cout << curve(f_curve)(exact_arg(f_alpha, "alpha"), f_L) << '\n'; };
    });

    // sweep
    auto* sweep = app.add_subcommand("sweep", "tabulate curves over an alpha grid");
    std::string s_curves = "fp", s_range, s_format = "csv", s_out;
    std::vector<int> s_L{2};
    sweep->add_option("--curves", s_curves, "comma-separated: fp,perfect,df_fp,df_perfect,converse");
    sweep->add_option("--alpha-range", s_range, "start:stop:step, rationals")->required();
    sweep->add_option("--L", s_L, "hop counts")->delimiter(',');
    sweep->add_option("--format", s_format, "csv | json");
    sweep->add_option("--out", s_out, "output file (stdout if omitted)");
    sweep->callback([&] {
        action = [&] {
            std::vector<std::string> names;
            std::stringstream ss(s_curves);
            for (std::string t; std::getline(ss, t, ',');) names.push_back(t);
            std::vector<int> Ls = s_L;
            std::sort(Ls.begin(), Ls.end());
            std::string text = emit_table(alpha_range(s_range), Ls, names, s_format);
            if (s_out.empty())
                std::cout << text;
            else
                write_file(out_path(s_out, ""), text);
        };
    });

    // scheme
    auto* scheme = app.add_subcommand("scheme", "synthesize and verify achievable schemes");
    scheme->require_subcommand(1);
    std::string v_alpha, v_emit, v_tamper, v_delta = "1/100";
    int v_L = 2;
    auto* verify = scheme->add_subcommand("verify", "synthesize the scheme for (alpha, L) and check every decoding step");
    verify->add_option("--alpha", v_alpha, "p/q")->required();
    verify->add_option("--L", v_L, "number of hops");
    verify->add_option("--emit-plan", v_emit, "write the scheme and its verification as JSON");
    verify->add_option("--tamper", v_tamper, "inflate sub-message user,index before verifying");
    verify->add_option("--tamper-delta", v_delta, "gdof added by --tamper");
    verify->callback([&] {
        action = [&] {
            Rational a = exact_arg(v_alpha, "alpha");
            MultiHopScheme s = synth(a, v_L);
            if (!v_tamper.empty()) {
                int u = 0, k = 0;
                char comma = 0;
                std::istringstream is(v_tamper);
                if (!(is >> u >> comma >> k) || comma != ',') throw std::invalid_argument("invalid-tamper: expected user,index");
                s = tamper(s, MsgId{u, k, 0}, exact_arg(v_delta, "tamper delta"));
            }
            VerifyReport rep = verify_report(s);
            if (!v_emit.empty()) write_file(out_path(v_emit, ""), scheme_to_json(s, &rep) + "\n");
            if (!rep.ok) {
                const VerifyFailure& f = *rep.failure;
                std::cout << "verification-failed: hop " << f.hop + 1 << " receiver " << f.receiver << " step "
                          << (f.step < 0 ? std::string("structural") : std::to_string(f.step + 1)) << ": " << f.reason << " (deficit " << f.deficit << ")\n";
                throw Exit{1};
            }
            std::cout << "ok " << rep.total << " (" << rep.per_user[0] << " + " << rep.per_user[1] << ") regime "
                      << s.regime << " method " << s.method << '\n';
        };
    });

    // stacking
    auto* stacking = app.add_subcommand("stacking", "sub-section stacking condition");
    stacking->require_subcommand(1);
    std::string st_file;
    auto* check = stacking->add_subcommand("check", "greedy verdict with certificate");
    check->add_option("--instance", st_file, "JSON with \"items\" or \"subsections\"")->required();
    check->callback([&] {
        action = [&] {
            json j = read_json(st_file);
            StackInstance inst;
            if (j.contains("subsections"))
                inst = lemma_precondition(subsections_from(j["subsections"]));
            else
                for (const auto& it : j.at("items"))
                    inst.items.push_back({it.at("id").get<std::string>(), json_rational(it.at("level")),
                                          json_rational(it.at("size"))});
            StackCertificate c = feasible_greedy(inst);
            json out{{"feasible", c.feasible}, {"order", c.order}, {"witness", c.witness}};
            if (inst.items.size() <= 8) out["bruteforce_feasible"] = feasible_bruteforce(inst).feasible;
            std::cout << out.dump(2) << '\n';
        };
    });

    // probe
    auto* probe = app.add_subcommand("probe", "deterministic-model entropy probes");
    probe->require_subcommand(1);
    std::string p_file;
    auto* s1 = probe->add_subcommand("sumset1", "entropy difference of two top-level sums");
    s1->add_option("--config", p_file, "JSON config")->required();
    s1->callback([&] {
        action = [&] {
            json j = read_json(p_file);
            det::Sumset1Config c;
            c.P = j.value("P", std::uint64_t{256});
            c.family = j.value("family", std::string("uniform"));
            c.samples = j.value("samples", 8);
            c.channel = channel_from(j);
            std::cout << det::probe_sumset1(json_rational(j.at("mu1")), json_rational(j.at("mu2")),
                                            json_rational(j.at("nu1")), json_rational(j.at("nu2")), c)
                             .to_json()
                      << '\n';
        };
    });
    auto* s2 = probe->add_subcommand("sumset2", "output entropy against stacked sub-sections");
    s2->add_option("--config", p_file, "JSON config")->required();
    s2->callback([&] {
        action = [&] {
            json j = read_json(p_file);
            det::Sumset2Config c;
            c.P = j.value("P", std::uint64_t{256});
            c.family = j.value("family", std::string("uniform"));
            c.samples = j.value("samples", 8);
            c.channel = channel_from(j);
            if (j.contains("power1")) c.power1 = json_rational(j["power1"]);
            if (j.contains("power2")) c.power2 = json_rational(j["power2"]);
            std::cout << det::probe_sumset2(subsections_from(j.at("subsections")), c).to_json() << '\n';
        };
    });

    // mc
    auto* mcc = app.add_subcommand("mc", "Monte Carlo simulation");
    mcc->require_subcommand(1);
    std::string m_alpha, m_file, m_out;
    int m_L = 2;
    auto* slope = mcc->add_subcommand("slope", "fit rate against log2 P for the synthesized scheme");
    slope->add_option("--alpha", m_alpha, "p/q or decimal")->required();
    slope->add_option("--L", m_L, "number of hops");
    slope->add_option("--config", m_file, "JSON: P_grid or P_min/P_max/points, trials, delta, seed");
    slope->add_option("--out", m_out, "directory for slope.csv and slope.json");
    slope->callback([&] {
        action = [&] {
            mc::SimConfig c = mc::default_config();
            if (!m_file.empty()) {
                json j = read_json(m_file);
                if (j.contains("P_grid"))
                    c.P_grid = j["P_grid"].get<std::vector<double>>();
                else if (j.contains("P_min"))
                    c.P_grid = mc::log_grid(j.at("P_min").get<double>(), j.at("P_max").get<double>(), j.value("points", 9));
                c.trials = j.value("trials", c.trials);
                c.delta = j.value("delta", c.delta);
                c.seed = j.value("seed", c.seed);
            }
            mc::SlopeEstimate e = mc::estimate_slope(synth(loose_arg(m_alpha), m_L), c);
            if (m_out.empty() && !std::getenv("HOPGDOF_OUT_DIR")) {
                std::cout << e.to_csv() << e.to_json() << '\n';
            } else {
                fs::path dir = out_path(m_out, ".");
                write_file(dir / "slope.csv", e.to_csv());
                write_file(dir / "slope.json", e.to_json() + "\n");
                std::cout << e.to_json() << '\n';
            }
        };
    });

    // figures
    auto* figures = app.add_subcommand("figures", "curve data for the comparison plots");
    std::string g_which, g_out;
    figures->add_option("which", g_which, "fig2 | fig3 | fig5")->required()->check(CLI::IsMember({"fig2", "fig3", "fig5"}));
    figures->add_option("--out", g_out, "output directory");
    figures->callback([&] {
        action = [&] {
            std::string text = g_which == "fig2" ? fig2() : g_which == "fig3" ? fig3() : fig5();
            fs::path p = out_path(g_out, ".") / (g_which + ".csv");
            write_file(p, text);
            std::cout << p.string() << '\n';
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (action) action();
    } catch (const Exit& e) {
        return e.code;
    } catch (const OpenProblem& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain-error: " << e.what() << '\n';
        return 2;
    } catch (const VerificationError& e) {
        std::cerr << "verification-failed: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::string w = e.what();
        std::cerr << (w.find(": ") == std::string::npos ? "invalid-argument: " + w : w) << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "invalid-config: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
