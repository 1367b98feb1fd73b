#include "dioph/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dioph/bounds.hpp"
#include "dioph/ensys.hpp"
#include "dioph/error.hpp"
#include "dioph/explorer.hpp"
#include "dioph/gallery.hpp"
#include "dioph/lower.hpp"
#include "dioph/pell.hpp"
#include "dioph/poly.hpp"
#include "dioph/solver.hpp"
#include "dioph/transforms.hpp"

namespace dioph::cli {

using json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::string tuple_text(std::span<const std::int64_t> t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i != 0) s += ", ";
        s += std::to_string(t[i]);
    }
    return s + ")";
}

json tuple_json(std::span<const std::int64_t> t) {
    auto a = json::array();
    for (auto v : t) a.push_back(v);
    return a;
}

std::string fraction_text(const transforms::Fraction& f) { return std::to_string(f.num) + "/" + std::to_string(f.den); }

std::vector<std::int64_t> parse_tuple(const std::string& text) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto piece = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto value = to_int64(parse_bigint(piece));
        if (!value) throw DomainError("tuple entry '" + piece + "' does not fit 64 bits");
        out.push_back(*value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// What a subcommand does once its arguments are parsed. The request string
// identifies the result for the cache: subcommand, canonical input and every
// flag that changes the output (never the thread count).
struct Job {
    std::string request;
    std::function<std::string()> compute;
};

std::string cache_path(const std::string& dir, const std::string& request) {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(request)));
    return (std::filesystem::path(dir) / name).string();
}

std::optional<std::string> cache_lookup(const std::string& dir, const std::string& request) {
    std::ifstream in(cache_path(dir, request));
    if (!in) return std::nullopt;
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || doc.value("request", "") != request) return std::nullopt;
    if (!doc.contains("output") || !doc["output"].is_string()) return std::nullopt;
    return doc["output"].get<std::string>();
}

void cache_store(const std::string& dir, const std::string& request, const std::string& output) {
    std::filesystem::create_directories(dir);
    const auto path = cache_path(dir, request);
    const auto tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        json doc;
        doc["request"] = request;
        doc["output"] = output;
        f << doc.dump() << '\n';
        if (!f) throw Error("cannot write cache file " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Diophantine equations, E_n systems and double-exponential height bounds", "dioph"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "text";
    std::string cache_dir;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--cache-dir", cache_dir, "Directory for cached results");

    const unsigned hw = ensys::default_threads();

    std::string equation;
    std::string system_file;

    auto* parse_cmd = app.add_subcommand("parse", "Parse an equation and print it canonically");
    parse_cmd->add_option("equation", equation)->required();

    std::string lower_mode = "compact";
    auto* lower_cmd = app.add_subcommand("lower", "Compile an equation into an E_n system");
    lower_cmd->add_option("equation", equation)->required();
    lower_cmd->add_option("--mode", lower_mode)->check(CLI::IsMember({"compact", "canonical"}));

    std::string domain = "integer";
    std::string psi;
    std::optional<std::uint32_t> bound_n;
    auto* bound_cmd = app.add_subcommand("bound", "Conjectural height bound of an equation, or of n variables");
    bound_cmd->add_option("equation", equation);
    bound_cmd->add_option("--domain", domain)->check(CLI::IsMember({"integer", "nonneg", "rational"}));
    bound_cmd->add_option("--psi", psi, "Bound function: default, an expression in n, or table:1=2,...");
    bound_cmd->add_option("--n", bound_n, "Number of variables instead of an equation")->check(CLI::Range(1U, 1U << 30));

    std::int64_t box = 0;
    std::size_t limit = ensys::kDefaultLimit;
    unsigned threads = hw;
    bool scan_only = false;
    auto* solve_cmd = app.add_subcommand("solve", "List solutions of a system in [-B, B]^n");
    solve_cmd->add_option("system", system_file)->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--box", box)->required()->check(CLI::Range(std::int64_t{0}, ensys::kMaxBox));
    solve_cmd->add_option("--limit", limit);
    solve_cmd->add_option("--threads", threads)->check(CLI::Range(1U, 1024U));
    solve_cmd->add_flag("--scan", scan_only, "Plain box scan without propagation");

    auto* count_cmd = app.add_subcommand("count", "Count solutions of a system in [-B, B]^n");
    count_cmd->add_option("system", system_file)->required()->check(CLI::ExistingFile);
    count_cmd->add_option("--box", box)->required()->check(CLI::Range(std::int64_t{0}, ensys::kMaxBox));
    count_cmd->add_option("--threads", threads)->check(CLI::Range(1U, 1024U));

    auto* tilde_cmd = app.add_subcommand("tilde", "Replace x_i = 1 by x_i * x_j = x_j");
    tilde_cmd->add_option("system", system_file)->required()->check(CLI::ExistingFile);

    auto* hat_cmd = app.add_subcommand("hat", "Sum-of-squares encoding of non-negative solvability");
    hat_cmd->add_option("equation", equation)->required();

    bool verbatim = false;
    std::optional<std::int64_t> rational_box;
    auto* rat_cmd = app.add_subcommand("rationalize", "Integer encoding of rational solvability");
    rat_cmd->add_option("system", system_file)->required()->check(CLI::ExistingFile);
    rat_cmd->add_flag("--verbatim", verbatim, "Use the product encoding exactly as printed in the source text");
    rat_cmd->add_option("--box", rational_box, "Also list rational solutions found in this box")
        ->check(CLI::Range(std::int64_t{0}, std::int64_t{1} << 20));

    std::string tuple;
    std::int64_t horizon = 0;
    bool strict = false;
    auto* probe_cmd = app.add_subcommand("probe", "Look for larger tuples with the same add/mul relations");
    probe_cmd->add_option("tuple", tuple, "Comma separated, e.g. 5 or 3,9; put options first and -- before a negative tuple")
        ->required();
    probe_cmd->add_option("--horizon", horizon)->required()->check(CLI::Range(std::int64_t{1}, ensys::kMaxBox));
    probe_cmd->add_flag("--strict", strict, "Require |y_1| > |x_1|");

    explorer::SurveyOptions survey_opts;
    auto* survey_cmd = app.add_subcommand("survey", "Classify small systems (JSON lines with --format json)");
    survey_cmd->add_option("--n", survey_opts.n)->check(CLI::Range(1U, 3U));
    survey_cmd->add_option("--growth-box", survey_opts.growth_box)->check(CLI::Range(std::int64_t{2}, ensys::kMaxBox));
    survey_cmd->add_option("--seed", survey_opts.seed);
    survey_cmd->add_option("--samples", survey_opts.samples);
    survey_cmd->add_option("--threads", threads)->check(CLI::Range(1U, 1024U));

    explorer::SemiOptions semi_opts;
    std::optional<std::int64_t> override_start;
    auto* semi_cmd = app.add_subcommand("semi", "Shell-by-shell search above the conjectured bound");
    semi_cmd->add_option("equation", equation)->required();
    semi_cmd->add_option("--override-start", override_start)->check(CLI::Range(std::int64_t{0}, ensys::kMaxBox));
    semi_cmd->add_option("--cutoff", semi_opts.cutoff)->required()->check(CLI::Range(std::int64_t{0}, ensys::kMaxBox));
    semi_cmd->add_flag("--nonneg", semi_opts.nonneg, "Search non-negative tuples");

    std::string kind;
    std::optional<std::uint32_t> gallery_n;
    unsigned depth = 2;
    bool assemble = false;
    auto* gallery_cmd = app.add_subcommand("gallery", "Explicit constructions");
    gallery_cmd->add_option("kind", kind)->required()->check(CLI::IsMember({"chain", "thm7", "thm8", "example"}));
    gallery_cmd->add_option("--n", gallery_n, "Variables (chain: default 6, thm7: default 10)")
        ->check(CLI::Range(2U, 1U << 20));
    gallery_cmd->add_option("--depth", depth, "Squaring depth for thm8")->check(CLI::Range(2U, 4U));
    gallery_cmd->add_flag("--assemble", assemble, "thm8: also print an assembled solution");
    gallery_cmd->add_option("--threads", threads)->check(CLI::Range(1U, 1024U));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const bool as_json = format == "json";
    const auto emit = [&](const json& j, const std::string& text) { return as_json ? j.dump() + "\n" : text; };

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        Job job;
        if (name == "parse") {
            const auto eq = poly::parse_equation(equation);
            job.request = eq.to_string();
            job.compute = [=] {
                json j;
                j["equation"] = eq.to_string();
                j["normalized"] = eq.normalized.to_string();
                j["num_vars"] = eq.num_vars();
                return emit(j, eq.to_string() + "\n");
            };
        } else if (name == "lower") {
            const auto eq = poly::parse_equation(equation);
            job.request = eq.to_string() + "\nmode=" + lower_mode;
            job.compute = [=] {
                const auto map = lower_mode == "canonical" ? lower::lower_canonical(eq.normalized) : lower::lower_compact(eq);
                json j;
                j["mode"] = lower_mode;
                j["source"] = eq.to_string();
                j["system"] = ensys::to_json(map.target);
                const auto mj = lower::to_json(map);
                j["meaning"] = mj["meaning"];
                j["q"] = mj["q"];
                std::string text = map.target.to_string() + "\n";
                for (std::size_t i = 0; i < map.meaning.size(); ++i) {
                    text += "x" + std::to_string(i + 1) + " = " + map.meaning[i].to_string() + "\n";
                }
                return emit(j, text);
            };
        } else if (name == "bound") {
            if (bound_n && !equation.empty()) throw DomainError("bound takes either an equation or --n, not both");
            if (!bound_n && equation.empty()) throw DomainError("bound needs an equation or --n");
            if (!psi.empty() && domain != "integer") throw DomainError("--psi applies to the integer domain only");
            if (bound_n) {
                if (domain != "integer") throw DomainError("--n applies to the integer domain only");
                const auto n = *bound_n;
                job.request = "n=" + std::to_string(n) + "\npsi=" + psi;
                job.compute = [=] {
                    const std::string b = psi.empty() ? bounds::conjecture_bound(n).to_string()
                                                      : bounds::general_psi_bound(n, psi).to_string();
                    json j;
                    j["n"] = n;
                    j["psi"] = psi.empty() ? "default" : psi;
                    j["bound"] = b;
                    return emit(j, b + "\n");
                };
            } else {
                const auto eq = poly::parse_equation(equation);
                job.request = eq.to_string() + "\ndomain=" + domain + "\npsi=" + psi;
                job.compute = [=] {
                    const auto& d = eq.normalized;
                    json j;
                    j["equation"] = eq.to_string();
                    j["domain"] = domain;
                    std::string b;
                    if (domain == "integer") {
                        j["card_T"] = lower::card_T(d).to_string();
                        b = psi.empty() ? bounds::bound_D(d).to_string() : bounds::psi_bound_D(d, psi).to_string();
                        if (!psi.empty()) j["psi"] = psi;
                    } else if (domain == "nonneg") {
                        b = bounds::bound_nonneg(d).to_string();
                    } else {
                        const auto pipe = bounds::rational_pipeline(d);
                        j["lowered_vars"] = pipe.lowered_vars;
                        j["rational_vars"] = pipe.rational_vars;
                        j["rational_equations"] = pipe.rational_equations;
                        b = pipe.bound.to_string();
                    }
                    j["bound"] = b;
                    return emit(j, b + "\n");
                };
            }
        } else if (name == "solve" || name == "count") {
            const auto sys = ensys::load_system(system_file);
            const bool listing = name == "solve";
            job.request = ensys::serialize(sys) + "\nbox=" + std::to_string(box) +
                          (listing ? "\nlimit=" + std::to_string(limit) + "\nscan=" + std::to_string(scan_only) : "");
            job.compute = [=] {
                json j;
                j["n"] = sys.n();
                j["box"] = box;
                if (!listing) {
                    const auto c = ensys::count_solutions(sys, box, threads);
                    j["count"] = c.get_str();
                    return emit(j, c.get_str() + "\n");
                }
                ensys::SearchOptions opts;
                opts.box = box;
                opts.limit = limit;
                opts.threads = threads;
                opts.propagate = !scan_only;
                const auto r = ensys::enumerate_box(sys, opts);
                j["count"] = r.count.get_str();
                j["truncated"] = r.truncated;
                j["max_norm"] = r.max_norm ? json(*r.max_norm) : json(nullptr);
                auto sols = json::array();
                std::string text;
                for (const auto& t : r.solutions) {
                    sols.push_back(tuple_json(t));
                    text += tuple_text(t) + "\n";
                }
                j["solutions"] = std::move(sols);
                text += "count " + r.count.get_str() + (r.truncated ? " (listing truncated)" : "") + "\n";
                return emit(j, text);
            };
        } else if (name == "tilde") {
            const auto sys = ensys::load_system(system_file);
            job.request = ensys::serialize(sys);
            job.compute = [=] {
                const auto t = transforms::tilde(sys);
                return emit(ensys::to_json(t), t.to_string() + "\n");
            };
        } else if (name == "hat") {
            const auto eq = poly::parse_equation(equation);
            job.request = eq.to_string();
            job.compute = [=] {
                const auto h = transforms::hat(eq.normalized);
                json j;
                j["source"] = eq.to_string();
                j["num_vars"] = h.num_vars();
                j["polynomial"] = h.to_string();
                return emit(j, h.to_string() + " = 0\n");
            };
        } else if (name == "rationalize") {
            const auto sys = ensys::load_system(system_file);
            const auto enc = verbatim ? transforms::MulEncoding::Verbatim : transforms::MulEncoding::Corrected;
            job.request = ensys::serialize(sys) + "\nverbatim=" + std::to_string(verbatim) +
                          "\nbox=" + (rational_box ? std::to_string(*rational_box) : "none");
            job.compute = [=] {
                const auto eqs = transforms::rationalize(sys, enc);
                json j;
                j["encoding"] = verbatim ? "verbatim" : "corrected";
                j["num_vars"] = std::size_t{transforms::kSlots} * sys.n();
                auto ej = json::array();
                std::string text;
                for (const auto& e : eqs) {
                    ej.push_back(e.to_string());
                    text += e.to_string() + "\n";
                }
                j["equations"] = std::move(ej);
                if (rational_box) {
                    auto sj = json::array();
                    text += "solutions in box " + std::to_string(*rational_box) + ":\n";
                    for (const auto& sol : transforms::rational_solutions_in_box(sys, *rational_box, enc)) {
                        auto row = json::array();
                        std::string line = "(";
                        for (std::size_t i = 0; i < sol.size(); ++i) {
                            row.push_back(fraction_text(sol[i]));
                            line += (i != 0 ? ", " : "") + fraction_text(sol[i]);
                        }
                        sj.push_back(std::move(row));
                        text += line + ")\n";
                    }
                    j["solutions"] = std::move(sj);
                }
                return emit(j, text);
            };
        } else if (name == "probe") {
            const auto x = parse_tuple(tuple);
            job.request = tuple_text(x) + "\nhorizon=" + std::to_string(horizon) + "\nstrict=" + std::to_string(strict);
            job.compute = [=] {
                const auto v = explorer::probe(x, horizon, strict);
                std::string text = explorer::to_string(v.kind);
                if (v.witness) text += " " + tuple_text(*v.witness);
                return emit(explorer::to_json(v), text + "\n");
            };
        } else if (name == "survey") {
            auto opts = survey_opts;
            opts.threads = threads;
            job.request = "n=" + std::to_string(opts.n) + "\ngrowth=" + std::to_string(opts.growth_box) +
                          (opts.n == 3 ? "\nseed=" + std::to_string(opts.seed) + "\nsamples=" + std::to_string(opts.samples)
                                       : "");
            job.compute = [=] {
                std::string text;
                for (const auto& c : explorer::survey(opts)) {
                    if (as_json) {
                        text += explorer::to_json(c).dump() + "\n";
                    } else {
                        text += explorer::to_string(c.status) + "\t" + c.system.to_string() + "\tmax_norm=" +
                                (c.max_norm_seen ? std::to_string(*c.max_norm_seen) : "none") + "\n";
                    }
                }
                return text;
            };
        } else if (name == "semi") {
            const auto eq = poly::parse_equation(equation);
            auto opts = semi_opts;
            opts.start_override = override_start;
            job.request = eq.to_string() + "\nstart=" + (override_start ? std::to_string(*override_start) : "bound") +
                          "\ncutoff=" + std::to_string(opts.cutoff) + "\nnonneg=" + std::to_string(opts.nonneg);
            job.compute = [=] {
                const auto r = explorer::semi_algorithm_infinite(eq.normalized, opts);
                std::string text = explorer::to_string(r.status) + " start=" + r.start;
                if (r.shell) text += " shell=" + std::to_string(*r.shell);
                if (r.witness) text += " witness=" + tuple_text(*r.witness);
                return emit(explorer::to_json(r), text + "\n");
            };
        } else if (name == "gallery") {
            if (gallery_n && kind != "chain" && kind != "thm7") throw DomainError("--n applies to chain and thm7");
            const std::uint32_t n = gallery_n.value_or(kind == "chain" ? 6 : 10);
            job.request = kind + "\nn=" + std::to_string(n) + "\ndepth=" + std::to_string(depth) +
                          "\nassemble=" + std::to_string(assemble);
            job.compute = [=] {
                if (kind == "chain" || kind == "thm7") {
                    const auto s = kind == "chain" ? gallery::build_chain(n) : gallery::build_thm7(n);
                    return emit(ensys::to_json(s), s.to_string() + "\n");
                }
                if (kind == "thm8") {
                    const auto t = gallery::build_thm8(depth);
                    json j = ensys::to_json(t.system);
                    j["depth"] = t.depth;
                    j["base"] = t.base.get_str();
                    j["modulus"] = t.modulus.get_str();
                    std::string text = t.system.to_string() + "\nbase " + t.base.get_str() + "\nmodulus " +
                                       t.modulus.get_str() + "\n";
                    if (assemble) {
                        const auto sol = gallery::assemble_thm8(t);
                        auto sj = json::array();
                        for (std::size_t i = 0; i < sol.size(); ++i) {
                            sj.push_back(sol[i].get_str());
                            text += "x" + std::to_string(i + 1) + " = " + sol[i].get_str() + "\n";
                        }
                        j["solution"] = std::move(sj);
                        j["verified"] = ensys::check_solution(t.system, sol);
                    }
                    return emit(j, text);
                }
                const auto w = gallery::worked_example(threads);
                std::string text = "equation " + w.lowering.source.to_string() + "\n";
                text += "lowered to n=" + std::to_string(w.n) + ", x" + std::to_string(w.fifth_power_var) + " = x1^5\n";
                text += "bound " + w.bound + " = " + w.bound_tower + "\n";
                text += "scan " + std::to_string(w.lower_exclusive) + " < x1 < " + std::to_string(w.upper_exclusive) + "\n";
                text += "solutions";
                for (const auto& [a, b] : w.solutions) text += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
                return emit(gallery::to_json(w), text + "\n");
            };
        }
        job.request = name + "\n" + job.request + "\nformat=" + format;

        if (!cache_dir.empty()) {
            if (auto hit = cache_lookup(cache_dir, job.request)) {
                out << *hit;
                return kExitOk;
            }
        }
        const std::string output = job.compute();
        if (!cache_dir.empty()) cache_store(cache_dir, job.request, output);
        out << output;
        return kExitOk;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "malformed JSON input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace dioph::cli
