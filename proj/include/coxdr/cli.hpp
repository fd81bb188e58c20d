#pragma once

#include "coxdr/io.hpp"
#include "coxdr/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace coxdr::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, verification_failed = 1, invalid_input = 2 };

namespace detail {

struct Selector {
    std::string type;
    int rank = 0;
    int parabolic = 0;
    std::string quotient_file;

    void add_to(CLI::App* cmd) {
        cmd->add_option("-t,--type", type, "Lie type: A, B, C, D, E6 or E7");
        cmd->add_option("-n,--rank", rank, "rank (implied for E6 and E7)");
        cmd->add_option("-p,--parabolic", parabolic,
                        "maximal parabolic P_r (default: B->n, D->1, C->1, A->1, E6->1, E7->7)");
        cmd->add_option("-q,--quotient", quotient_file, "read the quotient from a JSON file instead")->check(CLI::ExistingFile);
    }
    bool given() const { return !type.empty() || !quotient_file.empty(); }
};

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

inline MinusculePair resolve_pair(const Selector& s) {
    MinusculePair p;
    p.type = parse_lie_type(s.type);
    if (p.type == LieType::E6 || p.type == LieType::E7) {
        const int r = p.type == LieType::E6 ? 6 : 7;
        if (s.rank != 0 && s.rank != r)
            throw std::invalid_argument(to_string(p.type) + " has rank " + std::to_string(r));
        p.rank = r;
    } else {
        if (s.rank == 0)
            throw std::invalid_argument("--rank is required for type " + s.type);
        p.rank = s.rank;
    }
    if (s.parabolic != 0)
        p.parabolic = s.parabolic;
    else
        switch (p.type) {
        case LieType::B: p.parabolic = p.rank; break;
        case LieType::E7: p.parabolic = 7; break;
        default: p.parabolic = 1; break;
        }
    validate(p);
    return p;
}

/// The quotient named by the selectors, else the pair recorded in `fallback`.
inline QuotientPtr resolve_quotient(const Selector& s, const json* fallback = nullptr) {
    if (!s.quotient_file.empty()) {
        if (!s.type.empty())
            throw std::invalid_argument("give either --quotient or --type, not both");
        return io::quotient_from_json(read_json(s.quotient_file));
    }
    if (!s.type.empty())
        return build_quotient(resolve_pair(s));
    if (fallback && fallback->is_object() && fallback->contains("type"))
        return build_quotient(io::pair_from_json(*fallback));
    throw std::invalid_argument("no quotient selected (use --type/--rank/--parabolic or --quotient)");
}

inline std::size_t env_limit(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v)
        return fallback;
    try {
        std::size_t pos = 0;
        auto x = std::stoull(v, &pos);
        if (pos != std::string(v).size())
            throw std::invalid_argument(v);
        return static_cast<std::size_t>(x);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(name) + " must be a nonnegative integer, got '" + v + "'");
    }
}

inline void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw std::invalid_argument("cannot write " + path);
    f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string join(const std::vector<std::size_t>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += (i ? "," : "") + std::to_string(xs[i]);
    return s + "]";
}

inline std::string monomial_str(const MinusculeQuotient& q, const Monomial& m) {
    return "x_" + q.label_str(m.first) + " x_" + q.label_str(m.second);
}

} // namespace detail

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace detail;
    CLI::App app{"Coxeter Dressians of minuscule quotients: equations, membership, subdivisions, fans"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "coxdr 1.0");

    Selector sel;
    std::string output, heights_file, repro_dir, method = "enumerate", format;
    std::vector<std::string> names;
    bool as_json = false, missing_inf = false, allow_large = false, exhaustive = false, list = false;
    bool full = false;
    int upto = 0;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::size_t samples = 0;
    std::size_t max_cones = FanOptions{}.max_cones, max_points = SecondaryOptions{}.max_points;
    try {
        max_cones = env_limit("COXDR_MAX_CONES", max_cones);
        max_points = env_limit("COXDR_MAX_POINTS", max_points);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return invalid_input;
    }
    std::string off_file;

    auto* build = app.add_subcommand("build", "emit the quotient (vertices, coordinates, roots, edges) as JSON");
    sel.add_to(build);
    build->add_option("-o,--output", output, "output file (default: stdout)");

    auto* equations = app.add_subcommand("equations", "count or list the strong exchange equations");
    sel.add_to(equations);
    equations->add_option("--upto", upto, "type B only: keep equations with |I^J| <= k");
    equations->add_flag("--full", full, "list every equation");
    equations->add_flag("--json", as_json, "emit the system as JSON");
    equations->add_option("-o,--output", output, "output file (default: stdout)");

    auto* member = app.add_subcommand("member", "decide Dressian membership of a height function");
    sel.add_to(member);
    member->add_option("-H,--heights", heights_file, "height JSON: array in vertex order or object keyed by label")
        ->required()
        ->check(CLI::ExistingFile);
    member->add_flag("--missing-inf", missing_inf, "labels absent from the height object are infinity");
    member->add_option("--upto", upto, "type B only: test against equations with |I^J| <= k");
    member->add_flag("--json", as_json, "machine-readable verdict");

    auto* subdivide = app.add_subcommand("subdivide", "regular subdivision and cell classification");
    sel.add_to(subdivide);
    subdivide->add_option("-H,--heights", heights_file, "height JSON")->required()->check(CLI::ExistingFile);
    subdivide->add_flag("--missing-inf", missing_inf, "labels absent from the height object are infinity");
    subdivide->add_flag("--json", as_json, "emit the cell report as JSON");
    subdivide->add_option("--off", off_file, "write cell boundaries as OFF (3-dimensional subdivisions only)");
    subdivide->add_option("-o,--output", output, "output file (default: stdout)");

    auto* fan = app.add_subcommand("fan", "Dressian fan over finite heights");
    sel.add_to(fan);
    fan->add_option("--upto", upto, "type B only: fan of the equations with |I^J| <= k");
    fan->add_option("--method", method, "enumerate or refine")->check(CLI::IsMember({"enumerate", "refine"}));
    fan->add_option("--max-cones", max_cones, "scale guard (env COXDR_MAX_CONES)");
    fan->add_flag("--allow-large", allow_large, "disable the scale guard");
    fan->add_option("--threads", threads, "worker cap")->check(CLI::PositiveNumber);
    fan->add_flag("--json", as_json, "emit the fan as JSON");
    fan->add_option("-o,--output", output, "output file (default: stdout)");

    auto* secondary = app.add_subcommand("secondary", "secondary fan of the quotient's vertex set");
    sel.add_to(secondary);
    secondary->add_option("--max-points", max_points, "scale guard (env COXDR_MAX_POINTS)");
    secondary->add_flag("--allow-large", allow_large, "disable the scale guard");
    secondary->add_flag("--json", as_json, "emit the fan and its subdivisions as JSON");
    secondary->add_option("-o,--output", output, "output file (default: stdout)");

    auto* verify = app.add_subcommand("verify", "run the named property checks");
    verify->add_option("--name", names, "check to run (repeatable; default: all)");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--samples", samples, "samples per sub-case (0: each check's default)");
    verify->add_flag("--json", as_json, "emit results as JSON lines");
    verify->add_option("--repro-dir", repro_dir, "write a reproducer JSON per failing check here");
    verify->add_flag("--exhaustive", exhaustive,
                     "much larger search budgets for the sampled searches; long-running and not part of acceptance");
    verify->add_flag("--list", list, "list the checks and exit");

    auto* exportc = app.add_subcommand("export", "convert between formats");
    sel.add_to(exportc);
    exportc->add_option("-i,--input", heights_file, "quotient or height JSON to convert")->check(CLI::ExistingFile);
    exportc->add_option("-f,--format", format, "quotient, off, heights-labels or heights-array")
        ->required()
        ->check(CLI::IsMember({"quotient", "off", "heights-labels", "heights-array"}));
    exportc->add_flag("--missing-inf", missing_inf, "labels absent from the height object are infinity");
    exportc->add_option("-o,--output", output, "output file (default: stdout)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << "\n";
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return invalid_input;
    }

    try {
        if (*build) {
            auto q = resolve_quotient(sel);
            emit(out, output, dump(io::to_json(*q)));
            return ok;
        }

        if (*equations) {
            auto q = resolve_quotient(sel);
            auto sys = upto ? equations_up_to(q, upto) : strong_exchange_system(q);
            if (as_json) {
                json j = io::pair_json(q->pair());
                j.update(io::to_json(sys));
                emit(out, output, dump(j));
                return ok;
            }
            std::ostringstream s;
            s << sys.size() << " equation" << (sys.size() == 1 ? "" : "s") << " for " << to_string(q->pair()) << "\n";
            if (full)
                for (const auto& f : sys.equations) {
                    s << f.provenance << ":";
                    for (std::size_t i = 0; i < f.monomials.size(); ++i)
                        s << (i ? " (+) " : " ") << monomial_str(*q, f.monomials[i]);
                    s << "\n";
                }
            emit(out, output, s.str());
            return ok;
        }

        if (*member) {
            auto doc = read_json(heights_file);
            auto q = resolve_quotient(sel, &doc);
            auto mu = io::heights_from_json(*q, doc, missing_inf);
            auto sys = upto ? equations_up_to(q, upto) : strong_exchange_system(q);
            auto v = is_member(mu, sys);
            if (as_json) {
                json j = io::pair_json(q->pair());
                j["member"] = v.member;
                j["equations"] = sys.size();
                if (v.failing) {
                    const auto& f = sys.equations[*v.failing];
                    j["failing"] = {{"index", *v.failing}, {"provenance", f.provenance}};
                }
                out << dump(j);
            } else if (v.member) {
                out << "member of Dr" << to_string(q->pair()) << " (" << sys.size() << " equations satisfied)\n";
            } else {
                const auto& f = sys.equations[*v.failing];
                auto e = evaluate(f, mu);
                out << "NOT a member of Dr" << to_string(q->pair()) << "; fails equation " << *v.failing
                    << " with provenance " << f.provenance << " (minimum " << e.minimum.str() << " attained only by "
                    << monomial_str(*q, f.monomials[e.argmin.front()]) << ")\n";
            }
            return ok;
        }

        if (*subdivide) {
            auto doc = read_json(heights_file);
            auto q = resolve_quotient(sel, &doc);
            auto mu = io::heights_from_json(*q, doc, missing_inf);
            auto c = classify(q, mu);
            if (!off_file.empty())
                emit(out, off_file, io::to_off(*q, c.subdivision));
            if (as_json) {
                emit(out, output, dump(io::to_json(*q, c)));
                return ok;
            }
            std::ostringstream s;
            s << c.reports.size() << " maximal cell" << (c.reports.size() == 1 ? "" : "s") << " in dimension "
              << c.subdivision.dimension << (c.subdivision.is_triangulation ? " (triangulation)" : "") << "; "
              << to_string(c.summary) << "\n";
            for (std::size_t i = 0; i < c.reports.size(); ++i) {
                const auto& r = c.reports[i];
                s << "  cell " << i << ": {";
                for (std::size_t k = 0; k < r.cell.vertices.size(); ++k)
                    s << (k ? ", " : "") << q->label_str(r.cell.vertices[k]);
                s << "} dim " << r.cell.dimension << (r.is_coxeter_matroid ? "" : ", bad edge")
                  << (r.is_strong_matroid ? "" : ", no strong exchange")
                  << (has_antipodal_pair(*q, r.cell.vertices) ? ", antipodal pair" : "")
                  << (r.is_coxeter_matroid && r.is_strong_matroid ? ", strong Coxeter matroid" : "") << "\n";
            }
            emit(out, output, s.str());
            return ok;
        }

        if (*fan) {
            auto q = resolve_quotient(sel);
            auto sys = upto ? equations_up_to(q, upto) : strong_exchange_system(q);
            FanOptions opt;
            opt.max_cones = max_cones;
            opt.allow_large = allow_large;
            opt.threads = threads;
            opt.method = method == "refine" ? PrevarietyMethod::refine : PrevarietyMethod::enumerate;
            auto f = prevariety_fan(sys, opt);
            if (as_json) {
                emit(out, output, dump(io::to_json(f)));
                return ok;
            }
            std::ostringstream s;
            s << "Dr" << to_string(q->pair()) << ": " << sys.size() << " equations, lineality "
              << f.lineality.size() << ", " << f.maximal_cones().size() << " maximal cones, f-vector "
              << join(f.f_vector()) << "\n";
            emit(out, output, s.str());
            return ok;
        }

        if (*secondary) {
            auto q = resolve_quotient(sel);
            SecondaryOptions opt;
            opt.max_points = max_points;
            opt.allow_large = allow_large;
            auto sf = secondary_fan(q->coords(), opt);
            if (as_json) {
                json j = io::to_json(sf.fan);
                json subs = json::object();
                for (const auto& [key, sub] : sf.subdivisions) {
                    json cells = json::array();
                    for (const auto& c : sub.cells)
                        cells.push_back(c.vertices);
                    subs[key] = cells;
                }
                j["subdivisions"] = std::move(subs);
                emit(out, output, dump(j));
                return ok;
            }
            std::size_t chambers = 0;
            for (const auto& c : sf.fan.cones)
                chambers += c.dimension == q->size();
            std::ostringstream s;
            s << "secondary fan of " << to_string(q->pair()) << ": " << chambers << " full-dimensional cones, "
              << sf.subdivisions.size() << " subdivisions, f-vector " << join(sf.fan.f_vector()) << "\n";
            emit(out, output, s.str());
            return ok;
        }

        if (*verify) {
            if (list) {
                for (const auto& c : verify::registry())
                    out << c.name << (c.gating ? "" : " (non-gating)") << ": " << c.claim << "\n";
                return ok;
            }
            std::vector<std::string> todo = names;
            if (todo.empty())
                for (const auto& c : verify::registry())
                    todo.push_back(c.name);
            for (const auto& n : todo)
                verify::find_check(n);
            bool all_ok = true;
            for (const auto& n : todo) {
                auto r = verify::check(n, seed, samples, exhaustive);
                if (r.gating && r.status == verify::Status::fail)
                    all_ok = false;
                if (as_json)
                    out << r.to_json().dump() << "\n";
                else
                    out << (r.status == verify::Status::pass ? "PASS" : r.status == verify::Status::fail ? "FAIL" : "SKIP")
                        << (r.gating ? "  " : "* ") << r.name << "  " << r.details.dump() << "\n";
                out.flush();
                if (r.status == verify::Status::fail && !repro_dir.empty() && !r.counterexample.is_null()) {
                    std::filesystem::create_directories(repro_dir);
                    auto path = std::filesystem::path(repro_dir) / (r.name + ".json");
                    emit(out, path.string(), dump(r.counterexample));
                    err << "reproducer written to " << path.string() << "\n";
                }
            }
            return all_ok ? ok : verification_failed;
        }

        if (*exportc) {
            if (format == "quotient" || format == "off") {
                QuotientPtr q;
                if (!heights_file.empty()) {
                    if (sel.given())
                        throw std::invalid_argument("give either --input or quotient selectors, not both");
                    q = io::quotient_from_json(read_json(heights_file));
                } else {
                    q = resolve_quotient(sel);
                }
                if (format == "quotient") {
                    emit(out, output, dump(io::to_json(*q)));
                } else {
                    HeightFunction zero;
                    zero.values.assign(q->size(), TropicalValue(0L));
                    emit(out, output, io::to_off(*q, regular_subdivision(q, zero)));
                }
                return ok;
            }
            if (heights_file.empty())
                throw std::invalid_argument("--format " + format + " needs --input with a height file");
            auto doc = read_json(heights_file);
            auto q = resolve_quotient(sel, &doc);
            auto mu = io::heights_from_json(*q, doc, missing_inf);
            json j;
            if (format == "heights-labels") {
                j = io::heights_json(*q, mu);
            } else {
                j = io::pair_json(q->pair());
                json hs = json::array();
                for (const auto& v : mu.values)
                    hs.push_back(io::to_json(v));
                j["heights"] = std::move(hs);
            }
            emit(out, output, dump(j));
            return ok;
        }
    } catch (const ScaleGuardError& e) {
        err << "error: " << e.what() << "\n";
        return invalid_input;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return invalid_input;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return invalid_input;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return invalid_input;
    }
    return ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace coxdr::cli
