#include "chw/expr.hpp"
#include "chw/groebner.hpp"
#include "chw/problem.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "CLI11.hpp"

using namespace chw;

namespace {

struct Outcome {
    int code = kPass;
    std::string text;
};

Outcome run_problem(const ProblemSpec& spec, const AnalyzeOptions& opt, bool as_json, bool timing,
                    const Golden* golden = nullptr) {
    Outcome out;
    Problem p;
    try {
        p = build_problem(spec);
    } catch (const InvalidInput& e) {
        out.code = kInvalidInput;
        out.text = std::string("invalid input: ") + e.what() + "\n";
        return out;
    }
    Report r = analyze(p, opt);
    out.code = r.exit_code;
    out.text = as_json ? report_json(r, timing) : report_text(r, timing);
    if (golden) {
        auto diff = golden_diff(p, r, *golden);
        if (diff.empty())
            out.text += "golden: match\n";
        else {
            out.text += "golden: MISMATCH\n";
            for (auto& d : diff) out.text += "  " + d + "\n";
            out.code = std::max(out.code, int(kIdentityFailure));
        }
    }
    return out;
}

int cmd_milnor(const std::string& poly, const std::string& vars, long cap) {
    std::vector<Variable> vs;
    std::stringstream ss(vars);
    for (std::string v; std::getline(ss, v, ',');) {
        v.erase(std::remove_if(v.begin(), v.end(), ::isspace), v.end());
        if (!v.empty()) vs.push_back({v, 0});
    }
    auto r = GradedRing::make(Grading::Z2, vs);
    RingElement f = parse_poly(poly, r);
    MilnorResult m;
    try {
        m = milnor_number(f, cap);
    } catch (const ZeroJacobianIdeal& e) {
        throw InvalidInput(e.what());
    }
    std::cout << "f: " << f.str() << "\n";
    std::cout << "jacobian groebner basis:\n";
    for (auto& g : m.gb.gens) std::cout << "  " << g.str() << "\n";
    if (m.infinite) {
        std::cout << "milnor number: infinite\nreason: " << m.note << "\n";
        return kPass;
    }
    std::cout << "standard monomials:";
    for (Mono s : m.standard) std::cout << " " << r->mono_str(s);
    std::cout << "\nmilnor number: " << m.mu << "\n";
    if (!m.note.empty()) std::cout << "note: " << m.note << "\n";
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chern characters of curved modules: Chern-Weil and Hochschild chain routes"};
    app.require_subcommand(1);

    std::string file;
    bool milnor = false, as_json = false, timing = false, fault = false;
    int bound = -1;

    auto* compute = app.add_subcommand("compute", "compute the Chern character of a problem file");
    compute->add_option("file", file, "problem spec (JSON, comments allowed)")->required();
    compute->add_flag("--milnor", milnor, "reduce the u^0 top form in the Milnor algebra of h");
    compute->add_option("--bound", bound, "degree bound for relation-submodule membership");
    compute->add_flag("--json", as_json, "machine-readable output");
    compute->add_flag("--timing", timing, "include wall-clock timings (not byte-stable)");
    compute->add_flag("--fault-inject", fault)->group("");

    int random_n = 0;
    long long seed = -1;
    std::string out_dir = ".";
    int jobs = 1;
    auto* verify = app.add_subcommand("verify", "run the identity suite on a file or on seeded random instances");
    auto* vfile = verify->add_option("file", file, "problem spec");
    auto* vrand = verify->add_option("--random", random_n, "number of random instances");
    auto* vseed = verify->add_option("--seed", seed, "seed (mandatory with --random)");
    vrand->excludes(vfile);
    vrand->needs(vseed);
    verify->add_option("--out-dir", out_dir, "where failing random instances are written");
    verify->add_option("--jobs", jobs, "worker threads for --random")->check(CLI::Range(1, 64));
    verify->add_option("--bound", bound, "degree bound for relation-submodule membership");
    verify->add_flag("--json", as_json, "machine-readable output");
    verify->add_flag("--fault-inject", fault)->group("");

    std::string example;
    auto* examples = app.add_subcommand("examples", "run a built-in example against its expected values");
    examples->add_option("name", example, "mf-xy, a1-ci, s4-nonflat, classical-free, sphere-bundle, or all")->required();
    examples->add_flag("--json", as_json, "machine-readable output");
    examples->add_flag("--timing", timing, "include wall-clock timings");
    std::string dump_dir;
    examples->add_option("--write-spec", dump_dir, "write the example's problem spec into this directory");

    std::string poly, vars;
    long cap = 10000;
    auto* milnor_cmd = app.add_subcommand("milnor", "Milnor number of an isolated singularity");
    milnor_cmd->add_option("poly", poly, "polynomial")->required();
    milnor_cmd->add_option("--vars", vars, "comma-separated variable names")->required();
    milnor_cmd->add_option("--cap", cap, "maximum number of standard monomials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kInvalidInput;
    }

    AnalyzeOptions opt;
    opt.milnor = milnor;
    if (bound >= 0) opt.bound = bound;
    opt.fault_inject = fault;

    try {
        if (*compute) {
            Outcome o = run_problem(load_spec(file), opt, as_json, timing);
            std::cout << o.text;
            return o.code;
        }
        if (*verify) {
            if (random_n <= 0) {
                if (file.empty()) throw InvalidInput("verify needs a file or --random N --seed S");
                Outcome o = run_problem(load_spec(file), opt, as_json, false);
                std::cout << o.text;
                std::cout << "verify: " << (o.code == kPass ? "pass" : "FAIL") << "\n";
                return o.code;
            }
            if (seed < 0) throw InvalidInput("--seed must be a non-negative integer");
            std::vector<ProblemSpec> specs;
            for (int i = 0; i < random_n; ++i) specs.push_back(random_spec(std::uint64_t(seed), i));
            std::vector<Outcome> results(specs.size());
            auto work = [&](size_t i) { return run_problem(specs[i], opt, false, false); };
            for (size_t start = 0; start < specs.size(); start += size_t(jobs)) {
                std::vector<std::future<Outcome>> fs;
                for (size_t i = start; i < std::min(specs.size(), start + size_t(jobs)); ++i)
                    fs.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, work, i));
                for (size_t k = 0; k < fs.size(); ++k) results[start + k] = fs[k].get();
            }
            int worst = kPass, failures = 0;
            for (size_t i = 0; i < results.size(); ++i) {
                const Outcome& o = results[i];
                std::cout << "instance " << i << " (" << specs[i].name << ", size " << specs[i].degrees.size() << ", "
                          << specs[i].variables.size() << " vars): " << (o.code == kPass ? "pass" : "FAIL") << "\n";
                if (o.code != kPass) {
                    ++failures;
                    // generated specs are valid by construction; a rejected one is our bug
                    int code = o.code == kInvalidInput ? int(kInternalFailure) : o.code;
                    worst = std::max(worst, code);
                    std::filesystem::create_directories(out_dir);
                    auto path = std::filesystem::path(out_dir) / (specs[i].name + ".json");
                    std::ofstream(path) << spec_to_json(specs[i]);
                    std::cout << o.text << "  replay: " << path.string() << "\n";
                }
            }
            std::cout << "verify: " << results.size() - failures << "/" << results.size() << " pass\n";
            return worst;
        }
        if (*examples) {
            std::vector<std::string> names =
                example == "all" ? example_names() : std::vector<std::string>{example};
            int worst = kPass;
            for (auto& n : names) {
                Example ex = builtin_example(n);
                if (!dump_dir.empty()) {
                    std::filesystem::create_directories(dump_dir);
                    std::string fname = n;
                    std::replace(fname.begin(), fname.end(), '-', '_');
                    std::ofstream(std::filesystem::path(dump_dir) / (fname + ".json")) << spec_to_json(ex.spec);
                }
                Outcome o = run_problem(ex.spec, opt, as_json, timing, &ex.golden);
                std::cout << o.text;
                if (names.size() > 1) std::cout << "\n";
                worst = std::max(worst, o.code);
            }
            return worst;
        }
        if (*milnor_cmd) return cmd_milnor(poly, vars, cap);
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternalFailure;
    }
    return kPass;
}
