#include "chw/problem.hpp"

#include "chw/expr.hpp"
#include "chw/groebner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace chw {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& clause, const std::string& msg) { throw InvalidInput(clause + ": " + msg); }

void only_keys(const json& j, const std::string& clause, std::set<std::string> allowed) {
    if (!j.is_object()) bad(clause, "expected an object");
    for (auto& [k, v] : j.items())
        if (!allowed.count(k)) bad(clause, "unknown key '" + k + "'");
}

std::string get_str(const json& j, const std::string& key, const std::string& clause) {
    const json& v = j.at(key);
    if (!v.is_string()) bad(clause + "." + key, "expected a string");
    return v.get<std::string>();
}

long get_int(const json& v, const std::string& clause) {
    if (!v.is_number_integer()) bad(clause, "expected an integer");
    return v.get<long>();
}

StrMatrix get_matrix(const json& v, const std::string& clause) {
    if (!v.is_array()) bad(clause, "expected an array of rows");
    StrMatrix m;
    for (size_t i = 0; i < v.size(); ++i) {
        const json& row = v[i];
        std::string rc = clause + "[" + std::to_string(i) + "]";
        if (!row.is_array()) bad(rc, "expected an array of entries");
        std::vector<std::string> r;
        for (size_t j = 0; j < row.size(); ++j) {
            if (row[j].is_string())
                r.push_back(row[j].get<std::string>());
            else if (row[j].is_number_integer())
                r.push_back(std::to_string(row[j].get<long>()));
            else
                bad(rc + "[" + std::to_string(j) + "]", "expected a string or integer");
        }
        m.push_back(std::move(r));
    }
    return m;
}

json matrix_json(const StrMatrix& m) {
    json a = json::array();
    for (auto& row : m) a.push_back(row);
    return a;
}

FMat parse_matrix(const StrMatrix& m, int n, const RingPtr& r, const std::string& clause, bool forms) {
    if (int(m.size()) != n) bad(clause, "expected " + std::to_string(n) + " rows, got " + std::to_string(m.size()));
    FMat out(r, n, n);
    for (int i = 0; i < n; ++i) {
        if (int(m[i].size()) != n)
            bad(clause + "[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
        for (int j = 0; j < n; ++j) {
            std::string c = clause + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            try {
                out(i, j) = forms ? parse_form(m[i][j], r) : Form(parse_poly(m[i][j], r));
            } catch (const Error& e) {
                bad(c, e.what());
            }
        }
    }
    return out;
}

StrMatrix matrix_strings(const FMat& m) {
    StrMatrix s(m.rows(), std::vector<std::string>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s[i][j] = m(i, j).str();
    return s;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string verdict(const IdentityCheck& c) {
    if (!c.ok) return "no: " + c.detail;
    return c.modulo_relation ? "yes (modulo the relation submodule)" : "yes";
}

std::string degrees_str(const std::vector<long>& d) {
    std::string s = "[";
    for (size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + std::to_string(d[i]);
    return s + "]";
}

}  // namespace

ProblemSpec parse_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        bad("input", std::string("malformed JSON: ") + e.what());
    }
    ProblemSpec s;
    try {
        only_keys(j, "spec", {"name", "ring", "curved", "module", "connection", "options"});
        if (j.contains("name")) s.name = get_str(j, "name", "spec");

        if (!j.contains("ring")) bad("ring", "missing");
        const json& rj = j["ring"];
        only_keys(rj, "ring", {"grading", "variables", "relation"});
        std::string g = rj.contains("grading") ? get_str(rj, "grading", "ring") : "Z2";
        if (g == "Z")
            s.grading = Grading::Z;
        else if (g == "Z2" || g == "Z/2")
            s.grading = Grading::Z2;
        else
            bad("ring.grading", "expected \"Z\" or \"Z2\", got \"" + g + "\"");
        if (!rj.contains("variables") || !rj["variables"].is_array()) bad("ring.variables", "expected an array");
        for (size_t i = 0; i < rj["variables"].size(); ++i) {
            const json& v = rj["variables"][i];
            std::string c = "ring.variables[" + std::to_string(i) + "]";
            if (v.is_string()) {
                s.variables.push_back({v.get<std::string>(), 0});
                continue;
            }
            only_keys(v, c, {"name", "degree"});
            if (!v.contains("name")) bad(c, "missing name");
            s.variables.push_back({get_str(v, "name", c), v.contains("degree") ? get_int(v["degree"], c + ".degree") : 0});
        }
        if (rj.contains("relation")) s.relation = get_str(rj, "relation", "ring");

        if (j.contains("curved")) {
            only_keys(j["curved"], "curved", {"h"});
            if (j["curved"].contains("h")) s.h = get_str(j["curved"], "h", "curved");
        }

        if (!j.contains("module")) bad("module", "missing");
        const json& mj = j["module"];
        only_keys(mj, "module", {"degrees", "idempotent", "delta"});
        if (!mj.contains("degrees") || !mj["degrees"].is_array()) bad("module.degrees", "expected an array");
        for (size_t i = 0; i < mj["degrees"].size(); ++i)
            s.degrees.push_back(get_int(mj["degrees"][i], "module.degrees[" + std::to_string(i) + "]"));
        if (mj.contains("idempotent")) s.idempotent = get_matrix(mj["idempotent"], "module.idempotent");
        if (mj.contains("delta")) s.delta = get_matrix(mj["delta"], "module.delta");

        if (j.contains("connection")) {
            const json& cj = j["connection"];
            only_keys(cj, "connection", {"kind", "mu"});
            if (cj.contains("kind")) s.connection = get_str(cj, "kind", "connection");
            if (s.connection != "levi-civita" && s.connection != "explicit")
                bad("connection.kind", "expected \"levi-civita\" or \"explicit\"");
            if (cj.contains("mu")) s.mu = get_matrix(cj["mu"], "connection.mu");
            if (s.connection == "explicit" && !s.mu) bad("connection.mu", "required for an explicit connection");
            if (s.connection == "levi-civita" && s.mu) bad("connection.mu", "only allowed for an explicit connection");
        }

        if (j.contains("options")) {
            const json& oj = j["options"];
            only_keys(oj, "options", {"milnor", "bound", "seed"});
            if (oj.contains("milnor")) {
                if (!oj["milnor"].is_boolean()) bad("options.milnor", "expected a boolean");
                s.milnor = oj["milnor"].get<bool>();
            }
            if (oj.contains("bound")) {
                s.bound = int(get_int(oj["bound"], "options.bound"));
                if (s.bound < 0) bad("options.bound", "must be non-negative");
            }
            if (oj.contains("seed")) s.seed = std::uint64_t(get_int(oj["seed"], "options.seed"));
        }
    } catch (const json::exception& e) {
        bad("spec", e.what());
    }
    return s;
}

ProblemSpec load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string spec_to_json(const ProblemSpec& s) {
    json j;
    if (!s.name.empty()) j["name"] = s.name;
    json vars = json::array();
    for (auto& v : s.variables) vars.push_back(json{{"name", v.name}, {"degree", v.degree}});
    j["ring"] = json{{"grading", s.grading == Grading::Z ? "Z" : "Z2"}, {"variables", vars}};
    if (!s.relation.empty()) j["ring"]["relation"] = s.relation;
    j["curved"] = json{{"h", s.h}};
    j["module"] = json{{"degrees", s.degrees}};
    if (s.idempotent) j["module"]["idempotent"] = matrix_json(*s.idempotent);
    if (!s.delta.empty()) j["module"]["delta"] = matrix_json(s.delta);
    j["connection"] = json{{"kind", s.connection}};
    if (s.mu) j["connection"]["mu"] = matrix_json(*s.mu);
    j["options"] = json{{"milnor", s.milnor}, {"bound", s.bound}, {"seed", s.seed}};
    return j.dump(2) + "\n";
}

Problem build_problem(const ProblemSpec& s) {
    Problem p;
    p.spec = s;
    RingPtr free;
    try {
        free = GradedRing::make(s.grading, s.variables);
    } catch (const Error& e) {
        bad("ring.variables", e.what());
    }
    p.ring = free;
    if (!s.relation.empty()) {
        try {
            p.ring = GradedRing::quotient(free, parse_poly(s.relation, free).terms());
        } catch (const Error& e) {
            bad("ring.relation", e.what());
        }
    }
    RingElement h;
    try {
        h = parse_poly(s.h, p.ring);
    } catch (const Error& e) {
        bad("curved.h", e.what());
    }
    p.algebra = CurvedAlgebra{p.ring, h};
    int n = int(s.degrees.size());
    if (n == 0) bad("module.degrees", "module has no basis");
    FMat e = s.idempotent ? parse_matrix(*s.idempotent, n, p.ring, "module.idempotent", false) : FMat::identity(p.ring, n);
    FMat delta = s.delta.empty() ? FMat(p.ring, n, n) : parse_matrix(s.delta, n, p.ring, "module.delta", false);
    p.module = CurvedModule{s.degrees, e, delta};
    p.check = check_module(p.module, p.algebra);
    for (auto& f : p.check.failures)
        if (f.rfind("delta^2", 0) != 0) bad("module", f);
    if (s.mu) {
        FMat mu = parse_matrix(*s.mu, n, p.ring, "connection.mu", true);
        p.connection = with_mu(p.module, mu);
        auto f = check_connection(p.connection);
        if (!f.empty()) bad("connection.mu", f.front());
    } else {
        p.connection = levi_civita(p.module);
    }
    return p;
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw Error("sha256 failed");
    std::ostringstream o;
    for (unsigned i = 0; i < len; ++i) o << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return o.str();
}

std::map<int, std::string> u_coefficients(const Form& w) {
    std::map<int, std::string> out;
    for (int J = 0; J <= w.max_u(); ++J) {
        Form c = w.coeff_u(J);
        if (!c.is_zero()) out[J] = c.str();
    }
    if (out.empty()) out[0] = "0";
    return out;
}

Report analyze(const Problem& p, const AnalyzeOptions& opt) {
    Report r;
    const auto& s = p.spec;
    r.name = s.name;
    r.echo = spec_to_json(s);
    r.sha256 = sha256_hex(r.echo);
    r.ring = p.ring->describe();
    r.h = p.algebra.h.str();
    r.degrees = s.degrees;
    r.free_module = p.module.e == FMat::identity(p.ring, p.module.size());
    int bound = opt.bound ? *opt.bound : s.bound;
    auto fail = [&](int code, const std::string& why) {
        if (r.exit_code == kPass || code > r.exit_code) {
            r.exit_code = code;
            r.failure = why;
        }
    };

    if (p.check.realized) {
        r.realized = p.check.realized->str();
        r.delta_sq = p.check.realized->is_zero() ? "0" : "(" + *r.realized + ")*e";
    } else {
        r.delta_sq = "not a multiple of e";
    }
    if (!p.check.ok) {
        std::string why;
        for (auto& f : p.check.failures) why += (why.empty() ? "" : "; ") + f;
        fail(kIdentityFailure, "check_module: " + why);
        return r;
    }

    try {
        auto t = Clock::now();
        r.flat = nabla_squared(p.connection).is_zero();
        r.timing.push_back({"curvature", since(t)});
        t = Clock::now();
        r.ch_weil = chern_weil(p.connection);
        r.timing.push_back({"chern_weil", since(t)});
        t = Clock::now();
        r.ch_chains = chern_via_chains(p.connection);
        if (opt.fault_inject) r.ch_chains += Form::scalar(p.ring, 1);
        r.timing.push_back({"chern_via_chains", since(t)});

        t = Clock::now();
        r.routes = zero_check({r.ch_weil - r.ch_chains}, p.ring, "chern_weil - chern_via_chains", bound);
        if (!r.routes.ok) fail(kInternalFailure, "route mismatch: " + r.routes.detail);
        r.cycle = cycle_check(r.ch_weil, p.algebra.h, bound);
        if (!r.cycle.ok) fail(kIdentityFailure, "cycle check: " + r.cycle.detail);
        r.commutator = commutator_check(p.connection, p.algebra.h, bound);
        if (!r.commutator.ok) fail(kIdentityFailure, "[D, R] = dh check: " + r.commutator.detail);
        r.timing.push_back({"identity checks", since(t)});
    } catch (const NonLinearCurvature& e) {
        fail(kInternalFailure, e.what());
        return r;
    }

    if (opt.milnor || s.milnor) {
        if (p.ring->has_relation())
            r.milnor = "unavailable over a quotient ring";
        else if (p.algebra.h.is_constant())
            r.milnor = "unavailable: h is constant";
        else {
            Form top = r.ch_weil.coeff_u(0).form_part(p.ring->nvars());
            auto mr = milnor_number(p.algebra.h);
            std::string dim = mr.infinite ? "infinite" : std::to_string(mr.mu);
            r.milnor = milnor_representative(top, p.algebra.h).str() + " (Milnor algebra dimension " + dim + ")";
        }
    }
    return r;
}

std::string report_text(const Report& r, bool timing) {
    std::ostringstream o;
    if (!r.name.empty()) o << "problem: " << r.name << "\n";
    o << "input sha256: " << r.sha256 << "\n";
    o << "ring: " << r.ring << "\n";
    o << "h: " << r.h << "\n";
    o << "module: rank " << r.degrees.size() << ", degrees " << degrees_str(r.degrees) << ", "
      << (r.free_module ? "free" : "projective summand") << "\n";
    o << "delta^2: " << r.delta_sq << "\n";
    if (r.exit_code == kIdentityFailure && r.failure.rfind("check_module", 0) == 0) {
        o << "status: FAIL (exit " << r.exit_code << ")\n" << "failure: " << r.failure << "\n";
        return o.str();
    }
    o << "curvature nabla^2: " << (r.flat ? "zero (flat)" : "nonzero") << "\n";
    o << "chern character (Chern-Weil):\n";
    for (auto& [J, c] : u_coefficients(r.ch_weil)) o << "  u^" << J << ": " << c << "\n";
    o << "chern character (chains):\n";
    for (auto& [J, c] : u_coefficients(r.ch_chains)) o << "  u^" << J << ": " << c << "\n";
    o << "routes agree: " << verdict(r.routes) << "\n";
    o << "cycle (ud + dh)ch = 0: " << verdict(r.cycle) << "\n";
    o << "[u nabla + delta, R] = dh*e: " << verdict(r.commutator) << "\n";
    if (r.milnor) o << "milnor representative of u^0 top form: " << *r.milnor << "\n";
    if (timing)
        for (auto& [k, v] : r.timing) o << "time " << k << ": " << std::fixed << std::setprecision(3) << v << " s\n";
    if (r.exit_code == kPass)
        o << "status: pass\n";
    else
        o << "status: FAIL (exit " << r.exit_code << ")\nfailure: " << r.failure << "\n";
    return o.str();
}

std::string report_json(const Report& r, bool timing) {
    json j;
    if (!r.name.empty()) j["name"] = r.name;
    j["input"] = json::parse(r.echo);
    j["sha256"] = r.sha256;
    j["ring"] = r.ring;
    j["h"] = r.h;
    j["degrees"] = r.degrees;
    j["free"] = r.free_module;
    j["delta_squared"] = r.delta_sq;
    if (r.realized) j["realized_curvature"] = *r.realized;
    auto check_json = [](const IdentityCheck& c) {
        json x{{"ok", c.ok}, {"modulo_relation", c.modulo_relation}};
        if (!c.detail.empty()) x["detail"] = c.detail;
        return x;
    };
    auto coeffs = [](const Form& w) {
        json x = json::object();
        for (auto& [J, c] : u_coefficients(w)) x["u^" + std::to_string(J)] = c;
        return x;
    };
    if (!r.ch_weil.is_zero() || !r.ch_chains.is_zero() || r.routes.ok) {
        j["flat"] = r.flat;
        j["chern_weil"] = coeffs(r.ch_weil);
        j["chern_via_chains"] = coeffs(r.ch_chains);
        j["verdicts"] = json{{"routes_agree", check_json(r.routes)},
                             {"cycle", check_json(r.cycle)},
                             {"commutator", check_json(r.commutator)}};
    }
    if (r.milnor) j["milnor"] = *r.milnor;
    if (timing) {
        json t = json::object();
        for (auto& [k, v] : r.timing) t[k] = v;
        j["timing"] = t;
    }
    j["exit_code"] = r.exit_code;
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- examples

namespace {

FMat M4(const RingPtr& r, const std::vector<std::string>& v, const Scalar& s = 1) {
    FMat m(r, 4, 4);
    for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = parse_form(v[i], r) * s;
    return m;
}

ProblemSpec s4_spec() {
    ProblemSpec s;
    s.name = "s4-nonflat";
    s.grading = Grading::Z2;
    for (int i = 1; i <= 5; ++i) s.variables.push_back({"x" + std::to_string(i), 0});
    s.relation = "x1^2+x2^2+x3^2+x4^2+x5^2-1";
    s.h = "-(1-x1)^2*(x2*x3+x4*x5)";
    auto fr = GradedRing::make(s.grading, s.variables);
    auto r = GradedRing::quotient(fr, parse_poly(s.relation, fr).terms());
    Scalar half = Scalar::frac(1, 2);
    FMat e = M4(r, {"1-x1", "-x2-i*x3", "x4+i*x5", "0", "-x2+i*x3", "1+x1", "0", "x4+i*x5", "x4-i*x5", "0", "1+x1",
                    "x2+i*x3", "0", "x4-i*x5", "x2-i*x3", "1-x1"},
                half);
    FMat U = M4(r, {"1-x1", "-x2-i*x3", "x4+i*x5", "0", "0", "x4-i*x5", "x2-i*x3", "1-x1", "x2-i*x3", "1-x1", "0",
                    "-x4-i*x5", "-x4+i*x5", "0", "1-x1", "-x2-i*x3"},
                half);
    FMat T = M4(r, {"1-x1", "0", "x2+i*x3", "-x4-i*x5", "-x2+i*x3", "x4+i*x5", "1-x1", "0", "x4-i*x5", "x2+i*x3", "0",
                    "1-x1", "0", "1-x1", "-x4+i*x5", "-x2+i*x3"});
    FMat C = M4(r, {"0", "0", "1", "0", "0", "0", "0", "1", "1", "0", "0", "0", "0", "1", "0", "0"});
    FMat al = M4(r, {"x2", "-x4", "0", "0", "x5", "x3", "0", "0", "0", "0", "x2", "-x4", "0", "0", "x5", "x3"});
    FMat be = M4(r, {"x3", "x4", "0", "0", "-x5", "x2", "0", "0", "0", "0", "x3", "x4", "0", "0", "-x5", "x2"});
    FMat ep = FMat::identity(r, 4) - e;
    FMat d12 = e * T * be * C * U * ep, d21 = ep * T * C * al * U * e;
    FMat E(r, 8, 8), D(r, 8, 8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            E(i, j) = e(i, j);
            E(i + 4, j + 4) = ep(i, j);
            D(i, j + 4) = d12(i, j);
            D(i + 4, j) = d21(i, j);
        }
    s.degrees = {0, 0, 0, 0, 1, 1, 1, 1};
    s.idempotent = matrix_strings(E);
    s.delta = matrix_strings(D);
    return s;
}

}  // namespace

const std::vector<std::string>& example_names() {
    static const std::vector<std::string> names{"mf-xy", "a1-ci", "s4-nonflat", "classical-free", "sphere-bundle"};
    return names;
}

Example builtin_example(const std::string& name) {
    Example ex;
    ex.name = name;
    ProblemSpec& s = ex.spec;
    s.name = name;
    if (name == "mf-xy") {
        s.variables = {{"x", 0}, {"y", 0}};
        s.h = "-x*y";
        s.degrees = {0, 1};
        s.delta = {{"0", "x"}, {"y", "0"}};
        s.milnor = true;
        ex.golden.ch = {{0, "d(x)*d(y)"}};
        ex.golden.realized = "x*y";
        ex.golden.flat = true;
        ex.golden.milnor = "1";
    } else if (name == "a1-ci") {
        s.grading = Grading::Z;
        s.variables = {{"x", 0}, {"T", 2}};
        s.h = "-x^2*T";
        s.degrees = {0, 1};
        s.delta = {{"0", "x"}, {"x*T", "0"}};
        ex.golden.ch = {{0, "x*d(x)*d(T)"}};
        ex.golden.realized = "x^2*T";
        ex.golden.flat = true;
    } else if (name == "s4-nonflat") {
        s = s4_spec();
        ex.golden.realized = "(1-x1)^2*(x2*x3+x4*x5)";
        ex.golden.flat = false;
    } else if (name == "classical-free") {
        s.variables = {{"x", 0}, {"y", 0}};
        s.degrees = {0, 0};
        ex.golden.ch = {{0, "2"}};
        ex.golden.realized = "0";
        ex.golden.flat = true;
    } else if (name == "sphere-bundle") {
        s.variables = {{"x1", 0}, {"x2", 0}, {"x3", 0}};
        s.relation = "x1^2+x2^2+x3^2-1";
        s.degrees = {0, 0};
        s.idempotent = StrMatrix{{"(1-x1)/2", "(-x2-i*x3)/2"}, {"(-x2+i*x3)/2", "(1+x1)/2"}};
        ex.golden.ch = {{0, "1"}};
        ex.golden.realized = "0";
        ex.golden.flat = false;
    } else {
        std::string all;
        for (auto& n : example_names()) all += (all.empty() ? "" : ", ") + n;
        throw InvalidInput("unknown example '" + name + "' (available: " + all + ")");
    }
    return ex;
}

std::vector<std::string> golden_diff(const Problem& p, const Report& r, const Golden& g) {
    std::vector<std::string> out;
    for (auto& [J, want] : g.ch) {
        Form w = parse_form(want, p.ring);
        for (auto [label, ch] : {std::pair{"chern_weil", &r.ch_weil}, std::pair{"chern_via_chains", &r.ch_chains}}) {
            Form got = ch->coeff_u(J);
            if (!(got == w))
                out.push_back(std::string(label) + " u^" + std::to_string(J) + ": expected " + w.str() + ", got " +
                              got.str() + " (got - expected = " + (got - w).str() + ")");
        }
    }
    if (g.realized) {
        RingElement w = parse_poly(*g.realized, p.ring);
        if (!p.check.realized || !(*p.check.realized == w))
            out.push_back("realized curvature: expected " + w.str() + ", got " + (r.realized ? *r.realized : "none"));
    }
    if (g.flat && *g.flat != r.flat)
        out.push_back(std::string("flatness: expected ") + (*g.flat ? "flat" : "nonflat") + ", got " +
                      (r.flat ? "flat" : "nonflat"));
    if (g.milnor) {
        RingElement w = parse_poly(*g.milnor, p.ring);
        if (!r.milnor || r.milnor->rfind(w.str() + " (", 0) != 0)
            out.push_back("milnor representative: expected " + w.str() + ", got " + (r.milnor ? *r.milnor : "none"));
    }
    return out;
}

// ---------------------------------------------------------------- random instances

namespace {

struct Gen {
    std::mt19937_64 rng;
    RingPtr ring;
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    // homogeneous polynomial of Gamma-degree deg with polynomial degree <= maxdeg
    RingElement homogeneous(long deg, int maxdeg, int terms) {
        std::vector<Mono> pool;
        for (Mono m : monomials_up_to(ring->nvars(), maxdeg))
            if (ring->same_degree(ring->mono_degree(m), deg)) pool.push_back(m);
        std::vector<Term> t;
        if (pool.empty()) return RingElement(ring, 0);
        for (int k = 0; k < terms; ++k) {
            long c = pick(-3, 3);
            if (c == 0) c = 1;
            t.push_back({pool[pick(0, int(pool.size()) - 1)], Scalar(c)});
        }
        return RingElement::from_terms(ring, t);
    }
};

}  // namespace

ProblemSpec random_spec(std::uint64_t seed, int index) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index)};
    Gen g{std::mt19937_64(seq), nullptr};
    ProblemSpec s;
    s.name = "random-" + std::to_string(seed) + "-" + std::to_string(index);
    s.seed = seed;
    s.grading = index % 2 ? Grading::Z : Grading::Z2;
    int nv = g.pick(1, 3);
    const char* names[] = {"x", "y", "z"};
    for (int i = 0; i < nv; ++i) s.variables.push_back({names[i], s.grading == Grading::Z ? 2L * g.pick(0, 1) : 0L});
    if (s.grading == Grading::Z) s.variables[g.pick(0, nv - 1)].degree = 2;
    g.ring = GradedRing::make(s.grading, s.variables);
    const RingPtr& r = g.ring;

    // kinds: 0 rank-2 Koszul, 1 rank-4 Koszul, 2 rank-2 Koszul inside a free module of size 3-4, 3 classical
    int kind = g.pick(0, 3);
    int pairs = kind == 1 ? 2 : 1;
    std::vector<RingElement> a, b;
    RingElement h(r, 0);
    for (int k = 0; k < pairs; ++k) {
        a.push_back(g.homogeneous(0, 2, g.pick(1, 2)));
        b.push_back(g.homogeneous(2, 2, g.pick(1, 2)));
        h -= a.back() * b.back();
    }
    std::vector<long> deg;
    FMat delta;
    if (kind == 3) {
        int n = g.pick(1, 3);
        for (int i = 0; i < n; ++i) deg.push_back(s.grading == Grading::Z ? -g.pick(0, 1) : g.pick(0, 1));
        delta = FMat(r, n, n);
        h = RingElement(r, 0);
    } else if (pairs == 1) {
        deg = {0, -1};
        delta = FMat(r, 2, 2);
        delta(1, 0) = Form(a[0]);
        delta(0, 1) = Form(b[0]);
    } else {
        // exterior algebra on e1, e2: basis 1, e1, e2, e1e2; delta = sum a_i e_i^ + b_i contraction
        deg = {0, -1, -1, -2};
        delta = FMat(r, 4, 4);
        delta(1, 0) = Form(a[0]);
        delta(2, 0) = Form(a[1]);
        delta(3, 1) = Form(-a[1]);
        delta(3, 2) = Form(a[0]);
        delta(0, 1) = Form(b[0]);
        delta(0, 2) = Form(b[1]);
        delta(1, 3) = Form(-b[1]);
        delta(2, 3) = Form(b[0]);
    }
    int core = int(deg.size());
    int extra = kind == 2 ? g.pick(1, 2) : (kind == 3 && core < 4 ? g.pick(0, 1) : 0);
    for (int k = 0; k < extra; ++k) deg.push_back(s.grading == Grading::Z ? -g.pick(0, 1) : g.pick(0, 1));
    int n = int(deg.size());
    FMat e0(r, n, n), d0(r, n, n);
    for (int i = 0; i < core; ++i) {
        e0(i, i) = Form::scalar(r, 1);
        for (int j = 0; j < core; ++j) d0(i, j) = delta(i, j);
    }
    FMat e = e0, d = d0;
    if (extra > 0 || (kind == 3 && g.pick(0, 1))) {
        // unipotent change of basis, homogeneous of degree 0
        FMat N(r, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (g.pick(0, 1)) N(i, j) = Form(g.homogeneous(deg[i] - deg[j], 1, 1));
        FMat I = FMat::identity(r, n), inv = I, P = I;
        for (int k = 1; k < n; ++k) {
            P = P * N;
            inv = (k % 2) ? inv - P : inv + P;
        }
        FMat gm = I + N;
        e = gm * e0 * inv;
        d = gm * d0 * inv;
    }
    s.h = h.str();
    s.degrees = deg;
    if (!(e == FMat::identity(r, n))) s.idempotent = matrix_strings(e);
    if (!d.is_zero()) s.delta = matrix_strings(d);
    if (g.pick(0, 1)) {
        FMat mu(r, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!g.pick(0, 2)) continue;
                int k = g.pick(0, nv - 1);
                RingElement c = g.homogeneous(deg[i] - deg[j] - s.variables[k].degree, 1, 1);
                mu(i, j) = Form(c) * Form::dx(r, k);
            }
        mu = e * mu * e;
        if (!mu.is_zero()) {
            s.connection = "explicit";
            s.mu = matrix_strings(mu);
        }
    }
    return s;
}

}  // namespace chw
