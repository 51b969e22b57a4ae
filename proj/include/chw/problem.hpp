#pragma once

#include "chw/hochschild.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chw {

using StrMatrix = std::vector<std::vector<std::string>>;

struct ProblemSpec {
    std::string name;
    Grading grading = Grading::Z2;
    std::vector<Variable> variables;
    std::string relation;  // empty: none
    std::string h = "0";
    std::vector<long> degrees;
    std::optional<StrMatrix> idempotent;  // absent: identity
    StrMatrix delta;
    std::string connection = "levi-civita";  // or "explicit"
    std::optional<StrMatrix> mu;              // added to Levi-Civita
    bool milnor = false;
    int bound = 6;
    std::uint64_t seed = 0;
};

// JSON with // and /* */ comments allowed. Errors name the offending clause.
ProblemSpec parse_spec(const std::string& text);
ProblemSpec load_spec(const std::string& path);
std::string spec_to_json(const ProblemSpec& s);

struct Problem {
    ProblemSpec spec;
    RingPtr ring;
    CurvedAlgebra algebra;
    CurvedModule module;
    Connection connection;
    ModuleCheck check;
};

// Parses every expression and checks structural invariants (shapes, homogeneity,
// idempotence, e*delta = delta*e = delta, connection form). delta^2 = -h*e is left to analyze().
Problem build_problem(const ProblemSpec& s);

enum ExitCode { kPass = 0, kInvalidInput = 2, kIdentityFailure = 3, kInternalFailure = 4 };

struct AnalyzeOptions {
    bool milnor = false;
    std::optional<int> bound;
    bool fault_inject = false;  // test hook: perturbs the chain route
};

struct Report {
    std::string name;
    std::string echo;  // canonical spec JSON
    std::string sha256;
    std::string ring;
    std::string h;
    std::vector<long> degrees;
    bool free_module = true;
    std::string delta_sq;  // "c*e" description
    std::optional<std::string> realized;
    bool flat = true;
    Form ch_weil, ch_chains;
    IdentityCheck routes, cycle, commutator;
    std::optional<std::string> milnor;
    std::vector<std::pair<std::string, double>> timing;
    int exit_code = kPass;
    std::string failure;
};

Report analyze(const Problem& p, const AnalyzeOptions& opt);
std::string report_text(const Report& r, bool timing);
std::string report_json(const Report& r, bool timing);

// u-power -> form string, one line per nonzero coefficient
std::map<int, std::string> u_coefficients(const Form& w);

std::string sha256_hex(const std::string& data);

// Built-in examples with their expected values.
struct Golden {
    std::map<int, std::string> ch;             // u-power -> expected coefficient (all listed powers compared)
    std::optional<std::string> realized;       // expected c with delta^2 = c*e
    std::optional<bool> flat;
    std::optional<std::string> milnor;
};
struct Example {
    std::string name;
    ProblemSpec spec;
    Golden golden;
};
const std::vector<std::string>& example_names();
Example builtin_example(const std::string& name);
// differences against the golden, empty when matching
std::vector<std::string> golden_diff(const Problem& p, const Report& r, const Golden& g);

// Seeded random instance: <= 3 variables, module size <= 4, entry degree <= 2.
ProblemSpec random_spec(std::uint64_t seed, int index);

}  // namespace chw
