// bwlat: build Barnes–Wall type lattices, run the verification suites and
// print theta slices.
//
// Exit codes: 0 all pass, 1 some check failed, 2 usage error, 3 node budget
// exceeded (theta, or verify/report under --strict).

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bwlat/construct.hpp"
#include "bwlat/suites.hpp"

namespace {

using namespace bwlat;
using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    unsigned threads = 0;
    std::uint64_t budget = kDefaultNodeBudget;
    std::uint64_t seed = RunOptions{}.seed;
    bool heavy = false;
    bool strict = false;
    std::string out;
    std::string format = "text";

    RunOptions run_options() const {
        RunOptions o;
        o.enumeration.threads = threads;
        o.enumeration.node_budget = budget;
        o.seed = seed;
        o.heavy = heavy;
        o.strict = strict;
        return o;
    }
};

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << contents;
}

// A lattice argument is either a profile spec or the path of a basis file.
IntegerLattice load_lattice(const std::string& spec) {
    if (std::filesystem::is_regular_file(spec)) {
        std::ifstream f(spec);
        return read_basis(f);
    }
    return build_lambda(parse_profile_spec(spec));
}

int report_exit(const VerificationReport& report) { return report.any_failed() ? kExitFail : kExitPass; }

void emit_report(const VerificationReport& report, const Common& c) {
    if (!c.out.empty()) write_file(c.out, to_json(report).dump(2) + "\n");
    if (c.format == "json") {
        std::cout << to_json(report).dump(2) << "\n";
    } else {
        std::cout << format_text(report);
    }
}

int cmd_build(const std::string& spec, const Common& c) {
    const LambdaProfile profile = parse_profile_spec(spec);
    const IntegerLattice lattice = build_lambda(profile);
    std::ostringstream basis;
    write_basis(basis, lattice);
    if (c.out.empty()) {
        std::cout << basis.str();
    } else {
        write_file(c.out, basis.str());
    }
    std::ostream& info = c.out.empty() ? std::cerr : std::cout;
    info << "profile " << profile.str() << ", dimension " << lattice.dim() << "\n"
         << "det exponent " << predicted_det_exponent(profile) << "\n"
         << "min exponent " << predicted_min_exponent(profile) << "\n";
    return kExitPass;
}

int cmd_verify(const std::string& suite, const std::string& m_range, const Common& c) {
    const VerificationReport report = run_suite(suite, parse_m_range(m_range), c.run_options());
    emit_report(report, c);
    return report_exit(report);
}

int cmd_theta(const std::string& spec, std::int64_t bound, const Common& c) {
    if (bound < 0) throw UsageError("--bound must be nonnegative");
    const IntegerLattice lattice = load_lattice(spec);
    const ThetaSlice slice = short_vectors(lattice, bound, false, c.run_options().enumeration);
    std::string text;
    if (c.format == "json") {
        text = to_json(slice).dump() + "\n";
    } else {
        std::ostringstream s;
        s << spec << ": norms up to " << bound << " (" << slice.nodes << " nodes)\n";
        for (const auto& [norm, count] : slice.counts) {
            s << "  " << std::left << std::setw(16) << dyadic_factorization(Integer(norm)) << count << "\n";
        }
        text = s.str();
    }
    if (!c.out.empty()) write_file(c.out, text);
    std::cout << text;
    return kExitPass;
}

int cmd_report(const std::string& path, bool rerun, const Common& c) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read '" + path + "'");
    Json j;
    try {
        j = Json::parse(f);
    } catch (const Json::exception& e) {
        throw UsageError(std::string("malformed report: ") + e.what());
    }
    const VerificationReport saved = report_from_json(j);
    const VerificationReport shown = rerun ? rerun_report(saved, c.run_options()) : saved;
    emit_report(shown, c);
    return report_exit(shown);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Barnes–Wall lattice construction and verification"};
    app.require_subcommand(1);
    Common common;

    auto add_enum_flags = [&](CLI::App* cmd) {
        cmd->add_option("--threads", common.threads, "enumeration workers (default: available cores)");
        cmd->add_option("--budget", common.budget, "node budget per enumeration");
    };
    auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", common.out, "output path"); };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", common.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    };
    auto add_suite_flags = [&](CLI::App* cmd) {
        add_enum_flags(cmd);
        add_out(cmd);
        add_format(cmd);
        cmd->add_option("--seed", common.seed, "seed for randomized checks");
        cmd->add_flag("--heavy", common.heavy, "include long-running checks");
        cmd->add_flag("--strict", common.strict, "treat budget exhaustion as an error (exit 3)");
    };

    std::string spec;
    auto* build = app.add_subcommand("build", "write the basis of a profile lattice");
    build->add_option("spec", spec, "profile: 0,0,1 or lambda:M or delta:M")->required();
    add_out(build);

    std::string suite;
    std::string m_range = "1..4";
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
    verify->add_option("--m", m_range, "m range A..B");
    add_suite_flags(verify);

    std::int64_t bound = 0;
    auto* theta = app.add_subcommand("theta", "count lattice vectors by norm");
    theta->add_option("lattice", spec, "profile spec or basis file")->required();
    theta->add_option("--bound", bound, "largest norm counted")->required();
    add_enum_flags(theta);
    add_out(theta);
    add_format(theta);

    std::string path;
    bool rerun = false;
    auto* report = app.add_subcommand("report", "print a saved JSON report");
    report->add_option("path", path, "report file")->required();
    report->add_flag("--rerun", rerun, "rerun every item and compare statuses and counts");
    add_suite_flags(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*build) return cmd_build(spec, common);
        if (*verify) return cmd_verify(suite, m_range, common);
        if (*theta) return cmd_theta(spec, bound, common);
        return cmd_report(path, rerun, common);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
