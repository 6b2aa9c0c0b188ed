#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "deltarep/errors.hpp"
#include "deltarep/eval.hpp"
#include "deltarep/io.hpp"
#include "deltarep/oracles.hpp"
#include "deltarep/parser.hpp"
#include "deltarep/provenance.hpp"
#include "deltarep/repair.hpp"
#include "deltarep/report.hpp"

namespace deltarep {
namespace {

struct RepairArgs {
    std::string data;
    std::string program_path;
    std::string semantics = "all";
    std::optional<double> budget;
    std::uint64_t seed = 0;
    std::string apply_dir;
    std::string report_path;
    std::string dump_cnf;
    std::string dump_graph;
    std::vector<std::string> init_delete;
    bool no_timing = false;
};

struct VerifyArgs {
    std::string data;
    std::string program_path;
    std::string set_path;
};

struct BenchArgs {
    std::string template_name = "cascade";
    std::uint64_t scale = 1000;
    std::uint64_t seed = 1;
    std::string semantics = "all";
    std::optional<double> budget;
    std::string report_path;
    bool no_timing = false;
};

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return std::move(out).str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write " + path);
}

DeltaProgram load_program(const DatabaseInstance& db, const std::string& path,
                          const std::vector<std::string>& init_delete) {
    ParseResult pr = parse_program(read_text_file(path), db.schema());
    if (!pr.ok()) throw FormatError(path + ":\n" + format_errors(pr.errors));
    DeltaProgram program = std::move(*pr.program);
    for (const std::string& label : init_delete) {
        auto id = db.parse_label(label);
        if (!id) throw FormatError("--init-delete: unknown tuple '" + label + "'");
        DeltaRule r = make_init_rule(db, *id);
        r.rule_id = static_cast<std::uint32_t>(program.rules.size());
        program.rules.push_back(std::move(r));
    }
    return program;
}

RepairResult run_one(const std::string& semantics, const DeltaProgram& program,
                     const DatabaseInstance& db, std::optional<double> budget) {
    if (semantics == "end") return run_end(program, db);
    if (semantics == "stage") return run_stage(program, db);
    if (semantics == "step") return run_step_greedy(program, db);
    return run_independent(program, db, budget);
}

int run_repair(const RepairArgs& a) {
    // A directory with delta files is a past repair; its live side is the
    // initial state of this one.
    DatabaseInstance db = strip_deleted(load_directory(a.data));
    DeltaProgram program = load_program(db, a.program_path, a.init_delete);

    if (!a.dump_cnf.empty()) {
        std::ofstream out(a.dump_cnf, std::ios::binary);
        if (!out) throw IoError("cannot write " + a.dump_cnf);
        write_formula_dimacs(build_formula(program, db), db, out);
    }
    if (!a.dump_graph.empty()) {
        std::ofstream out(a.dump_graph, std::ios::binary);
        if (!out) throw IoError("cannot write " + a.dump_graph);
        write_graph_dot(build_graph(program, db), db, out);
    }

    nlohmann::ordered_json report;
    bool budget_hit = false;
    if (a.semantics == "all") {
        if (!a.apply_dir.empty())
            throw FormatError("--apply needs a single semantics, not 'all'");
        AllResults all = run_all(program, db, a.budget);
        budget_hit = a.budget.has_value() && !all.independent.optimal;
        report = report_json(all, db, !a.no_timing);
    } else {
        RepairResult r = run_one(a.semantics, program, db, a.budget);
        budget_hit = a.semantics == "ind" && a.budget.has_value() && !r.optimal;
        report = report_json(r, db, !a.no_timing);
        if (!a.apply_dir.empty()) save_directory(apply_deletion(db, r.deleted), a.apply_dir);
    }

    std::string text = report_text(report);
    if (a.report_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(a.report_path, text);
        std::cout << "report written to " << a.report_path << "\n";
    }
    return budget_hit ? 4 : 0;
}

int run_verify(const VerifyArgs& a) {
    DatabaseInstance db = strip_deleted(load_directory(a.data));
    DeltaProgram program = load_program(db, a.program_path, {});

    std::vector<TupleId> set;
    std::istringstream in(read_text_file(a.set_path));
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        auto end = line.find_last_not_of(" \t\r");
        std::string label = line.substr(begin, end - begin + 1);
        auto id = db.parse_label(label);
        if (!id) throw FormatError(a.set_path + ": unknown tuple '" + label + "'");
        set.push_back(*id);
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());

    DatabaseInstance after = apply_deletion(db, set);
    auto witness = stability_witness(program, after);
    if (!witness) {
        std::cout << "stabilizing (" << set.size() << " deleted)\n";
        return 0;
    }
    std::cout << "not stabilizing: rule (" << witness->rule_id << ") fires on";
    for (const AtomImage& img : witness->atom_images)
        std::cout << ' ' << (img.is_delta ? "-" : "") << after.label(img.id);
    std::cout << "\n";
    return 1;
}

void print_bench_row(const RepairResult& r) {
    std::string phases;
    for (const PhaseTiming& p : r.phases) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%s=%.3f", phases.empty() ? "" : " ", p.name.c_str(),
                      p.seconds);
        phases += buf;
    }
    std::printf("%-12s %8zu %8llu %9.3f   %s\n", to_string(r.semantics), r.deleted.size(),
                static_cast<unsigned long long>(r.rounds_or_steps), r.wall_seconds,
                phases.c_str());
}

int run_bench(const BenchArgs& a) {
    GeneratedInstance gi = generate_instance(a.template_name, a.scale, a.seed);
    std::printf("template=%s scale=%llu seed=%llu: %zu tuples, %zu rules\n",
                a.template_name.c_str(), static_cast<unsigned long long>(a.scale),
                static_cast<unsigned long long>(a.seed), gi.db.live_count(),
                gi.program.rules.size());
    std::printf("%-12s %8s %8s %9s   %s\n", "semantics", "deleted", "rounds", "total_s",
                "phases");

    nlohmann::ordered_json report;
    bool budget_hit = false;
    if (a.semantics == "all") {
        AllResults all = run_all(gi.program, gi.db, a.budget);
        for (const RepairResult* r : {&all.end_state, &all.stage, &all.step, &all.independent})
            print_bench_row(*r);
        budget_hit = a.budget.has_value() && !all.independent.optimal;
        report = report_json(all, gi.db, !a.no_timing);
    } else {
        RepairResult r = run_one(a.semantics, gi.program, gi.db, a.budget);
        print_bench_row(r);
        budget_hit = a.semantics == "ind" && a.budget.has_value() && !r.optimal;
        report = report_json(r, gi.db, !a.no_timing);
    }
    if (!a.report_path.empty()) write_text_file(a.report_path, report_text(report));
    return budget_hit ? 4 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"delta rule database repair"};
    app.name("deltarep");
    app.require_subcommand(1);

    auto semantics_check = CLI::IsMember({"end", "stage", "step", "ind", "all"});

    RepairArgs ra;
    CLI::App* rep = app.add_subcommand("repair", "run repair semantics over a database");
    rep->add_option("--data", ra.data, "database directory (schema.txt + CSVs)")->required();
    rep->add_option("--program", ra.program_path, "delta rule program file")->required();
    rep->add_option("--semantics", ra.semantics, "end, stage, step, ind or all")
        ->check(semantics_check);
    rep->add_option("--budget", ra.budget, "solver time budget in seconds");
    rep->add_option("--seed", ra.seed, "rng seed (kept for report reproducibility)");
    rep->add_option("--apply", ra.apply_dir, "write the repaired database to this directory");
    rep->add_option("--report", ra.report_path, "write the JSON report here instead of stdout");
    rep->add_option("--dump-cnf", ra.dump_cnf, "write the negated provenance formula as DIMACS");
    rep->add_option("--dump-graph", ra.dump_graph, "write the provenance graph as DOT");
    rep->add_option("--init-delete", ra.init_delete,
                    "tuple label Rel:ordinal to delete unconditionally (repeatable)");
    rep->add_flag("--no-timing", ra.no_timing, "omit timing fields for byte-stable reports");

    VerifyArgs va;
    CLI::App* ver = app.add_subcommand("verify", "check that a deletion set is stabilizing");
    ver->add_option("--data", va.data, "database directory")->required();
    ver->add_option("--program", va.program_path, "delta rule program file")->required();
    ver->add_option("--set", va.set_path, "file with one tuple label per line")->required();

    BenchArgs ba;
    CLI::App* ben = app.add_subcommand("bench", "time the semantics on a generated instance");
    ben->add_option("--template", ba.template_name,
                    "instance family: cascade[-depth-K] or join-chain[-K]");
    ben->add_option("--scale", ba.scale, "approximate tuple count");
    ben->add_option("--seed", ba.seed, "rng seed for instance generation");
    ben->add_option("--semantics", ba.semantics, "end, stage, step, ind or all")
        ->check(semantics_check);
    ben->add_option("--budget", ba.budget, "solver time budget in seconds");
    ben->add_option("--report", ba.report_path, "also write a JSON report here");
    ben->add_flag("--no-timing", ba.no_timing, "omit timing fields from the JSON report");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (rep->parsed()) return run_repair(ra);
        if (ver->parsed()) return run_verify(va);
        return run_bench(ba);
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace deltarep
