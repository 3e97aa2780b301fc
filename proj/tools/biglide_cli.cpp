// Command-line front end: workspace maps, leg-scaling sweeps, dataset
// validation and inspection. Exit codes: 0 success, 1 validation failure,
// 2 parse or I/O error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biglide/biglide.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParseIo = 2;

struct CommonArgs {
    std::string dataset = "ifw";
    std::string model = "simplified";
    int grid = 41;
    double alpha_min = 0.7;
    double alpha_max = 1.3;
    double alpha_step = 0.1;
    int elements = 20;
    std::string out;
    std::string tool_compliance = "off";
};

void add_common_flags(CLI::App* cmd, CommonArgs& args, bool with_model,
                      bool with_grid, bool with_alpha, bool with_elements) {
    cmd->add_option("--dataset", args.dataset,
                    "dataset file path, or 'ifw' for the built-in machine");
    if (with_model)
        cmd->add_option("--model", args.model, "simplified or refined")
            ->check(CLI::IsMember({"simplified", "refined"}));
    if (with_grid)
        cmd->add_option("--grid", args.grid, "number of workspace grid points")
            ->check(CLI::PositiveNumber);
    if (with_alpha) {
        cmd->add_option("--alpha-min", args.alpha_min, "smallest leg scale");
        cmd->add_option("--alpha-max", args.alpha_max, "largest leg scale");
        cmd->add_option("--alpha-step", args.alpha_step, "leg scale increment")
            ->check(CLI::PositiveNumber);
    }
    if (with_elements)
        cmd->add_option("--elements", args.elements,
                        "rigid elements per leg (refined modal)")
            ->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out, "CSV output path (default: stdout)");
    cmd->add_option("--tool-compliance", args.tool_compliance,
                    "include the tool compliance in refined stiffness chains")
        ->check(CLI::IsMember({"on", "off"}));
}

biglide::SweepOptions options_of(const CommonArgs& args) {
    biglide::SweepOptions opt;
    opt.grid_n = args.grid;
    opt.tool_compliance = args.tool_compliance == "on";
    opt.elements = args.elements;
    return opt;
}

void write_records(const std::vector<biglide::SweepRecord>& records,
                   const std::string& out) {
    if (out.empty())
        biglide::emit_csv(records, std::cout);
    else
        biglide::emit_csv(records, out);
}

int run_validate(const std::string& dataset_arg) {
    biglide::MechanismDataset ds;
    if (dataset_arg == "ifw") {
        ds = biglide::builtin_dataset();
    } else {
        std::ifstream is(dataset_arg);
        if (!is) throw biglide::IoError("cannot open '" + dataset_arg + "'");
        ds = biglide::parse_dataset(is);
    }
    const biglide::ValidationReport rep = biglide::validate_dataset(ds);
    for (const auto& w : rep.warnings) std::cout << "warning: " << w << '\n';
    for (const auto& e : rep.errors) std::cout << "error: " << e << '\n';
    std::cout << (rep.ok() ? "dataset valid" : "dataset invalid") << '\n';
    return rep.ok() ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biglide kinetostatic / elastodynamic analysis"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* stiffness = app.add_subcommand(
        "stiffness-map", "deflection under 1000 N loads across the workspace");
    add_common_flags(stiffness, args, true, true, false, false);
    CLI::App* frequency = app.add_subcommand(
        "frequency-map", "natural frequencies across the workspace");
    add_common_flags(frequency, args, true, true, false, true);
    CLI::App* alpha = app.add_subcommand(
        "alpha-sweep", "models vs leg scale at the workspace stations");
    add_common_flags(alpha, args, true, false, true, true);
    CLI::App* validate =
        app.add_subcommand("validate", "run the dataset invariant suite");
    validate->add_option("--dataset", args.dataset,
                         "dataset file path, or 'ifw'");
    CLI::App* show =
        app.add_subcommand("show-dataset", "print a dataset in file format");
    show->add_option("--dataset", args.dataset, "dataset file path, or 'ifw'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitParseIo;
    }

    try {
        if (validate->parsed()) return run_validate(args.dataset);

        const biglide::MechanismDataset ds = biglide::load_dataset(args.dataset);
        if (show->parsed()) {
            biglide::save_dataset(ds, std::cout);
            return kExitOk;
        }

        const bool refined = args.model == "refined";
        const biglide::SweepOptions opt = options_of(args);
        std::vector<biglide::SweepRecord> records;
        if (stiffness->parsed()) {
            records = biglide::stiffness_map(
                ds,
                refined ? biglide::ModelKind::RefinedStiffness
                        : biglide::ModelKind::SimplifiedStiffness,
                opt);
        } else if (frequency->parsed()) {
            records = biglide::frequency_map(
                ds,
                refined ? biglide::ModelKind::RefinedModal
                        : biglide::ModelKind::SimplifiedModal,
                opt);
        } else if (alpha->parsed()) {
            const std::vector<biglide::ModelKind> models =
                refined ? std::vector<biglide::ModelKind>{
                              biglide::ModelKind::RefinedStiffness,
                              biglide::ModelKind::RefinedModal}
                        : std::vector<biglide::ModelKind>{
                              biglide::ModelKind::SimplifiedStiffness,
                              biglide::ModelKind::SimplifiedModal};
            records = biglide::alpha_sweep(ds, models, args.alpha_min,
                                           args.alpha_max, args.alpha_step, opt);
        }
        write_records(records, args.out);
        return kExitOk;
    } catch (const biglide::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParseIo;
    } catch (const biglide::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitParseIo;
    } catch (const biglide::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const biglide::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
