#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qbias/qbias.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = std::min(s.find(',', pos), s.size());
        if (comma > pos) out.push_back(s.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

int run_sweep_command(const std::string& families, const std::string& measures,
                      qbias::RunConfig rc) {
    rc.families = split_list(families);
    rc.measures = qbias::parse_measures(measures);
    const std::vector<qbias::SweepPoint> points = qbias::run_sweep(rc);
    std::cout << "wrote " << points.size() << " rows to " << rc.out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qubit channel bias functionals: sweeps, plots, verification"};
    app.require_subcommand(1);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "compute functionals over a (family, p) grid");
    std::string families = "dc,ad,bf,pf,bpf";
    std::string measures = "se,ec,ddc,cds,ic,eb";
    qbias::RunConfig rc;
    rc.out_path = "results.csv";
    rc.optimizer.seed = 42;
    sweep_cmd->add_option("--families", families, "comma-separated channel families")
        ->capture_default_str();
    sweep_cmd->add_option("--p-start", rc.p_start, "first noise strength")->capture_default_str();
    sweep_cmd->add_option("--p-end", rc.p_end, "last noise strength")->capture_default_str();
    sweep_cmd->add_option("--p-steps", rc.p_steps, "number of grid points")
        ->capture_default_str();
    sweep_cmd->add_option("--measures", measures, "comma-separated subset of se,ec,ddc,cds,ic,eb")
        ->capture_default_str();
    sweep_cmd->add_option("--restarts", rc.optimizer.restarts, "optimizer restarts per functional")
        ->capture_default_str();
    sweep_cmd->add_option("--max-iterations", rc.optimizer.max_iterations,
                          "simplex iteration cap per restart")
        ->capture_default_str();
    sweep_cmd->add_option("--top-k", rc.optimizer.top_k, "optimizer pairs kept for the EB bounds")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", rc.optimizer.seed, "base RNG seed")->capture_default_str();
    sweep_cmd->add_option("--out", rc.out_path, "output CSV path")->capture_default_str();
    sweep_cmd->add_option("--workers", rc.workers,
                          "worker threads (0: QBIAS_WORKERS env, else hardware)")
        ->capture_default_str();
    sweep_cmd->add_flag("--timing", rc.timing,
                        "fill the wall_ms column (makes reruns non-identical)");
    sweep_cmd->set_config("--config", "", "key=value config file; command-line flags win");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render a plot script from a sweep CSV");
    std::string plot_in = "results.csv";
    std::string plot_out = "figures.script";
    plot_cmd->add_option("--in", plot_in, "input CSV path")->capture_default_str();
    plot_cmd->add_option("--out", plot_out, "output plot-script path")->capture_default_str();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites");
    std::string level = "quick";
    std::uint64_t verify_seed = 42;
    verify_cmd->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}))
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify_seed, "suite RNG seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_cmd->parsed()) return run_sweep_command(families, measures, rc);
        if (plot_cmd->parsed()) {
            qbias::emit_plot_script(plot_in, plot_out);
            std::cout << "wrote plot script to " << plot_out << "\n";
            return 0;
        }
        if (verify_cmd->parsed()) {
            const qbias::VerifyLevel lvl =
                level == "full" ? qbias::VerifyLevel::full : qbias::VerifyLevel::quick;
            const std::vector<qbias::CheckResult> checks = qbias::run_verification(lvl, verify_seed);
            qbias::print_verification_report(std::cout, checks);
            return qbias::verification_passed(checks) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
