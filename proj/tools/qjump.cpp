#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <boost/program_options.hpp>
#include <spdlog/spdlog.h>

#include "qjump/io/commands.hpp"

namespace po = boost::program_options;
using namespace qjump::io;

namespace {

constexpr const char* kUsage =
    "usage: qjump <command> [options]\n"
    "\n"
    "commands:\n"
    "  run      run every configured cell and write CSV results\n"
    "  analyze  fit and test results in a directory (or glob)\n"
    "  oracle   cross-check trajectories, master equation and closed forms\n"
    "  replay   rerun a trajectory from a recorded jump schedule\n"
    "\n"
    "qjump <command> --help lists the options of one command.\n";

po::options_description command_options(const std::string& cmd) {
    po::options_description d("qjump " + cmd + " options");
    d.add_options()("help,h", "show this help");
    if (cmd == "analyze") {
        d.add_options()("input", po::value<std::string>()->required(), "result directory or glob");
        d.add_options()("config", po::value<std::string>(), "analysis settings override");
    } else if (cmd == "oracle") {
        d.add_options()("config", po::value<std::string>(), "model for the dark-state check");
        d.add_options()("corrupt-rate-convention", po::bool_switch(),
                        "test hook: literal dissipator rate in the master equation");
    } else {
        d.add_options()("config", po::value<std::string>()->required(), "run configuration file");
    }
    if (cmd == "replay") {
        d.add_options()("schedule", po::value<std::string>()->required(), "CSV with time_kappa_t and bond columns");
        d.add_options()("trajectory", po::value<long long>()->default_value(0), "trajectory index in the schedule");
        d.add_options()("compare", po::bool_switch(), "also run the other backend and compare entropies");
    }
    if (cmd != "oracle") d.add_options()("out", po::value<std::string>(), "output directory");
    d.add_options()("threads", po::value<int>()->default_value(1), "worker threads (speed only)");
    d.add_options()("seed", po::value<std::uint64_t>(), "master seed override");
    d.add_options()("verbose,v", po::bool_switch(), "debug logging");
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2 || std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h") {
        std::cout << kUsage;
        return argc < 2 ? kConfigFailure : kSuccess;
    }
    const std::string cmd = argv[1];
    if (cmd != "run" && cmd != "analyze" && cmd != "oracle" && cmd != "replay") {
        std::cerr << "unknown command '" << cmd << "'\n" << kUsage;
        return kConfigFailure;
    }

    const po::options_description desc = command_options(cmd);
    po::positional_options_description pos;
    if (cmd == "analyze") pos.add("input", 1);
    po::variables_map vm;
    try {
        po::store(po::command_line_parser(argc - 1, argv + 1).options(desc).positional(pos).run(), vm);
        if (vm.count("help")) {
            std::cout << desc;
            return kSuccess;
        }
        po::notify(vm);
    } catch (const po::error& e) {
        std::cerr << "qjump " << cmd << ": " << e.what() << "\n" << desc;
        return kConfigFailure;
    }

    spdlog::set_level(vm["verbose"].as<bool>() ? spdlog::level::debug : spdlog::level::info);
    CommandOptions opts;
    if (vm.count("config")) opts.config = vm["config"].as<std::string>();
    if (vm.count("out")) opts.out = vm["out"].as<std::string>();
    if (vm.count("seed")) opts.seed = vm["seed"].as<std::uint64_t>();
    opts.threads = vm["threads"].as<int>();
    if (opts.threads < 1) {
        std::cerr << "qjump " << cmd << ": --threads must be positive\n";
        return kConfigFailure;
    }
    if (cmd == "oracle") opts.corrupt_rate_convention = vm["corrupt-rate-convention"].as<bool>();
    if (cmd == "replay") {
        opts.schedule = vm["schedule"].as<std::string>();
        opts.trajectory = vm["trajectory"].as<long long>();
        opts.compare_backends = vm["compare"].as<bool>();
    }

    if (cmd == "run") return cmd_run(opts);
    if (cmd == "analyze") return cmd_analyze(vm["input"].as<std::string>(), opts);
    if (cmd == "oracle") return cmd_oracle(opts);
    return cmd_replay(opts);
}
