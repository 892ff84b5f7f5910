#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "artsim/experiment.hpp"
#include "artsim/validation.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

artsim::ExperimentConfig load_config(const std::string& config_path) {
    if (config_path.empty()) {
        artsim::ExperimentConfig cfg;
        cfg.validate();
        return cfg;
    }
    return artsim::ExperimentConfig::parse(slurp(config_path));
}

void print_metrics(const artsim::TrialResult& trial, const artsim::Topology& t) {
    std::cout << "flow: " << t.label(trial.flow.src) << " -> " << t.label(trial.flow.dst)
              << " (primary " << trial.primary_hops << " hops)\n";
    for (const auto& ev : trial.sched) {
        const artsim::Edge& e = t.edge(ev.edge);
        std::cout << "failure: " << t.label(e.u) << "-" << t.label(e.v) << " at " << ev.fail_time
                  << " s\n";
    }
    for (const auto& tm : trial.per_mode) {
        const auto& r = tm.rec;
        std::cout << "mode " << artsim::to_string(tm.mode) << ":\n"
                  << "  sent " << r.sent << "  delivered " << r.delivered << "  drops "
                  << r.drops_total() << " (link_down " << r.dropped_link_down << ", ttl "
                  << r.dropped_ttl << ", queue " << r.dropped_queue << ", unreachable "
                  << r.dropped_unreachable << ")  in_flight " << r.in_flight_at_end << "\n"
                  << "  mean delay " << r.mean_delay() << " s  window delay "
                  << r.mean_window_delay() << " s\n"
                  << "  paths: primary " << r.avg_primary_len << "  backup " << r.avg_backup_len
                  << "  new primary " << r.avg_new_primary_len << "\n"
                  << "  control messages " << tm.control_msgs_total << "  max node load "
                  << tm.max_node_load << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-state routing resilience toolkit: backup routing tables and a "
                 "failure-recovery packet simulator"};
    app.require_subcommand(1);

    std::string config_path, topology_path, mode_str, out_dir, log_path;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto* tables = app.add_subcommand("tables", "Print routing and backup tables for a topology");
    tables->add_option("--topology", topology_path, "topology file")->required();
    tables->add_option("--mode", mode_str, "artfp or artcp (default: both)");

    auto* simulate = app.add_subcommand("simulate", "Run one trial verbosely");
    simulate->add_option("--config", config_path, "experiment config file");
    simulate->add_option("--topology", topology_path, "topology file override");
    simulate->add_option("--mode", mode_str, "restrict to one mode");
    simulate->add_option("--seed", seed, "base seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    simulate->add_option("--log", log_path, "write the raw event log to this file");

    auto* experiment = app.add_subcommand("experiment", "Run the full batch");
    experiment->add_option("--config", config_path, "experiment config file");
    experiment->add_option("--out", out_dir, "output directory override");
    experiment->add_option("--seed", seed, "base seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    experiment->add_option("--topology", topology_path, "topology file override");

    auto* oracle = app.add_subcommand("oracle-check", "Cross-validate searches against "
                                                      "exhaustive enumeration");
    int graphs = 100, n_min = 4, n_max = 10;
    oracle->add_option("--graphs", graphs, "number of random graphs");
    oracle->add_option("--n-min", n_min, "minimum node count");
    oracle->add_option("--n-max", n_max, "maximum node count");
    oracle->add_option("--seed", seed, "corpus seed")->each([&](const std::string&) {
        seed_set = true;
    });

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(tables)) {
            artsim::Topology t = artsim::parse_topology(slurp(topology_path));
            artsim::RoutingTable tr = artsim::build_routing_tables(t);
            std::cout << "next-hop matrix:\n" << artsim::dump_next_hop_matrix(tr, t) << "\n";
            std::vector<artsim::ForwardingMode> modes;
            if (mode_str.empty()) {
                modes = {artsim::ForwardingMode::ARTFP, artsim::ForwardingMode::ARTCP};
            } else {
                auto m = artsim::parse_mode(mode_str);
                if (!m || *m == artsim::ForwardingMode::LS)
                    throw artsim::ConfigError("--mode must be artfp or artcp");
                modes = {*m};
            }
            for (auto m : modes) {
                auto [bt, ledger] = artsim::build_backup_tables(tr, t, m);
                std::cout << artsim::to_string(m) << " backup table:\n"
                          << artsim::dump_backup_table(bt, t)
                          << "control messages: " << ledger.total_enquiries() << " enquiries, "
                          << ledger.total_replies() << " replies\n\n";
            }
            return 0;
        }

        if (app.got_subcommand(simulate)) {
            artsim::ExperimentConfig cfg = load_config(config_path);
            if (!topology_path.empty()) cfg.topology_file = topology_path;
            if (seed_set) cfg.base_seed = seed;
            if (!mode_str.empty()) {
                auto m = artsim::parse_mode(mode_str);
                if (!m) throw artsim::ConfigError("unknown mode '" + mode_str + "'");
                cfg.modes = {*m};
            }
            cfg.validate();
            std::ofstream log_file;
            std::ostream* log = nullptr;
            if (!log_path.empty()) {
                log_file.open(log_path);
                if (!log_file) throw std::ios_base::failure("cannot write " + log_path);
                log = &log_file;
            }
            artsim::TrialResult trial = artsim::run_single_trial(cfg, 0, log);
            print_metrics(trial, trial.topo);
            return 0;
        }

        if (app.got_subcommand(experiment)) {
            artsim::ExperimentConfig cfg = load_config(config_path);
            if (!topology_path.empty()) cfg.topology_file = topology_path;
            if (seed_set) cfg.base_seed = seed;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            cfg.validate();
            artsim::SummaryTable summary = artsim::run_experiment(cfg);
            std::cout << summary.to_text();
            std::cout << "results written to " << cfg.out_dir << "\n";
            return 0;
        }

        if (app.got_subcommand(oracle)) {
            auto rep = artsim::oracle_check(graphs, n_min, n_max, seed_set ? seed : 2024);
            std::cout << rep.to_text() << "\n";
            return rep.clean() ? 0 : 1;
        }
    } catch (const artsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const artsim::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
