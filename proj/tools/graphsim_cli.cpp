// Command-line front end: ingest, split, simulate, reward, eval-tdgg,
// eval-idgg, report, counterfactual.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphsim/edge_rewards.hpp"
#include "graphsim/pipeline.hpp"
#include "graphsim/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace graphsim;

namespace {

std::string env_or(const char* name, const std::string& fallback = "") {
    const char* v = std::getenv(name);
    return v ? v : fallback;
}

// Endpoint settings come from a config file or the environment only.
struct EndpointConfig {
    LlmBackendConfig llm;
    RemoteEmbedderConfig embedding;
    bool remote_embedding = false;
};

EndpointConfig load_endpoints(const std::string& config_path) {
    EndpointConfig ep;
    ep.llm.base_url = env_or("GRAPHSIM_LLM_BASE_URL");
    ep.llm.api_key = env_or("GRAPHSIM_LLM_API_KEY");
    ep.llm.model = env_or("GRAPHSIM_LLM_MODEL", "default");
    ep.embedding.base_url = env_or("GRAPHSIM_EMBED_BASE_URL");
    ep.embedding.api_key = env_or("GRAPHSIM_EMBED_API_KEY");
    ep.embedding.model = env_or("GRAPHSIM_EMBED_MODEL");
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw GraphError("cannot open config file: " + config_path);
        json j;
        f >> j;
        if (j.contains("llm")) {
            const json& l = j["llm"];
            ep.llm.base_url = l.value("base_url", ep.llm.base_url);
            ep.llm.api_key = l.value("api_key", ep.llm.api_key);
            ep.llm.model = l.value("model", ep.llm.model);
            ep.llm.path = l.value("path", ep.llm.path);
            ep.llm.temperature = l.value("temperature", ep.llm.temperature);
            ep.llm.query_template_path = l.value("query_template", ep.llm.query_template_path);
            ep.llm.edge_template_path = l.value("edge_template", ep.llm.edge_template_path);
            ep.llm.audit_log_path = l.value("audit_log", ep.llm.audit_log_path);
        }
        if (j.contains("embedding")) {
            const json& e = j["embedding"];
            ep.embedding.base_url = e.value("base_url", ep.embedding.base_url);
            ep.embedding.api_key = e.value("api_key", ep.embedding.api_key);
            ep.embedding.model = e.value("model", ep.embedding.model);
            ep.embedding.path = e.value("path", ep.embedding.path);
            ep.embedding.text_field = e.value("text_field", ep.embedding.text_field);
            ep.embedding.vector_pointer = e.value("vector_pointer", ep.embedding.vector_pointer);
        }
    }
    ep.remote_embedding = !ep.embedding.base_url.empty();
    return ep;
}

std::unique_ptr<EmbeddingProvider> make_provider(const EndpointConfig& ep) {
    if (ep.remote_embedding) return std::make_unique<RemoteEmbedder>(ep.embedding);
    return std::make_unique<TrigramEmbedder>();
}

SplitWindows pick_split(const SplitSpec& spec, const std::string& name) {
    if (name == "train") return spec.train;
    if (name == "val") return spec.val;
    if (name == "test") return spec.test;
    throw GraphError("unknown split: " + name);
}

std::vector<Interaction> read_edges_jsonl(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw GraphError("cannot open edges file: " + path);
    std::vector<Interaction> edges;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        edges.push_back({j.at("src").get<std::string>(), j.at("dst").get<std::string>(),
                         j.at("t").get<int>(), j.value("message", std::string{}),
                         j.value("category", 1)});
    }
    return edges;
}

std::vector<Interaction> read_edge_input(const std::string& path) {
    if (fs::is_directory(path)) return load_generated(path).edges;
    return read_edges_jsonl(path);
}

struct SimulateArgs {
    std::string nodes, edges, manifest, config, out = "out";
    std::string task = "tdgg", backend = "heuristic", split = "test";
    std::string broadcast, forecaster = "moving-average";
    int k1 = 100, broadcast_category = 1, workers = 1;
    uint64_t seed = 7;
    double activity_threshold = 0.0;
};

GeneratedGraph simulate(const SimulateArgs& args) {
    TemporalGraph graph = TemporalGraph::load(args.nodes, args.edges, args.manifest);
    SplitSpec spec = make_splits(graph.horizon());
    SplitWindows split = pick_split(spec, args.split);

    EndpointConfig ep = load_endpoints(args.config);
    std::unique_ptr<EmbeddingProvider> provider = make_provider(ep);

    std::unique_ptr<PolicyBackend> backend;
    if (args.backend == "heuristic") {
        backend = std::make_unique<HeuristicBackend>();
    } else if (args.backend == "replay") {
        backend = std::make_unique<ReplayBackend>(graph, split.prediction);
    } else if (args.backend == "llm") {
        if (ep.llm.base_url.empty())
            throw GraphError("llm backend needs GRAPHSIM_LLM_BASE_URL or a config file");
        ep.llm.num_categories = graph.num_categories();
        if (ep.llm.query_template_path.empty()) ep.llm.query_template_path = "prompts/query.txt";
        if (ep.llm.edge_template_path.empty()) ep.llm.edge_template_path = "prompts/edge.txt";
        backend = std::make_unique<LlmBackend>(ep.llm);
    } else {
        throw GraphError("unknown backend: " + args.backend);
    }

    RunConfig cfg;
    cfg.task = args.task == "idgg" ? Task::idgg : Task::tdgg;
    if (args.task != "tdgg" && args.task != "idgg")
        throw GraphError("unknown task: " + args.task);
    cfg.k1 = args.k1;
    cfg.seed = args.seed;
    cfg.workers = args.workers;
    cfg.activity_threshold = args.activity_threshold;
    cfg.broadcast_message = args.broadcast;
    cfg.broadcast_category = args.broadcast_category;
    cfg.forecaster = args.forecaster;

    GeneratedGraph gen;
    if (cfg.task == Task::tdgg) {
        gen = run_tdgg(graph, split, cfg, *backend, *provider);
    } else {
        std::unique_ptr<Forecaster> forecaster = make_forecaster(args.forecaster);
        gen = run_idgg(graph, split, cfg, *backend, *provider, *forecaster);
    }
    fs::create_directories(args.out);
    write_generated(args.out, gen, cfg);
    return gen;
}

int run(int argc, char** argv) {
    CLI::App app{"Temporal text-attributed graph simulation and evaluation"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    app.footer("Endpoint URLs and API keys are read from the environment "
               "(GRAPHSIM_LLM_*, GRAPHSIM_EMBED_*) or a --config file, never from flags.");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate a dataset and write canonical copies");
    std::string in_nodes, in_edges, in_manifest, in_out = "data";
    ingest->add_option("--nodes", in_nodes)->required();
    ingest->add_option("--edges", in_edges)->required();
    ingest->add_option("--manifest", in_manifest);
    ingest->add_option("--out", in_out);

    // split
    auto* split_cmd = app.add_subcommand("split", "Print split windows for a horizon");
    int horizon = 0;
    split_cmd->add_option("--horizon", horizon)->required();

    // simulate
    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a future graph");
    simulate_cmd->add_option("--nodes", sim.nodes)->required();
    simulate_cmd->add_option("--edges", sim.edges)->required();
    simulate_cmd->add_option("--manifest", sim.manifest);
    simulate_cmd->add_option("--task", sim.task)->check(CLI::IsMember({"tdgg", "idgg"}));
    simulate_cmd->add_option("--backend", sim.backend)
        ->check(CLI::IsMember({"heuristic", "replay", "llm"}));
    simulate_cmd->add_option("--split", sim.split)->check(CLI::IsMember({"train", "val", "test"}));
    simulate_cmd->add_option("--k1", sim.k1)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", sim.seed);
    simulate_cmd->add_option("--workers", sim.workers)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--broadcast", sim.broadcast);
    simulate_cmd->add_option("--broadcast-category", sim.broadcast_category);
    simulate_cmd->add_option("--threshold", sim.activity_threshold);
    simulate_cmd->add_option("--forecaster", sim.forecaster)
        ->check(CLI::IsMember({"persistence", "moving-average", "autoregressive"}));
    simulate_cmd->add_option("--config", sim.config);
    simulate_cmd->add_option("--out", sim.out);

    // reward
    auto* reward = app.add_subcommand("reward", "Score a batch of reward records");
    std::string rw_in, rw_out;
    long rw_step = 0;
    reward->add_option("--batch", rw_in)->required();
    reward->add_option("--out", rw_out)->required();
    reward->add_option("--step", rw_step);

    // eval-tdgg
    auto* evalt = app.add_subcommand("eval-tdgg", "Micro evaluation of a generated run");
    std::string et_gen, et_nodes, et_edges, et_manifest, et_split = "test",
                et_out, et_model = "model", et_config;
    evalt->add_option("--generated", et_gen)->required();
    evalt->add_option("--nodes", et_nodes)->required();
    evalt->add_option("--edges", et_edges)->required();
    evalt->add_option("--manifest", et_manifest);
    evalt->add_option("--split", et_split)->check(CLI::IsMember({"train", "val", "test"}));
    evalt->add_option("--out", et_out);
    evalt->add_option("--model", et_model);
    evalt->add_option("--config", et_config);

    // eval-idgg
    auto* evali = app.add_subcommand("eval-idgg", "Macro comparison of two edge sets");
    std::string ei_gen, ei_ref, ei_out, ei_model = "model";
    bool ei_kol_degree = false;
    evali->add_option("--generated", ei_gen)->required();
    evali->add_option("--reference", ei_ref)->required();
    evali->add_option("--out", ei_out);
    evali->add_option("--model", ei_model);
    evali->add_flag("--kol-by-degree", ei_kol_degree);

    // report
    auto* report = app.add_subcommand("report", "Build leaderboards from model reports");
    std::string rp_dir, rp_out = "leaderboard";
    report->add_option("--reports", rp_dir)->required();
    report->add_option("--out", rp_out);

    // counterfactual
    auto* counter = app.add_subcommand(
        "counterfactual", "Paired baseline/broadcast runs with a macro comparison");
    SimulateArgs cf;
    counter->add_option("--nodes", cf.nodes)->required();
    counter->add_option("--edges", cf.edges)->required();
    counter->add_option("--manifest", cf.manifest);
    counter->add_option("--task", cf.task)->check(CLI::IsMember({"tdgg", "idgg"}));
    counter->add_option("--backend", cf.backend)
        ->check(CLI::IsMember({"heuristic", "replay", "llm"}));
    counter->add_option("--split", cf.split)->check(CLI::IsMember({"train", "val", "test"}));
    counter->add_option("--k1", cf.k1)->check(CLI::PositiveNumber);
    counter->add_option("--seed", cf.seed);
    counter->add_option("--workers", cf.workers)->check(CLI::PositiveNumber);
    counter->add_option("--broadcast", cf.broadcast)->required();
    counter->add_option("--broadcast-category", cf.broadcast_category);
    counter->add_option("--forecaster", cf.forecaster);
    counter->add_option("--config", cf.config);
    counter->add_option("--out", cf.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ExtrasError& e) {
        app.exit(e);
        return 2;  // unknown command
    } catch (const CLI::RequiredError& e) {
        if (app.get_subcommands().empty()) {
            app.exit(e);
            return 2;  // no command given
        }
        app.exit(e);
        return 1;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // validation failure
    }

    if (*ingest) {
        TemporalGraph g = TemporalGraph::load(in_nodes, in_edges, in_manifest);
        fs::create_directories(in_out);
        write_nodes_file(in_out + "/nodes.jsonl", g.nodes());
        write_edges_file(in_out + "/edges.jsonl", g.edges());
        write_manifest(in_out + "/manifest.json", g.horizon(), g.num_categories(),
                       g.category_names());
        std::cout << "nodes=" << g.nodes().size() << " edges=" << g.edges().size()
                  << " horizon=" << g.horizon() << " categories=" << g.num_categories() << "\n";
    } else if (*split_cmd) {
        SplitSpec spec = make_splits(horizon);
        std::cout << "tau=" << spec.tau << " input=" << spec.input_len
                  << " prediction=" << spec.tau << "\n";
        auto show = [](const char* name, const SplitWindows& w) {
            std::cout << name << ": input [" << w.input.begin << ", " << w.input.end
                      << ") prediction [" << w.prediction.begin << ", " << w.prediction.end
                      << ")\n";
        };
        show("train", spec.train);
        show("val", spec.val);
        show("test", spec.test);
    } else if (*simulate_cmd) {
        GeneratedGraph gen = simulate(sim);
        std::cout << "generated " << gen.edges.size() << " edges, " << gen.selections.size()
                  << " selections, " << gen.failures << " format failures -> " << sim.out << "\n";
    } else if (*reward) {
        std::ifstream in(rw_in);
        if (!in) throw GraphError("cannot open batch file: " + rw_in);
        std::ofstream out(rw_out);
        if (!out) throw GraphError("cannot write: " + rw_out);
        CurriculumState state;
        state.step = rw_step;
        std::string line;
        size_t n = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            std::string domain = j.at("domain").get<std::string>();
            bool format_ok = j.value("format_ok", true);
            if (domain == "category") {
                ClassifierScore score = j.at("scores").get<ClassifierScore>();
                CurriculumState s = state;
                s.step = j.value("step", rw_step);
                double r = reward_cat(j.at("pred").get<int>(), j.at("truth").get<int>(), score,
                                      s, format_ok);
                j["alpha"] = curriculum_alpha(s);
                j["reward"] = r;
            } else if (domain == "message") {
                JudgeScores scores = parse_judge_scores(j.at("judge_raw").get<std::string>());
                j["scores"] = serialize_judge_scores(scores);
                j["clamped"] = scores.clamped;
                j["reward"] = reward_text(scores, format_ok);
            } else {
                throw GraphError("unknown reward domain: " + domain);
            }
            out << j.dump() << "\n";
            ++n;
        }
        std::cout << "scored " << n << " records -> " << rw_out << "\n";
    } else if (*evalt) {
        TemporalGraph reference = TemporalGraph::load(et_nodes, et_edges, et_manifest);
        SplitWindows split = pick_split(make_splits(reference.horizon()), et_split);
        GeneratedGraph gen = load_generated(et_gen);
        EndpointConfig ep = load_endpoints(et_config);
        std::unique_ptr<EmbeddingProvider> provider = make_provider(ep);
        MicroReport report = eval_tdgg(gen, reference, split.prediction, *provider, et_model);
        if (!et_out.empty()) write_micro_report(et_out, report);
        std::cout << "R@100 easy=" << report.r100_easy << " hard=" << report.r100_hard
                  << " all=" << report.r100_all << " H@100=" << report.h100_all
                  << " ACC=" << report.acc << " ROUGE-L=" << report.rouge << " F1=" << report.f1
                  << "\n";
    } else if (*evali) {
        std::vector<Interaction> gen = read_edge_input(ei_gen);
        std::vector<Interaction> ref = read_edge_input(ei_ref);
        MacroEvalConfig cfg;
        cfg.kol_by_degree = ei_kol_degree;
        MacroReport report = eval_idgg_pair(gen, ref, cfg);
        report.model = ei_model;
        if (!ei_out.empty()) write_macro_report(ei_out, report);
        std::cout << "MMD degree=" << report.mmd_degree << " clustering=" << report.mmd_clustering
                  << " spectral=" << report.mmd_spectral << " EO=" << report.eo
                  << " P@100-KOL=" << report.p100_kol << " dC=" << report.delta_chambers
                  << " dAlpha=" << report.delta_alpha << "\n";
    } else if (*report) {
        ReportSet set = load_reports(rp_dir);
        write_leaderboards(rp_out, set);
        if (!set.micro.empty()) std::cout << render_micro_table(build_micro_leaderboard(set.micro));
        if (!set.macro.empty()) std::cout << render_macro_table(build_macro_leaderboard(set.macro));
        std::cout << "leaderboards -> " << rp_out << "\n";
    } else if (*counter) {
        SimulateArgs baseline = cf;
        baseline.broadcast.clear();
        baseline.out = cf.out + "/baseline";
        SimulateArgs injected = cf;
        injected.out = cf.out + "/broadcast";
        GeneratedGraph base = simulate(baseline);
        GeneratedGraph with = simulate(injected);
        MacroReport delta = eval_idgg_pair(with.edges, base.edges);
        delta.model = "broadcast-vs-baseline";
        write_macro_report(cf.out + "/delta.json", delta);
        std::map<int, std::pair<size_t, size_t>> per_category;
        for (const Interaction& e : base.edges) ++per_category[e.category].first;
        for (const Interaction& e : with.edges) ++per_category[e.category].second;
        std::cout << "baseline=" << base.edges.size() << " broadcast=" << with.edges.size()
                  << " edges; EO=" << delta.eo << "\n";
        for (const auto& [cat, counts] : per_category)
            std::cout << "category " << cat << ": " << counts.first << " -> " << counts.second
                      << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
