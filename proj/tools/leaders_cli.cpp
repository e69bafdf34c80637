// Command-line front end: one subcommand per pipeline stage plus run-all and
// the synthetic fixture generator.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "leaders/pipeline/config.hpp"
#include "leaders/pipeline/fixture.hpp"
#include "leaders/pipeline/pipeline.hpp"

#ifndef LEADERS_DATA_DIR
#define LEADERS_DATA_DIR "data"
#endif

namespace {

using namespace leaders;
using namespace leaders::pipeline;

struct Common {
    std::string config;
    std::string input;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool force = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config, "pipeline TOML config")->check(CLI::ExistingFile);
    cmd->add_option("-i,--input", c.input, "input JSONL corpus (overrides config)");
    cmd->add_option("-o,--out", c.out, "output directory (overrides config)");
    cmd->add_option("-s,--seed", c.seed, "global seed (overrides config)");
    cmd->add_flag("-f,--force", c.force, "rerun stages even when cached");
    cmd->add_flag("-q,--quiet", c.quiet, "no progress output");
}

PipelineConfig resolve(const Common& c) {
    PipelineConfig cfg = c.config.empty() ? default_config(LEADERS_DATA_DIR) : load_config(c.config);
    if (!c.input.empty()) cfg.input = c.input;
    if (!c.out.empty()) cfg.out = c.out;
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

int run(const Common& c, std::span<const Stage> stages) {
    const PipelineConfig cfg = resolve(c);
    RunOptions opt;
    opt.force = c.force;
    if (!c.quiet) opt.log = [](std::string_view msg) { std::cerr << msg << '\n'; };
    run_stages(cfg, stages, opt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Influencer, community, emotion and concern analysis of tweet corpora"};
    app.require_subcommand(1);

    Common common;
    std::vector<std::pair<CLI::App*, Stage>> stage_cmds;
    for (Stage s : kStages) {
        const std::string name(stage_name(s));
        auto* cmd = app.add_subcommand(name, fmt::format("run the {} stage", name));
        add_common(cmd, common);
        stage_cmds.emplace_back(cmd, s);
    }
    auto* all = app.add_subcommand("run-all", "run every stage, reusing cached artifacts");
    add_common(all, common);

    std::string fixture_out;
    std::size_t fixture_tweets = 4000;
    std::uint64_t fixture_seed = 1;
    double retweet_ratio = 1.0;
    auto* fixture = app.add_subcommand("fixture", "write a synthetic planted corpus and its ground truth");
    fixture->add_option("-o,--out", fixture_out, "output JSONL path")->required();
    fixture->add_option("-n,--tweets", fixture_tweets, "number of original tweets")->check(CLI::PositiveNumber);
    fixture->add_option("-s,--seed", fixture_seed, "generator seed");
    fixture->add_option("--retweet-ratio", retweet_ratio, "retweets per original")->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fixture) {
            auto spec = default_fixture_spec(fixture_tweets, fixture_seed);
            spec.retweet_ratio = retweet_ratio;
            const auto fx = generate_fixture(spec);
            write_fixture(fixture_out, fx);
            std::cerr << fmt::format("wrote {} tweets to {} (truth: {})\n", fx.tweets.size(), fixture_out,
                                     truth_path_for(fixture_out).string());
            return 0;
        }
        if (*all) return run(common, kStages);
        for (auto& [cmd, stage] : stage_cmds)
            if (*cmd) return run(common, std::span<const Stage>(&stage, 1));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
