// cmap — semantic co-occurrence mapping for coded text corpora.
//
// Subcommands run individual pipeline stages; `run` executes everything and
// writes a reproducibility manifest. Exit codes: 0 ok, 1 data/validation
// error, 2 config error.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "cmap/cmap.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_override;
    long long seed_override = -1;
    bool has_seed_override = false;
    bool allow_invalid = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "path to the key=value config file")->required();
    cmd->add_flag("--allow-invalid", args.allow_invalid,
                  "drop rows with schema violations instead of aborting");
    cmd->add_option("--out", args.out_override, "output directory (overrides config output_dir)");
    cmd->add_option("--seed", args.seed_override, "RNG seed (overrides config rng_seed)")
        ->check(CLI::NonNegativeNumber);
}

cmap::PipelineConfig load_config(const CommonArgs& args) {
    cmap::PipelineConfig cfg = cmap::parse_config(args.config_path);
    if (!args.out_override.empty()) cfg.output_dir = args.out_override;
    if (args.seed_override >= 0) cfg.rng_seed = static_cast<std::uint64_t>(args.seed_override);
    for (const auto& w : cfg.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return cfg;
}

cmap::PipelineState make_state(const CommonArgs& args) {
    cmap::PipelineState st;
    st.cfg = load_config(args);
    st.allow_invalid = args.allow_invalid;
    std::filesystem::create_directories(st.cfg.output_dir);
    return st;
}

void report_warnings(const cmap::PipelineState& st) {
    for (const auto& w : st.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

// validate reports instead of aborting: violations go to validation.json and
// the exit code says whether the corpus is clean.
int cmd_validate(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    cmap::stage_load(st);
    st.validation = cmap::validate_schema(st.table);
    cmap::emit_validation(st, st.cfg.output_dir, nullptr);
    std::printf("%zu record(s), %zu violation(s) -> %s/validation.json\n", st.table.records.size(),
                st.validation.size(), st.cfg.output_dir.c_str());
    if (!st.validation.empty() && !args.allow_invalid) return 1;
    return 0;
}

int cmd_stats(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    cmap::prepare_corpus(st);
    cmap::stage_model(st);
    cmap::emit_stats(st, st.cfg.output_dir, nullptr);
    report_warnings(st);
    std::printf("vocabulary of %zu lemmas -> %s\n", st.vocab.size(), st.cfg.output_dir.c_str());
    return 0;
}

int cmd_similarity(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    cmap::prepare_corpus(st);
    cmap::prepare_matrix(st);
    cmap::emit_matrix(st, st.cfg.output_dir, nullptr);
    report_warnings(st);
    std::printf("%zux%zu %s matrix -> %s\n", st.matrix.size(), st.matrix.size(),
                cmap::method_name(st.matrix.method), st.cfg.output_dir.c_str());
    return 0;
}

int cmd_expand(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    if (st.cfg.seeds.empty()) throw cmap::ConfigError("expand requires 'seeds' in the config");
    cmap::prepare_corpus(st);
    cmap::prepare_matrix(st);
    cmap::emit_expand(st, st.cfg.output_dir, nullptr);
    report_warnings(st);
    std::printf("%zu seed(s) expanded to %zu word(s) -> %s\n", st.seed_set.seeds.size(),
                st.expanded.seeds.size(), st.cfg.output_dir.c_str());
    return 0;
}

int cmd_tsne(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    cmap::prepare_corpus(st);
    cmap::prepare_matrix(st);
    cmap::stage_tsne(st);
    cmap::emit_tsne(st, st.cfg.output_dir, nullptr);
    report_warnings(st);
    std::printf("t-SNE over %zu words, final KL %s -> %s\n", st.matrix.size(),
                cmap::fmt_double(st.tsne_layout.objective_trace.back()).c_str(),
                st.cfg.output_dir.c_str());
    return 0;
}

int cmd_cluster(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    cmap::prepare_corpus(st);
    cmap::prepare_matrix(st);
    cmap::stage_cluster(st);
    cmap::emit_cluster(st, st.cfg.output_dir, nullptr);
    report_warnings(st);
    std::printf("%zu merge(s) -> %s/dendrogram.csv\n", st.dendrogram.merges.size(),
                st.cfg.output_dir.c_str());
    return 0;
}

int cmd_heatmap(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    cmap::prepare_corpus(st);
    cmap::prepare_matrix(st);
    cmap::stage_cluster(st);
    cmap::emit_heatmap(st, st.cfg.output_dir, nullptr);
    report_warnings(st);
    std::printf("heatmap over %zu words -> %s\n", st.matrix.size(), st.cfg.output_dir.c_str());
    return 0;
}

int cmd_network(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    cmap::prepare_corpus(st);
    cmap::prepare_matrix(st);
    cmap::stage_cluster(st); // the composite panel reuses the clustered heatmap
    cmap::stage_network(st);
    cmap::emit_network(st, st.cfg.output_dir, nullptr);
    report_warnings(st);
    std::printf("%zu node(s), %zu edge(s) -> %s\n", st.graph.nodes.size(),
                st.graph.edges.edges.size(), st.cfg.output_dir.c_str());
    return 0;
}

int cmd_wordcloud(const CommonArgs& args) {
    cmap::PipelineState st = make_state(args);
    cmap::prepare_corpus(st);
    cmap::emit_wordcloud(st, st.cfg.output_dir, nullptr);
    report_warnings(st);
    std::printf("word cloud -> %s/wordcloud.svg\n", st.cfg.output_dir.c_str());
    return 0;
}

int cmd_run(const CommonArgs& args) {
    cmap::PipelineConfig cfg = load_config(args);
    cmap::RunManifest manifest = cmap::run_pipeline(cfg, args.allow_invalid);
    for (const auto& w : manifest.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("%zu artifact(s) -> %s (manifest.json: config %s, input %s)\n",
                manifest.output_hashes.size() + 1, cfg.output_dir.c_str(),
                manifest.config_hash.c_str(), manifest.input_hash.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cmap: co-occurrence statistics, seed expansion, and semantic maps "
                 "from coded text corpora"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const CommonArgs&);
    };
    static const Sub subs[] = {
        {"validate", "check the corpus against the segment schema", cmd_validate},
        {"stats", "vocabulary, co-occurrence and code statistics", cmd_stats},
        {"similarity", "pairwise similarity matrix for the configured method", cmd_similarity},
        {"expand", "score and expand the seed set", cmd_expand},
        {"tsne", "2D t-SNE map of the similarity matrix", cmd_tsne},
        {"cluster", "average-linkage dendrogram of the similarity matrix", cmd_cluster},
        {"heatmap", "clustered similarity heatmap (and code heatmap)", cmd_heatmap},
        {"network", "thresholded semantic network with force layout", cmd_network},
        {"wordcloud", "frequency word cloud", cmd_wordcloud},
        {"run", "full pipeline with reproducibility manifest", cmd_run},
    };

    CommonArgs args[std::size(subs)];
    for (std::size_t i = 0; i < std::size(subs); ++i)
        add_common(app.add_subcommand(subs[i].name, subs[i].help), args[i]);

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < std::size(subs); ++i)
            if (app.get_subcommand(subs[i].name)->parsed()) return subs[i].fn(args[i]);
        return 2;
    } catch (const cmap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const cmap::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
