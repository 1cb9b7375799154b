#include "cli.hpp"

#include <algorithm>

#include "CLI11.hpp"
#include "kbplugin/augment.hpp"
#include "kbplugin/decoder.hpp"
#include "kbplugin/error.hpp"
#include "kbplugin/eval.hpp"
#include "kbplugin/executor.hpp"
#include "kbplugin/kb.hpp"
#include "kbplugin/schema_data.hpp"

namespace kbplugin::cli {

namespace {

using nlohmann::ordered_json;

struct Flags {
    std::string kb;
    std::string program;
    std::string prefix;
    std::vector<std::string> topics;
    std::vector<std::string> topic_concepts;
    std::string data;
    std::size_t n = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t k = 0;
    std::string question;
    std::string scorer;
    std::string mock_oracle;
    std::size_t beam = 5;
    std::size_t max_steps = 20;
    std::string dataset;
    std::string metric = "f1";
    std::size_t parallel = 1;
    double timeout = 30.0;
};

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

KnowledgeBase open_kb(const Flags& f, std::ostream& err) {
    auto kb = load_kb(f.kb);
    print_warnings(kb.warnings(), err);
    return kb;
}

int cmd_validate(const Flags& f, std::ostream& out, std::ostream& err) {
    auto kb = open_kb(f, err);
    ordered_json j{{"valid", true}, {"warnings", kb.warnings()}};
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_stats(const Flags& f, std::ostream& out, std::ostream& err) {
    out << open_kb(f, err).stats().to_json().dump(2) << '\n';
    return 0;
}

int cmd_exec(const Flags& f, std::ostream& out, std::ostream& err) {
    auto kb = open_kb(f, err);
    auto d = execute(kb, parse_program(f.program));
    out << denotation_to_json(kb, d).dump() << '\n';
    return 0;
}

int cmd_enumerate(const Flags& f, std::ostream& out, std::ostream& err) {
    auto kb = open_kb(f, err);
    Hypothesis hyp{parse_prefix(f.prefix), {}, 0.0, false};
    hyp.state = execute_prefix(kb, hyp.program);
    for (const auto& c : enumerate_candidates(kb, hyp, {f.topics, f.topic_concepts}))
        out << c.text() << '\n';
    return 0;
}

int cmd_augment(const Flags& f, std::ostream& out, std::ostream& err) {
    auto kb = open_kb(f, err);
    auto data = read_program_data(f.data);
    auto manifest = augment_dataset(kb, data, f.n, f.seed, f.out);
    for (const auto& s : manifest.at("skipped")) err << "skipped: " << s.dump() << '\n';
    err << manifest.at("violations").get<std::size_t>() << " violations in "
        << manifest.at("programs_verified").get<std::size_t>() << " verified programs\n";
    out << manifest.dump(2) << '\n';
    return manifest.at("violations").get<std::size_t>() == 0 ? 0 : 1;
}

int cmd_schema_data(const Flags& f, std::ostream& out, std::ostream& err) {
    auto kb = open_kb(f, err);
    auto built = build_pairs(kb, {f.k});
    print_warnings(built.warnings, err);
    auto summary = emit_corpus(built.pairs, f.out, &kb);
    for (const auto& item : summary.zero_coverage) err << "warning: no pairs for " << item << '\n';
    out << summary.to_json().dump(2) << '\n';
    return 0;
}

BeamOptions beam_options(const Flags& f) {
    if (f.beam == 0) throw Error(ErrorKind::Argument, "--beam must be at least 1");
    BeamOptions opts;
    opts.beam = f.beam;
    opts.max_steps = f.max_steps;
    return opts;
}

int cmd_induce(const Flags& f, std::ostream& out, std::ostream& err) {
    auto kb = open_kb(f, err);
    std::unique_ptr<Scorer> scorer;
    if (!f.mock_oracle.empty())
        scorer = oracle_scorer(parse_program(f.mock_oracle));
    else
        scorer = remote_scorer(f.scorer);
    auto results = beam_search(kb, f.question, {f.topics, f.topic_concepts}, *scorer, beam_options(f));
    auto list = ordered_json::array();
    for (const auto& r : results) {
        list.push_back({{"program", r.program.text()},
                        {"score", r.score},
                        {"answers", answer_strings(kb, r.denotation)},
                        {"denotation", denotation_to_json(kb, r.denotation)}});
    }
    ordered_json j{{"question", f.question}, {"results", std::move(list)}};
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_eval(const Flags& f, std::ostream& out, std::ostream& err) {
    auto kb = open_kb(f, err);
    auto dataset = read_eval_dataset(f.dataset);
    auto metric = metric_from_string(f.metric);
    if (!metric) throw Error(ErrorKind::Argument, "--metric must be f1, hit1 or accuracy");
    if (f.timeout <= 0) throw Error(ErrorKind::Argument, "--timeout must be positive");

    ScorerFactory factory;
    if (f.scorer == "oracle") {
        factory = [](const EvalRecord& rec) -> std::unique_ptr<Scorer> {
            if (!rec.gold_program) throw Error(ErrorKind::Argument, "oracle scorer needs a gold_program");
            return oracle_scorer(parse_program(*rec.gold_program));
        };
    } else if (f.scorer == "uniform") {
        factory = [](const EvalRecord&) -> std::unique_ptr<Scorer> { return std::make_unique<UniformScorer>(); };
    } else {
        const auto endpoint = f.scorer;
        factory = [endpoint](const EvalRecord&) { return remote_scorer(endpoint); };
    }

    EvalOptions opts;
    opts.metric = *metric;
    opts.parallel = std::max<std::size_t>(1, f.parallel);
    opts.beam = beam_options(f);
    opts.record_timeout = std::chrono::milliseconds(static_cast<long long>(f.timeout * 1000));
    auto report = evaluate(kb, dataset, factory, opts);
    for (std::size_t i = 0; i < report.records.size(); ++i)
        if (report.records[i].error) err << "record " << i + 1 << " failed: " << *report.records[i].error << '\n';
    out << report.to_json().dump(2) << '\n';
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Knowledge-base program induction toolkit"};
    app.require_subcommand(1);
    Flags f;

    auto kb_flag = [&](CLI::App* sub) {
        sub->add_option("--kb", f.kb, "KB file (JSON)")->required()->check(CLI::ExistingFile);
    };
    auto topic_flags = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--topics", f.topics, "topic entity names");
        if (required) opt->required();
        sub->add_option("--topic-concepts", f.topic_concepts, "topic concept names, used without topic entities");
    };
    auto search_flags = [&](CLI::App* sub) {
        sub->add_option("--beam", f.beam, "beam size")->capture_default_str();
        sub->add_option("--max-steps", f.max_steps, "maximum decoding steps")->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "load a KB and report problems");
    kb_flag(validate);
    auto* stats = app.add_subcommand("stats", "print KB statistics");
    kb_flag(stats);

    auto* exec = app.add_subcommand("exec", "execute a program");
    kb_flag(exec);
    exec->add_option("--program", f.program, "program text")->required();

    auto* enumerate = app.add_subcommand("enumerate", "list the admissible next chunks of a prefix");
    kb_flag(enumerate);
    enumerate->add_option("--prefix", f.prefix, "program prefix (may be empty)");
    topic_flags(enumerate, false);

    auto* aug = app.add_subcommand("augment", "generate KBs with renamed schemas and rewritten programs");
    kb_flag(aug);
    aug->add_option("--data", f.data, "JSON-lines of {question, program}")->required()->check(CLI::ExistingFile);
    aug->add_option("--n", f.n, "number of KBs")->required()->check(CLI::PositiveNumber);
    aug->add_option("--seed", f.seed, "random seed")->required();
    aug->add_option("--out", f.out, "output directory")->required();

    auto* schema = app.add_subcommand("schema-data", "build the schema triple-completion corpus");
    kb_flag(schema);
    schema->add_option("-K", f.k, "triples sampled per schema item")->required();
    schema->add_option("--out", f.out, "output JSON-lines file")->required();

    auto* induce = app.add_subcommand("induce", "search for a program answering a question");
    kb_flag(induce);
    induce->add_option("--question", f.question, "question text")->required();
    topic_flags(induce, false);
    auto* scorer_opt = induce->add_option("--scorer", f.scorer, "scorer endpoint, http://host:port");
    auto* mock_opt = induce->add_option("--mock-oracle", f.mock_oracle, "gold program for the oracle scorer");
    scorer_opt->excludes(mock_opt);
    search_flags(induce);

    auto* ev = app.add_subcommand("eval", "evaluate induction on a dataset");
    kb_flag(ev);
    ev->add_option("--dataset", f.dataset, "JSON-lines of eval records")->required()->check(CLI::ExistingFile);
    ev->add_option("--scorer", f.scorer, "endpoint URL, 'oracle' or 'uniform'")->required();
    ev->add_option("--metric", f.metric, "f1, hit1 or accuracy")->capture_default_str();
    ev->add_option("--parallel", f.parallel, "records evaluated concurrently")->capture_default_str();
    ev->add_option("--timeout", f.timeout, "per-record timeout in seconds")->capture_default_str();
    search_flags(ev);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (induce->parsed() && f.scorer.empty() && f.mock_oracle.empty())
            throw Error(ErrorKind::Argument, "induce needs --scorer or --mock-oracle");
        if (validate->parsed()) return cmd_validate(f, out, err);
        if (stats->parsed()) return cmd_stats(f, out, err);
        if (exec->parsed()) return cmd_exec(f, out, err);
        if (enumerate->parsed()) return cmd_enumerate(f, out, err);
        if (aug->parsed()) return cmd_augment(f, out, err);
        if (schema->parsed()) return cmd_schema_data(f, out, err);
        if (induce->parsed()) return cmd_induce(f, out, err);
        if (ev->parsed()) return cmd_eval(f, out, err);
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace kbplugin::cli
