#include "lca/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace lca {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string chain_to_records(const Chain& chain) {
    std::string out;
    for (const Block& b : chain.blocks()) {
        out += std::to_string(b.height);
        out += ' ';
        out += format_double(b.reported_timestamp);
        out += ' ';
        out += format_double(b.difficulty);
        out += ' ';
        out += format_double(b.actual_found_time);
        out += '\n';
    }
    return out;
}

Chain chain_from_records(const std::string& text) {
    std::vector<Block> blocks;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Block b;
        std::istringstream ls(line);
        if (!(ls >> b.height >> b.reported_timestamp >> b.difficulty >> b.actual_found_time))
            throw std::invalid_argument("malformed chain record: " + line);
        blocks.push_back(b);
    }
    return Chain::from_blocks(std::move(blocks));
}

namespace {

json block_to_json(const Block& b) {
    return json{{"height", b.height},
                {"reported_timestamp", b.reported_timestamp},
                {"difficulty", b.difficulty},
                {"actual_found_time", b.actual_found_time}};
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("malformed JSON");
    return j;
}

}  // namespace

std::string chain_to_json(const Chain& chain) {
    json blocks = json::array();
    for (const Block& b : chain.blocks()) blocks.push_back(block_to_json(b));
    return json{{"blocks", std::move(blocks)}}.dump();
}

Chain chain_from_json(const std::string& text) {
    const json j = parse(text);
    std::vector<Block> blocks;
    for (const json& jb : j.at("blocks")) {
        Block b;
        b.height = jb.at("height").get<long long>();
        b.reported_timestamp = jb.at("reported_timestamp").get<double>();
        b.difficulty = jb.at("difficulty").get<double>();
        b.actual_found_time = jb.at("actual_found_time").get<double>();
        blocks.push_back(b);
    }
    return Chain::from_blocks(std::move(blocks));
}

std::string plan_to_json(const VerifiablePlan& plan) {
    return json{{"capacity", plan.schedule.capacity},
                {"blocks", plan.blocks},
                {"powers", plan.schedule.powers},
                {"duration", plan.duration},
                {"deficit_overcome", plan.deficit_overcome}}
        .dump();
}

std::string plan_to_json(const UnverifiablePlan& plan) {
    return json{{"capacity", plan.capacity},
                {"n", plan.schedule.n_blocks},
                {"claimed_intervals", plan.schedule.claimed_intervals},
                {"terminal_claim", plan.schedule.terminal_claim},
                {"reduced_objective", plan.reduced_objective},
                {"actual_duration", plan.actual_duration},
                {"max_deficit", plan.max_deficit},
                {"foc_residual_norm", plan.foc_residual_norm},
                {"seed", plan.seed}}
        .dump();
}

AttackPlan plan_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object()) throw std::invalid_argument("plan JSON must be an object");

    const auto attack_capacity = [&j] {
        const double c = j.at("capacity").get<double>();
        if (!(std::isfinite(c) && c > 1.0))
            throw std::invalid_argument("plan capacity must exceed the honest rate of 1");
        return c;
    };

    if (j.contains("powers")) {
        VerifiablePlan p;
        p.schedule = PowerSchedule::make(j.at("powers").get<std::vector<double>>(),
                                         attack_capacity());
        p.blocks = j.at("blocks").get<int>();
        if (p.blocks != static_cast<int>(p.schedule.powers.size()))
            throw std::invalid_argument("block count disagrees with the power list");
        p.duration = j.at("duration").get<double>();
        p.deficit_overcome = j.at("deficit_overcome").get<double>();
        return p;
    }
    if (j.contains("claimed_intervals")) {
        UnverifiablePlan p;
        p.schedule = ReportSchedule::make(
            j.at("n").get<int>(), j.at("claimed_intervals").get<std::vector<double>>(),
            j.value("terminal_claim", 1e-9));
        p.capacity = attack_capacity();
        p.reduced_objective = j.value("reduced_objective",
                                      reduced_objective(p.schedule.claimed_intervals));
        p.actual_duration = j.value("actual_duration", p.reduced_objective / p.capacity);
        p.max_deficit = j.value("max_deficit", p.schedule.n_blocks - p.actual_duration);
        p.foc_residual_norm = j.value("foc_residual_norm", foc_residuals(p.schedule).norm());
        p.seed = j.value("seed", std::uint64_t{0});
        return p;
    }
    throw std::invalid_argument("plan JSON needs either \"powers\" or \"claimed_intervals\"");
}

namespace {

const char* plan_kind(const AttackPlan& plan) {
    if (std::holds_alternative<VerifiablePlan>(plan)) return "verifiable";
    if (std::holds_alternative<UnverifiablePlan>(plan)) return "unverifiable";
    return "naive";
}

json scenario_to_json(const AttackScenario& s) {
    return json{{"plan_kind", plan_kind(s.plan)},
                {"deficit", s.deficit},
                {"capacity", s.capacity},
                {"mode", s.mode == DifficultyMode::idealized ? "idealized" : "faithful"},
                {"height_model",
                 s.height_model == HeightModel::continuous ? "continuous" : "integer"}};
}

}  // namespace

std::string outcome_to_json(const AttackOutcome& outcome, const AttackScenario& scenario) {
    json trace = json::array();
    for (const BlockTraceRow& r : outcome.trace)
        trace.push_back(json{{"difficulty", r.difficulty},
                             {"power_applied", r.power_applied},
                             {"actual_duration", r.actual_duration},
                             {"reported_interval", r.reported_interval}});
    json blocks = json::array();
    for (const Block& b : outcome.adversary_chain.blocks()) blocks.push_back(block_to_json(b));
    return json{{"scenario", scenario_to_json(scenario)},
                {"total_duration", outcome.total_duration},
                {"reveal_time", outcome.reveal_time},
                {"honest_height_at_reveal", outcome.honest_height_at_reveal},
                {"honest_height_continuous", outcome.honest_height_continuous},
                {"adversary_height", outcome.adversary_height},
                {"success", outcome.success},
                {"trace", std::move(trace)},
                {"adversary_chain", json{{"blocks", std::move(blocks)}}}}
        .dump();
}

std::string outcome_to_csv(const AttackOutcome& outcome, const AttackScenario& scenario) {
    std::string out =
        "plan,ma,deficit,mode,blocks,duration,reveal_time,adversary_height,honest_height,"
        "success\n";
    out += plan_kind(scenario.plan);
    out += ',';
    out += format_double(scenario.capacity);
    out += ',';
    out += format_double(scenario.deficit);
    out += ',';
    out += scenario.mode == DifficultyMode::idealized ? "idealized" : "faithful";
    out += ',';
    out += std::to_string(outcome.adversary_height);
    out += ',';
    out += format_double(outcome.total_duration);
    out += ',';
    out += format_double(outcome.reveal_time);
    out += ',';
    out += std::to_string(outcome.adversary_height);
    out += ',';
    out += std::to_string(outcome.honest_height_at_reveal);
    out += ',';
    out += outcome.success ? "true" : "false";
    out += '\n';
    return out;
}

}  // namespace lca
