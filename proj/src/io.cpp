#include "dshare/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dshare {

namespace {

// Splits a flat row-major vector into nested arrays of the given shape.
json nest(const std::vector<double>& flat, std::span<const int> shape, std::size_t& pos, std::size_t depth = 0) {
    json out = json::array();
    for (int i = 0; i < shape[depth]; ++i) {
        if (depth + 1 == shape.size())
            out.push_back(flat.at(pos++));
        else
            out.push_back(nest(flat, shape, pos, depth + 1));
    }
    return out;
}

json nest(const std::vector<double>& flat, std::vector<int> shape) {
    std::size_t pos = 0;
    return nest(flat, shape, pos);
}

void flatten(const json& j, std::span<const int> shape, const std::string& where, std::vector<double>& out,
             std::size_t depth = 0) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(shape[depth]))
        throw ValidationError("size mismatch: " + where + " expects " + std::to_string(shape[depth]) +
                              " entries at depth " + std::to_string(depth));
    for (const json& e : j) {
        if (depth + 1 == shape.size()) {
            if (!e.is_number()) throw ValidationError("non-numeric entry in " + where);
            out.push_back(e.get<double>());
        } else {
            flatten(e, shape, where, out, depth + 1);
        }
    }
}

std::vector<double> flatten(const json& j, std::vector<int> shape, const std::string& where) {
    std::vector<double> out;
    flatten(j, shape, where, out);
    return out;
}

const json& field(const json& j, const char* name) {
    if (!j.contains(name)) throw ValidationError(std::string("missing field: ") + name);
    return j.at(name);
}

int int_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number_integer()) throw ValidationError(std::string("field must be an integer: ") + name);
    return v.get<int>();
}

std::vector<int> int_list(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_array()) throw ValidationError(std::string("field must be an array: ") + name);
    std::vector<int> out;
    for (const json& e : v) {
        if (!e.is_number_integer()) throw ValidationError(std::string("non-integer entry in ") + name);
        out.push_back(e.get<int>());
    }
    return out;
}

} // namespace

json problem_to_json(const ProblemSpec& spec) {
    const int nx = spec.state_size;
    const int na = spec.joint_action_count();
    json j;
    j["horizon"] = spec.horizon;
    j["num_controllers"] = spec.num_controllers;
    j["delay"] = spec.delay;
    j["state_size"] = nx;
    j["obs_sizes"] = spec.obs_sizes;
    j["action_sizes"] = spec.action_sizes;
    j["initial_dist"] = spec.initial_dist;
    j["initial_obs_kernel"] = json::array();
    j["obs_kernels"] = json::array();
    for (int k = 0; k < spec.num_controllers; ++k) {
        const int ny = spec.obs_sizes[k];
        j["initial_obs_kernel"].push_back(nest(spec.initial_obs_kernel[k], {nx, ny}));
        json per_t = json::array();
        for (const auto& kernel : spec.obs_kernels[k]) per_t.push_back(nest(kernel, {nx, na, ny}));
        j["obs_kernels"].push_back(per_t);
    }
    j["transition_kernels"] = json::array();
    for (const auto& kernel : spec.transition_kernels) j["transition_kernels"].push_back(nest(kernel, {nx, na, nx}));
    j["stage_cost"] = json::array();
    for (const auto& cost : spec.stage_cost) j["stage_cost"].push_back(nest(cost, {nx, na}));
    return j;
}

ProblemSpec problem_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("problem must be a JSON object");
    ProblemSpec spec;
    spec.horizon = int_field(j, "horizon");
    spec.num_controllers = int_field(j, "num_controllers");
    spec.delay = int_field(j, "delay");
    spec.state_size = int_field(j, "state_size");
    spec.obs_sizes = int_list(j, "obs_sizes");
    spec.action_sizes = int_list(j, "action_sizes");
    if (spec.horizon < 1) throw ValidationError("horizon must be at least 1");
    if (spec.num_controllers < 1) throw ValidationError("num_controllers must be at least 1");
    if (spec.delay < 1) throw ValidationError("delay: must be at least 1");
    if (spec.state_size < 1) throw ValidationError("state_size must be at least 1");
    if (spec.obs_sizes.size() != static_cast<std::size_t>(spec.num_controllers) ||
        spec.action_sizes.size() != static_cast<std::size_t>(spec.num_controllers))
        throw ValidationError("size mismatch: obs_sizes/action_sizes need one entry per controller");
    for (int k = 0; k < spec.num_controllers; ++k)
        if (spec.obs_sizes[k] < 1 || spec.action_sizes[k] < 1)
            throw ValidationError("observation and action spaces must be nonempty");

    const int nx = spec.state_size;
    const int na = spec.joint_action_count();
    const int K = spec.num_controllers;
    spec.initial_dist = flatten(field(j, "initial_dist"), {nx}, "initial_dist");

    const json& iok = field(j, "initial_obs_kernel");
    if (!iok.is_array() || iok.size() != static_cast<std::size_t>(K))
        throw ValidationError("size mismatch: initial_obs_kernel needs one kernel per controller");
    for (int k = 0; k < K; ++k)
        spec.initial_obs_kernel.push_back(flatten(iok[k], {nx, spec.obs_sizes[k]}, "initial_obs_kernel"));

    const json& ok = field(j, "obs_kernels");
    if (!ok.is_array() || ok.size() != static_cast<std::size_t>(K))
        throw ValidationError("size mismatch: obs_kernels needs one list per controller");
    spec.obs_kernels.resize(K);
    for (int k = 0; k < K; ++k) {
        if (!ok[k].is_array() || ok[k].size() != static_cast<std::size_t>(spec.horizon - 1))
            throw ValidationError("size mismatch: obs_kernels[k] needs horizon-1 kernels");
        for (const json& kernel : ok[k])
            spec.obs_kernels[k].push_back(flatten(kernel, {nx, na, spec.obs_sizes[k]}, "obs_kernels"));
    }

    const json& tk = field(j, "transition_kernels");
    if (!tk.is_array() || tk.size() != static_cast<std::size_t>(spec.horizon - 1))
        throw ValidationError("size mismatch: transition_kernels needs horizon-1 kernels");
    for (const json& kernel : tk) spec.transition_kernels.push_back(flatten(kernel, {nx, na, nx}, "transition_kernels"));

    const json& sc = field(j, "stage_cost");
    if (!sc.is_array() || sc.size() != static_cast<std::size_t>(spec.horizon))
        throw ValidationError("size mismatch: stage_cost needs horizon entries");
    for (const json& cost : sc) spec.stage_cost.push_back(flatten(cost, {nx, na}, "stage_cost"));

    return validate_problem(spec);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

ProblemSpec load_problem(const std::string& path) { return problem_from_json(read_json_file(path)); }

void save_problem(const std::string& path, const ProblemSpec& spec) {
    write_text(path, problem_to_json(spec).dump(2) + "\n");
}

json strategies_to_json(const StrategyTuple& strategies) {
    json list = json::array();
    for (const Strategy& s : strategies) list.push_back(s.actions);
    return json{{"strategies", list}};
}

StrategyTuple strategies_from_json(const ProblemSpec& spec, const json& j) {
    const json* list = &j;
    if (j.is_object()) {
        if (j.contains("strategies"))
            list = &j.at("strategies");
        else if (j.contains("result") && j.at("result").contains("strategies"))
            list = &j.at("result").at("strategies");
        else
            throw ValidationError("missing field: strategies");
    }
    StrategyTuple out;
    try {
        for (const json& s : *list) out.push_back(Strategy{s.get<std::vector<std::vector<int>>>()});
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed strategies: ") + e.what());
    }
    check_strategies(spec, out);
    return out;
}

StrategyTuple load_strategies(const ProblemSpec& spec, const std::string& path) {
    return strategies_from_json(spec, read_json_file(path));
}

std::string instance_hash(const ProblemSpec& spec) {
    const std::string text = problem_to_json(spec).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string belief_csv(std::span<const double> probs) {
    std::ostringstream os;
    os.precision(17);
    os << "index,probability\n";
    for (std::size_t i = 0; i < probs.size(); ++i) os << i << ',' << probs[i] << '\n';
    return os.str();
}

json value_table_to_json(const ValueTable& table) {
    json epochs = json::array();
    for (std::size_t t = 0; t < table.entries.size(); ++t) {
        json rows = json::array();
        for (std::size_t code = 0; code < table.entries[t].size(); ++code) {
            const ValueEntry& e = table.entries[t][code];
            if (!e.reachable) continue;
            rows.push_back({{"code", code}, {"value", e.value}, {"action", e.action}});
        }
        epochs.push_back({{"t", t + 1}, {"entries", rows}});
    }
    return {{"owner", table.owner}, {"backend", to_string(table.backend)}, {"epochs", epochs}};
}

std::string value_table_csv(const ValueTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "owner,t,code,reachable,value,action\n";
    for (std::size_t t = 0; t < table.entries.size(); ++t)
        for (std::size_t code = 0; code < table.entries[t].size(); ++code) {
            const ValueEntry& e = table.entries[t][code];
            os << table.owner << ',' << t + 1 << ',' << code << ',' << (e.reachable ? 1 : 0) << ',' << e.value
               << ',' << e.action << '\n';
        }
    return os.str();
}

json grouped_table_to_json(const GroupedValueTable& table) {
    json epochs = json::array();
    for (std::size_t t = 0; t < table.groups.size(); ++t) {
        json rows = json::array();
        for (const auto& [key, group] : table.groups[t])
            rows.push_back({{"key", key}, {"value", group.value}, {"action", group.action}, {"members", group.members}});
        epochs.push_back({{"t", t + 1}, {"groups", rows}});
    }
    return {{"owner", table.owner}, {"backend", to_string(table.backend)}, {"epochs", epochs}};
}

std::string grouped_table_csv(const GroupedValueTable& table) {
    std::ostringstream os;
    os.precision(17);
    os << "owner,t,group,members,value,action\n";
    for (std::size_t t = 0; t < table.groups.size(); ++t) {
        std::size_t index = 0;
        for (const auto& [key, group] : table.groups[t]) {
            os << table.owner << ',' << t + 1 << ',' << index++ << ',';
            for (std::size_t m = 0; m < group.members.size(); ++m) os << (m ? ";" : "") << group.members[m];
            os << ',' << group.value << ',' << group.action << '\n';
        }
    }
    return os.str();
}

} // namespace dshare
