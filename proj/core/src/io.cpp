#include "safezone/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "safezone/errors.hpp"

namespace safezone {

namespace {

constexpr const char* kChainHeader = "safezone-chain v1";

// Content lines: blank lines and '#' comments removed.
std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#') continue;
        size_t end = line.find_last_not_of(" \t\r");
        lines.push_back(line.substr(begin, end - begin + 1));
    }
    return lines;
}

long long parse_keyed_int(const std::string& line, const std::string& key) {
    std::istringstream in(line);
    std::string word;
    long long value;
    if (!(in >> word >> value) || word != key)
        throw DomainError("chain file: expected '" + key + " <value>', got '" + line + "'");
    return value;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write file: " + path);
    return out;
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

MarkovChain read_chain(std::istream& in) {
    std::vector<std::string> lines = content_lines(in);
    if (lines.empty() || lines[0] != kChainHeader)
        throw DomainError(std::string("chain file: missing header '") + kChainHeader + "'");
    if (lines.size() < 4) throw DomainError("chain file: truncated header");

    long long n_states = parse_keyed_int(lines[1], "states");
    long long start = parse_keyed_int(lines[2], "start");
    long long horizon = parse_keyed_int(lines[3], "horizon");
    if (n_states <= 0 || n_states > 50'000'000)
        throw DomainError("chain file: unreasonable state count");

    size_t next = 4;
    std::optional<std::vector<int>> labels;
    if (next < lines.size() && lines[next].rfind("layers", 0) == 0) {
        std::istringstream layer_in(lines[next]);
        std::string word;
        layer_in >> word;
        std::vector<int> parsed;
        int label;
        while (layer_in >> label) parsed.push_back(label);
        if (static_cast<long long>(parsed.size()) != n_states)
            throw DomainError("chain file: layer label count does not match states");
        labels = std::move(parsed);
        ++next;
    }

    std::vector<std::vector<Transition>> rows(static_cast<size_t>(n_states));
    for (; next < lines.size(); ++next) {
        std::istringstream edge_in(lines[next]);
        long long src, dst;
        double prob;
        if (!(edge_in >> src >> dst >> prob))
            throw DomainError("chain file: malformed transition line '" + lines[next] + "'");
        if (src < 0 || src >= n_states || dst < 0 || dst >= n_states)
            throw DomainError("chain file: transition endpoint out of range in '" +
                              lines[next] + "'");
        rows[static_cast<size_t>(src)].push_back({static_cast<int>(dst), prob});
    }

    return MarkovChain(static_cast<int>(n_states), static_cast<int>(start),
                       static_cast<int>(horizon), std::move(rows), std::move(labels));
}

MarkovChain read_chain_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return read_chain(in);
}

void write_chain(std::ostream& out, const MarkovChain& chain) {
    out << kChainHeader << "\n";
    out << "states " << chain.n_states() << "\n";
    out << "start " << chain.start_state() << "\n";
    out << "horizon " << chain.horizon() << "\n";
    if (chain.is_layered()) {
        out << "layers";
        for (int label : chain.layer_labels()) out << ' ' << label;
        out << "\n";
    }
    for (int s = 0; s < chain.n_states(); ++s)
        for (const Transition& t : chain.row(s))
            out << s << ' ' << t.target << ' ' << format_double(t.prob) << "\n";
}

void write_chain_file(const std::string& path, const MarkovChain& chain) {
    std::ofstream out = open_output(path);
    write_chain(out, chain);
}

StateSet read_zone(std::istream& in, int universe_size) {
    StateSet zone(universe_size);
    std::string token;
    while (in >> token) {
        if (token[0] == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        long long state;
        try {
            state = std::stoll(token);
        } catch (const std::exception&) {
            throw DomainError("zone file: not a state index: '" + token + "'");
        }
        if (state < 0 || state >= universe_size)
            throw DomainError("zone file: state index out of range: " + token);
        zone.insert(static_cast<int>(state));
    }
    return zone;
}

StateSet read_zone_file(const std::string& path, int universe_size) {
    std::ifstream in = open_input(path);
    return read_zone(in, universe_size);
}

void write_zone(std::ostream& out, const StateSet& zone) {
    bool first = true;
    for (int s : zone.members()) {
        if (!first) out << ' ';
        out << s;
        first = false;
    }
    out << "\n";
}

void write_zone_file(const std::string& path, const StateSet& zone) {
    std::ofstream out = open_output(path);
    write_zone(out, zone);
}

std::vector<Trajectory> read_trajectories(std::istream& in) {
    std::vector<Trajectory> out;
    for (const std::string& line : content_lines(in)) {
        std::istringstream row(line);
        Trajectory traj;
        long long state;
        while (row >> state) traj.states.push_back(static_cast<int>(state));
        if (!traj.states.empty()) out.push_back(std::move(traj));
    }
    return out;
}

void write_trajectories(std::ostream& out, const std::vector<Trajectory>& trajectories) {
    for (const Trajectory& traj : trajectories) {
        bool first = true;
        for (int s : traj.states) {
            if (!first) out << ' ';
            out << s;
            first = false;
        }
        out << "\n";
    }
}

RegularGraph read_graph(std::istream& in) {
    std::vector<std::string> lines = content_lines(in);
    if (lines.empty()) throw DomainError("graph file: empty");
    std::istringstream header(lines[0]);
    RegularGraph graph;
    if (!(header >> graph.n_vertices >> graph.degree))
        throw DomainError("graph file: expected 'n d' header, got '" + lines[0] + "'");
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream edge_in(lines[i]);
        int u, v;
        if (!(edge_in >> u >> v))
            throw DomainError("graph file: malformed edge line '" + lines[i] + "'");
        graph.edges.emplace_back(u, v);
    }
    validate_graph(graph);
    return graph;
}

RegularGraph read_graph_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const RegularGraph& graph) {
    out << graph.n_vertices << ' ' << graph.degree << "\n";
    for (auto [u, v] : graph.edges) out << u << ' ' << v << "\n";
}

void write_graph_file(const std::string& path, const RegularGraph& graph) {
    std::ofstream out = open_output(path);
    write_graph(out, graph);
}

} // namespace safezone
