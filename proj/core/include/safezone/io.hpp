#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "safezone/markov_chain.hpp"
#include "safezone/oracle.hpp"

namespace safezone {

// Chain file (text, versioned):
//   safezone-chain v1
//   states N
//   start S
//   horizon H
//   layers l0 l1 ... l{N-1}     (optional)
//   src dst prob                (one line per nonzero transition)
// Blank lines and lines starting with '#' are ignored. Probabilities are
// written with round-trip precision.
MarkovChain read_chain(std::istream& in);
MarkovChain read_chain_file(const std::string& path);
void write_chain(std::ostream& out, const MarkovChain& chain);
void write_chain_file(const std::string& path, const MarkovChain& chain);

// Zone file: whitespace-separated state indices.
StateSet read_zone(std::istream& in, int universe_size);
StateSet read_zone_file(const std::string& path, int universe_size);
void write_zone(std::ostream& out, const StateSet& zone);
void write_zone_file(const std::string& path, const StateSet& zone);

// Trajectories: one whitespace-separated index row per trajectory.
std::vector<Trajectory> read_trajectories(std::istream& in);
void write_trajectories(std::ostream& out, const std::vector<Trajectory>& trajectories);

// Graph file: first content line "n d", then one "u v" line per edge.
RegularGraph read_graph(std::istream& in);
RegularGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const RegularGraph& graph);
void write_graph_file(const std::string& path, const RegularGraph& graph);

// Round-trip decimal formatting for all numeric output (%.17g, C locale).
std::string format_double(double value);

} // namespace safezone
