#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "websample/webgraph.hpp"

namespace websample {

// Line-oriented text format:
//   webgraph v1 n=<N> m=<M>
//   N <id> <url> <host> <domain> <tld> <content_length> <behavior>
//   E <src> <dst>
// with behavior one of normal|deadend|fetchfail|timeout|redirect:<id>|sid:<ok|err|redir>.

std::string format_behavior(const Behavior& b);
Behavior parse_behavior(const std::string& token);  // throws ParameterError

void save_graph(const WebGraph& graph, std::ostream& out);
void save_graph(const WebGraph& graph, const std::filesystem::path& path);
std::string to_text(const WebGraph& graph);

/// Throws ParseError (with line number) on malformed input.
WebGraph load_graph(std::istream& in);
WebGraph load_graph(const std::filesystem::path& path);

/// FNV-1a over the serialized form; equal graphs hash equal.
std::uint64_t graph_hash(const WebGraph& graph);

} // namespace websample
