#include "cheeger/graph_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "cheeger/errors.hpp"
#include "cheeger/generators.hpp"

namespace cheeger {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream is(body);
  std::vector<std::string> tokens;
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  return tokens;
}

std::optional<double> parse_double(const std::string& tok) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

std::optional<std::size_t> parse_index(const std::string& tok) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

struct RawEdge {
  std::string u, v;
  double weight;
  std::size_t line;
};

}  // namespace

LoadedGraph read_graph(std::istream& in, bool normalize) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::pair<std::size_t, std::size_t>> header;
  std::vector<RawEdge> raw;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (!header) {
      if (tokens.size() != 2) throw GraphParseError("expected header \"n m\"", lineno);
      auto n = parse_index(tokens[0]);
      auto m = parse_index(tokens[1]);
      if (!n || !m) throw GraphParseError("header counts must be nonnegative integers", lineno);
      header = {*n, *m};
      continue;
    }
    if (tokens.size() != 3) throw GraphParseError("expected \"u v w\"", lineno);
    auto w = parse_double(tokens[2]);
    if (!w) throw GraphParseError("weight \"" + tokens[2] + "\" is not a number", lineno);
    raw.push_back({tokens[0], tokens[1], *w, lineno});
  }
  if (!header) throw GraphParseError("missing header", lineno);
  const auto [n, m] = *header;
  if (raw.size() != m) {
    throw GraphParseError("header promises " + std::to_string(m) + " edges, found " +
                              std::to_string(raw.size()),
                          lineno);
  }

  // Label resolution.
  bool numeric = true;
  for (const RawEdge& e : raw) {
    auto a = parse_index(e.u);
    auto b = parse_index(e.v);
    if (!a || !b || *a >= n || *b >= n) {
      numeric = false;
      break;
    }
  }
  LoadedGraph out;
  std::unordered_map<std::string, Vertex> index;
  auto resolve = [&](const std::string& label, std::size_t at) -> Vertex {
    if (numeric) return *parse_index(label);
    auto it = index.find(label);
    if (it != index.end()) return it->second;
    if (index.size() == n) {
      throw GraphValidationError("line " + std::to_string(at) + ": more than " +
                                 std::to_string(n) + " distinct labels");
    }
    const Vertex id = index.size();
    index.emplace(label, id);
    out.labels.push_back(label);
    return id;
  };

  // Directed view: weight as listed from each endpoint.
  std::map<std::pair<Vertex, Vertex>, double> directed;
  for (const RawEdge& e : raw) {
    const Vertex u = resolve(e.u, e.line);
    const Vertex v = resolve(e.v, e.line);
    if (u == v) {
      throw GraphValidationError("line " + std::to_string(e.line) + ": self-loop");
    }
    if (!(e.weight > 0.0)) {
      throw GraphValidationError("line " + std::to_string(e.line) + ": nonpositive weight");
    }
    if (!directed.emplace(std::pair{u, v}, e.weight).second) {
      throw GraphValidationError("line " + std::to_string(e.line) + ": duplicate edge");
    }
  }
  if (numeric) {
    for (Vertex v = 0; v < n; ++v) out.labels.push_back(std::to_string(v));
  } else {
    for (std::size_t v = out.labels.size(); v < n; ++v) {
      out.labels.push_back("#unlabeled" + std::to_string(v));
    }
  }

  std::vector<Edge> edges;
  std::map<std::pair<Vertex, Vertex>, std::pair<double, double>> pairs;  // (w_uv, w_vu), u < v
  for (const auto& [key, w] : directed) {
    const auto [u, v] = key;
    if (u > v && directed.count({v, u})) continue;  // handled from the other side
    auto reverse = directed.find({v, u});
    const double back = reverse == directed.end() ? w : reverse->second;
    if (!normalize && back != w) {
      std::ostringstream os;
      os.precision(17);
      os << "asymmetric weights on edge (" << u << ", " << v << "): " << w << " vs " << back;
      throw GraphValidationError(os.str());
    }
    pairs[std::minmax(u, v)] = u < v ? std::pair{w, back} : std::pair{back, w};
  }

  if (!normalize) {
    for (const auto& [key, w] : pairs) edges.push_back({key.first, key.second, w.first});
    out.graph = WeightedGraph::from_edges(n, edges);
    return out;
  }

  std::vector<double> degree(n, 0.0);
  for (const auto& [key, w] : pairs) {
    degree[key.first] += w.first;
    degree[key.second] += w.second;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (degree[v] <= 0.0) {
      throw GraphValidationError("vertex " + out.labels[v] + " has no incident edges");
    }
  }
  for (const auto& [key, w] : pairs) {
    const double avg = 0.5 * (w.first / degree[key.first] + w.second / degree[key.second]);
    edges.push_back({key.first, key.second, avg});
  }
  out.graph = WeightedGraph::from_edges(n, normalize_to_unit_degree(n, std::move(edges)));
  return out;
}

LoadedGraph load_graph(const std::filesystem::path& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw GraphParseError("cannot open " + path.string(), 0);
  return read_graph(in, normalize);
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  char buf[64];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << e.u << ' ' << e.v << ' ' << buf << '\n';
  }
}

void save_graph(const std::filesystem::path& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_graph(out, g);
}

}  // namespace cheeger
