#include "cliquemr/graph.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <istream>
#include <sstream>
#include <utility>

namespace cliquemr {

bool Graph::has_node(NodeId label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  return it != labels_.end() && *it == label;
}

std::uint32_t Graph::index_of(NodeId label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label)
    throw std::out_of_range("unknown node " + std::to_string(label));
  return static_cast<std::uint32_t>(it - labels_.begin());
}

std::span<const OrderKey> Graph::high_neighbors_at(std::uint32_t idx) const {
  auto adj = neighbors_at(idx);
  auto it = std::upper_bound(adj.begin(), adj.end(), order_key_at(idx));
  return adj.subspan(static_cast<std::size_t>(it - adj.begin()));
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (std::uint32_t i = 0; i < labels_.size(); ++i)
    for (const OrderKey& nb : high_neighbors_at(i))
      out.push_back(Edge{labels_[i], nb.label});
  return out;
}

std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    std::uint64_t vals[2];
    int nvals = 0;
    const char* p = line.c_str();
    const char* end = p + line.size();
    while (p != end) {
      if (*p == ' ' || *p == '\t') {
        ++p;
        continue;
      }
      if (nvals == 2) throw ParseError(line_no, "expected two labels, got more");
      char* after = nullptr;
      errno = 0;
      unsigned long long v = std::strtoull(p, &after, 10);
      if (after == p || errno == ERANGE || *p == '-')
        throw ParseError(line_no, "not a non-negative integer: '" +
                                      std::string(p, end) + "'");
      if (after != end && *after != ' ' && *after != '\t')
        throw ParseError(line_no, "not a non-negative integer: '" +
                                      std::string(p, end) + "'");
      vals[nvals++] = v;
      p = after;
    }
    if (nvals == 0) throw ParseError(line_no, "blank line");
    if (nvals == 1) throw ParseError(line_no, "expected two labels, got one");
    edges.push_back(Edge{vals[0], vals[1]});
  }
  return edges;
}

Graph normalize(std::vector<Edge> edges, IngestStats* stats) {
  IngestStats local;
  local.lines = edges.size();

  // Canonical (min,max) per edge; self-loops out.
  std::size_t w = 0;
  for (const Edge& e : edges) {
    if (e.u == e.v) {
      ++local.self_loops_removed;
      continue;
    }
    edges[w++] = Edge{std::min(e.u, e.v), std::max(e.u, e.v)};
  }
  edges.resize(w);
  std::sort(edges.begin(), edges.end());
  auto last = std::unique(edges.begin(), edges.end());
  local.duplicate_edges_merged = static_cast<std::uint64_t>(edges.end() - last);
  edges.erase(last, edges.end());

  Graph g;
  g.m_ = edges.size();

  // Node table: every endpoint of a surviving edge.
  g.labels_.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    g.labels_.push_back(e.u);
    g.labels_.push_back(e.v);
  }
  std::sort(g.labels_.begin(), g.labels_.end());
  g.labels_.erase(std::unique(g.labels_.begin(), g.labels_.end()),
                  g.labels_.end());

  const std::size_t n = g.labels_.size();
  g.degrees_.assign(n, 0);
  auto idx = [&](NodeId label) {
    return static_cast<std::uint32_t>(
        std::lower_bound(g.labels_.begin(), g.labels_.end(), label) -
        g.labels_.begin());
  };
  for (const Edge& e : edges) {
    ++g.degrees_[idx(e.u)];
    ++g.degrees_[idx(e.v)];
  }

  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    g.offsets_[i + 1] = g.offsets_[i] + g.degrees_[i];
  g.adjacency_.resize(2 * g.m_);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    std::uint32_t iu = idx(e.u), iv = idx(e.v);
    g.adjacency_[cursor[iu]++] = OrderKey{g.degrees_[iv], e.v};
    g.adjacency_[cursor[iv]++] = OrderKey{g.degrees_[iu], e.u};
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(g.adjacency_.begin() + g.offsets_[i],
              g.adjacency_.begin() + g.offsets_[i + 1]);

  if (stats) *stats = local;
  return g;
}

namespace {

// istream over a gzFile; zlib reads plain files transparently, so one code
// path covers both formats.
class GzStreamBuf : public std::streambuf {
 public:
  explicit GzStreamBuf(const std::string& path) {
    file_ = gzopen(path.c_str(), "rb");
    if (!file_) throw std::runtime_error("cannot open " + path);
    gzbuffer(file_, 1 << 20);
  }
  ~GzStreamBuf() override {
    if (file_) gzclose(file_);
  }

 protected:
  int_type underflow() override {
    int got = gzread(file_, buf_, sizeof(buf_));
    if (got <= 0) {
      if (got < 0) throw std::runtime_error("gzip read error");
      return traits_type::eof();
    }
    setg(buf_, buf_, buf_ + got);
    return traits_type::to_int_type(buf_[0]);
  }

 private:
  gzFile file_ = nullptr;
  char buf_[1 << 16];
};

}  // namespace

Graph load_graph(const std::string& path, IngestStats* stats) {
  GzStreamBuf buf(path);
  std::istream in(&buf);
  return normalize(parse_edge_list(in), stats);
}

HighNeighborhood high_neighborhood(const Graph& g, NodeId u) {
  std::uint32_t idx = g.index_of(u);
  auto high = g.high_neighbors_at(idx);
  return HighNeighborhood{u, std::vector<OrderKey>(high.begin(), high.end())};
}

}  // namespace cliquemr
