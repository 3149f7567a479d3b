#include "rrt/tree.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rrt {

RecursiveTree::RecursiveTree(std::vector<Vertex> parents, std::vector<double> births)
    : parents_(std::move(parents)), births_(std::move(births)) {
  for (Vertex v = 2; v <= size(); ++v) {
    if (parent_of(v) < 1 || parent_of(v) >= v)
      throw std::invalid_argument("RecursiveTree: parent(v) must lie in [1, v-1]");
  }
  if (!births_.empty()) {
    if (births_.size() != parents_.size() + 1)
      throw std::invalid_argument("RecursiveTree: birth times must cover every vertex");
    if (births_[0] != 0.0)
      throw std::invalid_argument("RecursiveTree: root must be born at time 0");
    for (std::size_t i = 1; i < births_.size(); ++i)
      if (births_[i] <= births_[i - 1])
        throw std::invalid_argument("RecursiveTree: birth times must increase with the label");
  }
}

std::uint64_t SiteMarks::open_count() const {
  std::uint64_t c = 0;
  for (auto m : open_) c += m;
  return c;
}

void grow_uniform_into(std::vector<Vertex>& parents, Vertex n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("grow_uniform: n must be >= 1");
  parents.resize(n - 1);
  for (Vertex v = 2; v <= n; ++v)
    parents[v - 2] = Vertex(1 + rng.bounded(v - 1));
}

RecursiveTree grow_uniform(Vertex n, Rng& rng) {
  std::vector<Vertex> parents;
  grow_uniform_into(parents, n, rng);
  return RecursiveTree(std::move(parents));
}

RecursiveTree grow_yule(Vertex n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("grow_yule: n must be >= 1");
  std::vector<Vertex> parents(n - 1);
  std::vector<double> births(n);
  births[0] = 0.0;
  double t = 0.0;
  for (Vertex k = 1; k < n; ++k) {
    t += rng.exponential(double(k));  // k independent rate-1 clocks
    births[k] = t;
    parents[k - 1] = Vertex(1 + rng.bounded(k));
  }
  return RecursiveTree(std::move(parents), std::move(births));
}

void mark_sites_into(std::vector<std::uint8_t>& open, Vertex n, double p, Rng& rng) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("mark_sites: p must lie in (0,1)");
  open.resize(n);
  for (Vertex v = 0; v < n; ++v) open[v] = rng.bernoulli(p) ? 1 : 0;
}

SiteMarks mark_sites(const RecursiveTree& tree, double p, Rng& rng) {
  std::vector<std::uint8_t> open;
  mark_sites_into(open, tree.size(), p, rng);
  return SiteMarks(std::move(open));
}

RecursiveTreeEnumerator::RecursiveTreeEnumerator(Vertex n, Vertex cap) : n_(n) {
  if (n < 1) throw std::invalid_argument("enumerate_recursive_trees: n must be >= 1");
  if (n > cap) throw std::invalid_argument("enumerate_recursive_trees: n exceeds the enumeration cap");
  current_.assign(n >= 2 ? n - 1 : 0, 1);
}

bool RecursiveTreeEnumerator::next(std::vector<Vertex>& parents) {
  if (done_) return false;
  if (first_) {
    first_ = false;
    parents = current_;
    if (current_.empty()) done_ = true;
    return true;
  }
  // Odometer over (parent(2), ..., parent(n)), digit v-2 counts 1..v-1.
  std::size_t i = current_.size();
  while (i > 0) {
    --i;
    if (current_[i] < Vertex(i + 1)) {
      ++current_[i];
      for (std::size_t j = i + 1; j < current_.size(); ++j) current_[j] = 1;
      parents = current_;
      return true;
    }
  }
  done_ = true;
  return false;
}

std::uint64_t RecursiveTreeEnumerator::count(Vertex n) {
  std::uint64_t c = 1;
  for (Vertex v = 2; v < n; ++v) c *= v;
  return c;
}

void for_each_recursive_tree(Vertex n,
                             const std::function<void(const std::vector<Vertex>&)>& fn,
                             Vertex cap) {
  RecursiveTreeEnumerator en(n, cap);
  std::vector<Vertex> parents;
  while (en.next(parents)) fn(parents);
}

std::string export_dot(const RecursiveTree& tree, const SiteMarks* marks) {
  std::ostringstream out;
  out << "graph recursive_tree {\n";
  if (marks) out << "  node [style=filled];\n";
  for (Vertex v = 1; v <= tree.size(); ++v) {
    out << "  " << v;
    if (marks)
      out << " [fillcolor=\"" << (marks->is_open(v) ? "palegreen" : "lightcoral") << "\"]";
    out << ";\n";
  }
  for (Vertex v = 2; v <= tree.size(); ++v)
    out << "  " << tree.parent_of(v) << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

std::string to_json(const RecursiveTree& tree, const SiteMarks* marks) {
  nlohmann::json j;
  j["n"] = tree.size();
  j["parent"] = tree.parents();
  if (tree.has_birth_times()) j["birth"] = tree.births();
  if (marks) j["marks"] = marks->raw();
  return j.dump();
}

std::pair<RecursiveTree, std::optional<SiteMarks>> tree_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto n = j.at("n").get<Vertex>();
  auto parents = j.at("parent").get<std::vector<Vertex>>();
  if (parents.size() + 1 != n) throw std::invalid_argument("tree_from_json: parent array length mismatch");
  std::vector<double> births;
  if (j.contains("birth")) births = j.at("birth").get<std::vector<double>>();
  RecursiveTree tree(std::move(parents), std::move(births));
  std::optional<SiteMarks> marks;
  if (j.contains("marks")) {
    auto raw = j.at("marks").get<std::vector<std::uint8_t>>();
    if (raw.size() != n) throw std::invalid_argument("tree_from_json: marks length mismatch");
    marks = SiteMarks(std::move(raw));
  }
  return {std::move(tree), std::move(marks)};
}

}  // namespace rrt
