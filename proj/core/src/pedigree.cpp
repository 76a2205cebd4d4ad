#include "kinalloc/pedigree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace kinalloc {

namespace {

using ParentIndex = std::optional<std::size_t>;

struct Indexed {
  std::vector<ParentIndex> mother;
  std::vector<ParentIndex> father;
};

Indexed index_parents(const Pedigree& ped) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ped.size(); ++i) {
    if (!index.emplace(ped.members[i].id, i).second)
      throw std::invalid_argument("duplicate pedigree id '" + ped.members[i].id + "'");
  }
  auto lookup = [&](const std::optional<std::string>& parent, const std::string& child) -> ParentIndex {
    if (!parent) return std::nullopt;
    if (*parent == child) throw std::invalid_argument("'" + child + "' is listed as its own parent");
    const auto it = index.find(*parent);
    if (it == index.end())
      throw std::invalid_argument("parent '" + *parent + "' of '" + child + "' is not in the pedigree");
    return it->second;
  };
  Indexed out;
  for (const auto& m : ped.members) {
    out.mother.push_back(lookup(m.mother, m.id));
    out.father.push_back(lookup(m.father, m.id));
  }
  return out;
}

// Parents before children; throws on a cycle.
std::vector<std::size_t> topological_order(const Pedigree& ped, const Indexed& parents) {
  const std::size_t n = ped.size();
  std::vector<int> pending(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const ParentIndex& p : {parents.mother[i], parents.father[i]}) {
      if (!p) continue;
      ++pending[i];
      children[*p].push_back(i);
    }
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (pending[i] == 0) order.push_back(i);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t c : children[order[k]])
      if (--pending[c] == 0) order.push_back(c);
  }
  if (order.size() != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (pending[i] > 0)
        throw std::invalid_argument("pedigree is cyclic: '" + ped.members[i].id + "' is its own ancestor");
  }
  return order;
}

}  // namespace

std::vector<std::string> Pedigree::ids() const {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.id);
  return out;
}

void validate_pedigree(const Pedigree& ped) {
  const Indexed parents = index_parents(ped);
  topological_order(ped, parents);
}

KinshipTable kinship_table(const Pedigree& ped) {
  const Indexed parents = index_parents(ped);
  const std::vector<std::size_t> order = topological_order(ped, parents);
  const std::size_t n = ped.size();

  Matrix phi(n, n);
  auto phi_or_zero = [&](std::size_t i, const ParentIndex& p) { return p ? phi(i, *p) : 0.0; };

  // Every ancestor of order[k] precedes it, so each pair below only reads
  // entries that are already final.
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    const ParentIndex& m = parents.mother[j];
    const ParentIndex& f = parents.father[j];
    for (std::size_t l = 0; l < k; ++l) {
      const std::size_t i = order[l];
      const double v = 0.5 * (phi_or_zero(i, m) + phi_or_zero(i, f));
      phi(i, j) = v;
      phi(j, i) = v;
    }
    const double parents_kinship = (m && f) ? phi(*m, *f) : 0.0;
    phi(j, j) = 0.5 * (1.0 + parents_kinship);
  }

  KinshipTable table;
  table.inbreeding.resize(n);
  for (std::size_t i = 0; i < n; ++i) table.inbreeding[i] = 2.0 * phi(i, i) - 1.0;

  table.relatedness = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        table.relatedness(i, j) = 1.0;
        continue;
      }
      const double norm = std::sqrt((1.0 + table.inbreeding[i]) * (1.0 + table.inbreeding[j]));
      table.relatedness(i, j) = std::clamp(2.0 * phi(i, j) / norm, 0.0, 1.0);
    }
  }
  table.kinship = std::move(phi);
  return table;
}

Matrix pedigree_to_relatedness(const Pedigree& ped) { return kinship_table(ped).relatedness; }

}  // namespace kinalloc
