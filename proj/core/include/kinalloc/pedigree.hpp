#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kinalloc/matrix.hpp"

namespace kinalloc {

struct PedigreeMember {
  std::string id;
  std::optional<std::string> mother;
  std::optional<std::string> father;
};

/// Founders have no parents and are taken as unrelated and non-inbred.
struct Pedigree {
  std::vector<PedigreeMember> members;

  std::size_t size() const { return members.size(); }
  std::vector<std::string> ids() const;
};

struct KinshipTable {
  Matrix kinship;                 // phi(i,j), pedigree order
  std::vector<double> inbreeding; // F_i = phi(mother(i), father(i))
  Matrix relatedness;             // Wright's coefficient
};

/// Throws std::invalid_argument for duplicate ids, unknown parents, a member
/// listed as its own parent, or a cycle in the parent relation.
void validate_pedigree(const Pedigree& ped);

/// Kinship by the recursion
///   phi(i,i) = (1 + phi(m_i, f_i)) / 2
///   phi(i,j) = (phi(i, m_j) + phi(i, f_j)) / 2   for j not an ancestor of i
/// and Wright's coefficient r(i,j) = 2 phi(i,j) / sqrt((1 + F_i)(1 + F_j)).
KinshipTable kinship_table(const Pedigree& ped);

/// Wright relatedness in pedigree order; r(i,i) = 1.
Matrix pedigree_to_relatedness(const Pedigree& ped);

}  // namespace kinalloc
