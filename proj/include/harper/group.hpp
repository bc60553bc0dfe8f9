#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "harper/errors.hpp"

namespace harper {

class Multiplier;  // cocycle.hpp; extension models carry a handle to the base multiplier
class GroupModel;

enum class Family { Lattice, Heisenberg, Lamplighter, FreeWord, Extension };

// Normal-form element of one of the supported group families. Immutable.
//
//   Lattice      coords (x_1..x_d); finite quotients store residues in [0,N_i)
//   Heisenberg   (x,y,z) with (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y')
//   Lamplighter  lamp set (strictly increasing positions) + shift
//   FreeWord     freely reduced word, letters +-1..+-k
//   Extension    (k, base) with k a residue mod r, kernel written as zeta_r^k
class GroupElement {
 public:
  GroupElement() : family_(Family::Lattice) {}

  static GroupElement lattice(std::vector<std::int64_t> coords);
  static GroupElement heisenberg(std::int64_t x, std::int64_t y, std::int64_t z);
  static GroupElement lamplighter(std::vector<std::int64_t> lamps, std::int64_t shift);
  static GroupElement free_word(const std::vector<std::int64_t>& letters);
  static GroupElement extension(std::int64_t k, GroupElement base);

  Family family() const { return family_; }

  const std::vector<std::int64_t>& coords() const { return data_; }
  std::int64_t heis_x() const { return data_[0]; }
  std::int64_t heis_y() const { return data_[1]; }
  std::int64_t heis_z() const { return data_[2]; }
  std::int64_t shift() const { return data_[0]; }
  std::vector<std::int64_t> lamps() const { return {data_.begin() + 1, data_.end()}; }
  const std::vector<std::int64_t>& letters() const { return data_; }
  std::int64_t ext_k() const { return data_[0]; }
  const GroupElement& ext_base() const { return *base_; }

  bool operator==(const GroupElement& o) const;
  bool operator<(const GroupElement& o) const;
  std::size_t hash() const;
  std::string to_string() const;

 private:
  Family family_;
  std::vector<std::int64_t> data_;
  std::shared_ptr<const GroupElement> base_;  // Extension only
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& e) const { return e.hash(); }
};

// A group family together with its generating set, amenability flag and
// optional finite-quotient parameters. A model with quotient parameters *is*
// the finite quotient: multiplication reduces to canonical residues.
class GroupModel {
 public:
  static GroupModel lattice(int dim);
  static GroupModel lattice_quotient(std::vector<std::int64_t> moduli);
  static GroupModel heisenberg();
  static GroupModel lamplighter();
  static GroupModel lamplighter_quotient(std::int64_t cycle);
  static GroupModel free_group(int rank);
  static GroupModel extension(GroupModel base, std::int64_t r,
                              std::shared_ptr<const Multiplier> sigma);

  Family family() const { return family_; }
  bool amenable() const { return amenable_; }
  bool finite() const;
  std::int64_t group_order() const;  // finite models only
  int lattice_dim() const { return dim_; }
  int free_rank() const { return dim_; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  GroupElement identity() const;

  bool has_quotient() const;
  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  std::int64_t lamp_cycle() const { return cycle_; }

  std::int64_t ext_order() const { return ext_r_; }
  const GroupModel& ext_base() const { return *ext_base_; }
  const Multiplier& ext_sigma() const { return *ext_sigma_; }
  std::shared_ptr<const Multiplier> ext_sigma_ptr() const { return ext_sigma_; }

  std::uint64_t ball_cap() const { return ball_cap_; }
  void set_ball_cap(std::uint64_t cap) { ball_cap_ = cap; }
  // replaces the default generating set (elements must belong to the family)
  void set_generators(std::vector<GroupElement> gens);

  bool same_group(const GroupModel& o) const;
  std::string describe() const;

 private:
  Family family_ = Family::Lattice;
  int dim_ = 0;  // lattice dimension / free rank
  std::vector<GroupElement> generators_;
  bool amenable_ = true;
  std::vector<std::int64_t> moduli_;  // lattice quotient
  std::int64_t cycle_ = 0;            // lamplighter quotient
  std::int64_t ext_r_ = 0;
  std::shared_ptr<const GroupModel> ext_base_;
  std::shared_ptr<const Multiplier> ext_sigma_;
  std::uint64_t ball_cap_ = 1000000;
};

// Nested finite sets X_m with their outer kappa-boundary in the word metric,
// #bd X_m / #X_m -> 0 along levels for the amenable families.
struct FolnerScheme {
  GroupModel model;
  int level = 0;
  int kappa = 0;
  std::vector<GroupElement> set;       // X_m, canonically sorted
  std::vector<GroupElement> boundary;  // bd X_m = kappa-neighbourhood minus X_m

  double ratio() const {
    return static_cast<double>(boundary.size()) / static_cast<double>(set.size());
  }
};

GroupElement multiply(const GroupModel& model, const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupModel& model, const GroupElement& a);

// All elements at word-metric distance <= radius from the identity,
// canonically ordered. Throws resource_error past the model's ball cap.
std::vector<GroupElement> ball(const GroupModel& model, int radius);

FolnerScheme folner_set(const GroupModel& model, int level, int kappa);

// Canonical image under the configured finite quotient (or, for extension
// elements, the projection to the base group).
GroupElement quotient_project(const GroupModel& model, const GroupElement& a);

// Full enumeration of a finite model, canonically sorted.
std::vector<GroupElement> enumerate_group(const GroupModel& model);

}  // namespace harper
