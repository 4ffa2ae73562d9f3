#pragma once

#include <map>
#include <string>
#include <vector>

#include "wtap/entropy_algebra.hpp"
#include "wtap/rng.hpp"
#include "wtap/text_doc.hpp"

namespace wtap {

// Bayesian structure: each node lists its parents. Grouped triples name
// extra conditional independences (A ; B | C) whose A or B side ranges over
// all nonempty subsets of a list; each is confirmed by d-separation.
struct Factorization {
  struct Family {
    VarSet names;
    bool all_subsets = false;
  };
  struct Grouped {
    Family a, b;
    VarSet c;
  };

  std::string name;
  std::vector<std::string> nodes;
  std::map<std::string, VarSet> parents;
  std::vector<Grouped> grouped;
};

bool d_separated(const Factorization& f, const VarSet& a, const VarSet& b, const VarSet& c);

// Every single-variable triple I(a;b|c) (c empty or one variable) implied by
// d-separation, plus every member of the grouped families.
EqualitySet derive_equalities(const Factorization& f);

// The structure p(q,u) p(v1,v2,x|u) p(y1,y2,z|x) with its grouped families.
Factorization general_structure();
// U -> X -> Y1 -> Y2 -> Z.
Factorization degraded_chain_structure();

// Joint pmf over all nodes with every conditional p(node | parents) drawn
// row-wise from Dirichlet(1). Table variables follow a topological order.
// flatten[n] = m mixes every row of node n with weight m toward uniform.
ProbTable random_factored_joint(const Factorization& f, const std::map<std::string, std::size_t>& cards,
                                Rng& rng, const std::map<std::string, double>& flatten = {});

std::vector<Factorization> parse_factorizations(const TextDoc& doc);
Factorization load_factorization(const std::string& path, const std::string& name);

}  // namespace wtap
