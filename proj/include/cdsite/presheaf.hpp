#pragma once

#include "cdsite/fincat.hpp"

namespace cdsite {

/// Set-valued contravariant functor on a finite category. Carriers are the
/// canonical initial segments {0..card-1}; the action of f: X→Y is a function
/// F(Y) → F(X). In pointed mode element 0 of every carrier is the basepoint
/// and all actions must preserve it.
struct Presheaf {
  const FinCategory* base = nullptr;
  bool pointed = false;
  std::vector<int> card;              // by object
  std::vector<std::vector<int>> act;  // by morphism; size card[target], values < card[source]

  int apply(int m, int elem) const { return act[m][elem]; }

  bool operator==(const Presheaf& o) const {
    return base == o.base && pointed == o.pointed && card == o.card && act == o.act;
  }
};

Presheaf representable(const FinCategory& c, int obj);
Presheaf constant_presheaf(const FinCategory& c, int k);
// Sub-presheaf of the representable y_obj spanned by the given generators
// (all morphisms factoring through them); carriers reindexed canonically.
Presheaf representable_subpresheaf(const FinCategory& c, int obj, const std::vector<int>& gens);

ValidationReport validate_presheaf(const Presheaf& f);

/// Natural transformation F → G as componentwise functions.
struct NatTransform {
  std::vector<std::vector<int>> comps;  // by object; size F.card, values < G.card
};

bool is_natural(const Presheaf& f, const Presheaf& g, const NatTransform& t);
std::vector<NatTransform> enumerate_nat(const Presheaf& f, const Presheaf& g);
bool naturally_isomorphic(const Presheaf& f, const Presheaf& g);
std::optional<NatTransform> find_natural_iso(const Presheaf& f, const Presheaf& g);

// Canonical encoding of the isomorphism class: lexicographically minimal
// (card, action) table over all carrier relabelings (basepoint fixed when
// pointed). Feasible at small carrier sizes.
std::vector<int> presheaf_canonical_key(const Presheaf& f);

// Restriction along a functor: (f*F)(X) = F(fX).
Presheaf restrict_presheaf(const FinFunctor& fun, const Presheaf& f);

}  // namespace cdsite
