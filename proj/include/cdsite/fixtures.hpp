#pragma once

#include <memory>

#include "cdsite/cdstructure.hpp"

namespace cdsite::fixtures {

/// The commuting-square poset a < b, c < d with meet a = b∧c. Ships with the
/// meet tensor (unit d), one distinguished square (a,b,c,d), and the
/// dimension grading (-1, 1, 1, 2).
struct SqSite {
  FinCategory cat;
  MonoidalData meet;     // on cat
  CdStructure square;    // normalized, contains the (a,b,c,d) square
  DimensionFunction dim;
  int a = -1, b = -1, c = -1, d = -1;
  int ab = -1, ac = -1, ad = -1, bd = -1, cd = -1;
};

std::unique_ptr<SqSite> make_sq();

// SQ with the square composition entry (bd, ab) rewired to a wrong morphism.
std::unique_ptr<FinCategory> make_sq_broken();

// SQ extended by a second cone point a2 with maps to b, c, d; the square no
// longer has a universal apex.
std::unique_ptr<FinCategory> make_sq_extra_cone();

// Parallel pair u, v : x → y collapsed by w : y → z.
struct ParSite {
  FinCategory cat;
  int x = -1, y = -1, z = -1;
  int u = -1, v = -1, w = -1, s = -1;
};
std::unique_ptr<ParSite> make_parallel_collapse();

// SQ plus a fifth object e < d only; the {e,p}-sieve of the square pulls
// back to the empty sieve on e, so the coarse topology is not c-complete.
struct SqeSite {
  FinCategory cat;
  CdStructure square;
  int e = -1;
};
std::unique_ptr<SqeSite> make_sq_with_orphan();

// Two isomorphic apexes a ≅ a2 over the square; for pullback invariance
// under isomorphic replacement of the apex.
struct SqIsoSite {
  FinCategory cat;
  int a = -1, a2 = -1, b = -1, c = -1, d = -1;
  CommutingSquare original;
  CommutingSquare transported;
};
std::unique_ptr<SqIsoSite> make_sq_iso_apex();

// Full subcategory of SQ on the given object names, with the inclusion.
struct SubSite {
  FinCategory cat;
  FinFunctor inclusion;  // into the owning SqSite's category
};
std::unique_ptr<SubSite> make_sq_subcategory(const SqSite& sq, const std::vector<std::string>& objects);

// The b↔c swap automorphism of SQ.
FinFunctor make_sq_swap(const SqSite& sq);

/// Deterministic generator of random finite poset sites with proper squares
/// (four pairwise distinct corners). Composition is forced by thinness.
struct RandomSite {
  FinCategory cat;
  CdStructure squares;  // normalized
};
std::unique_ptr<RandomSite> make_random_poset_site(unsigned long long seed, int max_objects,
                                                   int max_squares);

}  // namespace cdsite::fixtures
