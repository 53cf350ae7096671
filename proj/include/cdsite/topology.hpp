#pragma once

#include "cdsite/cdstructure.hpp"
#include "cdsite/presheaf.hpp"

namespace cdsite {

/// Precomposition-closed set of morphisms into a fixed object, stored as a
/// sorted vector of morphism indices.
struct Sieve {
  int target = -1;
  std::vector<int> members;

  bool contains(int m) const;
  bool operator==(const Sieve&) const = default;
  bool operator<(const Sieve& o) const {
    return std::tie(target, members) < std::tie(o.target, o.members);
  }
};

Sieve sieve_generate(const FinCategory& c, int target, const std::vector<int>& legs);
Sieve sieve_pullback(const FinCategory& c, int f, const Sieve& s);
Sieve maximal_sieve(const FinCategory& c, int obj);
bool sieve_subset(const Sieve& a, const Sieve& b);
std::string sieve_to_string(const FinCategory& c, const Sieve& s);
// Generating set: members maximal under factorization (one representative per
// mutual-factorization class).
std::vector<int> sieve_generators(const FinCategory& c, const Sieve& s);

// Defaults for the capped combinatorial searches. The per-object sieve cap is
// overridable through the CDSITE_SIEVE_CAP environment variable (CLI).
inline constexpr int kDefaultSieveCap = 64;
inline constexpr int kDefaultAntichainCap = 512;
inline constexpr int kDefaultDepthCap = 8;

// All sieves on obj; throws when more than `cap` exist.
std::vector<Sieve> all_sieves(const FinCategory& c, int obj, int cap = kDefaultSieveCap);

enum class TopologyMode { coarse, full };

/// Grothendieck topology represented by the antichain of minimal covering
/// sieves per object; the covering family is its upward closure.
struct Topology {
  const FinCategory* base = nullptr;
  TopologyMode mode = TopologyMode::coarse;
  std::vector<std::vector<Sieve>> minimal;  // by object

  bool is_covering(const Sieve& s) const;
  // All covering sieves on obj (materializes the sieve lattice; capped).
  std::vector<Sieve> covering_sieves(int obj, int cap = kDefaultSieveCap) const;
};

// Least topology in which every distinguished square's {e,p} sieve covers its
// lower-right corner (and, in full mode, the empty sieve covers the initial
// object). Throws in full mode when no initial object exists.
Topology generate_topology(const CdStructure& p, TopologyMode mode,
                           int antichain_cap = kDefaultAntichainCap);

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct CompletenessReport {
  Verdict verdict = Verdict::pass;
  int object = -1;   // witness object on failure
  Sieve witness;     // covering sieve without a simple cover
};

// c-completeness: every covering sieve of the coarse topology contains a
// simple cover. The full-mode variant quantifies over objects not isomorphic
// to the initial object, against the full topology.
CompletenessReport is_c_complete(const CdStructure& p, int max_depth = kDefaultDepthCap);
CompletenessReport is_complete(const CdStructure& p, int max_depth = kDefaultDepthCap);

// Matching families for F over the sieve s: one element of F(source(f)) per
// member f, compatible under precomposition. A family is encoded by the
// element list in member order.
std::vector<std::vector<int>> matching_families(const Presheaf& f, const Sieve& s);
// The canonical family of a section x of F(target): f ↦ x·f.
std::vector<int> restriction_family(const Presheaf& f, const Sieve& s, int x);

bool is_locally_surjective(const Topology& t, const Presheaf& f, const Presheaf& g,
                           const NatTransform& phi);
bool is_separated(const Topology& t, const Presheaf& f);

/// One application of the plus construction, together with the canonical map
/// from the input presheaf.
struct PlusResult {
  Presheaf sheafed;
  NatTransform unit;  // F → F⁺
};
PlusResult plus_construction(const Topology& t, const Presheaf& f);
// Functorial action on a presheaf morphism: the induced map F⁺ → G⁺.
NatTransform plus_morphism(const Topology& t, const Presheaf& f, const Presheaf& g,
                           const NatTransform& phi);

struct RegularityReport {
  bool regular = true;
  CommutingSquare witness;
  std::string reason;
};

// c-regularity: every non-degenerate distinguished square is a pullback with
// monic bottom edge, and the comparison map
//   y_LL ⊔ (y_UL ×_{y_UR} y_UL) → y_LL ×_{y_LR} y_LL
// is locally surjective for the coarse topology.
RegularityReport is_c_regular(const CdStructure& p);

// Derived-square criterion: every non-degenerate square is a pullback with
// monic bottom edge whose derived square (diagonals into the fibre products
// over UR and LR) exists and is distinguished. A pass licenses c-regularity
// of the monoidal cd-structure.
RegularityReport derived_square_criterion(const CdStructure& p);

// Local-surjectivity criterion for the monoidal cd-structure: tensor
// stability, (c-)completeness, separated representables, and per-square
// pullback/mono/local-surjectivity conditions.
struct MonoidalRegularityReport {
  bool licensed = false;
  std::string reason;
};
MonoidalRegularityReport local_surjectivity_criterion(const CdStructure& p,
                                                      const MonoidalData& m,
                                                      int max_depth = kDefaultDepthCap);

// The comparison map of a square, as a presheaf morphism. Exposed for tests
// and the regularity cross-checks.
struct SquareComparisonMap {
  Presheaf source;  // y_LL ⊔ (y_UL ×_{y_UR} y_UL)
  Presheaf target;  // y_LL ×_{y_LR} y_LL
  NatTransform map;
};
SquareComparisonMap square_comparison_map(const FinCategory& c, const CommutingSquare& sq);

}  // namespace cdsite
