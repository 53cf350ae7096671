#pragma once

#include <set>

#include "cdsite/monoidal.hpp"

namespace cdsite {

/// A finite set of commuting squares over a fixed base category. After
/// normalize_cd the set contains the all-identity square on every object.
struct CdStructure {
  const FinCategory* base = nullptr;
  std::vector<CommutingSquare> squares;  // kept sorted and deduplicated

  bool contains(const CommutingSquare& sq) const;
  void insert(const CommutingSquare& sq);
  std::vector<CommutingSquare> nondegenerate() const;
  std::vector<CommutingSquare> squares_with_lr(int obj) const;
};

ValidationReport validate_cd(const CdStructure& p);
CdStructure normalize_cd(const CdStructure& p);
bool is_normalized(const CdStructure& p);

/// Family of morphisms into a common target, canonicalized by sorting legs.
struct CoverFamily {
  int target = -1;
  std::vector<int> legs;  // sorted, deduplicated

  static CoverFamily of(int target, std::vector<int> legs);
  bool operator==(const CoverFamily&) const = default;
  bool operator<(const CoverFamily& o) const {
    return std::tie(target, legs) < std::tie(o.target, o.legs);
  }
};

std::string cover_to_string(const FinCategory& c, const CoverFamily& f);

/// Simple covers of X built from the recursive characterization: isomorphism
/// singletons, plus the composite family (U∘p) ∪ (V∘e) through a
/// non-degenerate distinguished square with lower-right corner X. `depth`
/// bounds the total number of square applications in a derivation.
std::set<CoverFamily> generate_simple_covers(const CdStructure& p, int obj, int depth);

/// The same class generated by leg rewriting: starting from isomorphism
/// singletons, one step replaces a leg f by {f∘p, f∘e} through a
/// non-degenerate square whose lower-right corner is the source of f.
/// `depth` bounds the number of rewriting steps.
std::set<CoverFamily> generate_simple_covers_alt(const CdStructure& p, int obj, int depth);

/// Saturating generation: raises depth until the family set stabilizes, so
/// the result is the full (finite) class of simple covers of obj.
/// `max_depth` is a safety cap; stabilization is reported via `stable`.
std::set<CoverFamily> generate_simple_covers_stable(const CdStructure& p, int obj,
                                                    int max_depth, bool* stable);

bool is_simple_cover(const CdStructure& p, const CoverFamily& f, int max_depth = 8);

struct TensorStabilityReport {
  bool stable = true;
  // A failing instance: the square, the tensoring object, the tensored square.
  CommutingSquare square;
  int object = -1;
  CommutingSquare tensored;
};

CommutingSquare tensor_square(const MonoidalData& m, const CommutingSquare& sq, int z);
TensorStabilityReport is_tensor_stable(const CdStructure& p, const MonoidalData& m);
CdStructure tensor_saturate(const CdStructure& p, const MonoidalData& m);

/// Monoidal cd-structure on a tuple category: squares over the identity
/// reindexing whose coordinate squares are distinguished with at most one
/// non-degenerate coordinate.
CdStructure monoidal_cd(const CdStructure& p, const TupleCategory& t);

/// Tuple cover whose legs are all combinations of per-coordinate simple
/// covers; leg count is the product of the input sizes.
CoverFamily product_cover(const TupleCategory& t, const CdStructure& p, int tuple_obj,
                          const std::vector<CoverFamily>& coordinate_covers,
                          int membership_depth = 8);
/// Tuple cover refining a single coordinate and keeping the others fixed.
CoverFamily coordinate_cover(const TupleCategory& t, const CdStructure& p, int tuple_obj,
                             int coordinate, const CoverFamily& cover,
                             int membership_depth = 8);
/// True iff every coordinate projection of a simple tuple cover contains a
/// simple cover of that coordinate. `p` is the base cd-structure and
/// `p_tuple` its monoidal cd-structure on t.
bool project_cover_check(const TupleCategory& t, const CdStructure& p,
                         const CdStructure& p_tuple, const CoverFamily& family,
                         int max_depth = 8);

struct DimensionFunction {
  std::vector<int> values;  // by object index, each ≥ -1
};

bool check_dimension_function(const FinCategory& c, const DimensionFunction& d);

struct DimCompatReport {
  bool compatible = false;
  std::vector<CommutingSquare> witness;  // the subset P' used
};

/// Searches for P' ⊆ P with the descending-dimension inequalities such that
/// every distinguished square's {e,p}-sieve contains a simple P'-cover. The
/// maximal inequality-satisfying subset is the canonical candidate.
DimCompatReport check_dim_compatible(const CdStructure& p, const DimensionFunction& d,
                                     int max_depth = 8);

DimensionFunction induced_dimension(const DimensionFunction& d, const TupleCategory& t);

}  // namespace cdsite
