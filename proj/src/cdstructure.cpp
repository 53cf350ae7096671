#include "cdsite/cdstructure.hpp"

#include <algorithm>
#include <map>

namespace cdsite {

bool CdStructure::contains(const CommutingSquare& sq) const {
  return std::binary_search(squares.begin(), squares.end(), sq);
}

void CdStructure::insert(const CommutingSquare& sq) {
  auto it = std::lower_bound(squares.begin(), squares.end(), sq);
  if (it == squares.end() || !(*it == sq)) squares.insert(it, sq);
}

std::vector<CommutingSquare> CdStructure::nondegenerate() const {
  std::vector<CommutingSquare> out;
  for (const auto& sq : squares)
    if (!square_degenerate(*base, sq)) out.push_back(sq);
  return out;
}

std::vector<CommutingSquare> CdStructure::squares_with_lr(int obj) const {
  std::vector<CommutingSquare> out;
  for (const auto& sq : squares)
    if (sq.lr == obj) out.push_back(sq);
  return out;
}

ValidationReport validate_cd(const CdStructure& p) {
  ValidationReport rep;
  for (const auto& sq : p.squares)
    if (!square_commutes(*p.base, sq))
      rep.fail("square " + square_to_string(*p.base, sq) + " does not commute");
  return rep;
}

CdStructure normalize_cd(const CdStructure& p) {
  CdStructure out = p;
  for (int o = 0; o < p.base->object_count(); ++o) out.insert(degenerate_square(*p.base, o));
  return out;
}

bool is_normalized(const CdStructure& p) {
  for (int o = 0; o < p.base->object_count(); ++o)
    if (!p.contains(degenerate_square(*p.base, o))) return false;
  return true;
}

CoverFamily CoverFamily::of(int target, std::vector<int> legs) {
  std::sort(legs.begin(), legs.end());
  legs.erase(std::unique(legs.begin(), legs.end()), legs.end());
  return CoverFamily{target, std::move(legs)};
}

std::string cover_to_string(const FinCategory& c, const CoverFamily& f) {
  std::string s = "{";
  for (size_t i = 0; i < f.legs.size(); ++i) {
    if (i) s += ", ";
    s += c.morphism_name(f.legs[i]);
  }
  return s + "} -> " + c.object_name(f.target);
}

namespace {

std::vector<CoverFamily> iso_families(const FinCategory& c, int obj) {
  std::vector<CoverFamily> out;
  for (int m : c.morphisms_into(obj))
    if (c.is_iso(m)) out.push_back(CoverFamily::of(obj, {m}));
  return out;
}

}  // namespace

std::set<CoverFamily> generate_simple_covers(const CdStructure& p, int obj, int depth) {
  if (!is_normalized(p)) throw error("generate_simple_covers: cd-structure not normalized");
  const FinCategory& c = *p.base;
  int nobj = c.object_count();
  // exact[k][o] = families of o derivable with exactly k square applications.
  std::vector<std::vector<std::set<CoverFamily>>> exact(
      depth + 1, std::vector<std::set<CoverFamily>>(nobj));
  for (int o = 0; o < nobj; ++o)
    for (const auto& f : iso_families(c, o)) exact[0][o].insert(f);
  auto nondeg = p.nondegenerate();
  for (int k = 1; k <= depth; ++k) {
    for (const auto& sq : nondeg) {
      for (int ku = 0; ku < k; ++ku) {
        int kv = k - 1 - ku;
        for (const auto& u : exact[ku][sq.ur]) {
          for (const auto& v : exact[kv][sq.ll]) {
            std::vector<int> legs;
            legs.reserve(u.legs.size() + v.legs.size());
            for (int leg : u.legs) legs.push_back(c.compose(sq.p, leg));
            for (int leg : v.legs) legs.push_back(c.compose(sq.e, leg));
            exact[k][sq.lr].insert(CoverFamily::of(sq.lr, std::move(legs)));
          }
        }
      }
    }
  }
  std::set<CoverFamily> out;
  for (int k = 0; k <= depth; ++k)
    for (const auto& f : exact[k][obj]) out.insert(f);
  return out;
}

std::set<CoverFamily> generate_simple_covers_alt(const CdStructure& p, int obj, int depth) {
  if (!is_normalized(p)) throw error("generate_simple_covers_alt: cd-structure not normalized");
  const FinCategory& c = *p.base;
  auto nondeg = p.nondegenerate();
  // Group squares by lower-right corner.
  std::map<int, std::vector<const CommutingSquare*>> by_lr;
  for (const auto& sq : nondeg) by_lr[sq.lr].push_back(&sq);

  std::set<CoverFamily> seen;
  std::vector<CoverFamily> frontier;
  for (const auto& f : iso_families(c, obj)) {
    if (seen.insert(f).second) frontier.push_back(f);
  }
  for (int step = 0; step < depth && !frontier.empty(); ++step) {
    std::vector<CoverFamily> next;
    for (const auto& fam : frontier) {
      for (size_t li = 0; li < fam.legs.size(); ++li) {
        int leg = fam.legs[li];
        auto it = by_lr.find(c.source(leg));
        if (it == by_lr.end()) continue;
        for (const CommutingSquare* sq : it->second) {
          std::vector<int> legs;
          legs.reserve(fam.legs.size() + 1);
          for (size_t lj = 0; lj < fam.legs.size(); ++lj)
            if (lj != li) legs.push_back(fam.legs[lj]);
          legs.push_back(c.compose(leg, sq->p));
          legs.push_back(c.compose(leg, sq->e));
          CoverFamily nf = CoverFamily::of(obj, std::move(legs));
          if (seen.insert(nf).second) next.push_back(nf);
        }
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

std::set<CoverFamily> generate_simple_covers_stable(const CdStructure& p, int obj,
                                                    int max_depth, bool* stable) {
  std::set<CoverFamily> prev = generate_simple_covers_alt(p, obj, 0);
  for (int d = 1; d <= max_depth; ++d) {
    std::set<CoverFamily> cur = generate_simple_covers_alt(p, obj, d);
    if (cur == prev) {
      if (stable) *stable = true;
      return cur;
    }
    prev = std::move(cur);
  }
  if (stable) *stable = false;
  return prev;
}

bool is_simple_cover(const CdStructure& p, const CoverFamily& f, int max_depth) {
  bool stable = false;
  auto covers = generate_simple_covers_stable(p, f.target, max_depth, &stable);
  if (covers.count(f)) return true;
  if (!stable)
    throw error("is_simple_cover: generation did not stabilize within depth " +
                std::to_string(max_depth));
  return false;
}

CommutingSquare tensor_square(const MonoidalData& m, const CommutingSquare& sq, int z) {
  const FinCategory& c = *m.base;
  int idz = c.identity(z);
  return CommutingSquare{m.tensor_obj(sq.ul, z), m.tensor_obj(sq.ur, z),
                         m.tensor_obj(sq.ll, z), m.tensor_obj(sq.lr, z),
                         m.tensor_mor(sq.top, idz), m.tensor_mor(sq.left, idz),
                         m.tensor_mor(sq.p, idz), m.tensor_mor(sq.e, idz)};
}

TensorStabilityReport is_tensor_stable(const CdStructure& p, const MonoidalData& m) {
  if (!is_normalized(p)) throw error("is_tensor_stable: cd-structure not normalized");
  TensorStabilityReport rep;
  for (const auto& sq : p.nondegenerate()) {
    for (int z = 0; z < p.base->object_count(); ++z) {
      CommutingSquare ts = tensor_square(m, sq, z);
      if (!p.contains(ts)) {
        rep.stable = false;
        rep.square = sq;
        rep.object = z;
        rep.tensored = ts;
        return rep;
      }
    }
  }
  return rep;
}

CdStructure tensor_saturate(const CdStructure& p, const MonoidalData& m) {
  if (!is_normalized(p)) throw error("tensor_saturate: cd-structure not normalized");
  CdStructure out = p;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& sq : out.nondegenerate()) {
      for (int z = 0; z < p.base->object_count(); ++z) {
        CommutingSquare ts = tensor_square(m, sq, z);
        if (!out.contains(ts)) {
          out.insert(ts);
          changed = true;
        }
      }
    }
  }
  return out;
}

CdStructure monoidal_cd(const CdStructure& p, const TupleCategory& t) {
  if (!is_normalized(p)) throw error("monoidal_cd: cd-structure not normalized");
  if (p.base != t.base->base) throw error("monoidal_cd: cd-structure is not on the tuple base");
  const FinCategory& b = *p.base;
  CdStructure out;
  out.base = &t.cat;
  auto nondeg = p.nondegenerate();
  for (int obj = 0; obj < t.cat.object_count(); ++obj) {
    const auto& tuple = t.object_tuple[obj];
    int n = static_cast<int>(tuple.size());
    for (int i0 = 0; i0 < n; ++i0) {
      for (const auto& sq : nondeg) {
        if (tuple[i0] != sq.lr) continue;
        auto corner = [&](int repl) {
          std::vector<int> tp = tuple;
          tp[i0] = repl;
          return t.object_of_tuple(tp);
        };
        int ul = corner(sq.ul), ur = corner(sq.ur), ll = corner(sq.ll), lr = obj;
        auto edge = [&](int src_obj, int tgt_obj, int mor) {
          std::vector<int> comps(n);
          const auto& st = t.object_tuple[src_obj];
          for (int i = 0; i < n; ++i) comps[i] = b.identity(st[i]);
          comps[i0] = mor;
          int r = t.pointwise_morphism(src_obj, tgt_obj, comps);
          if (r < 0) throw error("monoidal_cd: coordinate square edge missing");
          return r;
        };
        out.insert(CommutingSquare{ul, ur, ll, lr, edge(ul, ur, sq.top), edge(ul, ll, sq.left),
                                   edge(ur, lr, sq.p), edge(ll, lr, sq.e)});
      }
    }
  }
  return normalize_cd(out);
}

CoverFamily product_cover(const TupleCategory& t, const CdStructure& p, int tuple_obj,
                          const std::vector<CoverFamily>& coordinate_covers,
                          int membership_depth) {
  const auto& tuple = t.object_tuple[tuple_obj];
  int n = static_cast<int>(tuple.size());
  if (static_cast<int>(coordinate_covers.size()) != n)
    throw error("product_cover: need one simple cover per coordinate");
  for (int i = 0; i < n; ++i) {
    if (coordinate_covers[i].target != tuple[i])
      throw error("product_cover: cover " + std::to_string(i) + " has the wrong target");
    if (!is_simple_cover(p, coordinate_covers[i], membership_depth))
      throw error("product_cover: coordinate family " + std::to_string(i) +
                  " is not a simple cover");
  }
  std::vector<int> legs;
  std::vector<size_t> pick(n, 0);
  const FinCategory& b = *p.base;
  while (true) {
    std::vector<int> comp(n), src(n);
    for (int i = 0; i < n; ++i) {
      comp[i] = coordinate_covers[i].legs[pick[i]];
      src[i] = b.source(comp[i]);
    }
    int src_obj = t.object_of_tuple(src);
    int leg = t.pointwise_morphism(src_obj, tuple_obj, comp);
    if (leg < 0) throw error("product_cover: combined leg missing in tuple category");
    legs.push_back(leg);
    int i = n - 1;
    for (; i >= 0; --i) {
      if (pick[i] + 1 < coordinate_covers[i].legs.size()) {
        ++pick[i];
        break;
      }
      pick[i] = 0;
    }
    if (i < 0) break;
    if (n == 0) break;
  }
  if (n == 0) legs.push_back(t.cat.identity(tuple_obj));
  return CoverFamily::of(tuple_obj, std::move(legs));
}

CoverFamily coordinate_cover(const TupleCategory& t, const CdStructure& p, int tuple_obj,
                             int coordinate, const CoverFamily& cover, int membership_depth) {
  const auto& tuple = t.object_tuple[tuple_obj];
  int n = static_cast<int>(tuple.size());
  if (coordinate < 0 || coordinate >= n) throw error("coordinate_cover: index out of range");
  std::vector<CoverFamily> covers;
  covers.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (i == coordinate) {
      covers.push_back(cover);
    } else {
      covers.push_back(CoverFamily::of(tuple[i], {p.base->identity(tuple[i])}));
    }
  }
  return product_cover(t, p, tuple_obj, covers, membership_depth);
}

bool project_cover_check(const TupleCategory& t, const CdStructure& p,
                         const CdStructure& p_tuple, const CoverFamily& family, int max_depth) {
  if (!is_simple_cover(p_tuple, family, max_depth))
    throw error("project_cover_check: family is not a simple cover of the tuple site");
  const auto& tuple = t.object_tuple[family.target];
  int n = static_cast<int>(tuple.size());
  for (int i = 0; i < n; ++i) {
    std::vector<int> comps;
    for (int leg : family.legs) {
      const auto& md = t.mor_data[leg];
      if (!(md.reindex == PartialMap::total_identity(md.reindex.source_size)))
        throw error("project_cover_check: cover leg is not over the identity reindexing");
      comps.push_back(md.components[i]);
    }
    CoverFamily projected = CoverFamily::of(tuple[i], std::move(comps));
    bool stable = false;
    auto simple = generate_simple_covers_stable(p, tuple[i], max_depth, &stable);
    bool found = false;
    for (const auto& sc : simple) {
      if (std::includes(projected.legs.begin(), projected.legs.end(), sc.legs.begin(),
                        sc.legs.end())) {
        found = true;
        break;
      }
    }
    if (!found) {
      if (!stable) throw error("project_cover_check: simple-cover generation hit the depth cap");
      return false;
    }
  }
  return true;
}

bool check_dimension_function(const FinCategory& c, const DimensionFunction& d) {
  InitialReport init = classify_initial(c);
  if (init.initials.empty()) throw error("check_dimension_function: no initial object");
  if (static_cast<int>(d.values.size()) != c.object_count()) return false;
  int bottom = init.initials.front();
  for (int o = 0; o < c.object_count(); ++o) {
    if (d.values[o] < -1) return false;
    bool is_init = c.objects_isomorphic(o, bottom);
    if ((d.values[o] == -1) != is_init) return false;
  }
  return true;
}

DimCompatReport check_dim_compatible(const CdStructure& p, const DimensionFunction& d,
                                     int max_depth) {
  if (!check_dimension_function(*p.base, d))
    throw error("check_dim_compatible: invalid dimension function");
  DimCompatReport rep;
  // Monotonicity in P' makes the maximal inequality-satisfying subset the
  // canonical witness candidate.
  CdStructure prime;
  prime.base = p.base;
  for (const auto& sq : p.nondegenerate()) {
    if (d.values[sq.ll] <= d.values[sq.lr] && d.values[sq.ur] <= d.values[sq.lr] &&
        d.values[sq.ul] < d.values[sq.lr])
      prime.insert(sq);
  }
  std::vector<CommutingSquare> witness = prime.squares;
  prime = normalize_cd(prime);
  const FinCategory& c = *p.base;
  for (const auto& sq : p.nondegenerate()) {
    // Membership in the sieve generated by {e, p}.
    auto in_sieve = [&](int f) {
      for (int h : c.hom(c.source(f), sq.ll))
        if (c.compose(sq.e, h) == f) return true;
      for (int h : c.hom(c.source(f), sq.ur))
        if (c.compose(sq.p, h) == f) return true;
      return false;
    };
    bool stable = false;
    auto covers = generate_simple_covers_stable(prime, sq.lr, max_depth, &stable);
    bool found = false;
    for (const auto& cov : covers) {
      bool all = true;
      for (int leg : cov.legs)
        if (!in_sieve(leg)) {
          all = false;
          break;
        }
      if (all) {
        found = true;
        break;
      }
    }
    if (!found) {
      if (!stable) throw error("check_dim_compatible: simple-cover generation hit the depth cap");
      return rep;
    }
  }
  rep.compatible = true;
  rep.witness = std::move(witness);
  return rep;
}

DimensionFunction induced_dimension(const DimensionFunction& d, const TupleCategory& t) {
  DimensionFunction out;
  out.values.resize(t.cat.object_count());
  for (int o = 0; o < t.cat.object_count(); ++o) {
    const auto& tuple = t.object_tuple[o];
    if (tuple.empty()) {
      out.values[o] = -1;
      continue;
    }
    int v = static_cast<int>(tuple.size());
    for (int x : tuple) v += d.values[x];
    out.values[o] = v;
  }
  return out;
}

}  // namespace cdsite
