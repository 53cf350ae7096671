#include "cdsite/sheaves.hpp"

#include <algorithm>
#include <set>

namespace cdsite {

bool is_sheaf_sieves(const Topology& t, const Presheaf& f, int sieve_cap) {
  const FinCategory& c = *t.base;
  for (int o = 0; o < c.object_count(); ++o) {
    for (const Sieve& s : t.covering_sieves(o, sieve_cap)) {
      auto families = matching_families(f, s);
      std::set<std::vector<int>> fam_set(families.begin(), families.end());
      std::set<std::vector<int>> restricted;
      for (int x = 0; x < f.card[o]; ++x) {
        if (!restricted.insert(restriction_family(f, s, x)).second) return false;  // not injective
      }
      if (restricted.size() != fam_set.size()) return false;  // not surjective
    }
  }
  return true;
}

bool is_sheaf_squares(const CdStructure& p, const Presheaf& f, bool require_empty) {
  const FinCategory& c = *p.base;
  for (const CommutingSquare& sq : p.nondegenerate()) {
    // Elements of F(UR) ×_{F(UL)} F(LL).
    std::set<std::pair<int, int>> fiber;
    for (int u = 0; u < f.card[sq.ur]; ++u)
      for (int v = 0; v < f.card[sq.ll]; ++v)
        if (f.act[sq.top][u] == f.act[sq.left][v]) fiber.insert({u, v});
    std::set<std::pair<int, int>> image;
    for (int x = 0; x < f.card[sq.lr]; ++x) {
      if (!image.insert({f.act[sq.p][x], f.act[sq.e][x]}).second) return false;  // not injective
    }
    if (image.size() != fiber.size()) return false;
  }
  if (require_empty) {
    InitialReport init = classify_initial(c);
    if (init.initials.empty()) throw error("is_sheaf_squares: require_empty needs an initial object");
    if (f.card[init.initials.front()] != 1) return false;
  }
  return true;
}

void for_each_presheaf(const FinCategory& c, const std::vector<int>& min_card,
                       const std::vector<int>& max_card, bool pointed,
                       const std::function<void(const Presheaf&)>& emit, long long node_cap) {
  int nobj = c.object_count();
  int nmor = c.morphism_count();
  Presheaf f;
  f.base = &c;
  f.pointed = pointed;
  f.card.assign(nobj, 0);
  f.act.assign(nmor, {});

  // Non-identity morphisms, factor-first so that composites are mostly forced.
  std::vector<int> order;
  std::vector<char> is_composite(nmor, 0);
  for (int g = 0; g < nmor; ++g) {
    if (c.is_identity(g)) continue;
    for (int h : c.morphisms_from(c.target(g))) {
      if (c.is_identity(h)) continue;
      int hg = c.compose(h, g);
      if (hg >= 0) is_composite[hg] = 1;
    }
  }
  for (int m = 0; m < nmor; ++m)
    if (!c.is_identity(m) && !is_composite[m]) order.push_back(m);
  for (int m = 0; m < nmor; ++m)
    if (!c.is_identity(m) && is_composite[m]) order.push_back(m);

  // Composition triples (g, h, hg) with h, g, hg all non-identity.
  struct Triple {
    int g, h, hg;
  };
  std::vector<Triple> triples;
  for (int g = 0; g < nmor; ++g) {
    if (c.is_identity(g)) continue;
    for (int h : c.morphisms_from(c.target(g))) {
      if (c.is_identity(h)) continue;
      int hg = c.compose(h, g);
      if (hg >= 0) triples.push_back({g, h, hg});
    }
  }

  long long nodes = 0;
  std::vector<char> assigned(nmor, 0);

  // Applies forced composites/checks; returns false on contradiction and
  // records which morphisms it newly assigned.
  auto propagate = [&](std::vector<int>& newly) -> bool {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Triple& tr : triples) {
        if (assigned[tr.g] && assigned[tr.h]) {
          std::vector<int> composed(f.card[c.target(tr.h)]);
          for (int i = 0; i < f.card[c.target(tr.h)]; ++i)
            composed[i] = f.act[tr.g][f.act[tr.h][i]];
          if (assigned[tr.hg]) {
            if (f.act[tr.hg] != composed) return false;
          } else {
            f.act[tr.hg] = std::move(composed);
            assigned[tr.hg] = 1;
            newly.push_back(tr.hg);
            changed = true;
          }
        }
      }
    }
    return true;
  };

  std::function<void(size_t)> assign_actions = [&](size_t oi) {
    if (++nodes > node_cap)
      throw error("presheaf enumeration exceeded the node cap (" + std::to_string(node_cap) +
                  " nodes)");
    while (oi < order.size() && assigned[order[oi]]) ++oi;
    if (oi == order.size()) {
      emit(f);
      return;
    }
    int m = order[oi];
    int dom = f.card[c.target(m)], cod = f.card[c.source(m)];
    if (dom > 0 && cod == 0) return;  // no function exists
    std::vector<int> table(dom, 0);
    if (pointed && dom > 0) table[0] = 0;
    int first_free = pointed ? 1 : 0;
    while (true) {
      f.act[m] = table;
      assigned[m] = 1;
      std::vector<int> newly;
      if (propagate(newly)) assign_actions(oi + 1);
      for (int x : newly) {
        assigned[x] = 0;
        f.act[x].clear();
      }
      assigned[m] = 0;
      // Next table.
      int i = dom - 1;
      for (; i >= first_free; --i) {
        if (table[i] + 1 < cod) {
          ++table[i];
          break;
        }
        table[i] = 0;
      }
      if (i < first_free) break;
    }
    f.act[m].clear();
  };

  std::function<void(int)> assign_cards = [&](int o) {
    if (o == nobj) {
      for (int ob = 0; ob < nobj; ++ob) {
        int id = c.identity(ob);
        f.act[id].resize(f.card[ob]);
        for (int i = 0; i < f.card[ob]; ++i) f.act[id][i] = i;
        assigned[id] = 1;
      }
      assign_actions(0);
      for (int m = 0; m < nmor; ++m) {
        if (!c.is_identity(m)) {
          assigned[m] = 0;
          f.act[m].clear();
        }
      }
      return;
    }
    int lo = std::max(min_card[o], pointed ? 1 : 0);
    for (int k = lo; k <= max_card[o]; ++k) {
      f.card[o] = k;
      assign_cards(o + 1);
    }
  };
  assign_cards(0);
}

namespace {

std::vector<Presheaf> dedup_iso(std::vector<Presheaf> list) {
  std::vector<Presheaf> out;
  for (auto& f : list) {
    bool dup = false;
    for (const auto& g : out)
      if (naturally_isomorphic(f, g)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<Presheaf> enumerate_sheaves_sieves(const Topology& t, int max_card, bool pointed,
                                               int sieve_cap) {
  std::vector<Presheaf> hits;
  std::vector<int> lo(t.base->object_count(), 0), hi(t.base->object_count(), max_card);
  for_each_presheaf(*t.base, lo, hi, pointed, [&](const Presheaf& f) {
    if (is_sheaf_sieves(t, f, sieve_cap)) hits.push_back(f);
  });
  return dedup_iso(std::move(hits));
}

std::vector<Presheaf> enumerate_sheaves_squares(const CdStructure& p, bool require_empty,
                                                int max_card, bool pointed) {
  std::vector<Presheaf> hits;
  std::vector<int> lo(p.base->object_count(), 0), hi(p.base->object_count(), max_card);
  for_each_presheaf(*p.base, lo, hi, pointed, [&](const Presheaf& f) {
    if (is_sheaf_squares(p, f, require_empty)) hits.push_back(f);
  });
  return dedup_iso(std::move(hits));
}

FinFunctor base_embedding(const TupleCategory& t) {
  const FinCategory& b = *t.base->base;
  FinFunctor f;
  f.src = &b;
  f.tgt = &t.cat;
  f.omap.resize(b.object_count());
  for (int o = 0; o < b.object_count(); ++o) {
    f.omap[o] = t.object_of_tuple({o});
    if (f.omap[o] < 0) throw error("base_embedding: singleton tuple missing");
  }
  f.mmap.resize(b.morphism_count());
  for (int m = 0; m < b.morphism_count(); ++m) {
    f.mmap[m] = t.pointwise_morphism(f.omap[b.source(m)], f.omap[b.target(m)], {m});
    if (f.mmap[m] < 0) throw error("base_embedding: singleton morphism missing");
  }
  return f;
}

bool is_lax_cartesian(const TupleCategory& t, const Presheaf& f) {
  if (f.base != &t.cat) throw error("is_lax_cartesian: presheaf is not on the tuple category");
  {
    ValidationReport rep = validate_presheaf(f);
    if (!rep.ok) throw error("is_lax_cartesian: invalid presheaf: " + rep.issues.front());
  }
  for (int o = 0; o < t.cat.object_count(); ++o) {
    const auto& tuple = t.object_tuple[o];
    int n = static_cast<int>(tuple.size());
    if (n == 0) {
      if (f.card[o] != 1) return false;
      continue;
    }
    long long prod = 1;
    std::vector<int> coord(n);
    for (int i = 0; i < n; ++i) {
      coord[i] = t.object_of_tuple({tuple[i]});
      prod *= f.card[coord[i]];
    }
    if (prod != f.card[o]) return false;
    std::set<std::vector<int>> seen;
    for (int x = 0; x < f.card[o]; ++x) {
      std::vector<int> img(n);
      for (int i = 0; i < n; ++i) img[i] = f.act[t.coordinate_inclusion(o, i)][x];
      if (!seen.insert(img).second) return false;
    }
  }
  return true;
}

bool is_weak_cartesian(const TupleCategory& t, const Presheaf& f) {
  if (!is_lax_cartesian(t, f)) return false;
  for (int o = 0; o < t.cat.object_count(); ++o) {
    int m = t.tensor_inclusion(o);
    int tgt_card = f.card[t.cat.source(m)];
    if (f.card[o] != tgt_card) return false;
    std::vector<char> hit(tgt_card, 0);
    for (int x = 0; x < f.card[o]; ++x) {
      if (hit[f.act[m][x]]) return false;
      hit[f.act[m][x]] = 1;
    }
  }
  return true;
}

const char* to_string(MonoidalSheafVerdict v) {
  switch (v) {
    case MonoidalSheafVerdict::lax_monoidal_sheaf: return "lax-monoidal-sheaf";
    case MonoidalSheafVerdict::strong_monoidal_sheaf: return "strong-monoidal-sheaf";
    default: return "neither";
  }
}

MonoidalSheafVerdict check_monoidal_sheaf(const CdStructure& p, const TupleCategory& t,
                                          const Presheaf& f) {
  bool lax = is_lax_cartesian(t, f);
  bool weak = lax && is_weak_cartesian(t, f);
  CdStructure ptuple = monoidal_cd(p, t);
  bool tuple_sheaf = is_sheaf_squares(ptuple, f, false);
  Presheaf restricted = restrict_presheaf(base_embedding(t), f);
  bool base_sheaf = is_sheaf_squares(p, restricted, false);
  if (lax && tuple_sheaf != base_sheaf)
    throw error("check_monoidal_sheaf: tuple-site and base-site routes disagree");
  if (!lax || !tuple_sheaf) return MonoidalSheafVerdict::neither;
  return weak ? MonoidalSheafVerdict::strong_monoidal_sheaf
              : MonoidalSheafVerdict::lax_monoidal_sheaf;
}

int LaxStructureData::apply_mult(const MonoidalData& m, int xobj, int yobj, int xe,
                                 int ye) const {
  if (xobj > yobj) return apply_mult(m, yobj, xobj, ye, xe);
  const auto& table = mult.at({xobj, yobj});
  return table[static_cast<size_t>(xe) * base_presheaf.card[yobj] + ye];
}

Presheaf build_product_extension(const TupleCategory& t, const LaxStructureData& d) {
  const MonoidalData& m = *t.base;
  const FinCategory& b = *m.base;
  const Presheaf& g = d.base_presheaf;
  if (d.unit_elem < 0 || d.unit_elem >= g.card[m.unit])
    throw error("build_product_extension: unit element out of range (the base presheaf needs "
                "a section over the unit object)");
  Presheaf f;
  f.base = &t.cat;
  f.pointed = g.pointed;
  int nobj = t.cat.object_count();
  f.card.resize(nobj);
  // Mixed-radix encoding, last coordinate fastest.
  auto strides = [&](const std::vector<int>& tuple) {
    std::vector<long long> st(tuple.size(), 1);
    for (int i = static_cast<int>(tuple.size()) - 2; i >= 0; --i)
      st[i] = st[i + 1] * g.card[tuple[i + 1]];
    return st;
  };
  for (int o = 0; o < nobj; ++o) {
    long long prod = 1;
    for (int x : t.object_tuple[o]) prod *= g.card[x];
    f.card[o] = static_cast<int>(prod);
  }
  f.act.resize(t.cat.morphism_count());
  for (int mi = 0; mi < t.cat.morphism_count(); ++mi) {
    int src = t.cat.source(mi), tgt = t.cat.target(mi);
    const auto& xs = t.object_tuple[src];
    const auto& ys = t.object_tuple[tgt];
    const auto& md = t.mor_data[mi];
    auto sst = strides(xs);
    auto tst = strides(ys);
    f.act[mi].resize(f.card[tgt]);
    for (int te = 0; te < f.card[tgt]; ++te) {
      std::vector<int> tvec(ys.size());
      for (size_t j = 0; j < ys.size(); ++j)
        tvec[j] = static_cast<int>((te / tst[j]) % g.card[ys[j]]);
      long long senc = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        // Fold the gathered coordinates through the multiplication.
        int obj = m.unit, elem = d.unit_elem;
        bool first = true;
        for (int j = 0; j < md.reindex.source_size; ++j) {
          if (md.reindex.assignment[j] != static_cast<int>(i)) continue;
          if (first) {
            obj = ys[j];
            elem = tvec[j];
            first = false;
          } else {
            elem = d.apply_mult(m, obj, ys[j], elem, tvec[j]);
            obj = m.tensor_obj(obj, ys[j]);
          }
        }
        if (first) {
          obj = m.unit;
          elem = d.unit_elem;
        }
        int si = g.act[md.components[i]][elem];
        senc += static_cast<long long>(si) * sst[i];
      }
      f.act[mi][te] = static_cast<int>(senc);
    }
  }
  return f;
}

std::vector<Presheaf> enumerate_cartesian_structures(const TupleCategory& t, int max_card,
                                                     bool pointed, int singleton_object,
                                                     bool weak_only) {
  const MonoidalData& m = *t.base;
  const FinCategory& b = *m.base;
  std::vector<Presheaf> out;
  std::vector<int> lo(b.object_count(), 0), hi(b.object_count(), max_card);
  if (singleton_object >= 0) lo[singleton_object] = hi[singleton_object] = 1;

  for_each_presheaf(b, lo, hi, pointed, [&](const Presheaf& g) {
    if (weak_only) {
      // Carrier arithmetic must be multiplicative for a weak structure.
      for (int x = 0; x < b.object_count(); ++x)
        for (int y = 0; y < b.object_count(); ++y)
          if (static_cast<long long>(g.card[x]) * g.card[y] != g.card[m.tensor_obj(x, y)])
            return;
      if (g.card[m.unit] != 1) return;
    }
    // Unit elements.
    std::vector<int> etas;
    if (pointed)
      etas = {0};
    else
      for (int e = 0; e < g.card[m.unit]; ++e) etas.push_back(e);

    for (int eta : etas) {
      if (t.max_arity < 2) {
        LaxStructureData d{g, eta, {}};
        Presheaf f = build_product_extension(t, d);
        if (!validate_presheaf(f).ok) continue;
        if (!is_lax_cartesian(t, f)) continue;
        if (weak_only && !is_weak_cartesian(t, f)) continue;
        out.push_back(std::move(f));
        continue;
      }
      // Enumerate the multiplication tables with necessary-law pruning.
      std::vector<std::pair<int, int>> pairs;
      for (int x = 0; x < b.object_count(); ++x)
        for (int y = x; y < b.object_count(); ++y) pairs.emplace_back(x, y);
      LaxStructureData d{g, eta, {}};
      for (auto [x, y] : pairs)
        d.mult[{x, y}].assign(static_cast<size_t>(g.card[x]) * g.card[y], -1);

      // Flattened entry list.
      struct Entry {
        int x, y, xe, ye;
      };
      std::vector<Entry> entries;
      for (auto [x, y] : pairs)
        for (int xe = 0; xe < g.card[x]; ++xe)
          for (int ye = 0; ye < g.card[y]; ++ye) entries.push_back({x, y, xe, ye});

      auto get = [&](int x, int y, int xe, int ye) -> int {
        if (x > y) return d.mult.at({y, x})[static_cast<size_t>(ye) * g.card[x] + xe];
        return d.mult.at({x, y})[static_cast<size_t>(xe) * g.card[y] + ye];
      };
      auto set = [&](int x, int y, int xe, int ye, int v) {
        if (x > y)
          d.mult.at({y, x})[static_cast<size_t>(ye) * g.card[x] + xe] = v;
        else
          d.mult.at({x, y})[static_cast<size_t>(xe) * g.card[y] + ye] = v;
      };

      // Checks every law instance whose entries are all defined.
      auto consistent = [&]() -> bool {
        // Unit law μ(η, s) = s.
        for (int x = 0; x < b.object_count(); ++x)
          for (int xe = 0; xe < g.card[x]; ++xe) {
            int v = get(m.unit, x, eta, xe);
            if (v >= 0 && v != xe) return false;
          }
        // Commutativity on the diagonal tables.
        for (int x = 0; x < b.object_count(); ++x)
          for (int xe = 0; xe < g.card[x]; ++xe)
            for (int ye = 0; ye < g.card[x]; ++ye) {
              int v1 = get(x, x, xe, ye), v2 = get(x, x, ye, xe);
              if (v1 >= 0 && v2 >= 0 && v1 != v2) return false;
            }
        // Naturality in both arguments.
        for (int mor = 0; mor < b.morphism_count(); ++mor) {
          int xs = b.source(mor), xt = b.target(mor);
          for (int y = 0; y < b.object_count(); ++y) {
            int idy = b.identity(y);
            int big = m.tensor_mor(mor, idy);  // x_s⊗y → x_t⊗y
            for (int xe = 0; xe < g.card[xt]; ++xe)
              for (int ye = 0; ye < g.card[y]; ++ye) {
                int top = get(xt, y, xe, ye);
                int side = get(xs, y, g.act[mor][xe], ye);
                if (top >= 0 && side >= 0 && side != g.act[big][top]) return false;
              }
          }
        }
        // Associativity.
        for (int x = 0; x < b.object_count(); ++x)
          for (int y = 0; y < b.object_count(); ++y)
            for (int z = 0; z < b.object_count(); ++z)
              for (int xe = 0; xe < g.card[x]; ++xe)
                for (int ye = 0; ye < g.card[y]; ++ye)
                  for (int ze = 0; ze < g.card[z]; ++ze) {
                    int xy = get(x, y, xe, ye);
                    int yz = get(y, z, ye, ze);
                    if (xy < 0 || yz < 0) continue;
                    int l = get(m.tensor_obj(x, y), z, xy, ze);
                    int r = get(x, m.tensor_obj(y, z), xe, yz);
                    if (l >= 0 && r >= 0 && l != r) return false;
                  }
        return true;
      };

      std::function<void(size_t)> rec = [&](size_t ei) {
        if (ei == entries.size()) {
          Presheaf f = build_product_extension(t, d);
          if (!validate_presheaf(f).ok) return;
          if (!is_lax_cartesian(t, f)) return;
          if (weak_only && !is_weak_cartesian(t, f)) return;
          out.push_back(f);
          return;
        }
        const Entry& en = entries[ei];
        if (get(en.x, en.y, en.xe, en.ye) >= 0) {
          rec(ei + 1);
          return;
        }
        int codom = g.card[m.tensor_obj(en.x, en.y)];
        for (int v = 0; v < codom; ++v) {
          set(en.x, en.y, en.xe, en.ye, v);
          if (consistent()) rec(ei + 1);
        }
        set(en.x, en.y, en.xe, en.ye, -1);
      };
      rec(0);
    }
  });
  return out;
}

EquivalenceReport equivalence_report(const FinFunctor& fun,
                                     const std::function<bool(const Presheaf&)>& source_is_sheaf,
                                     const std::function<bool(const Presheaf&)>& target_is_sheaf,
                                     int max_card, int preimage_max_card) {
  EquivalenceReport rep;
  const FinCategory& s = *fun.src;
  const FinCategory& t = *fun.tgt;
  if (preimage_max_card <= 0) preimage_max_card = max_card * max_card;

  std::vector<Presheaf> target_sheaves;
  {
    std::vector<int> lo(t.object_count(), 0), hi(t.object_count(), max_card);
    for_each_presheaf(t, lo, hi, false, [&](const Presheaf& f) {
      if (target_is_sheaf(f)) target_sheaves.push_back(f);
    });
  }
  {
    // Dedup up to natural isomorphism.
    std::vector<Presheaf> dd;
    for (auto& f : target_sheaves) {
      bool dup = false;
      for (const auto& g : dd)
        if (naturally_isomorphic(f, g)) dup = true;
      if (!dup) dd.push_back(std::move(f));
    }
    target_sheaves = std::move(dd);
  }

  // Fully faithful: precomposition Nat(F,G) → Nat(f*F, f*G) is a bijection.
  for (const Presheaf& F : target_sheaves) {
    for (const Presheaf& G : target_sheaves) {
      Presheaf rF = restrict_presheaf(fun, F), rG = restrict_presheaf(fun, G);
      std::set<std::vector<std::vector<int>>> images;
      for (const NatTransform& nt : enumerate_nat(F, G)) {
        NatTransform rt;
        rt.comps.resize(s.object_count());
        for (int o = 0; o < s.object_count(); ++o) rt.comps[o] = nt.comps[fun.ob(o)];
        if (!images.insert(rt.comps).second) {
          rep.fully_faithful = false;
          rep.witness = "precomposition is not injective between two target sheaves";
        }
      }
      size_t total = enumerate_nat(rF, rG).size();
      if (images.size() != total) {
        rep.fully_faithful = false;
        rep.witness = "precomposition is not surjective between two target sheaves";
      }
    }
  }

  // Essential surjectivity within the bound.
  std::vector<Presheaf> source_sheaves;
  {
    std::vector<int> lo(s.object_count(), 0), hi(s.object_count(), max_card);
    for_each_presheaf(s, lo, hi, false, [&](const Presheaf& f) {
      if (source_is_sheaf(f)) source_sheaves.push_back(f);
    });
    std::vector<Presheaf> dd;
    for (auto& f : source_sheaves) {
      bool dup = false;
      for (const auto& g : dd)
        if (naturally_isomorphic(f, g)) dup = true;
      if (!dup) dd.push_back(std::move(f));
    }
    source_sheaves = std::move(dd);
  }
  std::vector<Presheaf> preimage_pool;
  {
    std::vector<int> lo(t.object_count(), 0), hi(t.object_count(), preimage_max_card);
    for (int o : fun.omap) hi[o] = max_card;
    for_each_presheaf(t, lo, hi, false, [&](const Presheaf& f) {
      if (target_is_sheaf(f)) preimage_pool.push_back(f);
    });
  }
  for (const Presheaf& G : source_sheaves) {
    bool hit = false;
    for (const Presheaf& F : preimage_pool) {
      if (naturally_isomorphic(restrict_presheaf(fun, F), G)) {
        hit = true;
        break;
      }
    }
    if (!hit) {
      rep.essentially_surjective_within_bound = false;
      rep.witness = "a source sheaf has no restriction preimage within the bound";
      break;
    }
  }
  return rep;
}

}  // namespace cdsite
