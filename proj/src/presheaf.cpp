#include "cdsite/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace cdsite {

Presheaf representable(const FinCategory& c, int obj) {
  Presheaf f;
  f.base = &c;
  f.card.resize(c.object_count());
  // Element i of F(X) is the i-th morphism in hom(X, obj).
  for (int x = 0; x < c.object_count(); ++x) f.card[x] = static_cast<int>(c.hom(x, obj).size());
  f.act.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    int src = c.source(m), tgt = c.target(m);
    const auto& hs_t = c.hom(tgt, obj);
    const auto& hs_s = c.hom(src, obj);
    f.act[m].resize(hs_t.size());
    for (size_t i = 0; i < hs_t.size(); ++i) {
      int composed = c.compose(hs_t[i], m);
      auto it = std::find(hs_s.begin(), hs_s.end(), composed);
      if (it == hs_s.end()) throw error("representable: composition left the hom-set");
      f.act[m][i] = static_cast<int>(it - hs_s.begin());
    }
  }
  return f;
}

Presheaf constant_presheaf(const FinCategory& c, int k) {
  Presheaf f;
  f.base = &c;
  f.card.assign(c.object_count(), k);
  f.act.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    f.act[m].resize(k);
    std::iota(f.act[m].begin(), f.act[m].end(), 0);
  }
  return f;
}

Presheaf representable_subpresheaf(const FinCategory& c, int obj, const std::vector<int>& gens) {
  // Members per object: morphisms X → obj of the sieve generated by gens.
  std::vector<std::vector<int>> members(c.object_count());
  for (int g : gens) {
    if (c.target(g) != obj) throw error("representable_subpresheaf: generator target mismatch");
    for (int h : c.morphisms_into(c.source(g))) {
      int m = c.compose(g, h);
      members[c.source(h)].push_back(m);
    }
    members[c.source(g)].push_back(g);
  }
  for (auto& v : members) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  Presheaf f;
  f.base = &c;
  f.card.resize(c.object_count());
  for (int x = 0; x < c.object_count(); ++x) f.card[x] = static_cast<int>(members[x].size());
  f.act.resize(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    int src = c.source(m), tgt = c.target(m);
    f.act[m].resize(members[tgt].size());
    for (size_t i = 0; i < members[tgt].size(); ++i) {
      int composed = c.compose(members[tgt][i], m);
      auto it = std::lower_bound(members[src].begin(), members[src].end(), composed);
      if (it == members[src].end() || *it != composed)
        throw error("representable_subpresheaf: not precomposition closed");
      f.act[m][i] = static_cast<int>(it - members[src].begin());
    }
  }
  return f;
}

ValidationReport validate_presheaf(const Presheaf& f) {
  ValidationReport rep;
  const FinCategory& c = *f.base;
  if (static_cast<int>(f.card.size()) != c.object_count() ||
      static_cast<int>(f.act.size()) != c.morphism_count()) {
    rep.fail("presheaf tables have the wrong shape");
    return rep;
  }
  for (int m = 0; m < c.morphism_count(); ++m) {
    if (static_cast<int>(f.act[m].size()) != f.card[c.target(m)]) {
      rep.fail("action of " + c.morphism_name(m) + " has the wrong domain size");
      return rep;
    }
    for (int v : f.act[m])
      if (v < 0 || v >= f.card[c.source(m)]) {
        rep.fail("action of " + c.morphism_name(m) + " leaves the carrier");
        return rep;
      }
  }
  for (int o = 0; o < c.object_count(); ++o) {
    int id = c.identity(o);
    for (int i = 0; i < f.card[o]; ++i)
      if (f.act[id][i] != i) rep.fail("identity action at " + c.object_name(o) + " is not id");
  }
  for (int g = 0; g < c.morphism_count(); ++g) {
    for (int h : c.morphisms_from(c.target(g))) {
      int hg = c.compose(h, g);
      if (hg < 0) continue;
      for (int i = 0; i < f.card[c.target(h)]; ++i)
        if (f.act[hg][i] != f.act[g][f.act[h][i]]) {
          rep.fail("functoriality fails on (" + c.morphism_name(h) + ", " + c.morphism_name(g) +
                   ") at element " + std::to_string(i));
          return rep;
        }
    }
  }
  if (f.pointed) {
    for (int o = 0; o < c.object_count(); ++o)
      if (f.card[o] < 1) rep.fail("pointed presheaf has an empty carrier at " + c.object_name(o));
    if (!rep.ok) return rep;
    for (int m = 0; m < c.morphism_count(); ++m)
      if (f.act[m][0] != 0)
        rep.fail("action of " + c.morphism_name(m) + " does not preserve the basepoint");
  }
  return rep;
}

bool is_natural(const Presheaf& f, const Presheaf& g, const NatTransform& t) {
  const FinCategory& c = *f.base;
  for (int m = 0; m < c.morphism_count(); ++m) {
    int src = c.source(m), tgt = c.target(m);
    for (int i = 0; i < f.card[tgt]; ++i)
      if (t.comps[src][f.act[m][i]] != g.act[m][t.comps[tgt][i]]) return false;
  }
  return true;
}

namespace {

// Enumerates componentwise assignments with early naturality pruning.
// When `bijective` is set, only carrier bijections are produced (and they
// must additionally have matching cardinalities). Pointed presheaves force
// basepoint to basepoint.
void enumerate_components(const Presheaf& f, const Presheaf& g, bool bijective,
                          const std::function<bool(const NatTransform&)>& emit) {
  const FinCategory& c = *f.base;
  int nobj = c.object_count();
  if (bijective)
    for (int o = 0; o < nobj; ++o)
      if (f.card[o] != g.card[o]) return;
  NatTransform t;
  t.comps.resize(nobj);
  for (int o = 0; o < nobj; ++o) t.comps[o].assign(f.card[o], -1);

  // Naturality constraints grouped by the later-assigned object.
  struct Con {
    int m;  // morphism; constrains comps[src] and comps[tgt]
  };
  std::vector<std::vector<Con>> by_obj(nobj);
  for (int m = 0; m < c.morphism_count(); ++m) {
    int a = std::max(c.source(m), c.target(m));
    by_obj[a].push_back(Con{m});
  }

  std::function<bool(int)> rec = [&](int o) -> bool {
    if (o == nobj) return emit(t);
    std::vector<int>& comp = t.comps[o];
    std::vector<char> used(g.card[o], 0);
    std::function<bool(int)> fill = [&](int i) -> bool {
      if (i == f.card[o]) {
        for (const Con& con : by_obj[o]) {
          int m = con.m;
          int src = c.source(m), tgt = c.target(m);
          for (int j = 0; j < f.card[tgt]; ++j)
            if (t.comps[src][f.act[m][j]] != g.act[m][t.comps[tgt][j]]) return true;
        }
        return rec(o + 1);
      }
      int start = 0, end = g.card[o];
      if (f.pointed && g.pointed && i == 0) {
        start = 0;
        end = std::min(1, g.card[o]);
      }
      for (int v = start; v < end; ++v) {
        if (bijective && used[v]) continue;
        comp[i] = v;
        if (bijective) used[v] = 1;
        if (!fill(i + 1)) return false;
        if (bijective) used[v] = 0;
      }
      comp[i] = -1;
      return true;
    };
    return fill(0);
  };
  rec(0);
}

}  // namespace

std::vector<NatTransform> enumerate_nat(const Presheaf& f, const Presheaf& g) {
  std::vector<NatTransform> out;
  enumerate_components(f, g, false, [&](const NatTransform& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::optional<NatTransform> find_natural_iso(const Presheaf& f, const Presheaf& g) {
  std::optional<NatTransform> found;
  enumerate_components(f, g, true, [&](const NatTransform& t) {
    found = t;
    return false;  // stop
  });
  return found;
}

bool naturally_isomorphic(const Presheaf& f, const Presheaf& g) {
  return find_natural_iso(f, g).has_value();
}

std::vector<int> presheaf_canonical_key(const Presheaf& f) {
  const FinCategory& c = *f.base;
  int nobj = c.object_count();
  // Encode under a relabeling given by per-object permutations.
  auto encode = [&](const std::vector<std::vector<int>>& perm) {
    std::vector<int> key;
    for (int o = 0; o < nobj; ++o) key.push_back(f.card[o]);
    std::vector<std::vector<int>> inv(nobj);
    for (int o = 0; o < nobj; ++o) {
      inv[o].resize(f.card[o]);
      for (int i = 0; i < f.card[o]; ++i) inv[o][perm[o][i]] = i;
    }
    for (int m = 0; m < c.morphism_count(); ++m) {
      int src = c.source(m), tgt = c.target(m);
      for (int j = 0; j < f.card[tgt]; ++j) key.push_back(perm[src][f.act[m][inv[tgt][j]]]);
    }
    return key;
  };
  std::vector<std::vector<int>> perm(nobj);
  std::optional<std::vector<int>> best;
  std::function<void(int)> rec = [&](int o) {
    if (o == nobj) {
      std::vector<int> key = encode(perm);
      if (!best || key < *best) best = std::move(key);
      return;
    }
    std::vector<int> p(f.card[o]);
    std::iota(p.begin(), p.end(), 0);
    do {
      if (f.pointed && !p.empty() && p[0] != 0) continue;
      perm[o] = p;
      rec(o + 1);
    } while (std::next_permutation(p.begin(), p.end()));
  };
  rec(0);
  return best ? *best : std::vector<int>{};
}

Presheaf restrict_presheaf(const FinFunctor& fun, const Presheaf& f) {
  if (f.base != fun.tgt) throw error("restrict_presheaf: presheaf lives on the wrong category");
  Presheaf r;
  r.base = fun.src;
  r.pointed = f.pointed;
  r.card.resize(fun.src->object_count());
  for (int o = 0; o < fun.src->object_count(); ++o) r.card[o] = f.card[fun.ob(o)];
  r.act.resize(fun.src->morphism_count());
  for (int m = 0; m < fun.src->morphism_count(); ++m) r.act[m] = f.act[fun.mor(m)];
  return r;
}

}  // namespace cdsite
