#include "cdsite/fixtures.hpp"

#include <algorithm>

namespace cdsite::fixtures {

namespace {

// splitmix64; keeps the random-site stream independent of the standard
// library's distribution implementations.
struct Rng {
  unsigned long long state;
  explicit Rng(unsigned long long seed) : state(seed) {}
  unsigned long long next() {
    unsigned long long z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  int below(int n) { return static_cast<int>(next() % static_cast<unsigned long long>(n)); }
};

}  // namespace

std::unique_ptr<SqSite> make_sq() {
  auto site = std::make_unique<SqSite>();
  FinCategory& c = site->cat;
  site->a = c.add_object("a");
  site->b = c.add_object("b");
  site->c = c.add_object("c");
  site->d = c.add_object("d");
  site->ab = c.add_morphism("ab", site->a, site->b);
  site->ac = c.add_morphism("ac", site->a, site->c);
  site->ad = c.add_morphism("ad", site->a, site->d);
  site->bd = c.add_morphism("bd", site->b, site->d);
  site->cd = c.add_morphism("cd", site->c, site->d);
  c.set_compose(site->bd, site->ab, site->ad);
  c.set_compose(site->cd, site->ac, site->ad);
  c.finalize();

  MonoidalData& m = site->meet;
  m.base = &c;
  m.unit = site->d;
  m.init_tables();
  auto meet = [&](int x, int y) {
    if (x == y) return x;
    if (x == site->d) return y;
    if (y == site->d) return x;
    return site->a;  // distinct elements below d meet in the bottom
  };
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) m.set_tensor_obj(x, y, meet(x, y));
  derive_thin_tensor_mor(m);

  site->square.base = &c;
  site->square.insert(
      CommutingSquare{site->a, site->b, site->c, site->d, site->ab, site->ac, site->bd, site->cd});
  site->square = normalize_cd(site->square);

  site->dim.values = {-1, 1, 1, 2};
  return site;
}

std::unique_ptr<FinCategory> make_sq_broken() {
  auto c = std::make_unique<FinCategory>();
  int a = c->add_object("a"), b = c->add_object("b");
  c->add_object("c");
  int d = c->add_object("d");
  int ab = c->add_morphism("ab", a, b);
  c->add_morphism("ac", a, 2);
  c->add_morphism("ad", a, d);
  int bd = c->add_morphism("bd", b, d);
  int cd = c->add_morphism("cd", 2, d);
  c->set_compose(bd, ab, ab);  // wrong: endpoints do not match
  c->set_compose(cd, c->morphism_index("ac").value(), c->morphism_index("ad").value());
  c->finalize();
  return c;
}

std::unique_ptr<FinCategory> make_sq_extra_cone() {
  auto c = std::make_unique<FinCategory>();
  int a = c->add_object("a"), b = c->add_object("b"), cc = c->add_object("c"),
      d = c->add_object("d"), a2 = c->add_object("a2");
  int ab = c->add_morphism("ab", a, b);
  int ac = c->add_morphism("ac", a, cc);
  int ad = c->add_morphism("ad", a, d);
  int bd = c->add_morphism("bd", b, d);
  int cd = c->add_morphism("cd", cc, d);
  int a2b = c->add_morphism("a2b", a2, b);
  int a2c = c->add_morphism("a2c", a2, cc);
  int a2d = c->add_morphism("a2d", a2, d);
  c->set_compose(bd, ab, ad);
  c->set_compose(cd, ac, ad);
  c->set_compose(bd, a2b, a2d);
  c->set_compose(cd, a2c, a2d);
  c->finalize();
  return c;
}

std::unique_ptr<ParSite> make_parallel_collapse() {
  auto site = std::make_unique<ParSite>();
  FinCategory& c = site->cat;
  site->x = c.add_object("x");
  site->y = c.add_object("y");
  site->z = c.add_object("z");
  site->u = c.add_morphism("u", site->x, site->y);
  site->v = c.add_morphism("v", site->x, site->y);
  site->w = c.add_morphism("w", site->y, site->z);
  site->s = c.add_morphism("s", site->x, site->z);
  c.set_compose(site->w, site->u, site->s);
  c.set_compose(site->w, site->v, site->s);
  c.finalize();
  return site;
}

std::unique_ptr<SqeSite> make_sq_with_orphan() {
  auto site = std::make_unique<SqeSite>();
  FinCategory& c = site->cat;
  int a = c.add_object("a"), b = c.add_object("b"), cc = c.add_object("c"),
      d = c.add_object("d");
  site->e = c.add_object("e");
  int ab = c.add_morphism("ab", a, b);
  int ac = c.add_morphism("ac", a, cc);
  int ad = c.add_morphism("ad", a, d);
  int bd = c.add_morphism("bd", b, d);
  int cd = c.add_morphism("cd", cc, d);
  c.add_morphism("ed", site->e, d);
  c.set_compose(bd, ab, ad);
  c.set_compose(cd, ac, ad);
  c.finalize();
  site->square.base = &c;
  site->square.insert(CommutingSquare{a, b, cc, d, ab, ac, bd, cd});
  site->square = normalize_cd(site->square);
  return site;
}

std::unique_ptr<SqIsoSite> make_sq_iso_apex() {
  auto site = std::make_unique<SqIsoSite>();
  FinCategory& c = site->cat;
  site->a = c.add_object("a");
  site->a2 = c.add_object("a2");
  site->b = c.add_object("b");
  site->c = c.add_object("c");
  site->d = c.add_object("d");
  int u = c.add_morphism("u", site->a, site->a2);
  int u2 = c.add_morphism("u2", site->a2, site->a);
  int ab = c.add_morphism("ab", site->a, site->b);
  int ac = c.add_morphism("ac", site->a, site->c);
  int ad = c.add_morphism("ad", site->a, site->d);
  int a2b = c.add_morphism("a2b", site->a2, site->b);
  int a2c = c.add_morphism("a2c", site->a2, site->c);
  int a2d = c.add_morphism("a2d", site->a2, site->d);
  int bd = c.add_morphism("bd", site->b, site->d);
  int cd = c.add_morphism("cd", site->c, site->d);
  // u, u2 are inverse isomorphisms; everything else is thin.
  c.set_compose(u2, u, c.identity(site->a));
  c.set_compose(u, u2, c.identity(site->a2));
  c.set_compose(a2b, u, ab);
  c.set_compose(a2c, u, ac);
  c.set_compose(a2d, u, ad);
  c.set_compose(ab, u2, a2b);
  c.set_compose(ac, u2, a2c);
  c.set_compose(ad, u2, a2d);
  c.set_compose(bd, ab, ad);
  c.set_compose(cd, ac, ad);
  c.set_compose(bd, a2b, a2d);
  c.set_compose(cd, a2c, a2d);
  c.finalize();
  site->original = CommutingSquare{site->a, site->b, site->c, site->d, ab, ac, bd, cd};
  site->transported = CommutingSquare{site->a2, site->b, site->c, site->d, a2b, a2c, bd, cd};
  return site;
}

std::unique_ptr<SubSite> make_sq_subcategory(const SqSite& sq,
                                             const std::vector<std::string>& objects) {
  auto site = std::make_unique<SubSite>();
  FinCategory& c = site->cat;
  std::vector<int> obj_of_orig(sq.cat.object_count(), -1);
  std::vector<int> picked;
  for (const auto& name : objects) {
    int orig = sq.cat.object_index(name).value();
    obj_of_orig[orig] = c.add_object(name);
    picked.push_back(orig);
  }
  std::vector<int> mor_of_orig(sq.cat.morphism_count(), -1);
  for (int m = 0; m < sq.cat.morphism_count(); ++m) {
    int s = sq.cat.source(m), t = sq.cat.target(m);
    if (obj_of_orig[s] < 0 || obj_of_orig[t] < 0) continue;
    if (sq.cat.is_identity(m)) {
      mor_of_orig[m] = c.identity(obj_of_orig[s]);
    } else {
      mor_of_orig[m] = c.add_morphism(sq.cat.morphism_name(m), obj_of_orig[s], obj_of_orig[t]);
    }
  }
  for (int g = 0; g < sq.cat.morphism_count(); ++g) {
    if (mor_of_orig[g] < 0 || sq.cat.is_identity(g)) continue;
    for (int f = 0; f < sq.cat.morphism_count(); ++f) {
      if (mor_of_orig[f] < 0 || sq.cat.is_identity(f)) continue;
      if (sq.cat.target(f) != sq.cat.source(g)) continue;
      int gf = sq.cat.compose(g, f);
      if (mor_of_orig[gf] < 0)
        throw error("make_sq_subcategory: objects are not closed under composition");
      c.set_compose(mor_of_orig[g], mor_of_orig[f], mor_of_orig[gf]);
    }
  }
  c.finalize();
  site->inclusion.src = &c;
  site->inclusion.tgt = &sq.cat;
  site->inclusion.omap.resize(c.object_count());
  for (size_t i = 0; i < picked.size(); ++i) site->inclusion.omap[obj_of_orig[picked[i]]] = picked[i];
  site->inclusion.mmap.resize(c.morphism_count());
  for (int m = 0; m < sq.cat.morphism_count(); ++m)
    if (mor_of_orig[m] >= 0) site->inclusion.mmap[mor_of_orig[m]] = m;
  return site;
}

FinFunctor make_sq_swap(const SqSite& sq) {
  FinFunctor f;
  f.src = f.tgt = &sq.cat;
  f.omap.resize(4);
  f.omap[sq.a] = sq.a;
  f.omap[sq.b] = sq.c;
  f.omap[sq.c] = sq.b;
  f.omap[sq.d] = sq.d;
  f.mmap.resize(sq.cat.morphism_count());
  for (int o = 0; o < 4; ++o) f.mmap[sq.cat.identity(o)] = sq.cat.identity(f.omap[o]);
  f.mmap[sq.ab] = sq.ac;
  f.mmap[sq.ac] = sq.ab;
  f.mmap[sq.ad] = sq.ad;
  f.mmap[sq.bd] = sq.cd;
  f.mmap[sq.cd] = sq.bd;
  return f;
}

std::unique_ptr<RandomSite> make_random_poset_site(unsigned long long seed, int max_objects,
                                                   int max_squares) {
  Rng rng(seed);
  auto site = std::make_unique<RandomSite>();
  FinCategory& c = site->cat;
  int n = 2 + rng.below(std::max(1, max_objects - 1));
  n = std::min(n, max_objects);
  // Random strict order on 0 < 1 < ... by index with random extra relations,
  // then transitive closure; index order keeps it acyclic.
  std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) le[i][i] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.below(100) < 45) le[i][j] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = 1;

  for (int i = 0; i < n; ++i) c.add_object("o" + std::to_string(i));
  std::vector<std::vector<int>> mor(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    mor[i][i] = c.identity(i);
    for (int j = 0; j < n; ++j)
      if (i != j && le[i][j])
        mor[i][j] = c.add_morphism("m" + std::to_string(i) + "_" + std::to_string(j), i, j);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (le[i][j] && le[j][k] && i != j && j != k && i != k)
          c.set_compose(mor[j][k], mor[i][j], mor[i][k]);
  c.finalize();

  site->squares.base = &c;
  int want = rng.below(max_squares + 1);
  for (int attempt = 0; attempt < 60 && static_cast<int>(site->squares.squares.size()) < want;
       ++attempt) {
    int ul = rng.below(n), ur = rng.below(n), ll = rng.below(n), lr = rng.below(n);
    // Proper squares only: four pairwise distinct corners.
    if (ul == ur || ul == ll || ul == lr || ur == ll || ur == lr || ll == lr) continue;
    if (!(le[ul][ur] && le[ul][ll] && le[ur][lr] && le[ll][lr])) continue;
    site->squares.insert(
        CommutingSquare{ul, ur, ll, lr, mor[ul][ur], mor[ul][ll], mor[ur][lr], mor[ll][lr]});
  }
  site->squares = normalize_cd(site->squares);
  return site;
}

}  // namespace cdsite::fixtures
