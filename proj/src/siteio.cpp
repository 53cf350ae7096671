#include "cdsite/siteio.hpp"

#include <fstream>
#include <sstream>

namespace cdsite {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail_at(const std::string& file, int line, const std::string& msg) {
  throw error(file + ":" + std::to_string(line) + ": " + msg);
}

int need_object(const FinCategory& c, const std::string& file, int line, const std::string& id) {
  auto o = c.object_index(id);
  if (!o) fail_at(file, line, "unknown object '" + id + "'");
  return *o;
}

int need_morphism(const FinCategory& c, const std::string& file, int line,
                  const std::string& id) {
  auto m = c.morphism_index(id);
  if (!m) fail_at(file, line, "unknown morphism '" + id + "'");
  return *m;
}

int need_int(const std::string& file, int line, const std::string& tok) {
  try {
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail_at(file, line, "expected an integer, got '" + tok + "'");
  }
}

}  // namespace

const Presheaf* SiteDocument::find_presheaf(const std::string& pname) const {
  for (const auto& np : presheaves)
    if (np.name == pname) return &np.presheaf;
  return nullptr;
}

SiteDocument parse_site(const std::string& text, const std::string& filename) {
  SiteDocument doc;
  doc.cat = std::make_unique<FinCategory>();
  FinCategory& c = *doc.cat;

  struct PendingCompose {
    int line;
    std::string g, f, gf;
  };
  struct PendingSquare {
    int line;
    std::string name;
    std::string corner[4];
    std::string arrow[4];
  };
  struct PendingTensorObj {
    int line;
    std::string x, y, z;
  };
  struct PendingTensorMor {
    int line;
    std::string f, g, h;
  };
  struct PendingDim {
    int line;
    std::string obj;
    int value;
  };
  struct PendingAction {
    int line;
    std::string mor;
    int from, to;
  };
  struct PendingPresheaf {
    int line;
    std::string name;
    bool pointed = false;
    std::vector<std::pair<std::string, int>> values;
    std::vector<PendingAction> actions;
  };
  std::vector<PendingCompose> composes;
  std::vector<PendingSquare> squares;
  std::vector<PendingTensorObj> tobjs;
  std::vector<PendingTensorMor> tmors;
  std::vector<PendingDim> dims;
  std::vector<PendingPresheaf> presheaves;
  std::optional<std::string> unit;
  int unit_line = 0;
  bool saw_format = false;
  PendingPresheaf* open_presheaf = nullptr;

  auto arity_error = [&](const Line& line, const char* key, size_t want) {
    if (line.tokens.size() != want + 1)
      fail_at(filename, line.number,
              std::string("'") + key + "' takes " + std::to_string(want) + " arguments");
  };

  for (const Line& line : tokenize(text)) {
    const std::string& key = line.tokens[0];
    if (open_presheaf) {
      if (key == "value") {
        arity_error(line, "value", 2);
        open_presheaf->values.emplace_back(line.tokens[1],
                                           need_int(filename, line.number, line.tokens[2]));
        continue;
      }
      if (key == "action") {
        arity_error(line, "action", 3);
        open_presheaf->actions.push_back(
            PendingAction{line.number, line.tokens[1],
                          need_int(filename, line.number, line.tokens[2]),
                          need_int(filename, line.number, line.tokens[3])});
        continue;
      }
      if (key == "end") {
        arity_error(line, "end", 0);
        open_presheaf = nullptr;
        continue;
      }
      fail_at(filename, line.number, "unknown key '" + key + "' inside a presheaf block");
    }
    if (key == "format") {
      arity_error(line, "format", 1);
      if (line.tokens[1] != "1")
        fail_at(filename, line.number, "unsupported format version '" + line.tokens[1] + "'");
      saw_format = true;
    } else if (key == "site") {
      arity_error(line, "site", 1);
      doc.name = line.tokens[1];
    } else if (key == "object") {
      arity_error(line, "object", 1);
      if (c.object_index(line.tokens[1]))
        fail_at(filename, line.number, "duplicate object '" + line.tokens[1] + "'");
      c.add_object(line.tokens[1]);
    } else if (key == "morphism") {
      arity_error(line, "morphism", 3);
      if (c.morphism_index(line.tokens[1]))
        fail_at(filename, line.number, "duplicate morphism name '" + line.tokens[1] + "'");
      int s = need_object(c, filename, line.number, line.tokens[2]);
      int t = need_object(c, filename, line.number, line.tokens[3]);
      c.add_morphism(line.tokens[1], s, t);
    } else if (key == "compose") {
      arity_error(line, "compose", 3);
      composes.push_back(PendingCompose{line.number, line.tokens[1], line.tokens[2], line.tokens[3]});
    } else if (key == "unit") {
      arity_error(line, "unit", 1);
      if (unit) fail_at(filename, line.number, "duplicate unit declaration");
      unit = line.tokens[1];
      unit_line = line.number;
    } else if (key == "tensor_obj") {
      arity_error(line, "tensor_obj", 3);
      tobjs.push_back(PendingTensorObj{line.number, line.tokens[1], line.tokens[2], line.tokens[3]});
    } else if (key == "tensor_mor") {
      arity_error(line, "tensor_mor", 3);
      tmors.push_back(PendingTensorMor{line.number, line.tokens[1], line.tokens[2], line.tokens[3]});
    } else if (key == "square") {
      arity_error(line, "square", 9);
      PendingSquare sq;
      sq.line = line.number;
      sq.name = line.tokens[1];
      for (int i = 0; i < 4; ++i) sq.corner[i] = line.tokens[2 + i];
      for (int i = 0; i < 4; ++i) sq.arrow[i] = line.tokens[6 + i];
      squares.push_back(std::move(sq));
    } else if (key == "dim") {
      arity_error(line, "dim", 2);
      dims.push_back(PendingDim{line.number, line.tokens[1],
                                need_int(filename, line.number, line.tokens[2])});
    } else if (key == "presheaf") {
      if (line.tokens.size() < 2 || line.tokens.size() > 3)
        fail_at(filename, line.number, "'presheaf' takes a name and an optional 'pointed' flag");
      PendingPresheaf p;
      p.line = line.number;
      p.name = line.tokens[1];
      if (line.tokens.size() == 3) {
        if (line.tokens[2] != "pointed")
          fail_at(filename, line.number, "unknown presheaf flag '" + line.tokens[2] + "'");
        p.pointed = true;
      }
      presheaves.push_back(std::move(p));
      open_presheaf = &presheaves.back();
    } else {
      fail_at(filename, line.number, "unknown key '" + key + "'");
    }
  }
  if (!saw_format) throw error(filename + ": missing 'format 1' header");
  if (open_presheaf) throw error(filename + ": unterminated presheaf block");

  for (const auto& pc : composes) {
    int g = need_morphism(c, filename, pc.line, pc.g);
    int f = need_morphism(c, filename, pc.line, pc.f);
    int gf = need_morphism(c, filename, pc.line, pc.gf);
    if (c.target(f) != c.source(g))
      fail_at(filename, pc.line, "pair (" + pc.g + ", " + pc.f + ") is not composable");
    c.set_compose(g, f, gf);
  }
  c.finalize();
  {
    ValidationReport rep = c.validate();
    if (!rep.ok) throw error(filename + ": " + rep.issues.front());
  }

  if (unit || !tobjs.empty() || !tmors.empty()) {
    if (!unit) throw error(filename + ": monoidal block needs a 'unit' line");
    MonoidalData m;
    m.base = &c;
    m.unit = need_object(c, filename, unit_line, *unit);
    m.init_tables();
    for (const auto& to : tobjs) {
      int x = need_object(c, filename, to.line, to.x);
      int y = need_object(c, filename, to.line, to.y);
      int z = need_object(c, filename, to.line, to.z);
      if ((m.tensor_obj(x, y) >= 0 && m.tensor_obj(x, y) != z) ||
          (m.tensor_obj(y, x) >= 0 && m.tensor_obj(y, x) != z))
        fail_at(filename, to.line, "conflicting tensor_obj entry");
      m.set_tensor_obj(x, y, z);
      m.set_tensor_obj(y, x, z);
    }
    for (int x = 0; x < c.object_count(); ++x)
      for (int y = 0; y < c.object_count(); ++y)
        if (m.tensor_obj(x, y) < 0)
          throw error(filename + ": tensor_obj entry missing for (" + c.object_name(x) + ", " +
                      c.object_name(y) + ")");
    if (tmors.empty()) {
      derive_thin_tensor_mor(m);
    } else {
      for (const auto& tm : tmors) {
        int f = need_morphism(c, filename, tm.line, tm.f);
        int g = need_morphism(c, filename, tm.line, tm.g);
        int h = need_morphism(c, filename, tm.line, tm.h);
        if ((m.tensor_mor(f, g) >= 0 && m.tensor_mor(f, g) != h) ||
            (m.tensor_mor(g, f) >= 0 && m.tensor_mor(g, f) != h))
          fail_at(filename, tm.line, "conflicting tensor_mor entry");
        m.set_tensor_mor(f, g, h);
        m.set_tensor_mor(g, f, h);
      }
      for (int f = 0; f < c.morphism_count(); ++f)
        for (int g = 0; g < c.morphism_count(); ++g)
          if (m.tensor_mor(f, g) < 0)
            throw error(filename + ": tensor_mor entry missing for (" + c.morphism_name(f) +
                        ", " + c.morphism_name(g) + ")");
    }
    ValidationReport rep = validate_monoidal(m);
    if (!rep.ok) throw error(filename + ": monoidal data invalid: " + rep.issues.front());
    doc.monoidal = std::move(m);
  }

  doc.squares.base = &c;
  for (const auto& sq : squares) {
    CommutingSquare s;
    s.ul = need_object(c, filename, sq.line, sq.corner[0]);
    s.ur = need_object(c, filename, sq.line, sq.corner[1]);
    s.ll = need_object(c, filename, sq.line, sq.corner[2]);
    s.lr = need_object(c, filename, sq.line, sq.corner[3]);
    s.top = need_morphism(c, filename, sq.line, sq.arrow[0]);
    s.left = need_morphism(c, filename, sq.line, sq.arrow[1]);
    s.p = need_morphism(c, filename, sq.line, sq.arrow[2]);
    s.e = need_morphism(c, filename, sq.line, sq.arrow[3]);
    if (!square_commutes(c, s))
      fail_at(filename, sq.line, "declared square '" + sq.name + "' does not commute");
    doc.squares.insert(s);
    doc.square_names.push_back(sq.name);
  }

  if (!dims.empty()) {
    DimensionFunction d;
    d.values.assign(c.object_count(), -2);
    for (const auto& pd : dims) {
      int o = need_object(c, filename, pd.line, pd.obj);
      d.values[o] = pd.value;
    }
    for (int o = 0; o < c.object_count(); ++o)
      if (d.values[o] == -2)
        throw error(filename + ": dimension missing for object " + c.object_name(o));
    if (!check_dimension_function(c, d))
      throw error(filename + ": dimension function violates the initial-object rule");
    doc.dims = std::move(d);
  }

  for (const auto& pp : presheaves) {
    Presheaf f;
    f.base = &c;
    f.pointed = pp.pointed;
    f.card.assign(c.object_count(), 0);
    for (const auto& [obj, k] : pp.values) {
      int o = need_object(c, filename, pp.line, obj);
      if (k < 0) throw error(filename + ": negative carrier size for " + obj);
      f.card[o] = k;
    }
    f.act.assign(c.morphism_count(), {});
    for (int m = 0; m < c.morphism_count(); ++m)
      f.act[m].assign(f.card[c.target(m)], -1);
    for (int o = 0; o < c.object_count(); ++o) {
      int id = c.identity(o);
      for (int i = 0; i < f.card[o]; ++i) f.act[id][i] = i;
    }
    for (const auto& pa : pp.actions) {
      int m = need_morphism(c, filename, pa.line, pa.mor);
      if (pa.from < 0 || pa.from >= f.card[c.target(m)] || pa.to < 0 ||
          pa.to >= f.card[c.source(m)])
        fail_at(filename, pa.line, "action entry out of carrier range");
      f.act[m][pa.from] = pa.to;
    }
    for (int m = 0; m < c.morphism_count(); ++m)
      for (int i = 0; i < f.card[c.target(m)]; ++i)
        if (f.act[m][i] < 0)
          throw error(filename + ": presheaf '" + pp.name + "' is missing action of " +
                      c.morphism_name(m) + " on element " + std::to_string(i));
    ValidationReport rep = validate_presheaf(f);
    if (!rep.ok)
      throw error(filename + ": presheaf '" + pp.name + "' invalid: " + rep.issues.front());
    doc.presheaves.push_back({pp.name, std::move(f)});
  }
  return doc;
}

std::string emit_site(const SiteDocument& doc) {
  const FinCategory& c = *doc.cat;
  std::ostringstream out;
  out << "format 1\n";
  out << "site " << doc.name << "\n\n";
  for (int o = 0; o < c.object_count(); ++o) out << "object " << c.object_name(o) << "\n";
  out << "\n";
  for (int m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) continue;
    out << "morphism " << c.morphism_name(m) << " " << c.object_name(c.source(m)) << " "
        << c.object_name(c.target(m)) << "\n";
  }
  bool any = false;
  for (int g = 0; g < c.morphism_count(); ++g) {
    if (c.is_identity(g)) continue;
    for (int f = 0; f < c.morphism_count(); ++f) {
      if (c.is_identity(f) || c.target(f) != c.source(g)) continue;
      if (!any) out << "\n";
      any = true;
      out << "compose " << c.morphism_name(g) << " " << c.morphism_name(f) << " "
          << c.morphism_name(c.compose(g, f)) << "\n";
    }
  }
  if (doc.monoidal) {
    const MonoidalData& m = *doc.monoidal;
    out << "\nunit " << c.object_name(m.unit) << "\n";
    for (int x = 0; x < c.object_count(); ++x)
      for (int y = x; y < c.object_count(); ++y)
        out << "tensor_obj " << c.object_name(x) << " " << c.object_name(y) << " "
            << c.object_name(m.tensor_obj(x, y)) << "\n";
    for (int f = 0; f < c.morphism_count(); ++f)
      for (int g = f; g < c.morphism_count(); ++g)
        out << "tensor_mor " << c.morphism_name(f) << " " << c.morphism_name(g) << " "
            << c.morphism_name(m.tensor_mor(f, g)) << "\n";
  }
  if (!doc.squares.squares.empty()) out << "\n";
  for (size_t i = 0; i < doc.squares.squares.size(); ++i) {
    const CommutingSquare& s = doc.squares.squares[i];
    std::string name = i < doc.square_names.size() ? doc.square_names[i]
                                                   : "Q" + std::to_string(i);
    out << "square " << name << " " << c.object_name(s.ul) << " " << c.object_name(s.ur) << " "
        << c.object_name(s.ll) << " " << c.object_name(s.lr) << " " << c.morphism_name(s.top)
        << " " << c.morphism_name(s.left) << " " << c.morphism_name(s.p) << " "
        << c.morphism_name(s.e) << "\n";
  }
  if (doc.dims) {
    out << "\n";
    for (int o = 0; o < c.object_count(); ++o)
      out << "dim " << c.object_name(o) << " " << doc.dims->values[o] << "\n";
  }
  for (const auto& np : doc.presheaves) {
    out << "\npresheaf " << np.name << (np.presheaf.pointed ? " pointed" : "") << "\n";
    for (int o = 0; o < c.object_count(); ++o)
      out << "value " << c.object_name(o) << " " << np.presheaf.card[o] << "\n";
    for (int m = 0; m < c.morphism_count(); ++m) {
      if (c.is_identity(m)) continue;
      for (int i = 0; i < np.presheaf.card[c.target(m)]; ++i)
        out << "action " << c.morphism_name(m) << " " << i << " " << np.presheaf.act[m][i]
            << "\n";
    }
    out << "end\n";
  }
  return out.str();
}

FinFunctor parse_functor_map(const std::string& text, const std::string& filename,
                             const SiteDocument& source, const SiteDocument& target) {
  const FinCategory& s = *source.cat;
  const FinCategory& t = *target.cat;
  FinFunctor f;
  f.src = &s;
  f.tgt = &t;
  f.omap.assign(s.object_count(), -1);
  f.mmap.assign(s.morphism_count(), -1);
  bool saw_format = false;
  for (const Line& line : tokenize(text)) {
    const std::string& key = line.tokens[0];
    if (key == "format") {
      if (line.tokens.size() != 2 || line.tokens[1] != "1")
        fail_at(filename, line.number, "unsupported format version");
      saw_format = true;
    } else if (key == "functor") {
      if (line.tokens.size() != 2) fail_at(filename, line.number, "'functor' takes a name");
    } else if (key == "object") {
      if (line.tokens.size() != 3) fail_at(filename, line.number, "'object' takes two names");
      int so = need_object(s, filename, line.number, line.tokens[1]);
      int to = need_object(t, filename, line.number, line.tokens[2]);
      f.omap[so] = to;
    } else if (key == "morphism") {
      if (line.tokens.size() != 3) fail_at(filename, line.number, "'morphism' takes two names");
      int sm = need_morphism(s, filename, line.number, line.tokens[1]);
      int tm = need_morphism(t, filename, line.number, line.tokens[2]);
      f.mmap[sm] = tm;
    } else {
      fail_at(filename, line.number, "unknown key '" + key + "'");
    }
  }
  if (!saw_format) throw error(filename + ": missing 'format 1' header");
  for (int o = 0; o < s.object_count(); ++o)
    if (f.omap[o] < 0) throw error(filename + ": object map missing for " + s.object_name(o));
  for (int o = 0; o < s.object_count(); ++o) f.mmap[s.identity(o)] = t.identity(f.omap[o]);
  for (int m = 0; m < s.morphism_count(); ++m)
    if (f.mmap[m] < 0)
      throw error(filename + ": morphism map missing for " + s.morphism_name(m));
  return f;
}

SiteDocument document_from(const std::string& name, const FinCategory& cat,
                           const MonoidalData* monoidal, const CdStructure* squares,
                           const DimensionFunction* dims) {
  SiteDocument doc;
  doc.name = name;
  doc.cat = std::make_unique<FinCategory>();
  FinCategory& c = *doc.cat;
  for (int o = 0; o < cat.object_count(); ++o) c.add_object(cat.object_name(o));
  std::vector<int> mor_map(cat.morphism_count());
  for (int m = 0; m < cat.morphism_count(); ++m) {
    if (cat.is_identity(m)) {
      mor_map[m] = c.identity(cat.source(m));
    } else {
      mor_map[m] = c.add_morphism(cat.morphism_name(m), cat.source(m), cat.target(m));
    }
  }
  for (int g = 0; g < cat.morphism_count(); ++g) {
    if (cat.is_identity(g)) continue;
    for (int f = 0; f < cat.morphism_count(); ++f) {
      if (cat.is_identity(f) || cat.target(f) != cat.source(g)) continue;
      c.set_compose(mor_map[g], mor_map[f], mor_map[cat.compose(g, f)]);
    }
  }
  c.finalize();
  if (monoidal) {
    MonoidalData m;
    m.base = &c;
    m.unit = monoidal->unit;
    m.init_tables();
    for (int x = 0; x < cat.object_count(); ++x)
      for (int y = 0; y < cat.object_count(); ++y)
        m.set_tensor_obj(x, y, monoidal->tensor_obj(x, y));
    for (int a = 0; a < cat.morphism_count(); ++a)
      for (int b = 0; b < cat.morphism_count(); ++b)
        m.set_tensor_mor(mor_map[a], mor_map[b], mor_map[monoidal->tensor_mor(a, b)]);
    doc.monoidal = std::move(m);
  }
  doc.squares.base = &c;
  if (squares) {
    for (const CommutingSquare& sq : squares->squares) {
      doc.squares.insert(CommutingSquare{sq.ul, sq.ur, sq.ll, sq.lr, mor_map[sq.top],
                                         mor_map[sq.left], mor_map[sq.p], mor_map[sq.e]});
    }
    for (size_t i = 0; i < doc.squares.squares.size(); ++i)
      doc.square_names.push_back("Q" + std::to_string(i));
  }
  if (dims) doc.dims = *dims;
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write file '" + path + "'");
  out << content;
}

std::string content_digest(const std::string& bytes) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", h);
  return buf;
}

}  // namespace cdsite
