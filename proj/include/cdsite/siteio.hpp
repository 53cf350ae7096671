#pragma once

#include <memory>

#include "cdsite/cdstructure.hpp"
#include "cdsite/presheaf.hpp"

namespace cdsite {

/// One parsed site description: a finite category plus optional monoidal
/// data, distinguished squares, a dimension function and named presheaves.
/// The category is heap-allocated so the internal pointers stay valid when
/// the document moves.
struct SiteDocument {
  std::string name = "site";
  std::unique_ptr<FinCategory> cat;
  std::optional<MonoidalData> monoidal;
  CdStructure squares;  // as declared (degenerate squares are added by normalize_cd)
  std::vector<std::string> square_names;
  std::optional<DimensionFunction> dims;
  struct NamedPresheaf {
    std::string name;
    Presheaf presheaf;
  };
  std::vector<NamedPresheaf> presheaves;

  const Presheaf* find_presheaf(const std::string& pname) const;
};

// Parses and fully validates a site document. Throws cdsite::error with
// file:line diagnostics on syntax errors, dangling references, missing
// composition entries, non-commuting squares, bad monoidal tables, invalid
// dimension functions or invalid presheaves.
SiteDocument parse_site(const std::string& text, const std::string& filename);

// Canonical serialization: parse(emit(doc)) reproduces the document.
std::string emit_site(const SiteDocument& doc);

// Functor description file: explicit object and morphism pairs between two
// parsed sites. Identities map automatically.
FinFunctor parse_functor_map(const std::string& text, const std::string& filename,
                             const SiteDocument& source, const SiteDocument& target);

// Builds a SiteDocument around an existing category (used by `tensorize` and
// `zero-complete` to materialize derived sites).
SiteDocument document_from(const std::string& name, const FinCategory& cat,
                           const MonoidalData* monoidal, const CdStructure* squares,
                           const DimensionFunction* dims);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// FNV-1a over the raw bytes, for report reproducibility stamps.
std::string content_digest(const std::string& bytes);

}  // namespace cdsite
