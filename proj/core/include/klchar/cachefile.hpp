#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "klchar/laurent.hpp"
#include "klchar/weyl.hpp"

namespace klchar {

// Coefficient map of one basis element in the standard basis.
using CoeffMap = std::map<ExtElt, LaurentPoly>;

// Line-oriented text format shared by the Kazhdan-Lusztig cache, the
// antispherical cache and imported canonical-basis tables:
//
//   <KIND> v1 <datum descriptor>
//   <element> | <element>:<poly>;<element>:<poly>;...
//
// with <element> in the "w=[...];t=(...)" grammar and <poly> as
// comma-separated "exp^coeff" pairs sorted by exponent.  Entries and the
// per-entry coefficient lists are sorted by (length, serialization), so a
// store/load round-trip is byte-exact.
namespace cachefile {

using EntryMap = std::map<ExtElt, CoeffMap>;

void write(const std::filesystem::path& path, const std::string& kind,
           const WeylContext& ctx, const EntryMap& entries);

// Throws cache_error on version/kind/descriptor mismatch or a corrupt
// entry (with the offending line number).  An empty file yields an empty
// map.
EntryMap read(const std::filesystem::path& path, const std::string& kind,
              const WeylContext& ctx);

// FNV-1a over the file bytes, in hex; used to identify imported tables.
std::string file_hash(const std::filesystem::path& path);

}  // namespace cachefile

}  // namespace klchar
