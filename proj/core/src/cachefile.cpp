#include "klchar/cachefile.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace klchar::cachefile {

namespace {

std::vector<std::pair<Int, std::string>> sorted_keys(const WeylContext& ctx,
                                                     const CoeffMap& m) {
  std::vector<std::pair<Int, std::string>> keys;
  keys.reserve(m.size());
  for (const auto& [y, p] : m) keys.emplace_back(ctx.length(y), ctx.serialize(y));
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

void write(const std::filesystem::path& path, const std::string& kind,
           const WeylContext& ctx, const EntryMap& entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw cache_error("cannot open cache file for writing: " + path.string());
  out << kind << " v1 " << ctx.datum().descriptor() << '\n';

  std::vector<std::tuple<Int, std::string, const CoeffMap*>> order;
  order.reserve(entries.size());
  for (const auto& [w, m] : entries)
    order.emplace_back(ctx.length(w), ctx.serialize(w), &m);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) < std::get<1>(b);
  });

  for (const auto& [len, wkey, m] : order) {
    out << wkey << " | ";
    bool first = true;
    std::map<std::pair<Int, std::string>, const LaurentPoly*> inner;
    for (const auto& [y, p] : *m)
      inner.emplace(std::make_pair(ctx.length(y), ctx.serialize(y)), &p);
    for (const auto& [key, p] : inner) {
      if (!first) out << ';';
      first = false;
      out << key.second << ':' << p->cache_str();
    }
    out << '\n';
  }
  if (!out) throw cache_error("write failure on cache file: " + path.string());
}

EntryMap read(const std::filesystem::path& path, const std::string& kind,
              const WeylContext& ctx) {
  std::ifstream in(path);
  if (!in) throw cache_error("cannot open cache file: " + path.string());
  EntryMap out;

  std::string line;
  if (!std::getline(in, line)) return out;  // empty file: empty cache

  {
    std::istringstream hs(line);
    std::string k, version, descriptor;
    hs >> k >> version >> descriptor;
    if (k != kind)
      throw cache_error("cache header kind mismatch: expected " + kind + ", found " +
                        (k.empty() ? std::string("<none>") : k));
    if (version != "v1")
      throw cache_error("unsupported cache version '" + version + "' in " + path.string());
    if (descriptor != ctx.datum().descriptor())
      throw cache_error("cache datum descriptor mismatch: expected " +
                        ctx.datum().descriptor() + ", found " + descriptor);
  }

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto where = [&] { return path.string() + ":" + std::to_string(lineno); };
    const size_t sep = line.find(" | ");
    if (sep == std::string::npos)
      throw cache_error("corrupt cache entry (missing separator) at " + where());
    ExtElt w;
    try {
      w = ctx.parse_element(line.substr(0, sep));
    } catch (const parse_error& e) {
      throw cache_error("corrupt cache entry key at " + where() + ": " + e.what());
    }
    if (out.count(w))
      throw cache_error("duplicate cache entry at " + where());

    CoeffMap m;
    const std::string body = line.substr(sep + 3);
    size_t pos = 0;
    while (pos < body.size()) {
      // Item boundaries: a ';' immediately followed by the start of the next
      // element (the element grammar itself contains a ';').
      size_t next = body.find(";w=[", pos + 1);
      if (next == std::string::npos) next = body.size();
      const std::string item = body.substr(pos, next - pos);
      const size_t colon = item.rfind(':');
      if (colon == std::string::npos)
        throw cache_error("corrupt coefficient item at " + where());
      try {
        ExtElt y = ctx.parse_element(item.substr(0, colon));
        LaurentPoly p = LaurentPoly::parse_cache(item.substr(colon + 1));
        if (p.is_zero())
          throw cache_error("zero coefficient stored at " + where());
        if (!m.emplace(std::move(y), std::move(p)).second)
          throw cache_error("duplicate coefficient key at " + where());
      } catch (const parse_error& e) {
        throw cache_error("corrupt coefficient item at " + where() + ": " + e.what());
      }
      pos = next + 1;
    }
    if (m.empty()) throw cache_error("empty cache entry at " + where());
    out.emplace(std::move(w), std::move(m));
  }
  return out;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cache_error("cannot open file for hashing: " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace klchar::cachefile
