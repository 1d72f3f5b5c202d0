// Copyright 2026 The tsyn developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tsyn/tables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <queue>
#include <unordered_map>

#include "tsyn/errors.hpp"
#include "tsyn/kernels.hpp"

namespace tsyn::tables {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kQuantScale = 1e6;

void components_of(const Unitary2& m, double out[8]) {
  for (int k = 0; k < 4; ++k) {
    out[2 * k] = m.e[k].real();
    out[2 * k + 1] = m.e[k].imag();
  }
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

CanonicalMatrix canonicalize(const Unitary2& u) {
  CanonicalMatrix c;
  c.m = u;
  for (int k = 0; k < 4; ++k) {
    const double mag = std::abs(u.e[k]);
    if (mag > kPivotTol) {
      const cplx rot = std::conj(u.e[k]) / mag;
      c.m = rot * u;
      // Pin the pivot exactly; its imaginary part is zero by construction.
      c.m.e[k] = cplx(mag, 0.0);
      break;
    }
  }
  c.fingerprint = fingerprint_of(c.m);
  return c;
}

std::uint64_t fingerprint_of(const Unitary2& canonical) {
  double comp[8];
  components_of(canonical, comp);
  std::int64_t q[8];
  for (int k = 0; k < 8; ++k) q[k] = std::llround(comp[k] * kQuantScale);
  return fnv1a(q, sizeof(q));
}

// ---------------------------------------------------------------------------
// Duplicate detection
// ---------------------------------------------------------------------------

namespace {

// Fingerprint buckets over (t, index-within-level) pairs. Lookup probes
// every rounding of components that sit near a quantization boundary, so a
// duplicate can never be missed to grid snapping; the trace check inside the
// bucket does the actual equality test.
class DedupIndex {
 public:
  struct Ref {
    std::uint32_t t;
    std::uint32_t i;
  };

  void insert(std::uint64_t fingerprint, Ref ref) {
    buckets_[fingerprint].push_back(ref);
  }

  template <typename EntryAt>
  const Ref* find(const CanonicalMatrix& cand, EntryAt&& entry_at) const {
    double comp[8];
    components_of(cand.m, comp);
    std::int64_t lo[8];
    int boundary[8];
    int nb = 0;
    for (int k = 0; k < 8; ++k) {
      const double y = comp[k] * kQuantScale;
      lo[k] = std::llround(y);
      const double frac = y - std::floor(y);
      if (std::abs(frac - 0.5) < 1e-6) {
        lo[k] = static_cast<std::int64_t>(std::floor(y));
        boundary[nb++] = k;
      }
    }
    std::int64_t q[8];
    std::memcpy(q, lo, sizeof(q));
    const std::uint32_t combos = 1u << nb;
    for (std::uint32_t c = 0; c < combos; ++c) {
      for (int b = 0; b < nb; ++b) {
        q[boundary[b]] = lo[boundary[b]] + ((c >> b) & 1u);
      }
      const auto it = buckets_.find(fnv1a(q, sizeof(q)));
      if (it == buckets_.end()) continue;
      for (const Ref& r : it->second) {
        const TableEntry& e = entry_at(r);
        if (trace_value(cand.m, e.matrix.m) > 1.0 - kDedupTol) return &r;
      }
    }
    return nullptr;
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<Ref>> buckets_;
};

}  // namespace

// ---------------------------------------------------------------------------
// RewriteTable
// ---------------------------------------------------------------------------

void RewriteTable::consider(const GateSequence& a, const GateSequence& b) {
  const SeqCost ca = cost_of(a), cb = cost_of(b);
  if (ca == cb) return;
  const GateSequence& key = (ca < cb) ? b : a;
  const GateSequence& val = (ca < cb) ? a : b;
  if (key.size() > kMaxKeyLen) return;
  auto [it, inserted] = map.try_emplace(key.str(), val);
  if (!inserted && cost_of(val) < cost_of(it->second)) it->second = val;
}

const GateSequence* RewriteTable::find(const std::string& key) const {
  const auto it = map.find(key);
  return it == map.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Clifford enumeration
// ---------------------------------------------------------------------------

std::vector<TableEntry> enumerate_cliffords(RewriteTable* rewrites) {
  struct Item {
    SeqCost cost;
    std::string word;
    bool operator>(const Item& o) const {
      return std::tie(cost, word) > std::tie(o.cost, o.word);
    }
  };

  std::vector<TableEntry> found;
  DedupIndex index;
  const auto entry_at = [&](DedupIndex::Ref r) -> const TableEntry& {
    return found[r.i];
  };

  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  queue.push({SeqCost{}, ""});

  const GateId cliff_gates[] = {GateId::H, GateId::S, GateId::X, GateId::Y,
                                GateId::Z};

  while (!queue.empty()) {
    const Item item = queue.top();
    queue.pop();
    GateSequence seq = GateSequence::from_str(item.word);
    const CanonicalMatrix cm = canonicalize(matrix_of(seq));
    if (const auto* ref = index.find(cm, entry_at)) {
      // Popped a non-minimal word for a known class; keep it as a rewrite.
      if (rewrites) rewrites->consider(seq, found[ref->i].sequence);
      continue;
    }
    index.insert(cm.fingerprint, {0, static_cast<std::uint32_t>(found.size())});
    found.push_back(TableEntry{cm, seq});
    if (found.size() == 24 && queue.empty()) break;
    for (GateId g : cliff_gates) {
      Item next{item.cost, item.word + gate_char(g)};
      next.cost.len += 1;
      if (!is_pauli(g)) next.cost.sh += 1;
      queue.push(next);
    }
  }

  if (found.size() != 24) {
    throw Error("Clifford enumeration found " + std::to_string(found.size()) +
                " classes instead of 24");
  }
  return found;
}

// ---------------------------------------------------------------------------
// Full enumeration
// ---------------------------------------------------------------------------

namespace {

std::size_t expected_cumulative(int t) {
  return 24u * ((std::size_t{3} << t) - 2u);
}

std::size_t estimate_bytes(int max_t) {
  const std::size_t entries = expected_cumulative(max_t);
  // canonical matrix + stacked copy + sequence storage + index overhead
  const std::size_t per_entry = 220 + 6 * static_cast<std::size_t>(max_t + 1);
  return entries * per_entry;
}

}  // namespace

BuildResult enumerate_table(int max_t, const EnumerationConfig& cfg) {
  if (max_t < 0) throw InputError("max_t must be >= 0");
  if (max_t > 24) throw BudgetExceededError("max_t beyond any practical size");
  if (estimate_bytes(max_t) > cfg.memory_cap_bytes) {
    throw BudgetExceededError(
        "table for max_t=" + std::to_string(max_t) + " estimated at " +
        std::to_string(estimate_bytes(max_t)) + " bytes, over the cap of " +
        std::to_string(cfg.memory_cap_bytes));
  }

  BuildResult out;
  UniqueTable& tbl = out.table;
  tbl.max_t = max_t;
  tbl.entries_by_t.resize(max_t + 1);
  tbl.entries_by_t[0] = enumerate_cliffords(&out.rewrites);
  const std::vector<TableEntry>& cliffords = tbl.entries_by_t[0];

  DedupIndex index;
  const auto entry_at = [&](DedupIndex::Ref r) -> const TableEntry& {
    return tbl.entries_by_t[r.t][r.i];
  };
  for (std::uint32_t i = 0; i < cliffords.size(); ++i) {
    index.insert(cliffords[i].matrix.fingerprint, {0, i});
  }

  const Unitary2& tmat = gate_matrix(GateId::T);
  for (int t = 1; t <= max_t; ++t) {
    auto& level = tbl.entries_by_t[t];
    for (const TableEntry& w : tbl.entries_by_t[t - 1]) {
      const Unitary2 tw = tmat * w.matrix.m;
      GateSequence base = w.sequence;
      base.append(GateId::T);
      for (const TableEntry& c : cliffords) {
        const CanonicalMatrix cm = canonicalize(c.matrix.m * tw);
        GateSequence seq = base;
        seq.append(c.sequence);
        if (const auto* ref = index.find(cm, entry_at)) {
          TableEntry& existing = tbl.entries_by_t[ref->t][ref->i];
          out.rewrites.consider(seq, existing.sequence);
          if (cost_of(seq) < cost_of(existing.sequence)) {
            existing.sequence = std::move(seq);
          }
        } else {
          index.insert(cm.fingerprint,
                       {static_cast<std::uint32_t>(t),
                        static_cast<std::uint32_t>(level.size())});
          level.push_back(TableEntry{cm, std::move(seq)});
        }
      }
    }
  }

  tbl.stacked.reserve(4 * expected_cumulative(max_t));
  for (const auto& level : tbl.entries_by_t) {
    for (const TableEntry& e : level) {
      tbl.stacked.insert(tbl.stacked.end(), e.matrix.m.e.begin(),
                         e.matrix.m.e.end());
    }
  }
  return out;
}

std::size_t UniqueTable::count_through(int t) const {
  if (t < 0) return 0;
  std::size_t n = 0;
  const int hi = std::min<int>(t, max_t);
  for (int k = 0; k <= hi; ++k) n += entries_by_t[k].size();
  return n;
}

const TableEntry& UniqueTable::entry(std::size_t flat_index) const {
  for (const auto& level : entries_by_t) {
    if (flat_index < level.size()) return level[flat_index];
    flat_index -= level.size();
  }
  throw InputError("table entry index out of range");
}

std::span<const cplx> UniqueTable::stacked_span(std::size_t begin,
                                                std::size_t end) const {
  if (begin > end || 4 * end > stacked.size()) {
    throw InputError("table slice out of range");
  }
  return {stacked.data() + 4 * begin, 4 * (end - begin)};
}

// ---------------------------------------------------------------------------
// Lookup
// ---------------------------------------------------------------------------

LookupResult lookup_nearest(const UniqueTable& table, const Unitary2& target) {
  const std::size_t n = table.size();
  if (n == 0) throw InputError("lookup_nearest on an empty table");
  std::vector<cplx> tr(n);
  kernels::batch_frobenius(target.e.data(), table.stacked.data(), n,
                           tr.data());
  std::size_t best = 0;
  double best_mag = std::abs(tr[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double m = std::abs(tr[i]);
    if (m > best_mag + kExactTol) {
      best = i;
      best_mag = m;
    } else if (m > best_mag - kExactTol) {
      if (cost_of(table.entry(i).sequence) <
          cost_of(table.entry(best).sequence)) {
        best = i;
        best_mag = std::max(best_mag, m);
      }
    }
  }
  return {best, &table.entry(best), 0.5 * std::abs(tr[best])};
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'T', 'S', 'Y', 'N'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kGateSetCliffordT = 0;

struct ByteWriter {
  std::vector<std::uint8_t> buf;

  void u8(std::uint8_t v) { buf.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf.push_back((v >> (8 * i)) & 0xff);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back((v >> (8 * i)) & 0xff);
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back((v >> (8 * i)) & 0xff);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
};

struct ByteReader {
  const std::uint8_t* p;
  std::size_t n;
  std::size_t pos = 0;

  void need(std::size_t k) const {
    if (pos + k > n) throw CorruptTableError("table file truncated");
  }
  std::uint8_t u8() {
    need(1);
    return p[pos++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= std::uint16_t(p[pos++]) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[pos++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[pos++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
};

void write_sequence(ByteWriter& w, const GateSequence& seq) {
  w.u16(static_cast<std::uint16_t>(seq.size()));
  for (GateId g : seq.gates) w.u8(static_cast<std::uint8_t>(g));
}

GateSequence read_sequence(ByteReader& r, std::size_t len) {
  GateSequence seq;
  seq.gates.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint8_t b = r.u8();
    if (b > 5) throw CorruptTableError("invalid gate id in table file");
    seq.gates.push_back(static_cast<GateId>(b));
  }
  return seq;
}

}  // namespace

void save_table(const UniqueTable& table, const RewriteTable& rewrites,
                const std::string& path) {
  ByteWriter w;
  w.buf.insert(w.buf.end(), kMagic, kMagic + 4);
  w.u32(kVersion);
  w.u8(kGateSetCliffordT);
  w.u8(static_cast<std::uint8_t>(table.max_t));
  w.u64(table.size());
  for (const auto& level : table.entries_by_t) {
    for (const TableEntry& e : level) {
      for (const cplx& c : e.matrix.m.e) {
        w.f64(c.real());
        w.f64(c.imag());
      }
      write_sequence(w, e.sequence);
    }
  }
  w.u64(rewrites.map.size());
  for (const auto& [key, val] : rewrites.map) {
    w.u16(static_cast<std::uint16_t>(key.size()));
    for (char c : key) {
      GateId g;
      gate_from_char(c, g);
      w.u8(static_cast<std::uint8_t>(g));
    }
    write_sequence(w, val);
  }
  w.u64(fnv1a(w.buf.data(), w.buf.size()));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(w.buf.data()),
          static_cast<std::streamsize>(w.buf.size()));
  if (!f) throw InputError("failed to write '" + path + "'");
}

BuildResult load_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                std::istreambuf_iterator<char>());

  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw CorruptTableError("bad magic bytes");
  }
  if (buf.size() < 8 + 4 + 2 + 8) throw CorruptTableError("table file truncated");
  ByteReader tail{buf.data(), buf.size(), buf.size() - 8};
  const std::uint64_t checksum = tail.u64();
  if (checksum != fnv1a(buf.data(), buf.size() - 8)) {
    throw CorruptTableError("checksum mismatch");
  }

  ByteReader r{buf.data(), buf.size() - 8, 4};
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw VersionError("unsupported table version " + std::to_string(version));
  }
  const std::uint8_t gate_set = r.u8();
  if (gate_set != kGateSetCliffordT) {
    throw VersionError("unsupported gate-set id " + std::to_string(gate_set));
  }
  const int max_t = r.u8();
  const std::uint64_t count = r.u64();

  BuildResult out;
  out.table.max_t = max_t;
  out.table.entries_by_t.resize(max_t + 1);
  out.table.stacked.reserve(4 * count);
  int prev_t = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    TableEntry e;
    for (int k = 0; k < 4; ++k) {
      const double re = r.f64();
      const double im = r.f64();
      e.matrix.m.e[k] = cplx(re, im);
    }
    e.matrix.fingerprint = fingerprint_of(e.matrix.m);
    e.sequence = read_sequence(r, r.u16());
    const int t = e.sequence.t_count();
    if (t > max_t || t < prev_t) {
      throw CorruptTableError("entries out of T-count order");
    }
    prev_t = t;
    out.table.stacked.insert(out.table.stacked.end(), e.matrix.m.e.begin(),
                             e.matrix.m.e.end());
    out.table.entries_by_t[t].push_back(std::move(e));
  }

  const std::uint64_t nrw = r.u64();
  for (std::uint64_t i = 0; i < nrw; ++i) {
    const GateSequence key = read_sequence(r, r.u16());
    GateSequence val = read_sequence(r, r.u16());
    out.rewrites.map.emplace(key.str(), std::move(val));
  }
  if (r.pos != r.n) throw CorruptTableError("trailing bytes in table file");
  return out;
}

}  // namespace tsyn::tables
