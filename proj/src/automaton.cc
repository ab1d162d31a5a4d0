// Copyright 2026 The cmine Authors.
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

#include "cmine/automaton.h"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "cmine/errors.h"

namespace cmine {
namespace {

constexpr char kMagic[4] = {'C', 'M', 'N', '1'};

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void bytes(const void* p, std::size_t n) {
    buf_.append(static_cast<const char*>(p), n);
  }
  void str(const std::string& s) {
    if (s.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw IndexFormatError("string too long to serialize");
    }
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  std::string& buffer() { return buf_; }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::string str() { return std::string(bytes(u32())); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (n > data_.size() - pos_) throw IndexFormatError("index file is truncated");
  }
  std::uint64_t get_le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < data.size(); off += kChunk) {
    const std::size_t n = std::min(kChunk, data.size() - off);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data() + off),
                static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

Automaton Automaton::build(std::span<const PatternEntry> patterns,
                           const Fingerprint& fingerprint) {
  if (patterns.empty()) {
    throw ConfigError("cannot build an automaton from an empty pattern list");
  }

  // Distinct pattern strings, with merged payload lists.
  std::unordered_map<std::string, std::uint32_t> id_of;
  std::vector<std::string> keys;
  std::vector<std::uint32_t> token_counts;
  std::vector<std::vector<Payload>> grouped;
  for (const auto& p : patterns) {
    if (p.tokens.empty()) throw ConfigError("pattern has no tokens");
    std::string key;
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
      const auto& t = p.tokens[i];
      if (t.empty()) throw ConfigError("pattern contains an empty token");
      if (t.find(kTokenSeparator) != std::string::npos) {
        throw ConfigError("pattern token contains the 0x1F separator byte");
      }
      if (i > 0) key.push_back(kTokenSeparator);
      key += t;
    }
    const auto [it, inserted] =
        id_of.emplace(key, static_cast<std::uint32_t>(keys.size()));
    if (inserted) {
      keys.push_back(std::move(key));
      token_counts.push_back(static_cast<std::uint32_t>(p.tokens.size()));
      grouped.emplace_back();
    }
    auto& list = grouped[it->second];
    const auto same = std::find_if(list.begin(), list.end(), [&](const Payload& q) {
      return q.concept_id == p.payload.concept_id;
    });
    if (same == list.end()) {
      list.push_back(p.payload);
    } else {
      same->semantic_types.insert(p.payload.semantic_types.begin(),
                                  p.payload.semantic_types.end());
    }
  }

  // Byte trie in insertion order.
  struct TmpNode {
    std::vector<std::pair<std::uint8_t, std::uint32_t>> kids;
    std::uint32_t pattern = kNoPattern;
  };
  std::vector<TmpNode> tmp(1);
  for (std::uint32_t pid = 0; pid < keys.size(); ++pid) {
    std::uint32_t node = 0;
    for (const char ch : keys[pid]) {
      const auto b = static_cast<std::uint8_t>(ch);
      auto& kids = tmp[node].kids;
      const auto it = std::find_if(kids.begin(), kids.end(),
                                   [b](const auto& kv) { return kv.first == b; });
      if (it != kids.end()) {
        node = it->second;
      } else {
        const auto fresh = static_cast<std::uint32_t>(tmp.size());
        tmp[node].kids.emplace_back(b, fresh);
        tmp.emplace_back();
        node = fresh;
      }
    }
    tmp[node].pattern = pid;
  }
  if (tmp.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("automaton exceeds 2^32 states");
  }

  // Renumber breadth-first; children are visited in byte order.
  Automaton a;
  a.fingerprint_ = fingerprint;
  std::vector<std::uint32_t> order{0};
  order.reserve(tmp.size());
  a.edge_begin_.reserve(tmp.size() + 1);
  a.own_pattern_.reserve(tmp.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& node = tmp[order[i]];
    std::sort(node.kids.begin(), node.kids.end());
    a.edge_begin_.push_back(static_cast<std::uint32_t>(a.edges_.size()));
    a.own_pattern_.push_back(node.pattern);
    for (const auto& [b, kid] : node.kids) {
      a.edges_.push_back({b, static_cast<State>(order.size())});
      order.push_back(kid);
    }
    node.kids.clear();
    node.kids.shrink_to_fit();
  }
  a.edge_begin_.push_back(static_cast<std::uint32_t>(a.edges_.size()));

  // Patterns keep their first-seen order.
  for (std::uint32_t pid = 0; pid < keys.size(); ++pid) {
    PatternInfo info;
    info.byte_length = static_cast<std::uint32_t>(keys[pid].size());
    info.token_count = token_counts[pid];
    info.payload_begin = static_cast<std::uint32_t>(a.payloads_.size());
    info.payload_count = static_cast<std::uint32_t>(grouped[pid].size());
    a.patterns_.push_back(info);
    for (auto& p : grouped[pid]) a.payloads_.push_back(std::move(p));
  }

  a.index_structure();

  // Failure links, breadth-first: a parent's link is final before its
  // children are visited.
  const std::size_t n = a.edge_begin_.size() - 1;
  a.fail_.assign(n, kRoot);
  for (State u = 0; u < n; ++u) {
    for (std::uint32_t e = a.edge_begin_[u]; e < a.edge_begin_[u + 1]; ++e) {
      const auto [c, v] = a.edges_[e];
      if (u == kRoot) continue;
      State f = a.fail_[u];
      while (f != kRoot && a.lookup(f, c) == kRoot) f = a.fail_[f];
      const State g = a.lookup(f, c);
      a.fail_[v] = (g != kRoot && g != v) ? g : kRoot;
    }
  }

  a.flatten_outputs();
  return a;
}

void Automaton::index_structure() {
  const std::size_t n = edge_begin_.size() - 1;
  parent_.assign(n, kRoot);
  in_byte_.assign(n, 0);
  depth_.assign(n, 0);
  dense_slot_.assign(n, kNoPattern);
  dense_.clear();
  for (State u = 0; u < n; ++u) {
    for (std::uint32_t e = edge_begin_[u]; e < edge_begin_[u + 1]; ++e) {
      const auto [c, v] = edges_[e];
      parent_[v] = u;
      in_byte_[v] = c;
      depth_[v] = depth_[u] + 1;
    }
  }
  for (State u = 0; u < n; ++u) {
    if (depth_[u] > kDenseDepth) continue;
    dense_slot_[u] = static_cast<std::uint32_t>(dense_.size());
    auto& table = dense_.emplace_back();
    table.fill(kRoot);
    for (std::uint32_t e = edge_begin_[u]; e < edge_begin_[u + 1]; ++e) {
      table[edges_[e].byte] = edges_[e].target;
    }
  }
}

void Automaton::flatten_outputs() {
  const std::size_t n = node_count();
  out_begin_.assign(1, 0);
  out_begin_.reserve(n + 1);
  out_.clear();
  pattern_state_.assign(patterns_.size(), kRoot);
  for (State v = 0; v < n; ++v) {
    if (own_pattern_[v] != kNoPattern) {
      out_.push_back(own_pattern_[v]);
      pattern_state_[own_pattern_[v]] = v;
    }
    if (v != kRoot) {
      // fail_[v] precedes v in BFS order, so its list is complete.
      const State f = fail_[v];
      for (std::uint32_t i = out_begin_[f]; i < out_begin_[f + 1]; ++i) {
        out_.push_back(out_[i]);
      }
    }
    out_begin_.push_back(static_cast<std::uint32_t>(out_.size()));
  }
}

Automaton::State Automaton::lookup(State s, std::uint8_t byte) const {
  if (dense_slot_[s] != kNoPattern) return dense_[dense_slot_[s]][byte];
  const Edge* first = edges_.data() + edge_begin_[s];
  const Edge* last = edges_.data() + edge_begin_[s + 1];
  const Edge* it = std::lower_bound(
      first, last, byte, [](const Edge& e, std::uint8_t b) { return e.byte < b; });
  return (it != last && it->byte == byte) ? it->target : kRoot;
}

std::optional<Automaton::State> Automaton::next(State s, std::uint8_t byte) const {
  const State t = lookup(s, byte);
  if (t == kRoot) return std::nullopt;
  return t;
}

std::span<const std::uint32_t> Automaton::outputs(State s) const {
  return {out_.data() + out_begin_[s], out_begin_[s + 1] - out_begin_[s]};
}

std::span<const Payload> Automaton::payloads(std::uint32_t pattern) const {
  const auto& info = patterns_[pattern];
  return {payloads_.data() + info.payload_begin, info.payload_count};
}

std::string Automaton::pattern_bytes(std::uint32_t pattern) const {
  std::string out;
  for (State s = pattern_state_[pattern]; s != kRoot; s = parent_[s]) {
    out.push_back(static_cast<char>(in_byte_[s]));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Automaton::State Automaton::step(State s, std::uint8_t byte, std::size_t& steps) const {
  State t;
  while ((t = lookup(s, byte)) == kRoot && s != kRoot) {
    s = fail_[s];
    ++steps;
  }
  ++steps;
  return t;
}

std::vector<RawMatch> Automaton::scan(std::span<const std::string> tokens,
                                      ScanStats* stats) const {
  std::vector<RawMatch> matches;
  std::vector<std::size_t> token_start(tokens.size());
  std::size_t offset = 0;
  std::size_t steps = 0;
  State s = kRoot;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (t > 0) {
      s = step(s, static_cast<std::uint8_t>(kTokenSeparator), steps);
      ++offset;
    }
    token_start[t] = offset;
    const auto& tok = tokens[t];
    for (const char ch : tok) s = step(s, static_cast<std::uint8_t>(ch), steps);
    offset += tok.size();
    if (tok.empty()) continue;

    // Every output here ends on a token boundary; keep those that also start
    // on one.
    for (const std::uint32_t pid : outputs(s)) {
      const auto& info = patterns_[pid];
      if (info.token_count > t + 1) continue;
      const std::size_t first = t + 1 - info.token_count;
      if (token_start[first] + info.byte_length != offset) continue;
      matches.push_back({first, t + 1, pid, payloads(pid)});
    }
  }
  if (stats) {
    stats->bytes = offset;
    stats->steps = steps;
  }
  return matches;
}

std::vector<RawMatch> Automaton::search(const NormalizedText& nt,
                                        const Fingerprint& text_fingerprint,
                                        ScanStats* stats) const {
  if (text_fingerprint != fingerprint_) {
    throw ConfigMismatchError(
        "normalization config fingerprint " + to_hex(text_fingerprint) +
        " does not match the index fingerprint " + to_hex(fingerprint_));
  }
  return scan(nt.tokens, stats);
}

void Automaton::save(std::ostream& out) const {
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.u16(kFormatVersion);
  w.bytes(fingerprint_.data(), fingerprint_.size());
  w.u32(static_cast<std::uint32_t>(node_count()));
  for (State u = 0; u < node_count(); ++u) {
    w.u32(fail_[u]);
    w.u32(own_pattern_[u]);
    w.u16(static_cast<std::uint16_t>(edge_begin_[u + 1] - edge_begin_[u]));
    for (std::uint32_t e = edge_begin_[u]; e < edge_begin_[u + 1]; ++e) {
      w.u8(edges_[e].byte);
      w.u32(edges_[e].target);
    }
  }
  w.u32(static_cast<std::uint32_t>(patterns_.size()));
  for (std::uint32_t pid = 0; pid < patterns_.size(); ++pid) {
    const auto& info = patterns_[pid];
    w.u32(info.byte_length);
    w.u32(info.token_count);
    w.u32(info.payload_count);
    for (const auto& p : payloads(pid)) {
      w.str(p.concept_id);
      w.str(p.original_term);
      w.str(p.preferred_term);
      w.u32(static_cast<std::uint32_t>(p.semantic_types.size()));
      for (const auto& t : p.semantic_types) w.str(t);
    }
  }
  w.u32(static_cast<std::uint32_t>(token_counts_.size()));
  for (const auto& [tok, count] : token_counts_) {
    w.str(tok);
    w.u64(count);
  }
  w.u32(crc32_of(w.buffer()));
  out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
  if (!out) throw IoError("failed to write index");
}

void Automaton::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  save(out);
  out.close();
  if (!out) throw IoError("failed to write " + path);
}

Automaton Automaton::load(std::istream& in) {
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error while loading index");
  constexpr std::size_t kHeader = sizeof(kMagic) + 2 + 32 + 4;
  if (data.size() < kHeader + 4) throw IndexFormatError("index file is truncated");
  if (std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
    throw IndexFormatError("not a cmine index (bad magic)");
  }

  const std::string_view body(data.data(), data.size() - 4);
  Reader r(body);
  r.bytes(sizeof(kMagic));
  const std::uint16_t version = r.u16();
  if (version != kFormatVersion) {
    throw IndexFormatError("unsupported index format version " +
                           std::to_string(version) + " (expected " +
                           std::to_string(kFormatVersion) + ")");
  }
  Reader crc_reader(std::string_view(data).substr(data.size() - 4));
  if (crc_reader.u32() != crc32_of(body)) {
    throw IndexFormatError("index checksum mismatch (file corrupted or truncated)");
  }

  Automaton a;
  const auto fp = r.bytes(32);
  std::memcpy(a.fingerprint_.data(), fp.data(), fp.size());

  const std::uint32_t n = r.u32();
  if (n == 0) throw IndexFormatError("index has no states");
  // Each node needs at least 10 bytes; reject absurd counts before allocating.
  if (n > r.remaining() / 10) throw IndexFormatError("index file is truncated");
  a.fail_.resize(n);
  a.own_pattern_.resize(n);
  a.edge_begin_.reserve(n + 1);
  std::uint32_t expected_child = 1;
  for (State u = 0; u < n; ++u) {
    a.fail_[u] = r.u32();
    a.own_pattern_[u] = r.u32();
    const std::uint16_t edge_count = r.u16();
    a.edge_begin_.push_back(static_cast<std::uint32_t>(a.edges_.size()));
    int prev_byte = -1;
    for (std::uint16_t e = 0; e < edge_count; ++e) {
      const std::uint8_t b = r.u8();
      const std::uint32_t target = r.u32();
      if (static_cast<int>(b) <= prev_byte || target != expected_child || target >= n) {
        throw IndexFormatError("corrupt index: malformed transition table");
      }
      prev_byte = b;
      ++expected_child;
      a.edges_.push_back({b, target});
    }
  }
  a.edge_begin_.push_back(static_cast<std::uint32_t>(a.edges_.size()));
  if (expected_child != n) throw IndexFormatError("corrupt index: unreachable states");

  const std::uint32_t pattern_count = r.u32();
  if (pattern_count > r.remaining() / 12) throw IndexFormatError("index file is truncated");
  for (std::uint32_t pid = 0; pid < pattern_count; ++pid) {
    PatternInfo info;
    info.byte_length = r.u32();
    info.token_count = r.u32();
    info.payload_count = r.u32();
    info.payload_begin = static_cast<std::uint32_t>(a.payloads_.size());
    if (info.payload_count > r.remaining()) throw IndexFormatError("index file is truncated");
    for (std::uint32_t i = 0; i < info.payload_count; ++i) {
      Payload p;
      p.concept_id = r.str();
      p.original_term = r.str();
      p.preferred_term = r.str();
      const std::uint32_t types = r.u32();
      for (std::uint32_t k = 0; k < types; ++k) p.semantic_types.insert(r.str());
      a.payloads_.push_back(std::move(p));
    }
    a.patterns_.push_back(info);
  }
  const std::uint32_t vocab = r.u32();
  for (std::uint32_t i = 0; i < vocab; ++i) {
    auto tok = r.str();
    a.token_counts_[std::move(tok)] = r.u64();
  }
  if (r.remaining() != 0) throw IndexFormatError("corrupt index: trailing bytes");

  a.index_structure();

  std::vector<bool> pattern_seen(pattern_count, false);
  for (State u = 0; u < n; ++u) {
    if (u == kRoot ? a.fail_[u] != kRoot
                   : (a.fail_[u] >= n || a.depth_[a.fail_[u]] >= a.depth_[u])) {
      throw IndexFormatError("corrupt index: bad failure link");
    }
    const std::uint32_t pid = a.own_pattern_[u];
    if (pid == kNoPattern) continue;
    if (pid >= pattern_count || pattern_seen[pid] ||
        a.patterns_[pid].byte_length != a.depth_[u]) {
      throw IndexFormatError("corrupt index: bad pattern reference");
    }
    pattern_seen[pid] = true;
  }
  if (std::find(pattern_seen.begin(), pattern_seen.end(), false) != pattern_seen.end()) {
    throw IndexFormatError("corrupt index: pattern without a state");
  }

  a.flatten_outputs();
  return a;
}

Automaton Automaton::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return load(in);
}

}  // namespace cmine
