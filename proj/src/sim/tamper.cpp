// Copyright 2026 The RDV Authors
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

#include "sim/tamper.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "core/serialize.hpp"
#include "core/verify.hpp"
#include "sim/node.hpp"

namespace rdv::sim {

using nlohmann::json;

namespace {

using Rng = std::mt19937_64;

template <std::size_t N>
void flip(std::array<std::uint8_t, N>& bytes, Rng& rng) {
  const auto i = uniform_int(rng, 0, N - 1);
  bytes[i] ^= static_cast<std::uint8_t>(uniform_int(rng, 1, 255));
}

struct Context {
  std::vector<NodeId> identities;  // every identity named anywhere in the chain

  NodeId other_than(const NodeId& n, Rng& rng) const {
    std::vector<NodeId> pool;
    for (const auto& id : identities) {
      if (id != n) pool.push_back(id);
    }
    if (pool.empty() || uniform_int(rng, 0, 3) == 0) {
      NodeId out = n;
      flip(out.bytes, rng);
      return out;
    }
    return pool[uniform_int(rng, 0, pool.size() - 1)];
  }
};

using Mutator = std::function<bool(Block&, Rng&, const Context&)>;

struct Mutation {
  const char* name;
  bool genesis_only;
  bool voter_list;
  Mutator apply;
};

bool has_votes(const Block& b) { return !b.vote_boxes.votes.empty(); }

Vote& pick_vote(Block& b, Rng& rng) { return b.vote_boxes.votes[uniform_int(rng, 0, b.vote_boxes.votes.size() - 1)]; }

std::size_t pick_member(const Block& b, Rng& rng) { return uniform_int(rng, 0, b.vote_rbox.voters.size() - 1); }

const std::vector<Mutation>& mutations() {
  static const std::vector<Mutation> list = {
      {"tx.sender", false, false, [](Block& b, Rng& r, const Context& c) {
         b.tx.sender = c.other_than(b.tx.sender, r);
         return true;
       }},
      {"tx.receiver", false, false, [](Block& b, Rng& r, const Context& c) {
         b.tx.receiver = c.other_than(b.tx.receiver, r);
         return true;
       }},
      {"tx.coin", false, false, [](Block& b, Rng& r, const Context&) {
         if (b.tx.coins.empty()) return false;
         auto& coin = b.tx.coins[uniform_int(r, 0, b.tx.coins.size() - 1)];
         if (uniform_int(r, 0, 1)) {
           coin.index += static_cast<std::uint32_t>(uniform_int(r, 1, 1000));
         } else {
           flip(coin.origin.bytes, r);
         }
         std::sort(b.tx.coins.begin(), b.tx.coins.end());
         b.tx.coins.erase(std::unique(b.tx.coins.begin(), b.tx.coins.end()), b.tx.coins.end());
         return true;
       }},
      {"tx.coin-drop", false, false, [](Block& b, Rng& r, const Context&) {
         if (b.tx.coins.size() < 2) return false;
         b.tx.coins.erase(b.tx.coins.begin() + static_cast<std::ptrdiff_t>(uniform_int(r, 0, b.tx.coins.size() - 1)));
         return true;
       }},
      {"tx.tsp", false, false, [](Block& b, Rng& r, const Context&) {
         b.tx.tsp += static_cast<Tick>(uniform_int(r, 1, 50)) * (uniform_int(r, 0, 1) ? 1 : -1);
         return true;
       }},
      {"tx.ctr", false, false, [](Block& b, Rng& r, const Context&) {
         b.tx.ctr_snapshot += uniform_int(r, 1, 100);
         return true;
       }},
      {"tx.kind", false, false, [](Block& b, Rng& r, const Context&) {
         const auto k = static_cast<TxKind>(uniform_int(r, 1, 4));
         if (k == b.tx.kind) return false;
         b.tx.kind = k;
         if (k == TxKind::ctr_exchange && !b.tx.exchange) b.tx.exchange = ExchangeTerms{1, {}};
         if (k != TxKind::ctr_exchange) b.tx.exchange.reset();
         return true;
       }},
      {"tx.id", false, false, [](Block& b, Rng& r, const Context&) {
         flip(b.tx.id.bytes, r);
         return true;
       }},
      {"tx.signature", false, false, [](Block& b, Rng& r, const Context&) {
         flip(b.tx.sender_signature.bytes, r);
         return true;
       }},
      {"tx.exchange-units", false, false, [](Block& b, Rng& r, const Context&) {
         if (!b.tx.exchange) return false;
         b.tx.exchange->ctr_units += uniform_int(r, 1, 10);
         return true;
       }},
      {"tx.exchange-signature", false, false, [](Block& b, Rng& r, const Context&) {
         if (!b.tx.exchange) return false;
         flip(b.tx.exchange->counterparty_signature.bytes, r);
         return true;
       }},
      {"vote.value", false, false, [](Block& b, Rng& r, const Context&) {
         if (!has_votes(b)) return false;
         pick_vote(b, r).value ^= 1;
         return true;
       }},
      {"vote.voter", false, false, [](Block& b, Rng& r, const Context& c) {
         if (!has_votes(b)) return false;
         Vote& v = pick_vote(b, r);
         v.voter = c.other_than(v.voter, r);
         std::sort(b.vote_boxes.votes.begin(), b.vote_boxes.votes.end(),
                   [](const Vote& x, const Vote& y) { return x.voter < y.voter; });
         return true;
       }},
      {"vote.prev", false, false, [](Block& b, Rng& r, const Context&) {
         if (!has_votes(b)) return false;
         flip(pick_vote(b, r).prev_block_hash.bytes, r);
         return true;
       }},
      {"vote.tx", false, false, [](Block& b, Rng& r, const Context&) {
         if (!has_votes(b)) return false;
         flip(pick_vote(b, r).tx_id.bytes, r);
         return true;
       }},
      {"vote.signature", false, false, [](Block& b, Rng& r, const Context&) {
         if (!has_votes(b)) return false;
         flip(pick_vote(b, r).signature.bytes, r);
         return true;
       }},
      {"vote.drop", false, false, [](Block& b, Rng& r, const Context&) {
         if (!has_votes(b)) return false;
         auto& v = b.vote_boxes.votes;
         v.erase(v.begin() + static_cast<std::ptrdiff_t>(uniform_int(r, 0, v.size() - 1)));
         return true;
       }},
      {"vote.duplicate", false, false, [](Block& b, Rng& r, const Context&) {
         if (!has_votes(b)) return false;
         auto& v = b.vote_boxes.votes;
         const auto i = uniform_int(r, 0, v.size() - 1);
         v.insert(v.begin() + static_cast<std::ptrdiff_t>(i), v[i]);
         return true;
       }},
      {"rbox.voter-replace", false, true, [](Block& b, Rng& r, const Context& c) {
         if (b.vote_rbox.voters.empty()) return false;
         auto& voters = b.vote_rbox.voters;
         const auto i = pick_member(b, r);
         voters[i] = c.other_than(voters[i], r);
         std::sort(voters.begin(), voters.end());
         return true;
       }},
      {"rbox.voter-drop", false, true, [](Block& b, Rng& r, const Context&) {
         if (b.vote_rbox.voters.empty()) return false;
         auto& voters = b.vote_rbox.voters;
         voters.erase(voters.begin() + static_cast<std::ptrdiff_t>(pick_member(b, r)));
         return true;
       }},
      {"rbox.voter-add", false, true, [](Block& b, Rng& r, const Context& c) {
         auto& voters = b.vote_rbox.voters;
         const NodeId extra = c.other_than(voters.empty() ? NodeId{} : voters.front(), r);
         if (std::binary_search(voters.begin(), voters.end(), extra)) return false;
         voters.insert(std::lower_bound(voters.begin(), voters.end(), extra), extra);
         return true;
       }},
      {"rbox.voter-order", false, true, [](Block& b, Rng& r, const Context&) {
         auto& voters = b.vote_rbox.voters;
         if (voters.size() < 2) return false;
         const auto i = uniform_int(r, 0, voters.size() - 2);
         std::swap(voters[i], voters[i + 1]);
         return true;
       }},
      {"rbox.member-drop", false, true, [](Block& b, Rng& r, const Context&) {
         if (b.vote_rbox.voters.size() < 2) return false;
         const auto i = pick_member(b, r);
         const NodeId gone = b.vote_rbox.voters[i];
         b.vote_rbox.voters.erase(b.vote_rbox.voters.begin() + static_cast<std::ptrdiff_t>(i));
         b.vote_rbox.signatures.erase(b.vote_rbox.signatures.begin() + static_cast<std::ptrdiff_t>(i));
         std::erase_if(b.vote_boxes.votes, [&](const Vote& v) { return v.voter == gone; });
         return true;
       }},
      {"rbox.signature", false, false, [](Block& b, Rng& r, const Context&) {
         if (b.vote_rbox.signatures.empty()) return false;
         flip(b.vote_rbox.signatures[uniform_int(r, 0, b.vote_rbox.signatures.size() - 1)].bytes, r);
         return true;
       }},
      {"rbox.signature-drop", false, false, [](Block& b, Rng& r, const Context&) {
         auto& s = b.vote_rbox.signatures;
         if (s.empty()) return false;
         s.erase(s.begin() + static_cast<std::ptrdiff_t>(uniform_int(r, 0, s.size() - 1)));
         return true;
       }},
      {"rbox.prev", false, false, [](Block& b, Rng& r, const Context&) {
         flip(b.vote_rbox.prev_block_hash.bytes, r);
         return true;
       }},
      {"rbox.tx", false, false, [](Block& b, Rng& r, const Context&) {
         flip(b.vote_rbox.tx_id.bytes, r);
         return true;
       }},
      {"block.prev", false, false, [](Block& b, Rng& r, const Context&) {
         flip(b.prev_hash.bytes, r);
         return true;
       }},
      {"block.height", false, false, [](Block& b, Rng& r, const Context&) {
         b.height += uniform_int(r, 1, 5);
         return true;
       }},
      {"block.hash", false, false, [](Block& b, Rng& r, const Context&) {
         flip(b.block_hash.bytes, r);
         return true;
       }},
      {"genesis.allocation", true, false, [](Block& b, Rng& r, const Context&) {
         if (!b.tx.mint || b.tx.mint->allocations.empty()) return false;
         auto& a = b.tx.mint->allocations;
         a[uniform_int(r, 0, a.size() - 1)].coins += static_cast<std::uint32_t>(uniform_int(r, 1, 100));
         return true;
       }},
      {"genesis.voter", true, false, [](Block& b, Rng& r, const Context& c) {
         if (!b.tx.mint || b.tx.mint->voters.empty()) return false;
         auto& v = b.tx.mint->voters;
         const auto i = uniform_int(r, 0, v.size() - 1);
         v[i] = c.other_than(v[i], r);
         std::sort(v.begin(), v.end());
         v.erase(std::unique(v.begin(), v.end()), v.end());
         return true;
       }},
      {"genesis.deposit", true, false, [](Block& b, Rng& r, const Context&) {
         if (!b.tx.mint) return false;
         b.tx.mint->deposit += static_cast<std::uint32_t>(uniform_int(r, 1, 5));
         return true;
       }},
  };
  return list;
}

bool genesis_applicable(const Mutation& m) {
  const std::string n = m.name;
  return m.genesis_only || n == "tx.id" || n == "block.prev" || n == "block.height" || n == "block.hash" ||
         n == "rbox.prev" || n == "rbox.tx" || n == "tx.tsp";
}

// Recomputes ids and hashes from block `b` forward, as an attacker rewriting
// history would. Signatures cannot be recomputed.
void rehash_from(std::vector<Block>& chain, std::size_t b) {
  Block& blk = chain[b];
  const Hash id = blk.tx.compute_id();
  if (id != blk.tx.id) {
    blk.tx.id = id;
    for (auto& v : blk.vote_boxes.votes) v.tx_id = id;
    blk.vote_rbox.tx_id = id;
  }
  blk.block_hash = blk.compute_hash();
  for (std::size_t i = b + 1; i < chain.size(); ++i) {
    Block& next = chain[i];
    next.prev_hash = chain[i - 1].block_hash;
    next.vote_rbox.prev_block_hash = next.prev_hash;
    for (auto& v : next.vote_boxes.votes) v.prev_block_hash = next.prev_hash;
    next.block_hash = next.compute_hash();
  }
}

struct Verdict {
  bool detected = false;
  std::string check;
  std::uint64_t height = 0;
};

Verdict check_chain(const std::vector<Block>& chain, const Hash& genesis, const Verifier& verifier) {
  const auto v = verify_chain(chain, registered_roster_history(chain), verifier, genesis);
  if (!v) return {};
  return {true, v->violation.check, v->height};
}

}  // namespace

TamperMode parse_tamper_mode(const std::string& s) {
  if (s == "all") return TamperMode::all;
  if (s == "fields") return TamperMode::fields;
  if (s == "voters") return TamperMode::voters;
  if (s == "bytes") return TamperMode::bytes;
  throw Error("unknown tamper mode '" + s + "' (all, fields, voters, bytes)");
}

json TamperReport::to_json() const {
  json muts = json::object();
  for (const auto& [name, dt] : by_mutation) muts[name] = {{"detected", dt.first}, {"trials", dt.second}};
  return {{"trials", trials},
          {"detected", detected},
          {"rate", rate()},
          {"result", complete() ? "PASS" : "FAIL"},
          {"by_mutation", muts},
          {"by_check", by_check},
          {"misses", misses}};
}

TamperReport run_tamper(const std::vector<Block>& chain, std::uint64_t trials, std::uint64_t seed, TamperMode mode) {
  if (chain.empty()) throw Error("cannot tamper with an empty chain");
  Verifier verifier;
  const Hash genesis = chain.front().block_hash;
  if (auto v = verify_chain(chain, registered_roster_history(chain), verifier, genesis)) {
    throw Error("input chain does not verify: height " + std::to_string(v->height) + ": " + v->violation.check);
  }
  Context ctx;
  {
    std::set<NodeId> ids;
    for (const auto& b : chain) {
      ids.insert(b.tx.sender);
      ids.insert(b.tx.receiver);
      for (const auto& v : b.vote_rbox.voters) ids.insert(v);
      if (b.tx.mint) {
        for (const auto& v : b.tx.mint->voters) ids.insert(v);
      }
    }
    ctx.identities.assign(ids.begin(), ids.end());
  }
  const Bytes original_dump = encode_chain_dump(chain);

  std::vector<const Mutation*> pool;
  for (const auto& m : mutations()) {
    if (mode == TamperMode::voters && !m.voter_list) continue;
    pool.push_back(&m);
  }

  Rng rng(seed);
  TamperReport report;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const bool byte_flip = mode == TamperMode::bytes || (mode == TamperMode::all && uniform_int(rng, 0, 7) == 0);
    if (byte_flip) {
      Bytes dump = original_dump;
      const auto at = uniform_int(rng, 0, dump.size() - 1);
      dump[at] ^= static_cast<std::uint8_t>(uniform_int(rng, 1, 255));
      Verdict v;
      try {
        v = check_chain(decode_chain_dump(dump), genesis, verifier);
      } catch (const DecodeError&) {
        v = {true, "decode", 0};
      }
      ++report.trials;
      auto& slot = report.by_mutation["bytes.flip"];
      ++slot.second;
      if (v.detected) {
        ++report.detected;
        ++slot.first;
        ++report.by_check[v.check];
      } else {
        report.misses.push_back("bytes.flip at offset " + std::to_string(at));
      }
      continue;
    }

    for (int attempt = 0; attempt < 1000; ++attempt) {
      const Mutation& m = *pool[uniform_int(rng, 0, pool.size() - 1)];
      const std::size_t b = uniform_int(rng, 0, chain.size() - 1);
      if (b == 0 ? !genesis_applicable(m) : m.genesis_only) continue;
      const bool rehash = uniform_int(rng, 0, 1) == 1;
      std::vector<Block> copy = chain;
      if (!m.apply(copy[b], rng, ctx)) continue;
      if (rehash) rehash_from(copy, b);
      if (encode_chain_dump(copy) == original_dump) continue;

      const std::string name = std::string(m.name) + (rehash ? "+rehash" : "");
      const Verdict v = check_chain(copy, genesis, verifier);
      const bool in_time = v.detected && v.height <= b + 1;
      ++report.trials;
      auto& slot = report.by_mutation[name];
      ++slot.second;
      if (in_time) {
        ++report.detected;
        ++slot.first;
        ++report.by_check[v.check];
      } else {
        report.misses.push_back(name + " at height " + std::to_string(b) +
                                (v.detected ? " detected late at " + std::to_string(v.height) : " undetected"));
      }
      break;
    }
  }
  return report;
}

}  // namespace rdv::sim
