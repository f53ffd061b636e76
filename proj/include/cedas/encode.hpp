#pragma once

#include <string>
#include <string_view>

#include "cedas/buchi.hpp"
#include "cedas/multistate.hpp"

namespace cedas {

/// Fixed-width little-endian byte encoding of multi-states, injective for one
/// model/property binding. Layout (see docs/encoding.md):
///   [one u8 per process location] [one u16 per explicit cell]
///   [u32 property-automaton state] [u32 member count] [arity x u16 per member]
/// Members appear in canonical order, so structurally equal states encode to
/// identical byte strings and vice versa.
class StateCodec {
 public:
  StateCodec(size_t num_processes, size_t num_explicits, size_t arity)
      : procs_(num_processes), explicits_(num_explicits), arity_(arity) {}

  StateCodec(const Model& m, const BuchiAutomaton&)
      : StateCodec(m.num_processes(), m.num_explicit_slots(), m.num_input_slots()) {}

  std::string encode(const MultiState& s) const {
    std::string out;
    out.reserve(procs_ + 2 * explicits_ + 8 + 2 * arity_ * s.data.size());
    for (size_t i = 0; i < procs_; ++i)
      out.push_back(static_cast<char>(s.control.locations[i] & 0xff));
    for (size_t i = 0; i < explicits_; ++i) put16(out, s.control.explicits[i]);
    put32(out, static_cast<uint32_t>(s.control.buchi_state));
    put32(out, static_cast<uint32_t>(s.data.size()));
    for (size_t i = 0; i < s.data.size(); ++i)
      for (Value v : s.data.member(i)) put16(out, v);
    return out;
  }

  MultiState decode(std::string_view bytes) const {
    MultiState s;
    size_t pos = 0;
    auto need = [&](size_t n) {
      if (pos + n > bytes.size()) throw Error("truncated multi-state encoding");
    };
    need(procs_);
    s.control.locations.resize(procs_);
    for (size_t i = 0; i < procs_; ++i)
      s.control.locations[i] = static_cast<uint8_t>(bytes[pos++]);
    need(2 * explicits_);
    s.control.explicits.resize(explicits_);
    for (size_t i = 0; i < explicits_; ++i) s.control.explicits[i] = get16(bytes, pos);
    need(8);
    s.control.buchi_state = static_cast<int>(get32(bytes, pos));
    uint32_t count = get32(bytes, pos);
    need(static_cast<size_t>(count) * arity_ * 2);
    s.data = DataSet(arity_);
    Evaluation tmp(arity_);
    for (uint32_t i = 0; i < count; ++i) {
      for (size_t j = 0; j < arity_; ++j) tmp[j] = get16(bytes, pos);
      s.data.push_member(tmp);
    }
    if (pos != bytes.size()) throw Error("trailing bytes in multi-state encoding");
    return s;
  }

  size_t arity() const { return arity_; }

 private:
  static void put16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
  }
  static void put32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  static uint16_t get16(std::string_view b, size_t& pos) {
    uint16_t v = static_cast<uint16_t>(static_cast<uint8_t>(b[pos]) |
                                       (static_cast<uint8_t>(b[pos + 1]) << 8));
    pos += 2;
    return v;
  }
  static uint32_t get32(std::string_view b, size_t& pos) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(b[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }

  size_t procs_, explicits_, arity_;
};

}  // namespace cedas
