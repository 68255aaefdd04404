// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "kerrcrit/errors.hpp"

namespace kerrcrit::detail
{

inline void put_u64(std::ostream &out, std::uint64_t v)
{
  unsigned char b[8];
  for (int i = 0; i < 8; ++i)
  {
    b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  }
  out.write(reinterpret_cast<const char *>(b), 8);
}

inline std::uint64_t get_u64(std::istream &in)
{
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char *>(b), 8))
  {
    throw FormatError("truncated binary input");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
  {
    v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  }
  return v;
}

inline void put_i64(std::ostream &out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }
inline std::int64_t get_i64(std::istream &in) { return static_cast<std::int64_t>(get_u64(in)); }
inline void put_f64(std::ostream &out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
inline double get_f64(std::istream &in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace kerrcrit::detail
