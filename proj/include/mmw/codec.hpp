// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>

#include "mmw/types.hpp"

namespace mmw {

/// Channel codec plug-in point. Only the uncoded pass-through ships.
class Codec {
 public:
  virtual ~Codec() = default;
  virtual std::string name() const = 0;
  /// Information bits carried by `coded_bits` channel bits.
  virtual std::size_t info_bits(std::size_t coded_bits) const = 0;
  virtual Bits encode(std::span<const std::uint8_t> info, std::size_t coded_bits) const = 0;
  /// Decodes from max-log LLRs (positive favours 0).
  virtual Bits decode(std::span<const double> llrs, std::size_t info_bits) const = 0;
  /// True when decode() reduces to hard decisions, letting callers skip LLRs.
  virtual bool hard_decision() const { return false; }
};

class UncodedCodec final : public Codec {
 public:
  std::string name() const override { return "none"; }
  std::size_t info_bits(std::size_t coded_bits) const override { return coded_bits; }
  Bits encode(std::span<const std::uint8_t> info, std::size_t) const override {
    return Bits(info.begin(), info.end());
  }
  Bits decode(std::span<const double> llrs, std::size_t info_bits) const override {
    Bits out(info_bits);
    for (std::size_t i = 0; i < info_bits; ++i) out[i] = llrs[i] < 0.0 ? 1 : 0;
    return out;
  }
  bool hard_decision() const override { return true; }
};

std::unique_ptr<Codec> make_codec(const std::string& name);

}  // namespace mmw
