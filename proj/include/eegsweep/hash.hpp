// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

// SHA-256 content hashing for cache keys and configuration fingerprints.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "eegsweep/recording.hpp"

namespace eegsweep {

class Hasher {
 public:
  Hasher();
  ~Hasher();
  Hasher(const Hasher&) = delete;
  Hasher& operator=(const Hasher&) = delete;

  Hasher& bytes(const void* data, std::size_t n);
  /// Length-prefixed, so ("ab","c") and ("a","bc") hash differently.
  Hasher& text(std::string_view s);
  Hasher& number(double v);
  Hasher& number(std::uint64_t v);
  Hasher& numbers(std::span<const double> v);

  /// Lower-case hex digest; the hasher is finished afterwards.
  std::string hex();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string sha256_hex(std::string_view s);

/// Digest of a recording's identity and samples (id, label, rate, channel names, values).
std::string content_hash(const Recording& r);

}  // namespace eegsweep
