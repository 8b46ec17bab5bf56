// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/hash.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

namespace eegsweep {

struct Hasher::Impl {
  EVP_MD_CTX* ctx = nullptr;
  bool done = false;
};

Hasher::Hasher() : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_MD_CTX_new();
  if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("cannot initialise SHA-256");
}

Hasher::~Hasher() { EVP_MD_CTX_free(impl_->ctx); }

Hasher& Hasher::bytes(const void* data, std::size_t n) {
  if (impl_->done) throw std::logic_error("hasher already finished");
  EVP_DigestUpdate(impl_->ctx, data, n);
  return *this;
}

Hasher& Hasher::text(std::string_view s) {
  number(static_cast<std::uint64_t>(s.size()));
  return bytes(s.data(), s.size());
}

Hasher& Hasher::number(double v) { return bytes(&v, sizeof v); }
Hasher& Hasher::number(std::uint64_t v) { return bytes(&v, sizeof v); }

Hasher& Hasher::numbers(std::span<const double> v) {
  number(static_cast<std::uint64_t>(v.size()));
  return bytes(v.data(), v.size_bytes());
}

std::string Hasher::hex() {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(impl_->ctx, md.data(), &len);
  impl_->done = true;
  std::string out(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i) std::snprintf(&out[2 * i], 3, "%02x", md[i]);
  return out;
}

std::string sha256_hex(std::string_view s) { return Hasher().bytes(s.data(), s.size()).hex(); }

std::string content_hash(const Recording& r) {
  Hasher h;
  h.text(r.subject_id).number(static_cast<std::uint64_t>(to_int(r.label))).number(r.sample_rate_hz);
  h.number(static_cast<std::uint64_t>(r.channel_names.size()));
  for (const auto& c : r.channel_names) h.text(c);
  h.number(static_cast<std::uint64_t>(r.samples.rows())).number(static_cast<std::uint64_t>(r.samples.cols()));
  h.bytes(r.samples.data(), static_cast<std::size_t>(r.samples.size()) * sizeof(double));
  return h.hex();
}

}  // namespace eegsweep
