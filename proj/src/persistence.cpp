// Copyright 2026 The pdstore Authors.
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

#include "pds/persistence.hpp"

#include <sodium.h>

#include <array>
#include <cstring>
#include <fstream>

#include "pds/error.hpp"

namespace pds {

namespace {

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error(ErrorCode::kStorageFailure, what);
}

class IdentityTransform final : public ByteTransform {
 public:
  std::string seal(std::string_view plain) const override {
    return std::string(plain);
  }
  std::string open(std::string_view sealed) const override {
    return std::string(sealed);
  }
};

class SecretBoxTransform final : public ByteTransform {
 public:
  explicit SecretBoxTransform(std::string_view secret) {
    if (sodium_init() < 0) storage_failure("libsodium initialisation failed");
    crypto_generichash(key_.data(), key_.size(),
                       reinterpret_cast<const unsigned char*>(secret.data()),
                       secret.size(), nullptr, 0);
  }
  ~SecretBoxTransform() override { sodium_memzero(key_.data(), key_.size()); }

  std::string seal(std::string_view plain) const override {
    std::string out(crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES +
                        plain.size(),
                    '\0');
    auto* nonce = reinterpret_cast<unsigned char*>(out.data());
    randombytes_buf(nonce, crypto_secretbox_NONCEBYTES);
    crypto_secretbox_easy(nonce + crypto_secretbox_NONCEBYTES,
                          reinterpret_cast<const unsigned char*>(plain.data()),
                          plain.size(), nonce, key_.data());
    return out;
  }

  std::string open(std::string_view sealed) const override {
    constexpr std::size_t kOverhead =
        crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES;
    if (sealed.size() < kOverhead) storage_failure("sealed entry too short");
    std::string plain(sealed.size() - kOverhead, '\0');
    const auto* nonce = reinterpret_cast<const unsigned char*>(sealed.data());
    if (crypto_secretbox_open_easy(
            reinterpret_cast<unsigned char*>(plain.data()),
            nonce + crypto_secretbox_NONCEBYTES,
            sealed.size() - crypto_secretbox_NONCEBYTES, nonce,
            key_.data()) != 0) {
      storage_failure("log entry failed authentication (wrong at-rest key?)");
    }
    return plain;
  }

 private:
  std::array<unsigned char, crypto_secretbox_KEYBYTES> key_{};
};

void put_u32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint32_t get_u32(const char* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return v;
}

std::string frame(const ByteTransform& transform, std::string_view payload) {
  std::string sealed = transform.seal(payload);
  std::string framed;
  framed.reserve(sealed.size() + 4);
  put_u32(&framed, static_cast<uint32_t>(sealed.size()));
  framed.append(sealed);
  return framed;
}

}  // namespace

std::unique_ptr<ByteTransform> make_identity_transform() {
  return std::make_unique<IdentityTransform>();
}

std::unique_ptr<ByteTransform> make_encrypting_transform(std::string_view secret) {
  if (secret.empty()) storage_failure("encrypted persistence needs a non-empty key");
  return std::make_unique<SecretBoxTransform>(secret);
}

AppendLog::AppendLog(std::filesystem::path path,
                     std::unique_ptr<ByteTransform> transform)
    : path_(std::move(path)), transform_(std::move(transform)) {
  std::error_code ec;
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
  std::size_t valid_bytes = 0;
  entries_ = decode(&valid_bytes).size();
  if (std::filesystem::exists(path_, ec) &&
      std::filesystem::file_size(path_, ec) > valid_bytes) {
    // Drop a partially written trailing entry so later appends stay framed.
    std::filesystem::resize_file(path_, valid_bytes, ec);
    if (ec) storage_failure("cannot truncate " + path_.string());
  }
  open_for_append();
}

AppendLog::~AppendLog() {
  if (file_ != nullptr) std::fclose(file_);
}

void AppendLog::open_for_append() {
  file_ = std::fopen(path_.c_str(), "ab");
  if (file_ == nullptr) storage_failure("cannot open " + path_.string());
}

void AppendLog::append(std::string_view payload) {
  std::string framed = frame(*transform_, payload);
  if (std::fwrite(framed.data(), 1, framed.size(), file_) != framed.size() ||
      std::fflush(file_) != 0) {
    storage_failure("write to " + path_.string() + " failed");
  }
  ++entries_;
}

std::vector<std::string> AppendLog::replay() const { return decode(nullptr); }

std::vector<std::string> AppendLog::decode(std::size_t* valid_bytes) const {
  std::vector<std::string> payloads;
  if (valid_bytes != nullptr) *valid_bytes = 0;
  std::ifstream in(path_, std::ios::binary);
  if (!in) return payloads;
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  while (pos + 4 <= bytes.size()) {
    uint32_t len = get_u32(bytes.data() + pos);
    if (pos + 4 + len > bytes.size()) break;
    payloads.push_back(transform_->open(std::string_view(bytes).substr(pos + 4, len)));
    pos += 4 + len;
  }
  if (valid_bytes != nullptr) *valid_bytes = pos;
  return payloads;
}

void AppendLog::rewrite(const std::vector<std::string>& payloads) {
  auto tmp = path_;
  tmp += ".compact";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) storage_failure("cannot open " + tmp.string());
    for (const auto& payload : payloads) {
      std::string framed = frame(*transform_, payload);
      out.write(framed.data(), static_cast<std::streamsize>(framed.size()));
    }
    out.flush();
    if (!out) storage_failure("write to " + tmp.string() + " failed");
  }
  if (file_ != nullptr) {
    std::fclose(file_);
    file_ = nullptr;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  if (ec) storage_failure("rename failed: " + ec.message());
  entries_ = payloads.size();
  open_for_append();
}

}  // namespace pds
