/**
 * Copyright 2026 The partialdir Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "partialdir/core/crypto.hpp"

#include <sodium.h>

#include "partialdir/core/encoding.hpp"

namespace partialdir {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0)
        throw std::runtime_error("libsodium initialisation failed");
}

constexpr std::string_view kDomain = "partialdir/v1";

} // namespace

const char *context_name(SigContext ctx) {
    switch (ctx) {
    case SigContext::Doc: return "DOC";
    case SigContext::ProposalSlot: return "PROPOSAL-SLOT";
    case SigContext::AbsentSlot: return "ABSENT-SLOT";
    case SigContext::AgreeVote: return "AGREE-VOTE";
    case SigContext::NewView: return "NEWVIEW";
    case SigContext::Consensus: return "CONSENSUS";
    }
    return "?";
}

Bytes signing_message(SigContext ctx, std::uint64_t epoch, ByteView payload) {
    ByteWriter w;
    w.raw(as_view(kDomain));
    w.u8(static_cast<std::uint8_t>(ctx));
    w.u64(epoch);
    w.raw(payload);
    return w.take();
}

KeyPair Ed25519Scheme::derive_keypair(ByteView seed) const {
    ensure_sodium();
    auto material = hash_bytes(seed);
    KeyPair kp;
    kp.secret.bytes.resize(crypto_sign_SECRETKEYBYTES);
    kp.public_key.bytes.resize(crypto_sign_PUBLICKEYBYTES);
    crypto_sign_seed_keypair(kp.public_key.bytes.data(), kp.secret.bytes.data(), material.bytes.data());
    return kp;
}

Bytes Ed25519Scheme::sign_raw(const SecretKey &key, ByteView message) const {
    ensure_sodium();
    if (key.bytes.size() != crypto_sign_SECRETKEYBYTES)
        throw KeyError("ed25519 secret key has wrong length");
    Bytes sig(crypto_sign_BYTES);
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.bytes.data());
    return sig;
}

bool Ed25519Scheme::verify_raw(const PublicKey &key, ByteView message, ByteView sig) const {
    ensure_sodium();
    if (key.bytes.size() != crypto_sign_PUBLICKEYBYTES)
        throw KeyError("ed25519 public key has wrong length");
    if (sig.size() != crypto_sign_BYTES)
        return false;
    return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), key.bytes.data()) == 0;
}

KeyPair MacScheme::derive_keypair(ByteView seed) const {
    auto material = hash_bytes(seed);
    KeyPair kp;
    kp.secret.bytes.assign(material.bytes.begin(), material.bytes.end());
    kp.public_key.bytes = kp.secret.bytes;
    return kp;
}

Bytes MacScheme::sign_raw(const SecretKey &key, ByteView message) const {
    ensure_sodium();
    if (key.bytes.size() != crypto_auth_hmacsha256_KEYBYTES)
        throw KeyError("mac key has wrong length");
    Bytes tag(crypto_auth_hmacsha256_BYTES);
    crypto_auth_hmacsha256(tag.data(), message.data(), message.size(), key.bytes.data());
    return tag;
}

bool MacScheme::verify_raw(const PublicKey &key, ByteView message, ByteView sig) const {
    ensure_sodium();
    if (key.bytes.size() != crypto_auth_hmacsha256_KEYBYTES)
        throw KeyError("mac key has wrong length");
    if (sig.size() != crypto_auth_hmacsha256_BYTES)
        return false;
    return crypto_auth_hmacsha256_verify(sig.data(), message.data(), message.size(), key.bytes.data()) == 0;
}

std::shared_ptr<const SignatureScheme> make_scheme(SchemeKind kind) {
    if (kind == SchemeKind::Mac)
        return std::make_shared<MacScheme>();
    return std::make_shared<Ed25519Scheme>();
}

Signature sign(const SignatureScheme &scheme, const SecretKey &key, AuthorityId signer, SigContext ctx,
               std::uint64_t epoch, ByteView payload) {
    return Signature{signer, scheme.sign_raw(key, signing_message(ctx, epoch, payload))};
}

bool verify(const SignatureScheme &scheme, const PublicKey &key, SigContext ctx, std::uint64_t epoch,
            ByteView payload, const Signature &sig) {
    return scheme.verify_raw(key, signing_message(ctx, epoch, payload), sig.bytes);
}

std::optional<bool> VerifyCache::lookup(const std::string &key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    ++hits_;
    return it->second;
}

void VerifyCache::store(std::string key, bool ok) { entries_.emplace(std::move(key), ok); }

KeyRing::KeyRing(std::shared_ptr<const SignatureScheme> scheme, std::vector<PublicKey> publics)
    : scheme_(std::move(scheme)), publics_(std::move(publics)) {
    if (!scheme_)
        throw std::invalid_argument("key ring needs a signature scheme");
}

KeyRing KeyRing::with_secret(AuthorityId self, SecretKey secret) const {
    if (self.index >= publics_.size())
        throw KeyError("secret key owner outside the committee");
    KeyRing copy = *this;
    copy.self_ = self;
    copy.secret_ = std::move(secret);
    return copy;
}

KeyRing KeyRing::with_cache(std::shared_ptr<VerifyCache> cache) const {
    KeyRing copy = *this;
    copy.cache_ = std::move(cache);
    return copy;
}

Signature KeyRing::sign(SigContext ctx, std::uint64_t epoch, ByteView payload) const {
    if (!secret_)
        throw std::logic_error("key ring holds no secret key");
    return partialdir::sign(*scheme_, *secret_, self_, ctx, epoch, payload);
}

bool KeyRing::verify(SigContext ctx, std::uint64_t epoch, ByteView payload, const Signature &sig) const {
    if (sig.signer.index >= publics_.size())
        return false;
    const auto &key = publics_[sig.signer.index];
    if (!cache_)
        return partialdir::verify(*scheme_, key, ctx, epoch, payload, sig);
    auto message = signing_message(ctx, epoch, payload);
    std::string cache_key;
    cache_key.reserve(4 + message.size() + sig.bytes.size() + 2);
    cache_key.append(reinterpret_cast<const char *>(&sig.signer.index), sizeof(sig.signer.index));
    cache_key.append(message.begin(), message.end());
    cache_key.push_back('|');
    cache_key.append(sig.bytes.begin(), sig.bytes.end());
    if (auto hit = cache_->lookup(cache_key))
        return *hit;
    const bool ok = scheme_->verify_raw(key, message, sig.bytes);
    cache_->store(std::move(cache_key), ok);
    return ok;
}

std::vector<KeyPair> derive_committee_keys(const SignatureScheme &scheme, std::uint32_t n, std::uint64_t seed) {
    std::vector<KeyPair> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        ByteWriter w;
        w.raw(as_view("partialdir/key"));
        w.u64(seed);
        w.u32(i);
        out.push_back(scheme.derive_keypair(w.data()));
    }
    return out;
}

std::vector<KeyRing> make_committee(std::shared_ptr<const SignatureScheme> scheme, std::uint32_t n,
                                    std::uint64_t seed, std::shared_ptr<VerifyCache> cache) {
    auto keys = derive_committee_keys(*scheme, n, seed);
    std::vector<PublicKey> publics;
    for (const auto &k : keys)
        publics.push_back(k.public_key);
    KeyRing base(std::move(scheme), std::move(publics));
    if (cache)
        base = base.with_cache(std::move(cache));
    std::vector<KeyRing> rings;
    for (std::uint32_t i = 0; i < n; ++i)
        rings.push_back(base.with_secret(AuthorityId{i}, keys[i].secret));
    return rings;
}

} // namespace partialdir
