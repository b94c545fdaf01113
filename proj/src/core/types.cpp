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

#include "partialdir/core/types.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace partialdir {

std::string to_string(AuthorityId id) { return fmt::format("auth{}", id.index); }

std::string to_string(const Version &v) { return fmt::format("{}.{}.{}.{}", v.major, v.minor, v.micro, v.patch); }

const char *flag_name(RelayFlag flag) {
    switch (flag) {
    case RelayFlag::Authority: return "Authority";
    case RelayFlag::BadExit: return "BadExit";
    case RelayFlag::Exit: return "Exit";
    case RelayFlag::Fast: return "Fast";
    case RelayFlag::Guard: return "Guard";
    case RelayFlag::HSDir: return "HSDir";
    case RelayFlag::MiddleOnly: return "MiddleOnly";
    case RelayFlag::NoEdConsensus: return "NoEdConsensus";
    case RelayFlag::Running: return "Running";
    case RelayFlag::Stable: return "Stable";
    case RelayFlag::StaleDesc: return "StaleDesc";
    case RelayFlag::Sybil: return "Sybil";
    case RelayFlag::V2Dir: return "V2Dir";
    case RelayFlag::Valid: return "Valid";
    }
    return "?";
}

bool StatusDocument::is_canonical() const {
    for (std::size_t i = 0; i < relays.size(); ++i) {
        if (relays[i].fingerprint.empty())
            return false;
        if (i > 0 && !(relays[i - 1].fingerprint < relays[i].fingerprint))
            return false;
    }
    return true;
}

void StatusDocument::canonicalize() {
    std::stable_sort(relays.begin(), relays.end(),
                     [](const auto &a, const auto &b) { return a.fingerprint < b.fingerprint; });
    for (std::size_t i = 0; i < relays.size(); ++i) {
        if (relays[i].fingerprint.empty())
            throw std::invalid_argument("relay with empty fingerprint");
        if (i > 0 && relays[i - 1].fingerprint == relays[i].fingerprint)
            throw std::invalid_argument("duplicate relay fingerprint " + to_hex(relays[i].fingerprint));
    }
}

} // namespace partialdir
