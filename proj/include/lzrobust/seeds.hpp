/*
Copyright 2026 The lzrobust Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef LZROBUST_SEEDS_HPP
#define LZROBUST_SEEDS_HPP

#include <cstdint>
#include <string_view>

namespace lzr {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the named stream `name` under `master`. Streams with different
/// names are independent of each other and of the order they are requested in.
inline uint64_t derive_seed(uint64_t master, std::string_view name) {
    uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(master ^ splitmix64(h));
}

inline uint64_t derive_seed(uint64_t master, std::string_view name, uint64_t index) {
    return splitmix64(derive_seed(master, name) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

} // namespace lzr

#endif
