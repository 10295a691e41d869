// Copyright 2026 The pdbev Authors
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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace pdbev {

/// Worker count: `requested` if given, else PDBEV_THREADS, else 1.
/// Zero or unparsable values fall back to 1.
unsigned resolve_threads(std::optional<unsigned> requested = std::nullopt);

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end) on each. Runs inline when threads <= 1. Exceptions from
/// workers are rethrown on the caller (first one wins).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace pdbev
