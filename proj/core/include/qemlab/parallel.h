// Copyright 2026 The qemlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEMLAB_PARALLEL_H
#define QEMLAB_PARALLEL_H

#include <cstddef>
#include <functional>

namespace qemlab {

/// Calls fn(0) .. fn(count - 1) on up to `threads` threads. Callers write results by index, so
/// output does not depend on scheduling. The first exception thrown is rethrown after all
/// workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &fn);

}  // namespace qemlab

#endif
