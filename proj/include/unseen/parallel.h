// Copyright 2026 The Unseen Authors.
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

// Index-parallel loops with a process-wide thread cap. Work item i always
// writes its own slot, so results do not depend on the thread count.

#ifndef UNSEEN_PARALLEL_H_
#define UNSEEN_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace unseen {

// 0 restores the default (hardware concurrency).
void SetMaxThreads(int n);
int MaxThreads();

void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace unseen

#endif  // UNSEEN_PARALLEL_H_
