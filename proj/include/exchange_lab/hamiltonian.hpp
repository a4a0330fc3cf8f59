// Copyright 2026 The Exchange Lab Authors
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

#pragma once

#include <vector>

#include "layout.hpp"

namespace exlab {

/// Edge (i, j) contributes -J (f†_j f_i + f†_i f_j).
struct HoppingEdge {
    ModeIndex i;
    ModeIndex j;
    double coupling = 1.0;

    HoppingEdge() = default;
    HoppingEdge(int a, int b, double J) : i(a), j(b), coupling(J) {}
};

struct HamiltonianSpec {
    std::vector<HoppingEdge> edges;
};

} // namespace exlab
