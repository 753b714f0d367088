// Copyright 2026 The Authors.
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

#include "cbgt/coloring.hpp"
#include "cbgt/errors.hpp"
#include "cbgt/exact.hpp"
#include "cbgt/fuse_unfuse.hpp"
#include "cbgt/general.hpp"
#include "cbgt/generators.hpp"
#include "cbgt/instance.hpp"
#include "cbgt/json_io.hpp"
#include "cbgt/matroid_intersection.hpp"
#include "cbgt/pinwheel.hpp"
#include "cbgt/rational.hpp"
#include "cbgt/rng.hpp"
#include "cbgt/set_system.hpp"
#include "cbgt/sets.hpp"
#include "cbgt/simplex.hpp"
#include "cbgt/simulator.hpp"
#include "cbgt/stream.hpp"
