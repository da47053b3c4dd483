// Copyright 2026 The x8sim Authors
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

#ifndef X8SIM_X8SIM_HPP_
#define X8SIM_X8SIM_HPP_

#include "x8sim/cost.hpp"
#include "x8sim/device.hpp"
#include "x8sim/driver.hpp"
#include "x8sim/fock.hpp"
#include "x8sim/gates.hpp"
#include "x8sim/gradient.hpp"
#include "x8sim/linalg.hpp"
#include "x8sim/measure.hpp"
#include "x8sim/noise.hpp"
#include "x8sim/rng.hpp"
#include "x8sim/serialize.hpp"

#endif  // X8SIM_X8SIM_HPP_
