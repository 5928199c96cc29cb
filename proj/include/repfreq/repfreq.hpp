// Copyright 2026 The repfreq Authors.
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

#include "repfreq/action_sets.hpp"
#include "repfreq/applications.hpp"
#include "repfreq/concentration.hpp"
#include "repfreq/errors.hpp"
#include "repfreq/freq_bounds.hpp"
#include "repfreq/game.hpp"
#include "repfreq/game_io.hpp"
#include "repfreq/lp.hpp"
#include "repfreq/parallel.hpp"
#include "repfreq/polytope.hpp"
#include "repfreq/rng.hpp"
#include "repfreq/simulator.hpp"
#include "repfreq/stage_analysis.hpp"
