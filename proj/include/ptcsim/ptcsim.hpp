// Copyright 2026 The ptcsim Authors. All Rights Reserved.
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

#ifndef PTCSIM_PTCSIM_HPP
#define PTCSIM_PTCSIM_HPP

#include "ptcsim/analog_core.hpp"
#include "ptcsim/arch_config.hpp"
#include "ptcsim/cost_model.hpp"
#include "ptcsim/device_catalog.hpp"
#include "ptcsim/error.hpp"
#include "ptcsim/inference.hpp"
#include "ptcsim/io.hpp"
#include "ptcsim/matrix.hpp"
#include "ptcsim/quantizer.hpp"
#include "ptcsim/scheduler.hpp"
#include "ptcsim/units.hpp"

#endif
