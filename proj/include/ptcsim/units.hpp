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

#ifndef PTCSIM_UNITS_HPP
#define PTCSIM_UNITS_HPP

#include <cmath>
#include <numbers>

namespace ptc
{

// Catalog units are fixed: um, um^2, W, Hz, dB, dBm, A/W, A, J/bit.

inline constexpr double um2_per_mm2 = 1e6;
inline constexpr double mw_per_w = 1e3;

// Power ratio -> dB and back.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// Multiplicative power transmission of a lossy element, in (0, 1].
inline double loss_factor(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

inline double um2_to_mm2(double um2) { return um2 / um2_per_mm2; }

inline constexpr double pi = std::numbers::pi;

} // namespace ptc

#endif
