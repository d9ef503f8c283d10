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

// Runs one random GEMM through the analog pipeline in every simulation mode
// and reports the error against a direct matmul.
//
// usage: gemm_sim [M N Q [sigma]]

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>

#include "ptcsim/ptcsim.hpp"

int main(int argc, char **argv)
{
    const int m = argc > 3 ? std::atoi(argv[1]) : 48;
    const int n = argc > 3 ? std::atoi(argv[2]) : 36;
    const int q = argc > 3 ? std::atoi(argv[3]) : 40;
    const double sigma = argc > 4 ? std::atof(argv[4]) : 0.02;
    try {
        const auto cat = ptc::load_catalog(std::filesystem::path(PTCSIM_DATA_DIR) / "catalogs/custom_sl.json");
        const auto arch = ptc::load_arch(std::filesystem::path(PTCSIM_DATA_DIR) / "configs/r2c2k8.json");
        const ptc::GemmWorkload work{ptc::random_matrix(m, n, 7, 0), ptc::random_matrix(n, q, 7, 1)};
        const ptc::Matrix ref = ptc::matmul(work.x, work.y);
        const ptc::NoiseModel nm{sigma, 11, true};

        std::cout << "GEMM " << m << "x" << n << "x" << q << " on R=" << arch.r_tiles << " C=" << arch.c_cores
                  << " K=" << arch.k << "\n";
        for (const auto mode : {ptc::SimMode::Ideal, ptc::SimMode::Quantized, ptc::SimMode::QuantizedNoise,
                                ptc::SimMode::QuantizedNoiseAdc}) {
            const auto res = ptc::simulate_gemm(work, arch, cat, nm, mode);
            std::cout << std::left << std::setw(20) << ptc::to_string(mode) << " rel.err "
                      << std::scientific << std::setprecision(3)
                      << ptc::relative_frobenius_error(res.z_hat, ref) << std::defaultfloat
                      << "  wall cycles " << res.stats.cycles.wall_cycles << "  C_int "
                      << std::setprecision(4) << res.stats.c_int_f * 1e15 << " fF\n";
        }
    } catch (const ptc::Error &e) {
        std::cerr << "gemm_sim: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
