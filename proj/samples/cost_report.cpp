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

// Prints the cost breakdown of the default 6x6x32 accelerator for each
// bundled device catalog, then the K sweep for the slow-light variant.
//
// usage: cost_report [data-dir]

#include <filesystem>
#include <iostream>
#include <vector>

#include "ptcsim/ptcsim.hpp"

int main(int argc, char **argv)
{
    const std::filesystem::path data = argc > 1 ? argv[1] : PTCSIM_DATA_DIR;
    try {
        const ptc::ArchConfig arch = ptc::load_arch(data / "configs/r6c6k32.json");
        ptc::CostOptions opt;
        opt.include_memory = true;

        std::vector<ptc::CatalogVariant> cats;
        for (const char *name : {"foundry.json", "foundry_sl.json", "custom_sl.json"}) {
            cats.push_back(ptc::load_catalog(data / "catalogs" / name));
        }
        for (const auto &cat : cats) {
            std::cout << ptc::to_text(ptc::estimate_cost(arch, cat, opt)) << "\n";
        }

        const std::vector<int> ks{8, 16, 32, 64};
        const auto points = ptc::sweep(arch, cats.back(), ptc::SweepAxis::K, ks, opt);
        std::cout << ptc::sweep_to_csv("K", points);
    } catch (const ptc::Error &e) {
        std::cerr << "cost_report: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
