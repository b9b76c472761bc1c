#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "rto/domain.hpp"
#include "rto/scenario_io.hpp"

namespace test {

/// Replays a fixed list of uniforms, then cycles.
struct ForcedUniform {
    std::vector<double> values;
    std::size_t next = 0;
    double uniform() {
        if (values.empty()) throw std::logic_error("no forced draws");
        return values[next++ % values.size()];
    }
};

inline std::filesystem::path scenario_dir() { return RTO_SCENARIO_DIR; }
inline std::filesystem::path bundled_scenario() { return scenario_dir() / "paper_s5.json"; }

inline rto::Scenario bundled() { return rto::load_scenario(bundled_scenario()); }

inline rto::HazardSpec weibull(double shape, double scale) {
    return rto::HazardSpec{rto::WeibullBaseline{shape, scale}, {}};
}

/// One category, `products` products with q0 = 100 and `suppliers`
/// suppliers quoting a flat 10 with no noise. No vessels, no contracts.
inline rto::Scenario small_world(std::size_t products = 1, std::size_t suppliers = 3) {
    rto::Scenario s;
    s.horizon = 365.0;
    rto::Category cat{"c", {}, {}};
    for (std::size_t p = 0; p < products; ++p) {
        s.products.push_back({"P" + std::to_string(p + 1), "f", 100, 1.0, std::nullopt});
        cat.products.push_back(rto::ProductIndex{p});
    }
    for (std::size_t k = 0; k < suppliers; ++k) {
        s.suppliers.push_back({std::string(1, static_cast<char>('A' + k)), 3.0});
        cat.eligible_suppliers.push_back(rto::SupplierIndex{k});
        for (std::size_t p = 0; p < products; ++p) {
            s.spot.prices.push_back({rto::ProductIndex{p}, rto::SupplierIndex{k}, 10.0, 0.0, 0.0});
        }
    }
    s.categories.push_back(cat);
    s.spot.noise_sd = 0.0;
    s.delays.rfq_response.assign(suppliers, 2.5);
    return rto::validate_scenario(s);
}

inline rto::Vessel vessel(const std::string& id, rto::HazardSpec hazard) {
    return rto::Vessel{id, {std::move(hazard)}};
}

}  // namespace test
