#include "rto/scenario_io.hpp"

#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace rto {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) { throw ValidationError(path, message); }

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

std::string at_index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const json& field(const json& obj, const std::string& key, const std::string& base) {
    if (!obj.is_object()) fail(base.empty() ? "<document>" : base, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(join(base, key), "missing required field");
    return *it;
}

const json* optional_field(const json& obj, const std::string& key, const std::string& base) {
    if (!obj.is_object()) fail(base.empty() ? "<document>" : base, "expected an object");
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(path, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
}

double number_or(const json& obj, const std::string& key, const std::string& base, double fallback) {
    const auto* v = optional_field(obj, key, base);
    return v ? number(*v, join(base, key)) : fallback;
}

template <typename Tag>
Index<Tag> resolve(const std::map<std::string, std::size_t>& ids, const json& v, const std::string& path,
                   const char* what) {
    const auto id = text(v, path);
    const auto it = ids.find(id);
    if (it == ids.end()) fail(path, std::string("unknown ") + what + " '" + id + "'");
    return Index<Tag>{it->second};
}

double phase_of(const json& obj, const std::string& base) {
    if (const auto* p = optional_field(obj, "phase_pi", base)) return number(*p, join(base, "phase_pi")) * std::numbers::pi;
    return number_or(obj, "phase", base, 0.0);
}

HazardSpec parse_hazard(const json& obj, const std::string& base) {
    HazardSpec h;
    const auto& b = field(obj, "baseline", base);
    const auto bpath = join(base, "baseline");
    const auto type = text(field(b, "type", bpath), join(bpath, "type"));
    if (type == "constant") {
        h.baseline = ConstantBaseline{number(field(b, "rate", bpath), join(bpath, "rate"))};
    } else if (type == "weibull") {
        h.baseline = WeibullBaseline{number(field(b, "shape", bpath), join(bpath, "shape")),
                                     number(field(b, "scale", bpath), join(bpath, "scale"))};
    } else {
        fail(join(bpath, "type"), "unknown baseline type '" + type + "'");
    }
    if (const auto* cov = optional_field(obj, "covariates", base)) {
        const auto cpath = join(base, "covariates");
        for (std::size_t k = 0; k < array(*cov, cpath).size(); ++k) {
            const auto& c = (*cov)[k];
            const auto p = at_index(cpath, k);
            h.covariates.push_back({number_or(c, "amplitude", p, 1.0), number_or(c, "period", p, 365.0),
                                    phase_of(c, p), number(field(c, "beta", p), join(p, "beta"))});
        }
    }
    return h;
}

json hazard_to_json(const HazardSpec& h) {
    json out;
    if (const auto* c = std::get_if<ConstantBaseline>(&h.baseline)) {
        out["baseline"] = {{"type", "constant"}, {"rate", c->rate}};
    } else {
        const auto& w = std::get<WeibullBaseline>(h.baseline);
        out["baseline"] = {{"type", "weibull"}, {"shape", w.shape}, {"scale", w.scale}};
    }
    out["covariates"] = json::array();
    for (const auto& c : h.covariates) {
        out["covariates"].push_back(
            {{"amplitude", c.amplitude}, {"period", c.period}, {"phase", c.phase}, {"beta", c.beta}});
    }
    return out;
}

}  // namespace

const char* to_string(PolicyKind kind) { return kind == PolicyKind::Naive ? "naive" : "dynamic"; }

PolicyKind parse_policy_kind(std::string_view text) {
    if (text == "naive") return PolicyKind::Naive;
    if (text == "dynamic") return PolicyKind::Dynamic;
    throw ValidationError("policy.kind", "unknown policy '" + std::string(text) + "'");
}

Scenario parse_scenario(const json& doc) {
    Scenario s;
    const auto version = integer(field(doc, "schema_version", ""), "schema_version");
    if (version != 1) fail("schema_version", "unsupported schema");
    s.schema_version = 1;
    s.horizon = number(field(doc, "horizon", ""), "horizon");

    // catalog
    const auto& catalog = field(doc, "catalog", "");
    std::map<std::string, std::size_t> product_ids, supplier_ids, category_ids;
    const auto& products = array(field(catalog, "products", "catalog"), "catalog.products");
    for (std::size_t i = 0; i < products.size(); ++i) {
        const auto& p = products[i];
        const auto path = at_index("catalog.products", i);
        Product prod;
        prod.id = text(field(p, "id", path), join(path, "id"));
        if (const auto* fam = optional_field(p, "family", path)) prod.family_id = text(*fam, join(path, "family"));
        prod.baseline_stock = integer(field(p, "q0", path), join(path, "q0"));
        prod.depletion_rate = number(field(p, "depletion_rate", path), join(path, "depletion_rate"));
        if (const auto* lvl = optional_field(p, "initial_level", path)) {
            prod.initial_level = number(*lvl, join(path, "initial_level"));
        }
        if (!product_ids.emplace(prod.id, i).second) fail(join(path, "id"), "duplicate product id '" + prod.id + "'");
        s.products.push_back(std::move(prod));
    }

    const auto& suppliers = array(field(doc, "suppliers", ""), "suppliers");
    for (std::size_t i = 0; i < suppliers.size(); ++i) {
        const auto path = at_index("suppliers", i);
        Supplier sup;
        sup.id = text(field(suppliers[i], "id", path), join(path, "id"));
        sup.spot_lead_time = number_or(suppliers[i], "spot_lead_time", path, 3.0);
        if (!supplier_ids.emplace(sup.id, i).second) fail(join(path, "id"), "duplicate supplier id '" + sup.id + "'");
        s.suppliers.push_back(std::move(sup));
    }

    const auto& categories = array(field(catalog, "categories", "catalog"), "catalog.categories");
    for (std::size_t i = 0; i < categories.size(); ++i) {
        const auto& c = categories[i];
        const auto path = at_index("catalog.categories", i);
        Category cat;
        cat.id = text(field(c, "id", path), join(path, "id"));
        const auto& prods = array(field(c, "products", path), join(path, "products"));
        for (std::size_t k = 0; k < prods.size(); ++k) {
            cat.products.push_back(
                resolve<ProductTag>(product_ids, prods[k], at_index(join(path, "products"), k), "product"));
        }
        const auto& el = array(field(c, "eligible_suppliers", path), join(path, "eligible_suppliers"));
        for (std::size_t k = 0; k < el.size(); ++k) {
            cat.eligible_suppliers.push_back(
                resolve<SupplierTag>(supplier_ids, el[k], at_index(join(path, "eligible_suppliers"), k), "supplier"));
        }
        if (!category_ids.emplace(cat.id, i).second) fail(join(path, "id"), "duplicate category id '" + cat.id + "'");
        s.categories.push_back(std::move(cat));
    }

    // fleet
    const auto& fleet = field(doc, "fleet", "");
    const auto& vessels = array(field(fleet, "vessels", "fleet"), "fleet.vessels");
    for (std::size_t i = 0; i < vessels.size(); ++i) {
        const auto& v = vessels[i];
        const auto path = at_index("fleet.vessels", i);
        Vessel vessel;
        vessel.id = text(field(v, "id", path), join(path, "id"));
        const auto& hazards = field(v, "hazards", path);
        const auto hpath = join(path, "hazards");
        if (!hazards.is_object()) fail(hpath, "expected an object keyed by category id");
        for (const auto& [key, _] : hazards.items()) {
            if (!category_ids.count(key)) fail(join(hpath, key), "unknown category '" + key + "'");
        }
        for (const auto& cat : s.categories) {
            vessel.hazards.push_back(parse_hazard(field(hazards, cat.id, hpath), join(hpath, cat.id)));
        }
        s.vessels.push_back(std::move(vessel));
    }

    // contracts
    if (const auto* contracts = optional_field(doc, "contracts", "")) {
        for (std::size_t i = 0; i < array(*contracts, "contracts").size(); ++i) {
            const auto& c = (*contracts)[i];
            const auto path = at_index("contracts", i);
            Contract ct;
            ct.supplier = resolve<SupplierTag>(supplier_ids, field(c, "supplier", path), join(path, "supplier"), "supplier");
            const auto& rates = field(c, "rates", path);
            if (!rates.is_object()) fail(join(path, "rates"), "expected an object keyed by product id");
            for (const auto& [key, value] : rates.items()) {
                const auto rpath = join(join(path, "rates"), key);
                ct.rates.push_back({resolve<ProductTag>(product_ids, json(key), rpath, "product"), number(value, rpath)});
            }
            ct.lead_time = number_or(c, "lead_time", path, 0.0);
            const auto& validity = array(field(c, "validity", path), join(path, "validity"));
            if (validity.size() != 2) fail(join(path, "validity"), "expected [start, end]");
            ct.valid_from = number(validity[0], join(path, "validity"));
            ct.valid_to = number(validity[1], join(path, "validity"));
            ct.commitment = integer(field(c, "commitment", path), join(path, "commitment"));
            s.contracts.push_back(std::move(ct));
        }
    }

    // spot market
    const auto& spot = field(doc, "spot", "");
    s.spot.period = number_or(spot, "period", "spot", 365.0);
    s.spot.noise_sd = number_or(spot, "noise_sd", "spot", 1.0);
    s.spot.competition_slope = number_or(spot, "competition_slope", "spot", 0.0);
    if (const auto* basis = optional_field(spot, "competition_basis", "spot")) {
        const auto b = text(*basis, "spot.competition_basis");
        if (b == "per_item") {
            s.spot.competition_basis = CompetitionBasis::PerItem;
        } else if (b == "per_supplier_total") {
            s.spot.competition_basis = CompetitionBasis::PerSupplierTotal;
        } else {
            fail("spot.competition_basis", "unknown competition basis '" + b + "'");
        }
    }
    const auto& prices = array(field(spot, "prices", "spot"), "spot.prices");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const auto& p = prices[i];
        const auto path = at_index("spot.prices", i);
        SpotPrice price;
        price.product = resolve<ProductTag>(product_ids, field(p, "product", path), join(path, "product"), "product");
        price.supplier = resolve<SupplierTag>(supplier_ids, field(p, "supplier", path), join(path, "supplier"), "supplier");
        price.baseline = number(field(p, "baseline", path), join(path, "baseline"));
        price.amplitude = number_or(p, "amplitude", path, 0.0);
        price.phase = phase_of(p, path);
        s.spot.prices.push_back(price);
    }

    if (const auto* policy = optional_field(doc, "policy", "")) {
        if (const auto* kind = optional_field(*policy, "kind", "policy")) {
            s.policy.kind = parse_policy_kind(text(*kind, "policy.kind"));
        }
        s.policy.po_overhead = number_or(*policy, "po_overhead", "policy", 10.0);
    }

    s.delays.rfq_response.assign(s.suppliers.size(), 2.5);
    if (const auto* delays = optional_field(doc, "delays", "")) {
        s.delays.creation_to_approval = number_or(*delays, "creation_to_approval", "delays", 2.0);
        s.delays.approval_to_handling = number_or(*delays, "approval_to_handling", "delays", 5.0);
        s.delays.handling_to_po = number_or(*delays, "handling_to_po", "delays", 0.1);
        if (const auto* rfq = optional_field(*delays, "rfq_response", "delays")) {
            if (rfq->is_number()) {
                s.delays.rfq_response.assign(s.suppliers.size(), number(*rfq, "delays.rfq_response"));
            } else if (rfq->is_object()) {
                for (const auto& [key, value] : rfq->items()) {
                    const auto path = join("delays.rfq_response", key);
                    const auto sup = resolve<SupplierTag>(supplier_ids, json(key), path, "supplier");
                    s.delays.rfq_response[sup.value] = number(value, path);
                }
            } else {
                fail("delays.rfq_response", "expected a number or an object keyed by supplier id");
            }
        }
    }

    if (const auto* engine = optional_field(doc, "engine", "")) {
        s.engine.thinning_window_fraction = number_or(*engine, "thinning_window_fraction", "engine", 0.25);
    }

    if (const auto* runs = optional_field(doc, "runs", "")) {
        if (const auto* v = optional_field(*runs, "count", "runs")) s.runs.count = unsigned_integer(*v, "runs.count");
        if (const auto* v = optional_field(*runs, "master_seed", "runs")) {
            s.runs.master_seed = unsigned_integer(*v, "runs.master_seed");
        }
        if (const auto* v = optional_field(*runs, "parallelism", "runs")) {
            s.runs.parallelism = unsigned_integer(*v, "runs.parallelism");
        }
    }

    if (const auto* output = optional_field(doc, "output", "")) {
        if (const auto* v = optional_field(*output, "directory", "output")) {
            s.output.directory = text(*v, "output.directory");
        }
        if (const auto* v = optional_field(*output, "histogram_bins", "output")) {
            s.output.histogram_bins = unsigned_integer(*v, "output.histogram_bins");
        }
    }

    return validate_scenario(std::move(s));
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("<document>", e.what());
    }
    return parse_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path.string(), "cannot open scenario file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    return parse_scenario(std::string_view(text));
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["schema_version"] = s.schema_version;
    doc["horizon"] = s.horizon;

    json products = json::array();
    for (const auto& p : s.products) {
        json jp = {{"id", p.id}, {"family", p.family_id}, {"q0", p.baseline_stock}, {"depletion_rate", p.depletion_rate}};
        if (p.initial_level) jp["initial_level"] = *p.initial_level;
        products.push_back(std::move(jp));
    }
    json categories = json::array();
    for (const auto& c : s.categories) {
        json jc = {{"id", c.id}, {"products", json::array()}, {"eligible_suppliers", json::array()}};
        for (auto p : c.products) jc["products"].push_back(s.products[p.value].id);
        for (auto sup : c.eligible_suppliers) jc["eligible_suppliers"].push_back(s.suppliers[sup.value].id);
        categories.push_back(std::move(jc));
    }
    doc["catalog"] = {{"products", products}, {"categories", categories}};

    json suppliers = json::array();
    for (const auto& sup : s.suppliers) suppliers.push_back({{"id", sup.id}, {"spot_lead_time", sup.spot_lead_time}});
    doc["suppliers"] = suppliers;

    json vessels = json::array();
    for (const auto& v : s.vessels) {
        json hazards = json::object();
        for (std::size_t c = 0; c < v.hazards.size(); ++c) hazards[s.categories[c].id] = hazard_to_json(v.hazards[c]);
        vessels.push_back({{"id", v.id}, {"hazards", hazards}});
    }
    doc["fleet"] = {{"vessels", vessels}};

    json contracts = json::array();
    for (const auto& c : s.contracts) {
        json rates = json::object();
        for (const auto& r : c.rates) rates[s.products[r.product.value].id] = r.unit_price;
        contracts.push_back({{"supplier", s.suppliers[c.supplier.value].id},
                             {"rates", rates},
                             {"lead_time", c.lead_time},
                             {"validity", {c.valid_from, c.valid_to}},
                             {"commitment", c.commitment}});
    }
    doc["contracts"] = contracts;

    json prices = json::array();
    for (const auto& p : s.spot.prices) {
        prices.push_back({{"product", s.products[p.product.value].id},
                          {"supplier", s.suppliers[p.supplier.value].id},
                          {"baseline", p.baseline},
                          {"amplitude", p.amplitude},
                          {"phase", p.phase}});
    }
    doc["spot"] = {{"period", s.spot.period},
                   {"noise_sd", s.spot.noise_sd},
                   {"competition_slope", s.spot.competition_slope},
                   {"competition_basis",
                    s.spot.competition_basis == CompetitionBasis::PerItem ? "per_item" : "per_supplier_total"},
                   {"prices", prices}};

    doc["policy"] = {{"kind", to_string(s.policy.kind)}, {"po_overhead", s.policy.po_overhead}};

    json rfq = json::object();
    for (std::size_t k = 0; k < s.suppliers.size(); ++k) rfq[s.suppliers[k].id] = s.delays.rfq_response.at(k);
    doc["delays"] = {{"creation_to_approval", s.delays.creation_to_approval},
                     {"approval_to_handling", s.delays.approval_to_handling},
                     {"rfq_response", rfq},
                     {"handling_to_po", s.delays.handling_to_po}};
    doc["engine"] = {{"thinning_window_fraction", s.engine.thinning_window_fraction}};

    json runs = {{"count", s.runs.count}, {"parallelism", s.runs.parallelism}};
    if (s.runs.master_seed) runs["master_seed"] = *s.runs.master_seed;
    doc["runs"] = runs;
    doc["output"] = {{"directory", s.output.directory}, {"histogram_bins", s.output.histogram_bins}};
    return doc;
}

}  // namespace rto
