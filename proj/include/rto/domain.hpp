#pragma once

// Core data model of the request-to-order simulation: catalog, fleet,
// suppliers, contracts, spot market parameters and the records that a
// requisition accumulates as it moves through handling, quoting and ordering.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rto/hazards.hpp"

namespace rto {

/// Dense index into one of the scenario's entity tables.
template <typename Tag>
struct Index {
    std::size_t value = 0;

    constexpr Index() = default;
    constexpr explicit Index(std::size_t v) : value(v) {}

    friend constexpr bool operator==(Index, Index) = default;
    friend constexpr auto operator<=>(Index, Index) = default;
};

using ProductIndex = Index<struct ProductTag>;
using CategoryIndex = Index<struct CategoryTag>;
using SupplierIndex = Index<struct SupplierTag>;
using VesselIndex = Index<struct VesselTag>;
using ContractIndex = Index<struct ContractTag>;

using Units = std::int64_t;

struct Product {
    std::string id;
    std::string family_id;
    Units baseline_stock = 1;      // q0
    double depletion_rate = 1.0;   // units per day
    std::optional<double> initial_level;  // stock at t = 0, defaults to q0

    bool operator==(const Product&) const = default;
};

struct Category {
    std::string id;
    std::vector<ProductIndex> products;
    std::vector<SupplierIndex> eligible_suppliers;

    bool operator==(const Category&) const = default;
};

struct Supplier {
    std::string id;
    double spot_lead_time = 3.0;

    bool operator==(const Supplier&) const = default;
};

struct Vessel {
    std::string id;
    std::vector<HazardSpec> hazards;  // one per category, indexed by CategoryIndex

    bool operator==(const Vessel&) const = default;
};

struct ContractRate {
    ProductIndex product;
    double unit_price = 0.0;

    bool operator==(const ContractRate&) const = default;
};

struct Contract {
    SupplierIndex supplier;
    std::vector<ContractRate> rates;
    double lead_time = 0.0;
    double valid_from = 0.0;  // inclusive
    double valid_to = 0.0;    // exclusive
    Units commitment = 0;

    bool active_at(double t) const { return valid_from <= t && t < valid_to; }
    std::optional<double> rate_for(ProductIndex p) const;

    bool operator==(const Contract&) const = default;
};

enum class CompetitionBasis { PerItem, PerSupplierTotal };

struct SpotPrice {
    ProductIndex product;
    SupplierIndex supplier;
    double baseline = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;  // radians

    bool operator==(const SpotPrice&) const = default;
};

struct SpotModel {
    std::vector<SpotPrice> prices;
    double period = 365.0;
    double noise_sd = 1.0;
    double competition_slope = 0.0;
    CompetitionBasis competition_basis = CompetitionBasis::PerItem;

    const SpotPrice* find(ProductIndex p, SupplierIndex s) const;

    bool operator==(const SpotModel&) const = default;
};

enum class PolicyKind { Naive, Dynamic };

struct PolicyConfig {
    PolicyKind kind = PolicyKind::Naive;
    double po_overhead = 10.0;

    bool operator==(const PolicyConfig&) const = default;
};

struct DelayConfig {
    double creation_to_approval = 2.0;
    double approval_to_handling = 5.0;
    std::vector<double> rfq_response;  // mean per supplier, indexed by SupplierIndex
    double handling_to_po = 0.1;

    bool operator==(const DelayConfig&) const = default;
};

struct EngineConfig {
    double thinning_window_fraction = 0.25;  // window width as a fraction of the Weibull scale

    bool operator==(const EngineConfig&) const = default;
};

struct RunConfig {
    std::size_t count = 1000;
    std::optional<std::uint64_t> master_seed;
    std::size_t parallelism = 1;

    bool operator==(const RunConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    std::size_t histogram_bins = 100;

    bool operator==(const OutputConfig&) const = default;
};

/// Full parameterization of one simulated world.
struct Scenario {
    int schema_version = 1;
    double horizon = 365.0;
    std::vector<Product> products;
    std::vector<Category> categories;
    std::vector<Supplier> suppliers;
    std::vector<Vessel> vessels;
    std::vector<Contract> contracts;
    SpotModel spot;
    PolicyConfig policy;
    DelayConfig delays;
    EngineConfig engine;
    RunConfig runs;
    OutputConfig output;

    std::optional<CategoryIndex> category_of(ProductIndex p) const;
    bool supplier_eligible(CategoryIndex c, SupplierIndex s) const;

    bool operator==(const Scenario&) const = default;
};

/// Raised for scenario or record invariant violations; `path` locates the
/// offending field (e.g. "contracts[1].validity").
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string path, const std::string& message);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Checks every cross-reference and type invariant and returns the scenario
/// with contract rates in product order. Throws ValidationError on the first
/// violation.
Scenario validate_scenario(Scenario scenario);

// ---------------------------------------------------------------------------
// Records produced while a requisition moves through the pipeline.

struct RequisitionItem {
    ProductIndex product;
    bool included = false;
    Units quantity = 0;  // meaningful only when included

    bool operator==(const RequisitionItem&) const = default;
};

struct Requisition {
    VesselIndex vessel;
    CategoryIndex category;
    double created_at = 0.0;
    std::vector<RequisitionItem> items;  // one entry per product of the category

    std::size_t included_count() const;
    Units quantity_of(ProductIndex p) const;

    bool operator==(const Requisition&) const = default;
};

/// Throws ValidationError when an included item has a non-positive quantity,
/// an excluded item carries a quantity, or an item lies outside the category.
void validate_requisition(const Scenario& scenario, const Requisition& pr);

/// Contracted terms found for one (product, supplier) pair at handling time.
struct ContractTerm {
    ProductIndex product;
    SupplierIndex supplier;
    ContractIndex contract;
    double unit_price = 0.0;
    double lead_time = 0.0;

    bool operator==(const ContractTerm&) const = default;
};

/// C_t snapshot taken when a requisition is handled.
struct ContractSnapshot {
    double taken_at = 0.0;
    std::vector<ContractTerm> terms;

    bool contracted(ProductIndex p) const;

    bool operator==(const ContractSnapshot&) const = default;
};

struct QuotedRate {
    ProductIndex product;
    double unit_rate = 0.0;

    bool operator==(const QuotedRate&) const = default;
};

/// One supplier's RFQ response.
struct Quote {
    SupplierIndex supplier;
    double response_time = 0.0;
    double lead_time = 0.0;
    std::vector<QuotedRate> rates;

    std::optional<double> rate_for(ProductIndex p) const;

    bool operator==(const Quote&) const = default;
};

enum class Provenance { Contract, Spot };

struct AllocatedItem {
    ProductIndex product;
    SupplierIndex supplier;
    Provenance provenance = Provenance::Spot;
    std::optional<ContractIndex> contract;
    Units quantity = 0;
    double unit_cost = 0.0;

    double cost() const { return unit_cost * static_cast<double>(quantity); }

    bool operator==(const AllocatedItem&) const = default;
};

struct Allocation {
    std::vector<AllocatedItem> items;
    std::size_t po_count = 0;
    double overhead_cost = 0.0;

    double item_cost() const;
    double total_cost() const { return item_cost() + overhead_cost; }
    /// True when `s` supplies item `p`.
    bool assigned(ProductIndex p, SupplierIndex s) const;

    bool operator==(const Allocation&) const = default;
};

/// Payload of a handling event: the contract snapshot plus the suppliers
/// asked to quote (empty when the requisition goes straight to ordering).
struct HandlingRecord {
    ContractSnapshot contracts;
    std::vector<SupplierIndex> rfq_suppliers;
};

enum class EventKind { PRGeneration, PRHandling, RFQResponse, POGeneration, Termination };

const char* to_string(EventKind kind);

/// One entry of the append-only information log.
struct EventRecord {
    EventKind kind = EventKind::Termination;
    double time = 0.0;
    std::optional<std::size_t> pr;  // requisition id within the run
    std::optional<SupplierIndex> supplier;
    std::variant<std::monostate, Requisition, HandlingRecord, Quote, Allocation> payload;
};

using EventLog = std::vector<EventRecord>;

}  // namespace rto
