#include "rto/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "rto/scenario_io.hpp"

namespace rto {

std::string format_number(double value) {
    if (value == 0.0) return "0";  // also folds -0
    if (std::isnan(value)) return "nan";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 9);
    return std::string(buf.data(), res.ptr);
}

double round_significant(double value) {
    if (value == 0.0 || !std::isfinite(value)) return value == 0.0 ? 0.0 : value;
    const auto text = format_number(value);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

namespace {

std::string quantile_label(double level) {
    const auto pct = static_cast<int>(std::lround(level * 100.0));
    return (pct < 10 ? "p0" : "p") + std::to_string(pct);
}

std::string product_id(const Scenario& s, ProductIndex p) { return s.products.at(p.value).id; }
std::string supplier_id(const Scenario& s, SupplierIndex p) { return s.suppliers.at(p.value).id; }

}  // namespace

std::string runs_csv(const Scenario& scenario, const std::vector<RunResult>& runs) {
    std::ostringstream out;
    out << "run_index,terminal_cost";
    for (const auto& s : scenario.suppliers) out << ",V_" << s.id << ",u_" << s.id << ",d_" << s.id;
    out << ",n_pr,n_hl";
    for (const auto& s : scenario.suppliers) out << ",n_rfq_" << s.id;
    out << ",n_po,in_flight,empty_draws\n";
    for (const auto& r : runs) {
        out << r.run_index << ',' << format_number(r.terminal_cost);
        for (const auto& s : r.suppliers) {
            out << ',' << s.volume << ',' << (s.utilization ? format_number(*s.utilization) : "") << ','
                << format_number(s.deviation);
        }
        out << ',' << r.n_pr << ',' << r.n_hl;
        for (const auto& s : r.suppliers) out << ',' << s.rfq_responses;
        out << ',' << r.n_po << ',' << r.in_flight << ',' << r.empty_draws << '\n';
    }
    return out.str();
}

std::string histogram_csv(const Histogram& h) {
    std::ostringstream out;
    out << "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out << format_number(h.edges[b]) << ',' << format_number(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
    }
    return out.str();
}

std::string summary_json(const Scenario& scenario, std::size_t runs, std::uint64_t master_seed,
                         const std::vector<MetricSummary>& metrics) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["runs"] = runs;
    doc["master_seed"] = master_seed;
    doc["policy"] = to_string(scenario.policy.kind);
    doc["po_overhead"] = round_significant(scenario.policy.po_overhead);
    doc["competition_slope"] = round_significant(scenario.spot.competition_slope);
    doc["horizon"] = round_significant(scenario.horizon);
    ordered_json m = ordered_json::object();
    for (const auto& metric : metrics) {
        const auto& d = metric.summary;
        ordered_json q = ordered_json::object();
        for (std::size_t k = 0; k < kQuantileLevels.size(); ++k) {
            q[quantile_label(kQuantileLevels[k])] = round_significant(d.quantiles[k]);
        }
        m[metric.name] = {{"count", d.count},
                          {"mean", round_significant(d.mean)},
                          {"sd", round_significant(d.sd)},
                          {"min", round_significant(d.min)},
                          {"max", round_significant(d.max)},
                          {"quantiles", q}};
    }
    doc["metrics"] = m;
    return doc.dump(2) + "\n";
}

std::string events_csv(const Scenario& scenario, const EventLog& log) {
    std::ostringstream out;
    out << "time,kind,pr,supplier,payload\n";
    for (const auto& e : log) {
        out << format_number(e.time) << ',' << to_string(e.kind) << ',';
        if (e.pr) out << *e.pr;
        out << ',';
        if (e.supplier) out << supplier_id(scenario, *e.supplier);
        out << ',';
        std::visit(
            [&](const auto& payload) {
                using T = std::decay_t<decltype(payload)>;
                if constexpr (std::is_same_v<T, Requisition>) {
                    out << "vessel=" << scenario.vessels.at(payload.vessel.value).id
                        << ";category=" << scenario.categories.at(payload.category.value).id;
                    for (const auto& item : payload.items) {
                        if (item.included) out << ';' << product_id(scenario, item.product) << '=' << item.quantity;
                    }
                } else if constexpr (std::is_same_v<T, HandlingRecord>) {
                    out << "contracts=";
                    for (std::size_t k = 0; k < payload.contracts.terms.size(); ++k) {
                        const auto& t = payload.contracts.terms[k];
                        out << (k ? "|" : "") << product_id(scenario, t.product) << '@'
                            << supplier_id(scenario, t.supplier) << ':' << format_number(t.unit_price);
                    }
                    out << ";rfq=";
                    for (std::size_t k = 0; k < payload.rfq_suppliers.size(); ++k) {
                        out << (k ? "|" : "") << supplier_id(scenario, payload.rfq_suppliers[k]);
                    }
                } else if constexpr (std::is_same_v<T, Quote>) {
                    out << "lead_time=" << format_number(payload.lead_time);
                    for (const auto& r : payload.rates) {
                        out << ';' << product_id(scenario, r.product) << '=' << format_number(r.unit_rate);
                    }
                } else if constexpr (std::is_same_v<T, Allocation>) {
                    for (const auto& item : payload.items) {
                        out << product_id(scenario, item.product) << "->" << supplier_id(scenario, item.supplier)
                            << (item.provenance == Provenance::Contract ? "(contract)" : "(spot)") << '@'
                            << format_number(item.unit_cost) << 'x' << item.quantity << ';';
                    }
                    out << "pos=" << payload.po_count << ";overhead=" << format_number(payload.overhead_cost)
                        << ";cost=" << format_number(payload.total_cost());
                }
            },
            e.payload);
        out << '\n';
    }
    return out.str();
}

}  // namespace rto
