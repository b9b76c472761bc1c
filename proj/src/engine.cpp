#include "rto/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <queue>
#include <thread>

#include "rto/demand.hpp"
#include "rto/market.hpp"
#include "rto/policy.hpp"
#include "rto/rng.hpp"

namespace rto {

namespace {

struct SimEvent {
    double time = 0.0;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::Termination;
    std::size_t target = 0;  // pair index for generation, requisition id otherwise
    SupplierIndex supplier;
};

// Min-heap order on (time, termination last among equal times, sequence).
struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        const bool a_term = a.kind == EventKind::Termination;
        const bool b_term = b.kind == EventKind::Termination;
        if (a_term != b_term) return a_term;
        return a.sequence > b.sequence;
    }
};

struct PairState {
    VesselIndex vessel;
    CategoryIndex category;
    Stream timing;
    Stream content;
    std::uint64_t triggers = 0;
};

struct PrState {
    Requisition pr;
    std::size_t pair = 0;
    std::uint64_t ordinal = 0;  // trigger count of the pair when generated
    ContractSnapshot contracts;
    RfqScope scope;
    std::vector<Quote> quotes;
    std::size_t pending = 0;
};

class Simulation {
public:
    Simulation(const Scenario& scenario, std::uint64_t run_index, std::uint64_t master_seed,
               const EngineOptions& options)
        : scenario_(scenario), options_(options), plan_(master_seed, run_index), book_(scenario),
          ledger_(scenario) {
        result_.run_index = run_index;
        result_.suppliers.resize(scenario.suppliers.size());
        inventories_.reserve(scenario.vessels.size());
        for (std::size_t v = 0; v < scenario.vessels.size(); ++v) {
            inventories_.emplace_back(scenario);
            for (std::size_t c = 0; c < scenario.categories.size(); ++c) {
                pairs_.push_back({VesselIndex{v}, CategoryIndex{c}, plan_.stream("pr-timing", {v, c}),
                                  plan_.stream("pr-content", {v, c}), 0});
            }
        }
    }

    RunResult run() {
        schedule({scenario_.horizon, 0, EventKind::Termination, 0, {}});
        for (std::size_t k = 0; k < pairs_.size(); ++k) schedule_next_generation(k, 0.0);

        while (!queue_.empty()) {
            const SimEvent ev = queue_.top();
            queue_.pop();
            if (ev.time < now_) throw std::logic_error("event queue returned an event from the past");
            now_ = ev.time;
            switch (ev.kind) {
                case EventKind::PRGeneration: on_generation(ev); break;
                case EventKind::PRHandling: on_handling(ev); break;
                case EventKind::RFQResponse: on_rfq_response(ev); break;
                case EventKind::POGeneration: on_order(ev); break;
                case EventKind::Termination:
                    log({EventKind::Termination, ev.time, std::nullopt, std::nullopt, {}});
                    return finish();
            }
        }
        throw std::logic_error("event queue drained before termination");
    }

private:
    void schedule(SimEvent ev) {
        ev.sequence = next_sequence_++;
        queue_.push(ev);
    }

    // Events beyond the horizon are dropped; their requisitions stay in flight.
    void schedule_at(double t, EventKind kind, std::size_t target, SupplierIndex supplier = {}) {
        if (t > scenario_.horizon) return;
        schedule({t, 0, kind, target, supplier});
    }

    void log(EventRecord record) {
        if (options_.record_events) result_.events.push_back(std::move(record));
    }

    double delay(double mean, Stream& stream) const {
        if (options_.delays == DelayMode::Mean) return mean;
        return sample_exponential_delay(mean, stream);
    }

    Stream pr_stream(std::string_view purpose, const PrState& st, std::optional<SupplierIndex> s = {}) const {
        const auto& pair = pairs_[st.pair];
        if (s) return plan_.stream(purpose, {pair.vessel.value, pair.category.value, st.ordinal, s->value});
        return plan_.stream(purpose, {pair.vessel.value, pair.category.value, st.ordinal});
    }

    void schedule_next_generation(std::size_t k, double t_last) {
        auto& pair = pairs_[k];
        std::optional<double> next;
        if (options_.timing) {
            next = options_.timing(pair.vessel, pair.category, t_last);
        } else {
            next = next_requisition_time(scenario_, pair.vessel, pair.category, t_last, scenario_.horizon, pair.timing);
        }
        if (next) schedule_at(*next, EventKind::PRGeneration, k);
    }

    void on_generation(const SimEvent& ev) {
        auto& pair = pairs_[ev.target];
        const std::uint64_t ordinal = pair.triggers++;
        auto pr = build_requisition(scenario_, pair.vessel, pair.category, inventories_[pair.vessel.value], ev.time,
                                    pair.content);
        if (!pr) {
            ++result_.empty_draws;
        } else {
            const std::size_t id = prs_.size();
            prs_.push_back({std::move(*pr), ev.target, ordinal, {}, {}, {}, 0});
            ++result_.n_pr;
            auto& st = prs_.back();
            log({EventKind::PRGeneration, ev.time, id, std::nullopt, st.pr});
            auto stream = pr_stream("pr-delay", st);
            const double approval = delay(scenario_.delays.creation_to_approval, stream);
            const double handling = delay(scenario_.delays.approval_to_handling, stream);
            schedule_at(ev.time + approval + handling, EventKind::PRHandling, id);
        }
        // The renewal clock restarts at every trigger, material or not.
        schedule_next_generation(ev.target, ev.time);
    }

    void schedule_order(std::size_t id, double from) {
        auto stream = pr_stream("po-delay", prs_[id]);
        schedule_at(from + delay(scenario_.delays.handling_to_po, stream), EventKind::POGeneration, id);
    }

    void on_handling(const SimEvent& ev) {
        auto& st = prs_[ev.target];
        ++result_.n_hl;
        st.contracts = book_.snapshot(st.pr, ev.time);
        st.scope = decide_rfq_scope(scenario_, st.pr, st.contracts, scenario_.policy.kind);
        const auto suppliers = scope_suppliers(st.scope);
        log({EventKind::PRHandling, ev.time, ev.target, std::nullopt, HandlingRecord{st.contracts, suppliers}});
        if (suppliers.empty()) {
            schedule_order(ev.target, ev.time);
            return;
        }
        st.pending = suppliers.size();
        for (auto s : suppliers) {
            auto stream = pr_stream("rfq-delay", st, s);
            schedule_at(ev.time + delay(scenario_.delays.rfq_response.at(s.value), stream), EventKind::RFQResponse,
                        ev.target, s);
        }
    }

    void on_rfq_response(const SimEvent& ev) {
        auto& st = prs_[ev.target];
        ++result_.suppliers.at(ev.supplier.value).rfq_responses;
        const auto products = scope_products(st.scope, ev.supplier);
        auto stream = pr_stream("quote", st, ev.supplier);
        st.quotes.push_back(make_quote(scenario_, st.pr, ev.supplier, products, ev.time, stream));
        log({EventKind::RFQResponse, ev.time, ev.target, ev.supplier, st.quotes.back()});
        if (--st.pending == 0) schedule_order(ev.target, ev.time);
    }

    void on_order(const SimEvent& ev) {
        auto& st = prs_[ev.target];
        ++result_.n_po;
        const auto matrix = build_cost_matrix(scenario_, st.pr, st.contracts, st.quotes, scenario_.policy.kind);
        auto allocation = allocate_min_cost(matrix, scenario_.policy.po_overhead);
        const double cost = record_allocation(ledger_, allocation);
        result_.terminal_cost += cost;
        result_.po_costs.push_back(cost);
        log({EventKind::POGeneration, ev.time, ev.target, std::nullopt, std::move(allocation)});
    }

    RunResult finish() {
        result_.in_flight = result_.n_pr - result_.n_po;
        for (std::size_t s = 0; s < scenario_.suppliers.size(); ++s) {
            auto& out = result_.suppliers[s];
            out.volume = ledger_.supplier_volume(SupplierIndex{s});
            out.commitment = ledger_.supplier_commitment(SupplierIndex{s});
            out.utilization = utilization(out.volume, out.commitment);
            out.deviation = static_cast<double>(out.volume - out.commitment);
        }
        return std::move(result_);
    }

    const Scenario& scenario_;
    const EngineOptions& options_;
    RngPlan plan_;
    ContractBook book_;
    ComplianceLedger ledger_;
    std::vector<InventoryState> inventories_;
    std::vector<PairState> pairs_;
    std::vector<PrState> prs_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
    std::uint64_t next_sequence_ = 0;
    double now_ = 0.0;
    RunResult result_;
};

}  // namespace

RunResult run_once(const Scenario& scenario, std::uint64_t run_index, std::uint64_t master_seed,
                   const EngineOptions& options) {
    return Simulation(scenario, run_index, master_seed, options).run();
}

BatchError::BatchError(std::uint64_t run_index, const std::string& what)
    : std::runtime_error("run " + std::to_string(run_index) + ": " + what), run_index_(run_index) {}

BatchResult run_batch(const Scenario& scenario, std::size_t n_runs, std::uint64_t master_seed,
                      std::size_t parallelism, const EngineOptions& options) {
    if (n_runs == 0) throw std::invalid_argument("n_runs must be at least 1");
    BatchResult batch;
    batch.runs.resize(n_runs);
    std::vector<std::exception_ptr> errors(n_runs);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (std::size_t i = next++; i < n_runs && !failed; i = next++) {
            try {
                batch.runs[i] = run_once(scenario, i, master_seed, options);
            } catch (...) {
                errors[i] = std::current_exception();
                failed = true;
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, n_runs);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < n_runs; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw BatchError(i, e.what());
        }
    }
    return batch;
}

std::vector<std::string> audit_event_log(const EventLog& log, double horizon) {
    std::vector<std::string> violations;
    auto fail = [&](std::string msg) { violations.push_back(std::move(msg)); };

    struct Lifecycle {
        std::optional<double> generated, handled, ordered;
        std::size_t handlings = 0, orders = 0;
        std::vector<SupplierIndex> expected;
        std::map<std::size_t, std::size_t> responses;  // supplier -> count
        double last_response = 0.0;
    };
    std::map<std::size_t, Lifecycle> prs;
    double clock = -std::numeric_limits<double>::infinity();
    std::size_t terminations = 0;

    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& e = log[i];
        const auto where = "event " + std::to_string(i) + " (" + to_string(e.kind) + ")";
        if (e.time < clock) fail(where + ": clock moved backwards");
        clock = std::max(clock, e.time);
        if (e.time > horizon) fail(where + ": executed after the horizon");
        if (terminations > 0) fail(where + ": executed after termination");
        if (e.kind == EventKind::Termination) {
            ++terminations;
            continue;
        }
        if (!e.pr) {
            fail(where + ": missing requisition id");
            continue;
        }
        auto& lc = prs[*e.pr];
        switch (e.kind) {
            case EventKind::PRGeneration:
                if (lc.generated) fail(where + ": requisition generated twice");
                lc.generated = e.time;
                break;
            case EventKind::PRHandling:
                ++lc.handlings;
                if (!lc.generated || e.time < *lc.generated) fail(where + ": handling before generation");
                lc.handled = e.time;
                if (const auto* h = std::get_if<HandlingRecord>(&e.payload)) lc.expected = h->rfq_suppliers;
                break;
            case EventKind::RFQResponse:
                if (!lc.handled || e.time < *lc.handled) fail(where + ": response before handling");
                if (!e.supplier) {
                    fail(where + ": response without supplier");
                } else {
                    if (std::find(lc.expected.begin(), lc.expected.end(), *e.supplier) == lc.expected.end()) {
                        fail(where + ": response from a supplier that was not asked");
                    }
                    ++lc.responses[e.supplier->value];
                }
                lc.last_response = std::max(lc.last_response, e.time);
                break;
            case EventKind::POGeneration:
                ++lc.orders;
                if (!lc.handled || e.time < *lc.handled) fail(where + ": order before handling");
                if (lc.responses.size() != lc.expected.size()) fail(where + ": order before all quotes arrived");
                if (!lc.responses.empty() && e.time < lc.last_response) fail(where + ": order before last response");
                lc.ordered = e.time;
                break;
            case EventKind::Termination: break;
        }
    }
    if (terminations != 1) fail("log must contain exactly one termination, found " + std::to_string(terminations));
    if (!log.empty() && log.back().kind != EventKind::Termination) fail("termination is not the last event");

    std::size_t n_pr = 0, n_hl = 0, n_po = 0;
    for (const auto& [id, lc] : prs) {
        const auto who = "requisition " + std::to_string(id);
        if (!lc.generated) fail(who + ": events without generation");
        if (lc.handlings > 1) fail(who + ": handled more than once");
        if (lc.orders > 1) fail(who + ": ordered more than once");
        for (const auto& [s, count] : lc.responses) {
            if (count != 1) fail(who + ": supplier " + std::to_string(s) + " responded " + std::to_string(count) + " times");
        }
        n_pr += lc.generated ? 1 : 0;
        n_hl += lc.handlings > 0 ? 1 : 0;
        n_po += lc.orders > 0 ? 1 : 0;
    }
    if (!(n_po <= n_hl && n_hl <= n_pr)) fail("counting processes out of order: N_PO <= N_HL <= N_PR violated");
    return violations;
}

}  // namespace rto
