#include "websample/frozen_adjacency.hpp"

#include <ostream>
#include <string>

namespace websample {

AdjacencyRecord make_adjacency_record(const Environment& env, NodeId node, std::uint64_t step) {
    AdjacencyRecord r;
    const auto out = env.graph().out(node);
    r.outlinks.assign(out.begin(), out.end());
    r.inlinks = env.retrieve_inlinks(node);
    r.frozen_at_step = step;
    return r;
}

FrozenAdjacency::FrozenAdjacency(std::size_t node_count)
    : node_count_(node_count), slots_(new std::atomic<AdjacencyRecord*>[node_count]) {
    for (std::size_t i = 0; i < node_count; ++i) slots_[i].store(nullptr, std::memory_order_relaxed);
}

FrozenAdjacency::~FrozenAdjacency() {
    for (std::size_t i = 0; i < node_count_; ++i) delete slots_[i].load(std::memory_order_relaxed);
}

const AdjacencyRecord& FrozenAdjacency::freeze(const Environment& env, NodeId node, std::uint64_t step) {
    if (node >= node_count_) throw std::out_of_range("node id " + std::to_string(node));
    if (const auto* existing = slots_[node].load(std::memory_order_acquire)) return *existing;

    auto fresh = std::make_unique<AdjacencyRecord>(make_adjacency_record(env, node, step));
    AdjacencyRecord* expected = nullptr;
    if (slots_[node].compare_exchange_strong(expected, fresh.get(), std::memory_order_acq_rel)) {
        registered_.fetch_add(1, std::memory_order_relaxed);
        return *fresh.release();
    }
    return *expected;
}

const AdjacencyRecord* FrozenAdjacency::find(NodeId node) const {
    if (node >= node_count_) return nullptr;
    return slots_[node].load(std::memory_order_acquire);
}

const AdjacencyRecord& FrozenAdjacency::at(NodeId node) const {
    const auto* r = find(node);
    if (r == nullptr) throw ConfigError("node " + std::to_string(node) + " has no frozen adjacency");
    return *r;
}

void FrozenAdjacency::write_snapshot(std::ostream& out) const {
    const auto csv = [&](const std::vector<NodeId>& ids) {
        for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
    };
    for (std::size_t v = 0; v < node_count_; ++v) {
        const auto* r = find(static_cast<NodeId>(v));
        if (r == nullptr) continue;
        out << "F " << v << " out=";
        csv(r->outlinks);
        out << " in=";
        csv(r->inlinks);
        out << " step=" << r->frozen_at_step << '\n';
    }
}

std::uint64_t modified_degree(const AdjacencyRecord& record, Regularization reg, std::uint64_t max) {
    const std::uint64_t with_selfloop = record.size() + 1;
    if (reg == Regularization::A) return with_selfloop;
    if (with_selfloop > max) {
        throw ConfigError("max=" + std::to_string(max) + " is below modified degree " + std::to_string(with_selfloop));
    }
    return max;
}

} // namespace websample
