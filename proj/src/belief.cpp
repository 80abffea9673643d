#include "calp/belief.hpp"

#include "calp/error.hpp"
#include "calp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace calp {

FrameOfDiscernment::FrameOfDiscernment(std::string domain_id, std::vector<std::string> elements)
    : id_(std::move(domain_id)), elements_(std::move(elements)) {
    if (elements_.empty())
        throw DomainError("domain " + id_ + ": frame of discernment is empty");
    if (elements_.size() > max_frame_size)
        throw DomainError("domain " + id_ + ": frame has " + std::to_string(elements_.size()) +
                          " elements, limit is " + std::to_string(max_frame_size));
    std::set<std::string_view> seen;
    for (const auto& e : elements_)
        if (!seen.insert(e).second)
            throw DomainError("domain " + id_ + ": duplicate frame element " + e);
}

int FrameOfDiscernment::index_of(std::string_view name) const {
    auto it = std::find(elements_.begin(), elements_.end(), name);
    return it == elements_.end() ? -1 : static_cast<int>(it - elements_.begin());
}

EventMask FrameOfDiscernment::event(std::span<const std::string> names) const {
    std::uint32_t bits = 0;
    for (const auto& n : names) {
        int i = index_of(n);
        if (i < 0)
            throw DomainError("domain " + id_ + " has no element " + n);
        bits |= 1u << i;
    }
    return EventMask(bits);
}

std::vector<std::string> FrameOfDiscernment::names(EventMask event) const {
    std::vector<std::string> out;
    for (unsigned i = 0; i < size(); ++i)
        if (event.contains(i))
            out.push_back(elements_[i]);
    return out;
}

BeliefDomain::BeliefDomain(FrameOfDiscernment frame, std::vector<FocalSet> focal_sets)
    : frame_(std::move(frame)), focal_(std::move(focal_sets)) {
    const std::string& id = frame_.domain_id();
    std::sort(focal_.begin(), focal_.end(), [](const FocalSet& a, const FocalSet& b) { return a.event < b.event; });
    double total = 0.0;
    for (std::size_t i = 0; i < focal_.size(); ++i) {
        const FocalSet& f = focal_[i];
        if (f.event.empty())
            throw DomainError("domain " + id + ": mass assigned to the empty set");
        if (!frame_.contains(f.event))
            throw DomainError("domain " + id + ": focal set outside the frame");
        if (i > 0 && focal_[i - 1].event == f.event)
            throw DomainError("domain " + id + ": focal set assigned twice");
        if (!(f.mass > 0.0) || f.mass > 1.0 + mass_tolerance)
            throw DomainError("domain " + id + ": mass " + std::to_string(f.mass) + " not in (0,1]");
        total += f.mass;
    }
    if (std::fabs(total - 1.0) > mass_tolerance)
        throw DomainError("domain " + id + ": masses sum to " + std::to_string(total) + ", not 1");
    for (auto& f : focal_)
        f.mass /= total;

    belief_table_.assign(std::size_t{1} << frame_.size(), 0.0);
    for (const auto& f : focal_)
        belief_table_[f.event.bits()] = f.mass;
    kernels::subset_sum(belief_table_, frame_.size());
}

void BeliefDomain::check(EventMask x) const {
    if (!frame_.contains(x))
        throw DomainError("event is not a subset of the frame of domain " + id());
}

double BeliefDomain::belief(EventMask x) const {
    check(x);
    return belief_table_[x.bits()];
}

double BeliefDomain::plausibility(EventMask x) const {
    check(x);
    return 1.0 - belief_table_[frame_.complement(x).bits()];
}

EventMask BeliefDomain::complement(EventMask x) const {
    check(x);
    return frame_.complement(x);
}

bool BeliefDomain::straddles(EventMask x) const {
    return std::any_of(focal_.begin(), focal_.end(),
                       [&](const FocalSet& f) { return !f.event.subset_of(x) && !f.event.disjoint(x); });
}

double belief(const BeliefDomain& dom, EventMask x) { return dom.belief(x); }
double plausibility(const BeliefDomain& dom, EventMask x) { return dom.plausibility(x); }
EventMask complement(const BeliefDomain& dom, EventMask x) { return dom.complement(x); }

std::vector<BeliefFact> facts_of(std::string_view domain, std::span<const BeliefFact> facts) {
    std::vector<BeliefFact> out;
    for (const auto& f : facts)
        if (f.domain == domain)
            out.push_back(f);
    return out;
}

std::vector<BeliefFact> canonicalize(std::span<const BeliefFact> facts) {
    std::map<std::string, EventMask, std::less<>> acc;
    for (const auto& f : facts) {
        auto [it, fresh] = acc.try_emplace(f.domain, f.event);
        if (!fresh)
            it->second = it->second & f.event;
    }
    std::vector<BeliefFact> out;
    out.reserve(acc.size());
    for (auto& [d, e] : acc)
        out.push_back({d, e});
    return out;
}

bool is_consistent(std::span<const BeliefFact> facts) {
    auto canon = canonicalize(facts);
    return std::none_of(canon.begin(), canon.end(), [](const BeliefFact& f) { return f.event.empty(); });
}

std::vector<BeliefFact> complete(std::span<const BeliefFact> facts, const DomainMap& domains) {
    std::set<BeliefFact> out;
    for (const auto& f : facts) {
        auto it = domains.find(f.domain);
        if (it == domains.end())
            throw DomainError("unknown belief domain " + f.domain);
        const EventMask full = it->second.frame().full();
        if (!f.event.subset_of(full))
            throw DomainError("event is not a subset of the frame of domain " + f.domain);
        // Supersets of e within full are e | s for every s subset of (full - e).
        const std::uint32_t free = (full - f.event).bits();
        std::uint32_t s = 0;
        do {
            out.insert({f.domain, EventMask(f.event.bits() | s)});
            s = (s - free) & free;
        } while (s != 0);
    }
    return {out.begin(), out.end()};
}

CapacityInterval bp_upper(const BeliefDomain& dom, std::span<const BeliefFact> facts) {
    bool any = false;
    EventMask u;
    for (const auto& f : facts) {
        if (f.domain != dom.id())
            continue;
        any = true;
        u = u | f.event;
    }
    if (!any)
        return CapacityInterval::one();
    return dom.capacity(u);
}

} // namespace calp
