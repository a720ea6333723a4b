#include "hmmsprt/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "hmmsprt/errors.hpp"
#include "hmmsprt/lp.hpp"

namespace hmmsprt {

bool are_equivalent(const Hmm& h, const Dist& pi1, const Dist& pi2) {
    check_dist(h, pi1);
    check_dist(h, pi2);
    auto basis = forward_space(h);
    RatVector diff(h.num_states());
    for (std::size_t q = 0; q < h.num_states(); ++q) diff[q] = pi1[q] - pi2[q];
    for (const auto& b : basis)
        if (dot(diff, b) != 0) return false;
    return true;
}

namespace {

std::vector<int> mask_states(std::uint64_t mask, std::size_t n) {
    std::vector<int> out;
    for (std::size_t q = 0; q < n; ++q)
        if (mask >> q & 1) out.push_back(static_cast<int>(q));
    return out;
}

// Do nonzero sub-beliefs xi1 <= (mass on S), xi2 <= (mass on V) exist
// with xi1 trace-equivalent to xi2? Support-determined, so uniform
// carriers suffice; decided exactly as an LP over the forward space.
bool overlap_feasible(const std::vector<RatVector>& basis, std::size_t n,
                      std::uint64_t s, std::uint64_t v) {
    if (s & v) return true;  // a shared state is already a witness
    std::vector<int> sq = mask_states(s, n);
    std::vector<int> vq = mask_states(v, n);
    std::size_t vars = sq.size() + vq.size();
    RatMatrix a(basis.size() + 1, vars);
    RatVector b(basis.size() + 1);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        for (std::size_t i = 0; i < sq.size(); ++i) a.at(k, i) = basis[k][sq[i]];
        for (std::size_t j = 0; j < vq.size(); ++j)
            a.at(k, sq.size() + j) = -basis[k][vq[j]];
    }
    // normalize xi1 to unit mass; equivalence forces the same for xi2
    for (std::size_t i = 0; i < sq.size(); ++i) a.at(basis.size(), i) = 1;
    b[basis.size()] = 1;
    return lp_feasible(a, b);
}

}  // namespace

DistinguishabilityVerdict distinguishability_masks(const Hmm& h, std::uint64_t s1,
                                                   std::uint64_t s2,
                                                   std::size_t budget) {
    require_mask_capacity(h);
    if (budget < 1) throw Error("distinguishability budget must be >= 1");
    auto basis = forward_space(h);
    std::size_t n = h.num_states();

    struct NodeInfo {
        int parent;
        int letter;
    };
    std::map<std::pair<std::uint64_t, std::uint64_t>, int> seen;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    std::vector<NodeInfo> info;
    std::deque<int> frontier;

    auto push = [&](std::uint64_t s, std::uint64_t v, int parent, int letter) {
        auto key = std::make_pair(s, v);
        if (seen.count(key)) return;
        seen[key] = static_cast<int>(pairs.size());
        pairs.push_back(key);
        info.push_back({parent, letter});
        frontier.push_back(static_cast<int>(pairs.size()) - 1);
    };

    auto word_to = [&](int idx) {
        Word w;
        for (int at = idx; info[at].parent != -1; at = info[at].parent)
            w.push_back(info[at].letter);
        std::reverse(w.begin(), w.end());
        return w;
    };

    DistinguishabilityVerdict verdict;
    push(s1, s2, -1, -1);
    while (!frontier.empty()) {
        if (verdict.explored >= budget) {
            verdict.kind = Distinguishability::Unknown;
            return verdict;
        }
        int idx = frontier.front();
        frontier.pop_front();
        ++verdict.explored;
        auto [s, v] = pairs[idx];
        if (overlap_feasible(basis, n, s, v)) {
            verdict.kind = Distinguishability::NotDistinguishable;
            verdict.witness = word_to(idx);
            return verdict;
        }
        for (std::size_t a = 0; a < h.num_letters(); ++a) {
            std::uint64_t v2 = support_step(h, v, static_cast<int>(a));
            if (v2 == 0) continue;  // impossible under pi2, measure zero
            std::uint64_t s2next = support_step(h, s, static_cast<int>(a));
            if (s2next == 0) continue;  // likelihood hit zero; no witness below
            push(s2next, v2, idx, static_cast<int>(a));
        }
    }
    verdict.kind = Distinguishability::Distinguishable;
    return verdict;
}

DistinguishabilityVerdict distinguishability(const Hmm& h, const Dist& pi1,
                                             const Dist& pi2, std::size_t budget) {
    check_dist(h, pi1);
    check_dist(h, pi2);
    auto verdict =
        distinguishability_masks(h, support_mask(pi1), support_mask(pi2), budget);
    if (verdict.kind == Distinguishability::NotDistinguishable) {
        // annotate the witness with the stronger property when it holds
        RatVector x = pi1, y = pi2;
        for (int a : verdict.witness) {
            x = vec_mat(x, h.psi[a]);
            y = vec_mat(y, h.psi[a]);
        }
        Rational nx = l1_norm(x), ny = l1_norm(y);
        if (nx > 0 && ny > 0) {
            for (auto& e : x) e /= nx;
            for (auto& e : y) e /= ny;
            verdict.witness_conditionals_equivalent = are_equivalent(h, x, y);
        }
    }
    return verdict;
}

Rational tv_min_mass(const Hmm& h, const Dist& pi1, const Dist& pi2,
                     std::size_t n, std::size_t word_cap) {
    check_dist(h, pi1);
    check_dist(h, pi2);
    double words = 1;
    for (std::size_t i = 0; i < n; ++i) {
        words *= static_cast<double>(h.num_letters());
        if (words > static_cast<double>(word_cap))
            throw CapExceeded("|alphabet|^n exceeds the enumeration cap");
    }
    Rational total;
    // DFS over words; a branch where either mass died contributes 0.
    struct Frame {
        RatVector x, y;
        std::size_t depth;
    };
    std::vector<Frame> stack{{pi1, pi2, 0}};
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.depth == n) {
            Rational nx = l1_norm(f.x), ny = l1_norm(f.y);
            total += std::min(nx, ny);
            continue;
        }
        for (std::size_t a = 0; a < h.num_letters(); ++a) {
            RatVector x = vec_mat(f.x, h.psi[a]);
            RatVector y = vec_mat(f.y, h.psi[a]);
            if (l1_norm(x) == 0 || l1_norm(y) == 0) continue;
            stack.push_back({std::move(x), std::move(y), f.depth + 1});
        }
    }
    return total;
}

}  // namespace hmmsprt
