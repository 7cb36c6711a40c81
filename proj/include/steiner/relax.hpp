#pragma once

#include "steiner/core.hpp"

namespace steiner {

// A complete-graph rewrite of an instance: every originally missing edge
// carries the big-M weight, so any tree that uses one costs at least big_m.
struct RelaxedInstance {
    ProblemInstance instance;
    Weight big_m = 1;
};

// big_m = 1 + sum of all finite weights; each unordered pair counts once on
// undirected instances, each ordered pair once on directed ones. With no
// finite off-diagonal weight the sum is empty and big_m defaults to 1.
inline RelaxedInstance relax(const ProblemInstance& inst) {
    inst.validate();
    const int n = inst.n();
    unsigned __int128 sum = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = inst.directed ? 0 : i + 1; j < n; ++j) {
            if (i == j) continue;
            Weight w = inst.graph.at(i, j);
            if (w != kAbsent) sum += w;
        }
    }
    if (sum >= static_cast<unsigned __int128>(kAbsent))
        throw OverflowError("weight sum exceeds the integer range; rescale the instance");
    const Weight big_m = static_cast<Weight>(sum) + 1;

    RelaxedInstance rel{inst, big_m};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !rel.instance.graph.finite(i, j)) rel.instance.graph.set(i, j, big_m);
    return rel;
}

// Threshold reading of a solver result on the relaxed instance: a value
// below big_m used no placeholder edge and is the true optimum; anything
// else means the original instance is infeasible.
inline SolveOutcome interpret(Weight x, Weight big_m) {
    if (x < big_m) return SolveOutcome::optimal(x);
    return SolveOutcome::fail();
}

}  // namespace steiner
